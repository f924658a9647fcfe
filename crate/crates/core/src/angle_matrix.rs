//! Intersection angles of the `a`- and `b`-curves in `R(n, t_n)` and the
//! invertibility certificate for the twist-derivative matrix.
//!
//! `θ` is the angle between `e` and any `a_j`, read off the altitude
//! triangle with legs `t_n`, `e/4` and hypotenuse `a/2`:
//! `sin θ = sinh t_n / sinh(a/2)`. Then
//! `cos φ_j = 2 sin²θ cosh²((n+1−j) e/4n) − 1`.
//!
//! `A` is the circulant matrix with first row `cos φ_1, …, cos φ_{2n}` and
//! `M = blockdiag(A, −Aᵀ)`.

use crate::hyptrig::{ln_cosh, ln_sinh, rt_angle_beta, HypTrigError};
use crate::ring_solver::{self, RingError};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleData {
    pub n: u64,
    pub theta: f64,
    /// `φ_1 … φ_{2n}`.
    pub phi: Vec<f64>,
    /// `cos φ_j`, evaluated directly rather than through `cos(acos(·))`.
    pub cos_phi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosineMatrix {
    pub n: u64,
    pub a: Vec<Vec<f64>>,
    pub m: Vec<Vec<f64>>,
    pub gersh_margin: f64,
    pub det_a: f64,
    pub det_m: f64,
    pub row_sum: f64,
    pub svd_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GershgorinVerdict {
    pub invertible: bool,
    pub margin: f64,
    pub row_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleInequalities {
    pub lemma_angles_slack: f64,
    pub row_sum: f64,
}

pub fn angles(n: u64) -> Result<AngleData, RingError> {
    let sol = ring_solver::solve_tn(n)?;
    let (t, u) = (sol.t_n, sol.geometry.u);
    let nn = n as i64;
    let x = n as f64 * u;
    // tan θ = tanh t / sinh(e/4)
    let theta = (t.tanh() / x.sinh()).atan();
    // With k = n+1−j: cos(φ_j/2) ∝ sinh t cosh(ku) and
    // sin²(φ_j/2) ∝ N_k = sinh²(nu) + sinh²t sinh((n−k)u) sinh((n+k)u),
    // both over sinh(a/2); this avoids the cancellation in 1 − cos².
    let mut phi = Vec::with_capacity(2 * n as usize);
    let mut cos_phi = Vec::with_capacity(2 * n as usize);
    for j in 1..=2 * nn {
        let k = nn + 1 - j;
        let mut ln_n = 2.0 * ln_sinh(x);
        if k != nn {
            let extra = 2.0 * ln_sinh(t)
                + ln_sinh((nn - k) as f64 * u)
                + ln_sinh((nn + k) as f64 * u);
            let (hi, lo) = if extra > ln_n { (extra, ln_n) } else { (ln_n, extra) };
            ln_n = hi + (lo - hi).exp().ln_1p();
        }
        let ln_r = 0.5 * ln_n - ln_sinh(t) - ln_cosh(k as f64 * u);
        let r = ln_r.exp();
        phi.push(2.0 * r.atan());
        // (1 − r²)/(1 + r²), written to stay finite for huge r
        cos_phi.push(-ln_r.tanh());
    }
    Ok(AngleData { n, theta, phi, cos_phi })
}

/// `cos φ_1` from the half-angle right triangle with leg `e/4` and angle `θ`.
///
/// For large `n` the triangle's `cos β` rounds to 1; that is read as `β = 0`.
pub fn cos_phi1_from_triangle(n: u64) -> Result<f64, RingError> {
    let sol = ring_solver::solve_tn(n)?;
    let ad = angles(n)?;
    match rt_angle_beta(sol.geometry.e_len / 4.0, ad.theta) {
        Ok(half) => Ok((2.0 * half).cos()),
        Err(HypTrigError::Infeasible { value, .. }) if (value - 1.0).abs() <= 4.0 * f64::EPSILON => Ok(1.0),
        Err(e) => Err(e.into()),
    }
}

fn circulant(first_row: &[f64]) -> DMatrix<f64> {
    let k = first_row.len();
    DMatrix::from_fn(k, k, |r, j| first_row[(j + k - r) % k])
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

fn column_margin(a: &DMatrix<f64>) -> f64 {
    // entries of A + J are cos φ + 1 ≥ 0, so no absolute values are needed
    (0..a.ncols())
        .map(|j| {
            let off: f64 = (0..a.nrows()).filter(|&i| i != j).map(|i| a[(i, j)] + 1.0).sum();
            a[(j, j)] + 1.0 - off
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn build_matrices(n: u64) -> Result<CosineMatrix, RingError> {
    let ad = angles(n)?;
    let a = circulant(&ad.cos_phi);
    let k = a.nrows();
    let mut m = DMatrix::zeros(2 * k, 2 * k);
    m.view_mut((0, 0), (k, k)).copy_from(&a);
    m.view_mut((k, k), (k, k)).copy_from(&(-a.transpose()));
    let det_a = a.clone().lu().determinant();
    let det_m = m.clone().lu().determinant();
    let svd_min = a.clone().singular_values().min();
    Ok(CosineMatrix {
        n,
        gersh_margin: column_margin(&a),
        row_sum: ad.cos_phi.iter().sum(),
        a: to_rows(&a),
        m: to_rows(&m),
        det_a,
        det_m,
        svd_min,
    })
}

/// Column diagonal dominance of `A + J`, plus the row-sum condition that
/// transfers invertibility from `A + J` to `A`.
pub fn gershgorin_certify(n: u64) -> Result<GershgorinVerdict, RingError> {
    let cm = build_matrices(n)?;
    Ok(GershgorinVerdict {
        invertible: cm.gersh_margin > 0.0 && cm.row_sum != 0.0,
        margin: cm.gersh_margin,
        row_sum: cm.row_sum,
    })
}

pub fn angle_inequalities(n: u64) -> Result<AngleInequalities, RingError> {
    let ad = angles(n)?;
    let tail: f64 = ad.cos_phi[1..].iter().map(|c| c + 1.0).sum();
    Ok(AngleInequalities {
        lemma_angles_slack: ad.cos_phi[0] + 1.0 - tail,
        row_sum: ad.cos_phi.iter().sum(),
    })
}

/// `(2 Σ_{k<n} cosh²(kx), cosh²(nx))`.
pub fn sumcosh(n: u64, x: f64) -> (f64, f64) {
    let lhs = 2.0 * (0..n).map(|k| (k as f64 * x).cosh().powi(2)).sum::<f64>();
    (lhs, (n as f64 * x).cosh().powi(2))
}

/// `(Σ_{j=2}^{2n} cosh²((n+1−j) e/4n), cosh²(e/4))` at `t_n`.
pub fn angle_lemma_sums(n: u64) -> Result<(f64, f64), RingError> {
    let g = ring_solver::solve_tn(n)?.geometry;
    let nn = n as i64;
    let lhs = (2..=2 * nn).map(|j| ((nn + 1 - j) as f64 * g.u).cosh().powi(2)).sum();
    Ok((lhs, (2.0 * ln_cosh(g.e_len / 4.0)).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_8, PI};

    const PAPER_N3: [[f64; 6]; 6] = [
        [0.961, -0.652, -0.924, -0.962, -0.924, -0.652],
        [-0.652, 0.961, -0.652, -0.924, -0.962, -0.924],
        [-0.924, -0.652, 0.961, -0.652, -0.924, -0.962],
        [-0.962, -0.924, -0.652, 0.961, -0.652, -0.924],
        [-0.924, -0.962, -0.924, -0.652, 0.961, -0.652],
        [-0.652, -0.924, -0.962, -0.924, -0.652, 0.961],
    ];

    #[test]
    fn bolza_angles() {
        let ad = angles(1).unwrap();
        assert_relative_eq!(ad.theta, FRAC_PI_8, max_relative = 1e-12);
        assert_relative_eq!(ad.phi[0], FRAC_PI_2, max_relative = 1e-12);
        assert_relative_eq!(ad.phi[1], 3.0 * PI / 4.0, max_relative = 1e-12);
    }

    #[test]
    fn angle_invariants() {
        for n in 1..=30 {
            let ad = angles(n).unwrap();
            let k = 2 * n as usize;
            assert_eq!(ad.phi.len(), k);
            assert!(ad.phi.iter().all(|&p| p > 0.0 && p < PI));
            let s2 = ad.theta.sin().powi(2);
            assert!((ad.cos_phi[n as usize] - (2.0 * s2 - 1.0)).abs() < 1e-12);
            // the displayed cosine formula, evaluated literally
            let g = ring_solver::solve_tn(n).unwrap().geometry;
            let sin_theta = (ln_sinh(g.t) - ln_sinh(g.a_len / 2.0)).exp();
            assert!((sin_theta - ad.theta.sin()).abs() < 1e-12);
            for j in 1..=k {
                let m = (n as i64 + 1 - j as i64) as f64;
                let lit = 2.0 * sin_theta.powi(2) * (m * g.e_len / (4.0 * n as f64)).cosh().powi(2) - 1.0;
                assert!((lit - ad.cos_phi[j - 1]).abs() < 1e-10, "n={n} j={j}");
            }
            assert!((ad.phi[n as usize] - (PI - 2.0 * ad.theta)).abs() < 1e-12, "n={n}");
            for j in 2..=k {
                assert!((ad.phi[j - 1] - ad.phi[k + 1 - j]).abs() < 1e-12);
            }
            let c1 = cos_phi1_from_triangle(n).unwrap();
            assert!((c1 - ad.cos_phi[0]).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn bolza_matrix() {
        let m = build_matrices(1).unwrap();
        assert!(m.a[0][0].abs() < 1e-12 && m.a[1][1].abs() < 1e-12);
        assert_relative_eq!(m.a[0][1], -FRAC_1_SQRT_2, max_relative = 1e-12);
        assert_relative_eq!(m.a[1][0], -FRAC_1_SQRT_2, max_relative = 1e-12);
        assert_relative_eq!(m.det_a, -0.5, max_relative = 1e-12);
        assert_relative_eq!(m.gersh_margin, FRAC_1_SQRT_2, max_relative = 1e-12);
        assert_relative_eq!(m.row_sum, -FRAC_1_SQRT_2, max_relative = 1e-12);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn n3_matches_displayed_matrix() {
        let m = build_matrices(3).unwrap();
        for r in 0..6 {
            for c in 0..6 {
                assert!((m.a[r][c] - PAPER_N3[r][c]).abs() < 5e-4, "({r},{c}) = {}", m.a[r][c]);
            }
        }
        // column sums of the displayed entries: 1.961 - 0.886
        assert!((m.gersh_margin - 1.075).abs() < 2e-3);
        let ai = angle_inequalities(3).unwrap();
        assert!((ai.lemma_angles_slack - 1.075).abs() < 2e-3);
    }

    #[test]
    fn matrix_structure() {
        for n in 1..=30 {
            let m = build_matrices(n).unwrap();
            let k = 2 * n as usize;
            for i in 0..k {
                for j in 0..k {
                    assert_eq!(m.a[(i + 1) % k][(j + 1) % k], m.a[i][j]);
                    assert_eq!(m.m[i][j], m.a[i][j]);
                    assert_eq!(m.m[k + i][k + j], -m.a[j][i]);
                    assert_eq!(m.m[i][k + j], 0.0);
                    assert_eq!(m.m[k + i][j], 0.0);
                }
            }
            assert!((m.det_m - m.det_a.powi(2)).abs() <= 1e-9 * m.det_a.powi(2), "n={n}");
            assert!(m.row_sum != 0.0);
            assert!(m.svd_min > 0.0);
            let v = gershgorin_certify(n).unwrap();
            assert!(v.invertible && v.margin > 0.0, "n={n}");
            assert_eq!(v.invertible, m.det_a != 0.0);
        }
    }

    #[test]
    fn angle_inequality_sweep() {
        for n in 2..=30 {
            let ai = angle_inequalities(n).unwrap();
            assert!(ai.lemma_angles_slack > 0.0 && ai.row_sum < 0.0, "n={n}");
            let (l, r) = angle_lemma_sums(n).unwrap();
            assert!(l < r, "n={n}");
        }
        assert_relative_eq!(angle_inequalities(1).unwrap().row_sum, -FRAC_1_SQRT_2, max_relative = 1e-12);
    }

    #[test]
    fn sumcosh_lemma() {
        for n in 1..=30 {
            let g = ring_solver::solve_tn(n).unwrap().geometry;
            let x = g.e_len / (4.0 * n as f64);
            // x − arccosh √2 ~ e^{−2t_n} drops below f64 resolution for large n
            assert!(x - 2f64.sqrt().acosh() > -4.0 * f64::EPSILON);
            let (l, r) = sumcosh(n, x);
            assert!(l < r, "n={n}");
        }
    }
}
