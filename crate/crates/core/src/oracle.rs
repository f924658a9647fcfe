//! Coordinate checks in the hyperboloid model.
//!
//! Triangles, pentagons and the ring curves are built from explicit points
//! on `x0² − x1² − x2² = 1` and re-measured with the Minkowski form, so the
//! closed-form identities elsewhere in the crate are checked against data
//! that never consults them.

use crate::hyptrig::{RightPentagon, RightTriangle};
use crate::ring_solver::{self, RingError};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("infeasible construction: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

pub type HypPoint = Vector3<f64>;

/// Minkowski form `x0 y0 − x1 y1 − x2 y2`.
pub fn minkowski(p: &Vector3<f64>, q: &Vector3<f64>) -> f64 {
    p[0] * q[0] - p[1] * q[1] - p[2] * q[2]
}

/// The vector `w` with `⟨w, x⟩ = det(u, v, x)`; orthogonal to `u` and `v`.
fn cross(u: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
    let c = u.cross(v);
    Vector3::new(c[0], -c[1], -c[2])
}

fn unit_spacelike(v: Vector3<f64>) -> Option<Vector3<f64>> {
    let q = -minkowski(&v, &v);
    (q > 0.0).then(|| v / q.sqrt())
}

/// Projects a timelike vector onto the upper sheet.
fn to_sheet(v: Vector3<f64>) -> Option<HypPoint> {
    let q = minkowski(&v, &v);
    (q > 0.0).then(|| {
        let p = v / q.sqrt();
        if p[0] < 0.0 {
            -p
        } else {
            p
        }
    })
}

pub fn origin() -> HypPoint {
    Vector3::new(1.0, 0.0, 0.0)
}

/// Distance via `2 asinh(|p − q| / 2)`, stable for close points.
pub fn distance(p: &HypPoint, q: &HypPoint) -> f64 {
    let d = p - q;
    2.0 * ((-minkowski(&d, &d)).max(0.0).sqrt() / 2.0).asinh()
}

/// Point at distance `d` from `p` along the unit tangent `v`.
pub fn exp_map(p: &HypPoint, v: &Vector3<f64>, d: f64) -> HypPoint {
    let q = p * d.cosh() + v * d.sinh();
    to_sheet(q).unwrap_or(q)
}

/// Unit tangent at `p` pointing toward `q`.
fn toward(p: &HypPoint, q: &HypPoint) -> Vector3<f64> {
    let v = q - p * minkowski(p, q);
    unit_spacelike(v).unwrap_or_else(Vector3::zeros)
}

/// Interior angle at `p` between the directions to `q` and `r`.
pub fn angle_at(p: &HypPoint, q: &HypPoint, r: &HypPoint) -> f64 {
    let (u, v) = (toward(p, q), toward(p, r));
    (-minkowski(&u, &v)).clamp(-1.0, 1.0).acos()
}

/// Triangle area from `tan(Δ/2) = |det(p,q,r)| / (1 + ⟨p,q⟩ + ⟨q,r⟩ + ⟨r,p⟩)`.
pub fn triangle_area(p: &HypPoint, q: &HypPoint, r: &HypPoint) -> f64 {
    let det = p.dot(&q.cross(r)).abs();
    let den = 1.0 + minkowski(p, q) + minkowski(q, r) + minkowski(r, p);
    2.0 * det.atan2(den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredTriangle {
    pub hyp: f64,
    /// Angle opposite `leg_a`.
    pub alpha: f64,
    /// Angle opposite `leg_b`.
    pub beta: f64,
}

/// Right angle at the origin, legs along the two spatial axes.
pub fn measure_triangle(leg_a: f64, leg_b: f64) -> MeasuredTriangle {
    let o = origin();
    let a = exp_map(&o, &Vector3::new(0.0, 1.0, 0.0), leg_a);
    let b = exp_map(&o, &Vector3::new(0.0, 0.0, 1.0), leg_b);
    MeasuredTriangle { hyp: distance(&a, &b), alpha: angle_at(&b, &o, &a), beta: angle_at(&a, &o, &b) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredPentagon {
    /// Side opposite the corner where `a` and `b` meet.
    pub opposite: f64,
    /// Side adjacent to `b` and the opposite side.
    pub side_alpha: f64,
    /// Side adjacent to `a` and the opposite side.
    pub side_beta: f64,
    /// Interior angles in cyclic order starting at the `a`–`b` corner.
    pub angles: [f64; 5],
    /// Area by triangulation.
    pub area: f64,
}

/// Sides `a`, `b` leave the origin at a right angle; perpendiculars are
/// raised at their far ends and joined by their common perpendicular.
pub fn measure_pentagon(side_a: f64, side_b: f64) -> Result<MeasuredPentagon, OracleError> {
    let o = origin();
    let pa = exp_map(&o, &Vector3::new(0.0, 1.0, 0.0), side_a);
    let pb = exp_map(&o, &Vector3::new(0.0, 0.0, 1.0), side_b);
    // the perpendicular at an endpoint has the incoming tangent as normal
    let n1 = -toward(&pa, &o);
    let n2 = -toward(&pb, &o);
    let infeasible = || OracleError::Infeasible(format!("perpendiculars at ({side_a}, {side_b}) are not ultraparallel"));
    let m = unit_spacelike(cross(&n1, &n2)).ok_or_else(infeasible)?;
    let f1 = to_sheet(cross(&n1, &m)).ok_or_else(infeasible)?;
    let f2 = to_sheet(cross(&n2, &m)).ok_or_else(infeasible)?;
    let angles = [
        angle_at(&o, &pa, &pb),
        angle_at(&pa, &o, &f1),
        angle_at(&f1, &pa, &f2),
        angle_at(&f2, &f1, &pb),
        angle_at(&pb, &f2, &o),
    ];
    let area = triangle_area(&o, &pa, &f1) + triangle_area(&o, &f1, &f2) + triangle_area(&o, &f2, &pb);
    Ok(MeasuredPentagon {
        opposite: distance(&f1, &f2),
        side_alpha: distance(&pb, &f2),
        side_beta: distance(&pa, &f1),
        angles,
        area,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussBonnet {
    pub angle_sum: f64,
    pub area: f64,
    /// `(5 − 2)π − angle_sum − area`.
    pub defect: f64,
}

pub fn gauss_bonnet(p: &MeasuredPentagon) -> GaussBonnet {
    let angle_sum: f64 = p.angles.iter().sum();
    GaussBonnet { angle_sum, area: p.area, defect: 3.0 * PI - angle_sum - p.area }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredRing {
    pub n: u64,
    pub t: f64,
    pub u: f64,
    pub sigma: f64,
    pub e_meas: f64,
    pub a_meas: f64,
    pub c_meas: f64,
}

/// Finds the seam pentagon with two `t` sides by bisection on `u`, then
/// measures `e = 4nu`, the a-curve from the isosceles triangle over `e/2`
/// and the c-curve from the pentagon with two sides `e/4`.
pub fn measure_ring_curves(n: u64, t: f64) -> Result<MeasuredRing, OracleError> {
    if n == 0 || !(t > 0.0 && t.is_finite()) {
        return Err(OracleError::Infeasible(format!("n = {n}, t = {t}")));
    }
    // the t side shrinks as u grows; infeasible u counts as "t too long"
    let t_of = |u: f64| measure_pentagon(u, u).map(|p| p.side_beta).unwrap_or(f64::INFINITY);
    let (mut lo, mut hi) = (1f64.asinh(), 1.0);
    while t_of(hi) > t {
        hi *= 2.0;
        if hi > 700.0 {
            return Err(OracleError::Infeasible(format!("no seam pentagon for t = {t}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if t_of(mid) > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    let seam = measure_pentagon(u, u)?;
    let e = 4.0 * n as f64 * u;
    let o = origin();
    let end = exp_map(&o, &Vector3::new(0.0, 1.0, 0.0), e / 4.0);
    let apex = exp_map(&o, &Vector3::new(0.0, 0.0, 1.0), t);
    let a_meas = 2.0 * distance(&apex, &end);
    let c_meas = 2.0 * measure_pentagon(e / 4.0, e / 4.0)?.opposite;
    Ok(MeasuredRing { n, t, u, sigma: seam.opposite, e_meas: e, a_meas, c_meas })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomReport {
    pub samples: usize,
    pub seed: u64,
    pub max_hyp_err: f64,
    pub max_angle_err: f64,
    pub feasible_pentagons: usize,
    pub max_pentagon_err: f64,
    /// Samples where exactly one side reported infeasibility.
    pub feasibility_disagreements: usize,
    pub max_gauss_bonnet_defect: f64,
}

/// Random `(a, b) ∈ [0.2, 5]²` compared against the closed forms.
pub fn random_checks(samples: usize, seed: u64) -> RandomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = RandomReport {
        samples,
        seed,
        max_hyp_err: 0.0,
        max_angle_err: 0.0,
        feasible_pentagons: 0,
        max_pentagon_err: 0.0,
        feasibility_disagreements: 0,
        max_gauss_bonnet_defect: 0.0,
    };
    for _ in 0..samples {
        let a = rng.gen_range(0.2..5.0);
        let b = rng.gen_range(0.2..5.0);
        let m = measure_triangle(a, b);
        if let Ok(t) = RightTriangle::from_legs(a, b) {
            r.max_hyp_err = r.max_hyp_err.max((m.hyp - t.hyp_c).abs());
            r.max_angle_err = r.max_angle_err.max((m.alpha - t.angle_alpha).abs()).max((m.beta - t.angle_beta).abs());
        }
        match (measure_pentagon(a, b), RightPentagon::from_sides(a, b)) {
            (Ok(p), Ok(q)) => {
                r.feasible_pentagons += 1;
                let err = (p.opposite - q.side_c)
                    .abs()
                    .max((p.side_alpha - q.side_alpha).abs())
                    .max((p.side_beta - q.side_beta).abs());
                r.max_pentagon_err = r.max_pentagon_err.max(err);
                r.max_gauss_bonnet_defect = r.max_gauss_bonnet_defect.max(gauss_bonnet(&p).defect.abs());
            }
            (Err(_), Err(_)) => {}
            _ => r.feasibility_disagreements += 1,
        }
    }
    r
}

/// `|a_meas − c_meas|` at `t_n` and the deviation from the closed forms.
pub fn ring_check(n: u64) -> Result<(MeasuredRing, f64), OracleError> {
    let tn = ring_solver::solve_tn(n)?;
    let m = measure_ring_curves(n, tn.t_n)?;
    let g = &tn.geometry;
    let dev = (m.a_meas - g.a_len)
        .abs()
        .max((m.c_meas - g.c_len).abs())
        .max((m.e_meas - g.e_len).abs())
        .max((m.sigma - g.sigma).abs());
    Ok((m, dev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn points_stay_on_sheet() {
        let p = exp_map(&origin(), &Vector3::new(0.0, 0.6, 0.8), 3.0);
        assert_abs_diff_eq!(minkowski(&p, &p), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(distance(&origin(), &p), 3.0, epsilon = 1e-12);
        assert_eq!(distance(&p, &origin()), distance(&origin(), &p));
    }

    #[test]
    fn triangle_examples() {
        let m = measure_triangle(1.0, 1.0);
        assert_abs_diff_eq!(m.hyp, 1.513_374_007, epsilon = 1e-8);
        let t1 = (1.0 + 2f64.sqrt()).acosh() / 2.0;
        let e4 = ring_solver::ring_geometry(1, t1).unwrap().e_len / 4.0;
        assert_abs_diff_eq!(measure_triangle(t1, e4).hyp, (1.0 + 2f64.sqrt()).acosh(), epsilon = 1e-9);
        assert_eq!(measure_triangle(0.3, 2.0).hyp, measure_triangle(2.0, 0.3).hyp);
    }

    #[test]
    fn pentagon_examples() {
        let p = measure_pentagon(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.opposite, 0.847_450_581, epsilon = 1e-8);
        for a in p.angles {
            assert_abs_diff_eq!(a, FRAC_PI_2, epsilon = 1e-9);
        }
        let gb = gauss_bonnet(&p);
        assert!(gb.area > 0.0);
        assert_abs_diff_eq!(gb.defect, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(gb.area, FRAC_PI_2, epsilon = 1e-9);
        assert!(measure_pentagon(0.5, 0.5).is_err());
        let g2 = ring_solver::solve_tn(2).unwrap().geometry;
        let q = measure_pentagon(g2.e_len / 4.0, g2.e_len / 4.0).unwrap();
        assert_abs_diff_eq!(q.opposite, 2.954_519_279, epsilon = 1e-8);
    }

    #[test]
    fn random_agreement() {
        let r = random_checks(1000, 20);
        assert!(r.max_hyp_err < 1e-9, "{r:?}");
        assert!(r.max_angle_err < 1e-9, "{r:?}");
        assert!(r.max_pentagon_err < 1e-9, "{r:?}");
        assert_eq!(r.feasibility_disagreements, 0);
        assert!(r.feasible_pentagons > 500);
        assert!(r.max_gauss_bonnet_defect < 1e-9);
    }

    #[test]
    fn ring_curves_at_tn() {
        for n in 1..=6 {
            let (m, dev) = ring_check(n).unwrap();
            assert!((m.a_meas - m.c_meas).abs() < 1e-6, "n={n}: {m:?}");
            assert!(dev < 1e-9, "n={n}: dev {dev}");
        }
        let (m1, _) = ring_check(1).unwrap();
        assert_abs_diff_eq!(m1.a_meas, 2.0 * (1.0 + 2f64.sqrt()).acosh(), epsilon = 1e-9);
        let (m3, _) = ring_check(3).unwrap();
        assert_abs_diff_eq!(m3.a_meas, 9.256_204_681, epsilon = 1e-8);
        assert_abs_diff_eq!(ring_check(2).unwrap().0.sigma, 0.503_760_325, epsilon = 1e-8);
    }
}
