//! Lengths in the ring `R(n, t)` and the critical parameter `t_n`.
//!
//! The ring is `2n` crosses glued in a cycle; each cross is four
//! right-angled pentagons. With `t` a quarter of the boundary length:
//!
//! * `cosh σ = coth² t = sinh² u` (seam `σ`, half side `u`),
//! * `e = 4n arcsinh(coth t)`,
//! * `cosh(a/2) = cosh t cosh(e/4)`,
//! * `cosh(c/2) = sinh²(e/4)`.
//!
//! `t_n` is the unique `t` with `a(t) = c(t)`, i.e.
//! `cosh t = tanh(e/4) sinh(e/4)`. Everything is evaluated through
//! log-magnitudes so that `n` up to `10⁶` and `t` up to `10³` stay finite.

use crate::hyptrig::{self, acosh1p, asinh_exp, ln_cosh, ln_sinh};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `λ = ln(1 + √2)`.
pub const LAMBDA: f64 = 0.881_373_587_019_543;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("root not bracketed for n = {0}")]
    NotBracketed(u64),
    #[error("postcondition failed: {0}")]
    Postcondition(String),
    #[error(transparent)]
    Trig(#[from] hyptrig::HypTrigError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingGeometry {
    pub n: u64,
    pub t: f64,
    pub sigma: f64,
    /// `ln σ`; stays finite when `σ` underflows.
    pub ln_sigma: f64,
    pub u: f64,
    pub e_len: f64,
    pub a_len: f64,
    pub c_len: f64,
    pub da_dt: f64,
    pub dc_dt: f64,
    pub de_dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TnSolution {
    pub n: u64,
    pub t_n: f64,
    /// `ln(cosh t) − ln(tanh(e/4) sinh(e/4))` at the returned root.
    pub residual: f64,
    pub geometry: RingGeometry,
    pub girth_threshold: f64,
    pub ln_girth_threshold: f64,
    /// `None` once the threshold exceeds `2⁵³`.
    pub w_n: Option<u64>,
    #[serde(rename = "L_n")]
    pub l_n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GirthThreshold {
    pub threshold: f64,
    pub ln_threshold: f64,
    pub w_n: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnCheck {
    pub s_n: f64,
    pub a_at_sn: f64,
    pub c_at_sn: f64,
}

// e'(t)/(4n) = -1 / (sinh t · sqrt(cosh 2t))
fn ln_neg_de_unit(t: f64) -> f64 {
    -ln_sinh(t) - 0.5 * ln_cosh(2.0 * t)
}

fn ln_coth(t: f64) -> f64 {
    if t < 0.5 {
        -t.tanh().ln()
    } else {
        2.0 * (-2.0 * t).exp().atanh()
    }
}

fn half_pentagon_side(t: f64) -> f64 {
    // u = arcsinh(coth t)
    asinh_exp(ln_coth(t))
}

fn ln_sigma_of(t: f64) -> f64 {
    // σ = arccosh(1 + csch² t)
    let ln_x = -2.0 * ln_sinh(t);
    if ln_x < -40.0 {
        // arccosh(1+x) = sqrt(2x)(1 - x/12 + ...)
        let x = ln_x.exp();
        0.5 * (std::f64::consts::LN_2 + ln_x) + (-x / 12.0).ln_1p()
    } else {
        acosh1p(ln_x.exp()).ln()
    }
}

fn check_n(n: u64) -> Result<(), RingError> {
    if n == 0 {
        Err(RingError::InvalidInput("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// All lengths and first derivatives of the ring at parameter `t`.
pub fn ring_geometry(n: u64, t: f64) -> Result<RingGeometry, RingError> {
    check_n(n)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(RingError::InvalidInput(format!("t must be finite and positive, got {t}")));
    }
    let nf = n as f64;
    let u = half_pentagon_side(t);
    let ln_sigma = ln_sigma_of(t);
    let e_len = 4.0 * nf * u;
    let x = nf * u;
    let a_half = hyptrig::rt_hypotenuse(t, x)?;
    let c_half = hyptrig::pentagon_side(x, x)?;

    let de_dt = -4.0 * nf * ln_neg_de_unit(t).exp();
    let dx = de_dt / 4.0;
    let lsa = ln_sinh(a_half);
    let da_dt = 2.0
        * ((ln_sinh(t) + ln_cosh(x) - lsa).exp() + dx * (ln_cosh(t) + ln_sinh(x) - lsa).exp());
    let dc_dt = if c_half > 0.0 {
        4.0 * dx * (ln_sinh(x) + ln_cosh(x) - ln_sinh(c_half)).exp()
    } else {
        f64::NEG_INFINITY
    };

    Ok(RingGeometry {
        n,
        t,
        sigma: ln_sigma.exp(),
        ln_sigma,
        u,
        e_len,
        a_len: 2.0 * a_half,
        c_len: 2.0 * c_half,
        da_dt,
        dc_dt,
        de_dt,
    })
}

/// `G(t) = ln cosh t − ln(tanh x sinh x)` with `x = e(t)/4`; increasing in `t`.
fn tn_equation(n: f64, t: f64) -> (f64, f64) {
    let x = n * half_pentagon_side(t);
    let g = ln_cosh(t) - 2.0 * ln_sinh(x) + ln_cosh(x);
    let dx = -n * ln_neg_de_unit(t).exp();
    let coth_x = ln_coth(x).exp();
    let dg = t.tanh() - dx * (2.0 * coth_x - x.tanh());
    (g, dg)
}

/// Solves for `t_n` by bisection to width `1e-8`, then Newton.
pub fn solve_tn(n: u64) -> Result<TnSolution, RingError> {
    check_n(n)?;
    let nf = n as f64;
    let (mut lo, mut hi) = (0.5, nf * LAMBDA + 2.0);
    if tn_equation(nf, lo).0 >= 0.0 || tn_equation(nf, hi).0 <= 0.0 {
        return Err(RingError::NotBracketed(n));
    }
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if tn_equation(nf, mid).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..50 {
        let (g, dg) = tn_equation(nf, t);
        let next = (t - g / dg).clamp(lo, hi);
        let done = (next - t).abs() <= 4.0 * f64::EPSILON * t;
        t = next;
        if done {
            break;
        }
    }
    let residual = tn_equation(nf, t).0;
    let geometry = ring_geometry(n, t)?;
    let gt = threshold_from(&geometry);
    Ok(TnSolution {
        n,
        t_n: t,
        residual,
        geometry,
        girth_threshold: gt.threshold,
        ln_girth_threshold: gt.ln_threshold,
        w_n: gt.w_n,
        l_n: geometry.a_len,
    })
}

fn threshold_from(g: &RingGeometry) -> GirthThreshold {
    let ln_threshold = g.a_len.ln() - g.ln_sigma;
    let threshold = ln_threshold.exp();
    let w_n = (threshold < 9.0e15).then(|| threshold.floor() as u64 + 1);
    GirthThreshold { threshold, ln_threshold, w_n }
}

/// `a(t_n)/σ(t_n)` and the least integer girth strictly above it.
pub fn girth_threshold(n: u64) -> Result<GirthThreshold, RingError> {
    Ok(threshold_from(&solve_tn(n)?.geometry))
}

/// `u(t) − λ` without cancellation, where `u = arcsinh(coth t)`.
pub fn u_excess(t: f64) -> f64 {
    let eps = 2.0 / (2.0 * t).exp_m1();
    let r = (2.0 + 2.0 * eps + eps * eps).sqrt();
    let s = (2.0 * eps + eps * eps) / (r + std::f64::consts::SQRT_2);
    ((eps + s) / (1.0 + std::f64::consts::SQRT_2)).ln_1p()
}

/// `t_n − nλ`, accurate to relative precision even once it falls below the
/// resolution of `t_n` itself.
pub fn tn_offset(n: u64) -> Result<f64, RingError> {
    let nf = n as f64;
    let mut d = solve_tn(n)?.t_n - nf * LAMBDA;
    // fixed point of d = nδ − ln(1+e^{-2t}) + 2 ln(1−e^{-2x}) − ln(1+e^{-2x})
    for _ in 0..200 {
        let t = nf * LAMBDA + d;
        let delta = u_excess(t);
        let x = nf * (LAMBDA + delta);
        let (et, ex) = ((-2.0 * t).exp(), (-2.0 * x).exp());
        let next = nf * delta - et.ln_1p() + 2.0 * (-ex).ln_1p() - ex.ln_1p();
        let done = (next - d).abs() <= 4.0 * f64::EPSILON * next.abs();
        d = next;
        if done {
            return Ok(d);
        }
    }
    Err(RingError::Postcondition(format!("offset iteration did not settle for n = {n}")))
}

/// Finds `s_n` with `a(s_n) = 4 s_n` and checks `s_n > 1`, `c(s_n) > 4 s_n`.
pub fn sn_check(n: u64) -> Result<SnCheck, RingError> {
    if n < 2 {
        return Err(RingError::InvalidInput("sn_check needs n ≥ 2".into()));
    }
    let tn = solve_tn(n)?.t_n;
    let h = |s: f64| -> Result<f64, RingError> { Ok(ring_geometry(n, s)?.a_len - 4.0 * s) };
    let (mut lo, mut hi) = (1e-3, tn);
    if h(lo)? <= 0.0 || h(hi)? >= 0.0 {
        return Err(RingError::NotBracketed(n));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    let s_n = 0.5 * (lo + hi);
    let g = ring_geometry(n, s_n)?;
    if s_n <= 1.0 {
        return Err(RingError::Postcondition(format!("s_{n} = {s_n} is not > 1")));
    }
    if g.c_len <= 4.0 * s_n {
        return Err(RingError::Postcondition(format!("c(s_{n}) = {} is not > 4 s_{n}", g.c_len)));
    }
    Ok(SnCheck { s_n, a_at_sn: g.a_len, c_at_sn: g.c_len })
}
