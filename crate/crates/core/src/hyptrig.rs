//! Hyperbolic trigonometry for right triangles and right-angled pentagons.
//!
//! Triangle legs `a`, `b` and hypotenuse `c` satisfy `cosh c = cosh a cosh b`;
//! the angle `β` opposite `b` satisfies `cos β = cosh b sin α`.
//!
//! In a right-angled pentagon, label the sides cyclically `c, α, b, a, β`.
//! The sides `a` and `b` meet at a vertex opposite `c`, and then
//! `cosh c = sinh a sinh b = coth α coth β`.
//!
//! Every kernel takes and returns plain `f64`. Large arguments are handled
//! internally with [`LogReal`], which stores a sign together with `ln |x|`.

use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;
use std::fmt;
use thiserror::Error;

/// Products above this switch to log-domain evaluation.
pub const LOG_SWITCH: f64 = 1e15;

/// Products this close below 1 count as degenerate pentagons (`c = 0`).
const PENTAGON_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypTrigError {
    #[error("domain error: {what} = {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("geometrically infeasible: {what} = {value}")]
    Infeasible { what: &'static str, value: f64 },
}

/// A signed real stored as `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogReal {
    /// -1, 0 or +1.
    pub sign: i8,
    /// Natural log of the magnitude; `-inf` when `sign == 0`.
    pub log_abs: f64,
}

#[allow(clippy::should_implement_trait)]
impl LogReal {
    pub const ZERO: LogReal = LogReal { sign: 0, log_abs: f64::NEG_INFINITY };
    pub const ONE: LogReal = LogReal { sign: 1, log_abs: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogReal { sign: if x > 0.0 { 1 } else { -1 }, log_abs: x.abs().ln() }
        }
    }

    /// The positive number `exp(l)`.
    pub fn from_ln(l: f64) -> Self {
        LogReal { sign: 1, log_abs: l }
    }

    /// Signed value with the given log-magnitude.
    pub fn from_parts(sign: i8, log_abs: f64) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            LogReal { sign: sign.signum(), log_abs }
        }
    }

    /// Converts back; overflows to `±inf` when out of range.
    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn neg(self) -> Self {
        LogReal { sign: -self.sign, log_abs: self.log_abs }
    }

    pub fn mul(self, o: Self) -> Self {
        if self.sign == 0 || o.sign == 0 {
            return Self::ZERO;
        }
        LogReal { sign: self.sign * o.sign, log_abs: self.log_abs + o.log_abs }
    }

    pub fn div(self, o: Self) -> Self {
        assert!(o.sign != 0, "LogReal division by zero");
        if self.sign == 0 {
            return Self::ZERO;
        }
        LogReal { sign: self.sign * o.sign, log_abs: self.log_abs - o.log_abs }
    }

    pub fn add(self, o: Self) -> Self {
        if self.sign == 0 {
            return o;
        }
        if o.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_abs >= o.log_abs { (self, o) } else { (o, self) };
        let d = small.log_abs - big.log_abs;
        if big.sign == small.sign {
            LogReal { sign: big.sign, log_abs: big.log_abs + d.exp().ln_1p() }
        } else if d == 0.0 {
            Self::ZERO
        } else {
            LogReal { sign: big.sign, log_abs: big.log_abs + (-d.exp()).ln_1p() }
        }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    /// Natural log of a positive value, as a plain real.
    pub fn ln(self) -> f64 {
        assert!(self.sign > 0, "ln of non-positive LogReal");
        self.log_abs
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_abs),
        }
    }
}

/// `ln cosh x`, finite for every finite `x`.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `ln sinh x` for `x > 0`.
pub fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

/// `arccosh(1 + x)` for `x ≥ 0`, accurate for tiny `x`.
pub fn acosh1p(x: f64) -> f64 {
    if x > 1.0 {
        acosh(1.0 + x)
    } else {
        (x + (2.0 * x + x * x).sqrt()).ln_1p()
    }
}

/// `arccosh(y)` for `y ≥ 1`, without overflow for huge `y`.
pub fn acosh(y: f64) -> f64 {
    if y < 2.0 {
        acosh1p(y - 1.0)
    } else {
        y.ln() + (1.0 - (y * y).recip()).sqrt().ln_1p()
    }
}

/// `arccosh(exp(l))` for `l ≥ 0`.
pub fn acosh_exp(l: f64) -> f64 {
    if l < 1.0 {
        acosh1p(l.exp_m1())
    } else {
        l + (-(-2.0 * l).exp_m1()).sqrt().ln_1p()
    }
}

/// `arcsinh(exp(l))` for any `l`.
pub fn asinh_exp(l: f64) -> f64 {
    if l < 1.0 {
        l.exp().asinh()
    } else {
        l + (1.0 + (1.0 + (-2.0 * l).exp()).sqrt()).ln()
    }
}

fn check_pos(what: &'static str, x: f64) -> Result<(), HypTrigError> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(HypTrigError::Domain { what, value: x })
    }
}

/// Hypotenuse from the legs, direct domain.
pub fn rt_hypotenuse_direct(a: f64, b: f64) -> f64 {
    // cosh a cosh b - 1 = 2 sinh²(a/2) cosh b + 2 sinh²(b/2)
    let sa = (a / 2.0).sinh();
    let sb = (b / 2.0).sinh();
    acosh1p(2.0 * sa * sa * b.cosh() + 2.0 * sb * sb)
}

/// Hypotenuse from the legs, log domain.
pub fn rt_hypotenuse_log(a: f64, b: f64) -> f64 {
    acosh_exp(ln_cosh(a) + ln_cosh(b))
}

/// Hypotenuse `c` of a right triangle with legs `a`, `b`.
pub fn rt_hypotenuse(leg_a: f64, leg_b: f64) -> Result<f64, HypTrigError> {
    check_pos("leg_a", leg_a)?;
    check_pos("leg_b", leg_b)?;
    if ln_cosh(leg_a) + ln_cosh(leg_b) > LOG_SWITCH.ln() {
        Ok(rt_hypotenuse_log(leg_a, leg_b))
    } else {
        Ok(rt_hypotenuse_direct(leg_a, leg_b))
    }
}

/// Angle `β` opposite leg `b`, given the angle `α` opposite the other leg.
///
/// `leg_b = 0` is accepted and gives the Euclidean value `π/2 - α`.
pub fn rt_angle_beta(leg_b: f64, angle_alpha: f64) -> Result<f64, HypTrigError> {
    if !(leg_b.is_finite() && leg_b >= 0.0) {
        return Err(HypTrigError::Domain { what: "leg_b", value: leg_b });
    }
    if !angle_alpha.is_finite() {
        return Err(HypTrigError::Domain { what: "angle_alpha", value: angle_alpha });
    }
    let x = leg_b.cosh() * angle_alpha.sin();
    if !(x > 0.0 && x < 1.0) {
        return Err(HypTrigError::Infeasible { what: "cosh(b)·sin(α)", value: x });
    }
    Ok(x.acos())
}

/// Side `c` opposite the vertex where sides `a` and `b` meet.
///
/// Symmetric in its arguments bit for bit.
pub fn pentagon_side(side_a: f64, side_b: f64) -> Result<f64, HypTrigError> {
    check_pos("side_a", side_a)?;
    check_pos("side_b", side_b)?;
    let (lo, hi) = if side_a <= side_b { (side_a, side_b) } else { (side_b, side_a) };
    let ln_p = ln_sinh(lo) + ln_sinh(hi);
    if ln_p > LOG_SWITCH.ln() {
        return Ok(acosh_exp(ln_p));
    }
    let p = lo.sinh() * hi.sinh();
    if p < 1.0 - PENTAGON_SLACK {
        return Err(HypTrigError::Infeasible { what: "sinh(a)·sinh(b)", value: p });
    }
    Ok(acosh1p((p - 1.0).max(0.0)))
}

/// `arccoth(x)` for `x > 1`.
fn acoth(x: f64) -> f64 {
    0.5 * (2.0 / (x - 1.0)).ln_1p()
}

/// A right triangle with legs `leg_a`, `leg_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RightTriangle {
    pub leg_a: f64,
    pub leg_b: f64,
    pub hyp_c: f64,
    /// Angle opposite `leg_a`.
    pub angle_alpha: f64,
    /// Angle opposite `leg_b`.
    pub angle_beta: f64,
}

impl RightTriangle {
    pub fn from_legs(leg_a: f64, leg_b: f64) -> Result<Self, HypTrigError> {
        let hyp_c = rt_hypotenuse(leg_a, leg_b)?;
        // tan α = tanh a / sinh b
        let angle_alpha = leg_a.tanh().atan2(leg_b.sinh());
        let angle_beta = leg_b.tanh().atan2(leg_a.sinh());
        Ok(RightTriangle { leg_a, leg_b, hyp_c, angle_alpha, angle_beta })
    }
}

/// A right-angled pentagon with sides `c, α, b, a, β` in cyclic order.
///
/// `side_alpha` is adjacent to `c` and `b`, `side_beta` to `c` and `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RightPentagon {
    pub side_a: f64,
    pub side_b: f64,
    pub side_c: f64,
    pub side_alpha: f64,
    pub side_beta: f64,
}

impl RightPentagon {
    /// Builds the pentagon from the two sides meeting opposite `c`.
    pub fn from_sides(side_a: f64, side_b: f64) -> Result<Self, HypTrigError> {
        let side_c = pentagon_side(side_a, side_b)?;
        // cosh b = coth α coth a, cosh a = coth β coth b
        let side_alpha = acoth(side_b.cosh() * side_a.tanh());
        let side_beta = acoth(side_a.cosh() * side_b.tanh());
        Ok(RightPentagon { side_a, side_b, side_c, side_alpha, side_beta })
    }
}
