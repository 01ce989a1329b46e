//! Compactly supported windows `F` and their Gaussian averages
//! `(2 pi)^(-1/2) * integral F(t) exp(-t^2 / 2) dt`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const QUAD_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum WindowFn {
    /// Triangle on `[a, b]` with peak 1 at the midpoint.
    Hat { a: f64, b: f64 },
    /// `exp(1 - 1/(1 - s^2))` for `s` the position rescaled to `(-1, 1)`; peak 1.
    SmoothBump { a: f64, b: f64 },
    ConstantOne,
}

impl Default for WindowFn {
    fn default() -> Self {
        WindowFn::Hat { a: -3.0, b: 3.0 }
    }
}

impl WindowFn {
    pub fn hat(a: f64, b: f64) -> Result<Self> {
        check_support(a, b)?;
        Ok(WindowFn::Hat { a, b })
    }

    pub fn smooth_bump(a: f64, b: f64) -> Result<Self> {
        check_support(a, b)?;
        Ok(WindowFn::SmoothBump { a, b })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            WindowFn::ConstantOne => 1.0,
            WindowFn::Hat { a, b } => {
                let mid = 0.5 * (a + b);
                let half = 0.5 * (b - a);
                (1.0 - (t - mid).abs() / half).max(0.0)
            }
            WindowFn::SmoothBump { a, b } => {
                let s = (2.0 * t - a - b) / (b - a);
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - s * s)).exp()
                }
            }
        }
    }

    pub fn is_constant_one(&self) -> bool {
        matches!(self, WindowFn::ConstantOne)
    }

    /// `E[F(Z)]` for a standard normal `Z`, by adaptive Simpson quadrature.
    pub fn gaussian_integral(&self) -> f64 {
        let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let g = |t: f64| self.eval(t) * density(t);
        let knots: Vec<f64> = match *self {
            // beyond |t| = 12 the normal mass is below 1e-32
            WindowFn::ConstantOne => vec![-12.0, 0.0, 12.0],
            WindowFn::Hat { a, b } => vec![a, 0.5 * (a + b), b],
            WindowFn::SmoothBump { a, b } => vec![a, 0.5 * (a + b), b],
        };
        knots
            .windows(2)
            .map(|w| adaptive_simpson(&g, w[0], w[1], QUAD_TOL, 50))
            .sum()
    }
}

fn check_support(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInput(format!("window support [{a}, {b}] is empty")));
    }
    Ok(())
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

impl fmt::Display for WindowFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowFn::Hat { a, b } => write!(f, "hat:a={a},b={b}"),
            WindowFn::SmoothBump { a, b } => write!(f, "bump:a={a},b={b}"),
            WindowFn::ConstantOne => write!(f, "one"),
        }
    }
}

impl FromStr for WindowFn {
    type Err = Error;

    /// `hat:a=-3,b=3`, `bump:a=-1,b=1`, or `one`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let map = super::params(rest)?;
        let bound = |k: &str, d: f64| super::param_or(&map, k, d);
        match kind {
            "one" | "constant_one" => Ok(WindowFn::ConstantOne),
            "hat" => WindowFn::hat(bound("a", -3.0)?, bound("b", 3.0)?),
            "bump" | "smooth_bump" => WindowFn::smooth_bump(bound("a", -3.0)?, bound("b", 3.0)?),
            other => Err(Error::Parse(format!("unknown window {other:?}"))),
        }
    }
}
