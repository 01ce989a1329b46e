//! One statistic evaluated along a grid of degrees, with its limit.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::Stats;
use crate::counting::FactorCount;
use crate::dynamics::{invariant_integral, Angle, DynSystem, Observable, Point, Value, WindowFn};
use crate::error::{Error, Result};
use crate::numeric::rational_f64;

/// A number in a report: real and imaginary parts, plus `"p/q"` when exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportValue {
    pub re: f64,
    pub im: f64,
    pub exact: Option<String>,
}

impl ReportValue {
    pub fn complex(z: Complex64) -> Self {
        ReportValue { re: z.re, im: z.im, exact: None }
    }

    pub fn real(x: f64) -> Self {
        ReportValue { re: x, im: 0.0, exact: None }
    }

    pub fn rational(r: &BigRational) -> Self {
        ReportValue {
            re: rational_f64(r),
            im: 0.0,
            exact: Some(r.to_string()),
        }
    }

    pub fn from_value(v: &Value) -> Self {
        match v {
            Value::Exact(r) => ReportValue::rational(r),
            Value::Complex(z) => ReportValue::complex(*z),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageReport {
    pub instance: String,
    pub statistic: String,
    pub factor_count: FactorCount,
    pub n_grid: Vec<usize>,
    pub empirical: Vec<ReportValue>,
    pub limit: ReportValue,
    pub abs_error: Vec<ReportValue>,
    /// Errors strictly decrease along the grid.
    pub monotone_improving: bool,
    pub parameters: BTreeMap<String, String>,
}

impl AverageReport {
    fn build(
        stats: &Stats<'_>,
        statistic: &str,
        n_grid: &[usize],
        limit: Value,
        parameters: BTreeMap<String, String>,
        mut eval: impl FnMut(usize) -> Result<Value>,
    ) -> Result<Self> {
        if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("degree grid must be nonempty and strictly increasing".into()));
        }
        let mut empirical = Vec::with_capacity(n_grid.len());
        let mut abs_error = Vec::with_capacity(n_grid.len());
        for &n in n_grid {
            let v = eval(n)?;
            let err = match (&v, &limit) {
                (Value::Exact(a), Value::Exact(b)) => ReportValue::rational(&(a - b).abs()),
                _ => ReportValue::real((v.to_complex() - limit.to_complex()).norm()),
            };
            empirical.push(ReportValue::from_value(&v));
            abs_error.push(err);
        }
        let monotone_improving = abs_error.windows(2).all(|w| w[1].re < w[0].re);
        Ok(AverageReport {
            instance: stats.instance().label().to_string(),
            statistic: statistic.to_string(),
            factor_count: stats.which(),
            n_grid: n_grid.to_vec(),
            empirical,
            limit: ReportValue::from_value(&limit),
            abs_error,
            monotone_improving,
            parameters,
        })
    }

    /// Rows `(n, empirical, limit, abs_error)` using real parts, or moduli
    /// for complex statistics.
    pub fn rows(&self) -> Vec<(usize, f64, f64, f64)> {
        let complex = self.empirical.iter().any(|v| v.im != 0.0) || self.limit.im != 0.0;
        let show = |v: &ReportValue| if complex { v.to_complex().norm() } else { v.re };
        self.n_grid
            .iter()
            .zip(&self.empirical)
            .zip(&self.abs_error)
            .map(|((n, e), a)| (*n, show(e), show(&self.limit), a.re))
            .collect()
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn point_label(x: &Point) -> String {
    match x {
        Point::Finite(j) => j.to_string(),
        Point::Torus(t) => t
            .iter()
            .map(|c| format!("{:.17}", Angle::from_bits(*c, "").to_f64()))
            .collect::<Vec<_>>()
            .join("|"),
    }
}

impl Stats<'_> {
    pub fn br_report(&self, sys: &DynSystem, x: &Point, f: &Observable, grid: &[usize]) -> Result<AverageReport> {
        let limit = invariant_integral(sys, f)?;
        let p = params(&[("system", sys.to_string()), ("x", point_label(x)), ("f", f.to_string())]);
        AverageReport::build(self, "br-average", grid, limit, p, |n| self.br_average(sys, x, f, n))
    }

    /// Limit: `E[F(Z)] * integral f dmu`.
    pub fn loyd_report(
        &self,
        sys: &DynSystem,
        x: &Point,
        f: &Observable,
        window: &WindowFn,
        grid: &[usize],
    ) -> Result<AverageReport> {
        let integral = invariant_integral(sys, f)?;
        let limit = if window.is_constant_one() {
            integral
        } else {
            Value::Complex(integral.to_complex() * window.gaussian_integral())
        };
        let p = params(&[
            ("system", sys.to_string()),
            ("x", point_label(x)),
            ("f", f.to_string()),
            ("F", window.to_string()),
        ]);
        AverageReport::build(self, "loyd-average", grid, limit, p, |n| {
            self.loyd_average(sys, x, f, window, n)
        })
    }

    pub fn density_report(&self, m: usize, r: usize, grid: &[usize]) -> Result<AverageReport> {
        let limit = Value::Exact(BigRational::new(1.into(), m.into()));
        let p = params(&[("m", m.to_string()), ("r", r.to_string())]);
        AverageReport::build(self, "density", grid, limit, p, |n| {
            Ok(Value::Exact(self.density_mod_m(m, r, n)?))
        })
    }

    /// Limit 0, or 1 in the degenerate case where `h alpha` is an integer.
    pub fn weyl_report(&self, alpha: &Angle, h: i64, grid: &[usize]) -> Result<AverageReport> {
        let degenerate = alpha.bits().wrapping_mul(h as i128 as u128) == 0;
        let limit = Value::Complex(Complex64::new(if degenerate { 1.0 } else { 0.0 }, 0.0));
        let p = params(&[("alpha", alpha.to_string()), ("h", h.to_string())]);
        AverageReport::build(self, "weyl", grid, limit, p, |n| {
            Ok(Value::Complex(self.weyl_sum(alpha, h, n)?))
        })
    }

    /// Empirical value: the Kolmogorov-Smirnov distance; limit 0.
    pub fn erdos_kac_report(&self, grid: &[usize]) -> Result<AverageReport> {
        let limit = Value::Complex(Complex64::new(0.0, 0.0));
        AverageReport::build(self, "erdos-kac", grid, limit, BTreeMap::new(), |n| {
            Ok(Value::Complex(Complex64::new(self.erdos_kac(n)?.ks, 0.0)))
        })
    }

    /// Empirical value: the shift gap; limit 0.
    pub fn shift_report(
        &self,
        a_label: &str,
        a: &dyn Fn(u64) -> Complex64,
        window: &WindowFn,
        grid: &[usize],
    ) -> Result<AverageReport> {
        let limit = Value::Complex(Complex64::new(0.0, 0.0));
        let p = params(&[("a", a_label.to_string()), ("F", window.to_string())]);
        AverageReport::build(self, "shift-test", grid, limit, p, |n| {
            Ok(Value::Complex(self.shift_gap(a, window, n)?))
        })
    }
}
