//! Small numeric helpers: big-integer logs and ratios, compensated sums.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Natural log of a positive big integer, accurate past the `f64` range.
pub fn ln_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("in range").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64 bits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a / b` as the nearest `f64`.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    BigRational::new_raw(BigInt::from(a.clone()), BigInt::from(b.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

pub fn rational_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Neumaier's compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of complex terms, componentwise.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_logs() {
        let x = BigUint::from(2u32).pow(5000);
        assert!((ln_big(&x) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_big(&BigUint::from(10u32)) - 10f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn big_ratio() {
        let a = BigUint::from(3u32).pow(700);
        let b = BigUint::from(3u32).pow(701);
        assert!((ratio_f64(&a, &b) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = KahanSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn slope_of_line() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [3.0, 5.0, 7.0];
        assert!((slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-12);
    }
}
