//! Exact counting: prime counts, the Chebyshev analogue, `G(n)`, the
//! bivariate tables `N(n, k)`, and fits of `G(n) ~ c q^n`.

pub mod arith;
mod table;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use arith::{divisors, lambda_from_pi, mobius_sieve, pi_from_gauss, pi_from_lambda};
pub use table::{element_counts, CountTable, FactorCount};

use crate::error::{Error, Result};
use crate::numeric::{ln_big, ratio_f64, slope};
use crate::semigroup::{Instance, NormBase};

/// The `Omega` table of an instance up to degree `nmax`.
pub fn count_table(instance: &Instance, nmax: usize) -> Result<CountTable> {
    Ok(CountTable::from_prime_counts(
        instance.label(),
        &instance.pi_table(nmax)?,
        nmax,
    ))
}

/// `Lambda(n) = sum_{d | n} d pi(d)`: the degrees of prime powers of degree `n`.
pub fn chebyshev_lambda(instance: &Instance, n: usize) -> Result<BigUint> {
    Ok(lambda_from_pi(&instance.pi_table(n)?, n))
}

/// Estimates of `G(n) = c q^n + O(q^(eta n))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomFit {
    pub c_hat: f64,
    pub q_hat: f64,
    /// `None` when the tail residuals vanish to rounding.
    pub eta_hat: Option<f64>,
    /// `G(n) / (c_hat q_hat^n) - 1` for every input `n`.
    pub residuals: Vec<f64>,
}

impl AxiomFit {
    /// `c' = c q / (q - 1)`, the constant in `|G_n| ~ c' q^n`.
    pub fn c_prime(&self) -> f64 {
        self.c_hat * self.q_hat / (self.q_hat - 1.0)
    }
}

/// Fits `c` and `q` on the upper half of `g` (indexed by degree from 0).
pub fn axiom_fit(g: &[BigUint]) -> Result<AxiomFit> {
    if g.len() < 8 {
        return Err(Error::DegenerateSequence(format!(
            "{} terms given, at least 8 needed",
            g.len()
        )));
    }
    let start = g.len() / 2;
    let last = g.len() - 1;
    if g[start..].iter().any(Zero::is_zero) {
        return Err(Error::DegenerateSequence("zero term in the tail".into()));
    }
    let logs: Vec<f64> = g.iter().map(|x| if x.is_zero() { f64::NEG_INFINITY } else { ln_big(x) }).collect();
    // geometric mean of consecutive tail ratios
    let ln_q = (logs[last] - logs[start]) / (last - start) as f64;
    let q_hat = ln_q.exp();
    if !(q_hat > 1.0 + 1e-12) {
        return Err(Error::DegenerateSequence(format!("growth rate {q_hat} is not above 1")));
    }
    let c_hat = (start..=last)
        .map(|n| (logs[n] - n as f64 * ln_q).exp())
        .sum::<f64>()
        / (last - start + 1) as f64;
    let residuals: Vec<f64> = logs
        .iter()
        .enumerate()
        .map(|(n, l)| (l - n as f64 * ln_q - c_hat.ln()).exp() - 1.0)
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = (start..=last)
        .filter(|&n| residuals[n].abs() > 1e-12)
        .map(|n| (n as f64 * ln_q, residuals[n].abs().ln()))
        .unzip();
    let eta_hat = slope(&xs, &ys).map(|s| 1.0 + s);
    Ok(AxiomFit {
        c_hat,
        q_hat,
        eta_hat,
        residuals,
    })
}

/// How closely `Lambda(n)` follows `q^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PntReport {
    pub nmax: usize,
    /// `Lambda(n) / q^n - 1` for `n = 1..=nmax`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Empirical exponent `theta` with `|Lambda(n) - q^n| ~ q^(theta n)`,
    /// from the upper half of the range; `None` when residuals vanish.
    pub theta_hat: Option<f64>,
    /// `Lambda(n)` near 0 for odd `n` and near `2 q^n` for even `n`.
    pub alternation: bool,
}

pub fn pnt_check(instance: &Instance, nmax: usize) -> Result<PntReport> {
    let pi = instance.pi_table(nmax)?;
    let base = instance.norm_base();
    let ln_q = match &base {
        NormBase::Integer(q) => ln_big(q),
        NormBase::Real(q) => q.ln(),
    };
    let mut residuals = Vec::with_capacity(nmax);
    for n in 1..=nmax {
        let lambda = lambda_from_pi(&pi, n);
        let r = match &base {
            NormBase::Integer(q) => ratio_f64(&lambda, &q.pow(n as u32)) - 1.0,
            NormBase::Real(_) if lambda.is_zero() => -1.0,
            NormBase::Real(_) => (ln_big(&lambda) - n as f64 * ln_q).exp() - 1.0,
        };
        residuals.push(r);
    }
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let lo = (nmax / 2).max(1);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (lo..=nmax)
        .filter(|&n| residuals[n - 1].abs() > 1e-12)
        .map(|n| (n as f64 * ln_q, residuals[n - 1].abs().ln()))
        .unzip();
    let theta_hat = slope(&xs, &ys).map(|s| 1.0 + s);
    let tail: Vec<usize> = (lo.max(2)..=nmax).collect();
    let alternation = tail.iter().any(|n| n % 2 == 0)
        && tail.iter().any(|n| n % 2 == 1)
        && tail.iter().all(|&n| {
            let ratio = 1.0 + residuals[n - 1];
            if n % 2 == 1 {
                ratio < 0.5
            } else {
                ratio > 1.5
            }
        });
    Ok(PntReport {
        nmax,
        residuals,
        max_residual,
        theta_hat,
        alternation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::FieldSpec;
    use crate::semigroup::GraphSpec;

    #[test]
    fn polynomial_lambda_is_q_to_the_n() {
        let inst = Instance::polynomial(&FieldSpec::prime(3).unwrap());
        for n in 1..=20 {
            assert_eq!(chebyshev_lambda(&inst, n).unwrap(), BigUint::from(3u32).pow(n as u32));
        }
        let report = pnt_check(&inst, 20).unwrap();
        assert_eq!(report.max_residual, 0.0);
        assert_eq!(report.theta_hat, None);
        assert!(!report.alternation);
    }

    #[test]
    fn k4_lambda_is_trace() {
        let inst = Instance::graph(GraphSpec::complete(4).unwrap());
        assert_eq!(chebyshev_lambda(&inst, 3).unwrap(), BigUint::from(24u32));
        let report = pnt_check(&inst, 30).unwrap();
        assert!(!report.alternation);
        let theta = report.theta_hat.unwrap();
        assert!(theta > 0.3 && theta < 0.7, "theta = {theta}");
    }

    #[test]
    fn bipartite_graph_alternates() {
        let inst = Instance::graph(GraphSpec::complete_bipartite(3, 3).unwrap());
        assert!(pnt_check(&inst, 20).unwrap().alternation);
    }

    #[test]
    fn fit_of_exact_powers() {
        let g: Vec<BigUint> = (0..20).map(|n| BigUint::from(2u32).pow(n)).collect();
        let fit = axiom_fit(&g).unwrap();
        assert!((fit.q_hat - 2.0).abs() < 1e-12);
        assert!((fit.c_hat - 1.0).abs() < 1e-12);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
        assert!((fit.c_prime() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_sequence_is_degenerate() {
        let g = vec![BigUint::from(5u32); 12];
        assert!(matches!(axiom_fit(&g), Err(Error::DegenerateSequence(_))));
        assert!(matches!(axiom_fit(&g[..4]), Err(Error::DegenerateSequence(_))));
    }

    #[test]
    fn k4_growth_rate() {
        let inst = Instance::graph(GraphSpec::complete(4).unwrap());
        let g = element_counts(&inst.pi_table(60).unwrap(), 60);
        let fit = axiom_fit(&g).unwrap();
        assert!((fit.q_hat - 2.0).abs() < 1e-3, "q_hat = {}", fit.q_hat);
    }

    #[test]
    fn prime_number_theorem_at_twenty() {
        let pi = pi_from_gauss(&BigUint::from(2u32), 20);
        let ratio = ratio_f64(&(pi * 20u32), &BigUint::from(2u32).pow(20));
        assert!((ratio - 1.0).abs() < 0.05);
    }
}
