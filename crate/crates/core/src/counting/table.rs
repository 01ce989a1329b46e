//! Exact bivariate counts `N(n, k)` read off Euler products.
//!
//! With `pi(d)` primes in degree `d`, the elements counted by degree and by
//! number of prime factors have generating function
//!
//! ```text
//! sum N(n, k) u^n z^k = prod_d (1 - z u^d)^(-pi(d))                  (Omega)
//! sum N(n, k) u^n z^k = prod_d (1 + z u^d / (1 - u^d))^pi(d)         (omega)
//! ```
//!
//! Primes of one degree are folded in together, so the cost does not depend
//! on how large `pi(d)` is.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_with::DisplayFromStr;

/// Which prime-factor count a table or statistic refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum FactorCount {
    /// `Omega`: prime factors with multiplicity.
    #[default]
    Total,
    /// `omega`: distinct prime factors.
    Distinct,
}

/// `N(n, k)` for `0 <= k <= n <= nmax`, by `Omega` and optionally by `omega`.
#[serde_with::serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountTable {
    label: String,
    nmax: usize,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pi: Vec<BigUint>,
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    total: Vec<Vec<BigUint>>,
    #[serde_as(as = "Option<Vec<Vec<DisplayFromStr>>>")]
    distinct: Option<Vec<Vec<BigUint>>>,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    g: Vec<BigUint>,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    cumulative: Vec<BigUint>,
}

/// `binom(P + m - 1, m)` for `0 <= m <= mmax`.
fn multiset_coefficients(p: &BigUint, mmax: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::one()];
    for m in 1..=mmax {
        let next = &c[m - 1] * (p + (m - 1)) / m;
        c.push(next);
    }
    c
}

/// `binom(P, m)` for `0 <= m <= mmax`.
fn subset_coefficients(p: &BigUint, mmax: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::one()];
    for m in 1..=mmax {
        let next = if p < &BigUint::from(m) {
            BigUint::zero()
        } else {
            &c[m - 1] * (p - (m - 1)) / m
        };
        c.push(next);
    }
    c
}

/// `G(n)` for `0 <= n <= nmax` from prime counts (`pi[0]` ignored).
pub fn element_counts(pi: &[BigUint], nmax: usize) -> Vec<BigUint> {
    let mut g = vec![BigUint::zero(); nmax + 1];
    g[0] = BigUint::one();
    for d in 1..=nmax.min(pi.len().saturating_sub(1)) {
        if pi[d].is_zero() {
            continue;
        }
        let c = multiset_coefficients(&pi[d], nmax / d);
        for n in (d..=nmax).rev() {
            let mut acc = BigUint::zero();
            for (m, cm) in c.iter().enumerate().take(n / d + 1).skip(1) {
                acc += cm * &g[n - d * m];
            }
            g[n] += acc;
        }
    }
    g
}

fn total_table(pi: &[BigUint], nmax: usize) -> Vec<Vec<BigUint>> {
    let mut t: Vec<Vec<BigUint>> = (0..=nmax).map(|n| vec![BigUint::zero(); n + 1]).collect();
    t[0][0] = BigUint::one();
    for d in 1..=nmax {
        if pi[d].is_zero() {
            continue;
        }
        let c = multiset_coefficients(&pi[d], nmax / d);
        // descending n: rows n - d*m (m >= 1) are still the old ones
        for n in (d..=nmax).rev() {
            for k in (1..=n).rev() {
                let mut acc = BigUint::zero();
                for m in 1..=(n / d).min(k) {
                    let src = &t[n - d * m];
                    if let Some(v) = src.get(k - m) {
                        if !v.is_zero() {
                            acc += &c[m] * v;
                        }
                    }
                }
                if !acc.is_zero() {
                    t[n][k] += acc;
                }
            }
        }
    }
    t
}

fn distinct_table(pi: &[BigUint], nmax: usize) -> Vec<Vec<BigUint>> {
    let mut t: Vec<Vec<BigUint>> = (0..=nmax).map(|n| vec![BigUint::zero(); n + 1]).collect();
    t[0][0] = BigUint::one();
    for d in 1..=nmax {
        if pi[d].is_zero() {
            continue;
        }
        let mmax = nmax / d;
        let c = subset_coefficients(&pi[d], mmax);
        // Horner in z*S with S = u^d / (1 - u^d): T <- sum_m c_m (zS)^m T
        let mut acc = scaled(&t, &c[mmax]);
        for m in (0..mmax).rev() {
            acc = shift_by_s(&acc, d);
            add_scaled(&mut acc, &t, &c[m]);
        }
        t = acc;
    }
    t
}

fn scaled(t: &[Vec<BigUint>], c: &BigUint) -> Vec<Vec<BigUint>> {
    t.iter()
        .map(|row| row.iter().map(|v| v * c).collect())
        .collect()
}

fn add_scaled(acc: &mut [Vec<BigUint>], t: &[Vec<BigUint>], c: &BigUint) {
    if c.is_zero() {
        return;
    }
    for (arow, trow) in acc.iter_mut().zip(t) {
        for (a, v) in arow.iter_mut().zip(trow) {
            if !v.is_zero() {
                *a += v * c;
            }
        }
    }
}

/// Multiplies by `z u^d / (1 - u^d)`: shift `k` by one, `n` by `d`, then a
/// running sum along `n` with stride `d`.
fn shift_by_s(t: &[Vec<BigUint>], d: usize) -> Vec<Vec<BigUint>> {
    let nmax = t.len() - 1;
    let mut out: Vec<Vec<BigUint>> = (0..=nmax).map(|n| vec![BigUint::zero(); n + 1]).collect();
    for n in d..=nmax {
        let (head, tail) = out.split_at_mut(n);
        let row = &mut tail[0];
        let src = &t[n - d];
        for k in 1..=n {
            let mut v = src.get(k - 1).cloned().unwrap_or_default();
            if n >= 2 * d {
                if let Some(prev) = head[n - d].get(k) {
                    v += prev;
                }
            }
            row[k] = v;
        }
    }
    out
}

impl CountTable {
    /// Builds the `Omega` table from prime counts `pi[1..=nmax]` (`pi[0]` ignored).
    pub fn from_prime_counts(label: impl Into<String>, pi: &[BigUint], nmax: usize) -> Self {
        assert!(pi.len() > nmax, "prime counts needed up to degree {nmax}");
        let pi: Vec<BigUint> = pi[..=nmax].to_vec();
        let total = total_table(&pi, nmax);
        let g: Vec<BigUint> = total.iter().map(|row| row.iter().sum()).collect();
        let mut cumulative = Vec::with_capacity(nmax + 1);
        let mut run = BigUint::zero();
        for x in &g {
            run += x;
            cumulative.push(run.clone());
        }
        CountTable {
            label: label.into(),
            nmax,
            pi,
            total,
            distinct: None,
            g,
            cumulative,
        }
    }

    /// Adds the `omega` table.
    pub fn with_distinct(mut self) -> Self {
        if self.distinct.is_none() {
            self.distinct = Some(distinct_table(&self.pi, self.nmax));
        }
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn prime_counts(&self) -> &[BigUint] {
        &self.pi
    }

    pub fn has_distinct(&self) -> bool {
        self.distinct.is_some()
    }

    fn rows(&self, which: FactorCount) -> &[Vec<BigUint>] {
        match which {
            FactorCount::Total => &self.total,
            FactorCount::Distinct => self
                .distinct
                .as_deref()
                .expect("omega table not built; call with_distinct()"),
        }
    }

    /// `N(n, k)`; zero outside the stored range.
    pub fn count(&self, which: FactorCount, n: usize, k: usize) -> BigUint {
        self.rows(which)
            .get(n)
            .and_then(|row| row.get(k))
            .cloned()
            .unwrap_or_default()
    }

    /// Row `n` of the table, indexed by `k` in `0..=n`.
    pub fn row(&self, which: FactorCount, n: usize) -> &[BigUint] {
        &self.rows(which)[n]
    }

    /// `G(n)`, the number of elements of degree `n`.
    pub fn g(&self, n: usize) -> &BigUint {
        &self.g[n]
    }

    pub fn g_all(&self) -> &[BigUint] {
        &self.g
    }

    /// `|G_n|`, the number of elements of degree at most `n`.
    pub fn cumulative(&self, n: usize) -> &BigUint {
        &self.cumulative[n]
    }

    /// `M_n(k) = sum_{j <= n} N(j, k)` for `0 <= k <= n`.
    pub fn cumulative_row(&self, which: FactorCount, n: usize) -> Vec<BigUint> {
        let rows = self.rows(which);
        let mut out = vec![BigUint::zero(); n + 1];
        for row in &rows[..=n] {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }

    /// Checks the structural invariants, returning the first one violated.
    pub fn validate(&self) -> Result<(), String> {
        let expected_g = element_counts(&self.pi, self.nmax);
        for which in [FactorCount::Total, FactorCount::Distinct] {
            if which == FactorCount::Distinct && self.distinct.is_none() {
                continue;
            }
            let rows = self.rows(which);
            if rows.len() != self.nmax + 1 {
                return Err(format!("{which:?} table has {} rows, expected {}", rows.len(), self.nmax + 1));
            }
            if rows[0].first() != Some(&BigUint::one()) {
                return Err("N(0,0) = 1".into());
            }
            for (n, row) in rows.iter().enumerate() {
                if n >= 1 && !row[0].is_zero() {
                    return Err(format!("N({n},0) = 0"));
                }
                let sum: BigUint = row.iter().sum();
                if sum != expected_g[n] {
                    return Err(format!("row sum {which:?}: sum_k N({n},k) = G({n})"));
                }
            }
        }
        if self.g != expected_g {
            return Err("G(n) matches the Euler product of the prime counts".into());
        }
        Ok(())
    }

    /// Overwrites one entry; for exercising validation.
    #[doc(hidden)]
    pub fn set_count_unchecked(&mut self, which: FactorCount, n: usize, k: usize, v: BigUint) {
        match which {
            FactorCount::Total => self.total[n][k] = v,
            FactorCount::Distinct => {
                if let Some(t) = self.distinct.as_mut() {
                    t[n][k] = v;
                }
            }
        }
    }

    /// Rows `(n, k, count)` for every stored entry of the chosen table.
    pub fn entries(&self, which: FactorCount) -> impl Iterator<Item = (usize, usize, &BigUint)> {
        self.rows(which)
            .iter()
            .enumerate()
            .flat_map(|(n, row)| row.iter().enumerate().map(move |(k, v)| (n, k, v)))
    }

    /// Rebuilds a table from `(n, k, count)` entries plus the prime counts.
    pub fn from_entries(
        label: impl Into<String>,
        pi: Vec<BigUint>,
        nmax: usize,
        entries: impl IntoIterator<Item = (usize, usize, BigUint)>,
    ) -> Result<Self, String> {
        let mut total: Vec<Vec<BigUint>> = (0..=nmax).map(|n| vec![BigUint::zero(); n + 1]).collect();
        for (n, k, v) in entries {
            if n > nmax || k > n {
                return Err(format!("entry ({n},{k}) outside 0 <= k <= n <= {nmax}"));
            }
            total[n][k] = v;
        }
        if pi.len() <= nmax {
            return Err(format!("prime counts needed up to degree {nmax}"));
        }
        let g: Vec<BigUint> = total.iter().map(|row| row.iter().sum()).collect();
        let mut cumulative = Vec::with_capacity(nmax + 1);
        let mut run = BigUint::zero();
        for x in &g {
            run += x;
            cumulative.push(run.clone());
        }
        Ok(CountTable {
            label: label.into(),
            nmax,
            pi,
            total,
            distinct: None,
            g,
            cumulative,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::arith::pi_from_gauss;

    fn gauss_pi(q: u32, nmax: usize) -> Vec<BigUint> {
        let q = BigUint::from(q);
        std::iter::once(BigUint::zero())
            .chain((1..=nmax).map(|n| pi_from_gauss(&q, n)))
            .collect()
    }

    #[test]
    fn json_round_trip_uses_decimal_strings() {
        let t = CountTable::from_prime_counts("f2", &gauss_pi(2, 6), 6).with_distinct();
        let text = serde_json::to_string(&t).unwrap();
        assert!(text.contains(r#""g":["1","2","4","8","16","32","64"]"#), "{text}");
        let back: CountTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn f2_degree_two() {
        let t = CountTable::from_prime_counts("F2", &gauss_pi(2, 2), 2);
        assert_eq!(t.count(FactorCount::Total, 2, 1), BigUint::from(1u32));
        assert_eq!(t.count(FactorCount::Total, 2, 2), BigUint::from(3u32));
        assert_eq!(t.g(2), &BigUint::from(4u32));
        assert_eq!(t.count(FactorCount::Total, 0, 0), BigUint::one());
        assert!(t.count(FactorCount::Total, 2, 0).is_zero());
    }

    #[test]
    fn polynomial_row_sums_are_powers_of_q() {
        for q in [2u32, 3, 4, 5] {
            let nmax = 24;
            let t = CountTable::from_prime_counts("poly", &gauss_pi(q, nmax), nmax).with_distinct();
            for n in 0..=nmax {
                assert_eq!(t.g(n), &BigUint::from(q).pow(n as u32));
                let s: BigUint = t.row(FactorCount::Distinct, n).iter().sum();
                assert_eq!(&s, t.g(n));
            }
            t.validate().unwrap();
        }
    }

    #[test]
    fn distinct_tail_dominated_by_total_tail() {
        let nmax = 30;
        let t = CountTable::from_prime_counts("F3", &gauss_pi(3, nmax), nmax).with_distinct();
        for n in 0..=nmax {
            for k in 0..=n {
                let tail = |w| -> BigUint { t.row(w, n)[k..].iter().sum() };
                assert!(tail(FactorCount::Distinct) <= tail(FactorCount::Total), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn element_counts_match_table() {
        let pi = gauss_pi(7, 15);
        let t = CountTable::from_prime_counts("F7", &pi, 15);
        assert_eq!(element_counts(&pi, 15), t.g_all());
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let mut t = CountTable::from_prime_counts("F2", &gauss_pi(2, 6), 6);
        t.set_count_unchecked(FactorCount::Total, 4, 2, BigUint::from(99u32));
        let msg = t.validate().unwrap_err();
        assert!(msg.contains("row sum"), "{msg}");
    }
}
