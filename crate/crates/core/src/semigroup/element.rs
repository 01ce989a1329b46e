use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A prime of an instance: its degree and its position among the primes of
/// that degree in the instance's canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimeId {
    pub degree: usize,
    pub index: u64,
}

impl PrimeId {
    pub fn new(degree: usize, index: u64) -> Self {
        PrimeId { degree, index }
    }
}

impl fmt::Display for PrimeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}_{}", self.degree, self.index)
    }
}

/// An element of a free abelian semigroup, stored by its unique
/// factorization: sorted `(prime, multiplicity)` pairs, multiplicities >= 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemigroupElement {
    parts: Vec<(PrimeId, u32)>,
    degree: usize,
}

impl SemigroupElement {
    pub fn identity() -> Self {
        SemigroupElement {
            parts: Vec::new(),
            degree: 0,
        }
    }

    pub fn prime(p: PrimeId) -> Self {
        SemigroupElement {
            parts: vec![(p, 1)],
            degree: p.degree,
        }
    }

    /// Canonicalizes an arbitrary list of prime powers (merging repeats,
    /// dropping zero exponents).
    pub fn from_parts(mut parts: Vec<(PrimeId, u32)>) -> Self {
        parts.sort_unstable_by_key(|(p, _)| *p);
        let mut merged: Vec<(PrimeId, u32)> = Vec::with_capacity(parts.len());
        for (p, m) in parts {
            if m == 0 {
                continue;
            }
            match merged.last_mut() {
                Some((last, lm)) if *last == p => *lm += m,
                _ => merged.push((p, m)),
            }
        }
        let degree = merged.iter().map(|(p, m)| p.degree * *m as usize).sum();
        SemigroupElement {
            parts: merged,
            degree,
        }
    }

    pub fn parts(&self) -> &[(PrimeId, u32)] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_identity(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of prime factors with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.parts.iter().map(|(_, m)| m).sum()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a + b)
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Self) -> Self {
        self.merge(other, u32::min)
    }

    /// Componentwise maximum of exponents.
    pub fn lcm(&self, other: &Self) -> Self {
        self.merge(other, u32::max)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.gcd(other) == *self
    }

    /// Degree of `gcd(self, other)` without building it.
    pub fn gcd_degree(&self, other: &Self) -> usize {
        let (mut i, mut j) = (0, 0);
        let mut deg = 0;
        while i < self.parts.len() && j < other.parts.len() {
            let (p, a) = self.parts[i];
            let (r, b) = other.parts[j];
            match p.cmp(&r) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    deg += p.degree * a.min(b) as usize;
                    i += 1;
                    j += 1;
                }
            }
        }
        deg
    }

    fn merge(&self, other: &Self, op: impl Fn(u32, u32) -> u32) -> Self {
        let mut out = Vec::with_capacity(self.parts.len() + other.parts.len());
        let (mut i, mut j) = (0, 0);
        loop {
            let next = match (self.parts.get(i), other.parts.get(j)) {
                (None, None) => break,
                (Some(&(p, a)), None) => {
                    i += 1;
                    (p, op(a, 0))
                }
                (None, Some(&(r, b))) => {
                    j += 1;
                    (r, op(0, b))
                }
                (Some(&(p, a)), Some(&(r, b))) => match p.cmp(&r) {
                    Ordering::Less => {
                        i += 1;
                        (p, op(a, 0))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (r, op(0, b))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (p, op(a, b))
                    }
                },
            };
            if next.1 > 0 {
                out.push(next);
            }
        }
        let degree = out.iter().map(|(p, m)| p.degree * *m as usize).sum();
        SemigroupElement { parts: out, degree }
    }
}

/// Degree first, then the factorization lexicographically.
impl Ord for SemigroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for SemigroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SemigroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|(p, m)| if *m == 1 { p.to_string() } else { format!("{p}^{m}") })
            .collect();
        write!(f, "{}", s.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(d: usize, i: u64) -> PrimeId {
        PrimeId::new(d, i)
    }

    #[test]
    fn gcd_lcm_componentwise() {
        let g = SemigroupElement::from_parts(vec![(p(1, 0), 2)]);
        let h = SemigroupElement::from_parts(vec![(p(1, 0), 1), (p(2, 0), 1)]);
        assert_eq!(g.gcd(&h), SemigroupElement::prime(p(1, 0)));
        assert_eq!(
            g.lcm(&h),
            SemigroupElement::from_parts(vec![(p(1, 0), 2), (p(2, 0), 1)])
        );
        assert!(g.gcd(&SemigroupElement::identity()).is_identity());
    }

    #[test]
    fn identity_has_degree_zero() {
        let e = SemigroupElement::identity();
        assert_eq!(e.degree(), 0);
        assert_eq!(e.big_omega(), 0);
        assert_eq!(SemigroupElement::from_parts(vec![(p(3, 1), 0)]), e);
    }

    fn arb_element() -> impl Strategy<Value = SemigroupElement> {
        proptest::collection::vec(((1usize..5, 0u64..3), 0u32..4), 0..6).prop_map(|v| {
            SemigroupElement::from_parts(v.into_iter().map(|((d, i), m)| (p(d, i), m)).collect())
        })
    }

    proptest! {
        #[test]
        fn canonical_form_is_stable(g in arb_element()) {
            let again = SemigroupElement::from_parts(g.parts().to_vec());
            prop_assert_eq!(&again, &g);
            let degree: usize = g.parts().iter().map(|(q, m)| q.degree * *m as usize).sum();
            prop_assert_eq!(g.degree(), degree);
            prop_assert_eq!(g.degree() == 0, g.is_identity());
        }

        #[test]
        fn product_is_gcd_times_lcm(g in arb_element(), h in arb_element()) {
            let gh = g.mul(&h);
            prop_assert_eq!(gh.degree(), g.degree() + h.degree());
            prop_assert_eq!(&gh, &g.gcd(&h).mul(&g.lcm(&h)));
            prop_assert_eq!(g.gcd_degree(&h), g.gcd(&h).degree());
            prop_assert_eq!(gh.big_omega(), g.big_omega() + h.big_omega());
            prop_assert!(g.divides(&gh));
        }
    }
}
