//! Complete factorization of monic polynomials over `F_q`.
//!
//! Squarefree decomposition, then distinct-degree splitting, then
//! equal-degree splitting (Cantor-Zassenhaus; the trace map in
//! characteristic 2). The splitting RNG is reseeded from a fixed schedule,
//! and the output is sorted, so results are identical across runs.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::FieldSpec;
use super::poly::{
    derivative_raw, divmod_raw, gcd_raw, monic_raw, mulmod_raw, powmod_big_raw, powmod_raw,
    pth_root_raw, rem_raw, sub_raw, PolyFq,
};
use crate::error::{Error, Result};

const SPLIT_SEED: u64 = 0x05ee_d0ff_1e1d;

/// A monic polynomial together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    element: PolyFq,
    parts: Vec<(PolyFq, u32)>,
}

impl Factorization {
    pub fn element(&self) -> &PolyFq {
        &self.element
    }

    /// Distinct monic irreducibles with multiplicities, sorted by degree then
    /// coefficients.
    pub fn parts(&self) -> &[(PolyFq, u32)] {
        &self.parts
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.parts.iter().map(|(_, m)| m).sum()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn product(&self) -> PolyFq {
        let field = self.element.field();
        self.parts.iter().fold(PolyFq::one(field), |acc, (p, m)| {
            acc.mul(&p.pow(*m)).expect("factors share the field")
        })
    }
}

/// Factors a monic polynomial into monic irreducibles.
pub fn factorize(m: &PolyFq) -> Result<Factorization> {
    if m.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !m.is_monic() {
        return Err(Error::NotMonic);
    }
    let field = m.field();
    let mut acc: BTreeMap<PolyFq, u32> = BTreeMap::new();
    for (sqf, mult) in squarefree_decomposition(field, m.coeffs()) {
        for (d, block) in distinct_degree(field, &sqf) {
            for prime in equal_degree(field, &block, d) {
                *acc.entry(PolyFq::from_raw(field, prime)).or_insert(0) += mult;
            }
        }
    }
    Ok(Factorization {
        element: m.clone(),
        parts: acc.into_iter().collect(),
    })
}

fn exact_div(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (q, r) = divmod_raw(f, a, b);
    debug_assert!(r.is_empty());
    q
}

/// Pairs `(g, i)` with `g` squarefree, pairwise coprime, and `f = prod g^i`.
fn squarefree_decomposition(f: &FieldSpec, a: &[u64]) -> Vec<(Vec<u64>, u32)> {
    let mut out = Vec::new();
    if a.len() <= 1 {
        return out;
    }
    let da = derivative_raw(f, a);
    if da.is_empty() {
        let p = f.p() as u32;
        for (g, i) in squarefree_decomposition(f, &pth_root_raw(f, a)) {
            out.push((g, i * p));
        }
        return out;
    }
    let mut c = gcd_raw(f, a, &da);
    let mut w = exact_div(f, a, &c);
    let mut i = 1u32;
    while w.len() > 1 {
        let y = gcd_raw(f, &w, &c);
        let fac = exact_div(f, &w, &y);
        if fac.len() > 1 {
            out.push((fac, i));
        }
        c = exact_div(f, &c, &y);
        w = y;
        i += 1;
    }
    if c.len() > 1 {
        let p = f.p() as u32;
        for (g, j) in squarefree_decomposition(f, &pth_root_raw(f, &c)) {
            out.push((g, j * p));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of its irreducible
/// factors of each degree.
fn distinct_degree(f: &FieldSpec, a: &[u64]) -> Vec<(usize, Vec<u64>)> {
    let mut out = Vec::new();
    let mut rest = a.to_vec();
    let x = vec![0, 1];
    let mut h = rem_raw(f, &x, &rest);
    let mut d = 0;
    while rest.len() > 2 * (d + 1) {
        d += 1;
        h = powmod_raw(f, &h, f.q(), &rest);
        let g = gcd_raw(f, &sub_raw(f, &h, &x), &rest);
        if g.len() > 1 {
            rest = exact_div(f, &rest, &g);
            h = rem_raw(f, &h, &rest);
            out.push((d, g));
        }
    }
    if rest.len() > 1 {
        out.push((rest.len() - 1, rest));
    }
    out
}

fn equal_degree(f: &FieldSpec, a: &[u64], d: usize) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out = Vec::new();
    let mut stack = vec![a.to_vec()];
    let odd_exp = (f.p() != 2).then(|| (f.q_big().pow(d as u32) - 1u32) / 2u32);
    let mut attempts = 0u64;
    while let Some(g) = stack.pop() {
        if g.len() - 1 == d {
            out.push(g);
            continue;
        }
        let n = g.len() - 1;
        loop {
            attempts += 1;
            if attempts.is_multiple_of(4096) {
                rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED.wrapping_add(attempts));
            }
            let mut r: Vec<u64> = (0..n).map(|_| rng.gen_range(0..f.q())).collect();
            super::poly::trim(&mut r);
            if r.len() < 2 {
                continue;
            }
            let b = match &odd_exp {
                Some(e) => sub_raw(f, &powmod_big_raw(f, &r, e, &g), &[1]),
                None => trace_map(f, &r, &g, d),
            };
            let s = gcd_raw(f, &b, &g);
            if s.len() > 1 && s.len() < g.len() {
                let other = exact_div(f, &g, &s);
                stack.push(s);
                stack.push(monic_raw(f, &other));
                break;
            }
        }
    }
    out
}

/// `r + r^2 + r^4 + ... + r^(2^(kd-1)) mod g` for `q = 2^k`.
fn trace_map(f: &FieldSpec, r: &[u64], g: &[u64], d: usize) -> Vec<u64> {
    let steps = f.k() as usize * d;
    let mut t = rem_raw(f, r, g);
    let mut acc = t.clone();
    for _ in 1..steps {
        t = mulmod_raw(f, &t, &t, g);
        acc = super::poly::add_raw(f, &acc, &t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &FieldSpec, c: &[u64]) -> PolyFq {
        PolyFq::new(f, c.to_vec()).unwrap()
    }

    #[test]
    fn x2_plus_x_over_f2() {
        let f = FieldSpec::prime(2).unwrap();
        let fac = factorize(&poly(&f, &[0, 1, 1])).unwrap();
        assert_eq!(
            fac.parts(),
            &[(poly(&f, &[0, 1]), 1), (poly(&f, &[1, 1]), 1)]
        );
        assert_eq!(fac.big_omega(), 2);
        assert_eq!(fac.omega(), 2);
    }

    #[test]
    fn irreducible_quadratic_over_f2() {
        let f = FieldSpec::prime(2).unwrap();
        let fac = factorize(&poly(&f, &[1, 1, 1])).unwrap();
        assert_eq!(fac.big_omega(), 1);
    }

    #[test]
    fn identity_has_empty_factorization() {
        let f = FieldSpec::prime(3).unwrap();
        let fac = factorize(&PolyFq::one(&f)).unwrap();
        assert!(fac.parts().is_empty());
        assert_eq!(fac.big_omega(), 0);
    }

    #[test]
    fn rejects_zero_and_non_monic() {
        let f = FieldSpec::prime(3).unwrap();
        assert_eq!(factorize(&PolyFq::zero(&f)).unwrap_err(), Error::ZeroPolynomial);
        assert_eq!(factorize(&poly(&f, &[1, 2])).unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn pth_powers_and_repeated_factors() {
        let f = FieldSpec::prime(3).unwrap();
        // (x+1)^3 (x^2+1)^2 x
        let a = poly(&f, &[1, 1]).pow(3);
        let b = poly(&f, &[1, 0, 1]).pow(2);
        let m = a.mul(&b).unwrap().mul(&PolyFq::x(&f)).unwrap();
        let fac = factorize(&m).unwrap();
        assert_eq!(
            fac.parts(),
            &[
                (PolyFq::x(&f), 1),
                (poly(&f, &[1, 1]), 3),
                (poly(&f, &[1, 0, 1]), 2)
            ]
        );
        assert_eq!(fac.product(), m);
    }

    #[test]
    fn extension_field_splitting() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        // x^2+x+1 splits over F_4 into (x+t)(x+t+1)
        let fac = factorize(&poly(&f4, &[1, 1, 1])).unwrap();
        assert_eq!(fac.big_omega(), 2);
        assert_eq!(fac.product(), poly(&f4, &[1, 1, 1]));
        let f9 = FieldSpec::new(3, 2).unwrap();
        // x^9 - x is the product of all linear monics over F_9
        let m = poly(&f9, &[0, f9.neg(1), 0, 0, 0, 0, 0, 0, 0, 1]);
        let fac = factorize(&m).unwrap();
        assert_eq!(fac.omega(), 9);
        assert!(fac.parts().iter().all(|(p, e)| p.degree() == Some(1) && *e == 1));
    }
}
