//! Free abelian semigroups with a degree map, and the three concrete
//! instances: monic polynomials over `F_q`, synthetic semigroups given only
//! by their prime counts, and prime cycles of a finite graph.
//!
//! Elements are stored as multisets of [`PrimeId`] tokens. The instance
//! fixes what a token means (an irreducible polynomial, an opaque prime, a
//! cycle class) and how many primes each degree has.

mod element;
pub mod graph;
mod polynomial;
mod spec;
mod synthetic;

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

pub use element::{PrimeId, SemigroupElement};
pub use graph::GraphSpec;
pub use polynomial::PolynomialInstance;
pub use spec::{parse_key_values, GraphSource, InstanceKindSpec, InstanceSpec};
pub use synthetic::{PiSource, SyntheticInstance};

use crate::counting::element_counts;
use crate::error::{Error, Result};

/// Default cap on `|G_n|` for enumeration of elements.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

/// The base `q` of the norm `|g| = q^deg(g)`.
#[derive(Clone, Debug, PartialEq)]
pub enum NormBase {
    Integer(BigUint),
    Real(f64),
}

impl NormBase {
    pub fn as_f64(&self) -> f64 {
        match self {
            NormBase::Integer(q) => q.to_f64().unwrap_or(f64::INFINITY),
            NormBase::Real(q) => *q,
        }
    }

    pub fn as_integer(&self) -> Option<&BigUint> {
        match self {
            NormBase::Integer(q) => Some(q),
            NormBase::Real(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Polynomial(PolynomialInstance),
    Synthetic(SyntheticInstance),
    Graph(Arc<GraphSpec>),
}

/// A semigroup instance. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Instance {
    kind: Kind,
    label: String,
}

impl Instance {
    pub fn polynomial(field: &crate::ffpoly::FieldSpec) -> Self {
        Instance {
            label: format!("poly:p={},k={}", field.p(), field.k()),
            kind: Kind::Polynomial(PolynomialInstance::new(field)),
        }
    }

    pub fn synthetic(inner: SyntheticInstance) -> Self {
        Instance {
            label: inner.label(),
            kind: Kind::Synthetic(inner),
        }
    }

    pub fn graph(spec: GraphSpec) -> Self {
        Instance {
            label: format!("graph:v={},e={}", spec.vertices(), spec.edges().len()),
            kind: Kind::Graph(Arc::new(spec)),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn as_polynomial(&self) -> Option<&PolynomialInstance> {
        match &self.kind {
            Kind::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_graph(&self) -> Option<&GraphSpec> {
        match &self.kind {
            Kind::Graph(g) => Some(g),
            _ => None,
        }
    }

    /// The norm base. The same `q` that governs `G(n) ~ c q^n`: the field
    /// size, the synthetic `q`, or the Perron eigenvalue of a graph.
    pub fn norm_base(&self) -> NormBase {
        match &self.kind {
            Kind::Polynomial(p) => NormBase::Integer(p.field().q_big()),
            Kind::Synthetic(s) => NormBase::Integer(BigUint::from(s.q())),
            Kind::Graph(g) => match g.regular_rate() {
                Some(r) => NormBase::Integer(BigUint::from(r)),
                None => NormBase::Real(g.radius_inv()),
            },
        }
    }

    /// `pi(n)`, the number of primes of degree `n`.
    pub fn pi(&self, n: usize) -> Result<BigUint> {
        Ok(self.pi_table(n)?.swap_remove(n))
    }

    /// `pi(0..=nmax)` with `pi(0) = 0`.
    pub fn pi_table(&self, nmax: usize) -> Result<Vec<BigUint>> {
        match &self.kind {
            Kind::Polynomial(p) => Ok(p.pi_table(nmax)),
            Kind::Synthetic(s) => s.pi_table(nmax),
            Kind::Graph(g) => Ok(g.prime_counts(nmax)),
        }
    }

    /// The set `P(n)` in canonical order.
    pub fn primes(&self, n: usize) -> Result<Vec<PrimeId>> {
        if n == 0 {
            return Ok(Vec::new());
        }
        match &self.kind {
            Kind::Polynomial(p) => Ok((0..p.irreducibles(n)?.len() as u64)
                .map(|i| PrimeId::new(n, i))
                .collect()),
            Kind::Synthetic(_) => {
                let count = self.pi(n)?;
                let count = count
                    .to_u64()
                    .filter(|&c| c <= DEFAULT_ENUMERATION_BUDGET)
                    .ok_or_else(|| {
                        Error::CountOnly(format!("pi({n}) = {count} is too many primes to list"))
                    })?;
                Ok((0..count).map(|i| PrimeId::new(n, i)).collect())
            }
            Kind::Graph(g) => Ok((0..g.prime_cycles(n, graph::DEFAULT_PATH_BUDGET)?.len() as u64)
                .map(|i| PrimeId::new(n, i))
                .collect()),
        }
    }

    /// The first `count` primes of degree `n`, without listing the rest when
    /// the instance allows it.
    pub fn first_primes(&self, n: usize, count: u64) -> Result<Vec<PrimeId>> {
        let available = self.pi(n)?;
        if BigUint::from(count) > available {
            return Err(Error::InsufficientPrimes {
                degree: n,
                needed: count.to_string(),
                available: available.to_string(),
            });
        }
        Ok((0..count).map(|i| PrimeId::new(n, i)).collect())
    }

    /// Checks that every prime token of `g` exists in this instance.
    pub fn validate(&self, g: &SemigroupElement) -> Result<()> {
        for (p, _) in g.parts() {
            if p.degree == 0 || BigUint::from(p.index) >= self.pi(p.degree)? {
                return Err(Error::InstanceMismatch);
            }
        }
        Ok(())
    }

    pub fn gcd(&self, g: &SemigroupElement, h: &SemigroupElement) -> Result<SemigroupElement> {
        self.validate(g)?;
        self.validate(h)?;
        Ok(g.gcd(h))
    }

    pub fn lcm(&self, g: &SemigroupElement, h: &SemigroupElement) -> Result<SemigroupElement> {
        self.validate(g)?;
        self.validate(h)?;
        Ok(g.lcm(h))
    }

    /// `|g| = q^deg(g)` exactly; needs an integer norm base.
    pub fn norm(&self, g: &SemigroupElement) -> Result<BigUint> {
        match self.norm_base() {
            NormBase::Integer(q) => Ok(q.pow(g.degree() as u32)),
            NormBase::Real(q) => Err(Error::InvalidInput(format!(
                "norm base {q} is not an integer; use norm_f64"
            ))),
        }
    }

    pub fn norm_f64(&self, g: &SemigroupElement) -> f64 {
        self.norm_base().as_f64().powi(g.degree() as i32)
    }

    /// Refuses instances whose prime counts follow the alternating
    /// (non-classical) pattern, such as bipartite graphs.
    pub fn require_classical(&self) -> Result<()> {
        match &self.kind {
            Kind::Polynomial(_) => Ok(()),
            Kind::Graph(g) if g.delta() != 1 => Err(Error::NonClassicalInstance(format!(
                "prime cycle lengths have gcd {}",
                g.delta()
            ))),
            Kind::Graph(_) => Ok(()),
            Kind::Synthetic(s) => {
                let nmax = s.max_degree().unwrap_or(40).min(40);
                if nmax >= 4 {
                    let report = crate::counting::pnt_check(self, nmax)?;
                    if report.alternation {
                        return Err(Error::NonClassicalInstance(
                            "Chebyshev sums alternate between 0 and 2 q^n".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// `|G_n|` computed from the prime counts.
    pub fn cumulative_count(&self, n: usize) -> Result<BigUint> {
        Ok(element_counts(&self.pi_table(n)?, n).into_iter().sum())
    }

    /// Every element of degree at most `n`, sorted by degree then factorization.
    pub fn enumerate_upto(&self, n: usize) -> Result<Vec<SemigroupElement>> {
        self.enumerate_upto_with_budget(n, DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn enumerate_upto_with_budget(&self, n: usize, budget: u64) -> Result<Vec<SemigroupElement>> {
        let total = self.cumulative_count(n)?;
        if total > BigUint::from(budget) {
            return Err(Error::CountOnly(format!(
                "|G_{n}| = {total} exceeds the enumeration budget {budget}"
            )));
        }
        let pi = self.pi_table(n)?;
        let mut primes = Vec::new();
        for (d, count) in pi.iter().enumerate().skip(1) {
            let count = count.to_u64().expect("bounded by the budget");
            primes.extend((0..count).map(|i| PrimeId::new(d, i)));
        }
        let mut out = Vec::with_capacity(total.to_usize().unwrap_or(0));
        let mut stack = Vec::new();
        compose(&primes, 0, n, &mut stack, &mut out);
        out.sort();
        Ok(out)
    }

    /// Every element of degree exactly `n`.
    pub fn enumerate_degree(&self, n: usize) -> Result<Vec<SemigroupElement>> {
        let mut all = self.enumerate_upto(n)?;
        all.retain(|g| g.degree() == n);
        Ok(all)
    }
}

/// Emits the product of `stack` and every extension by primes at positions
/// `>= from` fitting in degree `room`.
fn compose(
    primes: &[PrimeId],
    from: usize,
    room: usize,
    stack: &mut Vec<PrimeId>,
    out: &mut Vec<SemigroupElement>,
) {
    out.push(SemigroupElement::from_parts(stack.iter().map(|&p| (p, 1)).collect()));
    for (i, &p) in primes.iter().enumerate().skip(from) {
        if p.degree > room {
            break;
        }
        stack.push(p);
        compose(primes, i, room - p.degree, stack, out);
        stack.pop();
    }
}

/// Counts by `Omega` of the elements in a list, keyed by `(degree, Omega)`.
pub fn histogram(elements: &[SemigroupElement], nmax: usize) -> Vec<Vec<BigUint>> {
    let mut h: Vec<Vec<BigUint>> = (0..=nmax).map(|n| vec![BigUint::zero(); n + 1]).collect();
    for g in elements {
        if g.degree() <= nmax {
            h[g.degree()][g.big_omega() as usize] += 1u32;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{enumerate_monic, FieldSpec};
    use std::collections::BTreeSet;

    #[test]
    fn polynomial_enumeration_matches_monic_polynomials() {
        let f2 = FieldSpec::prime(2).unwrap();
        let inst = Instance::polynomial(&f2);
        for n in 0..=10 {
            let elems = inst.enumerate_upto(n).unwrap();
            assert_eq!(elems.len(), (1usize << (n + 1)) - 1);
            let p = inst.as_polynomial().unwrap();
            let polys: BTreeSet<_> = elems.iter().map(|g| p.to_poly(g).unwrap()).collect();
            let expected: BTreeSet<_> = (0..=n).flat_map(|d| enumerate_monic(&f2, d)).collect();
            assert_eq!(polys, expected);
        }
    }

    #[test]
    fn f2_primes_and_small_sets() {
        let inst = Instance::polynomial(&FieldSpec::prime(2).unwrap());
        assert_eq!(inst.primes(2).unwrap().len(), 1);
        assert_eq!(inst.enumerate_upto(0).unwrap(), vec![SemigroupElement::identity()]);
        assert_eq!(inst.enumerate_upto(2).unwrap().len(), 7);
        let p = inst.as_polynomial().unwrap();
        assert_eq!(p.prime_poly(PrimeId::new(2, 0)).unwrap().to_string(), "x^2+x+1");
    }

    #[test]
    fn synthetic_enumeration_matches_euler_product() {
        let pi = vec![2u32, 1, 2, 3].into_iter().map(BigUint::from).collect();
        let inst = Instance::synthetic(SyntheticInstance::from_list(2, pi).unwrap());
        assert_eq!(inst.primes(4).unwrap().len(), 3);
        for n in 0..=4 {
            let elems = inst.enumerate_upto(n).unwrap();
            assert_eq!(BigUint::from(elems.len()), inst.cumulative_count(n).unwrap());
            let set: BTreeSet<_> = elems.iter().collect();
            assert_eq!(set.len(), elems.len());
        }
    }

    #[test]
    fn norms_and_divisibility_algebra() {
        let inst = Instance::polynomial(&FieldSpec::prime(2).unwrap());
        let p = inst.as_polynomial().unwrap();
        let g = p.from_poly(&crate::ffpoly::parse_poly(p.field(), "x^2+x").unwrap()).unwrap();
        assert_eq!(g.degree(), 2);
        assert_eq!(inst.norm(&g).unwrap(), BigUint::from(4u32));
        assert_eq!(inst.norm(&SemigroupElement::identity()).unwrap(), BigUint::from(1u32));
        let bogus = SemigroupElement::prime(PrimeId::new(2, 5));
        assert_eq!(inst.gcd(&g, &bogus).unwrap_err(), Error::InstanceMismatch);
    }

    #[test]
    fn graph_instance_guards() {
        let k4 = Instance::graph(GraphSpec::complete(4).unwrap());
        assert_eq!(k4.pi(3).unwrap(), BigUint::from(8u32));
        assert_eq!(k4.norm_base(), NormBase::Integer(BigUint::from(2u32)));
        k4.require_classical().unwrap();
        let k33 = Instance::graph(GraphSpec::complete_bipartite(3, 3).unwrap());
        assert!(matches!(k33.require_classical(), Err(Error::NonClassicalInstance(_))));
    }

    #[test]
    fn enumeration_budget() {
        let inst = Instance::polynomial(&FieldSpec::prime(3).unwrap());
        assert!(matches!(
            inst.enumerate_upto_with_budget(6, 100),
            Err(Error::CountOnly(_))
        ));
    }
}
