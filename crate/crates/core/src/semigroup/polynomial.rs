use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;

use super::element::{PrimeId, SemigroupElement};
use crate::counting::arith::pi_from_gauss;
use crate::error::{Error, Result};
use crate::ffpoly::{factorize, irreducibles_of_degree, FieldSpec, PolyFq};

/// Largest `q^n` for which the irreducibles of degree `n` are listed.
const LISTING_LIMIT: u128 = 1 << 24;

/// Monic polynomials over `F_q`. Prime `(d, i)` is the `i`-th monic
/// irreducible of degree `d` in enumeration order.
#[derive(Clone, Debug)]
pub struct PolynomialInstance {
    field: FieldSpec,
    tables: Arc<Mutex<HashMap<usize, Arc<Vec<PolyFq>>>>>,
}

impl PolynomialInstance {
    pub fn new(field: &FieldSpec) -> Self {
        PolynomialInstance {
            field: field.clone(),
            tables: Arc::default(),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn pi_table(&self, nmax: usize) -> Vec<BigUint> {
        let q = self.field.q_big();
        std::iter::once(BigUint::default())
            .chain((1..=nmax).map(|n| pi_from_gauss(&q, n)))
            .collect()
    }

    /// The monic irreducibles of degree `n`, listed once and cached.
    pub fn irreducibles(&self, n: usize) -> Result<Arc<Vec<PolyFq>>> {
        if let Some(t) = self.tables.lock().expect("cache lock").get(&n) {
            return Ok(t.clone());
        }
        let size = (self.field.q() as u128).checked_pow(n as u32);
        if size.is_none_or(|s| s > LISTING_LIMIT) {
            return Err(Error::CountOnly(format!(
                "listing irreducibles of degree {n} over F_{} needs q^n > 2^24 tests",
                self.field.q()
            )));
        }
        let list = Arc::new(irreducibles_of_degree(&self.field, n));
        self.tables
            .lock()
            .expect("cache lock")
            .insert(n, list.clone());
        Ok(list)
    }

    pub fn prime_poly(&self, p: PrimeId) -> Result<PolyFq> {
        self.irreducibles(p.degree)?
            .get(p.index as usize)
            .cloned()
            .ok_or(Error::InstanceMismatch)
    }

    pub fn to_poly(&self, g: &SemigroupElement) -> Result<PolyFq> {
        let mut acc = PolyFq::one(&self.field);
        for &(p, m) in g.parts() {
            acc = acc.mul(&self.prime_poly(p)?.pow(m))?;
        }
        Ok(acc)
    }

    pub fn from_poly(&self, m: &PolyFq) -> Result<SemigroupElement> {
        if m.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        let fac = factorize(m)?;
        let mut parts = Vec::with_capacity(fac.parts().len());
        for (p, e) in fac.parts() {
            let d = p.degree().expect("irreducibles are nonzero");
            let table = self.irreducibles(d)?;
            let index = table
                .binary_search(p)
                .expect("every irreducible is listed");
            parts.push((PrimeId::new(d, index as u64), *e));
        }
        Ok(SemigroupElement::from_parts(parts))
    }
}
