use num_bigint::BigUint;

use crate::counting::arith::pi_from_gauss;
use crate::error::{Error, Result};

/// Where a synthetic instance gets its prime counts.
#[derive(Clone, Debug, PartialEq)]
pub enum PiSource {
    /// The counts of monic irreducibles over `F_q`.
    Gauss,
    /// Explicit `pi(1), pi(2), ...`; degrees past the end are unavailable.
    List(Vec<BigUint>),
}

/// A semigroup known only through `q` and `pi(n)`; its primes are opaque
/// `(degree, index)` tokens.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticInstance {
    q: u64,
    pi: PiSource,
}

impl SyntheticInstance {
    pub fn gauss(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidInput(format!("norm base q = {q} must exceed 1")));
        }
        Ok(SyntheticInstance { q, pi: PiSource::Gauss })
    }

    pub fn from_list(q: u64, pi: Vec<BigUint>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidInput(format!("norm base q = {q} must exceed 1")));
        }
        Ok(SyntheticInstance { q, pi: PiSource::List(pi) })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn source(&self) -> &PiSource {
        &self.pi
    }

    /// Largest degree with a known prime count, if bounded.
    pub fn max_degree(&self) -> Option<usize> {
        match &self.pi {
            PiSource::Gauss => None,
            PiSource::List(v) => Some(v.len()),
        }
    }

    pub fn label(&self) -> String {
        match &self.pi {
            PiSource::Gauss => format!("synthetic:q={},pi=gauss", self.q),
            PiSource::List(v) => format!(
                "synthetic:q={},pi={}",
                self.q,
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("/")
            ),
        }
    }

    pub fn pi_table(&self, nmax: usize) -> Result<Vec<BigUint>> {
        let mut out = vec![BigUint::default()];
        match &self.pi {
            PiSource::Gauss => {
                let q = BigUint::from(self.q);
                out.extend((1..=nmax).map(|n| pi_from_gauss(&q, n)));
            }
            PiSource::List(v) => {
                if nmax > v.len() {
                    return Err(Error::InvalidInput(format!(
                        "prime counts known only up to degree {}, {nmax} requested",
                        v.len()
                    )));
                }
                out.extend(v[..nmax].iter().cloned());
            }
        }
        Ok(out)
    }
}
