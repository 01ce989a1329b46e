//! Omega-statistics of additive arithmetical semigroups along orbits of
//! uniquely ergodic systems.
//!
//! The crate builds semigroup instances (monic polynomials over `F_q`,
//! synthetic prime-count driven semigroups, and prime cycles of finite
//! graphs), tabulates the exact number of elements of each degree with a
//! given number of prime factors, and evaluates orbit averages, densities,
//! Weyl sums and the intermediate inequalities used to prove their limits.

pub mod acceptance;
pub mod averages;
pub mod counting;
pub mod dynamics;
pub mod error;
pub mod ffpoly;
pub mod keyprop;
pub mod numeric;
pub mod semigroup;

pub use error::{Error, Result};
