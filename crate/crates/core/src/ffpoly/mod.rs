//! Finite fields, polynomials over them, and monic factorization: the
//! polynomial semigroup `F_q[x]`.

mod factor;
mod field;
mod parse;
mod poly;

pub use factor::{factorize, Factorization};
pub use field::{FieldElement, FieldSpec};
pub use parse::parse_poly;
pub use poly::PolyFq;

/// All `q^n` monic polynomials of degree `n`, in enumeration order: the
/// coefficient vector `(c_0, ..., c_{n-1})` read as a base-`q` numeral with
/// `c_0` least significant.
pub fn enumerate_monic(field: &FieldSpec, n: usize) -> MonicIter {
    MonicIter {
        field: field.clone(),
        digits: vec![0; n],
        done: false,
    }
}

/// The monic polynomial of degree `n` at position `index` of [`enumerate_monic`].
pub fn monic_from_index(field: &FieldSpec, n: usize, mut index: u64) -> PolyFq {
    let q = field.q();
    let mut coeffs = Vec::with_capacity(n + 1);
    for _ in 0..n {
        coeffs.push(index % q);
        index /= q;
    }
    coeffs.push(1);
    PolyFq::from_raw(field, coeffs)
}

/// Odometer over monic polynomials of a fixed degree.
pub struct MonicIter {
    field: FieldSpec,
    digits: Vec<u64>,
    done: bool,
}

impl Iterator for MonicIter {
    type Item = PolyFq;

    fn next(&mut self) -> Option<PolyFq> {
        if self.done {
            return None;
        }
        let mut coeffs = self.digits.clone();
        coeffs.push(1);
        let out = PolyFq::from_raw(&self.field, coeffs);
        let q = self.field.q();
        self.done = true;
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < q {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}

/// Monic irreducibles of degree `n` in enumeration order.
pub fn irreducibles_of_degree(field: &FieldSpec, n: usize) -> Vec<PolyFq> {
    if n == 0 {
        return Vec::new();
    }
    enumerate_monic(field, n).filter(PolyFq::is_irreducible).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order_and_size() {
        let f2 = FieldSpec::prime(2).unwrap();
        let all: Vec<String> = enumerate_monic(&f2, 2).map(|p| p.to_string()).collect();
        assert_eq!(all, ["x^2", "x^2+1", "x^2+x", "x^2+x+1"]);
        assert_eq!(enumerate_monic(&f2, 0).map(|p| p.to_string()).collect::<Vec<_>>(), ["1"]);
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(enumerate_monic(&f3, 1).count(), 3);
        assert_eq!(enumerate_monic(&f3, 4).count(), 81);
    }

    #[test]
    fn index_round_trip() {
        let f3 = FieldSpec::prime(3).unwrap();
        for (i, p) in enumerate_monic(&f3, 3).enumerate() {
            assert_eq!(monic_from_index(&f3, 3, i as u64), p);
            assert_eq!(p.enumeration_index(), (i as u64).into());
        }
    }

    #[test]
    fn enumeration_is_sorted() {
        let f4 = FieldSpec::new(2, 2).unwrap();
        let all: Vec<PolyFq> = enumerate_monic(&f4, 3).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
