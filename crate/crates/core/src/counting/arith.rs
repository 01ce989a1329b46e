//! Integer Möbius function, divisor lists and the Gauss count of irreducibles.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

/// `mu[n]` for `0 <= n <= limit` (`mu[0]` is unused and set to 0).
pub fn mobius_sieve(limit: usize) -> Vec<i8> {
    let mut mu = vec![1i8; limit + 1];
    if limit == 0 {
        mu[0] = 0;
        return mu;
    }
    mu[0] = 0;
    let mut composite = vec![false; limit + 1];
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        for j in (i..=limit).step_by(i) {
            if j > i {
                composite[j] = true;
            }
            mu[j] = -mu[j];
        }
        if let Some(sq) = i.checked_mul(i) {
            for j in (sq..=limit).step_by(sq) {
                mu[j] = 0;
            }
        }
    }
    mu
}

pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Number of monic irreducibles of degree `n` over `F_q`:
/// `(1/n) * sum_{d | n} mu(d) q^(n/d)`.
pub fn pi_from_gauss(q: &BigUint, n: usize) -> BigUint {
    assert!(n >= 1, "degree must be positive");
    let mu = mobius_sieve(n);
    let mut acc = BigInt::zero();
    for d in divisors(n) {
        let term = BigInt::from(q.pow((n / d) as u32));
        match mu[d] {
            1 => acc += term,
            -1 => acc -= term,
            _ => {}
        }
    }
    let (quot, rem) = (&acc / n, &acc % n);
    debug_assert!(rem.is_zero() && !quot.is_negative());
    quot.to_biguint().expect("prime counts are nonnegative")
}

/// `sum_{d | n} d * pi(d)`, with `pi[d]` the count in degree `d` (`pi[0]` ignored).
pub fn lambda_from_pi(pi: &[BigUint], n: usize) -> BigUint {
    divisors(n).into_iter().map(|d| &pi[d] * d).sum()
}

/// Möbius inversion of the previous map: `(1/n) sum_{d | n} mu(n/d) lambda(d)`.
/// Returns `None` if the result is not a nonnegative integer.
pub fn pi_from_lambda(lambda: &[BigInt], n: usize) -> Option<BigUint> {
    let mu = mobius_sieve(n);
    let mut acc = BigInt::zero();
    for d in divisors(n) {
        match mu[n / d] {
            1 => acc += &lambda[d],
            -1 => acc -= &lambda[d],
            _ => {}
        }
    }
    if !(&acc % n).is_zero() {
        return None;
    }
    (acc / n).to_biguint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_small_values() {
        let mu = mobius_sieve(12);
        assert_eq!(&mu[1..], &[1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn gauss_counts() {
        let two = BigUint::from(2u32);
        let got: Vec<BigUint> = (1..=6).map(|n| pi_from_gauss(&two, n)).collect();
        let want: Vec<BigUint> = [2u32, 1, 2, 3, 6, 9].into_iter().map(BigUint::from).collect();
        assert_eq!(got, want);
        assert_eq!(pi_from_gauss(&BigUint::from(3u32), 2), BigUint::from(3u32));
        for q in [2u32, 3, 4, 5, 7, 9] {
            assert_eq!(pi_from_gauss(&BigUint::from(q), 1), BigUint::from(q));
        }
    }

    #[test]
    fn inversion_round_trip() {
        let q = BigUint::from(3u32);
        let n = 30;
        let mut pi = vec![BigUint::zero()];
        pi.extend((1..=n).map(|d| pi_from_gauss(&q, d)));
        let lambda: Vec<BigInt> = std::iter::once(BigInt::zero())
            .chain((1..=n).map(|m| BigInt::from(lambda_from_pi(&pi, m))))
            .collect();
        for m in 1..=n {
            assert_eq!(lambda[m], BigInt::from(q.pow(m as u32)));
            assert_eq!(pi_from_lambda(&lambda, m).unwrap(), pi[m]);
        }
    }
}
