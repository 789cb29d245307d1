//! Primality testing, Jacobi symbols and small-prime trial factoring.
//!
//! Below `2^64` the Miller-Rabin witness set {2, ..., 37} is deterministic.
//! Above it we run Baillie-PSW (strong base-2 test plus strong Lucas test with
//! Selfridge parameters).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::pow_mod_u64;
use super::ArithError;

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Primes below `bound` by the sieve of Eratosthenes.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

fn mr_round_u64(n: u64, d: u64, s: u32, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = ((x as u128 * x as u128) % n as u128) as u64;
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &SMALL_PRIMES {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    SMALL_PRIMES.iter().all(|&a| mr_round_u64(n, d, s, a))
}

/// Strong probable-prime test to base `a` for odd `n > 2`.
pub fn is_strong_probable_prime(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let a = a % n;
    if a.is_zero() {
        return true;
    }
    let mut x = a.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i8, ArithError> {
    if !n.is_positive() || n.is_even() {
        return Err(ArithError::EvenModulus(n.to_string()));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i8;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = &n % &eight;
            if r == three || r == five {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if &a % &four == three && &n % &four == three {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { t } else { 0 })
}

fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
pub fn is_strong_lucas_probable_prime(n: &BigUint) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    let ni = BigInt::from(n.clone());
    // D = 5, -7, 9, -11, ...
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &ni).expect("odd n") {
            -1 => break,
            0
                if d.abs() != ni => {
                    return false;
                }
            _ => {}
        }
        d = if d.is_positive() {
            -(&d + 2i32)
        } else {
            -(&d - 2i32)
        };
    }
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / 4u32;
    let m: BigInt = &ni + 1u32;
    let s = m.trailing_zeros().unwrap_or(0);
    let k = &m >> s;

    let half = |x: BigInt| -> BigInt {
        let x = x.mod_floor(&ni);
        if x.is_odd() {
            (x + &ni) >> 1
        } else {
            x >> 1
        }
    };

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&ni);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&ni);
        v = (&v * &v - &qk * 2u32).mod_floor(&ni);
        qk = (&qk * &qk).mod_floor(&ni);
        if k.bit(i) {
            let nu = half(&p * &u + &v);
            let nv = half(&d * &u + &p * &v);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(&ni);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2u32).mod_floor(&ni);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&ni);
    }
    false
}

/// Primality of an arbitrary non-negative integer.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(x) = n.to_u64() {
        return is_prime_u64(x);
    }
    for q in primes_below(1000) {
        if (n % q).is_zero() {
            return false;
        }
    }
    is_strong_probable_prime(n, &BigUint::from(2u32)) && is_strong_lucas_probable_prime(n)
}

/// [`is_prime`] plus an extra round of strong tests with bases independent of
/// the Baillie-PSW pair. Used where a false positive would corrupt a bound.
pub fn is_prime_redundant(n: &BigUint) -> bool {
    if !is_prime(n) {
        return false;
    }
    if n.to_u64().is_some() {
        return true;
    }
    [3u32, 5, 7, 11, 13, 17, 19, 23]
        .iter()
        .all(|&a| is_strong_probable_prime(n, &BigUint::from(a)))
}

/// Strips all prime factors below `bound` from `|n|`.
///
/// Returns the factorization found (prime, exponent) and the remaining
/// cofactor (positive).
pub fn trial_factor(n: &BigInt, bound: u64) -> (Vec<(u64, u32)>, BigUint) {
    let mut m = n.magnitude().clone();
    let mut out = Vec::new();
    if m.is_zero() {
        return (out, m);
    }
    for q in primes_below(bound) {
        if m.is_one() {
            break;
        }
        let mut e = 0u32;
        loop {
            let (quo, rem) = m.div_rem(&BigUint::from(q));
            if !rem.is_zero() {
                break;
            }
            m = quo;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
    }
    (out, m)
}

/// `q`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, q: &BigUint) -> u32 {
    let mut m = n.magnitude().clone();
    if m.is_zero() {
        return u32::MAX;
    }
    let mut e = 0;
    loop {
        let (quo, rem) = m.div_rem(q);
        if !rem.is_zero() {
            return e;
        }
        m = quo;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn trial_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn agrees_with_trial_division_to_a_million() {
        let sieve: std::collections::HashSet<u64> = primes_below(1_000_001).into_iter().collect();
        for n in 0..=1_000_000u64 {
            assert_eq!(is_prime_u64(n), sieve.contains(&n), "n = {n}");
        }
        for n in [0u64, 1, 2, 3, 4, 561, 1105, 7919, 999_983] {
            assert_eq!(is_prime_u64(n), trial_is_prime(n));
        }
    }

    #[test]
    fn big_known_values() {
        let p = BigUint::from_str("982149821766199295999").unwrap();
        assert!(is_prime(&p));
        assert!(is_prime_redundant(&p));
        // 2^89 - 1 is a Mersenne prime, 2^83 - 1 is not.
        let m89 = (BigUint::one() << 89u32) - 1u32;
        let m83 = (BigUint::one() << 83u32) - 1u32;
        assert!(is_prime(&m89));
        assert!(!is_prime(&m83));
        // Product of two primes above 2^32.
        let c = BigUint::from(4294967311u64) * BigUint::from(4294967357u64);
        assert!(!is_prime(&c));
    }

    #[test]
    fn lucas_rejects_strong_base2_pseudoprimes() {
        // 3215031751 is a strong pseudoprime to bases 2, 3, 5, 7.
        let n = BigUint::from(3215031751u64);
        assert!(is_strong_probable_prime(&n, &BigUint::from(2u32)));
        assert!(!is_strong_lucas_probable_prime(&n));
    }

    #[test]
    fn jacobi_values() {
        let j = |a: i64, n: i64| jacobi(&BigInt::from(a), &BigInt::from(n)).unwrap();
        assert_eq!(j(1, 23), 1);
        assert_eq!(j(5, 23), -1);
        assert_eq!(j(0, 23), 0);
        assert!(jacobi(&BigInt::from(3), &BigInt::from(10)).is_err());
        // Against Euler's criterion for a prime modulus.
        for a in 0..23 {
            let e = pow_mod_u64(a, 11, 23);
            let expect = match e {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            assert_eq!(j(a as i64, 23), expect);
        }
    }

    #[test]
    fn trial_factor_splits_small_part() {
        let n = BigInt::from(-(2i64.pow(5) * 3i64.pow(2) * 1_000_003));
        let (f, c) = trial_factor(&n, 1000);
        assert_eq!(f, vec![(2, 5), (3, 2)]);
        assert_eq!(c, BigUint::from(1_000_003u32));
    }
}
