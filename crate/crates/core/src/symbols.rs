//! Residue symbols over the rational integers.
//!
//! Jacobi symbols by binary reciprocity, rational quartic residue symbols by
//! Euler exponentiation, the `(x/2)_4` convention for `x = 1 mod 8`, and the
//! validation of the prime pairs `p1 = p2 = 5 (mod 8)` the rest of the crate
//! works with.

use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A value in `{+1, -1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    /// `(-1)^k`.
    pub fn from_parity(k: u64) -> Sign {
        if k % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Sign, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("{other} is not a sign")),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: i64) -> Result<i8> {
    if n <= 0 || n % 2 == 0 {
        return Err(Error::BadModulus(n));
    }
    let mut n = n as u64;
    let mut a = reduce(a, n);
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// The Legendre symbol of `a` modulo the odd prime `p`, as a `Sign`.
/// Fails when `p` divides `a`.
pub fn legendre(a: i64, p: u64) -> Result<Sign> {
    match jacobi(a, p as i64)? {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        _ => Err(Error::NotQuadraticResidue { a, p }),
    }
}

/// The rational quartic residue symbol `(a/p)_4 = a^((p-1)/4) mod p`.
pub fn quartic_symbol(a: i64, p: u64) -> Result<Sign> {
    if p % 4 != 1 {
        return Err(Error::NotOneModFour(p));
    }
    if jacobi(a, p as i64)? != 1 {
        return Err(Error::NotQuadraticResidue { a, p });
    }
    let r = pow_mod(reduce(a, p), (p - 1) / 4, p);
    if r == 1 {
        Ok(Sign::Plus)
    } else if r == p - 1 {
        Ok(Sign::Minus)
    } else {
        // only reachable when p is composite
        Err(Error::NotPrime(p))
    }
}

/// `(x/2)_4 = (-1)^((x-1)/8)` for `x = 1 (mod 8)`.
pub fn quartic_symbol_mod2(x: i64) -> Result<Sign> {
    if x.rem_euclid(8) != 1 {
        return Err(Error::NotOneModEight(x));
    }
    Ok(Sign::from_parity(((x - 1) / 8).rem_euclid(2) as u64))
}

/// Two distinct primes, both `5 (mod 8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePair {
    p1: u64,
    p2: u64,
}

impl PrimePair {
    pub fn p1(&self) -> u64 {
        self.p1
    }

    pub fn p2(&self) -> u64 {
        self.p2
    }

    /// `p1 * p2`, the radicand of `k1 = Q(sqrt(p1 p2))`.
    pub fn r(&self) -> u64 {
        self.p1 * self.p2
    }

    /// `d = 2 p1 p2`.
    pub fn d(&self) -> u64 {
        2 * self.p1 * self.p2
    }

    pub fn swapped(&self) -> PrimePair {
        PrimePair {
            p1: self.p2,
            p2: self.p1,
        }
    }

    /// The same pair with `p1 < p2`.
    pub fn ordered(&self) -> PrimePair {
        if self.p1 < self.p2 {
            *self
        } else {
            self.swapped()
        }
    }

    /// `(p1/p2)`.
    pub fn legendre(&self) -> Sign {
        legendre(self.p1 as i64, self.p2).expect("distinct primes")
    }
}

impl fmt::Display for PrimePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p1, self.p2)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 8 != 5 {
        return Err(Error::NotFiveModEight(p));
    }
    Ok(())
}

pub fn validate_pair(p1: u64, p2: u64) -> Result<PrimePair> {
    check_prime(p1)?;
    check_prime(p2)?;
    if p1 == p2 {
        return Err(Error::EqualPrimes(p1));
    }
    Ok(PrimePair { p1, p2 })
}

/// Primes `p = 5 (mod 8)` with `p <= max`, ascending.
pub fn primes_five_mod_eight(max: u64) -> Vec<u64> {
    (5..=max).step_by(8).filter(|&p| is_prime(p)).collect()
}

/// All valid pairs `p1 < p2 <= max`, in lexicographic order.
pub fn pairs_up_to(max: u64) -> Vec<PrimePair> {
    let primes = primes_five_mod_eight(max);
    let mut out = Vec::new();
    for (i, &p1) in primes.iter().enumerate() {
        for &p2 in &primes[i + 1..] {
            out.push(PrimePair { p1, p2 });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_legendre(a: i64, p: u64) -> i8 {
        let a = reduce(a, p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(5, 13).unwrap(), -1);
        assert_eq!(jacobi(5, 29).unwrap(), 1);
        assert_eq!(jacobi(13, 13).unwrap(), 0);
        assert_eq!(jacobi(-1, 5).unwrap(), 1);
        assert_eq!(jacobi(2, 15).unwrap(), 1);
    }

    #[test]
    fn jacobi_rejects_bad_modulus() {
        assert_eq!(jacobi(3, 8), Err(Error::BadModulus(8)));
        assert_eq!(jacobi(3, -7), Err(Error::BadModulus(-7)));
        assert_eq!(jacobi(3, 0), Err(Error::BadModulus(0)));
    }

    #[test]
    fn jacobi_matches_euler_for_small_primes() {
        for p in (3..200u64).filter(|&p| is_prime(p)) {
            for a in -20..60i64 {
                assert_eq!(jacobi(a, p as i64).unwrap(), brute_legendre(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn reciprocity_for_primes_one_mod_four() {
        let primes: Vec<u64> = (5..1000).filter(|&p| p % 4 == 1 && is_prime(p)).collect();
        for &p in &primes {
            for &q in &primes {
                if p != q {
                    assert_eq!(jacobi(p as i64, q as i64), jacobi(q as i64, p as i64));
                }
            }
        }
    }

    #[test]
    fn quartic_examples() {
        // 5^7 = 78125 = 29 * 2694 + 19 and 19 = -10... computed by the oracle below
        assert_eq!(quartic_symbol(5, 29).unwrap(), Sign::Minus);
        assert_eq!(quartic_symbol(29, 5).unwrap(), Sign::Minus);
        for p in [5u64, 13, 29, 37, 53] {
            assert_eq!(quartic_symbol(1, p).unwrap(), Sign::Plus);
        }
    }

    #[test]
    fn quartic_errors() {
        assert_eq!(quartic_symbol(2, 7), Err(Error::NotOneModFour(7)));
        assert_eq!(quartic_symbol(2, 13), Err(Error::NotQuadraticResidue { a: 2, p: 13 }));
    }

    #[test]
    fn quartic_matches_fourth_power_enumeration() {
        for p in (5..200u64).filter(|&p| p % 4 == 1 && is_prime(p)) {
            let fourth: Vec<u64> = (1..p).map(|x| pow_mod(x, 4, p)).collect();
            for a in 1..p {
                if brute_legendre(a as i64, p) != 1 {
                    continue;
                }
                let s = quartic_symbol(a as i64, p).unwrap();
                assert_eq!(s * s, Sign::Plus);
                assert_eq!(s == Sign::Plus, fourth.contains(&a), "({a}/{p})_4");
            }
        }
    }

    #[test]
    fn quartic_mod2_examples() {
        assert_eq!(quartic_symbol_mod2(65).unwrap(), Sign::Plus);
        assert_eq!(quartic_symbol_mod2(185).unwrap(), Sign::Minus);
        assert_eq!(quartic_symbol_mod2(1).unwrap(), Sign::Plus);
        assert_eq!(quartic_symbol_mod2(5), Err(Error::NotOneModEight(5)));
    }

    #[test]
    fn validate_pair_examples() {
        let pair = validate_pair(5, 13).unwrap();
        assert_eq!(pair.d(), 130);
        assert_eq!(validate_pair(5, 17), Err(Error::NotFiveModEight(17)));
        assert_eq!(validate_pair(5, 5), Err(Error::EqualPrimes(5)));
        assert_eq!(validate_pair(21, 13), Err(Error::NotPrime(21)));
        assert_eq!(validate_pair(5, 3), Err(Error::NotFiveModEight(3)));
    }

    #[test]
    fn two_is_a_non_residue_for_accepted_primes() {
        for p in primes_five_mod_eight(2000) {
            assert_eq!(jacobi(2, p as i64).unwrap(), -1);
        }
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0..5000u64 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "{n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn pair_enumeration() {
        let pairs = pairs_up_to(61);
        let expect = [5u64, 13, 29, 37, 53, 61];
        assert_eq!(primes_five_mod_eight(61), expect);
        assert_eq!(pairs.len(), 15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn jacobi_is_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, k in 0i64..5_000) {
                let n = 2 * k + 1;
                let lhs = jacobi(a * b, n).unwrap();
                prop_assert_eq!(lhs, jacobi(a, n).unwrap() * jacobi(b, n).unwrap());
            }
        }
    }
}
