//! Gaussian integers and quadratic residue symbols modulo split Gaussian primes.
//!
//! A prime `p = 5 (mod 8)` splits in `Z[i]` as `p = (e + 2if)(e - 2if)` with
//! `e` odd. The residue field `Z[i]/(x + yi)` of a prime of norm `p` is
//! `F_p`, reached by sending `i` to `-x / y mod p`; every symbol here is an
//! Euler exponentiation in that field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbols::{is_prime, pow_mod, PrimePair, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> GaussianInt {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn one() -> GaussianInt {
        GaussianInt::new(1, 0)
    }

    /// `1 + i`, the prime above 2.
    pub fn one_plus_i() -> GaussianInt {
        GaussianInt::new(1, 1)
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> GaussianInt {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Image in `F_p` under `i -> i_image`.
    fn residue(&self, i_image: u64, p: u64) -> u64 {
        let p_big = BigInt::from(p);
        let v = (&self.re + &self.im * BigInt::from(i_image)).mod_floor(&p_big);
        v.to_u64().expect("reduced below p")
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for &GaussianInt {
    type Output = GaussianInt;

    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;

    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;

    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

/// A rational prime `p = 5 (mod 8)` with its Gaussian factors
/// `pi = e + 2if` (`e, f > 0`) and `pi_bar = e - 2if`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSplit {
    pub p: u64,
    pub e: u64,
    pub f: u64,
}

impl PrimeSplit {
    pub fn pi(&self) -> GaussianInt {
        GaussianInt::new(self.e, 2 * self.f)
    }

    pub fn pi_bar(&self) -> GaussianInt {
        self.pi().conj()
    }
}

pub fn split_prime(p: u64) -> Result<PrimeSplit> {
    if p % 8 != 5 {
        return Err(Error::NotFiveModEight(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    // p = e^2 + 4 f^2; scan f upward
    let mut f = 1u64;
    while 4 * f * f < p {
        let rest = p - 4 * f * f;
        let e = rest.sqrt();
        if e * e == rest {
            return Ok(PrimeSplit { p, e, f });
        }
        f += 1;
    }
    unreachable!("primes 1 mod 4 are sums of two squares")
}

/// Norm of `pi` as a prime `u64`, and the image of `i` in `Z[i]/(pi) = F_p`.
fn residue_field(pi: &GaussianInt) -> Result<(u64, u64)> {
    let norm = pi.norm();
    let p = match norm.to_u64() {
        Some(p) if p % 2 == 1 && is_prime(p) => p,
        _ => return Err(Error::NotGaussianPrime(pi.to_string())),
    };
    let p_big = BigInt::from(p);
    let x = pi.re.mod_floor(&p_big);
    let y = pi.im.mod_floor(&p_big);
    let y_inv = y.modpow(&BigInt::from(p - 2), &p_big);
    let i_image = (-(x * y_inv)).mod_floor(&p_big);
    Ok((p, i_image.to_u64().expect("reduced below p")))
}

/// The quadratic residue symbol `(alpha / pi)` for a Gaussian prime `pi` of
/// odd prime norm.
pub fn gauss_symbol(alpha: &GaussianInt, pi: &GaussianInt) -> Result<Sign> {
    let (p, i_image) = residue_field(pi)?;
    let a = alpha.residue(i_image, p);
    if a == 0 {
        return Err(Error::DivisibleByPrime {
            alpha: alpha.to_string(),
            pi: pi.to_string(),
        });
    }
    let r = pow_mod(a, (p - 1) / 2, p);
    debug_assert!(r == 1 || r == p - 1);
    Ok(if r == 1 { Sign::Plus } else { Sign::Minus })
}

/// `(pi1 / pi3)`.
pub fn symbol_pi(split1: &PrimeSplit, split2: &PrimeSplit) -> Result<Sign> {
    gauss_symbol(&split1.pi(), &split2.pi())
}

/// `(1+i / pi1)(1+i / pi3)`.
pub fn symbol_b(split1: &PrimeSplit, split2: &PrimeSplit) -> Result<Sign> {
    let t = GaussianInt::one_plus_i();
    Ok(gauss_symbol(&t, &split1.pi())? * gauss_symbol(&t, &split2.pi())?)
}

/// Splits of both primes of a pair.
pub fn split_pair(pair: &PrimePair) -> (PrimeSplit, PrimeSplit) {
    (
        split_prime(pair.p1()).expect("validated pair"),
        split_prime(pair.p2()).expect("validated pair"),
    )
}

/// Sign of `alpha` modulo the prime `pi` when `alpha` is a rational integer.
pub fn gauss_symbol_int(a: i64, pi: &GaussianInt) -> Result<Sign> {
    gauss_symbol(&GaussianInt::new(a, 0), pi)
}
