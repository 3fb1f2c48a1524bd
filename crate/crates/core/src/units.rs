//! Fundamental units of real quadratic fields by continued fractions.
//!
//! For `m = 1 (mod 4)` the expansion is of `(1 + sqrt m)/2`, otherwise of
//! `sqrt m`. Complete quotients are `(P + sqrt D)/Q`; the expansion is purely
//! periodic from the first complete quotient on, and the convergent just
//! before the end of the first period yields the fundamental unit with norm
//! `(-1)^period`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symbols::Sign;

/// `(u + v sqrt m) / w` with `w` in `{1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadUnit {
    pub u: BigInt,
    pub v: BigInt,
    pub w: u8,
    pub m: u64,
    pub norm: Sign,
    /// Length of the continued-fraction period.
    pub period: usize,
}

impl QuadUnit {
    /// `u^2 - m v^2`, which equals `w^2 * norm`.
    pub fn scaled_norm(&self) -> BigInt {
        &self.u * &self.u - BigInt::from(self.m) * &self.v * &self.v
    }
}

impl fmt::Display for QuadUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w == 1 {
            write!(f, "{} + {}*sqrt({})", self.u, self.v, self.m)
        } else {
            write!(f, "({} + {}*sqrt({}))/2", self.u, self.v, self.m)
        }
    }
}

pub fn is_squarefree(m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let mut n = m;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn fundamental_unit(m: u64) -> Result<QuadUnit> {
    if m <= 1 || !is_squarefree(m) {
        return Err(Error::BadRadicand(m as i64));
    }
    let d = m as i128;
    let s = m.sqrt() as i128;
    let (p0, q0): (i128, i128) = if m % 4 == 1 { (1, 2) } else { (0, 1) };

    let (mut p, mut q) = (p0, q0);
    // convergents h_k / k_k
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut start = None;
    let mut index = 0usize;
    loop {
        let a = (p + s).div_euclid(q);
        let h_next = BigInt::from(a) * &h + &h_prev;
        let k_next = BigInt::from(a) * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        p = a * q - p;
        q = (d - p * p) / q;
        index += 1;
        match start {
            None => start = Some((p, q)),
            Some(first) if first == (p, q) => break,
            Some(_) => {}
        }
    }
    // the first period spans indices 1..=index-1; the unit comes from the
    // convergent with index `period - 1`, which is (h_prev, k_prev)
    let period = index - 1;
    let (h, k) = (h_prev, k_prev);
    let norm = Sign::from_parity(period as u64);
    let (u, v, w) = if m % 4 == 1 {
        // h - k * conj(omega) = (2h - k + k sqrt m) / 2
        let u = BigInt::from(2) * &h - &k;
        if (&k % 2u32).is_zero() {
            (u / 2, k / 2, 1u8)
        } else {
            (u, k, 2u8)
        }
    } else {
        (h, k, 1u8)
    };
    let unit = QuadUnit {
        u,
        v,
        w,
        m,
        norm,
        period,
    };
    let expected = BigInt::from(unit.w) * BigInt::from(unit.w) * BigInt::from(norm.value());
    if unit.scaled_norm() != expected {
        return Err(Error::Consistency {
            rule: "continued-fraction unit norm",
            detail: format!("{unit} has u^2 - m v^2 = {}", unit.scaled_norm()),
        });
    }
    Ok(unit)
}

pub fn norm_eps(m: u64) -> Result<Sign> {
    Ok(fundamental_unit(m)?.norm)
}

/// The fundamental unit of `Q(sqrt m)` with integral coordinates; fails
/// with a diagnostic if it needs the denominator 2.
pub fn integral_unit(m: u64) -> Result<QuadUnit> {
    let unit = fundamental_unit(m)?;
    if unit.w != 1 {
        return Err(Error::Consistency {
            rule: "integral fundamental unit",
            detail: format!("fundamental unit {unit} of Q(sqrt {m}) has half-integral coordinates"),
        });
    }
    Ok(unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::pairs_up_to;

    #[test]
    fn examples() {
        let e = fundamental_unit(2).unwrap();
        assert_eq!(
            (e.u.clone(), e.v.clone(), e.w, e.norm),
            (1.into(), 1.into(), 1, Sign::Minus)
        );
        let e = fundamental_unit(65).unwrap();
        assert_eq!(
            (e.u.clone(), e.v.clone(), e.w, e.norm),
            (8.into(), 1.into(), 1, Sign::Minus)
        );
        assert_eq!(norm_eps(130).unwrap(), Sign::Minus);
        let e = fundamental_unit(5).unwrap();
        assert_eq!((e.u.clone(), e.v.clone(), e.w), (1.into(), 1.into(), 2));
        let e = fundamental_unit(13).unwrap();
        assert_eq!((e.u.clone(), e.v.clone(), e.w), (3.into(), 1.into(), 2));
        let e = fundamental_unit(3).unwrap();
        assert_eq!((e.u.clone(), e.v.clone(), e.norm), (2.into(), 1.into(), Sign::Plus));
        let e = fundamental_unit(94).unwrap();
        assert_eq!((e.u.clone(), e.v.clone()), (2143295.into(), 221064.into()));
    }

    #[test]
    fn rejects_bad_radicands() {
        assert_eq!(fundamental_unit(1), Err(Error::BadRadicand(1)));
        assert_eq!(fundamental_unit(0), Err(Error::BadRadicand(0)));
        assert_eq!(fundamental_unit(12), Err(Error::BadRadicand(12)));
        assert_eq!(fundamental_unit(50), Err(Error::BadRadicand(50)));
    }

    /// Oracle: the unit `(u + v sqrt m)/w > 1` with the smallest `v`, then `u`.
    fn brute_unit(m: u64, vmax: u64) -> Option<(u64, u64, u8, i8)> {
        let w: u64 = if m % 4 == 1 { 2 } else { 1 };
        for v in 1..=vmax {
            let base = m as u128 * (v as u128) * (v as u128);
            let mut best = None;
            for (sign, delta) in [(-1i8, -((w * w) as i128)), (1, (w * w) as i128)] {
                let t = base as i128 + delta;
                if t <= 0 {
                    continue;
                }
                let r = (t as u128).sqrt();
                if r * r == t as u128 {
                    let cand = (r as u64, sign);
                    best = match best {
                        None => Some(cand),
                        Some(b) if cand.0 < b.0 => Some(cand),
                        other => other,
                    };
                }
            }
            if let Some((u, sign)) = best {
                if w == 2 && u % 2 == 0 && v % 2 == 0 {
                    return Some((u / 2, v / 2, 1, sign));
                }
                return Some((u, v, w as u8, sign));
            }
        }
        None
    }

    #[test]
    fn agrees_with_pell_search() {
        for m in (2..400).filter(|&m| is_squarefree(m)) {
            let e = fundamental_unit(m).unwrap();
            let small = e.v <= BigInt::from(20_000u32);
            match brute_unit(m, 20_000) {
                Some((u, v, w, sign)) => {
                    assert!(small, "m = {m}");
                    assert_eq!(
                        (e.u.clone(), e.v.clone(), e.w, e.norm.value()),
                        (u.into(), v.into(), w, sign),
                        "m = {m}"
                    );
                }
                None => assert!(!small, "m = {m}"),
            }
        }
    }

    #[test]
    fn pair_radicands() {
        for pair in pairs_up_to(500) {
            assert_eq!(norm_eps(pair.d()).unwrap(), Sign::Minus, "{pair}");
            let e = integral_unit(pair.r()).unwrap();
            if pair.legendre() == Sign::Minus {
                assert_eq!(e.norm, Sign::Minus, "{pair}");
            }
        }
    }
}
