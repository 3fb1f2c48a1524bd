//! The unit index `q` of `Q(sqrt 2, sqrt(p1 p2))`: whether
//! `eps_2 * eps_r * eps_2r` (`r = p1 p2`) is a square there.
//!
//! The square test is numeric-then-exact: real conjugates of the target give
//! candidate coordinates of a square root, which are rounded to half-integers
//! and accepted only if the exact square reproduces the target.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::symbols::{quartic_symbol, quartic_symbol_mod2, PrimePair, Sign};
use crate::units::{fundamental_unit, integral_unit, QuadUnit};

/// Fractional bits of the first attempt and of the last.
pub const START_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 8192;

/// `(c0 + c1 sqrt 2 + c2 sqrt r + c3 sqrt(2r)) / den` with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiQuadElt {
    pub r: u64,
    pub num: [BigInt; 4],
    pub den: BigInt,
}

impl fmt::Display for MultiQuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2, c3] = &self.num;
        write!(
            f,
            "({c0} + {c1}*sqrt2 + {c2}*sqrt{r} + {c3}*sqrt{two_r})/{den}",
            r = self.r,
            two_r = 2 * self.r,
            den = self.den
        )
    }
}

impl MultiQuadElt {
    pub fn from_ints(r: u64, c: [i64; 4]) -> MultiQuadElt {
        MultiQuadElt {
            r,
            num: c.map(BigInt::from),
            den: BigInt::one(),
        }
    }

    pub fn one(r: u64) -> MultiQuadElt {
        Self::from_ints(r, [1, 0, 0, 0])
    }

    /// Embeds a unit of `Q(sqrt 2)`, `Q(sqrt r)` or `Q(sqrt 2r)`.
    pub fn from_unit(r: u64, unit: &QuadUnit) -> MultiQuadElt {
        let slot = if unit.m == 2 {
            1
        } else if unit.m == r {
            2
        } else if unit.m == 2 * r {
            3
        } else {
            panic!("Q(sqrt {}) is not a subfield of Q(sqrt 2, sqrt {r})", unit.m)
        };
        let mut num = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        num[0] = unit.u.clone();
        num[slot] = unit.v.clone();
        MultiQuadElt {
            r,
            num,
            den: BigInt::from(unit.w),
        }
        .normalized()
    }

    fn normalized(mut self) -> MultiQuadElt {
        let mut g = self.den.clone();
        for c in &self.num {
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
        self
    }

    pub fn mul(&self, other: &MultiQuadElt) -> MultiQuadElt {
        assert_eq!(self.r, other.r);
        let r = BigInt::from(self.r);
        let [x0, x1, x2, x3] = &self.num;
        let [y0, y1, y2, y3] = &other.num;
        let two = BigInt::from(2);
        let c0 = x0 * y0 + &two * x1 * y1 + &r * x2 * y2 + &two * &r * x3 * y3;
        let c1 = x0 * y1 + x1 * y0 + &r * (x2 * y3 + x3 * y2);
        let c2 = x0 * y2 + x2 * y0 + &two * (x1 * y3 + x3 * y1);
        let c3 = x0 * y3 + x3 * y0 + x1 * y2 + x2 * y1;
        MultiQuadElt {
            r: self.r,
            num: [c0, c1, c2, c3],
            den: &self.den * &other.den,
        }
        .normalized()
    }

    /// The conjugate sending `sqrt 2 -> s2 sqrt 2` and `sqrt r -> sr sqrt r`.
    pub fn conjugate(&self, s2: Sign, sr: Sign) -> MultiQuadElt {
        let [c0, c1, c2, c3] = self.num.clone();
        let flip = |c: BigInt, s: Sign| if s.is_plus() { c } else { -c };
        MultiQuadElt {
            r: self.r,
            num: [c0, flip(c1, s2), flip(c2, sr), flip(c3, s2 * sr)],
            den: self.den.clone(),
        }
    }

    /// Exact sign of the real number obtained under the given conjugation.
    pub fn conjugate_sign(&self, s2: Sign, sr: Sign) -> Ordering {
        let c = self.conjugate(s2, sr);
        let [c0, c1, c2, c3] = &c.num;
        let sa = sign_sqrt2(c0, c1);
        let sb = sign_sqrt2(c2, c3);
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // compare A^2 with r B^2 where A = c0 + c1 sqrt2, B = c2 + c3 sqrt2
        let r = BigInt::from(self.r);
        let two = BigInt::from(2);
        let d0 = c0 * c0 + &two * c1 * c1 - &r * (c2 * c2 + &two * c3 * c3);
        let d1 = &two * (c0 * c1 - &r * c2 * c3);
        match sign_sqrt2(&d0, &d1) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == MultiQuadElt::one(self.r)
    }
}

/// Sign of `a + b sqrt 2`.
fn sign_sqrt2(a: &BigInt, b: &BigInt) -> Ordering {
    let sa = a.sign();
    let sb = b.sign();
    let ord = |s: BigSign| match s {
        BigSign::Minus => Ordering::Less,
        BigSign::NoSign => Ordering::Equal,
        BigSign::Plus => Ordering::Greater,
    };
    if sb == BigSign::NoSign || sa == sb {
        return if sa == BigSign::NoSign { ord(sb) } else { ord(sa) };
    }
    if sa == BigSign::NoSign {
        return ord(sb);
    }
    match (a * a).cmp(&(BigInt::from(2) * b * b)) {
        Ordering::Greater => ord(sa),
        Ordering::Less => ord(sb),
        Ordering::Equal => Ordering::Equal,
    }
}

/// `floor(|c| sqrt(k) 2^p)` with the sign of `c`.
fn scaled_sqrt_term(c: &BigInt, k: &BigInt, p: u32) -> BigInt {
    let mag = (c * c * k << (2 * p)).sqrt();
    if c.is_negative() {
        -mag
    } else {
        mag
    }
}

const CONJUGATIONS: [(Sign, Sign); 4] = [
    (Sign::Plus, Sign::Plus),
    (Sign::Minus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Minus, Sign::Minus),
];

/// Fixed-point value (scaled by `2^p`) of the square root of each conjugate.
fn conjugate_roots(t: &MultiQuadElt, p: u32) -> Vec<BigInt> {
    let r = BigInt::from(t.r);
    let ks = [BigInt::one(), BigInt::from(2), r.clone(), BigInt::from(2) * &r];
    CONJUGATIONS
        .iter()
        .map(|&(s2, sr)| {
            let c = t.conjugate(s2, sr);
            let mut v = BigInt::zero();
            for (ci, k) in c.num.iter().zip(&ks) {
                v += scaled_sqrt_term(ci, k, p);
            }
            v /= &t.den;
            if v.is_negative() {
                v = BigInt::zero();
            }
            (v << p).sqrt()
        })
        .collect()
}

/// Nearest integer to `x / 2^p`, provided it is closer than `1/16`.
fn round_fixed(x: &BigInt, p: u32) -> Option<BigInt> {
    let half = BigInt::one() << (p - 1);
    let q = (x + &half).div_floor(&(BigInt::one() << p));
    let diff = (x - (&q << p)).abs();
    (diff < (BigInt::one() << (p - 4))).then_some(q)
}

/// A square root of `target` with coordinates in `(1/2) Z`, or `None`.
/// The result is the root whose identity conjugate is positive.
pub fn exact_square_root(target: &MultiQuadElt) -> Result<Option<MultiQuadElt>> {
    for &(s2, sr) in &CONJUGATIONS {
        if target.conjugate_sign(s2, sr) != Ordering::Greater {
            return Ok(None);
        }
    }
    let r = BigInt::from(target.r);
    let ks = [BigInt::one(), BigInt::from(2), r.clone(), BigInt::from(2) * &r];
    let mut p = START_PRECISION;
    loop {
        let roots = conjugate_roots(target, p);
        for pattern in 0..8u32 {
            let signs: Vec<i32> = std::iter::once(1)
                .chain((0..3).map(|j| if pattern >> j & 1 == 1 { -1 } else { 1 }))
                .collect();
            // 2 d_k = sum chi_k(sigma) s_sigma R_sigma / (2 sqrt k)
            let mut coeffs = Vec::with_capacity(4);
            for (k_idx, k) in ks.iter().enumerate() {
                let mut y = BigInt::zero();
                for (sigma, (&(s2, sr), root)) in CONJUGATIONS.iter().zip(&roots).enumerate() {
                    let chi = match k_idx {
                        0 => 1,
                        1 => s2.value() as i32,
                        2 => sr.value() as i32,
                        _ => (s2 * sr).value() as i32,
                    };
                    if chi * signs[sigma] > 0 {
                        y += root;
                    } else {
                        y -= root;
                    }
                }
                // y / (2 sqrt k) = y sqrt k / (2k)
                let scaled = scaled_sqrt_term(&y, k, 0) / (BigInt::from(2) * k);
                match round_fixed(&scaled, p) {
                    Some(c) => coeffs.push(c),
                    None => break,
                }
            }
            if coeffs.len() < 4 {
                continue;
            }
            let candidate = MultiQuadElt {
                r: target.r,
                num: [
                    coeffs[0].clone(),
                    coeffs[1].clone(),
                    coeffs[2].clone(),
                    coeffs[3].clone(),
                ],
                den: BigInt::from(2),
            }
            .normalized();
            if candidate.mul(&candidate) == *target {
                return Ok(Some(candidate));
            }
        }
        if p >= MAX_PRECISION {
            return Ok(None);
        }
        p *= 2;
    }
}

/// `eps_2 * eps_r * eps_2r` for the pair.
pub fn unit_product(pair: &PrimePair) -> Result<MultiQuadElt> {
    let r = pair.r();
    let e2 = fundamental_unit(2)?;
    let er = integral_unit(r)?;
    let e2r = fundamental_unit(2 * r)?;
    Ok(MultiQuadElt::from_unit(r, &e2)
        .mul(&MultiQuadElt::from_unit(r, &er))
        .mul(&MultiQuadElt::from_unit(r, &e2r)))
}

/// `q` from the product `(p1p2/2)_4 (2p1/p2)_4 (2p2/p1)_4`, available when
/// `(p1/p2) = -1`.
pub fn q_from_symbols(pair: &PrimePair) -> Result<u8> {
    if pair.legendre() != Sign::Minus {
        return Err(Error::SymbolCriterionUnavailable);
    }
    let (p1, p2) = (pair.p1(), pair.p2());
    let prod = quartic_symbol_mod2(pair.r() as i64)?
        * quartic_symbol(((2 * p1) % p2) as i64, p2)?
        * quartic_symbol(((2 * p2) % p1) as i64, p1)?;
    Ok(if prod == Sign::Minus { 2 } else { 1 })
}

/// `q = 2` exactly when `eps_2 eps_r eps_2r` is a square in `Q(sqrt 2, sqrt r)`.
pub fn unit_index_q(pair: &PrimePair) -> Result<u8> {
    if integral_unit(pair.r())?.norm == Sign::Plus {
        return Ok(1);
    }
    let root = exact_square_root(&unit_product(pair)?)?;
    let q = if root.is_some() { 2 } else { 1 };
    if pair.legendre() == Sign::Minus {
        let expected = q_from_symbols(pair)?;
        if expected != q {
            return Err(Error::Consistency {
                rule: "quartic symbol criterion for the unit index",
                detail: format!("{pair}: square test gives q = {q}, symbols give q = {expected}"),
            });
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{pairs_up_to, validate_pair};

    fn pair(a: u64, b: u64) -> PrimePair {
        validate_pair(a, b).unwrap()
    }

    #[test]
    fn table_examples() {
        assert_eq!(unit_index_q(&pair(5, 13)).unwrap(), 2);
        assert_eq!(unit_index_q(&pair(5, 37)).unwrap(), 1);
        assert_eq!(unit_index_q(&pair(5, 461)).unwrap(), 2);
        assert_eq!(unit_index_q(&pair(5, 29)).unwrap(), 1);
        assert_eq!(q_from_symbols(&pair(5, 13)).unwrap(), 2);
        assert_eq!(q_from_symbols(&pair(5, 37)).unwrap(), 1);
        assert_eq!(q_from_symbols(&pair(13, 29)), Err(Error::SymbolCriterionUnavailable));
    }

    #[test]
    fn trivial_roots() {
        let r = 65;
        let e2 = MultiQuadElt::from_unit(r, &fundamental_unit(2).unwrap());
        assert_eq!(exact_square_root(&e2.mul(&e2)).unwrap(), Some(e2.clone()));
        assert_eq!(
            exact_square_root(&MultiQuadElt::one(r)).unwrap(),
            Some(MultiQuadElt::one(r))
        );
        // eps_2 has a negative conjugate
        assert_eq!(exact_square_root(&e2).unwrap(), None);
    }

    #[test]
    fn half_integral_roots() {
        let r = 65;
        // s = (1 + sqrt 65)/2 + (sqrt 2 + sqrt 130)/2 squared
        let s = MultiQuadElt {
            r,
            num: [1, 1, 1, 1].map(BigInt::from),
            den: BigInt::from(2),
        };
        let t = s.mul(&s);
        let root = exact_square_root(&t).unwrap().unwrap();
        assert_eq!(root.mul(&root), t);
    }

    #[test]
    fn product_is_square_exactly_when_q_is_two() {
        let t = unit_product(&pair(5, 13)).unwrap();
        let s = exact_square_root(&t).unwrap().expect("square");
        assert_eq!(s.mul(&s), t);
        assert_eq!(exact_square_root(&unit_product(&pair(5, 37)).unwrap()).unwrap(), None);
    }

    #[test]
    fn conjugation_is_a_ring_homomorphism() {
        let r = 65;
        let x = MultiQuadElt::from_ints(r, [3, -1, 4, 1]);
        let y = MultiQuadElt::from_ints(r, [-5, 9, 2, -6]);
        for &(s2, sr) in &CONJUGATIONS {
            assert_eq!(
                x.mul(&y).conjugate(s2, sr),
                x.conjugate(s2, sr).mul(&y.conjugate(s2, sr))
            );
        }
    }

    #[test]
    fn exact_signs_match_floating_point() {
        let r = 65u64;
        let f = |c: [i64; 4], s2: f64, sr: f64| {
            c[0] as f64
                + s2 * c[1] as f64 * 2f64.sqrt()
                + sr * c[2] as f64 * (r as f64).sqrt()
                + s2 * sr * c[3] as f64 * (2.0 * r as f64).sqrt()
        };
        for c in [
            [1, 1, 1, 1],
            [-7, 5, 0, 0],
            [0, 0, 3, -2],
            [10, -7, -1, 1],
            [0, 0, 0, 0],
            [8, 0, -1, 0],
        ] {
            let x = MultiQuadElt::from_ints(r, c);
            for &(s2, sr) in &CONJUGATIONS {
                let v = f(c, s2.value() as f64, sr.value() as f64);
                let expect = if v.abs() < 1e-9 {
                    Ordering::Equal
                } else if v > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
                assert_eq!(x.conjugate_sign(s2, sr), expect, "{c:?}");
            }
        }
    }

    #[test]
    fn square_test_matches_symbols() {
        for pair in pairs_up_to(300) {
            if pair.legendre() == Sign::Minus {
                // unit_index_q aborts on disagreement
                unit_index_q(&pair).unwrap();
            }
        }
    }
}
