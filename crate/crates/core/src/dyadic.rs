//! Squares in `Q2(zeta8)`, the completion of `Q(sqrt(2 p1 p2), i)` at its
//! unique prime above 2.
//!
//! Elements of `Z2[zeta]` are kept as coefficient vectors on
//! `1, zeta, zeta^2, zeta^3` with `zeta^4 = -1`. The prime `P = (1 - zeta)`
//! is totally ramified, so `P^4 = (2)` and `Z2[zeta]/P = F2` via `zeta -> 1`.
//! A unit `u` generates an unramified extension `sqrt u` iff it is a square
//! modulo `4 = P^8`, and that extension splits iff `u` is a square modulo
//! `4P = P^9`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::gaussian::GaussianInt;

type Elt = [i64; 4];

fn mul(x: &Elt, y: &Elt) -> Elt {
    let mut out = [0i64; 4];
    for i in 0..4 {
        for j in 0..4 {
            let k = i + j;
            if k < 4 {
                out[k] += x[i] * y[j];
            } else {
                out[k - 4] -= x[i] * y[j];
            }
        }
    }
    out
}

/// `x` lies in `P^8 = (4)`.
fn in_p8(x: &Elt) -> bool {
    x.iter().all(|c| c.rem_euclid(4) == 0)
}

/// `x` lies in `P^9 = 4P`: `x / 4` exists and maps to 0 in `F2`.
fn in_p9(x: &Elt) -> bool {
    in_p8(x) && x.iter().map(|c| c / 4).sum::<i64>().rem_euclid(2) == 0
}

/// Squares of all residues modulo 4; `(y + 4z)^2 - y^2` lies in `P^9`.
fn squares() -> &'static Vec<Elt> {
    static SQUARES: OnceLock<Vec<Elt>> = OnceLock::new();
    SQUARES.get_or_init(|| {
        let mut out = Vec::with_capacity(256);
        for code in 0..256u32 {
            let y = [0, 2, 4, 6].map(|s| ((code >> s) & 3) as i64);
            out.push(mul(&y, &y));
        }
        out
    })
}

fn embed(alpha: &GaussianInt) -> Option<Elt> {
    let m = BigInt::from(16);
    let re = alpha.re.mod_floor(&m).to_i64()?;
    let im = alpha.im.mod_floor(&m).to_i64()?;
    // i = zeta^2
    Some([re, 0, im, 0])
}

fn is_unit(x: &Elt) -> bool {
    x.iter().sum::<i64>().rem_euclid(2) == 1
}

fn congruent_to_square(alpha: &GaussianInt, test: fn(&Elt) -> bool) -> Option<bool> {
    let u = embed(alpha)?;
    if !is_unit(&u) {
        return None;
    }
    Some(squares().iter().any(|s| {
        let diff = [u[0] - s[0], u[1] - s[1], u[2] - s[2], u[3] - s[3]];
        test(&diff)
    }))
}

/// Whether the odd Gaussian integer `alpha` is a square in `Q2(zeta8)`;
/// `None` if `alpha` is divisible by `1 + i`.
pub fn is_local_square(alpha: &GaussianInt) -> Option<bool> {
    congruent_to_square(alpha, in_p9)
}

/// Whether adjoining `sqrt alpha` to `Q2(zeta8)` is unramified;
/// `None` if `alpha` is divisible by `1 + i`.
pub fn is_unramified_radicand(alpha: &GaussianInt) -> Option<bool> {
    congruent_to_square(alpha, in_p8)
}
