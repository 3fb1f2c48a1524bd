//! Finite abelian group types in invariant-factor form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Invariant factors `d1 | d2 | ... | dk`, each `> 1`, ascending.
/// The empty list is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<u64>", from = "Vec<u64>")]
pub struct AbelianType {
    divisors: Vec<u64>,
}

/// Trial-division factorization, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl AbelianType {
    pub fn trivial() -> AbelianType {
        AbelianType { divisors: vec![] }
    }

    /// The group `Z/c1 x Z/c2 x ...` for arbitrary cyclic orders
    /// (ones are ignored), brought to canonical form.
    pub fn from_cyclic(orders: &[u64]) -> AbelianType {
        let mut per_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &c in orders {
            assert!(c > 0, "cyclic factor of order 0");
            for (p, e) in factorize(c) {
                per_prime.entry(p).or_default().push(p.pow(e));
            }
        }
        Self::from_prime_powers(per_prime)
    }

    /// Canonical type from the cyclic prime-power factors of each Sylow subgroup.
    fn from_prime_powers(mut per_prime: BTreeMap<u64, Vec<u64>>) -> AbelianType {
        let rank = per_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut divisors = vec![1u64; rank];
        for powers in per_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.iter().enumerate() {
                divisors[rank - 1 - i] *= q;
            }
        }
        AbelianType { divisors }
    }

    /// Builds the `p`-group whose `p^k`-torsion has order `p^torsion_logs[k-1]`
    /// for `k = 1, 2, ...` (the sequence must stabilise at the full order).
    pub fn from_torsion_counts(p: u64, torsion_logs: &[u32]) -> AbelianType {
        let mut factors = Vec::new();
        let mut prev = 0u32;
        let mut at_least = Vec::new();
        for &c in torsion_logs {
            at_least.push(c - prev);
            prev = c;
        }
        // at_least[k] = number of cyclic factors of exponent >= k+1
        for k in 0..at_least.len() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(at_least[k] - next) {
                factors.push(p.pow(k as u32 + 1));
            }
        }
        Self::from_cyclic(&factors)
    }

    /// Combines Sylow subgroups (or any list of groups) as a direct product.
    pub fn product(parts: &[AbelianType]) -> AbelianType {
        let all: Vec<u64> = parts.iter().flat_map(|t| t.divisors.iter().copied()).collect();
        Self::from_cyclic(&all)
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.divisors.len() <= 1
    }

    /// The `p`-Sylow subgroup.
    pub fn p_part(&self, p: u64) -> AbelianType {
        let parts: Vec<u64> = self
            .divisors
            .iter()
            .map(|&d| {
                let mut q = 1;
                let mut d = d;
                while d % p == 0 {
                    d /= p;
                    q *= p;
                }
                q
            })
            .filter(|&q| q > 1)
            .collect();
        AbelianType { divisors: parts }
    }

    pub fn two_part(&self) -> AbelianType {
        self.p_part(2)
    }

    /// `log2` of the order; panics unless the group is a 2-group.
    pub fn log2_order(&self) -> u32 {
        let o = self.order();
        assert!(o.is_power_of_two(), "{self} is not a 2-group");
        o.trailing_zeros()
    }
}

/// Serialized largest factor first, the way tables print them.
impl From<AbelianType> for Vec<u64> {
    fn from(t: AbelianType) -> Vec<u64> {
        t.divisors.into_iter().rev().collect()
    }
}

impl From<Vec<u64>> for AbelianType {
    fn from(v: Vec<u64>) -> AbelianType {
        AbelianType::from_cyclic(&v)
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divisors.is_empty() {
            return write!(f, "(1)");
        }
        let parts: Vec<String> = self.divisors.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl FromStr for AbelianType {
    type Err = String;

    /// Accepts tuples as printed in tables, e.g. `"(30, 10, 2)"` or `"4"`.
    fn from_str(s: &str) -> Result<AbelianType, String> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut orders = Vec::new();
        for part in inner.split(',') {
            let v: u64 = part.trim().parse().map_err(|_| format!("bad group tuple {s:?}"))?;
            if v == 0 {
                return Err(format!("bad group tuple {s:?}"));
            }
            orders.push(v);
        }
        Ok(AbelianType::from_cyclic(&orders))
    }
}

/// A finite abelian group given by its elements and multiplication.
pub trait FiniteAbelianGroup {
    type Elem: Clone;

    fn elements(&self) -> Vec<Self::Elem>;
    fn op(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn is_identity(&self, x: &Self::Elem) -> bool;

    /// `x^e` for `e >= 1`.
    fn pow(&self, x: &Self::Elem, mut e: u64) -> Self::Elem {
        assert!(e >= 1, "exponent must be positive");
        let mut base = x.clone();
        let mut acc: Option<Self::Elem> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => self.op(&a, &base),
                });
            }
            e >>= 1;
            if e == 0 {
                return acc.expect("e >= 1");
            }
            base = self.op(&base, &base);
        }
    }
}

/// Structure of a finite abelian group, one Sylow subgroup at a time:
/// `x -> x^(h / p^e)` maps onto the `p`-Sylow subgroup with fibres of equal
/// size, so torsion counts of the image determine its type.
pub fn structure<G: FiniteAbelianGroup>(g: &G) -> AbelianType {
    let elems = g.elements();
    let h = elems.len() as u64;
    let mut parts = Vec::new();
    for (p, e) in factorize(h) {
        let pe = p.pow(e);
        let cofactor = h / pe;
        let mut counts = vec![0u64; e as usize + 1];
        for x in &elems {
            let mut y = if cofactor == 1 { x.clone() } else { g.pow(x, cofactor) };
            let mut k = 0usize;
            while !g.is_identity(&y) {
                y = g.pow(&y, p);
                k += 1;
            }
            counts[k] += 1;
        }
        // number of sylow elements with order dividing p^k
        let mut logs = Vec::new();
        let mut acc = 0u64;
        for (k, c) in counts.iter().enumerate() {
            acc += c;
            if k == 0 {
                continue;
            }
            let size = acc / cofactor;
            logs.push(ilog(size, p));
        }
        parts.push(AbelianType::from_torsion_counts(p, &logs));
    }
    AbelianType::product(&parts)
}

fn ilog(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % p, 0);
        n /= p;
        k += 1;
    }
    k
}
