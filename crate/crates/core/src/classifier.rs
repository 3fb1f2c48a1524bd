//! Decision logic for a prime pair `p1 = p2 = 5 (mod 8)` and the field
//! `k = Q(sqrt(2 p1 p2), i)`.
//!
//! [`invariants`] gathers every symbol and class number the predictions
//! depend on. [`predict`] turns them into norm groups, capitulation kernels
//! and 2-class group types for the seven unramified quadratic extensions
//! `K1..K7` and the seven unramified biquadratic extensions `L1..L7`.
//! [`cross_validate`] rebuilds the same data from the Galois group `G`
//! through transfer maps, and [`norm_groups_from_symbols`] recomputes the
//! norm groups from residue symbols alone.
//!
//! Classes of `Cl2(k) = (2, 2, 2)` are written over the prime ideals `H0`
//! (above `1 + i`), `H1` (above `pi1`) and `H2` (above `pi2 = conj(pi1)`).

use std::fmt;

use serde::Serialize;

use crate::abelian::AbelianType;
use crate::classes::{ClassSubgroup, ClassVector};
use crate::dyadic::{is_local_square, is_unramified_radicand};
use crate::error::{Error, Result};
use crate::forms::exponents_mn;
use crate::gaussian::{gauss_symbol, split_pair, symbol_b, symbol_pi, GaussianInt};
use crate::group::{GPresentation, Group, PsiVariant, Subgroup};
use crate::symbols::{quartic_symbol, PrimePair, Sign};
use crate::unit_index::unit_index_q;
use crate::units::norm_eps;

/// Everything the predictions depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantRecord {
    pub pair: PrimePair,
    pub d: u64,
    /// `(p1/p2)`
    pub legendre: Sign,
    /// `(pi1/pi3)`
    pub pi: Sign,
    /// `(1+i/pi1)(1+i/pi3)`
    #[serde(rename = "B")]
    pub b: Sign,
    /// `(p1/p2)_4 (p2/p1)_4`, defined when `(p1/p2) = 1`.
    pub quartic_product: Option<Sign>,
    /// `Cl2(Q(sqrt(-p1 p2))) = 2^(m+1)`
    pub m: u32,
    /// `Cl2(Q(sqrt(p1 p2))) = 2^n`
    pub n: u32,
    /// Unit index of `Q(sqrt 2, sqrt(p1 p2), i)`, divided by 2.
    pub q: u8,
    /// `N(eps_(p1 p2))`
    pub norm_eps_r: Sign,
    pub psi: PsiVariant,
}

fn inconsistent(rule: &'static str, pair: &PrimePair, detail: String) -> Error {
    Error::Consistency {
        rule,
        detail: format!("{pair}: {detail}"),
    }
}

impl InvariantRecord {
    pub fn presentation(&self) -> GPresentation {
        GPresentation {
            m: self.m,
            n: self.n,
            q: self.q,
            psi: self.psi,
        }
    }

    pub fn case(&self) -> SymbolCase {
        SymbolCase {
            legendre: self.legendre,
            pi: self.pi,
            b: self.b,
            q: self.q,
        }
    }

    /// `disc(k) = 2^8 p1^2 p2^2`.
    pub fn disc(&self) -> u64 {
        256 * self.pair.r() * self.pair.r()
    }

    /// The record obtained by calling `conj(pi3)` the prime `pi3`: `B` always
    /// changes sign, `(pi1/pi3)` does when `(p1/p2) = -1`.
    pub fn conjugate_swapped(&self) -> InvariantRecord {
        InvariantRecord {
            pi: self.pi * self.legendre,
            b: -self.b,
            ..*self
        }
    }

    /// Checks the relations tying the invariants together.
    pub fn check(&self) -> Result<()> {
        let p = &self.pair;
        let (m, n, q) = (self.m, self.n, self.q);
        if self.norm_eps_r == Sign::Plus && self.legendre == Sign::Minus {
            return Err(inconsistent(
                "N(eps) = 1 forces (p1/p2) = 1",
                p,
                "N(eps_(p1p2)) = 1 with (p1/p2) = -1".into(),
            ));
        }
        if q == 2 && self.norm_eps_r == Sign::Plus {
            return Err(inconsistent(
                "q = 2 requires N(eps_(p1p2)) = -1",
                p,
                "q = 2 with N(eps_(p1p2)) = 1".into(),
            ));
        }
        let shape_ok = match (q, self.legendre, self.quartic_product) {
            (1, Sign::Minus, _) => n == 1 && m >= 3,
            (1, Sign::Plus, Some(Sign::Minus)) => n == 1 && m >= 3,
            (1, Sign::Plus, Some(Sign::Plus)) => m == 2 && n >= 2,
            (2, Sign::Minus, _) => n == 1 && m == 2,
            (2, Sign::Plus, _) => m == 2 && n >= 2,
            _ => false,
        };
        if !shape_ok {
            return Err(inconsistent(
                "unit index constraints on m and n",
                p,
                format!("q = {q}, (p1/p2) = {}, m = {m}, n = {n}", self.legendre),
            ));
        }
        match self.legendre {
            Sign::Minus => {
                let expected = if self.pi == self.b { 1 } else { 2 };
                if q != expected {
                    return Err(inconsistent(
                        "q = 1 iff (pi1/pi3) = (1+i/pi1)(1+i/pi3)",
                        p,
                        format!("q = {q}, pi = {}, B = {}", self.pi, self.b),
                    ));
                }
            }
            Sign::Plus => {
                if self.quartic_product != Some(self.pi) {
                    return Err(inconsistent(
                        "(p1/p2)_4 (p2/p1)_4 = (pi1/pi3)",
                        p,
                        format!("quartic product {:?}, pi = {}", self.quartic_product, self.pi),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Computes and checks the invariant record of a pair.
pub fn invariants(pair: &PrimePair) -> Result<InvariantRecord> {
    let legendre = pair.legendre();
    let (s1, s2) = split_pair(pair);
    let pi = symbol_pi(&s1, &s2)?;
    let b = symbol_b(&s1, &s2)?;
    let (m, n) = exponents_mn(pair)?;
    let q = unit_index_q(pair)?;
    let norm_eps_r = norm_eps(pair.r())?;
    let (p1, p2) = (pair.p1(), pair.p2());
    let quartic_product = match legendre {
        Sign::Plus => Some(quartic_symbol(p1 as i64, p2)? * quartic_symbol(p2 as i64, p1)?),
        Sign::Minus => None,
    };
    let psi = if legendre == Sign::Plus && norm_eps_r == Sign::Plus {
        PsiVariant::SigmaOnly
    } else {
        PsiVariant::TauSigma
    };
    let record = InvariantRecord {
        pair: *pair,
        d: pair.d(),
        legendre,
        pi,
        b,
        quartic_product,
        m,
        n,
        q,
        norm_eps_r,
        psi,
    };
    record.check()?;
    Ok(record)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FieldKind {
    K,
    L,
}

/// One of the fourteen unramified extensions of `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FieldLabel {
    pub kind: FieldKind,
    pub index: u8,
    /// `K_j = k(sqrt radicand) = k(sqrt alt_radicand)`.
    pub radicand: Option<&'static str>,
    pub alt_radicand: Option<&'static str>,
    /// `L_j` as a compositum of three `K`.
    pub factors: Option<[u8; 3]>,
    /// Index of the complex conjugate field.
    pub conjugate: u8,
    pub normal_over_q: bool,
}

impl fmt::Display for FieldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.radicand, self.factors) {
            (FieldKind::K, Some(r), _) => write!(f, "K{} = k(sqrt({r}))", self.index),
            (FieldKind::L, _, Some([a, b, c])) => write!(f, "L{} = K{a}.K{b}.K{c}", self.index),
            _ => write!(f, "{:?}{}", self.kind, self.index),
        }
    }
}

const K_RADICANDS: [(&str, &str); 7] = [
    ("p1", "2*p2"),
    ("p2", "2*p1"),
    ("2", "p1*p2"),
    ("pi1*pi3", "2*pi2*pi4"),
    ("pi1*pi4", "2*pi2*pi3"),
    ("pi2*pi3", "2*pi1*pi4"),
    ("pi2*pi4", "2*pi1*pi3"),
];
const K_CONJUGATES: [u8; 7] = [1, 2, 3, 7, 6, 5, 4];

/// `L_j = K_a . K_b . K_c`.
pub const L_FACTORS: [[u8; 3]; 7] = [
    [1, 2, 3],
    [1, 4, 6],
    [1, 5, 7],
    [2, 4, 5],
    [2, 6, 7],
    [3, 4, 7],
    [3, 5, 6],
];
const L_CONJUGATES: [u8; 7] = [1, 3, 2, 5, 4, 6, 7];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldLayout {
    pub disc: u64,
    pub genus_field: u8,
    pub fields: Vec<FieldLabel>,
}

/// The catalog of unramified extensions; `L1` is the genus field.
pub fn field_layout(record: &InvariantRecord) -> FieldLayout {
    let mut fields = Vec::with_capacity(14);
    for (j, &(r, alt)) in K_RADICANDS.iter().enumerate() {
        fields.push(FieldLabel {
            kind: FieldKind::K,
            index: j as u8 + 1,
            radicand: Some(r),
            alt_radicand: Some(alt),
            factors: None,
            conjugate: K_CONJUGATES[j],
            normal_over_q: K_CONJUGATES[j] == j as u8 + 1,
        });
    }
    for (j, &fac) in L_FACTORS.iter().enumerate() {
        fields.push(FieldLabel {
            kind: FieldKind::L,
            index: j as u8 + 1,
            radicand: None,
            alt_radicand: None,
            factors: Some(fac),
            conjugate: L_CONJUGATES[j],
            normal_over_q: L_CONJUGATES[j] == j as u8 + 1,
        });
    }
    FieldLayout {
        disc: record.disc(),
        genus_field: 1,
        fields,
    }
}

// Class bitmasks: bit 0 = H0, bit 1 = H1, bit 2 = H2.
const H0: u8 = 1;
const H1: u8 = 2;
const H2: u8 = 4;
const H01: u8 = 3;
const H02: u8 = 5;
const H12: u8 = 6;

type Gens = (u8, u8);

/// `N4..N7` for `(p1/p2) = 1`, indexed by `[pi = -1, pi = 1][B = 1, B = -1]`.
const NORM_SPLIT: [[[Gens; 2]; 2]; 4] = [
    [[(H0, H2), (H2, H01)], [(H0, H1), (H1, H02)]],
    [[(H2, H01), (H0, H2)], [(H1, H02), (H0, H1)]],
    [[(H1, H02), (H0, H1)], [(H2, H01), (H0, H2)]],
    [[(H0, H1), (H1, H02)], [(H0, H2), (H2, H01)]],
];

/// `N4..N7` for `(p1/p2) = -1`, indexed by `[q = 1, q = 2][pi = -1, pi = 1]`.
const NORM_INERT: [[[Gens; 2]; 2]; 4] = [
    [[(H1, H02), (H0, H2)], [(H0, H1), (H2, H01)]],
    [[(H0, H2), (H1, H02)], [(H2, H01), (H0, H1)]],
    [[(H0, H1), (H2, H01)], [(H1, H02), (H0, H2)]],
    [[(H2, H01), (H0, H1)], [(H0, H2), (H1, H02)]],
];

/// `kappa_K4..kappa_K7`, indexed by `[B = 1, B = -1]`.
const KERNELS: [[Gens; 2]; 4] = [
    [(H0, H1), (H1, H02)],
    [(H1, H02), (H0, H1)],
    [(H2, H01), (H0, H2)],
    [(H0, H2), (H2, H01)],
];

fn span(g: Gens) -> ClassSubgroup {
    ClassSubgroup::generated(&[ClassVector(g.0), ClassVector(g.1)])
}

fn sign_index(s: Sign) -> usize {
    match s {
        Sign::Minus => 0,
        Sign::Plus => 1,
    }
}

fn b_index(b: Sign) -> usize {
    1 - sign_index(b)
}

/// The symbols selecting a row of the norm group tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolCase {
    pub legendre: Sign,
    pub pi: Sign,
    #[serde(rename = "B")]
    pub b: Sign,
    pub q: u8,
}

impl SymbolCase {
    /// Whether some prime pair realizes this case: for `(p1/p2) = -1` the
    /// unit index is fixed by `q = 1 iff pi = B`.
    pub fn is_realizable(&self) -> bool {
        match self.legendre {
            Sign::Plus => self.q == 1 || self.q == 2,
            Sign::Minus => self.q == if self.pi == self.b { 1 } else { 2 },
        }
    }
}

/// The norm class groups `N_j = N(Cl2(K_j))` from the tabulated case
/// analysis.
pub fn norm_groups(r: &InvariantRecord) -> [ClassSubgroup; 7] {
    norm_groups_for(r.case())
}

pub fn norm_groups_for(r: SymbolCase) -> [ClassSubgroup; 7] {
    let (first, second) = match r.legendre {
        Sign::Plus => ((H01, H02), (H1, H2)),
        Sign::Minus => ((H1, H2), (H01, H02)),
    };
    let mut out = [ClassSubgroup::trivial(); 7];
    out[0] = span(first);
    out[1] = span(second);
    out[2] = span((H0, H12));
    for j in 0..4 {
        let gens = match r.legendre {
            Sign::Plus => NORM_SPLIT[j][sign_index(r.pi)][b_index(r.b)],
            Sign::Minus => NORM_INERT[j][r.q as usize - 1][sign_index(r.pi)],
        };
        out[3 + j] = span(gens);
    }
    out
}

/// Radicand pairs `(delta, 2 p1 p2 / delta)` of `K1..K7`.
fn radicands(p1: u64, p2: u64, pi1: &GaussianInt, pi3: &GaussianInt) -> [(GaussianInt, GaussianInt); 7] {
    let pi2 = pi1.conj();
    let pi4 = pi3.conj();
    let int = |a: u64| GaussianInt::new(a, 0);
    let two = int(2);
    let prod = |x: &GaussianInt, y: &GaussianInt| x * y;
    let twice = |x: &GaussianInt, y: &GaussianInt| &two * &(x * y);
    [
        (int(p1), int(2 * p2)),
        (int(p2), int(2 * p1)),
        (int(2), int(p1 * p2)),
        (prod(pi1, pi3), twice(&pi2, &pi4)),
        (prod(pi1, &pi4), twice(&pi2, pi3)),
        (prod(&pi2, pi3), twice(pi1, &pi4)),
        (prod(&pi2, &pi4), twice(pi1, pi3)),
    ]
}

/// Splitting sign of a finite odd prime `pi` in `k(sqrt delta)`, using
/// whichever of the two radicands is prime to `pi`.
fn odd_splitting(rad: &(GaussianInt, GaussianInt), pi: &GaussianInt) -> Result<Sign> {
    match gauss_symbol(&rad.0, pi) {
        Err(Error::DivisibleByPrime { .. }) => gauss_symbol(&rad.1, pi),
        other => other,
    }
}

/// Splitting sign of `H0`, read off the odd radicand in `Q2(zeta8)`.
fn dyadic_splitting(rad: &(GaussianInt, GaussianInt), label: usize) -> Result<Sign> {
    let odd = if is_local_square(&rad.0).is_some() {
        &rad.0
    } else {
        &rad.1
    };
    let ctx = || format!("K{} = k(sqrt({odd}))", label + 1);
    if is_unramified_radicand(odd) != Some(true) {
        return Err(Error::Consistency {
            rule: "K_j / k is unramified at the prime above 2",
            detail: ctx(),
        });
    }
    Ok(match is_local_square(odd) {
        Some(true) => Sign::Plus,
        Some(false) => Sign::Minus,
        None => unreachable!("odd radicand chosen"),
    })
}

fn kernel_of_character(chi: [Sign; 3]) -> ClassSubgroup {
    ClassSubgroup::from_members(ClassVector::all().filter(|v| {
        (0..3)
            .filter(|&i| v.bit(i))
            .fold(Sign::Plus, |acc, i| acc * chi[i])
            .is_plus()
    }))
}

/// Norm groups from first principles for explicit Gaussian primes `pi1 | p1`
/// and `pi3 | p2`: `[H] in N_j` iff `H` splits in `K_j`.
pub fn norm_groups_with_primes(p1: u64, p2: u64, pi1: &GaussianInt, pi3: &GaussianInt) -> Result<[ClassSubgroup; 7]> {
    let pi2 = pi1.conj();
    let mut out = [ClassSubgroup::trivial(); 7];
    for (j, rad) in radicands(p1, p2, pi1, pi3).iter().enumerate() {
        let chi = [
            dyadic_splitting(rad, j)?,
            odd_splitting(rad, pi1)?,
            odd_splitting(rad, &pi2)?,
        ];
        let n = kernel_of_character(chi);
        if n.order() != 4 {
            return Err(Error::Consistency {
                rule: "N_j has index 2 in Cl2(k)",
                detail: format!("({p1}, {p2}): K{} gives a norm group of order {}", j + 1, n.order()),
            });
        }
        out[j] = n;
    }
    Ok(out)
}

/// [`norm_groups_with_primes`] for the normalized primes `e + 2if`.
pub fn norm_groups_from_symbols(r: &InvariantRecord) -> Result<[ClassSubgroup; 7]> {
    let (s1, s2) = split_pair(&r.pair);
    norm_groups_with_primes(r.pair.p1(), r.pair.p2(), &s1.pi(), &s2.pi())
}

fn cyc(exps: &[u32]) -> AbelianType {
    let orders: Vec<u64> = exps.iter().map(|&e| 1u64 << e).collect();
    AbelianType::from_cyclic(&orders)
}

fn k_type(r: &InvariantRecord, j: usize) -> AbelianType {
    let rank_three = cyc(&[1, 1, 1]);
    let two_four = cyc(&[1, 2]);
    match j {
        0 | 1 => match r.legendre {
            Sign::Plus => rank_three,
            Sign::Minus => two_four,
        },
        2 => cl2_k3(r),
        _ => {
            let wide = match r.legendre {
                Sign::Plus => r.pi == Sign::Minus,
                // K5, K6 for pi = -1; K4, K7 for pi = 1
                Sign::Minus => (j == 4 || j == 5) == (r.pi == Sign::Minus),
            };
            if wide {
                rank_three
            } else {
                two_four
            }
        }
    }
}

fn cl2_k3(r: &InvariantRecord) -> AbelianType {
    let (m, n) = (r.m, r.n);
    match r.q {
        1 => cyc(&[m, n + 1]),
        _ => cyc(&[m.min(n + 1), (m + 1).max(n + 2)]),
    }
}

fn k_kernel(r: &InvariantRecord, j: usize) -> ClassSubgroup {
    match j {
        0 => span((H1, H2)),
        1 => span((H01, H02)),
        2 => match r.q {
            1 => span((H0, H12)),
            _ => ClassSubgroup::generated(&[ClassVector::H0]),
        },
        _ => span(KERNELS[j - 3][b_index(r.b)]),
    }
}

fn l_type(r: &InvariantRecord, j: usize) -> AbelianType {
    let (m, n) = (r.m, r.n);
    match j {
        0 => match r.q {
            1 => cyc(&[m, n]),
            _ => cyc(&[m.min(n), (m + 1).max(n + 1)]),
        },
        1..=4 => {
            if r.legendre == Sign::Plus && r.pi == Sign::Minus {
                cyc(&[1, 1, 1])
            } else {
                cyc(&[1, 2])
            }
        }
        _ => {
            let first = j == 5;
            match (r.q, r.legendre) {
                (1, _) => {
                    let narrow = cyc(&[m - 1, n + 1]);
                    let mixed = cyc(&[n.min(m - 1), (n + 1).max(m)]);
                    if first == (r.b == Sign::Plus) {
                        narrow
                    } else {
                        mixed
                    }
                }
                (_, Sign::Plus) => cyc(&[1, n + 2]),
                (_, Sign::Minus) => {
                    if first == (r.pi == Sign::Minus) {
                        cyc(&[1, 3])
                    } else {
                        cyc(&[2, 2])
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KPrediction {
    pub index: u8,
    pub norm_group: ClassSubgroup,
    pub kernel: ClassSubgroup,
    pub class_group: AbelianType,
    pub taussky_a: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPrediction {
    pub index: u8,
    pub factors: [u8; 3],
    pub kernel: ClassSubgroup,
    pub class_group: AbelianType,
}

/// Predicted invariants of `G` and of all fourteen extensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictionReport {
    pub record: InvariantRecord,
    pub presentation: GPresentation,
    pub group_order: u64,
    /// Type of `G'`, which is `Cl2` of the Hilbert 2-class field of `k`.
    pub derived_type: AbelianType,
    #[serde(rename = "Cl2_K3")]
    pub cl2_k3: AbelianType,
    pub coclass: u32,
    pub nilpotency_class: u32,
    pub disc: u64,
    pub k: Vec<KPrediction>,
    pub l: Vec<LPrediction>,
}

pub fn predict(r: &InvariantRecord) -> PredictionReport {
    let (m, n) = (r.m, r.n);
    let log2_order = m + n + 1 + r.q as u32;
    let (derived_type, class) = match r.q {
        1 => (cyc(&[m - 1, n]), n.max(m - 1) + 1),
        _ => (cyc(&[1, n + 1]), (n + 1).max(m) + 1),
    };
    let norms = norm_groups(r);
    let k = (0..7)
        .map(|j| {
            let kernel = k_kernel(r, j);
            KPrediction {
                index: j as u8 + 1,
                norm_group: norms[j],
                kernel,
                class_group: k_type(r, j),
                taussky_a: !kernel.intersect(norms[j]).is_trivial(),
            }
        })
        .collect();
    let l = (0..7)
        .map(|j| LPrediction {
            index: j as u8 + 1,
            factors: L_FACTORS[j],
            kernel: ClassSubgroup::full(),
            class_group: l_type(r, j),
        })
        .collect();
    PredictionReport {
        record: *r,
        presentation: r.presentation(),
        group_order: 1 << log2_order,
        derived_type,
        cl2_k3: cl2_k3(r),
        coclass: log2_order - class,
        nilpotency_class: class,
        disc: r.disc(),
        k,
        l,
    }
}

/// One comparison between a prediction and the group engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub subject: String,
    pub property: &'static str,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.ok { "ok" } else { "MISMATCH" };
        write!(
            f,
            "{mark:8} {} {}: expected {}, got {}",
            self.subject, self.property, self.expected, self.observed
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub checks: Vec<Check>,
    /// Extensions (out of 14) whose every check passed.
    pub validated_extensions: u32,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn check<T: PartialEq + fmt::Display>(
        &mut self,
        subject: &str,
        property: &'static str,
        expected: T,
        observed: T,
    ) -> bool {
        let ok = expected == observed;
        self.checks.push(Check {
            subject: subject.to_string(),
            property,
            expected: expected.to_string(),
            observed: observed.to_string(),
            ok,
        });
        ok
    }
}

/// `Gal(L/K_j)` and `Gal(L/L_j)` inside `G`, through the Artin map.
pub fn extension_subgroups(g: &Group, norms: &[ClassSubgroup; 7]) -> (Vec<Subgroup>, Vec<Subgroup>) {
    let derived = g.derived_subgroup();
    let ks: Vec<Subgroup> = norms.iter().map(|&n| g.subgroup_over_classes(n, &derived)).collect();
    let ls = L_FACTORS
        .iter()
        .map(|&[a, b, c]| {
            let ab = g.intersection(&ks[a as usize - 1], &ks[b as usize - 1]);
            g.intersection(&ab, &ks[c as usize - 1])
        })
        .collect();
    (ks, ls)
}

/// Compares a prediction with transfer kernels and abelianizations computed
/// in the group engine.
pub fn cross_validate_report(report: &PredictionReport) -> Result<Validation> {
    let g = Group::new(report.presentation)?;
    let mut rec = Recorder { checks: Vec::new() };
    let derived = g.derived_subgroup();
    rec.check("G", "order", report.group_order, g.order() as u64);
    rec.check(
        "G",
        "type of G'",
        report.derived_type.clone(),
        g.abelian_invariants(&derived, &g.trivial())?,
    );
    rec.check("G", "nilpotency class", report.nilpotency_class, g.nilpotency_class());
    rec.check("G", "coclass", report.coclass, g.coclass());
    rec.check("G", "coclass is 3", 3, g.coclass());

    let norms: [ClassSubgroup; 7] = std::array::from_fn(|j| report.k[j].norm_group);
    let (ks, ls) = extension_subgroups(&g, &norms);
    let mut validated = 0;
    for (j, (pred, h)) in report.k.iter().zip(&ks).enumerate() {
        let name = format!("K{}", j + 1);
        let kernel = g.transfer_kernel(h);
        let expected_size = if j == 2 && report.record.q == 2 { 2 } else { 4 };
        let results = [
            rec.check(&name, "index in G", 2, g.order() / h.order()),
            rec.check(&name, "2-class group", pred.class_group.clone(), g.abelianization(h)),
            rec.check(&name, "capitulation kernel", pred.kernel, kernel),
            rec.check(&name, "kernel order", expected_size, kernel.order()),
            rec.check(
                &name,
                "Taussky A",
                pred.taussky_a,
                !kernel.intersect(pred.norm_group).is_trivial(),
            ),
            rec.check(&name, "Taussky A holds", true, pred.taussky_a),
        ];
        validated += results.iter().all(|&ok| ok) as u32;
    }
    for (j, (pred, h)) in report.l.iter().zip(&ls).enumerate() {
        let name = format!("L{}", j + 1);
        let results = [
            rec.check(&name, "index in G", 4, g.order() / h.order()),
            rec.check(&name, "2-class group", pred.class_group.clone(), g.abelianization(h)),
            rec.check(&name, "capitulation kernel", pred.kernel, g.transfer_kernel(h)),
        ];
        validated += results.iter().all(|&ok| ok) as u32;
    }
    Ok(Validation {
        checks: rec.checks,
        validated_extensions: validated,
    })
}

/// [`predict`] followed by [`cross_validate_report`].
pub fn cross_validate(r: &InvariantRecord) -> Result<Validation> {
    cross_validate_report(&predict(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{pairs_up_to, validate_pair};

    fn record(a: u64, b: u64) -> InvariantRecord {
        invariants(&validate_pair(a, b).unwrap()).unwrap()
    }

    fn sub(s: &str) -> ClassSubgroup {
        let gens: Vec<ClassVector> = s.split(',').map(|x| x.trim().parse().unwrap()).collect();
        ClassSubgroup::generated(&gens)
    }

    #[test]
    fn invariant_examples() {
        let r = record(5, 13);
        assert_eq!((r.legendre, r.m, r.n, r.q, r.pi), (Sign::Minus, 2, 1, 2, Sign::Minus));
        let r = record(5, 37);
        assert_eq!((r.legendre, r.m, r.n, r.q, r.pi), (Sign::Minus, 3, 1, 1, Sign::Minus));
        let r = record(5, 29);
        assert_eq!((r.legendre, r.m, r.n, r.q), (Sign::Plus, 2, 2, 1));
    }

    #[test]
    fn layout_examples() {
        let r = record(5, 13);
        let layout = field_layout(&r);
        assert_eq!(layout.disc, 1_081_600);
        assert_eq!(layout.fields[2].radicand, Some("2"));
        assert_eq!(layout.fields[7 + 5].factors, Some([3, 4, 7]));
        assert_eq!(layout.fields[7 + 5].to_string(), "L6 = K3.K4.K7");
        let normal: Vec<String> = layout
            .fields
            .iter()
            .filter(|f| f.normal_over_q)
            .map(|f| f.to_string())
            .collect();
        assert_eq!(normal.len(), 6);
        assert!(!layout.fields[3].normal_over_q && layout.fields[3].conjugate == 7);
    }

    #[test]
    fn table_norm_groups() {
        let r = record(13, 29);
        assert_eq!((r.legendre, r.pi, r.b), (Sign::Plus, Sign::Minus, Sign::Minus));
        let n = norm_groups(&r);
        assert_eq!(n[2], sub("H0, H1H2"));
        assert_eq!(n[0], sub("H0H1, H0H2"));
        assert_eq!(n[3], sub("H2, H0H1"));
    }

    #[test]
    fn norm_groups_from_symbols_match_table() {
        for pair in pairs_up_to(500) {
            let r = invariants(&pair).unwrap();
            let table = norm_groups(&r);
            let symbols = norm_groups_from_symbols(&r).unwrap();
            assert_eq!(table, symbols, "{pair}");
        }
    }

    #[test]
    fn dyadic_symbol_is_b() {
        for pair in pairs_up_to(300) {
            let r = invariants(&pair).unwrap();
            let n = norm_groups_from_symbols(&r).unwrap();
            // pi1 pi3 and pi2 pi4 split H0 iff B = 1; the other two iff B = -1
            for (j, sign) in [(3, r.b), (4, -r.b), (5, -r.b), (6, r.b)] {
                assert_eq!(n[j].contains(ClassVector::H0), sign.is_plus(), "{pair} K{}", j + 1);
            }
            // [H1] in N1 iff (2p2/p1) = (2/p1)(p1/p2) = -(p1/p2)
            assert_eq!(n[0].contains(ClassVector::H1), r.legendre == Sign::Minus);
        }
    }

    #[test]
    fn prediction_examples() {
        let p = predict(&record(5, 13));
        assert_eq!(p.k[3].class_group, cyc(&[1, 2]));
        assert_eq!(p.k[3].kernel, sub("H0, H1"));
        assert_eq!(p.l[5].class_group, cyc(&[1, 3]));
        assert_eq!(p.l[6].class_group, cyc(&[2, 2]));
        let p = predict(&record(5, 37));
        assert_eq!(p.cl2_k3, cyc(&[2, 3]));
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json["Cl2_K3"], serde_json::json!([8, 4]));
    }

    #[test]
    fn k3_order_is_product_of_quadratic_class_numbers() {
        for pair in pairs_up_to(300) {
            let r = invariants(&pair).unwrap();
            let expected = r.n + r.m + 1 + (r.q as u32 - 1);
            assert_eq!(predict(&r).cl2_k3.log2_order(), expected, "{pair}");
        }
    }

    #[test]
    fn every_branch_is_reached() {
        let mut seen = std::collections::BTreeSet::new();
        for pair in pairs_up_to(500) {
            let r = invariants(&pair).unwrap();
            let quartic = r.quartic_product.map(|s| s.value());
            seen.insert((r.legendre.value(), r.pi.value(), r.b.value(), r.q, quartic));
        }
        // (p1/p2) = 1: pi, B free and q = 2 only with quartic product 1
        for pi in [-1, 1] {
            for b in [-1, 1] {
                assert!(seen.contains(&(1, pi, b, 1, Some(pi))), "{pi} {b}");
                assert!(
                    seen.contains(&(-1, pi, b, if pi == b { 1 } else { 2 }, None)),
                    "{pi} {b}"
                );
            }
        }
        assert!(seen.iter().any(|s| s.0 == 1 && s.3 == 2));
    }

    #[test]
    fn engine_agrees_on_examples() {
        for (a, b) in [(5, 13), (5, 37), (13, 29), (5, 29), (5, 461)] {
            let v = cross_validate(&record(a, b)).unwrap();
            let failures: Vec<String> = v.failures().map(|c| c.to_string()).collect();
            assert!(failures.is_empty(), "({a}, {b}): {failures:#?}");
            assert_eq!(v.validated_extensions, 14);
        }
    }

    #[test]
    fn genus_subgroup_example() {
        let r = record(5, 13);
        let g = Group::new(r.presentation()).unwrap();
        let (_, ls) = extension_subgroups(&g, &norm_groups(&r));
        let s2 = g.pow(&g.sigma(), 2);
        assert_eq!(ls[5], g.subgroup(&[g.tau(), s2]));
    }

    #[test]
    fn conjugate_swap_permutes_predictions() {
        for pair in pairs_up_to(300) {
            let r = invariants(&pair).unwrap();
            let a = predict(&r);
            let b = predict(&r.conjugate_swapped());
            let kp = [0, 1, 2, 4, 3, 6, 5];
            for (j, &i) in kp.iter().enumerate() {
                assert_eq!(a.k[j].norm_group, b.k[i].norm_group, "{pair} K{}", j + 1);
                assert_eq!(a.k[j].kernel, b.k[i].kernel, "{pair} K{}", j + 1);
                assert_eq!(a.k[j].class_group, b.k[i].class_group, "{pair} K{}", j + 1);
            }
            let lp = [0, 2, 1, 3, 4, 6, 5];
            for (j, &i) in lp.iter().enumerate() {
                assert_eq!(a.l[j].class_group, b.l[i].class_group, "{pair} L{}", j + 1);
            }
            // the same permutation appears when the symbols are recomputed
            let (s1, s2) = split_pair(&pair);
            let direct = norm_groups_with_primes(pair.p1(), pair.p2(), &s1.pi(), &s2.pi_bar()).unwrap();
            assert_eq!(direct, norm_groups(&r.conjugate_swapped()), "{pair}");
        }
    }
}
