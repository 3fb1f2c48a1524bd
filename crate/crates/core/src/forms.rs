//! Class groups of binary quadratic forms.
//!
//! Definite discriminants use the classical reduced forms. Indefinite
//! discriminants use cycles of reduced forms under the rho step: each cycle
//! is one narrow class, and the wide group is the quotient by the class of
//! `(-1, b0, -c0)`, which is trivial exactly when the fundamental unit has
//! norm `-1`.
//!
//! Coefficients are `i128`; with `|D|` capped by the bound (default `10^8`)
//! every intermediate value of composition fits comfortably.

use std::collections::HashMap;
use std::fmt;

use num_integer::{Integer, Roots};

use crate::abelian::{structure, AbelianType, FiniteAbelianGroup};
use crate::error::{Error, Result};
use crate::symbols::{PrimePair, Sign};
use crate::units::{fundamental_unit, is_squarefree};

pub const DEFAULT_BOUND: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BQForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl fmt::Display for BQForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

impl BQForm {
    pub fn new(a: i128, b: i128, c: i128) -> BQForm {
        BQForm { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `(1, b0, c0)` with `b0 = D mod 2`.
    pub fn principal(disc: i128) -> BQForm {
        let b = disc.rem_euclid(2);
        BQForm::new(1, b, (b * b - disc) / 4)
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// The inverse class is represented by `(a, -b, c)`.
    pub fn inverse(&self) -> BQForm {
        BQForm::new(self.a, -self.b, self.c)
    }

    /// Dirichlet composition; the result is not reduced. Valid for forms of
    /// either sign and either definiteness sharing a discriminant.
    pub fn compose(&self, other: &BQForm) -> BQForm {
        let disc = self.discriminant();
        debug_assert_eq!(disc, other.discriminant());
        let (a1, b1) = (self.a, self.b);
        let (a2, b2) = (other.a, other.b);
        let s = (b1 + b2) / 2;
        let (g, x, y) = ext_gcd(a1, a2);
        let (e, z, w) = ext_gcd(g, s);
        let (u, v) = (z * x, z * y);
        // u a1 + v a2 + w s = e
        let big_a = a1 * a2 / (e * e);
        let modulus = 2 * big_a.abs();
        let num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) / 2;
        let big_b = (num / e).rem_euclid(modulus);
        let big_c = (big_b * big_b - disc) / (4 * big_a);
        let out = BQForm::new(big_a, big_b, big_c);
        debug_assert_eq!(out.discriminant(), disc, "{self} * {other}");
        out
    }
}

/// Reduction of a positive definite form: `|b| <= a <= c`, with `b >= 0`
/// when either inequality is an equality.
pub fn reduce_definite(f: &BQForm) -> BQForm {
    let (mut a, mut b, mut c) = (f.a, f.b, f.c);
    assert!(a > 0 && f.discriminant() < 0, "{f} is not positive definite");
    loop {
        if b > a || b <= -a {
            // normalize b into (-a, a]
            let two_a = 2 * a;
            let mut r = b.rem_euclid(two_a);
            if r > a {
                r -= two_a;
            }
            let k = (r - b) / two_a;
            c += k * (b + k * a);
            b = r;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return BQForm::new(a, b, c);
    }
}

pub fn is_reduced_definite(f: &BQForm) -> bool {
    f.a > 0 && f.b.abs() <= f.a && f.a <= f.c && !(f.b < 0 && (f.b == -f.a || f.a == f.c))
}

/// Indefinite forms of discriminant `disc > 0`, with `s = floor(sqrt disc)`.
#[derive(Clone, Copy, Debug)]
pub struct Indefinite {
    pub disc: i128,
    pub s: i128,
}

impl Indefinite {
    pub fn new(disc: i128) -> Indefinite {
        assert!(disc > 0);
        let s = (disc as u128).sqrt() as i128;
        assert!(s * s != disc, "square discriminant");
        Indefinite { disc, s }
    }

    /// `|sqrt D - 2|a|| < b < sqrt D`.
    pub fn is_reduced(&self, f: &BQForm) -> bool {
        let a = f.a.abs();
        f.b > 0 && f.b <= self.s && 2 * a + f.b > self.s && 2 * a - f.b <= self.s
    }

    /// `(a, b, c) -> (c, b', (b'^2 - D)/4c)` with `b' = -b mod 2c` in the
    /// standard window.
    pub fn rho(&self, f: &BQForm) -> BQForm {
        let c = f.c;
        let ac = c.abs();
        let two_c = 2 * ac;
        let b = if ac <= self.s {
            self.s - (self.s + f.b).rem_euclid(two_c)
        } else {
            let mut r = (-f.b).rem_euclid(two_c);
            if r > ac {
                r -= two_c;
            }
            r
        };
        BQForm::new(c, b, (b * b - self.disc) / (4 * c))
    }

    pub fn reduce(&self, f: &BQForm) -> BQForm {
        let mut g = *f;
        let mut steps = 0u32;
        while !self.is_reduced(&g) {
            g = self.rho(&g);
            steps += 1;
            assert!(steps < 10_000, "indefinite reduction of {f} does not terminate");
        }
        g
    }

    /// Every primitive reduced form, sorted.
    pub fn reduced_forms(&self) -> Vec<BQForm> {
        let mut out = Vec::new();
        let mut b = if self.disc % 2 == 0 { 2 } else { 1 };
        while b <= self.s {
            let n = (self.disc - b * b) / 4;
            let lo = ((self.s + 1 - b + 1) / 2).max(1);
            let hi = (self.s + b) / 2;
            for a in lo..=hi {
                if n % a == 0 {
                    for sa in [a, -a] {
                        let f = BQForm::new(sa, b, -n / sa);
                        if f.is_primitive() {
                            debug_assert!(self.is_reduced(&f), "{f}");
                            out.push(f);
                        }
                    }
                }
            }
            b += 2;
        }
        out.sort();
        out
    }
}

/// Every primitive reduced positive definite form of discriminant `disc < 0`.
pub fn reduced_definite_forms(disc: i128) -> Vec<BQForm> {
    let mut out = Vec::new();
    let mut a = 1i128;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = BQForm::new(a, b, num / (4 * a));
            if is_reduced_definite(&f) && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    out
}

fn check_discriminant(disc: i64, bound: u64) -> Result<()> {
    if disc.rem_euclid(4) > 1 {
        return Err(Error::BadDiscriminant(disc));
    }
    if disc >= 0 {
        let r = (disc as u64).sqrt();
        if r * r == disc as u64 {
            return Err(Error::BadDiscriminant(disc));
        }
    }
    if disc.unsigned_abs() > bound {
        return Err(Error::BoundExceeded(disc.unsigned_abs(), bound));
    }
    Ok(())
}

/// Classes indexed by position in `reps`, with a lookup from canonical
/// forms to class indices.
struct FormGroup<F: Fn(&BQForm) -> BQForm> {
    reps: Vec<BQForm>,
    index: HashMap<BQForm, usize>,
    reduce: F,
    identity: usize,
}

impl<F: Fn(&BQForm) -> BQForm> FiniteAbelianGroup for FormGroup<F> {
    type Elem = usize;

    fn elements(&self) -> Vec<usize> {
        (0..self.reps.len()).collect()
    }

    fn op(&self, x: &usize, y: &usize) -> usize {
        let f = (self.reduce)(&self.reps[*x].compose(&self.reps[*y]));
        self.index[&f]
    }

    fn is_identity(&self, x: &usize) -> bool {
        *x == self.identity
    }
}

/// A concrete form class group: class representatives and the composition law.
pub struct FormClassGroup {
    pub disc: i64,
    /// One reduced representative per class.
    pub reps: Vec<BQForm>,
    class_of: HashMap<BQForm, usize>,
    indefinite: Option<Indefinite>,
}

impl FormClassGroup {
    /// The form class group (narrow when `disc > 0`).
    pub fn new(disc: i64, bound: u64) -> Result<FormClassGroup> {
        check_discriminant(disc, bound)?;
        let d = disc as i128;
        if d < 0 {
            let reps = reduced_definite_forms(d);
            let class_of = reps.iter().enumerate().map(|(i, f)| (*f, i)).collect();
            return Ok(FormClassGroup {
                disc,
                reps,
                class_of,
                indefinite: None,
            });
        }
        let ind = Indefinite::new(d);
        let forms = ind.reduced_forms();
        let mut class_of = HashMap::new();
        let mut reps = Vec::new();
        for f in &forms {
            if class_of.contains_key(f) {
                continue;
            }
            let id = reps.len();
            reps.push(*f);
            let mut g = *f;
            loop {
                class_of.insert(g, id);
                g = ind.rho(&g);
                assert!(ind.is_reduced(&g), "rho left the reduced set at {g}");
                if g == *f {
                    break;
                }
            }
        }
        Ok(FormClassGroup {
            disc,
            reps,
            class_of,
            indefinite: Some(ind),
        })
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn reduce(&self, f: &BQForm) -> BQForm {
        match &self.indefinite {
            None => reduce_definite(f),
            Some(ind) => ind.reduce(f),
        }
    }

    /// Class index of an arbitrary form of this discriminant.
    pub fn class_of(&self, f: &BQForm) -> usize {
        self.class_of[&self.reduce(f)]
    }

    pub fn compose(&self, x: usize, y: usize) -> usize {
        self.class_of(&self.reps[x].compose(&self.reps[y]))
    }

    pub fn identity(&self) -> usize {
        self.class_of(&BQForm::principal(self.disc as i128))
    }

    /// Class of `(-1, b0, -c0)`; only meaningful for `disc > 0`.
    pub fn negative_principal(&self) -> usize {
        let p = BQForm::principal(self.disc as i128);
        self.class_of(&BQForm::new(-1, p.b, -p.c))
    }

    fn as_group(&self) -> FormGroup<impl Fn(&BQForm) -> BQForm + '_> {
        FormGroup {
            reps: self.reps.clone(),
            index: self.class_of.clone(),
            reduce: move |f: &BQForm| self.reduce(f),
            identity: self.identity(),
        }
    }

    pub fn structure(&self) -> AbelianType {
        structure(&self.as_group())
    }

    /// Structure of the quotient by the class of `(-1, b0, -c0)`.
    pub fn wide_structure(&self) -> AbelianType {
        let j = self.negative_principal();
        if j == self.identity() {
            return self.structure();
        }
        let canon = |x: usize| x.min(self.compose(x, j));
        let members: Vec<usize> = (0..self.order()).filter(|&x| canon(x) == x).collect();
        let quotient = Quotient {
            group: self,
            members,
            canon: &canon,
            identity: canon(self.identity()),
        };
        structure(&quotient)
    }
}

struct Quotient<'a, C: Fn(usize) -> usize> {
    group: &'a FormClassGroup,
    members: Vec<usize>,
    canon: &'a C,
    identity: usize,
}

impl<C: Fn(usize) -> usize> FiniteAbelianGroup for Quotient<'_, C> {
    type Elem = usize;

    fn elements(&self) -> Vec<usize> {
        self.members.clone()
    }

    fn op(&self, x: &usize, y: &usize) -> usize {
        (self.canon)(self.group.compose(*x, *y))
    }

    fn is_identity(&self, x: &usize) -> bool {
        *x == self.identity
    }
}

/// The radicand `m` of the quadratic field with fundamental discriminant `disc`,
/// if `disc` is fundamental.
fn fundamental_radicand(disc: i64) -> Option<i64> {
    let m = if disc.rem_euclid(4) == 1 {
        disc
    } else if disc.rem_euclid(16) == 8 || disc.rem_euclid(16) == 12 {
        disc / 4
    } else {
        return None;
    };
    is_squarefree(m.unsigned_abs()).then_some(m)
}

/// The (wide) class group of discriminant `disc`.
pub fn class_group_with_bound(disc: i64, bound: u64) -> Result<AbelianType> {
    let g = FormClassGroup::new(disc, bound)?;
    if disc < 0 {
        return Ok(g.structure());
    }
    if let Some(m) = fundamental_radicand(disc) {
        let unit_norm = fundamental_unit(m as u64)?.norm;
        let split = g.negative_principal() == g.identity();
        if split != (unit_norm == Sign::Minus) {
            return Err(Error::Consistency {
                rule: "narrow class of -1 versus norm of the fundamental unit",
                detail: format!("disc {disc}: N(eps) = {unit_norm}, (-1, b, -c) principal: {split}"),
            });
        }
    }
    Ok(g.wide_structure())
}

pub fn class_group(disc: i64) -> Result<AbelianType> {
    class_group_with_bound(disc, DEFAULT_BOUND)
}

/// The narrow class group for `disc > 0`; equal to `class_group` otherwise.
pub fn narrow_class_group(disc: i64) -> Result<AbelianType> {
    Ok(FormClassGroup::new(disc, DEFAULT_BOUND)?.structure())
}

/// Discriminant of `Q(sqrt m)` for square-free `m`.
pub fn field_discriminant(m: i64) -> Result<i64> {
    if m == 0 || m == 1 || !is_squarefree(m.unsigned_abs()) {
        return Err(Error::BadRadicand(m));
    }
    Ok(if m.rem_euclid(4) == 1 { m } else { 4 * m })
}

/// The class group of `Q(sqrt m)`.
pub fn field_class_group(m: i64) -> Result<AbelianType> {
    class_group(field_discriminant(m)?)
}

/// `(m, n)` with `2^(m+1)` the 2-class number of `Q(sqrt(-p1 p2))` and
/// `2^n` that of `Q(sqrt(p1 p2))`.
pub fn exponents_mn(pair: &PrimePair) -> Result<(u32, u32)> {
    let r = pair.r() as i64;
    let imag = field_class_group(-r)?.two_part().log2_order();
    let real = field_class_group(r)?.two_part().log2_order();
    if imag < 3 || real < 1 {
        return Err(Error::Consistency {
            rule: "m >= 2 and n >= 1",
            detail: format!("{pair}: h2(-p1p2) = 2^{imag}, h2(p1p2) = 2^{real}"),
        });
    }
    Ok((imag - 1, real))
}
