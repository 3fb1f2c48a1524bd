//! The metabelian 2-group `G = <rho, sigma, tau>` with abelian normal
//! subgroup `A = <sigma, tau>` of index 2.
//!
//! Every element has the normal form `rho^eps sigma^a tau^b`. Conjugation by
//! `rho` acts on `A` as `phi`, and `rho^2 = psi` lies in `A`:
//!
//! * `q = 1`: `sigma^(2^m) = tau^(2^(n+1)) = 1`, `phi = inversion`,
//!   `psi = sigma^(2^(m-1))` or `tau^(2^n) sigma^(2^(m-1))`;
//! * `q = 2`: `sigma^(2^m) = tau^(2^(n+1))` of order 2,
//!   `phi(sigma) = sigma^3`, `phi(tau) = tau^-1`,
//!   `psi = tau^(2^n) sigma^(2^(m-1))`.
//!
//! Subgroups are realized as explicit member sets, which is cheap at the
//! orders that occur (a few thousand elements).

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::AbelianType;
use crate::classes::{ClassSubgroup, ClassVector};
use crate::error::{Error, Result};

/// Largest group order the engine will enumerate.
pub const ORDER_GUARD_LOG2: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiVariant {
    /// `rho^2 = sigma^(2^(m-1))`
    SigmaOnly,
    /// `rho^2 = tau^(2^n) sigma^(2^(m-1))`
    TauSigma,
}

impl fmt::Display for PsiVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiVariant::SigmaOnly => write!(f, "sigma-only"),
            PsiVariant::TauSigma => write!(f, "tau-sigma"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GPresentation {
    pub m: u32,
    pub n: u32,
    pub q: u8,
    pub psi: PsiVariant,
}

impl GPresentation {
    /// The parameter shapes that occur for actual prime pairs:
    /// `q = 1` with `n = 1, m >= 3` or `m = 2, n >= 2`; `q = 2` with `m = 2`.
    pub fn is_admissible(&self) -> bool {
        match self.q {
            1 => (self.n == 1 && self.m >= 3) || (self.m == 2 && self.n >= 2),
            2 => self.m == 2 && self.n >= 1,
            _ => false,
        }
    }
}

impl fmt::Display for GPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, n={}, q={}, psi={})", self.m, self.n, self.q, self.psi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElement {
    pub eps: u8,
    pub a: u32,
    pub b: u32,
}

impl fmt::Display for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.eps == 1 {
            parts.push("rho".to_string());
        }
        if self.a > 0 {
            parts.push(format!("sigma^{}", self.a));
        }
        if self.b > 0 {
            parts.push(format!("tau^{}", self.b));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// The group attached to a presentation, with its multiplication.
#[derive(Clone, Debug)]
pub struct Group {
    pub pres: GPresentation,
    /// Exponent bound of sigma in normal form.
    a_mod: i64,
    /// Exponent bound of tau in normal form.
    b_mod: i64,
    psi: (i64, i64),
}

impl Group {
    /// Builds and checks the group; `m >= 2`, `n >= 1` are required.
    pub fn new(pres: GPresentation) -> Result<Group> {
        if pres.m < 2 || pres.n < 1 {
            return Err(Error::InconsistentPresentation(format!(
                "{pres}: m >= 2 and n >= 1 are required"
            )));
        }
        Self::build(pres)
    }

    /// Builds the group for any `m, n >= 1`, still checking that the
    /// relations define a group of the expected order.
    pub fn build(pres: GPresentation) -> Result<Group> {
        if pres.m < 1 || pres.n < 1 || !(pres.q == 1 || pres.q == 2) {
            return Err(Error::InconsistentPresentation(format!("{pres}: bad parameters")));
        }
        let log2 = pres.m + pres.n + 1 + pres.q as u32;
        if log2 > ORDER_GUARD_LOG2 {
            return Err(Error::GroupTooLarge(log2));
        }
        let a_mod = 1i64 << (pres.m + pres.q as u32 - 1);
        let b_mod = 1i64 << (pres.n + 1);
        let half_sigma = 1i64 << (pres.m - 1);
        let half_tau = 1i64 << pres.n;
        let psi = match (pres.q, pres.psi) {
            (1, PsiVariant::SigmaOnly) => (half_sigma, 0),
            _ => (half_sigma, half_tau),
        };
        let g = Group {
            pres,
            a_mod,
            b_mod,
            psi,
        };
        g.check_consistency()?;
        Ok(g)
    }

    fn check_consistency(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::InconsistentPresentation(format!("{}: {what}", self.pres)));
        // conjugation by rho^2 is phi^2, and rho^2 lies in the abelian A
        for (name, (a, b)) in [("sigma", (1i64, 0i64)), ("tau", (0, 1))] {
            let (a1, b1) = self.phi(a, b);
            if self.phi(a1 as i64, b1 as i64) != self.norm_ab(a, b) {
                return fail(&format!("rho^2 does not commute with {name}"));
            }
        }
        let psi = self.from_a(self.psi.0, self.psi.1);
        if self.phi(psi.a as i64, psi.b as i64) != (psi.a, psi.b) {
            return fail("rho does not commute with rho^2");
        }
        // phi must respect the relation defining A
        if self.pres.q == 2 {
            let lhs = self.phi(1i64 << self.pres.m, 0);
            let rhs = self.phi(0, self.b_mod);
            if lhs != rhs {
                return fail("conjugation by rho does not respect sigma^(2^m) = tau^(2^(n+1))");
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        2 * (self.a_mod * self.b_mod) as usize
    }

    pub fn log2_order(&self) -> u32 {
        self.order().trailing_zeros()
    }

    fn norm_ab(&self, a: i64, b: i64) -> (u32, u32) {
        if self.pres.q == 1 {
            (a.rem_euclid(self.a_mod) as u32, b.rem_euclid(self.b_mod) as u32)
        } else {
            let k = b.div_euclid(self.b_mod);
            let b = b.rem_euclid(self.b_mod);
            let a = (a + k * (1i64 << self.pres.m)).rem_euclid(self.a_mod);
            (a as u32, b as u32)
        }
    }

    fn phi(&self, a: i64, b: i64) -> (u32, u32) {
        if self.pres.q == 1 {
            self.norm_ab(-a, -b)
        } else {
            self.norm_ab(3 * a, -b)
        }
    }

    fn from_a(&self, a: i64, b: i64) -> GElement {
        let (a, b) = self.norm_ab(a, b);
        GElement { eps: 0, a, b }
    }

    pub fn element(&self, eps: u8, a: i64, b: i64) -> GElement {
        let (a, b) = self.norm_ab(a, b);
        GElement { eps: eps % 2, a, b }
    }

    pub fn identity(&self) -> GElement {
        GElement { eps: 0, a: 0, b: 0 }
    }

    pub fn rho(&self) -> GElement {
        GElement { eps: 1, a: 0, b: 0 }
    }

    pub fn sigma(&self) -> GElement {
        self.element(0, 1, 0)
    }

    pub fn tau(&self) -> GElement {
        self.element(0, 0, 1)
    }

    /// `rho^2` in normal form.
    pub fn psi(&self) -> GElement {
        self.from_a(self.psi.0, self.psi.1)
    }

    pub fn is_valid(&self, x: &GElement) -> bool {
        x.eps < 2 && (x.a as i64) < self.a_mod && (x.b as i64) < self.b_mod
    }

    /// `(rho^e1 x1)(rho^e2 x2) = rho^(e1+e2) phi^e2(x1) x2`.
    pub fn mul(&self, x: &GElement, y: &GElement) -> GElement {
        let (a, b) = if y.eps == 1 {
            self.phi(x.a as i64, x.b as i64)
        } else {
            (x.a, x.b)
        };
        let (mut a, mut b) = (a as i64 + y.a as i64, b as i64 + y.b as i64);
        let mut eps = x.eps + y.eps;
        if eps == 2 {
            a += self.psi.0;
            b += self.psi.1;
            eps = 0;
        }
        let (a, b) = self.norm_ab(a, b);
        GElement { eps, a, b }
    }

    pub fn checked_mul(&self, x: &GElement, y: &GElement) -> Result<GElement> {
        if !self.is_valid(x) || !self.is_valid(y) {
            return Err(Error::PresentationMismatch);
        }
        Ok(self.mul(x, y))
    }

    pub fn inv(&self, x: &GElement) -> GElement {
        let xa = self.from_a(-(x.a as i64), -(x.b as i64));
        if x.eps == 0 {
            return xa;
        }
        // (rho x)^-1 = x^-1 rho^-1 = x^-1 rho psi^-1
        let psi_inv = self.from_a(-self.psi.0, -self.psi.1);
        self.mul(&self.mul(&xa, &self.rho()), &psi_inv)
    }

    pub fn pow(&self, x: &GElement, e: u64) -> GElement {
        let mut acc = self.identity();
        let mut base = *x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(&self, x: &GElement, y: &GElement) -> GElement {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&self.inv(&yx), &xy)
    }

    pub fn conjugate(&self, x: &GElement, by: &GElement) -> GElement {
        self.mul(&self.mul(&self.inv(by), x), by)
    }

    pub fn element_order(&self, x: &GElement) -> u64 {
        let mut k = 1;
        let mut y = *x;
        while y != self.identity() {
            y = self.mul(&y, x);
            k += 1;
        }
        k
    }

    pub fn index_of(&self, x: &GElement) -> usize {
        (x.eps as usize * self.a_mod as usize + x.a as usize) * self.b_mod as usize + x.b as usize
    }

    pub fn element_at(&self, i: usize) -> GElement {
        let b = i % self.b_mod as usize;
        let rest = i / self.b_mod as usize;
        let a = rest % self.a_mod as usize;
        GElement {
            eps: (rest / self.a_mod as usize) as u8,
            a: a as u32,
            b: b as u32,
        }
    }

    pub fn enumerate(&self) -> Vec<GElement> {
        (0..self.order()).map(|i| self.element_at(i)).collect()
    }

    pub fn generators(&self) -> Vec<GElement> {
        vec![self.rho(), self.sigma(), self.tau()]
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup(&self.generators())
    }

    pub fn trivial(&self) -> Subgroup {
        self.subgroup(&[])
    }

    pub fn subgroup(&self, gens: &[GElement]) -> Subgroup {
        let mut members = vec![false; self.order()];
        let mut elements = vec![self.identity()];
        members[self.index_of(&self.identity())] = true;
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.mul(&x, g);
                let i = self.index_of(&y);
                if !members[i] {
                    members[i] = true;
                    elements.push(y);
                    queue.push_back(y);
                }
            }
        }
        elements.sort();
        let gens = reduce_generators(self, gens);
        Subgroup {
            gens,
            members,
            elements,
        }
    }

    fn subgroup_from_members(&self, members: Vec<bool>) -> Subgroup {
        let candidates: Vec<GElement> = (0..self.order())
            .filter(|&i| members[i])
            .map(|i| self.element_at(i))
            .collect();
        let s = self.subgroup(&candidates);
        assert_eq!(s.members, members, "member set is not a subgroup");
        s
    }

    pub fn intersection(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let members = h.members.iter().zip(&k.members).map(|(x, y)| *x && *y).collect();
        self.subgroup_from_members(members)
    }

    /// Smallest subgroup containing `gens` and normalized by `by`.
    pub fn normal_closure(&self, gens: &[GElement], by: &[GElement]) -> Subgroup {
        let mut current = self.subgroup(gens);
        loop {
            let mut extra = Vec::new();
            for s in &current.gens {
                for g in by {
                    let c = self.conjugate(s, g);
                    if !current.contains(self, &c) && !extra.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return current;
            }
            let mut all = current.gens.clone();
            all.extend(extra);
            current = self.subgroup(&all);
        }
    }

    /// `[H, K]`: the normal closure in `<H, K>` of the commutators of generators.
    pub fn commutator_subgroup(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let mut comms = Vec::new();
        for x in &h.gens {
            for y in &k.gens {
                comms.push(self.commutator(x, y));
            }
        }
        let mut by = h.gens.clone();
        by.extend(k.gens.iter().copied());
        self.normal_closure(&comms, &by)
    }

    pub fn derived(&self, h: &Subgroup) -> Subgroup {
        self.commutator_subgroup(h, h)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        self.derived(&self.whole())
    }

    /// `gamma_1 = G, gamma_(j+1) = [gamma_j, G]`, ending with the trivial group.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let g = self.whole();
        let mut series = vec![g.clone()];
        loop {
            let next = self.commutator_subgroup(series.last().expect("nonempty"), &g);
            let done = next.order() == 1;
            if next.order() == series.last().expect("nonempty").order() {
                // not nilpotent; cannot happen for 2-groups
                panic!("lower central series stalls at order {}", next.order());
            }
            series.push(next);
            if done {
                return series;
            }
        }
    }

    pub fn nilpotency_class(&self) -> u32 {
        self.lower_central_series().len() as u32 - 1
    }

    pub fn coclass(&self) -> u32 {
        self.log2_order() - self.nilpotency_class()
    }

    pub fn is_normal_in(&self, n: &Subgroup, h: &Subgroup) -> bool {
        n.gens
            .iter()
            .all(|x| h.gens.iter().all(|g| n.contains(self, &self.conjugate(x, g))))
    }

    /// Elementary divisors of the abelian quotient `H / N`.
    pub fn abelian_invariants(&self, h: &Subgroup, n: &Subgroup) -> Result<AbelianType> {
        if !n.elements.iter().all(|x| h.contains(self, x)) || !self.is_normal_in(n, h) {
            return Err(Error::NotNormal);
        }
        for x in &h.gens {
            for y in &h.gens {
                if !n.contains(self, &self.commutator(x, y)) {
                    return Err(Error::InconsistentPresentation("quotient is not abelian".to_string()));
                }
            }
        }
        let quotient = h.order() / n.order();
        let target = quotient.trailing_zeros();
        let mut logs = Vec::new();
        let mut k = 0u32;
        loop {
            k += 1;
            let count = h
                .elements
                .iter()
                .filter(|x| n.contains(self, &self.pow(x, 1 << k)))
                .count();
            let log = (count / n.order()).trailing_zeros();
            logs.push(log);
            if log == target {
                break;
            }
        }
        Ok(AbelianType::from_torsion_counts(2, &logs))
    }

    /// `H / H'`.
    pub fn abelianization(&self, h: &Subgroup) -> AbelianType {
        self.abelian_invariants(h, &self.derived(h))
            .expect("derived subgroup is normal with abelian quotient")
    }

    /// Right cosets `H t`, as a coset index for every element of `G`.
    fn right_cosets(&self, h: &Subgroup) -> (Vec<usize>, Vec<GElement>) {
        let mut coset = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for i in 0..self.order() {
            if coset[i] != usize::MAX {
                continue;
            }
            let t = self.element_at(i);
            for x in &h.elements {
                coset[self.index_of(&self.mul(x, &t))] = reps.len();
            }
            reps.push(t);
        }
        (coset, reps)
    }

    /// Canonical representative of the coset `x H'` given `H'`.
    pub fn coset_rep(&self, x: &GElement, sub: &Subgroup) -> GElement {
        sub.elements
            .iter()
            .map(|y| self.mul(x, y))
            .min()
            .expect("subgroups are nonempty")
    }

    /// The transfer `V_{G -> H}(g)` as an element of `H` (a representative of
    /// its class mod `H'`), using the right transversal `reps`:
    /// `t_i g = h_i t_pi(i)` and `V(g) = prod h_i`.
    pub fn transfer_with(&self, h: &Subgroup, reps: &[GElement], g: &GElement) -> Result<GElement> {
        if !self.is_valid(g) {
            return Err(Error::NotInGroup);
        }
        let mut coset_of = vec![usize::MAX; self.order()];
        for (j, t) in reps.iter().enumerate() {
            for x in &h.elements {
                let i = self.index_of(&self.mul(x, t));
                if coset_of[i] != usize::MAX {
                    return Err(Error::InconsistentPresentation("not a transversal".to_string()));
                }
                coset_of[i] = j;
            }
        }
        if coset_of.contains(&usize::MAX) {
            return Err(Error::InconsistentPresentation("not a transversal".to_string()));
        }
        let mut acc = self.identity();
        for t in reps {
            let tg = self.mul(t, g);
            let j = coset_of[self.index_of(&tg)];
            let hi = self.mul(&tg, &self.inv(&reps[j]));
            acc = self.mul(&acc, &hi);
        }
        Ok(acc)
    }

    /// The transfer reduced to its canonical representative mod `H'`.
    pub fn transfer(&self, h: &Subgroup, g: &GElement) -> Result<GElement> {
        let (_, reps) = self.right_cosets(h);
        let v = self.transfer_with(h, &reps, g)?;
        Ok(self.coset_rep(&v, &self.derived(h)))
    }

    /// Closed form for index 2: `g z^-1 g z` if `g` is in `H`, else `g^2`,
    /// with `z` outside `H`; reduced mod `H'`.
    pub fn transfer_index_two(&self, h: &Subgroup, g: &GElement) -> GElement {
        assert_eq!(2 * h.order(), self.order(), "H must have index 2");
        let v = if h.contains(self, g) {
            let z = self
                .generators()
                .into_iter()
                .find(|z| !h.contains(self, z))
                .expect("a generator lies outside a proper subgroup");
            self.mul(g, &self.conjugate(g, &z))
        } else {
            self.mul(g, g)
        };
        self.coset_rep(&v, &self.derived(h))
    }

    /// `tau^x0 rho^x1 (rho sigma)^x2`.
    pub fn class_to_group(&self, v: ClassVector) -> GElement {
        let mut g = self.identity();
        if v.bit(0) {
            g = self.mul(&g, &self.tau());
        }
        if v.bit(1) {
            g = self.mul(&g, &self.rho());
        }
        if v.bit(2) {
            g = self.mul(&g, &self.mul(&self.rho(), &self.sigma()));
        }
        g
    }

    /// Inverse of `class_to_group` on `G / G'`.
    pub fn group_to_class(&self, g: &GElement, derived: &Subgroup) -> ClassVector {
        ClassVector::all()
            .find(|&v| {
                let t = self.class_to_group(v);
                derived.contains(self, &self.mul(g, &self.inv(&t)))
            })
            .expect("G/G' is covered by the eight classes")
    }

    /// The subgroup `<class_to_group(classes), G'>`.
    pub fn subgroup_over_classes(&self, classes: ClassSubgroup, derived: &Subgroup) -> Subgroup {
        let mut gens: Vec<GElement> = classes.generators().iter().map(|&v| self.class_to_group(v)).collect();
        gens.extend(derived.gens.iter().copied());
        self.subgroup(&gens)
    }

    /// Classes of `G/G'` whose transfer to `H` is trivial in `H/H'`.
    pub fn transfer_kernel(&self, h: &Subgroup) -> ClassSubgroup {
        let (_, reps) = self.right_cosets(h);
        let hd = self.derived(h);
        let members = ClassVector::all().filter(|&v| {
            let g = self.class_to_group(v);
            let t = self.transfer_with(h, &reps, &g).expect("valid element");
            hd.contains(self, &t)
        });
        ClassSubgroup::from_members(members)
    }
}

/// Drops generators already in the span of the earlier ones.
fn reduce_generators(g: &Group, gens: &[GElement]) -> Vec<GElement> {
    let mut kept: Vec<GElement> = Vec::new();
    let mut span = vec![false; g.order()];
    span[g.index_of(&g.identity())] = true;
    let mut elements = vec![g.identity()];
    for x in gens {
        if span[g.index_of(x)] {
            continue;
        }
        kept.push(*x);
        // extend span by closure under all kept generators
        let mut queue: VecDeque<GElement> = elements.iter().copied().collect();
        while let Some(y) = queue.pop_front() {
            for k in &kept {
                let z = g.mul(&y, k);
                let i = g.index_of(&z);
                if !span[i] {
                    span[i] = true;
                    elements.push(z);
                    queue.push_back(z);
                }
            }
        }
    }
    kept
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    gens: Vec<GElement>,
    members: Vec<bool>,
    elements: Vec<GElement>,
}

/// Equality of member sets; generators are not compared.
impl PartialEq for Subgroup {
    fn eq(&self, other: &Subgroup) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn gens(&self) -> &[GElement] {
        &self.gens
    }

    pub fn elements(&self) -> &[GElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Group, x: &GElement) -> bool {
        self.members[g.index_of(x)]
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| !a || *b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(m: u32, n: u32, q: u8, psi: PsiVariant) -> Group {
        Group::new(GPresentation { m, n, q, psi }).unwrap()
    }

    fn t(v: &[u64]) -> AbelianType {
        AbelianType::from_cyclic(v)
    }

    fn all_presentations(max: u32) -> Vec<GPresentation> {
        let mut out = Vec::new();
        for m in 2..=max {
            for n in 1..=max {
                for psi in [PsiVariant::SigmaOnly, PsiVariant::TauSigma] {
                    out.push(GPresentation { m, n, q: 1, psi });
                }
                if m == 2 {
                    out.push(GPresentation {
                        m,
                        n,
                        q: 2,
                        psi: PsiVariant::TauSigma,
                    });
                }
            }
        }
        out
    }

    #[test]
    fn multiply_examples() {
        let g = group(3, 1, 1, PsiVariant::SigmaOnly);
        assert_eq!(g.mul(&g.rho(), &g.rho()), g.element(0, 4, 0));
        let x = g.element(1, 3, 2);
        assert_eq!(g.mul(&g.identity(), &x), x);
        assert_eq!(g.conjugate(&g.tau(), &g.rho()), g.inv(&g.tau()));
        let g = group(3, 1, 1, PsiVariant::TauSigma);
        assert_eq!(g.mul(&g.rho(), &g.rho()), g.element(0, 4, 2));
        let g = group(2, 1, 2, PsiVariant::TauSigma);
        assert_eq!(g.conjugate(&g.sigma(), &g.rho()), g.pow(&g.sigma(), 3));
        assert_eq!(g.conjugate(&g.tau(), &g.rho()), g.inv(&g.tau()));
        assert_eq!(g.element_order(&g.sigma()), 8);
        assert_eq!(g.element_order(&g.tau()), 8);
        assert_eq!(g.pow(&g.tau(), 4), g.pow(&g.sigma(), 4));
    }

    #[test]
    fn presentation_mismatch() {
        let g = group(2, 1, 1, PsiVariant::SigmaOnly);
        let big = GElement { eps: 0, a: 9, b: 0 };
        assert_eq!(g.checked_mul(&big, &g.rho()), Err(Error::PresentationMismatch));
    }

    #[test]
    fn enumeration_orders() {
        assert_eq!(group(3, 1, 1, PsiVariant::TauSigma).enumerate().len(), 64);
        assert_eq!(group(2, 1, 2, PsiVariant::TauSigma).enumerate().len(), 64);
        assert_eq!(group(2, 2, 1, PsiVariant::SigmaOnly).enumerate().len(), 64);
        for pres in all_presentations(5) {
            let g = Group::new(pres).unwrap();
            let expected = 1usize << (pres.m + pres.n + 1 + pres.q as u32);
            assert_eq!(g.order(), expected);
            let mut seen = vec![false; g.order()];
            for x in g.enumerate() {
                assert!(!std::mem::replace(&mut seen[g.index_of(&x)], true));
            }
            // the generators reach every element
            assert_eq!(g.whole().order(), expected, "{pres}");
        }
    }

    #[test]
    fn inconsistent_presentations_are_rejected() {
        for m in 3..6 {
            let pres = GPresentation {
                m,
                n: 1,
                q: 2,
                psi: PsiVariant::TauSigma,
            };
            assert!(matches!(Group::new(pres), Err(Error::InconsistentPresentation(_))));
        }
        let pres = GPresentation {
            m: 1,
            n: 1,
            q: 1,
            psi: PsiVariant::TauSigma,
        };
        assert!(matches!(Group::new(pres), Err(Error::InconsistentPresentation(_))));
        assert!(Group::build(pres).is_ok());
        let pres = GPresentation {
            m: 12,
            n: 7,
            q: 1,
            psi: PsiVariant::TauSigma,
        };
        assert_eq!(Group::new(pres).err(), Some(Error::GroupTooLarge(21)));
    }

    #[test]
    fn associativity_and_relations_exhaustive() {
        for pres in all_presentations(3) {
            let g = Group::new(pres).unwrap();
            if g.order() > 512 {
                continue;
            }
            let els = g.enumerate();
            for x in &els {
                assert_eq!(g.mul(x, &g.inv(x)), g.identity());
                for y in &els {
                    let xy = g.mul(x, y);
                    for z in els.iter().step_by(3) {
                        assert_eq!(g.mul(&xy, z), g.mul(x, &g.mul(y, z)), "{pres}");
                    }
                }
            }
            let (rho, sigma, tau) = (g.rho(), g.sigma(), g.tau());
            assert_eq!(g.pow(&rho, 4), g.identity());
            assert_eq!(g.pow(&rho, 2), g.psi());
            assert_eq!(g.commutator(&sigma, &tau), g.identity());
        }
    }

    #[test]
    fn identities_between_generators() {
        for pres in all_presentations(4) {
            let g = Group::new(pres).unwrap();
            let (rho, sigma, tau) = (g.rho(), g.sigma(), g.tau());
            let rho2 = g.mul(&rho, &rho);
            assert_eq!(g.commutator(&rho2, &sigma), g.identity());
            assert_eq!(g.commutator(&rho2, &tau), g.identity());
            let tr = g.mul(&tau, &rho);
            assert_eq!(g.mul(&tr, &tr), rho2, "{pres}");
            let str_ = g.mul(&sigma, &tr);
            let sr = g.mul(&sigma, &rho);
            assert_eq!(g.mul(&str_, &str_), g.mul(&sr, &sr), "{pres}");
            for r in 0..=pres.n {
                let t2r = g.pow(&tau, 1 << r);
                assert_eq!(g.commutator(&rho, &t2r), g.pow(&tau, 1 << (r + 1)), "{pres} r={r}");
            }
        }
    }

    /// Oracle: the subgroup generated by every commutator of every pair.
    fn brute_derived(g: &Group) -> Subgroup {
        let els = g.enumerate();
        let mut comms = Vec::new();
        for x in &els {
            for y in &els {
                comms.push(g.commutator(x, y));
            }
        }
        comms.sort();
        comms.dedup();
        g.subgroup(&comms)
    }

    #[test]
    fn derived_subgroup_matches_all_pairs() {
        for pres in all_presentations(3) {
            let g = Group::new(pres).unwrap();
            if g.order() > 512 {
                continue;
            }
            assert_eq!(g.derived_subgroup(), brute_derived(&g), "{pres}");
        }
    }

    #[test]
    fn derived_subgroup_examples() {
        let g = group(3, 1, 1, PsiVariant::TauSigma);
        let d = g.derived_subgroup();
        let expect = g.subgroup(&[g.pow(&g.sigma(), 2), g.pow(&g.tau(), 2)]);
        assert_eq!(d, expect);
        assert_eq!(g.abelian_invariants(&d, &g.trivial()).unwrap(), t(&[2, 4]));
        let g = group(2, 1, 2, PsiVariant::TauSigma);
        assert_eq!(
            g.abelian_invariants(&g.derived_subgroup(), &g.trivial()).unwrap(),
            t(&[2, 4])
        );
        let a = g.subgroup(&[g.sigma(), g.tau()]);
        assert_eq!(g.derived(&a).order(), 1);
    }

    #[test]
    fn lower_central_series_shape() {
        for pres in all_presentations(5) {
            let g = Group::new(pres).unwrap();
            let series = g.lower_central_series();
            for (j, gamma) in series.iter().enumerate().skip(1) {
                let expect = g.subgroup(&[g.pow(&g.sigma(), 1 << j), g.pow(&g.tau(), 1 << j)]);
                assert_eq!(*gamma, expect, "{pres} gamma_{}", j + 1);
            }
            let (m, n) = (pres.m, pres.n);
            let class = if pres.q == 1 {
                n.max(m - 1) + 1
            } else {
                (n + 1).max(m) + 1
            };
            assert_eq!(g.nilpotency_class(), class, "{pres}");
            if pres.is_admissible() {
                assert_eq!(g.coclass(), 3, "{pres}");
            }
        }
        let g = group(2, 4, 2, PsiVariant::TauSigma);
        assert_eq!((g.nilpotency_class(), g.coclass()), (6, 3));
    }

    #[test]
    fn abelian_invariant_examples() {
        for pres in all_presentations(4) {
            let g = Group::new(pres).unwrap();
            assert_eq!(g.abelianization(&g.whole()), t(&[2, 2, 2]), "{pres}");
            let gp = g.derived_subgroup();
            let expect = if pres.q == 1 {
                t(&[1 << (pres.m - 1), 1 << pres.n])
            } else {
                t(&[2, 1 << (pres.n + 1)])
            };
            assert_eq!(g.abelian_invariants(&gp, &g.trivial()).unwrap(), expect);
        }
        let g = group(3, 1, 1, PsiVariant::TauSigma);
        let h = g.subgroup(&[g.sigma(), g.pow(&g.tau(), 2)]);
        assert_eq!(g.abelian_invariants(&h, &g.trivial()).unwrap(), t(&[2, 8]));
        let h = g.subgroup(&[g.sigma(), g.rho()]);
        let n = g.normal_closure(&[g.pow(&g.sigma(), 2)], &h.gens);
        assert_eq!(g.abelian_invariants(&h, &n).unwrap(), t(&[2, 4]));
        let h = g.subgroup(&[g.rho()]);
        assert_eq!(
            g.abelian_invariants(&h, &g.subgroup(&[g.sigma()])),
            Err(Error::NotNormal)
        );
    }

    /// Oracle for abelian invariants of small quotients: greedily split off
    /// cyclic factors of maximal order in `H / N`.
    fn greedy_invariants(g: &Group, h: &Subgroup, n: &Subgroup) -> AbelianType {
        let mut sub = n.clone();
        let mut orders = Vec::new();
        while sub.order() < h.order() {
            let (k, x) = h
                .elements
                .iter()
                .map(|x| {
                    let mut k = 1u64;
                    let mut y = *x;
                    while !sub.contains(g, &y) {
                        y = g.mul(&y, x);
                        k += 1;
                    }
                    (k, *x)
                })
                .max()
                .expect("nonempty");
            orders.push(k);
            let mut gens = sub.gens.clone();
            gens.push(x);
            sub = g.subgroup(&gens);
        }
        AbelianType::from_cyclic(&orders)
    }

    #[test]
    fn abelian_invariants_match_greedy_oracle() {
        for pres in all_presentations(3) {
            let g = Group::new(pres).unwrap();
            if g.order() > 256 {
                continue;
            }
            let whole = g.whole();
            let gp = g.derived_subgroup();
            for v in ClassVector::all().filter(|v| !v.is_one()) {
                for w in ClassVector::all() {
                    let classes = ClassSubgroup::generated(&[v, w]);
                    let h = g.subgroup_over_classes(classes, &gp);
                    let hd = g.derived(&h);
                    assert_eq!(g.abelianization(&h), greedy_invariants(&g, &h, &hd), "{pres}");
                }
            }
            assert_eq!(g.abelianization(&whole), greedy_invariants(&g, &whole, &gp));
        }
    }

    #[test]
    fn index_two_transfer_closed_form() {
        for pres in all_presentations(3) {
            let g = Group::new(pres).unwrap();
            if g.order() > 512 {
                continue;
            }
            let gp = g.derived_subgroup();
            for v in ClassVector::all().filter(|v| !v.is_one()) {
                for w in ClassVector::all() {
                    let classes = ClassSubgroup::generated(&[v, w]);
                    if classes.order() != 4 {
                        continue;
                    }
                    let h = g.subgroup_over_classes(classes, &gp);
                    for x in g.enumerate() {
                        assert_eq!(g.transfer(&h, &x).unwrap(), g.transfer_index_two(&h, &x), "{pres}");
                    }
                }
            }
        }
    }

    #[test]
    fn transfer_ignores_transversal_choice() {
        use proptest::strategy::{Strategy, ValueTree};
        use proptest::test_runner::TestRunner;
        let mut runner = TestRunner::deterministic();
        for pres in all_presentations(3) {
            let g = Group::new(pres).unwrap();
            let gp = g.derived_subgroup();
            let classes = ClassSubgroup::generated(&[ClassVector::H1]);
            let h = g.subgroup_over_classes(classes, &gp);
            let hd = g.derived(&h);
            let (_, reps) = g.right_cosets(&h);
            for _ in 0..8 {
                let picks = proptest::collection::vec(0..h.order(), reps.len())
                    .new_tree(&mut runner)
                    .unwrap()
                    .current();
                let other: Vec<GElement> = reps
                    .iter()
                    .zip(&picks)
                    .map(|(t, &i)| g.mul(&h.elements[i], t))
                    .collect();
                for x in g.enumerate().iter().step_by(5) {
                    let a = g.transfer_with(&h, &reps, x).unwrap();
                    let b = g.transfer_with(&h, &other, x).unwrap();
                    assert_eq!(g.coset_rep(&a, &hd), g.coset_rep(&b, &hd), "{pres}");
                }
            }
        }
    }

    #[test]
    fn transfer_examples() {
        // an index-2 subgroup containing rho but not tau, with (p1/p2) = -1 data
        let g = group(3, 1, 1, PsiVariant::TauSigma);
        let gp = g.derived_subgroup();
        let g1 = g.subgroup_over_classes(ClassSubgroup::generated(&[ClassVector::H1, ClassVector::H2]), &gp);
        let g1d = g.derived(&g1);
        assert_eq!(g.transfer(&g1, &g.rho()).unwrap(), g.coset_rep(&g.identity(), &g1d));
        let tau_image = g.transfer(&g1, &g.tau()).unwrap();
        assert_eq!(tau_image, g.coset_rep(&g.pow(&g.tau(), 2), &g1d));
        assert!(!g1d.contains(&g, &tau_image));
        assert_eq!(
            g.transfer(&g1, &g.identity()).unwrap(),
            g.coset_rep(&g.identity(), &g1d)
        );
        assert_eq!(
            g.transfer_kernel(&g1),
            ClassSubgroup::generated(&[ClassVector::H1, ClassVector::H2])
        );
        // the transfer to G itself is the identity of G/G'
        assert_eq!(g.transfer_kernel(&g.whole()), ClassSubgroup::trivial());
        for v in ClassVector::all() {
            let x = g.class_to_group(v);
            assert_eq!(g.transfer(&g.whole(), &x).unwrap(), g.coset_rep(&x, &gp));
        }

        let g = group(2, 1, 2, PsiVariant::TauSigma);
        let gp = g.derived_subgroup();
        let h = g.subgroup(&[g.tau(), g.pow(&g.sigma(), 2)]);
        assert_eq!(h.order() * 4, g.order());
        assert_eq!(g.transfer_kernel(&h), ClassSubgroup::full());
        assert!(gp.is_subgroup_of(&h));
    }

    #[test]
    fn class_map_is_an_isomorphism() {
        for pres in all_presentations(3) {
            let g = Group::new(pres).unwrap();
            let gp = g.derived_subgroup();
            assert_eq!(g.group_to_class(&g.tau(), &gp), ClassVector::H0);
            assert_eq!(g.group_to_class(&g.rho(), &gp), ClassVector::H1);
            assert_eq!(g.group_to_class(&g.sigma(), &gp), ClassVector::H1 * ClassVector::H2);
            for v in ClassVector::all() {
                for w in ClassVector::all() {
                    let x = g.mul(&g.class_to_group(v), &g.class_to_group(w));
                    assert_eq!(g.group_to_class(&x, &gp), v * w);
                }
            }
        }
    }
}
