//! The 2-class group `(Z/2)^3 = <[H0], [H1], [H2]>` and its subgroups.

use std::fmt;

use serde::{Serialize, Serializer};

/// `[H0]^x0 [H1]^x1 [H2]^x2`, with `xi` stored in bit `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassVector(pub u8);

impl ClassVector {
    pub const ONE: ClassVector = ClassVector(0);
    pub const H0: ClassVector = ClassVector(1);
    pub const H1: ClassVector = ClassVector(2);
    pub const H2: ClassVector = ClassVector(4);

    pub fn new(x0: bool, x1: bool, x2: bool) -> ClassVector {
        ClassVector(x0 as u8 | (x1 as u8) << 1 | (x2 as u8) << 2)
    }

    pub fn bit(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn all() -> impl Iterator<Item = ClassVector> {
        (0..8).map(ClassVector)
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Mul for ClassVector {
    type Output = ClassVector;

    fn mul(self, rhs: ClassVector) -> ClassVector {
        ClassVector(self.0 ^ rhs.0)
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for i in 0..3 {
            if self.bit(i) {
                write!(f, "H{i}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for ClassVector {
    type Err = String;

    /// Parses `"1"`, `"H0"`, `"H1H2"`, ...
    fn from_str(s: &str) -> Result<ClassVector, String> {
        let s = s.trim();
        if s == "1" {
            return Ok(ClassVector::ONE);
        }
        let mut v = ClassVector::ONE;
        let mut rest = s;
        while !rest.is_empty() {
            let digit = rest
                .strip_prefix('H')
                .and_then(|t| t.chars().next())
                .and_then(|c| c.to_digit(10))
                .filter(|&d| d < 3)
                .ok_or_else(|| format!("bad class {s:?}"))?;
            v = v * ClassVector(1 << digit);
            rest = &rest[2..];
        }
        Ok(v)
    }
}

/// A subgroup of `(Z/2)^3`, stored as the bitmask of its members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassSubgroup(u8);

impl ClassSubgroup {
    pub fn trivial() -> ClassSubgroup {
        ClassSubgroup(1)
    }

    pub fn full() -> ClassSubgroup {
        ClassSubgroup(0xff)
    }

    pub fn generated(gens: &[ClassVector]) -> ClassSubgroup {
        let mut mask = 1u8;
        for g in gens {
            for v in ClassVector::all() {
                if mask >> v.0 & 1 == 1 {
                    mask |= 1 << (v * *g).0;
                }
            }
        }
        ClassSubgroup(mask)
    }

    /// The members given explicitly; panics unless they form a subgroup.
    pub fn from_members(members: impl IntoIterator<Item = ClassVector>) -> ClassSubgroup {
        let mut mask = 0u8;
        for v in members {
            mask |= 1 << v.0;
        }
        let s = ClassSubgroup(mask);
        assert!(s.contains(ClassVector::ONE));
        for x in s.members() {
            for y in s.members() {
                assert!(s.contains(x * y), "not a subgroup");
            }
        }
        s
    }

    pub fn contains(self, v: ClassVector) -> bool {
        self.0 >> v.0 & 1 == 1
    }

    pub fn members(self) -> impl Iterator<Item = ClassVector> {
        ClassVector::all().filter(move |&v| self.contains(v))
    }

    pub fn order(self) -> u32 {
        self.0.count_ones()
    }

    pub fn intersect(self, other: ClassSubgroup) -> ClassSubgroup {
        ClassSubgroup(self.0 & other.0)
    }

    pub fn is_trivial(self) -> bool {
        self.0 == 1
    }

    /// A minimal generating set, preferring classes with fewer factors.
    pub fn generators(self) -> Vec<ClassVector> {
        let mut order: Vec<ClassVector> = self.members().filter(|v| !v.is_one()).collect();
        order.sort_by_key(|v| (v.0.count_ones(), v.0));
        let mut gens = Vec::new();
        let mut span = ClassSubgroup::trivial();
        for v in order {
            if !span.contains(v) {
                gens.push(v);
                span = ClassSubgroup::generated(&gens);
            }
        }
        gens
    }
}

impl fmt::Display for ClassSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(ClassVector::to_string).collect();
        if gens.is_empty() {
            write!(f, "<1>")
        } else {
            write!(f, "<{}>", gens.join(", "))
        }
    }
}

impl Serialize for ClassSubgroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let gens: Vec<String> = self.generators().iter().map(ClassVector::to_string).collect();
        gens.serialize(s)
    }
}
