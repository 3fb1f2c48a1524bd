//! Property suite over all prime pairs up to a bound.
//!
//! Each pair is checked independently, so a scan parallelizes over pairs;
//! results come back in the order of [`pairs_up_to`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::AbelianType;
use crate::classifier::{cross_validate, invariants, norm_groups, norm_groups_from_symbols};
use crate::error::{Error, Result};
use crate::forms::field_class_group;
use crate::gaussian::{split_pair, symbol_b, symbol_pi};
use crate::symbols::{pairs_up_to, quartic_symbol, PrimePair, Sign};
use crate::unit_index::q_from_symbols;
use crate::units::norm_eps;

/// Names of the checked properties, in reporting order.
pub const PROPERTIES: [&str; 9] = [
    "quartic-identity",
    "unit-norm",
    "kaplan",
    "imaginary-subfield",
    "real-subfield",
    "invariants",
    "q-agreement",
    "norm-groups",
    "engine",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub property: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub pair: PrimePair,
    pub passed: Vec<&'static str>,
    pub failures: Vec<Failure>,
}

impl PairVerdict {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    passed: Vec<&'static str>,
    failures: Vec<Failure>,
}

impl Tally {
    fn record(&mut self, property: &'static str, outcome: Result<Option<String>>) {
        match outcome {
            Ok(None) => self.passed.push(property),
            Ok(Some(detail)) => self.failures.push(Failure { property, detail }),
            Err(e) => self.failures.push(Failure {
                property,
                detail: e.to_string(),
            }),
        }
    }
}

fn expect(cond: bool, detail: impl FnOnce() -> String) -> Result<Option<String>> {
    Ok((!cond).then(detail))
}

fn two_part(m: i64) -> Result<AbelianType> {
    Ok(field_class_group(m)?.two_part())
}

/// Runs every property on one pair. Properties that need the invariant
/// record are skipped when it cannot be built; that failure is reported
/// under `invariants`.
pub fn check_pair(pair: &PrimePair) -> PairVerdict {
    let mut t = Tally {
        passed: Vec::new(),
        failures: Vec::new(),
    };
    let (d, r) = (pair.d() as i64, pair.r() as i64);
    let (p1, p2) = (pair.p1(), pair.p2());

    if pair.legendre() == Sign::Plus {
        t.record(
            "quartic-identity",
            (|| {
                let (s1, s2) = split_pair(pair);
                let product = quartic_symbol(p1 as i64, p2)? * quartic_symbol(p2 as i64, p1)?;
                let pi = symbol_pi(&s1, &s2)?;
                expect(product == pi, || format!("quartic product {product}, (pi1/pi3) = {pi}"))
            })(),
        );
    }
    t.record(
        "unit-norm",
        (|| {
            let s = norm_eps(d as u64)?;
            expect(s == Sign::Minus, || format!("N(eps_{d}) = {s}"))
        })(),
    );
    t.record(
        "kaplan",
        (|| {
            let (re, im) = (two_part(d)?, two_part(-d)?);
            let v4 = AbelianType::from_cyclic(&[2, 2]);
            expect(re == v4 && im == v4, || {
                format!("Cl2(Q(sqrt {d})) = {re}, Cl2(Q(sqrt -{d})) = {im}")
            })
        })(),
    );
    t.record(
        "imaginary-subfield",
        (|| {
            let c = two_part(-r)?;
            let divs = c.divisors();
            expect(divs.len() == 2 && divs[0] == 2 && divs[1] >= 4, || {
                format!("Cl2(Q(sqrt -{r})) = {c}")
            })
        })(),
    );
    t.record(
        "real-subfield",
        (|| {
            let c = two_part(r)?;
            expect(c.is_cyclic() && !c.is_trivial(), || format!("Cl2(Q(sqrt {r})) = {c}"))
        })(),
    );

    let record = match invariants(pair) {
        Ok(rec) => {
            t.passed.push("invariants");
            rec
        }
        Err(e) => {
            t.record("invariants", Err(e));
            return PairVerdict {
                pair: *pair,
                passed: t.passed,
                failures: t.failures,
            };
        }
    };
    if record.legendre == Sign::Minus {
        t.record(
            "q-agreement",
            (|| {
                let (s1, s2) = split_pair(pair);
                let by_symbols = q_from_symbols(pair)?;
                let pi_b = symbol_pi(&s1, &s2)? == symbol_b(&s1, &s2)?;
                expect(by_symbols == record.q && pi_b == (record.q == 1), || {
                    format!(
                        "square test q = {}, quartic symbols q = {by_symbols}, pi = B: {pi_b}",
                        record.q
                    )
                })
            })(),
        );
    }
    t.record(
        "norm-groups",
        (|| {
            let table = norm_groups(&record);
            let symbols = norm_groups_from_symbols(&record)?;
            let bad: Vec<String> = (0..7)
                .filter(|&j| table[j] != symbols[j])
                .map(|j| format!("K{}: table {}, symbols {}", j + 1, table[j], symbols[j]))
                .collect();
            expect(bad.is_empty(), || bad.join("; "))
        })(),
    );
    t.record(
        "engine",
        (|| {
            let v = cross_validate(&record)?;
            let bad: Vec<String> = v.failures().map(|c| c.to_string()).collect();
            expect(bad.is_empty(), || bad.join("; "))
        })(),
    );
    PairVerdict {
        pair: *pair,
        passed: t.passed,
        failures: t.failures,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub max: u64,
    pub pairs: usize,
    pub pairs_passed: usize,
    /// Number of pairs on which each property was checked and held.
    pub property_passes: BTreeMap<&'static str, usize>,
    pub failures: Vec<PairVerdict>,
}

impl ScanReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks all pairs `p1 < p2 <= max` on `jobs` threads (all cores if
/// `None`). The report does not depend on `jobs`.
pub fn scan(max: u64, jobs: Option<usize>) -> Result<ScanReport> {
    let pairs = pairs_up_to(max);
    if pairs.is_empty() {
        return Err(Error::EmptyRange(max));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| Error::ThreadPool(e.to_string()))?;
    let verdicts: Vec<PairVerdict> = pool.install(|| pairs.par_iter().map(check_pair).collect());
    Ok(summarize(max, verdicts))
}

fn summarize(max: u64, verdicts: Vec<PairVerdict>) -> ScanReport {
    let mut property_passes: BTreeMap<&'static str, usize> = PROPERTIES.iter().map(|&p| (p, 0)).collect();
    for v in &verdicts {
        for p in &v.passed {
            *property_passes.entry(p).or_default() += 1;
        }
    }
    let pairs = verdicts.len();
    let failures: Vec<PairVerdict> = verdicts.into_iter().filter(|v| !v.ok()).collect();
    ScanReport {
        max,
        pairs,
        pairs_passed: pairs - failures.len(),
        property_passes,
        failures,
    }
}
