//! Published class group computations used as regression fixtures.
//!
//! The corpus ships in `data/fixtures_v1.json`: one object per source table,
//! each row giving `d = 2 p1 p2`, the symbols and exponents printed for it,
//! and full class groups as integer tuples keyed by field (`k0`, `k0_bar`,
//! `k`, `K1..K7`, `L1..L7`). A table may fix some columns for all its rows
//! through `constants`. Only 2-parts of class groups are compared.
//!
//! Set `CAPITULATION_FIXTURES` to a file path to verify another corpus of
//! the same format.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::AbelianType;
use crate::classifier::{invariants, predict};
use crate::error::{Error, Result};
use crate::forms::field_class_group;
use crate::group::Group;
use crate::symbols::{validate_pair, PrimePair};

pub const FORMAT_TAG: &str = "fixtures_v1";
pub const ENV_OVERRIDE: &str = "CAPITULATION_FIXTURES";

const EMBEDDED: &str = include_str!("../data/fixtures_v1.json");

/// Scalar columns a row may carry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Columns {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub legendre: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cc: Option<u32>,
}

impl Columns {
    /// Row values, falling back to the table constants.
    fn over(&self, base: &Columns) -> Columns {
        Columns {
            q: self.q.or(base.q),
            legendre: self.legendre.or(base.legendre),
            pi: self.pi.or(base.pi),
            b: self.b.or(base.b),
            m: self.m.or(base.m),
            n: self.n.or(base.n),
            disc: self.disc.or(base.disc),
            cc: self.cc.or(base.cc),
        }
    }
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub d: u64,
    pub p1: u64,
    pub p2: u64,
    /// False when the row prints only `d` and the primes were factored out.
    #[serde(default = "yes")]
    pub primes_printed: bool,
    #[serde(flatten)]
    pub columns: Columns,
    pub groups: BTreeMap<String, Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureTable {
    pub id: u32,
    pub title: String,
    #[serde(default)]
    pub constants: Columns,
    pub rows: Vec<FixtureRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixtures {
    pub format: String,
    #[serde(default)]
    pub description: String,
    pub tables: Vec<FixtureTable>,
}

fn group_key_known(key: &str) -> bool {
    match key {
        "k0" | "k0_bar" | "k" => true,
        _ => {
            let (head, tail) = key.split_at(1);
            (head == "K" || head == "L") && matches!(tail.parse::<u8>(), Ok(1..=7))
        }
    }
}

impl Fixtures {
    pub fn parse(text: &str) -> Result<Fixtures> {
        let fx: Fixtures = serde_json::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;
        if fx.format != FORMAT_TAG {
            return Err(Error::Fixture(format!("unknown format tag {:?}", fx.format)));
        }
        for t in &fx.tables {
            for r in &t.rows {
                let at = || format!("table {} row d = {}", t.id, r.d);
                if r.p1.checked_mul(r.p2).and_then(|x| x.checked_mul(2)) != Some(r.d) {
                    return Err(Error::Fixture(format!("{}: d != 2 * {} * {}", at(), r.p1, r.p2)));
                }
                for (key, tuple) in &r.groups {
                    if !group_key_known(key) {
                        return Err(Error::Fixture(format!("{}: unknown field {key:?}", at())));
                    }
                    if tuple.is_empty() || tuple.contains(&0) {
                        return Err(Error::Fixture(format!("{}: bad tuple for {key}", at())));
                    }
                }
            }
        }
        Ok(fx)
    }

    pub fn embedded() -> Fixtures {
        Fixtures::parse(EMBEDDED).expect("embedded fixtures are well formed")
    }

    /// The file named by `CAPITULATION_FIXTURES`, or the embedded corpus.
    pub fn load() -> Result<Fixtures> {
        match std::env::var_os(ENV_OVERRIDE) {
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Fixture(format!("{}: {e}", path.to_string_lossy())))?;
                Fixtures::parse(&text)
            }
            None => Ok(Fixtures::embedded()),
        }
    }

    pub fn table_ids(&self) -> Vec<u32> {
        self.tables.iter().map(|t| t.id).collect()
    }
}

/// One compared column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnCheck {
    pub column: String,
    /// As printed in the source.
    pub printed: String,
    /// What is compared: the printed value, or the 2-part of a printed tuple.
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub table: u32,
    pub d: u64,
    pub pair: PrimePair,
    pub columns: Vec<ColumnCheck>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.columns.iter().all(|c| c.ok)
    }
}

impl fmt::Display for RowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bad: Vec<&ColumnCheck> = self.columns.iter().filter(|c| !c.ok).collect();
        let status = if bad.is_empty() { "pass" } else { "FAIL" };
        write!(
            f,
            "table {:>2}  d = {:<6} {:<11} {status}  ({} columns)",
            self.table,
            self.d,
            self.pair.to_string(),
            self.columns.len()
        )?;
        for c in bad {
            write!(
                f,
                "\n    {}: printed {}, expected {}, computed {}",
                c.column, c.printed, c.expected, c.computed
            )?;
        }
        Ok(())
    }
}

fn scalar<T: PartialEq + fmt::Display>(out: &mut Vec<ColumnCheck>, column: &str, printed: Option<T>, computed: T) {
    if let Some(p) = printed {
        out.push(ColumnCheck {
            column: column.to_string(),
            printed: p.to_string(),
            expected: p.to_string(),
            ok: p == computed,
            computed: computed.to_string(),
        });
    }
}

/// Compares one row with the computed invariants of its (ordered) pair.
pub fn verify_row(table: u32, constants: &Columns, row: &FixtureRow) -> Result<RowReport> {
    let pair = validate_pair(row.p1, row.p2)?.ordered();
    let record = invariants(&pair)?;
    let report = predict(&record);
    let g = Group::new(record.presentation())?;
    let c = row.columns.over(constants);

    let mut out = Vec::new();
    scalar(&mut out, "q", c.q, record.q);
    scalar(&mut out, "(p1/p2)", c.legendre, record.legendre.value());
    scalar(&mut out, "pi", c.pi, record.pi.value());
    scalar(&mut out, "b", c.b, record.b.value());
    scalar(&mut out, "m", c.m, record.m);
    scalar(&mut out, "n", c.n, record.n);
    scalar(&mut out, "disc", c.disc, record.disc());
    scalar(&mut out, "cc", c.cc, g.coclass());

    for (key, tuple) in &row.groups {
        let computed = match key.as_str() {
            "k0" => field_class_group(row.d as i64)?.two_part(),
            "k0_bar" => field_class_group(-(row.d as i64))?.two_part(),
            "k" => g.abelianization(&g.whole()),
            _ => {
                let j: usize = key[1..].parse().expect("validated key");
                if key.starts_with('K') {
                    report.k[j - 1].class_group.clone()
                } else {
                    report.l[j - 1].class_group.clone()
                }
            }
        };
        let printed = AbelianType::from_cyclic(tuple);
        let expected = printed.two_part();
        let parts: Vec<String> = tuple.iter().map(u64::to_string).collect();
        out.push(ColumnCheck {
            column: format!("Cl({key})"),
            printed: format!("({})", parts.join(", ")),
            ok: expected == computed,
            expected: expected.to_string(),
            computed: computed.to_string(),
        });
    }
    Ok(RowReport {
        table,
        d: row.d,
        pair,
        columns: out,
    })
}

/// Table ids selected by `--table`; `9` stands for the two tables of the
/// `(p1/p2) = -1` case.
pub fn select_tables(fx: &Fixtures, table: Option<u32>) -> Result<Vec<&FixtureTable>> {
    let chosen: Vec<&FixtureTable> = match table {
        None => fx.tables.iter().collect(),
        Some(9) => fx.tables.iter().filter(|t| t.id == 34 || t.id == 35).collect(),
        Some(id) => fx.tables.iter().filter(|t| t.id == id).collect(),
    };
    if chosen.is_empty() {
        return Err(Error::Fixture(format!(
            "no table {} (available: {:?})",
            table.unwrap_or_default(),
            fx.table_ids()
        )));
    }
    Ok(chosen)
}

/// Verifies the selected rows, in corpus order.
pub fn verify(fx: &Fixtures, table: Option<u32>, filter: Option<u64>) -> Result<Vec<RowReport>> {
    let mut out = Vec::new();
    for t in select_tables(fx, table)? {
        for row in t.rows.iter().filter(|r| filter.is_none_or(|d| r.d == d)) {
            out.push(verify_row(t.id, &t.constants, row)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_corpus_parses() {
        let fx = Fixtures::embedded();
        assert_eq!(fx.table_ids(), vec![4, 5, 6, 7, 8, 34, 35]);
        let rows: usize = fx.tables.iter().map(|t| t.rows.len()).sum();
        assert_eq!(rows, 48);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        assert!(matches!(Fixtures::parse("{"), Err(Error::Fixture(_))));
        let wrong_tag = EMBEDDED.replacen(FORMAT_TAG, "fixtures_v0", 1);
        assert!(matches!(Fixtures::parse(&wrong_tag), Err(Error::Fixture(_))));
        let wrong_d = EMBEDDED.replacen("\"d\": 130,", "\"d\": 131,", 1);
        assert!(matches!(Fixtures::parse(&wrong_d), Err(Error::Fixture(_))));
    }

    #[test]
    fn invariants_table_passes() {
        let fx = Fixtures::embedded();
        let rows = verify(&fx, Some(4), None).unwrap();
        assert_eq!(rows.len(), 8);
        for r in &rows {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn filter_selects_rows() {
        let fx = Fixtures::embedded();
        let rows = verify(&fx, Some(9), Some(130)).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(RowReport::passed));
        assert!(verify(&fx, None, Some(1)).unwrap().is_empty());
        assert!(verify(&fx, Some(12), None).is_err());
    }
}
