//! Command-line surface: argument definitions, command execution and
//! output formatting. [`run`] returns the text and exit code instead of
//! printing, so commands can be driven from tests.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 consistency failure,
//! 4 fixture mismatch.
//!
//! JSON output is canonical: keys are sorted, numbers are integers, and
//! re-serializing a parsed report reproduces it byte for byte.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::abelian::AbelianType;
use crate::classes::ClassSubgroup;
use crate::classifier::{
    cross_validate_report, extension_subgroups, field_layout, invariants, norm_groups_for, predict, FieldLayout,
    PredictionReport, SymbolCase, Validation, L_FACTORS,
};
use crate::error::{Error, Result};
use crate::fixtures::{verify, Fixtures, RowReport};
use crate::group::{GPresentation, Group, PsiVariant};
use crate::scan::{scan, ScanReport};
use crate::symbols::{validate_pair, Sign};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;
pub const EXIT_FIXTURE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "capitulation",
    version,
    about = "2-class groups and capitulation in Q(sqrt(2 p1 p2), i) for primes p1, p2 = 5 (mod 8)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants, predicted class groups and kernels of one pair, checked
    /// against the group engine
    Classify(ClassifyArgs),
    /// Compare the embedded class group tables with computed values
    VerifyFixtures(VerifyArgs),
    /// Inspect the group G for given parameters
    Group(GroupArgs),
    /// Run the property suite over all pairs up to a bound
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub p1: u64,
    #[arg(long)]
    pub p2: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Table id; 9 selects both tables with (p1/p2) = -1
    #[arg(long)]
    pub table: Option<u32>,
    /// Only rows with this d
    #[arg(long)]
    pub filter: Option<u64>,
    /// List every compared column, not only mismatches
    #[arg(long)]
    pub verbose: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PsiArg {
    SigmaOnly,
    TauSigma,
}

impl From<PsiArg> for PsiVariant {
    fn from(p: PsiArg) -> PsiVariant {
        match p {
            PsiArg::SigmaOnly => PsiVariant::SigmaOnly,
            PsiArg::TauSigma => PsiVariant::TauSigma,
        }
    }
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    let v: i8 = s.parse().map_err(|_| format!("{s:?} is not 1 or -1"))?;
    Sign::try_from(v)
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub q: u8,
    #[arg(long, value_enum, default_value = "tau-sigma")]
    pub psi: PsiArg,
    /// Build parameters that no prime pair produces
    #[arg(long)]
    pub force: bool,
    /// (p1/p2); with --pi and --b, also reports the fourteen extensions
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub legendre: Option<Sign>,
    /// (pi1/pi3)
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub pi: Option<Sign>,
    /// (1+i/pi1)(1+i/pi3)
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    pub b: Option<Sign>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub max: u64,
    /// Worker threads; defaults to all cores
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

/// Result of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stdout: String, stderr: String) -> Outcome {
        Outcome { code, stdout, stderr }
    }
}

/// Exit code for an error escaping a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Consistency { .. }
        | Error::PrecisionExhausted
        | Error::PresentationMismatch
        | Error::NotNormal
        | Error::NotInGroup
        | Error::ThreadPool(_)
        | Error::SymbolCriterionUnavailable
        | Error::DivisibleByPrime { .. } => EXIT_CONSISTENCY,
        _ => EXIT_INPUT,
    }
}

/// Pretty JSON with sorted keys.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Classify(a) => classify(&a),
        Command::VerifyFixtures(a) => verify_fixtures(&a),
        Command::Group(a) => group(&a),
        Command::Scan(a) => run_scan(&a),
    };
    result.unwrap_or_else(|e| Outcome::fail(exit_code(&e), String::new(), format!("error: {e}\n")))
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    #[serde(flatten)]
    report: &'a PredictionReport,
    validation: &'a Validation,
    layout: &'a FieldLayout,
}

fn classify(a: &ClassifyArgs) -> Result<Outcome> {
    let pair = validate_pair(a.p1, a.p2)?;
    let record = invariants(&pair)?;
    let report = predict(&record);
    let validation = cross_validate_report(&report)?;
    let layout = field_layout(&record);
    let stdout = if a.json {
        to_canonical_json(&ClassifyOutput {
            report: &report,
            validation: &validation,
            layout: &layout,
        })
    } else {
        classify_text(&report, &validation, &layout)
    };
    if validation.passed() {
        Ok(Outcome::ok(stdout))
    } else {
        let failures: Vec<String> = validation.failures().map(|c| format!("{c}\n")).collect();
        Ok(Outcome::fail(EXIT_CONSISTENCY, stdout, failures.concat()))
    }
}

fn classify_text(report: &PredictionReport, validation: &Validation, layout: &FieldLayout) -> String {
    let r = &report.record;
    let mut s = String::new();
    let _ = writeln!(s, "pair {}  d = {}  disc(k) = {}", r.pair, r.d, layout.disc);
    let _ = write!(s, "(p1/p2) = {}  (pi1/pi3) = {}  B = {}", r.legendre, r.pi, r.b);
    if let Some(qp) = r.quartic_product {
        let _ = write!(s, "  (p1/p2)_4 (p2/p1)_4 = {qp}");
    }
    let _ = writeln!(s, "  N(eps_{}) = {}", r.pair.r(), r.norm_eps_r);
    let _ = writeln!(s, "m = {}  n = {}  q = {}  psi = {}", r.m, r.n, r.q, r.psi);
    let _ = writeln!(
        s,
        "G: order {}  G' = {}  class {}  coclass {}",
        report.group_order, report.derived_type, report.nilpotency_class, report.coclass
    );
    let _ = writeln!(s, "Cl2(K3) = {}", report.cl2_k3);
    for (label, k) in layout.fields.iter().zip(&report.k) {
        let _ = writeln!(
            s,
            "  {:<26} N = {:<12} Cl2 = {:<10} kernel {}",
            label.to_string(),
            k.norm_group.to_string(),
            k.class_group.to_string(),
            k.kernel
        );
    }
    for (label, l) in layout.fields[7..].iter().zip(&report.l) {
        let _ = writeln!(
            s,
            "  {:<26} {:<16} Cl2 = {:<10} kernel {}",
            label.to_string(),
            "",
            l.class_group.to_string(),
            l.kernel
        );
    }
    let verdict = if validation.passed() { "pass" } else { "FAIL" };
    let _ = writeln!(
        s,
        "group engine: {}/{} checks, {} validated extensions: {verdict}",
        validation.checks.iter().filter(|c| c.ok).count(),
        validation.checks.len(),
        validation.validated_extensions
    );
    s
}

#[derive(Serialize)]
struct FixtureSummary<'a> {
    table: Option<u32>,
    filter: Option<u64>,
    rows: usize,
    rows_passed: usize,
    reports: &'a [RowReport],
}

fn verify_fixtures(a: &VerifyArgs) -> Result<Outcome> {
    let fx = Fixtures::load()?;
    let reports = verify(&fx, a.table, a.filter)?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    let stdout = if a.json {
        to_canonical_json(&FixtureSummary {
            table: a.table,
            filter: a.filter,
            rows: reports.len(),
            rows_passed: passed,
            reports: &reports,
        })
    } else if reports.is_empty() {
        "0 rows matched the selection\n".to_string()
    } else {
        let mut s = String::new();
        for r in &reports {
            let _ = writeln!(s, "{r}");
            if a.verbose {
                for c in r.columns.iter().filter(|c| c.ok) {
                    let _ = writeln!(
                        s,
                        "    {}: printed {}, 2-part {}, computed {}",
                        c.column, c.printed, c.expected, c.computed
                    );
                }
            }
        }
        let _ = writeln!(s, "{passed}/{} rows pass", reports.len());
        s
    };
    if passed == reports.len() {
        Ok(Outcome::ok(stdout))
    } else {
        let msg = format!("{} fixture rows mismatch\n", reports.len() - passed);
        Ok(Outcome::fail(EXIT_FIXTURE, stdout, msg))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub name: String,
    pub norm_group: Option<ClassSubgroup>,
    pub class_group: AbelianType,
    pub kernel: ClassSubgroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub presentation: GPresentation,
    pub admissible: bool,
    pub order: u64,
    pub derived_type: AbelianType,
    /// Types of the factors `gamma_j / gamma_(j+1)` of the lower central series.
    pub lower_central_factors: Vec<AbelianType>,
    pub nilpotency_class: u32,
    pub coclass: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbols: Option<SymbolCase>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extensions: Vec<ExtensionReport>,
}

fn symbol_case(a: &GroupArgs) -> Result<Option<SymbolCase>> {
    match (a.legendre, a.pi, a.b) {
        (None, None, None) => Ok(None),
        (Some(legendre), Some(pi), Some(b)) => {
            let case = SymbolCase {
                legendre,
                pi,
                b,
                q: a.q,
            };
            if !case.is_realizable() && !a.force {
                return Err(Error::InconsistentPresentation(format!(
                    "q = {} is impossible for (p1/p2) = -1, pi = {pi}, B = {b}; q = 1 iff pi = B",
                    a.q
                )));
            }
            Ok(Some(case))
        }
        _ => Err(Error::Usage("--legendre, --pi and --b must be given together".into())),
    }
}

/// Builds `G` and reports its structure, plus the extensions when symbols
/// are given.
pub fn group_report(pres: GPresentation, case: Option<SymbolCase>, force: bool) -> Result<GroupReport> {
    let admissible = pres.is_admissible();
    if !admissible && !force {
        return Err(Error::InconsistentPresentation(format!(
            "{pres} does not occur for any prime pair; m >= 2 always, and q = 1 needs n = 1, m >= 3 or m = 2, n >= 2, q = 2 needs m = 2 (use --force to build it anyway)"
        )));
    }
    let g = if force { Group::build(pres)? } else { Group::new(pres)? };
    let lcs = g.lower_central_series();
    let lower_central_factors = lcs
        .windows(2)
        .map(|w| g.abelian_invariants(&w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    let derived_type = g.abelian_invariants(&lcs[1], &g.trivial())?;
    let mut extensions = Vec::new();
    if let Some(case) = case {
        let norms = norm_groups_for(case);
        let (ks, ls) = extension_subgroups(&g, &norms);
        for (j, h) in ks.iter().enumerate() {
            extensions.push(ExtensionReport {
                name: format!("K{}", j + 1),
                norm_group: Some(norms[j]),
                class_group: g.abelianization(h),
                kernel: g.transfer_kernel(h),
            });
        }
        for (j, h) in ls.iter().enumerate() {
            let [x, y, z] = L_FACTORS[j];
            extensions.push(ExtensionReport {
                name: format!("L{} = K{x}.K{y}.K{z}", j + 1),
                norm_group: None,
                class_group: g.abelianization(h),
                kernel: g.transfer_kernel(h),
            });
        }
    }
    Ok(GroupReport {
        presentation: pres,
        admissible,
        order: g.order() as u64,
        derived_type,
        lower_central_factors,
        nilpotency_class: g.nilpotency_class(),
        coclass: g.coclass(),
        symbols: case,
        extensions,
    })
}

fn group(a: &GroupArgs) -> Result<Outcome> {
    let pres = GPresentation {
        m: a.m,
        n: a.n,
        q: a.q,
        psi: a.psi.into(),
    };
    let case = symbol_case(a)?;
    let report = group_report(pres, case, a.force)?;
    if a.json {
        return Ok(Outcome::ok(to_canonical_json(&report)));
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        "G{}{}",
        report.presentation,
        if report.admissible { "" } else { "  (inadmissible)" }
    );
    let _ = writeln!(s, "order {}  G' = {}", report.order, report.derived_type);
    let factors: Vec<String> = report
        .lower_central_factors
        .iter()
        .map(AbelianType::to_string)
        .collect();
    let _ = writeln!(s, "lower central factors {}", factors.join(" "));
    let _ = writeln!(
        s,
        "nilpotency class {}  coclass {}",
        report.nilpotency_class, report.coclass
    );
    for e in &report.extensions {
        let norm = e.norm_group.map(|n| format!("N = {n}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "  {:<16} {:<16} Cl2 = {:<10} kernel {}",
            e.name,
            norm,
            e.class_group.to_string(),
            e.kernel
        );
    }
    Ok(Outcome::ok(s))
}

fn run_scan(a: &ScanArgs) -> Result<Outcome> {
    if a.jobs == Some(0) {
        return Err(Error::Usage("--jobs must be at least 1".into()));
    }
    let report = scan(a.max, a.jobs)?;
    let stdout = if a.json {
        to_canonical_json(&report)
    } else {
        scan_text(&report)
    };
    if report.ok() {
        Ok(Outcome::ok(stdout))
    } else {
        let lines: Vec<String> = report
            .failures
            .iter()
            .flat_map(|v| {
                v.failures
                    .iter()
                    .map(move |f| format!("{} {}: {}\n", v.pair, f.property, f.detail))
            })
            .collect();
        Ok(Outcome::fail(EXIT_CONSISTENCY, stdout, lines.concat()))
    }
}

fn scan_text(r: &ScanReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "pairs p1 < p2 <= {}: {}", r.max, r.pairs);
    for (property, n) in &r.property_passes {
        let _ = writeln!(s, "  {property:<20} {n}");
    }
    for v in &r.failures {
        for f in &v.failures {
            let _ = writeln!(s, "FAIL {} {}: {}", v.pair, f.property, f.detail);
        }
    }
    let _ = writeln!(s, "{}/{} pairs pass", r.pairs_passed, r.pairs);
    s
}
