//! Invariants and predicted extension data for one pair, checked against
//! the group engine. Usage: `cargo run --example classify -- 5 37`

use capitulation::classifier::{cross_validate_report, field_layout, invariants, predict};
use capitulation::symbols::validate_pair;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p1, p2) = match args[..] {
        [a, b] => (a, b),
        _ => (5, 37),
    };
    let record = invariants(&validate_pair(p1, p2)?)?;
    println!("{record:?}");

    let report = predict(&record);
    println!(
        "|G| = {}, G' = {}, coclass {}, Cl2(K3) = {}",
        report.group_order, report.derived_type, report.coclass, report.cl2_k3
    );
    let layout = field_layout(&record);
    for (label, k) in layout.fields.iter().zip(&report.k) {
        println!("{label}: Cl2 = {}, kernel {}", k.class_group, k.kernel);
    }
    for (label, l) in layout.fields[7..].iter().zip(&report.l) {
        println!("{label}: Cl2 = {}", l.class_group);
    }

    let validation = cross_validate_report(&report)?;
    for c in validation.failures() {
        println!("{c}");
    }
    println!("{} of 14 extensions validated", validation.validated_extensions);
    Ok(())
}
