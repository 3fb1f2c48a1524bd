//! Runs the property suite over all pairs up to a bound (default 500).

use capitulation::scan::scan;

fn main() {
    let max = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(500);
    let report = scan(max, None).expect("bound admits at least one pair");
    for (property, n) in &report.property_passes {
        println!("{property:<20} {n}");
    }
    for v in &report.failures {
        println!("{} failed: {:?}", v.pair, v.failures);
    }
    println!("{}/{} pairs pass", report.pairs_passed, report.pairs);
}
