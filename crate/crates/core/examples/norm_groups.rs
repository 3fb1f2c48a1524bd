//! Norm class groups of `K1..K7` read off the tables and recomputed from
//! quadratic residue symbols at the Gaussian primes.

use capitulation::classifier::{invariants, norm_groups, norm_groups_from_symbols};
use capitulation::symbols::pairs_up_to;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for pair in pairs_up_to(110) {
        let record = invariants(&pair)?;
        let table = norm_groups(&record);
        let symbols = norm_groups_from_symbols(&record)?;
        let cells: Vec<String> = table.iter().map(ToString::to_string).collect();
        let agree = if table == symbols { "agree" } else { "DIFFER" };
        println!(
            "{pair:<10} (p1/p2) = {:>2} pi = {:>2} B = {:>2} q = {}  {}  {agree}",
            record.legendre,
            record.pi,
            record.b,
            record.q,
            cells.join(" ")
        );
    }
    Ok(())
}
