//! Fundamental units of the quadratic subfields and the unit index of
//! `Q(sqrt 2, sqrt(p1 p2), i)`, by exact square roots and by quartic symbols.

use capitulation::symbols::{pairs_up_to, Sign};
use capitulation::unit_index::{q_from_symbols, unit_index_q};
use capitulation::units::fundamental_unit;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("eps_2 = {}", fundamental_unit(2)?);
    for pair in pairs_up_to(70) {
        let eps = fundamental_unit(pair.r())?;
        let q = unit_index_q(&pair)?;
        let by_symbols = match pair.legendre() {
            Sign::Minus => q_from_symbols(&pair)?.to_string(),
            Sign::Plus => "-".to_string(),
        };
        println!(
            "{pair:<9} eps_{} = {eps}  N = {}  q = {q}  (symbols: {by_symbols})",
            pair.r(),
            eps.norm
        );
    }
    Ok(())
}
