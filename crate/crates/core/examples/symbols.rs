//! Rational and Gaussian residue symbols for a pair of primes.

use capitulation::gaussian::{split_pair, symbol_b, symbol_pi};
use capitulation::symbols::{quartic_symbol, validate_pair, Sign};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (p1, p2) in [(5, 13), (5, 29), (13, 29), (29, 37)] {
        let pair = validate_pair(p1, p2)?;
        let (s1, s2) = split_pair(&pair);
        print!(
            "{pair}: pi1 = {}, pi3 = {}, (p1/p2) = {}, (pi1/pi3) = {}, B = {}",
            s1.pi(),
            s2.pi(),
            pair.legendre(),
            symbol_pi(&s1, &s2)?,
            symbol_b(&s1, &s2)?
        );
        if pair.legendre() == Sign::Plus {
            print!(
                ", (p1/p2)_4 = {}, (p2/p1)_4 = {}",
                quartic_symbol(p1 as i64, p2)?,
                quartic_symbol(p2 as i64, p1)?
            );
        }
        println!();
    }
    Ok(())
}
