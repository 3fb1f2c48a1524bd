//! 2-class groups of the quadratic subfields of `k`, by reduced binary
//! quadratic forms.

use capitulation::forms::{exponents_mn, field_class_group};
use capitulation::symbols::pairs_up_to;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for pair in pairs_up_to(62) {
        let (d, r) = (pair.d() as i64, pair.r() as i64);
        let (m, n) = exponents_mn(&pair)?;
        println!(
            "{pair:<9} Cl(Q(sqrt {d})) = {}, Cl(Q(sqrt -{d})) = {}, Cl(Q(sqrt {r})) = {}, Cl(Q(sqrt -{r})) = {}, m = {m}, n = {n}",
            field_class_group(d)?,
            field_class_group(-d)?,
            field_class_group(r)?,
            field_class_group(-r)?
        );
    }
    Ok(())
}
