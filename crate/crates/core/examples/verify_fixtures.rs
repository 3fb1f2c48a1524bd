//! Checks every row of the bundled class group fixtures.

use capitulation::fixtures::{verify, Fixtures};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = Fixtures::load()?;
    let rows = verify(&fx, None, None)?;
    let passed = rows.iter().filter(|r| r.passed()).count();
    for r in &rows {
        println!("{r}");
    }
    println!("{passed}/{} rows pass", rows.len());
    Ok(())
}
