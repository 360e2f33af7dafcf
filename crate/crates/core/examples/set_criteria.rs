//! Set-level criteria on the generated corpus: w-porosity from the per-point
//! score field and complete strong porosity over a sequence pool.
//!
//! ```bash
//! cargo run --example set_criteria
//! ```

use num_rational::BigRational;
use tangent_porosity::generators::{gen_example_2_8, gen_factorial, gen_geometric, gen_random_ladder, PartitionSpec};
use tangent_porosity::porosity::{completely_strong_porosity, default_pool, w_porosity, PorosityParams};
use tangent_porosity::Result;

fn main() -> Result<()> {
    let params = PorosityParams::default();
    let corpus = vec![
        ("geometric 1/2", gen_geometric(&BigRational::new(1.into(), 2.into()), 40)?),
        ("factorial", gen_factorial(20)?),
        ("two ladders", gen_example_2_8(40, &PartitionSpec::DyadicClasses)?.0),
        ("random ladder 7", gen_random_ladder(7, 40)?),
    ];
    println!("{:<16} {:<13} {:<13}", "set", "w", "complete");
    for (name, set) in &corpus {
        let w = w_porosity(set, &params)?;
        let c = completely_strong_porosity(set, &default_pool(set, Vec::new()), &params)?;
        println!("{name:<16} {:<13} {:<13}", w.status.to_string(), c.status.to_string());
    }
    Ok(())
}
