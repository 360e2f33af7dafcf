//! w-porosity of the distance set against the diameters of pretangent spaces,
//! on the three reference sets.
//!
//! ```bash
//! cargo run --release --example boundedness
//! ```

use num_rational::BigRational;
use tangent_porosity::generators::{gen_example_2_8, gen_factorial, gen_geometric, PartitionSpec};
use tangent_porosity::pretangent::oracles::SubsetOfLine;
use tangent_porosity::pretangent::{boundedness_experiment, ExperimentConfig};
use tangent_porosity::Result;

fn main() -> Result<()> {
    let cfg = ExperimentConfig {
        seed: 5,
        ..ExperimentConfig::default()
    };
    let corpus = vec![
        ("geometric 1/2", gen_geometric(&BigRational::new(1.into(), 2.into()), 40)?),
        ("factorial", gen_factorial(40)?),
        ("two ladders", gen_example_2_8(40, &PartitionSpec::DyadicClasses)?.0),
    ];
    for (name, set) in corpus {
        let rep = boundedness_experiment(&SubsetOfLine::new(set), &cfg)?;
        println!(
            "{name:<14} w {:<6} max diameter {:>10} (half depth {:>8}) {:<8} classes <= {:<3} ladder {:<5} -> {}",
            rep.w_status.to_string(),
            rep.max_diameter,
            rep.max_diameter_half,
            rep.diameter_trend.to_string(),
            rep.max_class_count,
            rep.ladder.as_ref().is_some_and(|l| l.unbounded),
            rep.agreement
        );
    }
    Ok(())
}
