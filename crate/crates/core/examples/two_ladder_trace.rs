//! The two-ladder set built from a partition of the indices: its trace table
//! and the verdicts along each ladder.
//!
//! ```bash
//! cargo run --example two_ladder_trace
//! ```

use tangent_porosity::generators::{gen_example_2_8, PartitionSpec};
use tangent_porosity::porosity::{porous_subsequence_search, tau_strong_porosity, PorosityParams, PosSeq};
use tangent_porosity::Result;

fn main() -> Result<()> {
    let (set, trace) = gen_example_2_8(12, &PartitionSpec::DyadicClasses)?;
    print!("{}", trace.to_csv());
    let checks = trace.validate();
    println!("checks pass: {} {:?}", checks.all_pass(), checks.failures);

    let (set40, trace40) = gen_example_2_8(40, &PartitionSpec::DyadicClasses)?;
    let params = PorosityParams::default();
    for (name, seq) in [
        ("tau", PosSeq::new(trace40.tau())?),
        ("tau*", PosSeq::new(trace40.tau_star())?),
        ("all points", PosSeq::enumerate(&set40)),
    ] {
        let direct = tau_strong_porosity(&set40, &seq, &params)?;
        let sub = porous_subsequence_search(&set40, &seq, &params)?;
        println!("{name:<10} direct: {:<12} subsequence: {}", direct.status.to_string(), sub.verdict.status);
    }
    println!("depth-12 set has {} points", set.depth());
    Ok(())
}
