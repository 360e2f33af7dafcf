//! Verdict reports, score tables and run manifests as written by the CLI.
//!
//! ```bash
//! cargo run --example reports
//! ```

use tangent_porosity::generators::gen_factorial;
use tangent_porosity::porosity::{tau_strong_porosity, PorosityParams, PosSeq};
use tangent_porosity::report::{scores_csv, to_json, RunManifest, VerdictReport};
use tangent_porosity::Result;

fn main() -> Result<()> {
    let set = gen_factorial(16)?;
    let v = tau_strong_porosity(&set, &PosSeq::enumerate(&set), &PorosityParams::default())?;
    let rep = VerdictReport::new("tau", "factorial:16", &v, Some("tau_scores.csv".into()));
    print!("{}", to_json(&rep));
    print!("{}", scores_csv(&v.scores).lines().take(4).collect::<Vec<_>>().join("\n"));
    println!();

    let m = RunManifest::new(
        vec!["porosity".into(), "--set".into(), "factorial:16".into(), "--criterion".into(), "tau".into()],
        0,
        vec!["factorial:16".into()],
        vec!["tau.json".into(), "tau_scores.csv".into()],
    );
    println!("manifest digest {} verifies: {}", m.config_digest, m.verify());
    Ok(())
}
