//! Passing to subsequences: diagonal refinement of an oscillating family,
//! invariance of limits under restriction, and the tangency probe.
//!
//! ```bash
//! cargo run --example subsequences
//! ```

use tangent_porosity::pretangent::oracles::Ray;
use tangent_porosity::pretangent::{
    diagonal_refine, saturate_family, scale_matched_candidates, subsequence_invariance_check, tangency_probe, NormalizingSeq,
    PointSeq, StabilityParams, REFINE_BUDGET,
};
use tangent_porosity::scaleset::{LogValue, Magnitude};
use tangent_porosity::Result;

fn main() -> Result<()> {
    let depth = 40;
    let r = NormalizingSeq::new((1..=depth as i64).map(|n| LogValue::pow2_int(-n)).collect(), "2^-n")?;
    let params = StabilityParams::default();
    // d(b^j_n, 0) / r_n = j + (-1)^n oscillates
    let b: Vec<_> = (2..=4i64)
        .map(|j| {
            let pts = (1..=depth as i64)
                .map(|n| Magnitude::Positive(LogValue::from_parts(j + if n % 2 == 0 { 1 } else { -1 }, -n).unwrap()))
                .collect();
            PointSeq::new(pts, format!("b{j}"))
        })
        .collect();
    let (idx, fam) = diagonal_refine(&Ray, &b, &r, &params, REFINE_BUDGET)?;
    println!("kept {} of {depth} indices, limits to p~: {:?}", idx.len(), &fam.dtilde[0][1..]);

    let every_other: Vec<usize> = (0..fam.r.len()).step_by(2).collect();
    let inv = subsequence_invariance_check(&Ray, &fam, &every_other, &params)?;
    println!("invariance on every second index: pass = {}, max deviation {}", inv.pass, inv.max_deviation);

    // probe a family saturated over the scale-matched candidates
    let cands = scale_matched_candidates(&Ray, &fam.r, params.tol);
    let full = saturate_family(&Ray, fam.members.clone(), &cands, &fam.r, &params)?;
    let probe = tangency_probe(&Ray, &full, &cands, 6, &params, 1)?;
    match probe.violation {
        Some(v) => println!("probe: {} joins on trial {} at distance {}", v.member, v.trial, v.min_distance),
        None => println!("probe: no violation in {} trials", probe.trials_run),
    }
    Ok(())
}
