//! Rescaled distances along a normalizing sequence, a saturated self-stable
//! family and its metric identification.
//!
//! ```bash
//! cargo run --example pretangent_family
//! ```

use num_rational::BigRational;
use tangent_porosity::generators::gen_geometric;
use tangent_porosity::pretangent::oracles::SubsetOfLine;
use tangent_porosity::pretangent::{
    metric_identification, mutual_stability, saturate_family, scale_matched_candidates, NormalizingSeq, PointSeq,
    StabilityParams,
};
use tangent_porosity::scaleset::{LogValue, Magnitude};
use tangent_porosity::Result;

fn main() -> Result<()> {
    let x = SubsetOfLine::new(gen_geometric(&BigRational::new(1.into(), 2.into()), 60)?);
    let depth = 40;
    let r = NormalizingSeq::new((1..=depth as i64).map(|n| LogValue::pow2_int(-n)).collect(), "2^-n")?;
    let params = StabilityParams::default();

    let p = PointSeq::marked(&x, depth);
    let b = PointSeq::new(
        (1..=depth as i64).map(|n| Magnitude::Positive(LogValue::pow2_int(2 - n))).collect(),
        "4 r_n",
    );
    println!("d(p, 4 r_n) / r_n: {:?}", mutual_stability(&x, &p, &b, &r, &params)?);

    let pool = scale_matched_candidates(&x, &r, params.tol);
    let fam = saturate_family(&x, vec![p], &pool, &r, &params)?;
    let space = metric_identification(&fam, params.tol)?;
    println!(
        "{} candidates, {} members, {} classes, diameter {}",
        pool.len(),
        fam.len(),
        space.class_count(),
        space.diameter
    );
    Ok(())
}
