//! Build sets accumulating at 0 from exact values and walk their gaps.
//!
//! ```bash
//! cargo run --example scale_sets
//! ```

use tangent_porosity::generators::{gen_factorial, SetDescriptor};
use tangent_porosity::scaleset::{LogValue, ScaleSet};
use tangent_porosity::{generators::gen_from_descriptor, Result};

fn main() -> Result<()> {
    // {3/4, 1/2, 2^-10} with 0 as accumulation point
    let set = ScaleSet::new(
        vec![LogValue::from_parts(3, -2)?, LogValue::pow2_int(-1), LogValue::pow2_int(-10)],
        true,
    )?;
    for g in set.gaps()?.gaps {
        println!("gap ({}, {})  b/a = {:.4}", g.a, g.b, g.ratio().to_f64());
    }

    let t = LogValue::from_parts(5, -4)?;
    println!("next point >= {t}: {:?}", set.next_above(&t)?.map(ToString::to_string));
    println!("largest point <= {t}: {:?}", set.prev_at_or_below(&t).map(ToString::to_string));

    // tiny magnitudes stay exact: 2^-(12!) is far below any float
    let f = gen_factorial(12)?;
    println!("factorial set, smallest point 2^{}", f.min_point().log2_repr());

    let json = r#"{"kind":"explicit","log2_points":["0","-3","-7/2"],"contains_zero":true}"#;
    let e = gen_from_descriptor(&SetDescriptor::from_json(json)?)?;
    println!("{} points from JSON, top {}", e.depth(), e.window_top());
    Ok(())
}
