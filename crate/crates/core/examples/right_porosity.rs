//! Largest empty intervals below `h` and the right porosity at 0.
//!
//! ```bash
//! cargo run --example right_porosity
//! ```

use num_rational::BigRational;
use tangent_porosity::generators::{gen_factorial, gen_geometric};
use tangent_porosity::porosity::{is_strongly_porous, lambda0h, right_porosity, Lambda};
use tangent_porosity::scaleset::LogValue;
use tangent_porosity::Result;

fn main() -> Result<()> {
    let half = BigRational::new(1.into(), 2.into());
    let geometric = gen_geometric(&half, 40)?;
    let factorial = gen_factorial(12)?;
    let tol = BigRational::new(1.into(), (1u64 << 20).into());

    if let Lambda::Length(l) = lambda0h(&geometric, &LogValue::one())? {
        println!("geometric: largest empty interval below 1 has length {l:?}");
    }
    for (name, set) in [("geometric", &geometric), ("factorial", &factorial)] {
        let rp = right_porosity(set, 0.5)?;
        let v = is_strongly_porous(set, &tol, 0.5)?;
        println!(
            "{name}: p+ ~ {:.9} ({:?} over the window), strongly porous: {}",
            rp.sup_f64(),
            rp.trend,
            v.status
        );
    }
    Ok(())
}
