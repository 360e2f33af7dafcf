//! Plugging in a new pointed metric space: the plane with the max-norm,
//! sampled along the two axes, marked at the origin.
//!
//! ```bash
//! cargo run --release --example custom_oracle
//! ```

use tangent_porosity::pretangent::{boundedness_experiment, distance_set, ExperimentConfig, MetricOracle};
use tangent_porosity::scaleset::{LogValue, Magnitude, DEFAULT_PRECISION_BITS};
use tangent_porosity::Result;

/// Points `(x, y)` with dyadic coordinates; `(0, 0)` is marked.
struct MaxPlane;

type Pt = (Magnitude, Magnitude, bool);

fn coord_diff(a: &Magnitude, b: &Magnitude) -> Magnitude {
    Magnitude::abs_diff(a, b, DEFAULT_PRECISION_BITS)
}

impl MetricOracle for MaxPlane {
    /// `(|x|, |y|, y negative)`, with `x >= 0`.
    type Point = Pt;

    fn distance(&self, p: &Pt, q: &Pt) -> Magnitude {
        let dx = coord_diff(&p.0, &q.0);
        let dy = if p.2 == q.2 {
            coord_diff(&p.1, &q.1)
        } else {
            Magnitude::sum(&p.1, &q.1, DEFAULT_PRECISION_BITS)
        };
        dx.max(dy)
    }

    fn marked_point(&self) -> Pt {
        (Magnitude::Zero, Magnitude::Zero, false)
    }

    fn points_near(&self, scale: &LogValue) -> Vec<Pt> {
        let s = Magnitude::Positive(scale.clone());
        vec![
            (s.clone(), Magnitude::Zero, false),
            (Magnitude::Zero, s.clone(), false),
            (Magnitude::Zero, s.clone(), true),
            (s.clone(), s, false),
        ]
    }

    fn enumerate(&self, budget: usize) -> Vec<Pt> {
        (0..budget as i64)
            .map(|n| (Magnitude::Positive(LogValue::pow2_int(-n)), Magnitude::Zero, false))
            .collect()
    }

    fn label(&self) -> String {
        "max-norm plane".into()
    }
}

fn main() -> Result<()> {
    let (s, warning) = distance_set(&MaxPlane, 40)?;
    println!("distance set: {} points, warning: {warning:?}", s.depth());
    let cfg = ExperimentConfig {
        pool_budget: 40,
        trials: 4,
        ..ExperimentConfig::default()
    };
    let rep = boundedness_experiment(&MaxPlane, &cfg)?;
    println!(
        "w {}, max diameter {}, max classes {}, agreement {}",
        rep.w_status, rep.max_diameter, rep.max_class_count, rep.agreement
    );
    Ok(())
}
