//! Porosity along a sequence: the `k`-grid route with its gap witness, the
//! independent gap route, and the subsequence search.
//!
//! ```bash
//! cargo run --example sequence_porosity
//! ```

use num_rational::BigRational;
use tangent_porosity::generators::{gen_factorial, gen_geometric};
use tangent_porosity::porosity::{
    k_star, kk_empty, porous_subsequence_search, tau_strong_porosity, witness_gap_route, PorosityParams, PosSeq,
};
use tangent_porosity::report::value_string;
use tangent_porosity::scaleset::LogValue;
use tangent_porosity::Result;

fn main() -> Result<()> {
    let params = PorosityParams::default();

    let f = gen_factorial(20)?;
    let tau = PosSeq::enumerate(&f);
    let v = tau_strong_porosity(&f, &tau, &params)?;
    println!("factorial along its points: {} (independent route: {})", v.status, witness_gap_route(&f, &tau, &params)?.status);
    if let Some(w) = &v.witness {
        println!("  k = {:?}", w.k.as_ref().map(value_string));
        for (n, g) in w.indices.iter().zip(&w.gaps).take(3) {
            println!("  n = {n}: gap (2^{}, 2^{})", g.a.log2_repr(), g.b.log2_repr());
        }
    }

    let g = gen_geometric(&BigRational::new(1.into(), 2.into()), 40)?;
    let t = LogValue::pow2_int(-10);
    println!("geometric: K*(2^-10, k = 3/2) = {:?}", k_star(&g, &t, &LogValue::from_parts(3, -1)?)?);
    let tail = PosSeq::enumerate(&g).progression(1, 1)?;
    let empty = kk_empty(&g, &tail, &LogValue::from_parts(6, -2)?, &LogValue::from_parts(9, -2)?, 1)?;
    println!("geometric: (1.5 t, 2.25 t) misses the set along the tail: {empty}");
    let v = tau_strong_porosity(&g, &PosSeq::enumerate(&g), &params)?;
    println!("geometric along its points: {}, counterexample {:?}", v.status, v.counterexample);
    let s = porous_subsequence_search(&g, &PosSeq::enumerate(&g), &params)?;
    println!("geometric subsequence search: {}", s.verdict.status);
    Ok(())
}
