//! Right porosity at 0 and the sequence-based strong porosity notions, decided
//! on finite windows with three-valued verdicts.

mod sequence;
mod tau;
mod w;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

pub use sequence::{
    almost_decreasing_tail, default_epsilon, weak_equiv, AlmostDecreasing, PosSeq, WeakEquiv,
    DIVERGENT_SPREAD_LOG2,
};
pub use tau::{
    k_grid, k_star, kk_empty, porous_subsequence_search, tau_strong_porosity, witness_gap_route,
    KStar, ScoreRow, SubsequenceResult,
};
pub use w::{completely_strong_porosity, default_pool, w_porosity};

use crate::error::{Error, Result};
use crate::scaleset::{Gap, LogValue, Magnitude, ScaleSet, DEFAULT_PRECISION_BITS};

/// Smallest depth on which limsup-type trends are judged.
pub const MIN_TREND_DEPTH: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Gaps aligned index-by-index with a sequence, plus the `≍` constants.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessGaps {
    /// 1-based sequence indices the gaps belong to.
    pub indices: Vec<usize>,
    pub gaps: Vec<Gap>,
    /// `c1 a_n < tau_n < c2 a_n` on the listed indices.
    pub constants: Option<(BigRational, BigRational)>,
    pub k: Option<LogValue>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PorosityVerdict {
    pub status: Status,
    pub witness: Option<WitnessGaps>,
    /// 1-based indices (into the sequence or the point list) of a refuting
    /// subset.
    pub counterexample: Option<Vec<usize>>,
    pub diagnostics: BTreeMap<String, String>,
    /// Per-index scores behind sequence verdicts.
    pub scores: Vec<ScoreRow>,
}

impl PorosityVerdict {
    pub fn new(status: Status) -> Self {
        PorosityVerdict {
            status,
            witness: None,
            counterexample: None,
            diagnostics: BTreeMap::new(),
            scores: Vec::new(),
        }
    }

    pub fn with_counterexample(mut self, indices: Vec<usize>) -> Self {
        self.counterexample = Some(indices);
        self
    }

    pub fn with_witness(mut self, w: WitnessGaps) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn diag(&mut self, key: &str, value: impl Into<String>) {
        self.diagnostics.insert(key.to_string(), value.into());
    }

    pub fn inconclusive(reason: &str) -> Self {
        let mut v = PorosityVerdict::new(Status::Inconclusive);
        v.diag("reason", reason);
        v
    }
}

/// Thresholds for the finite-window porosity tests.
#[derive(Clone, Debug, PartialEq)]
pub struct PorosityParams {
    /// Fraction of the points forming the tail window.
    pub window_fraction: f64,
    /// Exclusive upper bound of the `k` grid for sequence criteria.
    pub k_max: LogValue,
    /// A score `K* >= r_min` counts as divergent.
    pub r_min: LogValue,
    /// Bounded indices needed, in both window halves, to refute.
    pub m_fail: usize,
    /// Chain length needed by the subsequence search.
    pub m_sub: usize,
    /// Inclusive upper bound of `k` in the per-point criterion.
    pub band: LogValue,
    /// Points with `max_k K*/k <= bad_bound` form a bad set.
    pub bad_bound: LogValue,
    /// `p+ >= 1 - tol` counts as strong porosity.
    pub tol: BigRational,
    /// Slack on weak-equivalence constants.
    pub epsilon: BigRational,
}

impl Default for PorosityParams {
    fn default() -> Self {
        PorosityParams {
            window_fraction: 0.5,
            k_max: LogValue::pow2_int(6),
            r_min: LogValue::pow2_int(16),
            m_fail: 2,
            m_sub: 8,
            band: LogValue::pow2_int(10),
            bad_bound: LogValue::pow2_int(8),
            tol: BigRational::new(BigInt::one(), BigInt::one() << 20u32),
            epsilon: default_epsilon(),
        }
    }
}

/// Split a window into its first and second halves (the middle element, if
/// any, goes to the second half).
pub(crate) fn halves<T>(xs: &[T]) -> (&[T], &[T]) {
    xs.split_at(xs.len() / 2)
}

/// `lambda(E, 0, h)`, or `Inconclusive` when the answer depends on the
/// unresolved region below the smallest point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lambda {
    Length(Magnitude),
    Inconclusive,
}

/// Length of the largest open subinterval of `(0, h)` missing `E`.
pub fn lambda0h(set: &ScaleSet, h: &LogValue) -> Result<Lambda> {
    if h > set.window_top() {
        return Err(Error::OutsideWindow);
    }
    let below: Vec<&LogValue> = set.points().iter().filter(|p| *p < h).collect();
    let Some(&lowest) = below.last() else {
        return Ok(if set.contains_zero() {
            Lambda::Inconclusive
        } else {
            Lambda::Length(Magnitude::Positive(h.clone()))
        });
    };
    let bits = DEFAULT_PRECISION_BITS;
    let mut best = h.linear_difference(below[0], bits)?;
    for w in below.windows(2) {
        let d = w[0].linear_difference(w[1], bits)?;
        if d > best {
            best = d;
        }
    }
    if set.contains_zero() {
        if &best < lowest {
            return Ok(Lambda::Inconclusive);
        }
    } else if lowest > &best {
        best = lowest.clone();
    }
    Ok(Lambda::Length(Magnitude::Positive(best)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Stable,
    Increasing,
    Decreasing,
}

/// Relative margin separating a trend from noise.
const TREND_MARGIN: f64 = 1e-9;

pub(crate) fn trend_of(first: f64, second: f64) -> Trend {
    if second > first * (1.0 + TREND_MARGIN) {
        Trend::Increasing
    } else if second < first * (1.0 - TREND_MARGIN) {
        Trend::Decreasing
    } else {
        Trend::Stable
    }
}

/// Window estimate of `p+(E, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RightPorosity {
    /// Supremum of `lambda(h)/h` over the evaluated window points.
    pub sup: LogValue,
    pub trend: Trend,
    /// Window points `h` with their ratio `lambda(h)/h`.
    pub samples: Vec<(LogValue, LogValue)>,
    /// Window points skipped as unresolved.
    pub unresolved: usize,
}

impl RightPorosity {
    pub fn sup_f64(&self) -> f64 {
        self.sup.to_f64()
    }
}

/// Evaluate `lambda(h)/h` at each window point above the smallest one.
///
/// For `h` in a gap `(a, b]` the ratio is at most its value at `b` or its
/// limit at `a+`, so points suffice.
pub fn right_porosity(set: &ScaleSet, window_fraction: f64) -> Result<RightPorosity> {
    if !set.contains_zero() {
        let m = set.min_point().clone();
        return Ok(RightPorosity {
            sup: LogValue::one(),
            trend: Trend::Stable,
            samples: vec![(m, LogValue::one())],
            unresolved: 0,
        });
    }
    if set.depth() < MIN_TREND_DEPTH {
        return Err(Error::Precondition(format!(
            "right porosity needs depth >= {MIN_TREND_DEPTH}, got {}",
            set.depth()
        )));
    }
    let start = set.tail_start(window_fraction);
    let mut samples = Vec::new();
    let mut unresolved = 0;
    for h in &set.points()[start..set.depth() - 1] {
        match lambda0h(set, h)? {
            Lambda::Length(m) => {
                if let Some(l) = m.as_log_value() {
                    samples.push((h.clone(), l.div(h)));
                }
            }
            Lambda::Inconclusive => unresolved += 1,
        }
    }
    if samples.is_empty() {
        return Err(Error::Precondition("no resolved window point".into()));
    }
    let ratios: Vec<&LogValue> = samples.iter().map(|(_, r)| r).collect();
    let sup = (*ratios.iter().max().expect("nonempty")).clone();
    let (first, second) = halves(&ratios);
    let max_f = |xs: &[&LogValue]| xs.iter().map(|r| r.to_f64()).fold(f64::NEG_INFINITY, f64::max);
    let trend = if first.is_empty() {
        Trend::Stable
    } else {
        trend_of(max_f(first), max_f(second))
    };
    Ok(RightPorosity {
        sup,
        trend,
        samples,
        unresolved,
    })
}

/// `p+(E, 0) = 1`, judged as `sup >= 1 - tol` with a non-decreasing trend.
pub fn is_strongly_porous(set: &ScaleSet, tol: &BigRational, window_fraction: f64) -> Result<PorosityVerdict> {
    if set.contains_zero() && set.depth() < MIN_TREND_DEPTH {
        return Ok(PorosityVerdict::inconclusive("window too short"));
    }
    let rp = right_porosity(set, window_fraction)?;
    let threshold = LogValue::from_ratio(&(BigRational::one() - tol))?;
    let mut v = if rp.sup >= threshold && rp.trend != Trend::Decreasing {
        let best = rp
            .samples
            .iter()
            .max_by(|a, b| a.1.cmp(&b.1))
            .map(|(h, _)| h.clone())
            .expect("nonempty");
        let gap = widest_gap_below(set, &best);
        let index = set.index_of(&best).map_or(0, |i| i + 1);
        PorosityVerdict::new(Status::Holds).with_witness(WitnessGaps {
            indices: vec![index],
            gaps: gap.into_iter().collect(),
            constants: None,
            k: None,
        })
    } else if rp.sup < threshold && rp.trend != Trend::Increasing {
        let indices = rp
            .samples
            .iter()
            .filter_map(|(h, _)| set.index_of(h).map(|i| i + 1))
            .collect();
        PorosityVerdict::new(Status::Fails).with_counterexample(indices)
    } else {
        PorosityVerdict::inconclusive("trend disagrees with window supremum")
    };
    v.diag("sup_ratio", rp.sup.log2_repr());
    v.diag("sup_ratio_f64", format!("{:.12}", rp.sup_f64()));
    v.diag("trend", format!("{:?}", rp.trend).to_lowercase());
    Ok(v)
}

/// The gap `(a, b)` with `b <= h` of largest length, or `(s, h)` when `h`
/// itself is not a point.
fn widest_gap_below(set: &ScaleSet, h: &LogValue) -> Option<Gap> {
    let bits = DEFAULT_PRECISION_BITS;
    let pts: Vec<&LogValue> = set.points().iter().filter(|p| *p <= h).collect();
    pts.windows(2)
        .map(|w| Gap {
            a: w[1].clone(),
            b: w[0].clone(),
        })
        .max_by(|x, y| {
            let lx = x.b.linear_difference(&x.a, bits).ok();
            let ly = y.b.linear_difference(&y.a, bits).ok();
            lx.cmp(&ly)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example_2_8, gen_factorial, gen_geometric, PartitionSpec};
    use proptest::prelude::*;

    fn pw(e: i64) -> LogValue {
        LogValue::pow2_int(e)
    }

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    /// Longest empty open subinterval of (0, h) bounded by points of E, 0 or
    /// h, for a set without 0 (exact rationals).
    fn lambda_brute(points: &[BigRational], h: &BigRational) -> Option<BigRational> {
        let mut ends: Vec<BigRational> = points.iter().filter(|p| *p < h).cloned().collect();
        ends.push(h.clone());
        ends.push(BigRational::from_integer(0.into()));
        ends.sort();
        let mut best = None::<BigRational>;
        for w in ends.windows(2) {
            let len = &w[1] - &w[0];
            if best.as_ref().is_none_or(|b| &len > b) {
                best = Some(len);
            }
        }
        best
    }

    #[test]
    fn lambda_examples() {
        let e = ScaleSet::new(vec![pw(-1), pw(-2), pw(0)], true).unwrap();
        let h = LogValue::from_parts(3, -2).unwrap();
        assert_eq!(lambda0h(&e, &h).unwrap(), Lambda::Length(Magnitude::Positive(pw(-2))));

        let lone = ScaleSet::new(vec![pw(0)], false).unwrap();
        assert_eq!(lambda0h(&lone, &pw(-1)).unwrap(), Lambda::Length(Magnitude::Positive(pw(-1))));

        let g = gen_geometric(&half(), 40).unwrap();
        assert_eq!(lambda0h(&g, &pw(0)).unwrap(), Lambda::Length(Magnitude::Positive(pw(-1))));
        assert_eq!(lambda0h(&g, &pw(1)), Err(Error::OutsideWindow));
    }

    #[test]
    fn lambda_unresolved_bottom() {
        // (0, 2^-2) is unresolved and wider than the resolved gap (2^-2, 2^-1.5)
        let e = ScaleSet::new(vec![pw(0), LogValue::pow2(BigRational::new((-3).into(), 2.into())), pw(-2)], true)
            .unwrap();
        let h = LogValue::pow2(BigRational::new((-5).into(), 4.into()));
        assert_eq!(lambda0h(&e, &h).unwrap(), Lambda::Inconclusive);
        let bottom = ScaleSet::new(vec![pw(0)], true).unwrap();
        assert_eq!(lambda0h(&bottom, &pw(-1)).unwrap(), Lambda::Inconclusive);
    }

    #[test]
    fn lambda_matches_brute_force_without_zero() {
        let pts = [0i64, -1, -3, -4, -9, -10];
        let set = ScaleSet::new(pts.iter().map(|&e| pw(e)).collect(), false).unwrap();
        let rats: Vec<BigRational> = pts
            .iter()
            .map(|&e| BigRational::new(1.into(), BigInt::one() << (-e) as u32))
            .collect();
        for (hv, hr) in set.points().iter().zip(&rats) {
            let got = match lambda0h(&set, hv).unwrap() {
                Lambda::Length(Magnitude::Positive(l)) => l,
                other => panic!("{other:?}"),
            };
            let want = lambda_brute(&rats, hr).unwrap();
            assert_eq!(got, LogValue::from_ratio(&want).unwrap());
        }
    }

    #[test]
    fn right_porosity_examples() {
        let g = gen_geometric(&half(), 40).unwrap();
        let rp = right_porosity(&g, 0.5).unwrap();
        assert_eq!(rp.sup, pw(-1));
        assert!((rp.sup_f64() - 0.5).abs() < 1e-12);
        assert_eq!(rp.trend, Trend::Stable);

        let f = gen_factorial(20).unwrap();
        let rp = right_porosity(&f, 0.5).unwrap();
        assert!(rp.sup_f64() >= 1.0 - 1e-12);
        assert_ne!(rp.trend, Trend::Decreasing);

        let lone = ScaleSet::new(vec![pw(0)], false).unwrap();
        assert_eq!(right_porosity(&lone, 0.5).unwrap().sup, LogValue::one());

        let short = gen_geometric(&half(), 4).unwrap();
        assert!(right_porosity(&short, 0.5).is_err());
    }

    #[test]
    fn strong_porosity_examples() {
        let tol = BigRational::new(1.into(), 1_000_000.into());
        let f = gen_factorial(20).unwrap();
        let v = is_strongly_porous(&f, &tol, 0.5).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert!(v.witness.is_some());

        let g = gen_geometric(&half(), 40).unwrap();
        let v = is_strongly_porous(&g, &tol, 0.5).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert!(v.counterexample.is_some());

        let short = gen_geometric(&half(), 4).unwrap();
        assert_eq!(is_strongly_porous(&short, &tol, 0.5).unwrap().status, Status::Inconclusive);

        let (e, _) = gen_example_2_8(40, &PartitionSpec::DyadicClasses).unwrap();
        assert_eq!(is_strongly_porous(&e, &tol, 0.5).unwrap().status, Status::Holds);
    }

    fn arb_set() -> impl Strategy<Value = ScaleSet> {
        proptest::collection::vec(1i64..6, 8..24).prop_map(|gaps| {
            let mut e = 0i64;
            let pts = gaps
                .iter()
                .map(|g| {
                    let p = pw(e);
                    e -= g;
                    p
                })
                .collect();
            ScaleSet::new(pts, true).unwrap()
        })
    }

    proptest! {
        #[test]
        fn lambda_is_bounded_and_monotone(set in arb_set()) {
            let mut prev: Option<LogValue> = None;
            for h in set.points().iter().rev() {
                if let Lambda::Length(Magnitude::Positive(l)) = lambda0h(&set, h).unwrap() {
                    prop_assert!(&l <= h);
                    if let Some(p) = &prev {
                        prop_assert!(&l >= p);
                    }
                    prev = Some(l);
                }
            }
        }

        #[test]
        fn right_porosity_in_unit_interval(set in arb_set()) {
            let rp = right_porosity(&set, 0.5).unwrap();
            prop_assert!(rp.sup <= LogValue::one());
            prop_assert!(rp.samples.iter().all(|(_, r)| r <= &LogValue::one()));
        }
    }
}
