use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{halves, PorosityVerdict, Status};
use crate::error::{Error, Result};
use crate::scaleset::{format_rational, LogValue, ScaleSet, DEFAULT_PRECISION_BITS};

/// A truncated positive sequence indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosSeq {
    terms: Vec<LogValue>,
    /// Original 1-based indices when this is a subsequence.
    source_indices: Option<Vec<usize>>,
}

impl PosSeq {
    pub fn new(terms: Vec<LogValue>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(PosSeq {
            terms,
            source_indices: None,
        })
    }

    /// The points of `E` in decreasing order.
    pub fn enumerate(set: &ScaleSet) -> Self {
        PosSeq {
            terms: set.points().to_vec(),
            source_indices: None,
        }
    }

    pub fn terms(&self) -> &[LogValue] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Original 1-based index of the term at position `i`.
    pub fn source_index(&self, i: usize) -> usize {
        match &self.source_indices {
            Some(s) => s[i],
            None => i + 1,
        }
    }

    /// The subsequence at the given positions (0-based, increasing).
    pub fn subsequence(&self, positions: &[usize]) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::EmptySet);
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) || *positions.last().unwrap() >= self.len() {
            return Err(Error::Precondition("subsequence positions must increase and stay in range".into()));
        }
        Ok(PosSeq {
            terms: positions.iter().map(|&i| self.terms[i].clone()).collect(),
            source_indices: Some(positions.iter().map(|&i| self.source_index(i)).collect()),
        })
    }

    /// Terms at positions `offset, offset + step, ...`.
    pub fn progression(&self, offset: usize, step: usize) -> Result<Self> {
        if step == 0 {
            return Err(Error::Precondition("step must be positive".into()));
        }
        let positions: Vec<usize> = (offset..self.len()).step_by(step).collect();
        self.subsequence(&positions)
    }

    /// Every term is a point of `set`.
    pub fn member_of(&self, set: &ScaleSet) -> bool {
        self.terms.iter().all(|t| set.contains(t))
    }
}

/// Where a sequence becomes non-increasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlmostDecreasing {
    /// Non-increasing from this 1-based index to the end.
    From(usize),
    Never,
}

pub fn almost_decreasing_tail(s: &PosSeq) -> AlmostDecreasing {
    let t = s.terms();
    let mut start = t.len();
    while start > 1 && t[start - 2] >= t[start - 1] {
        start -= 1;
    }
    if t.len() >= 2 && start == t.len() {
        AlmostDecreasing::Never
    } else {
        AlmostDecreasing::From(start.max(1))
    }
}

/// Outcome of a weak equivalence test: `c1 a_n < g_n < c2 a_n` on the tail.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakEquiv {
    pub verdict: PorosityVerdict,
    pub constants: Option<(BigRational, BigRational)>,
}

/// Default slack applied to the extreme ratios.
pub fn default_epsilon() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 20u32)
}

/// Spread (in log2) the tail ratios must cover before a monotone trend counts
/// as divergent.
pub const DIVERGENT_SPREAD_LOG2: f64 = 16.0;

/// Test `g ≍ a` on the last `window` fraction of the terms.
///
/// Fails when the ratio `g_n / a_n` is strictly monotone over the window,
/// its log-steps do not shrink between the halves and it spreads over at
/// least `2^DIVERGENT_SPREAD_LOG2`.
pub fn weak_equiv(a: &PosSeq, g: &PosSeq, window: f64, epsilon: &BigRational) -> Result<WeakEquiv> {
    if a.len() != g.len() {
        return Err(Error::Precondition(format!(
            "weak equivalence needs equal lengths, got {} and {}",
            a.len(),
            g.len()
        )));
    }
    let start = crate::scaleset::tail_start(a.len(), window);
    let ratios: Vec<LogValue> = (start..a.len()).map(|i| g.terms[i].div(&a.terms[i])).collect();
    let one = BigRational::one();

    if ratios.len() >= 4 {
        let inc = ratios.windows(2).all(|w| w[0] < w[1]);
        let dec = ratios.windows(2).all(|w| w[0] > w[1]);
        if inc || dec {
            let steps: Vec<f64> = ratios
                .windows(2)
                .map(|w| w[1].div(&w[0]).log2_f64().abs())
                .collect();
            let (first, second) = halves(&steps);
            let min_first = first.iter().cloned().fold(f64::INFINITY, f64::min);
            let min_second = second.iter().cloned().fold(f64::INFINITY, f64::min);
            let spread = steps.iter().sum::<f64>();
            if min_second >= min_first && spread >= DIVERGENT_SPREAD_LOG2 {
                let n = g.source_index(a.len() - 1);
                let mut v = PorosityVerdict::new(Status::Fails).with_counterexample(vec![n]);
                v.diag("ratio_trend", if inc { "growing" } else { "shrinking" });
                v.diag("last_log2_ratio", ratios.last().unwrap().log2_repr());
                return Ok(WeakEquiv {
                    verdict: v,
                    constants: None,
                });
            }
        }
    }

    let lo = ratios.iter().min().expect("nonempty tail");
    let hi = ratios.iter().max().expect("nonempty tail");
    let c1 = lo.to_rational(DEFAULT_PRECISION_BITS) * (&one - epsilon);
    let c2 = hi.to_rational(DEFAULT_PRECISION_BITS) * (&one + epsilon);
    let mut v = PorosityVerdict::new(Status::Holds);
    v.diag("c1", format_rational(&c1));
    v.diag("c2", format_rational(&c2));
    Ok(WeakEquiv {
        verdict: v,
        constants: Some((c1, c2)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn pw(e: i64) -> LogValue {
        LogValue::pow2_int(e)
    }

    fn seq(es: &[i64]) -> PosSeq {
        PosSeq::new(es.iter().map(|&e| pw(e)).collect()).unwrap()
    }

    #[test]
    fn almost_decreasing_examples() {
        assert_eq!(almost_decreasing_tail(&seq(&[0, 1, -1, -2])), AlmostDecreasing::From(2));
        assert_eq!(almost_decreasing_tail(&seq(&[0, -1, -2, -3])), AlmostDecreasing::From(1));
        assert_eq!(almost_decreasing_tail(&seq(&[-2, -1])), AlmostDecreasing::Never);
        assert_eq!(almost_decreasing_tail(&seq(&[-2])), AlmostDecreasing::From(1));
        assert_eq!(almost_decreasing_tail(&seq(&[0, -1, -1, -2])), AlmostDecreasing::From(1));
    }

    #[test]
    fn weak_equiv_constant_ratio() {
        let a: Vec<i64> = (1..=20).map(|n| -n).collect();
        let a = seq(&a);
        let g = PosSeq::new(a.terms().iter().map(|t| t.mul(&LogValue::from_parts(3, 0).unwrap())).collect()).unwrap();
        let eps = default_epsilon();
        let w = weak_equiv(&a, &g, 0.5, &eps).unwrap();
        assert_eq!(w.verdict.status, Status::Holds);
        let (c1, c2) = w.constants.unwrap();
        let three = BigRational::from_integer(3.into());
        assert!(c1 < three && three < c2);
    }

    #[test]
    fn weak_equiv_identity() {
        let a = seq(&(1..=12).map(|n| -n).collect::<Vec<_>>());
        let eps = default_epsilon();
        let w = weak_equiv(&a, &a, 0.5, &eps).unwrap();
        let one = BigRational::one();
        assert_eq!(w.constants, Some((&one - &eps, &one + &eps)));
    }

    #[test]
    fn weak_equiv_diverging_ratio_fails() {
        let a = seq(&(1..=20).map(|n| -n).collect::<Vec<_>>());
        let g = seq(&(1..=20).map(|n| -n * n).collect::<Vec<_>>());
        let w = weak_equiv(&a, &g, 0.5, &default_epsilon()).unwrap();
        assert_eq!(w.verdict.status, Status::Fails);
        assert!(w.verdict.counterexample.is_some());
    }

    #[test]
    fn weak_equiv_converging_monotone_ratio_holds() {
        // g_n / a_n = 3 - 2^-n: strictly increasing but bounded
        let a = seq(&(1..=20).map(|n| -n).collect::<Vec<_>>());
        let g = PosSeq::new(
            (1..=20i64)
                .map(|n| {
                    let r = BigRational::from_integer(3.into())
                        - BigRational::new(BigInt::one(), BigInt::one() << n as u32);
                    pw(-n).mul(&LogValue::from_ratio(&r).unwrap())
                })
                .collect(),
        )
        .unwrap();
        let w = weak_equiv(&a, &g, 0.5, &default_epsilon()).unwrap();
        assert_eq!(w.verdict.status, Status::Holds);
    }

    #[test]
    fn weak_equiv_rejects_unequal_lengths() {
        assert!(weak_equiv(&seq(&[0, -1]), &seq(&[0]), 0.5, &default_epsilon()).is_err());
    }

    #[test]
    fn progression_and_subsequence_keep_indices() {
        let s = seq(&[0, -1, -2, -3, -4, -5, -6]);
        let p = s.progression(1, 3).unwrap();
        assert_eq!(p.terms(), &[pw(-1), pw(-4)]);
        assert_eq!(p.source_index(1), 5);
        let q = p.subsequence(&[1]).unwrap();
        assert_eq!(q.source_index(0), 5);
    }

    fn arb_seq(len: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..3, len)
    }

    proptest! {
        #[test]
        fn weak_equiv_is_symmetric(base in arb_seq(16), noise in arb_seq(16)) {
            let mut e = 0i64;
            let a: Vec<i64> = base.iter().map(|d| { e -= d.abs() + 1; e }).collect();
            let g: Vec<i64> = a.iter().zip(&noise).map(|(x, d)| x + d).collect();
            let (a, g) = (seq(&a), seq(&g));
            let eps = default_epsilon();
            let ag = weak_equiv(&a, &g, 0.5, &eps).unwrap();
            let ga = weak_equiv(&g, &a, 0.5, &eps).unwrap();
            prop_assert_eq!(ag.verdict.status, ga.verdict.status);
            if let (Some((c1, c2)), Some((d1, d2))) = (ag.constants, ga.constants) {
                // inverted constants bracket the reverse ratios
                let one = BigRational::one();
                prop_assert!(&one / &c2 <= d2.clone() && d1 <= &one / &c1);
                prop_assert!(!c1.is_zero());
            }
        }

        #[test]
        fn weak_equiv_composes(base in arb_seq(16), n1 in arb_seq(16), n2 in arb_seq(16)) {
            let mut e = 0i64;
            let a: Vec<i64> = base.iter().map(|d| { e -= d.abs() + 1; e }).collect();
            let b: Vec<i64> = a.iter().zip(&n1).map(|(x, d)| x + d).collect();
            let c: Vec<i64> = b.iter().zip(&n2).map(|(x, d)| x + d).collect();
            let (a, b, c) = (seq(&a), seq(&b), seq(&c));
            let eps = default_epsilon();
            let ab = weak_equiv(&a, &b, 0.5, &eps).unwrap();
            let bc = weak_equiv(&b, &c, 0.5, &eps).unwrap();
            let ac = weak_equiv(&a, &c, 0.5, &eps).unwrap();
            if let (Some((p1, p2)), Some((q1, q2))) = (ab.constants, bc.constants) {
                prop_assert_eq!(ac.verdict.status, Status::Holds);
                let (r1, r2) = ac.constants.unwrap();
                // composed constants bound the direct ones
                prop_assert!(&p1 * &q1 <= r1 && r2 <= &p2 * &q2);
            }
        }
    }
}
