//! Sequence-relative strong porosity, scored by
//! `K*(E, t, k) = min{p in E : p > k t} / t`, the largest `K` with
//! `(k t, K t)` missing `E`.

use super::sequence::{almost_decreasing_tail, weak_equiv, AlmostDecreasing, PosSeq};
use super::{halves, PorosityParams, PorosityVerdict, Status, WitnessGaps, MIN_TREND_DEPTH};
use crate::error::{Error, Result};
use crate::scaleset::{Gap, LogValue, ScaleSet};

/// Score `K*`, or `BeyondWindow` when no point of the window lies above `k t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KStar {
    Finite(LogValue),
    BeyondWindow,
}

impl KStar {
    fn divergent(&self, r_min: &LogValue) -> bool {
        matches!(self, KStar::Finite(v) if v >= r_min)
    }

    fn bounded(&self, r_min: &LogValue) -> bool {
        matches!(self, KStar::Finite(v) if v < r_min)
    }

    pub fn log2_repr(&self) -> String {
        match self {
            KStar::Finite(v) => v.log2_repr(),
            KStar::BeyondWindow => "beyond-window".into(),
        }
    }
}

impl PartialOrd for KStar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KStar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (KStar::Finite(a), KStar::Finite(b)) => a.cmp(b),
            (KStar::Finite(_), KStar::BeyondWindow) => Less,
            (KStar::BeyondWindow, KStar::Finite(_)) => Greater,
            (KStar::BeyondWindow, KStar::BeyondWindow) => Equal,
        }
    }
}

/// One scored sequence index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreRow {
    /// 1-based index in the scored sequence.
    pub n: usize,
    pub tau: LogValue,
    pub k: Option<LogValue>,
    pub k_star: KStar,
}

pub fn k_star(set: &ScaleSet, t: &LogValue, k: &LogValue) -> Result<KStar> {
    if !set.contains(t) {
        return Err(Error::Precondition(format!("{t} is not a point of the set")));
    }
    if k <= &LogValue::one() {
        return Err(Error::Precondition(format!("k must exceed 1, got {k}")));
    }
    Ok(match set.next_strictly_above(&t.mul(k)) {
        Some(p) => KStar::Finite(p.div(t)),
        None => KStar::BeyondWindow,
    })
}

/// Whether `(k tau_n, K tau_n)` misses `E` for every 1-based `n >= n1`.
/// Points above the window top are treated as absent.
pub fn kk_empty(set: &ScaleSet, tau: &PosSeq, k: &LogValue, big_k: &LogValue, n1: usize) -> Result<bool> {
    if !(&LogValue::one() < k && k < big_k) {
        return Err(Error::Precondition("need 1 < k < K".into()));
    }
    for t in tau.terms().iter().skip(n1.saturating_sub(1)) {
        let lo = t.mul(k);
        if &lo > set.window_top() {
            return Err(Error::OutsideWindow);
        }
        if let Some(p) = set.next_strictly_above(&lo) {
            if p < &t.mul(big_k) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Candidate `k` values below `k_max`: powers of two from 2, and every ratio
/// `p / t > 1` with `p` a point and `t` one of `terms`. Sorted ascending.
pub fn k_grid(set: &ScaleSet, terms: &[LogValue], k_max: &LogValue) -> Vec<LogValue> {
    let mut grid = Vec::new();
    let mut p = LogValue::pow2_int(1);
    while &p < k_max {
        grid.push(p.clone());
        p = p.mul(&LogValue::pow2_int(1));
    }
    for t in terms {
        let Some(i) = set.index_of(t) else { continue };
        for p in set.points()[..i].iter().rev() {
            let r = p.div(t);
            if &r >= k_max {
                break;
            }
            grid.push(r);
        }
    }
    grid.sort();
    grid.dedup();
    grid
}

/// Positions (0-based, into `tau`) of the distinct terms from the
/// almost-decreasing start, and of the tail window among them.
struct Prepared {
    tail: Vec<usize>,
}

fn prepare(set: &ScaleSet, tau: &PosSeq, fraction: f64) -> Result<Option<Prepared>> {
    let AlmostDecreasing::From(start) = almost_decreasing_tail(tau) else {
        return Err(Error::Precondition("sequence is not almost decreasing".into()));
    };
    if let Some(i) = tau.terms().iter().position(|t| !set.contains(t)) {
        return Err(Error::Precondition(format!(
            "term {} is not a point of the set",
            tau.source_index(i)
        )));
    }
    let mut positions: Vec<usize> = Vec::new();
    for i in start - 1..tau.len() {
        if positions.last().is_none_or(|&j| tau.terms()[j] != tau.terms()[i]) {
            positions.push(i);
        }
    }
    if positions.len() < MIN_TREND_DEPTH {
        return Ok(None);
    }
    let ts = crate::scaleset::tail_start(positions.len(), fraction);
    Ok(Some(Prepared {
        tail: positions[ts..].to_vec(),
    }))
}

fn in_both_halves(tail_len: usize, hits: &[usize]) -> bool {
    let mid = tail_len / 2;
    hits.iter().any(|&i| i < mid) && hits.iter().any(|&i| i >= mid)
}

/// `min` over the second half is at least `min` over the first.
fn min_non_decreasing(values: &[&LogValue]) -> bool {
    let (first, second) = halves(values);
    match (first.iter().min(), second.iter().min()) {
        (Some(a), Some(b)) => b >= a,
        _ => true,
    }
}

pub fn tau_strong_porosity(set: &ScaleSet, tau: &PosSeq, params: &PorosityParams) -> Result<PorosityVerdict> {
    tau_strong_with_grid(set, tau, params, &[])
}

fn tau_strong_with_grid(
    set: &ScaleSet,
    tau: &PosSeq,
    params: &PorosityParams,
    extra: &[LogValue],
) -> Result<PorosityVerdict> {
    let Some(prep) = prepare(set, tau, params.window_fraction)? else {
        return Ok(PorosityVerdict::inconclusive("fewer than 8 distinct terms"));
    };
    let terms: Vec<&LogValue> = prep.tail.iter().map(|&i| &tau.terms()[i]).collect();
    let owned: Vec<LogValue> = terms.iter().map(|t| (*t).clone()).collect();
    let mut grid = k_grid(set, &owned, &params.k_max);
    grid.extend(extra.iter().filter(|k| *k > &LogValue::one()).cloned());
    grid.sort();
    grid.dedup();

    let mut table = Vec::with_capacity(grid.len());
    for k in &grid {
        let row = terms.iter().map(|t| k_star(set, t, k)).collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    let index = |j: usize| tau.source_index(prep.tail[j]);

    for (k, row) in grid.iter().zip(&table) {
        if !row.iter().all(|s| s.divergent(&params.r_min)) {
            continue;
        }
        let finite: Vec<&LogValue> = row
            .iter()
            .map(|s| match s {
                KStar::Finite(v) => v,
                KStar::BeyondWindow => unreachable!("divergent scores are finite"),
            })
            .collect();
        if !min_non_decreasing(&finite) {
            continue;
        }
        let mut v = gap_witness(set, &terms, k, params, &index)?;
        v.scores = rows(&terms, &index, |j| (Some(k.clone()), row[j].clone()));
        return Ok(v);
    }

    let bounded: Vec<Vec<usize>> = table
        .iter()
        .map(|row| (0..row.len()).filter(|&j| row[j].bounded(&params.r_min)).collect())
        .collect();
    let refuted = bounded
        .iter()
        .all(|b| b.len() >= params.m_fail && in_both_halves(terms.len(), b));
    let best = |j: usize| {
        let (i, s) = table
            .iter()
            .enumerate()
            .map(|(i, row)| (i, &row[j]))
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("grid is nonempty");
        (Some(grid[i].clone()), s.clone())
    };
    let mut v = if refuted {
        let last = bounded.last().expect("grid is nonempty");
        let mut v = PorosityVerdict::new(Status::Fails).with_counterexample(last.iter().map(|&j| index(j)).collect());
        let scores: Vec<String> = last
            .iter()
            .map(|&j| table[table.len() - 1][j].log2_repr())
            .collect();
        v.diag("bounded_log2_scores", scores.join(" "));
        v.diag("largest_k", grid.last().expect("grid is nonempty").log2_repr());
        v
    } else {
        PorosityVerdict::inconclusive("no uniform k with divergent scores, no recurrent bounded scores")
    };
    v.scores = rows(&terms, &index, best);
    Ok(v)
}

fn rows(
    terms: &[&LogValue],
    index: &dyn Fn(usize) -> usize,
    pick: impl Fn(usize) -> (Option<LogValue>, KStar),
) -> Vec<ScoreRow> {
    (0..terms.len())
        .map(|j| {
            let (k, k_star) = pick(j);
            ScoreRow {
                n: index(j),
                tau: terms[j].clone(),
                k,
                k_star,
            }
        })
        .collect()
}

/// Gap `(a_n, b_n)` containing `(k tau_n, K* tau_n)` for each term, checked
/// for `tau_n <= a_n`, `a_n / tau_n <= k`, `b_n / a_n >= r_min / k` and
/// `a_n` decreasing across the window.
fn gap_witness(
    set: &ScaleSet,
    terms: &[&LogValue],
    k: &LogValue,
    params: &PorosityParams,
    index: &dyn Fn(usize) -> usize,
) -> Result<PorosityVerdict> {
    let mut gaps = Vec::with_capacity(terms.len());
    let mut problems = Vec::new();
    let ratio_floor = params.r_min.div(k);
    for (j, t) in terms.iter().enumerate() {
        let kt = t.mul(k);
        let a = set.prev_at_or_below(&kt).expect("t itself lies below k t").clone();
        let b = set.next_strictly_above(&kt).expect("score is finite").clone();
        if &a < *t || &a.div(t) > k || b.div(&a) < ratio_floor {
            problems.push(index(j));
        }
        gaps.push(Gap { a, b });
    }
    if gaps.len() >= 2 && gaps.last().map(|g| &g.a) >= gaps.first().map(|g| &g.a) {
        problems.push(index(terms.len() - 1));
    }
    let a_seq = PosSeq::new(gaps.iter().map(|g| g.a.clone()).collect())?;
    let t_seq = PosSeq::new(terms.iter().map(|t| (*t).clone()).collect())?;
    let eq = weak_equiv(&a_seq, &t_seq, 1.0, &params.epsilon)?;
    if eq.constants.is_none() || !problems.is_empty() {
        let mut v = PorosityVerdict::inconclusive("gap witness failed validation");
        v.diag("witness_invalid", format!("{problems:?}"));
        return Ok(v);
    }
    let mut v = PorosityVerdict::new(Status::Holds).with_witness(WitnessGaps {
        indices: (0..terms.len()).map(index).collect(),
        gaps,
        constants: eq.constants,
        k: Some(k.clone()),
    });
    v.diag("k", k.log2_repr());
    v.diag("witness_valid", "true");
    Ok(v)
}

/// Independent check through gaps: for each tail term, the lowest gap
/// `(a, b)` of `E` with `a >= tau_n`, `a / tau_n < k_max` and
/// `b / tau_n >= r_min`.
pub fn witness_gap_route(set: &ScaleSet, tau: &PosSeq, params: &PorosityParams) -> Result<PorosityVerdict> {
    let Some(prep) = prepare(set, tau, params.window_fraction)? else {
        return Ok(PorosityVerdict::inconclusive("fewer than 8 distinct terms"));
    };
    let terms: Vec<&LogValue> = prep.tail.iter().map(|&i| &tau.terms()[i]).collect();
    let mut found: Vec<Option<Gap>> = Vec::with_capacity(terms.len());
    for t in &terms {
        let i = set.index_of(t).expect("terms are points");
        let pts = set.points();
        let mut hit = None;
        for j in (1..=i).rev() {
            let (a, b) = (&pts[j], &pts[j - 1]);
            if a.div(t) >= params.k_max {
                break;
            }
            if b.div(t) >= params.r_min {
                hit = Some(Gap { a: a.clone(), b: b.clone() });
                break;
            }
        }
        found.push(hit);
    }
    let index = |j: usize| tau.source_index(prep.tail[j]);
    let missing: Vec<usize> = (0..found.len()).filter(|&j| found[j].is_none()).collect();
    if missing.is_empty() {
        let ratios: Vec<LogValue> = found
            .iter()
            .zip(&terms)
            .map(|(g, t)| g.as_ref().expect("all found").b.div(t))
            .collect();
        if min_non_decreasing(&ratios.iter().collect::<Vec<_>>()) {
            let gaps: Vec<Gap> = found.into_iter().map(|g| g.expect("all found")).collect();
            let a_seq = PosSeq::new(gaps.iter().map(|g| g.a.clone()).collect())?;
            let t_seq = PosSeq::new(terms.iter().map(|t| (*t).clone()).collect())?;
            let eq = weak_equiv(&a_seq, &t_seq, 1.0, &params.epsilon)?;
            return Ok(PorosityVerdict::new(Status::Holds).with_witness(WitnessGaps {
                indices: (0..terms.len()).map(index).collect(),
                gaps,
                constants: eq.constants,
                k: None,
            }));
        }
        return Ok(PorosityVerdict::inconclusive("gap ratios not growing"));
    }
    if missing.len() >= params.m_fail && in_both_halves(terms.len(), &missing) {
        return Ok(PorosityVerdict::new(Status::Fails).with_counterexample(missing.into_iter().map(index).collect()));
    }
    Ok(PorosityVerdict::inconclusive("admissible gaps missing at isolated indices"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsequenceResult {
    pub verdict: PorosityVerdict,
    pub subsequence: Option<PosSeq>,
}

/// Longest chain of positions with non-decreasing scores.
fn longest_non_decreasing(scores: &[(usize, &LogValue)]) -> Vec<usize> {
    let n = scores.len();
    let mut len = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..i {
            if scores[j].1 <= scores[i].1 && len[j] + 1 > len[i] {
                len[i] = len[j] + 1;
                prev[i] = j;
            }
        }
    }
    let Some(mut i) = (0..n).max_by_key(|&i| (len[i], std::cmp::Reverse(i))) else {
        return Vec::new();
    };
    let mut chain = vec![scores[i].0];
    while prev[i] != usize::MAX {
        i = prev[i];
        chain.push(scores[i].0);
    }
    chain.reverse();
    chain
}

/// Look for a subsequence of `tau` along which `E` is strongly porous.
pub fn porous_subsequence_search(set: &ScaleSet, tau: &PosSeq, params: &PorosityParams) -> Result<SubsequenceResult> {
    let direct = tau_strong_porosity(set, tau, params)?;
    if direct.status == Status::Holds {
        return Ok(SubsequenceResult {
            verdict: direct,
            subsequence: Some(tau.clone()),
        });
    }
    let Some(prep) = prepare(set, tau, params.window_fraction)? else {
        return Ok(SubsequenceResult {
            verdict: PorosityVerdict::inconclusive("fewer than 8 distinct terms"),
            subsequence: None,
        });
    };
    let terms: Vec<LogValue> = prep.tail.iter().map(|&i| tau.terms()[i].clone()).collect();
    let grid = k_grid(set, &terms, &params.k_max);

    let mut best: Option<(Vec<usize>, LogValue)> = None;
    let mut largest_high = 0;
    for k in &grid {
        let scores = terms.iter().map(|t| k_star(set, t, k)).collect::<Result<Vec<_>>>()?;
        let high: Vec<(usize, &LogValue)> = scores
            .iter()
            .enumerate()
            .filter_map(|(j, s)| match s {
                KStar::Finite(v) if v >= &params.r_min => Some((prep.tail[j], v)),
                _ => None,
            })
            .collect();
        largest_high = largest_high.max(high.len());
        let chain = longest_non_decreasing(&high);
        if best.as_ref().is_none_or(|(c, _)| chain.len() > c.len()) {
            best = Some((chain, k.clone()));
        }
    }

    if largest_high < params.m_sub {
        let mut v = PorosityVerdict::new(Status::Fails).with_counterexample(
            prep.tail.iter().map(|&i| tau.source_index(i)).collect(),
        );
        v.diag("largest_high_score_set", largest_high.to_string());
        return Ok(SubsequenceResult {
            verdict: v,
            subsequence: None,
        });
    }
    let (chain, k) = best.expect("grid is nonempty");
    if chain.len() >= params.m_sub {
        let sub = tau.subsequence(&chain)?;
        let mut v = tau_strong_with_grid(set, &sub, params, std::slice::from_ref(&k))?;
        if v.status == Status::Holds {
            v.diag("chain_length", chain.len().to_string());
            return Ok(SubsequenceResult {
                verdict: v,
                subsequence: Some(sub),
            });
        }
    }
    let mut v = PorosityVerdict::inconclusive("high-score chain too short or not porous");
    v.diag("chain_length", chain.len().to_string());
    Ok(SubsequenceResult {
        verdict: v,
        subsequence: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example_2_8, gen_factorial, gen_geometric, PartitionSpec};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn pw(e: i64) -> LogValue {
        LogValue::pow2_int(e)
    }

    fn ratio(p: i64, q: i64) -> LogValue {
        LogValue::from_ratio(&BigRational::new(p.into(), q.into())).unwrap()
    }

    fn geometric(depth: usize) -> ScaleSet {
        gen_geometric(&BigRational::new(1.into(), 2.into()), depth).unwrap()
    }

    fn own_tail(set: &ScaleSet, skip: usize) -> PosSeq {
        PosSeq::new(set.points()[skip..].to_vec()).unwrap()
    }

    #[test]
    fn k_star_examples() {
        let g = geometric(40);
        for n in 2..30 {
            assert_eq!(k_star(&g, &pw(-n), &ratio(3, 2)).unwrap(), KStar::Finite(pw(1)));
        }
        let f = gen_factorial(8).unwrap();
        // t = 2^-(n+1)!, next point above 2t is 2^-n!
        for n in 2..7i64 {
            let fact = |m: i64| (1..=m).product::<i64>();
            let got = k_star(&f, &pw(-fact(n + 1)), &pw(1)).unwrap();
            assert_eq!(got, KStar::Finite(pw(fact(n + 1) - fact(n))));
        }
        assert_eq!(k_star(&g, &pw(0), &pw(1)).unwrap(), KStar::BeyondWindow);
        assert!(k_star(&g, &ratio(3, 8), &pw(1)).is_err());
        assert!(k_star(&g, &pw(-3), &LogValue::one()).is_err());
    }

    #[test]
    fn kk_empty_examples() {
        let g = geometric(40);
        let tau = PosSeq::new((1..=30).map(|n| pw(-n)).collect()).unwrap();
        assert!(kk_empty(&g, &tau, &ratio(6, 5), &ratio(9, 5), 1).unwrap());
        assert!(!kk_empty(&g, &tau, &ratio(6, 5), &ratio(5, 2), 1).unwrap());
        assert!(kk_empty(&g, &tau, &ratio(6, 5), &ratio(6, 5), 1).is_err());
        let top = PosSeq::new(vec![pw(0)]).unwrap();
        assert_eq!(kk_empty(&g, &top, &ratio(6, 5), &ratio(9, 5), 1), Err(Error::OutsideWindow));
    }

    #[test]
    fn factorial_own_points_hold_with_k_two() {
        let f = gen_factorial(20).unwrap();
        let tau = PosSeq::enumerate(&f);
        let v = tau_strong_porosity(&f, &tau, &PorosityParams::default()).unwrap();
        assert_eq!(v.status, Status::Holds);
        let w = v.witness.unwrap();
        assert_eq!(w.k, Some(pw(1)));
        // a_n = tau_n, b_n = the previous point
        for (idx, gap) in w.indices.iter().zip(&w.gaps) {
            assert_eq!(&gap.a, &tau.terms()[idx - 1]);
            assert_eq!(&gap.b, &tau.terms()[idx - 2]);
        }
    }

    #[test]
    fn geometric_fails() {
        let g = geometric(40);
        let tau = own_tail(&g, 1);
        let params = PorosityParams::default();
        let v = tau_strong_porosity(&g, &tau, &params).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert!(v.counterexample.unwrap().len() >= params.m_fail);
        assert_eq!(witness_gap_route(&g, &tau, &params).unwrap().status, Status::Fails);
        assert_eq!(porous_subsequence_search(&g, &tau, &params).unwrap().verdict.status, Status::Fails);
    }

    #[test]
    fn two_ladder_sequences() {
        let (e, trace) = gen_example_2_8(40, &PartitionSpec::DyadicClasses).unwrap();
        let params = PorosityParams::default();

        let star = PosSeq::new(trace.tau_star()).unwrap();
        let v = tau_strong_porosity(&e, &star, &params).unwrap();
        assert_eq!(v.status, Status::Fails);
        // bounded along the class n = 8 mod 16, with K* = 2^8
        assert_eq!(v.counterexample.as_deref(), Some(&[24usize, 40][..]));
        for n in [24, 40] {
            let p = PartitionSpec::DyadicClasses;
            assert_eq!(p.class_of(n), Some(4));
        }

        let tau = PosSeq::new(trace.tau()).unwrap();
        assert_eq!(tau_strong_porosity(&e, &tau, &params).unwrap().status, Status::Holds);

        let all = PosSeq::enumerate(&e);
        assert_eq!(tau_strong_porosity(&e, &all, &params).unwrap().status, Status::Fails);
        let sub = porous_subsequence_search(&e, &all, &params).unwrap();
        assert_eq!(sub.verdict.status, Status::Holds);
        assert!(sub.subsequence.unwrap().len() >= params.m_sub);
    }

    #[test]
    fn k_star_beyond_window_is_not_divergent() {
        assert!(!KStar::BeyondWindow.divergent(&pw(16)));
        assert!(!KStar::BeyondWindow.bounded(&pw(16)));
        assert!(KStar::Finite(pw(3)) < KStar::BeyondWindow);
    }

    #[test]
    fn longest_chain() {
        let vals = [pw(3), pw(1), pw(2), pw(2), pw(5), pw(0)];
        let scores: Vec<(usize, &LogValue)> = vals.iter().enumerate().collect();
        assert_eq!(longest_non_decreasing(&scores), vec![1, 2, 3, 4]);
    }

    fn arb_ladder() -> impl Strategy<Value = ScaleSet> {
        proptest::collection::vec((1i64..4, 0u8..3), 12..40).prop_map(|steps| {
            let mut e = 0i64;
            let mut pts = Vec::new();
            for (i, (g, mode)) in steps.iter().enumerate() {
                pts.push(pw(e));
                e -= g + if *mode == 0 { 2 * i as i64 } else { 0 };
            }
            ScaleSet::new(pts, true).unwrap()
        })
    }

    proptest! {
        #[test]
        fn k_star_is_monotone_in_k(set in arb_ladder(), a in 1i64..40, b in 1i64..40, pick in 0usize..100) {
            let t = &set.points()[pick % set.depth()];
            let (lo, hi) = (a.min(b), a.max(b));
            let k1 = ratio(16 + lo, 16);
            let k2 = ratio(16 + hi, 16);
            prop_assert!(k_star(&set, t, &k1).unwrap() <= k_star(&set, t, &k2).unwrap());
        }

        #[test]
        fn routes_never_disagree(set in arb_ladder(), skip in 0usize..4) {
            let params = PorosityParams::default();
            let tau = own_tail(&set, skip.min(set.depth() - 1));
            let a = tau_strong_porosity(&set, &tau, &params).unwrap();
            let b = witness_gap_route(&set, &tau, &params).unwrap();
            prop_assert!(!matches!((a.status, b.status), (Status::Holds, Status::Fails) | (Status::Fails, Status::Holds)));
            if a.status == Status::Holds {
                prop_assert_eq!(a.diagnostics.get("witness_valid").map(String::as_str), Some("true"));
            }
        }

        #[test]
        fn holding_sequences_have_porous_subsequences(set in arb_ladder()) {
            let params = PorosityParams::default();
            let tau = PosSeq::enumerate(&set);
            if tau_strong_porosity(&set, &tau, &params).unwrap().status == Status::Holds {
                prop_assert_eq!(porous_subsequence_search(&set, &tau, &params).unwrap().verdict.status, Status::Holds);
            }
        }
    }
}
