//! Subsequence operations on families: nested refinement until every pair
//! stabilizes, invariance of limits under restriction, and a one-sided probe
//! for extra classes appearing on subsequences.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    classify, identify, mutual_stability, quotients, saturate_family, MetricOracle, NormalizingSeq, PointSeq,
    SelfStableFamily, StabilityParams, StabilityStatus,
};
use crate::error::{Error, Result};
use crate::porosity::MIN_TREND_DEPTH;
use crate::scaleset::tail_start;

/// Nested bisection of the quotient range, keeping the more populated half
/// (ties go to the half holding the largest index), until the quotient's
/// tail spread is within `tol`.
fn refine_pair<O: MetricOracle>(
    oracle: &O,
    x: &PointSeq<O::Point>,
    y: &PointSeq<O::Point>,
    r: &NormalizingSeq,
    mut idx: Vec<usize>,
    params: &StabilityParams,
    budget: usize,
) -> Option<Vec<usize>> {
    let q_all = quotients(oracle, &x.points, &y.points, r.terms(), 0);
    for _ in 0..=budget {
        let q: Vec<f64> = idx.iter().map(|&i| q_all[i]).collect();
        if q.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let tail = &q[tail_start(q.len(), params.window_fraction)..];
        if classify(tail, params.tol).status == StabilityStatus::Converged {
            return Some(idx);
        }
        let lo = q.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mid = lo + (hi - lo) / 2.0;
        let (lower, upper): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| q_all[i] <= mid);
        let last = *idx.last()?;
        idx = match lower.len().cmp(&upper.len()) {
            std::cmp::Ordering::Greater => lower,
            std::cmp::Ordering::Less => upper,
            std::cmp::Ordering::Equal if q_all[last] <= mid => lower,
            std::cmp::Ordering::Equal => upper,
        };
        if idx.len() < MIN_TREND_DEPTH {
            return None;
        }
    }
    None
}

/// Default number of bisection rounds per pair.
pub const REFINE_BUDGET: usize = 64;

/// Pass to a subsequence of indices on which `{p~} ∪ b` is self-stable.
/// Returns the 0-based index set and the restricted family.
pub fn diagonal_refine<O: MetricOracle>(
    oracle: &O,
    b: &[PointSeq<O::Point>],
    r: &NormalizingSeq,
    params: &StabilityParams,
    budget: usize,
) -> Result<(Vec<usize>, SelfStableFamily<O::Point>)> {
    let p = PointSeq::marked(oracle, r.len());
    for m in b {
        if mutual_stability(oracle, &p, m, r, params)?.status == StabilityStatus::Diverged {
            return Err(Error::UnrefinablePair(p.label.clone(), m.label.clone()));
        }
    }
    let mut members = vec![p];
    members.extend(b.iter().cloned());
    let mut idx: Vec<usize> = (0..r.len()).collect();
    for j in 1..members.len() {
        for i in 0..j {
            idx = refine_pair(oracle, &members[i], &members[j], r, idx, params, budget)
                .ok_or_else(|| Error::UnrefinablePair(members[i].label.clone(), members[j].label.clone()))?;
        }
    }
    let rr = r.restrict(&idx);
    let restricted: Vec<_> = members.iter().map(|m| m.restrict(&idx)).collect();
    let family = saturate_family(oracle, restricted, &[], &rr, params).map_err(|e| match e {
        Error::SeedNotSelfStable(i, j) => Error::UnrefinablePair(members[i].label.clone(), members[j].label.clone()),
        other => other,
    })?;
    Ok((idx, family))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    /// `(i, j, |limit on restriction - recorded limit|)` per member pair.
    pub deviations: Vec<(usize, usize, f64)>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Recompute every pairwise limit along the 0-based indices `idx` and compare
/// with the family's recorded limits.
pub fn subsequence_invariance_check<O: MetricOracle>(
    oracle: &O,
    family: &SelfStableFamily<O::Point>,
    idx: &[usize],
    params: &StabilityParams,
) -> Result<InvarianceReport> {
    let n = family.r.len();
    let window = n - tail_start(n, params.window_fraction);
    if idx.len() < window {
        return Err(Error::Precondition(format!(
            "restriction has {} indices, the window needs {window}",
            idx.len()
        )));
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) || idx.last().is_some_and(|&i| i >= n) {
        return Err(Error::Precondition("indices must increase and stay in range".into()));
    }
    let rr = family.r.restrict(idx);
    let members: Vec<_> = family.members.iter().map(|m| m.restrict(idx)).collect();
    let mut deviations = Vec::new();
    for j in 0..members.len() {
        for i in 0..j {
            let s = mutual_stability(oracle, &members[i], &members[j], &rr, params)?;
            let dev = match s.limit {
                Some(l) => (l - family.dtilde[i][j]).abs(),
                None => f64::INFINITY,
            };
            deviations.push((i, j, dev));
        }
    }
    let max_deviation = deviations.iter().map(|d| d.2).fold(0.0, f64::max);
    Ok(InvarianceReport {
        pass: max_deviation <= 2.0 * params.tol,
        deviations,
        max_deviation,
    })
}

/// A candidate stable with the restricted family yet away from every class.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub trial: usize,
    /// 0-based indices of the subsequence.
    pub indices: Vec<usize>,
    pub member: String,
    /// Smallest limit distance from the candidate to a family member.
    pub min_distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangencyReport {
    pub trials_run: usize,
    pub violation: Option<Violation>,
}

fn probe_subset(trial: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    match trial % 3 {
        0 => (trial / 3 % 2..n).step_by(2).collect(),
        1 => (trial / 3 % 3..n).step_by(3).collect(),
        _ => (0..n).filter(|_| rng.gen_bool(0.5)).collect(),
    }
}

/// Look for subsequences on which some candidate joins the family at
/// positive distance from all of its classes. Finding none proves nothing.
pub fn tangency_probe<O: MetricOracle>(
    oracle: &O,
    family: &SelfStableFamily<O::Point>,
    candidates: &[PointSeq<O::Point>],
    trials: usize,
    params: &StabilityParams,
    seed: u64,
) -> Result<TangencyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = family.r.len();
    let mut run = 0;
    for trial in 0..trials {
        let idx = probe_subset(trial, n, &mut rng);
        if idx.len() < MIN_TREND_DEPTH {
            continue;
        }
        let rr = family.r.restrict(&idx);
        let members: Vec<_> = family.members.iter().map(|m| m.restrict(&idx)).collect();
        let Ok(sub) = saturate_family(oracle, members, &[], &rr, params) else {
            continue;
        };
        if identify(&sub.dtilde, params.tol).is_err() {
            continue;
        }
        run += 1;
        for c in candidates {
            let c = c.restrict(&idx);
            let mut dists = Vec::with_capacity(sub.members.len());
            for m in &sub.members {
                match mutual_stability(oracle, &c, m, &rr, params)?.limit {
                    Some(l) => dists.push(l),
                    None => break,
                }
            }
            if dists.len() < sub.members.len() {
                continue;
            }
            let min_distance = dists.iter().cloned().fold(f64::INFINITY, f64::min);
            if min_distance > params.tol {
                return Ok(TangencyReport {
                    trials_run: run,
                    violation: Some(Violation {
                        trial,
                        indices: idx,
                        member: c.label.clone(),
                        min_distance,
                    }),
                });
            }
        }
    }
    Ok(TangencyReport {
        trials_run: run,
        violation: None,
    })
}
