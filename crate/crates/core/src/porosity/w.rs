//! Set-level criteria quantified over all sequences, decided through per-point
//! scores: a bad set of uniformly bounded points refutes, divergent scores at
//! every window point confirm.

use super::sequence::PosSeq;
use super::tau::{k_grid, k_star, tau_strong_porosity, KStar};
use super::{PorosityParams, PorosityVerdict, Status, WitnessGaps, MIN_TREND_DEPTH};
use crate::error::Result;
use crate::scaleset::{Gap, LogValue, ScaleSet};

/// Per-point outcome over the grid `k <= band`.
struct PointScore {
    /// Smallest `k` with a divergent score, with the gap it exposes.
    good: Option<(LogValue, Gap)>,
    /// `max_k K*/k`, `None` if some score leaves the window.
    best_ratio: Option<LogValue>,
}

fn point_grid(set: &ScaleSet, t: &LogValue, band: &LogValue) -> Vec<LogValue> {
    // k_grid is exclusive; nudge the bound so `band` itself is included
    let bound = band.mul(&LogValue::from_parts(3, -1).expect("3/2 is positive"));
    k_grid(set, std::slice::from_ref(t), &bound)
        .into_iter()
        .filter(|k| k <= band)
        .collect()
}

fn score_point(set: &ScaleSet, t: &LogValue, params: &PorosityParams) -> Result<PointScore> {
    let mut good = None;
    let mut best_ratio: Option<LogValue> = None;
    let mut escaped = false;
    for k in point_grid(set, t, &params.band) {
        match k_star(set, t, &k)? {
            KStar::Finite(v) => {
                if good.is_none() && v >= params.r_min {
                    let kt = t.mul(&k);
                    let a = set.prev_at_or_below(&kt).expect("t lies below k t").clone();
                    good = Some((k.clone(), Gap { a, b: v.mul(t) }));
                }
                let r = v.div(&k);
                if best_ratio.as_ref().is_none_or(|b| &r > b) {
                    best_ratio = Some(r);
                }
            }
            KStar::BeyondWindow => escaped = true,
        }
    }
    Ok(PointScore {
        good,
        best_ratio: if escaped { None } else { best_ratio },
    })
}

/// Window points whose scores stay below `bad_bound`, as 0-based window
/// offsets, and the scores of the whole window.
fn window_scores(set: &ScaleSet, params: &PorosityParams) -> Result<(usize, Vec<PointScore>, Vec<usize>)> {
    let start = set.tail_start(params.window_fraction);
    let scores = set.points()[start..]
        .iter()
        .map(|t| score_point(set, t, params))
        .collect::<Result<Vec<_>>>()?;
    let bad = (0..scores.len())
        .filter(|&j| {
            scores[j]
                .best_ratio
                .as_ref()
                .is_some_and(|r| r <= &params.bad_bound)
        })
        .collect();
    Ok((start, scores, bad))
}

fn recurrent(len: usize, hits: &[usize], m_fail: usize) -> bool {
    let mid = len / 2;
    hits.len() >= m_fail && hits.iter().any(|&i| i < mid) && hits.iter().any(|&i| i >= mid)
}

/// Every almost decreasing null sequence in `E` has a porous subsequence.
pub fn w_porosity(set: &ScaleSet, params: &PorosityParams) -> Result<PorosityVerdict> {
    if !set.contains_zero() {
        let mut v = PorosityVerdict::new(Status::Holds).with_witness(WitnessGaps {
            indices: Vec::new(),
            gaps: Vec::new(),
            constants: None,
            k: None,
        });
        v.diag("zero_isolated", "true");
        return Ok(v);
    }
    if set.depth() < MIN_TREND_DEPTH {
        return Ok(PorosityVerdict::inconclusive("window too short"));
    }
    let (start, scores, bad) = window_scores(set, params)?;
    if recurrent(scores.len(), &bad, params.m_fail) {
        let mut v = PorosityVerdict::new(Status::Fails).with_counterexample(bad.iter().map(|j| start + j + 1).collect());
        v.diag("bad_set_size", bad.len().to_string());
        return Ok(v);
    }
    if scores.iter().all(|s| s.good.is_some()) {
        let (ks, gaps): (Vec<LogValue>, Vec<Gap>) = scores.into_iter().map(|s| s.good.expect("all good")).unzip();
        let kmax = ks.iter().max().cloned();
        let mut v = PorosityVerdict::new(Status::Holds).with_witness(WitnessGaps {
            indices: (0..gaps.len()).map(|j| start + j + 1).collect(),
            gaps,
            constants: None,
            k: kmax.clone(),
        });
        v.diag("largest_k_used", kmax.map(|k| k.log2_repr()).unwrap_or_default());
        return Ok(v);
    }
    let mut v = PorosityVerdict::inconclusive("some window points lack divergent scores, no recurrent bad set");
    v.diag("bad_set_size", bad.len().to_string());
    Ok(v)
}

/// Default sequence pool: the decreasing enumeration of `E`, its
/// arithmetic-progression subsequences with step 2 to 4 at every offset,
/// then `extra`.
pub fn default_pool(set: &ScaleSet, extra: Vec<PosSeq>) -> Vec<PosSeq> {
    let all = PosSeq::enumerate(set);
    let mut pool = vec![all.clone()];
    for step in 2..=4 {
        for offset in 0..step {
            if let Ok(p) = all.progression(offset, step) {
                pool.push(p);
            }
        }
    }
    pool.extend(extra);
    pool
}

/// `E` is porous along every almost decreasing null sequence in it.
pub fn completely_strong_porosity(set: &ScaleSet, pool: &[PosSeq], params: &PorosityParams) -> Result<PorosityVerdict> {
    for (i, member) in pool.iter().enumerate() {
        let v = tau_strong_porosity(set, member, params)?;
        if v.status == Status::Fails {
            let mut out = PorosityVerdict::new(Status::Fails)
                .with_counterexample(v.counterexample.clone().unwrap_or_default());
            out.diag("pool_member", i.to_string());
            out.scores = v.scores;
            return Ok(out);
        }
    }
    if set.depth() < MIN_TREND_DEPTH {
        return Ok(PorosityVerdict::inconclusive("window too short"));
    }
    let (start, scores, bad) = window_scores(set, params)?;
    if recurrent(scores.len(), &bad, params.m_fail) {
        let mut v = PorosityVerdict::new(Status::Fails).with_counterexample(bad.iter().map(|j| start + j + 1).collect());
        v.diag("bad_set_size", bad.len().to_string());
        return Ok(v);
    }
    let window = &set.points()[start..];
    for k in k_grid(set, window, &params.k_max) {
        let all = window
            .iter()
            .map(|t| k_star(set, t, &k))
            .collect::<Result<Vec<_>>>()?;
        if all.iter().all(|s| matches!(s, KStar::Finite(v) if v >= &params.r_min)) {
            let gaps = window
                .iter()
                .zip(&all)
                .map(|(t, s)| {
                    let KStar::Finite(v) = s else { unreachable!("checked finite") };
                    let a = set.prev_at_or_below(&t.mul(&k)).expect("t lies below k t").clone();
                    Gap { a, b: v.mul(t) }
                })
                .collect();
            let mut v = PorosityVerdict::new(Status::Holds).with_witness(WitnessGaps {
                indices: (start + 1..=set.depth()).collect(),
                gaps,
                constants: None,
                k: Some(k.clone()),
            });
            v.diag("k", k.log2_repr());
            return Ok(v);
        }
    }
    Ok(PorosityVerdict::inconclusive("no uniform k gives divergent scores at every window point"))
}
