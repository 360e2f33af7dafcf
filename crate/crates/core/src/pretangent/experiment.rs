//! Boundedness experiments: w-porosity of the distance set against diameters
//! of pretangent spaces built along many normalizing sequences.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracles::SubsetOfLine;
use super::{
    distance_set, metric_identification, mutual_stability, saturate_family, spot_check_axioms, tangency_probe,
    MetricOracle, NormalizingSeq, PointSeq, PretangentSpace, SelfStableFamily, StabilityParams,
    StabilityStatus,
};
use crate::error::{Error, Result};
use crate::generators::fields;
use crate::porosity::{default_pool, w_porosity, PorosityParams, Status, MIN_TREND_DEPTH};
use crate::scaleset::{format_rational, parse_rational, LogValue, ScaleSet};

/// The smallest candidate scale is `2^CANDIDATE_FLOOR_LOG2` times `tol`, so no
/// chain of `tol`-close candidates links distinct directions through `p~`.
pub const CANDIDATE_FLOOR_LOG2: i64 = 2;
/// Points sampled for the axiom spot check.
const AXIOM_SAMPLE: usize = 64;
/// Subsets tried per run when probing tangency.
const PROBE_TRIALS: usize = 6;
/// Runs probed for tangency evidence.
const PROBE_RUNS: usize = 4;

fn d_depth() -> usize {
    40
}
fn d_tol_log2() -> i32 {
    -20
}
fn d_window() -> String {
    "1/2".into()
}
fn d_trials() -> usize {
    16
}
fn d_pool_budget() -> usize {
    4096
}
fn d_ladder() -> usize {
    16
}

/// Experiment settings. `normalizing` entries are `pool:<i>` (the i-th
/// default pool sequence of the distance set), `geometric:<q>` (`q^n`) or
/// `decay:<a>` (`2^(-a n)`); when empty, the whole default pool is used
/// together with `trials` seeded random decays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "d_depth")]
    pub depth: usize,
    #[serde(default = "d_tol_log2")]
    pub tol_log2: i32,
    #[serde(default = "d_window")]
    pub window_fraction: String,
    #[serde(default = "d_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub normalizing: Vec<String>,
    #[serde(default = "d_pool_budget")]
    pub pool_budget: usize,
    /// Rungs of the explicit unbounded construction.
    #[serde(default = "d_ladder")]
    pub ladder_max: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            depth: d_depth(),
            tol_log2: d_tol_log2(),
            window_fraction: d_window(),
            trials: d_trials(),
            seed: 0,
            normalizing: Vec::new(),
            pool_budget: d_pool_budget(),
            ladder_max: d_ladder(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema {
            path: ".".into(),
            message: e.to_string(),
        })?;
        let cfg: ExperimentConfig = fields(v)?;
        cfg.stability()?;
        Ok(cfg)
    }

    pub fn stability(&self) -> Result<StabilityParams> {
        let w = parse_rational(&self.window_fraction)?;
        if !w.is_positive_fraction() {
            return Err(Error::Schema {
                path: "window_fraction".into(),
                message: "must lie in (0, 1]".into(),
            });
        }
        if self.depth < MIN_TREND_DEPTH {
            return Err(Error::Schema {
                path: "depth".into(),
                message: format!("must be at least {MIN_TREND_DEPTH}"),
            });
        }
        Ok(StabilityParams {
            tol: 2f64.powi(self.tol_log2),
            window_fraction: w.to_f64().unwrap_or(0.5),
        })
    }
}

trait Fraction {
    fn is_positive_fraction(&self) -> bool;
}

impl Fraction for BigRational {
    fn is_positive_fraction(&self) -> bool {
        self > &BigRational::zero() && self <= &BigRational::one()
    }
}

/// Exponents `i` of the candidate scales `2^i` for a tolerance.
pub fn candidate_exponents(tol: f64) -> std::ops::RangeInclusive<i64> {
    let l = tol.log2();
    (l.ceil() as i64 + CANDIDATE_FLOOR_LOG2)..=(-l.floor() as i64)
}

/// For each `m = 2^i` with `4 tol <= m <= 1/tol` and each variant the oracle
/// offers near a scale, the sequence of points near `m r_n`. Duplicates and
/// the marked sequence are dropped.
pub fn scale_matched_candidates<O: MetricOracle>(oracle: &O, r: &NormalizingSeq, tol: f64) -> Vec<PointSeq<O::Point>> {
    let p = oracle.marked_point();
    let mut out: Vec<PointSeq<O::Point>> = Vec::new();
    for i in candidate_exponents(tol) {
        let m = LogValue::pow2_int(i);
        let near: Vec<Vec<O::Point>> = r.terms().iter().map(|t| oracle.points_near(&t.mul(&m))).collect();
        let width = near.iter().map(Vec::len).min().unwrap_or(0);
        for v in 0..width {
            let pts: Vec<O::Point> = near.iter().map(|row| row[v].clone()).collect();
            if pts.iter().all(|x| x == &p) || out.iter().any(|s| s.points == pts) {
                continue;
            }
            out.push(PointSeq::new(pts, format!("near(2^{i} r)[{v}]")));
        }
    }
    out
}

type FamilyAndPool<P> = (SelfStableFamily<P>, Vec<PointSeq<P>>);

fn build_family<O: MetricOracle>(
    oracle: &O,
    r: &NormalizingSeq,
    params: &StabilityParams,
) -> Result<FamilyAndPool<O::Point>> {
    let pool = scale_matched_candidates(oracle, r, params.tol);
    let fam = saturate_family(oracle, vec![PointSeq::marked(oracle, r.len())], &pool, r, params)?;
    Ok((fam, pool))
}

fn build_space<O: MetricOracle>(oracle: &O, r: &NormalizingSeq, params: &StabilityParams) -> Result<PretangentSpace> {
    let (fam, _) = build_family(oracle, r, params)?;
    metric_identification(&fam, params.tol)
}

/// One normalizing sequence's outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    pub run_id: usize,
    pub r_descriptor: String,
    pub diameter: Option<f64>,
    pub class_count: Option<usize>,
    /// The same construction over the distance set as a subset of the line.
    pub diameter_distance_set: Option<f64>,
    /// Diameter at half the depth.
    pub diameter_half: Option<f64>,
    /// `diameter <= 2 diameter_distance_set + 4 tol`.
    pub distance_set_bound_ok: bool,
    pub status: String,
}

/// The explicit construction of members at growing distances from `p~`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderReport {
    pub r_descriptor: String,
    pub from_bad_set: bool,
    /// Stable limit of rung `j` (index `j - 1`) when it lies in `[j, 2j]`.
    pub rungs: Vec<Option<f64>>,
    /// Family diameter after admitting rungs `1..=j`.
    pub diameters: Vec<f64>,
    pub unbounded: bool,
}

impl LadderReport {
    fn achieved(&self) -> usize {
        self.rungs.iter().filter(|r| r.is_some()).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiameterTrend {
    Stable,
    Growing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Agreement {
    Agree,
    Disagree,
    InconclusiveCompatible,
}

impl std::fmt::Display for Agreement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Agreement::Agree => "agree",
            Agreement::Disagree => "disagree",
            Agreement::InconclusiveCompatible => "inconclusive-compatible",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub space: String,
    pub config: ExperimentConfig,
    pub distance_set_depth: usize,
    pub warnings: Vec<String>,
    pub w_status: Status,
    pub w_counterexample: Option<Vec<usize>>,
    pub runs: Vec<RunRow>,
    pub ladder: Option<LadderReport>,
    pub max_diameter: f64,
    pub max_diameter_half: f64,
    pub diameter_trend: DiameterTrend,
    pub max_class_count: usize,
    pub distance_set_bound_violations: usize,
    /// A run on which the tangency probe found no violation.
    pub tangent_evidence: Option<String>,
    pub agreement: Agreement,
}

impl ExperimentReport {
    /// `run_id,r_descriptor,diameter,class_count,status`.
    pub fn runs_csv(&self) -> String {
        let mut out = String::from("run_id,r_descriptor,diameter,class_count,status\n");
        for r in &self.runs {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.run_id,
                r.r_descriptor,
                r.diameter.map(|d| d.to_string()).unwrap_or_default(),
                r.class_count.map(|c| c.to_string()).unwrap_or_default(),
                r.status.replace(',', ";")
            ));
        }
        out
    }
}

fn geometric_terms(q: &BigRational, depth: usize) -> Result<Vec<LogValue>> {
    if !q.is_positive_fraction() || q == &BigRational::one() {
        return Err(Error::Precondition(format!("ratio {} outside (0, 1)", format_rational(q))));
    }
    let q = LogValue::from_ratio(q)?;
    let mut t = LogValue::one();
    Ok((0..depth)
        .map(|_| {
            t = t.mul(&q);
            t.clone()
        })
        .collect())
}

fn decay_terms(a: &BigRational, offset: i64, depth: usize) -> Vec<LogValue> {
    (1..=depth as i64)
        .map(|n| LogValue::pow2(-(a * BigRational::from_integer(n.into()) + BigRational::from_integer(offset.into()))))
        .collect()
}

/// Seeded decays `2^-(a n + b)` that stay inside the range of `s`.
fn random_decays(s: &ScaleSet, depth: usize, trials: usize, seed: u64) -> Vec<NormalizingSeq> {
    // exponents beyond i32 are clamped; decays stay within the sampled range
    let clamp = |x: f64| x.clamp(i32::MIN as f64, i32::MAX as f64) as i64;
    let lo = clamp((-s.window_top().log2_f64()).ceil());
    let hi = clamp((-s.min_point().log2_f64()).floor()).max(lo);
    let eighths = ((hi - lo).max(1) * 8) / depth as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .filter_map(|_| {
            let a = if eighths >= 1 {
                BigRational::new(rng.gen_range(1..=eighths).into(), 8.into())
            } else {
                BigRational::new((hi - lo).max(1).into(), (depth as i64).into())
            };
            let label = format!("decay:{}@{lo}", format_rational(&a));
            NormalizingSeq::new(decay_terms(&a, lo, depth), label).ok()
        })
        .collect()
}

fn normalizing_sequences(s: &ScaleSet, cfg: &ExperimentConfig) -> Result<Vec<NormalizingSeq>> {
    let pool = default_pool(s, Vec::new());
    let from_pool = |i: usize| -> Result<NormalizingSeq> {
        let m = pool
            .get(i)
            .ok_or_else(|| Error::Precondition(format!("pool has {} members, asked for {i}", pool.len())))?;
        NormalizingSeq::new(m.terms().to_vec(), format!("pool:{i}"))
    };
    if cfg.normalizing.is_empty() {
        let mut out: Vec<NormalizingSeq> = (0..pool.len()).filter_map(|i| from_pool(i).ok()).collect();
        out.extend(random_decays(s, cfg.depth, cfg.trials, cfg.seed));
        return Ok(out);
    }
    cfg.normalizing
        .iter()
        .map(|d| {
            let (kind, arg) = d.split_once(':').unwrap_or((d.as_str(), ""));
            match kind {
                "pool" => from_pool(arg.parse().map_err(|_| Error::Precondition(format!("bad pool index in {d}")))?),
                "geometric" => NormalizingSeq::new(geometric_terms(&parse_rational(arg)?, cfg.depth)?, d.clone()),
                "decay" => NormalizingSeq::new(decay_terms(&parse_rational(arg)?, 0, cfg.depth), d.clone()),
                _ => Err(Error::Precondition(format!("unknown normalizing descriptor {d}"))),
            }
        })
        .collect()
}

fn run_one<O: MetricOracle>(
    oracle: &O,
    line: &SubsetOfLine,
    run_id: usize,
    r: &NormalizingSeq,
    params: &StabilityParams,
) -> RunRow {
    let mut row = RunRow {
        run_id,
        r_descriptor: r.label.clone(),
        diameter: None,
        class_count: None,
        diameter_distance_set: None,
        diameter_half: None,
        distance_set_bound_ok: true,
        status: "ok".into(),
    };
    if r.len() < MIN_TREND_DEPTH {
        row.status = format!("skipped: {} terms", r.len());
        return row;
    }
    match build_space(oracle, r, params) {
        Ok(sp) => {
            row.diameter = Some(sp.diameter);
            row.class_count = Some(sp.class_count());
        }
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    }
    match build_space(line, r, params) {
        Ok(sp) => row.diameter_distance_set = Some(sp.diameter),
        Err(e) => row.status = format!("error on distance set: {e}"),
    }
    let half: Vec<usize> = (0..r.len() / 2).collect();
    if half.len() >= MIN_TREND_DEPTH {
        if let Ok(rh) = NormalizingSeq::new(r.restrict(&half).terms().to_vec(), r.label.clone()) {
            row.diameter_half = build_space(oracle, &rh, params).ok().map(|sp| sp.diameter);
        }
    }
    if let (Some(dx), Some(ds)) = (row.diameter, row.diameter_distance_set) {
        row.distance_set_bound_ok = dx <= 2.0 * ds + 4.0 * params.tol;
    }
    row
}

/// Rung `j` is the point nearest at or above `j r_n`; it counts when its
/// stable limit lies in `[j, 2j]`.
fn ladder<O: MetricOracle>(
    oracle: &O,
    r: &NormalizingSeq,
    j_max: usize,
    from_bad_set: bool,
    params: &StabilityParams,
) -> Result<LadderReport> {
    let p = PointSeq::marked(oracle, r.len());
    let mut rungs = Vec::with_capacity(j_max);
    let mut members = Vec::new();
    for j in 1..=j_max {
        let jj = BigRational::from_integer((j as i64).into());
        let pts = r
            .terms()
            .iter()
            .map(|t| oracle.points_near(&t.scale(&jj)).swap_remove(0))
            .collect();
        let b = PointSeq::new(pts, format!("rung{j}"));
        let s = mutual_stability(oracle, &p, &b, r, params)?;
        let jf = j as f64;
        let hit = match (s.status, s.limit) {
            (StabilityStatus::Converged, Some(l)) if l >= jf - params.tol && l <= 2.0 * jf + params.tol => Some(l),
            _ => None,
        };
        if hit.is_some() {
            members.push((j, b));
        }
        rungs.push(hit);
    }
    let pool: Vec<_> = members.iter().map(|(_, b)| b.clone()).collect();
    let fam = saturate_family(oracle, vec![p], &pool, r, params)?;
    // members[k] is admitted at family index k + 1 when present
    let rung_of: Vec<usize> = fam.members[1..]
        .iter()
        .map(|m| members.iter().find(|(_, b)| b.label == m.label).map(|(j, _)| *j).unwrap_or(usize::MAX))
        .collect();
    let diameters = (1..=j_max)
        .map(|j| {
            let keep: Vec<usize> = std::iter::once(0)
                .chain((0..rung_of.len()).filter(|&k| rung_of[k] <= j).map(|k| k + 1))
                .collect();
            keep.iter()
                .flat_map(|&a| keep.iter().map(move |&b| (a, b)))
                .map(|(a, b)| fam.dtilde[a][b])
                .fold(0.0, f64::max)
        })
        .collect::<Vec<f64>>();
    let unbounded = rungs.iter().all(Option::is_some)
        && diameters.last().is_some_and(|&d| d >= j_max as f64 - 4.0 * params.tol);
    Ok(LadderReport {
        r_descriptor: r.label.clone(),
        from_bad_set,
        rungs,
        diameters,
        unbounded,
    })
}

fn best_ladder<O: MetricOracle>(
    oracle: &O,
    s: &ScaleSet,
    bad: Option<&[usize]>,
    runs: &[NormalizingSeq],
    cfg: &ExperimentConfig,
    params: &StabilityParams,
) -> Result<Option<LadderReport>> {
    let mut best: Option<LadderReport> = None;
    if let Some(bad) = bad {
        let terms: Vec<LogValue> = bad.iter().filter_map(|&i| s.points().get(i - 1).cloned()).collect();
        if terms.len() >= MIN_TREND_DEPTH {
            if let Ok(r) = NormalizingSeq::new(terms, "bad-set") {
                let rep = ladder(oracle, &r, cfg.ladder_max, true, params)?;
                if rep.unbounded {
                    return Ok(Some(rep));
                }
                best = Some(rep);
            }
        }
    }
    for r in runs.iter().filter(|r| r.len() >= MIN_TREND_DEPTH) {
        let rep = ladder(oracle, r, cfg.ladder_max, false, params)?;
        if rep.unbounded {
            return Ok(Some(rep));
        }
        if best.as_ref().is_none_or(|b| !b.from_bad_set && rep.achieved() > b.achieved()) {
            best = Some(rep);
        }
    }
    Ok(best)
}

/// Compare w-porosity of `S_p(X)` with the boundedness of pretangent spaces
/// of `X` built along normalizing sequences drawn from `S_p(X)`.
pub fn boundedness_experiment<O: MetricOracle>(oracle: &O, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let params = cfg.stability()?;
    spot_check_axioms(oracle, &oracle.enumerate(cfg.pool_budget.min(AXIOM_SAMPLE)))?;
    let (s, warning) = distance_set(oracle, cfg.pool_budget)?;
    let line = SubsetOfLine::new(s.clone());
    let pparams = PorosityParams {
        window_fraction: params.window_fraction,
        ..PorosityParams::default()
    };
    let w = w_porosity(&s, &pparams)?;
    let seqs = normalizing_sequences(&s, cfg)?;
    let runs: Vec<RunRow> = seqs
        .par_iter()
        .enumerate()
        .map(|(i, r)| run_one(oracle, &line, i, r, &params))
        .collect();

    let bad = (w.status == Status::Fails).then(|| w.counterexample.clone()).flatten();
    let lad = best_ladder(oracle, &s, bad.as_deref(), &seqs, cfg, &params)?;

    let max_of = |f: fn(&RunRow) -> Option<f64>| runs.iter().filter_map(f).fold(0.0, f64::max);
    let max_diameter = max_of(|r| r.diameter);
    let max_diameter_half = max_of(|r| r.diameter_half);
    let diameter_trend = if max_diameter <= max_diameter_half * (1.0 + 1e-9) + 4.0 * params.tol {
        DiameterTrend::Stable
    } else {
        DiameterTrend::Growing
    };
    let max_class_count = runs.iter().filter_map(|r| r.class_count).max().unwrap_or(0);
    let distance_set_bound_violations = runs.iter().filter(|r| !r.distance_set_bound_ok).count();

    let mut tangent_evidence = None;
    if diameter_trend == DiameterTrend::Stable {
        for r in seqs.iter().filter(|r| r.len() >= MIN_TREND_DEPTH).take(PROBE_RUNS) {
            let (fam, pool) = build_family(oracle, r, &params)?;
            if tangency_probe(oracle, &fam, &pool, PROBE_TRIALS, &params, cfg.seed)?.violation.is_none() {
                tangent_evidence = Some(r.label.clone());
                break;
            }
        }
    }

    let unbounded = lad.as_ref().is_some_and(|l| l.unbounded);
    let agreement = match w.status {
        Status::Holds if unbounded => Agreement::Disagree,
        Status::Holds if diameter_trend == DiameterTrend::Stable => Agreement::Agree,
        Status::Fails if unbounded => Agreement::Agree,
        _ => Agreement::InconclusiveCompatible,
    };

    Ok(ExperimentReport {
        space: oracle.label(),
        config: cfg.clone(),
        distance_set_depth: s.depth(),
        warnings: warning.into_iter().collect(),
        w_status: w.status,
        w_counterexample: w.counterexample,
        runs,
        ladder: lad,
        max_diameter,
        max_diameter_half,
        diameter_trend,
        max_class_count,
        distance_set_bound_violations,
        tangent_evidence,
        agreement,
    })
}
