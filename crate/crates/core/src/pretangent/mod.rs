//! Finite-depth simulation of pretangent spaces: rescaled distances along
//! sequences, self-stable families saturated over finite candidate pools, and
//! their metric identification.

mod experiment;
pub mod oracles;
mod refine;

use std::fmt::Debug;

pub use experiment::{
    boundedness_experiment, candidate_exponents, scale_matched_candidates, CANDIDATE_FLOOR_LOG2, Agreement, DiameterTrend, ExperimentConfig, ExperimentReport,
    LadderReport, RunRow,
};
pub use refine::{diagonal_refine, REFINE_BUDGET, subsequence_invariance_check, tangency_probe, InvarianceReport, TangencyReport, Violation};

use crate::error::{Error, Result};
use crate::scaleset::{tail_start, LogValue, Magnitude, ScaleSet};

/// A pointed metric space presented through distances.
///
/// Implementations must be safe for concurrent read-only use.
pub trait MetricOracle: Sync {
    type Point: Clone + PartialEq + Debug + Send + Sync;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Magnitude;

    fn marked_point(&self) -> Self::Point;

    /// Points whose distance to the marked point is close to `scale`. The
    /// length of the returned list is the same for every scale.
    fn points_near(&self, scale: &LogValue) -> Vec<Self::Point>;

    /// Up to `budget` points other than the marked one.
    fn enumerate(&self, budget: usize) -> Vec<Self::Point>;

    fn label(&self) -> String;
}

/// A truncated sequence of points, indexed from 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSeq<P> {
    pub points: Vec<P>,
    pub label: String,
}

impl<P: Clone> PointSeq<P> {
    pub fn new(points: Vec<P>, label: impl Into<String>) -> Self {
        PointSeq {
            points,
            label: label.into(),
        }
    }

    /// The constant sequence at the marked point.
    pub fn marked<O: MetricOracle<Point = P>>(oracle: &O, depth: usize) -> Self {
        PointSeq::new(vec![oracle.marked_point(); depth], "p~")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Restriction to the given 0-based indices.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        PointSeq::new(idx.iter().map(|&i| self.points[i].clone()).collect(), self.label.clone())
    }
}

/// A positive sequence whose tail decreases toward 0.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizingSeq {
    terms: Vec<LogValue>,
    pub label: String,
}

impl NormalizingSeq {
    pub fn new(terms: Vec<LogValue>, label: impl Into<String>) -> Result<Self> {
        if terms.len() < 2 {
            return Err(Error::Precondition("normalizing sequence needs at least 2 terms".into()));
        }
        let start = tail_start(terms.len(), 0.5);
        let (first, second) = terms.split_at(start);
        let mean = |xs: &[LogValue]| xs.iter().map(LogValue::log2_f64).sum::<f64>() / xs.len() as f64;
        if !first.is_empty() && mean(second) >= mean(first) {
            return Err(Error::Precondition("normalizing sequence does not decrease toward 0".into()));
        }
        Ok(NormalizingSeq {
            terms,
            label: label.into(),
        })
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

    /// Restriction to the given 0-based indices (not re-checked for decay).
    pub fn restrict(&self, idx: &[usize]) -> Self {
        NormalizingSeq {
            terms: idx.iter().map(|&i| self.terms[i].clone()).collect(),
            label: self.label.clone(),
        }
    }
}

/// Convergence tolerance and window for rescaled distances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityParams {
    pub tol: f64,
    pub window_fraction: f64,
}

impl Default for StabilityParams {
    fn default() -> Self {
        StabilityParams {
            tol: (-20f64).exp2(),
            window_fraction: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityStatus {
    Converged,
    Diverged,
    Oscillating,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityResult {
    pub status: StabilityStatus,
    /// Tail mean of `d(x_n, y_n) / r_n` when converged.
    pub limit: Option<f64>,
    /// `max - min` of the quotient over the tail window.
    pub window_spread: f64,
}

/// Last-quarter over first-quarter growth that counts as divergence.
const DIVERGENCE_GROWTH: f64 = 1.125;

fn classify(q: &[f64], tol: f64) -> StabilityResult {
    let max = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = q.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = max - min;
    if !max.is_finite() {
        return StabilityResult {
            status: StabilityStatus::Diverged,
            limit: None,
            window_spread: f64::INFINITY,
        };
    }
    if spread <= tol {
        return StabilityResult {
            status: StabilityStatus::Converged,
            limit: Some(q.iter().sum::<f64>() / q.len() as f64),
            window_spread: spread,
        };
    }
    let quarters: Vec<f64> = (0..4)
        .filter_map(|i| {
            let part = &q[i * q.len() / 4..(i + 1) * q.len() / 4];
            (!part.is_empty()).then(|| part.iter().sum::<f64>() / part.len() as f64)
        })
        .collect();
    let growing = quarters.len() == 4
        && quarters.windows(2).all(|w| w[1] > w[0])
        && quarters[3] >= DIVERGENCE_GROWTH * quarters[0];
    StabilityResult {
        status: if growing {
            StabilityStatus::Diverged
        } else {
            StabilityStatus::Oscillating
        },
        limit: None,
        window_spread: spread,
    }
}

fn quotients<O: MetricOracle>(
    oracle: &O,
    x: &[O::Point],
    y: &[O::Point],
    r: &[LogValue],
    from: usize,
) -> Vec<f64> {
    (from..r.len())
        .map(|n| oracle.distance(&x[n], &y[n]).ratio_f64(&r[n]))
        .collect()
}

/// Judge whether `d(x_n, y_n) / r_n` has a finite limit on the tail window.
pub fn mutual_stability<O: MetricOracle>(
    oracle: &O,
    x: &PointSeq<O::Point>,
    y: &PointSeq<O::Point>,
    r: &NormalizingSeq,
    params: &StabilityParams,
) -> Result<StabilityResult> {
    if x.len() != r.len() || y.len() != r.len() {
        return Err(Error::Precondition(format!(
            "sequence lengths {} and {} differ from normalizing length {}",
            x.len(),
            y.len(),
            r.len()
        )));
    }
    let from = tail_start(r.len(), params.window_fraction);
    Ok(classify(&quotients(oracle, &x.points, &y.points, r.terms(), from), params.tol))
}

/// Pairwise mutually stable sequences, member 0 being the marked sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfStableFamily<P> {
    pub members: Vec<PointSeq<P>>,
    /// Limit estimates of the rescaled distances.
    pub dtilde: Vec<Vec<f64>>,
    pub r: NormalizingSeq,
}

impl<P: Clone> SelfStableFamily<P> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Admit pool members in order whenever they are stable with every member so
/// far. The seed must contain the marked sequence.
pub fn saturate_family<O: MetricOracle>(
    oracle: &O,
    seed: Vec<PointSeq<O::Point>>,
    pool: &[PointSeq<O::Point>],
    r: &NormalizingSeq,
    params: &StabilityParams,
) -> Result<SelfStableFamily<O::Point>> {
    let p = oracle.marked_point();
    let Some(pos) = seed.iter().position(|s| s.points.iter().all(|x| x == &p)) else {
        return Err(Error::Precondition("seed must contain the marked sequence".into()));
    };
    let mut members = seed;
    members.swap(0, pos);
    let mut dtilde: Vec<Vec<f64>> = vec![vec![0.0; members.len()]; members.len()];
    for i in 0..members.len() {
        for j in 0..i {
            let s = mutual_stability(oracle, &members[i], &members[j], r, params)?;
            let lim = s.limit.ok_or(Error::SeedNotSelfStable(j, i))?;
            dtilde[i][j] = lim;
            dtilde[j][i] = lim;
        }
    }
    for cand in pool {
        let mut row = Vec::with_capacity(members.len());
        for m in &members {
            match mutual_stability(oracle, cand, m, r, params)?.limit {
                Some(l) => row.push(l),
                None => break,
            }
        }
        if row.len() == members.len() {
            for (i, l) in row.iter().enumerate() {
                dtilde[i].push(*l);
            }
            row.push(0.0);
            dtilde.push(row);
            members.push(cand.clone());
        }
    }
    Ok(SelfStableFamily {
        members,
        dtilde,
        r: r.clone(),
    })
}

/// The metric identification of a family: classes of members at
/// pseudo-distance `<= tol`, with distances between class representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct PretangentSpace {
    /// Member indices per class, each sorted, classes ordered by first member.
    pub classes: Vec<Vec<usize>>,
    pub rho: Vec<Vec<f64>>,
    pub marked_class: usize,
    pub diameter: f64,
}

impl PretangentSpace {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut root = i;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = i;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

pub fn metric_identification<P: Clone>(family: &SelfStableFamily<P>, tol: f64) -> Result<PretangentSpace> {
    identify(&family.dtilde, tol)
}

pub(crate) fn identify(d: &[Vec<f64>], tol: f64) -> Result<PretangentSpace> {
    let n = d.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for (i, row) in d.iter().enumerate() {
        for (j, &dij) in row.iter().enumerate().take(i) {
            if dij <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if root == i {
            class_of[i] = classes.len();
            classes.push(vec![i]);
        } else {
            class_of[i] = class_of[root];
            classes[class_of[root]].push(i);
        }
    }
    let k = classes.len();
    let mut rho = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in 0..k {
            let (ra, rb) = (classes[a][0], classes[b][0]);
            let base = if a == b { 0.0 } else { d[ra][rb] };
            for &i in &classes[a] {
                for &j in &classes[b] {
                    if (d[i][j] - base).abs() > 2.0 * tol {
                        return Err(Error::ToleranceTooCoarse(a, b));
                    }
                }
            }
            rho[a][b] = base;
        }
    }
    let diameter = rho.iter().flatten().cloned().fold(0.0, f64::max);
    Ok(PretangentSpace {
        marked_class: class_of.first().copied().unwrap_or(0),
        classes,
        rho,
        diameter,
    })
}

/// Relative slack for the triangle inequality spot check.
const TRIANGLE_SLACK_LOG2: i64 = -40;

/// Check `d(x,x) = 0`, symmetry and all three triangle inequalities on
/// consecutive triples of `sample` and on triples through the marked point.
pub fn spot_check_axioms<O: MetricOracle>(oracle: &O, sample: &[O::Point]) -> Result<()> {
    let p = oracle.marked_point();
    let slack = LogValue::one().linear_sum(&LogValue::pow2_int(TRIANGLE_SLACK_LOG2), 64);
    let le = |a: &Magnitude, b: &Magnitude, c: &Magnitude| -> bool {
        match Magnitude::sum(b, c, 64) {
            Magnitude::Zero => *a == Magnitude::Zero,
            Magnitude::Positive(s) => *a <= Magnitude::Positive(s.mul(&slack)),
        }
    };
    let check = |x: &O::Point, y: &O::Point, z: &O::Point| -> Result<()> {
        for (a, b) in [(x, y), (y, z), (x, z)] {
            if oracle.distance(a, a) != Magnitude::Zero {
                return Err(Error::MetricAxiom(format!("d(x,x) != 0 at {a:?}")));
            }
            if oracle.distance(a, b) != oracle.distance(b, a) {
                return Err(Error::MetricAxiom(format!("asymmetric at {a:?}, {b:?}")));
            }
        }
        let (xy, yz, xz) = (oracle.distance(x, y), oracle.distance(y, z), oracle.distance(x, z));
        if !(le(&xz, &xy, &yz) && le(&xy, &xz, &yz) && le(&yz, &xy, &xz)) {
            return Err(Error::MetricAxiom(format!("triangle inequality fails on {x:?}, {y:?}, {z:?}")));
        }
        Ok(())
    };
    for w in sample.windows(2) {
        check(&p, &w[0], &w[1])?;
    }
    for w in sample.windows(3) {
        check(&w[0], &w[1], &w[2])?;
    }
    Ok(())
}

/// `S_p(X)` from up to `budget` sampled points, with a warning when the
/// sampler runs out early.
pub fn distance_set<O: MetricOracle>(oracle: &O, budget: usize) -> Result<(ScaleSet, Option<String>)> {
    if budget == 0 {
        return Err(Error::EmptySample);
    }
    let p = oracle.marked_point();
    let sample = oracle.enumerate(budget);
    let dists: Vec<LogValue> = sample
        .iter()
        .filter_map(|x| oracle.distance(x, &p).as_log_value().cloned())
        .collect();
    if dists.is_empty() {
        return Err(Error::EmptySample);
    }
    let set = ScaleSet::new(dists, true)?;
    let warning = (set.depth() < budget).then(|| {
        format!(
            "sampler produced {} distinct distances, below the budget of {budget}",
            set.depth()
        )
    });
    Ok((set, warning))
}
