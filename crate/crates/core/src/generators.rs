//! Reproducible builders for the standard test sets: geometric ladders,
//! factorial and squared-exponential ladders, the two-ladder set built from
//! `tau_{n+1} = 2^(-n^2) tau_n` with a partition of the indices, and seeded
//! random ladders.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scaleset::{parse_rational, LogValue, ScaleSet};

/// Largest supported depth for the two-ladder construction.
pub const EXAMPLE_DEPTH_CAP: usize = 60;

/// A partition of the positive integers into classes `N_1, N_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[derive(Default)]
pub enum PartitionSpec {
    /// `N_k` = odd multiples of `2^(k-1)`; so `nu(k) = 2^(k-1)` and
    /// `m(n) = 1 + v_2(n)`.
    #[default]
    DyadicClasses,
    /// Explicit classes, in order `N_1, N_2, ...` (1-based indices).
    Explicit { classes: Vec<Vec<usize>> },
}


impl PartitionSpec {
    /// Class index `m(n)` (1-based) of `n`.
    pub fn class_of(&self, n: usize) -> Option<usize> {
        match self {
            PartitionSpec::DyadicClasses => (n > 0).then(|| 1 + n.trailing_zeros() as usize),
            PartitionSpec::Explicit { classes } => {
                classes.iter().position(|c| c.contains(&n)).map(|k| k + 1)
            }
        }
    }

    /// `nu(k) = min N_k`.
    pub fn nu(&self, k: usize) -> Option<usize> {
        match self {
            PartitionSpec::DyadicClasses => (1..64).contains(&k).then(|| 1usize << (k - 1)),
            PartitionSpec::Explicit { classes } => {
                classes.get(k.checked_sub(1)?)?.iter().copied().min()
            }
        }
    }

    /// Checks disjointness, coverage of `1..=depth` and `nu(1) < nu(2) < ...`.
    pub fn validate(&self, depth: usize) -> Result<()> {
        let PartitionSpec::Explicit { classes } = self else {
            return Ok(());
        };
        let mut owner = BTreeMap::new();
        for (k, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidPartition(format!("class {} is empty", k + 1)));
            }
            for &n in class {
                if n == 0 {
                    return Err(Error::InvalidPartition("index 0 is not a positive integer".into()));
                }
                if let Some(prev) = owner.insert(n, k + 1) {
                    return Err(Error::InvalidPartition(format!(
                        "index {n} is in classes {prev} and {}",
                        k + 1
                    )));
                }
            }
        }
        if let Some(n) = (1..=depth).find(|n| !owner.contains_key(n)) {
            return Err(Error::InvalidPartition(format!("index {n} is not covered")));
        }
        let nus: Vec<usize> = (1..=classes.len()).filter_map(|k| self.nu(k)).collect();
        if let Some(w) = nus.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "class minima must increase, got {} then {}",
                w[0], w[1]
            )));
        }
        Ok(())
    }
}

/// `q^0, q^1, ..., q^(depth-1)` together with 0.
pub fn gen_geometric(q: &BigRational, depth: usize) -> Result<ScaleSet> {
    if !q.is_positive() || q >= &BigRational::one() {
        return Err(Error::Precondition(format!("geometric ratio must lie in (0,1), got {q}")));
    }
    if depth == 0 {
        return Err(Error::EmptySet);
    }
    let step = LogValue::from_ratio(q)?;
    let mut points = Vec::with_capacity(depth);
    let mut cur = LogValue::one();
    for _ in 0..depth {
        points.push(cur.clone());
        cur = cur.mul(&step);
    }
    ScaleSet::new(points, true)
}

/// `2^(-n!)` for `n = 1..=depth`, together with 0.
pub fn gen_factorial(depth: usize) -> Result<ScaleSet> {
    if depth < 2 {
        return Err(Error::Precondition("factorial ladder needs depth >= 2".into()));
    }
    let mut fact = BigInt::one();
    let mut points = Vec::with_capacity(depth);
    for n in 1..=depth {
        fact *= BigInt::from(n);
        points.push(LogValue::pow2(BigRational::from_integer(-fact.clone())));
    }
    ScaleSet::new(points, true)
}

/// `2^(-n^2)` for `n = 1..=depth`, together with 0.
pub fn gen_squared_exponential(depth: usize) -> Result<ScaleSet> {
    if depth == 0 {
        return Err(Error::EmptySet);
    }
    let points = (1..=depth as i64).map(|n| LogValue::pow2_int(-n * n)).collect();
    ScaleSet::new(points, true)
}

/// One row of the two-ladder trace table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub n: usize,
    pub log2_tau: BigInt,
    pub class: usize,
    pub nu: usize,
    pub log2_tau_star: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceChecks {
    /// `n >= nu(m(n)) >= m(n)` for every row.
    pub class_bounds: bool,
    /// `tau_{n+1} <= 2^-n tau_n <= tau*_n < tau_n` for every row.
    pub ladder_chain: bool,
    /// `log2(tau_{n+1} / tau*_n) <= n - n^2`, strictly decreasing in `n`.
    pub gap_ratio_decreasing: bool,
    pub failures: Vec<String>,
}

impl TraceChecks {
    pub fn all_pass(&self) -> bool {
        self.class_bounds && self.ladder_chain && self.gap_ratio_decreasing
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleTrace {
    pub rows: Vec<TraceRow>,
}

/// `log2 tau_n = -(n-1) n (2n-1) / 6`.
pub fn log2_tau(n: usize) -> BigInt {
    let n = BigInt::from(n);
    let one = BigInt::one();
    -((&n - &one) * &n * (BigInt::from(2) * &n - &one)) / BigInt::from(6)
}

impl ExampleTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,log2_tau,class,nu,log2_tau_star\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.n, r.log2_tau, r.class, r.nu, r.log2_tau_star);
        }
        out
    }

    /// The sequence `tau_1, tau_2, ...`.
    pub fn tau(&self) -> Vec<LogValue> {
        self.rows
            .iter()
            .map(|r| LogValue::pow2(BigRational::from_integer(r.log2_tau.clone())))
            .collect()
    }

    /// The sequence `tau*_1, tau*_2, ...`.
    pub fn tau_star(&self) -> Vec<LogValue> {
        self.rows
            .iter()
            .map(|r| LogValue::pow2(BigRational::from_integer(r.log2_tau_star.clone())))
            .collect()
    }

    pub fn validate(&self) -> TraceChecks {
        let mut failures = Vec::new();
        let mut class_bounds = true;
        let mut ladder_chain = true;
        let mut gap_ratio_decreasing = true;
        let mut prev_gap: Option<BigInt> = None;
        for r in &self.rows {
            let n = r.n;
            if !(n >= r.nu && r.nu >= r.class) {
                class_bounds = false;
                failures.push(format!("n={n}: need n >= nu >= class, got nu={} class={}", r.nu, r.class));
            }
            let next = log2_tau(n + 1);
            let nb = BigInt::from(n);
            let scaled = &r.log2_tau - &nb;
            if !(next <= scaled && scaled <= r.log2_tau_star && r.log2_tau_star < r.log2_tau) {
                ladder_chain = false;
                failures.push(format!("n={n}: ladder chain broken"));
            }
            let gap = &next - &r.log2_tau_star;
            if gap > &nb - &nb * &nb {
                gap_ratio_decreasing = false;
                failures.push(format!("n={n}: log2(tau_(n+1)/tau*_n) = {gap} exceeds n - n^2"));
            }
            if let Some(p) = &prev_gap {
                if &gap >= p {
                    gap_ratio_decreasing = false;
                    failures.push(format!("n={n}: gap ratio not decreasing"));
                }
            }
            prev_gap = Some(gap);
        }
        TraceChecks {
            class_bounds,
            ladder_chain,
            gap_ratio_decreasing,
            failures,
        }
    }
}

/// `E = {tau_n} u {tau*_n} u {0}` with `tau_1 = 1`, `tau_{n+1} = 2^(-n^2) tau_n`
/// and `tau*_n = 2^(-nu(m(n))) tau_n`.
pub fn gen_example_2_8(depth: usize, partition: &PartitionSpec) -> Result<(ScaleSet, ExampleTrace)> {
    if depth == 0 || depth > EXAMPLE_DEPTH_CAP {
        return Err(Error::Precondition(format!(
            "two-ladder depth must be in 1..={EXAMPLE_DEPTH_CAP}, got {depth}"
        )));
    }
    partition.validate(depth)?;
    let mut rows = Vec::with_capacity(depth);
    for n in 1..=depth {
        let class = partition
            .class_of(n)
            .ok_or_else(|| Error::InvalidPartition(format!("index {n} is not covered")))?;
        let nu = partition
            .nu(class)
            .ok_or_else(|| Error::InvalidPartition(format!("class {class} has no minimum")))?;
        let log2_tau = log2_tau(n);
        let log2_tau_star = &log2_tau - BigInt::from(nu);
        rows.push(TraceRow {
            n,
            log2_tau,
            class,
            nu,
            log2_tau_star,
        });
    }
    let trace = ExampleTrace { rows };
    let mut points = trace.tau();
    points.extend(trace.tau_star());
    Ok((ScaleSet::new(points, true)?, trace))
}

/// A seeded random ladder. The seed picks one of three gap regimes:
/// bounded gaps, gaps growing with the index, or a mix of both.
pub fn gen_random_ladder(seed: u64, depth: usize) -> Result<ScaleSet> {
    if depth == 0 {
        return Err(Error::EmptySet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let regime = rng.gen_range(0..3u8);
    let mut e: i64 = 0;
    let mut points = Vec::with_capacity(depth);
    for i in 0..depth as i64 {
        points.push(LogValue::pow2_int(e));
        let gap = match regime {
            0 => rng.gen_range(1..=4),
            1 => rng.gen_range(1..=4) + 2 * i,
            _ => {
                if rng.gen_bool(0.5) {
                    rng.gen_range(1..=3)
                } else {
                    rng.gen_range(1..=3) + 2 * i
                }
            }
        };
        e -= gap;
    }
    ScaleSet::new(points, true)
}

fn default_true() -> bool {
    true
}

/// JSON set descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SetDescriptor {
    Explicit {
        log2_points: Vec<String>,
        /// Linear-scale points as rationals, merged with `log2_points`.
        values: Vec<String>,
        contains_zero: bool,
    },
    Geometric {
        q: String,
        depth: usize,
    },
    Factorial {
        depth: usize,
    },
    SquaredExponential {
        depth: usize,
    },
    #[serde(rename = "example-2-8")]
    Example28 {
        depth: usize,
        partition: PartitionSpec,
    },
    RandomLadder {
        seed: u64,
        depth: usize,
    },
}

impl SetDescriptor {
    /// Parse a JSON descriptor; schema errors carry the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema {
            path: ".".into(),
            message: e.to_string(),
        })?;
        let mut obj = match value {
            serde_json::Value::Object(m) => m,
            _ => {
                return Err(Error::Schema {
                    path: ".".into(),
                    message: "expected an object".into(),
                })
            }
        };
        let kind = match obj.remove("kind") {
            Some(serde_json::Value::String(k)) => k,
            _ => {
                return Err(Error::Schema {
                    path: "kind".into(),
                    message: "missing or non-string `kind`".into(),
                })
            }
        };
        let body = serde_json::Value::Object(obj);
        let d = match kind.as_str() {
            "explicit" => {
                let b: ExplicitBody = fields(body)?;
                SetDescriptor::Explicit {
                    log2_points: b.log2_points,
                    values: b.values,
                    contains_zero: b.contains_zero,
                }
            }
            "geometric" => {
                let b: GeometricBody = fields(body)?;
                SetDescriptor::Geometric { q: b.q, depth: b.depth }
            }
            "factorial" => SetDescriptor::Factorial {
                depth: fields::<DepthBody>(body)?.depth,
            },
            "squared-exponential" => SetDescriptor::SquaredExponential {
                depth: fields::<DepthBody>(body)?.depth,
            },
            "example-2-8" => {
                let b: ExampleBody = fields(body)?;
                SetDescriptor::Example28 {
                    depth: b.depth,
                    partition: b.partition,
                }
            }
            "random-ladder" => {
                let b: LadderBody = fields(body)?;
                SetDescriptor::RandomLadder {
                    seed: b.seed,
                    depth: b.depth,
                }
            }
            other => {
                return Err(Error::Schema {
                    path: "kind".into(),
                    message: format!("unknown set kind `{other}`"),
                })
            }
        };
        Ok(d)
    }

    /// Parse the short forms `geometric:1/2[:depth]`, `factorial[:depth]`,
    /// `squared-exponential[:depth]`, `example-2-8[:depth]`,
    /// `random-ladder:seed[:depth]`, or inline JSON.
    pub fn parse_short(s: &str, default_depth: usize) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            return Self::from_json(t);
        }
        let parts: Vec<&str> = t.split(':').collect();
        let schema = |m: &str| Error::Schema {
            path: "--set".into(),
            message: m.to_string(),
        };
        let depth_at = |i: usize| -> Result<usize> {
            match parts.get(i) {
                None => Ok(default_depth),
                Some(d) => d.parse().map_err(|_| schema(&format!("bad depth `{d}`"))),
            }
        };
        let d = match parts[0] {
            "geometric" => {
                let q = parts.get(1).ok_or_else(|| schema("geometric needs a ratio"))?;
                parse_rational(q)?;
                SetDescriptor::Geometric {
                    q: q.to_string(),
                    depth: depth_at(2)?,
                }
            }
            "factorial" => SetDescriptor::Factorial { depth: depth_at(1)? },
            "squared-exponential" => SetDescriptor::SquaredExponential { depth: depth_at(1)? },
            "example-2-8" => SetDescriptor::Example28 {
                depth: depth_at(1)?,
                partition: PartitionSpec::DyadicClasses,
            },
            "random-ladder" => {
                let seed = parts
                    .get(1)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| schema("random-ladder needs an integer seed"))?;
                SetDescriptor::RandomLadder {
                    seed,
                    depth: depth_at(2)?,
                }
            }
            other => return Err(schema(&format!("unknown set kind `{other}`"))),
        };
        if parts.len() > 3 {
            return Err(schema("too many `:` fields"));
        }
        Ok(d)
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        match self {
            SetDescriptor::Explicit { log2_points, values, .. } => {
                format!("explicit({})", log2_points.len() + values.len())
            }
            SetDescriptor::Geometric { q, depth } => format!("geometric:{q}:{depth}"),
            SetDescriptor::Factorial { depth } => format!("factorial:{depth}"),
            SetDescriptor::SquaredExponential { depth } => format!("squared-exponential:{depth}"),
            SetDescriptor::Example28 { depth, .. } => format!("example-2-8:{depth}"),
            SetDescriptor::RandomLadder { seed, depth } => format!("random-ladder:{seed}:{depth}"),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitBody {
    #[serde(default)]
    log2_points: Vec<String>,
    #[serde(default)]
    values: Vec<String>,
    #[serde(default = "default_true")]
    contains_zero: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometricBody {
    q: String,
    depth: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DepthBody {
    depth: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExampleBody {
    depth: usize,
    #[serde(default)]
    partition: PartitionSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LadderBody {
    seed: u64,
    depth: usize,
}

pub(crate) fn fields<T: serde::de::DeserializeOwned>(body: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(body).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Build the set a descriptor describes.
pub fn gen_from_descriptor(desc: &SetDescriptor) -> Result<ScaleSet> {
    match desc {
        SetDescriptor::Explicit {
            log2_points,
            values,
            contains_zero,
        } => {
            let mut pts = Vec::new();
            for (i, s) in log2_points.iter().enumerate() {
                let e = parse_rational(s).map_err(|_| Error::Schema {
                    path: format!("log2_points[{i}]"),
                    message: format!("invalid rational `{s}`"),
                })?;
                pts.push(LogValue::pow2(e));
            }
            for (i, s) in values.iter().enumerate() {
                let v = parse_rational(s).ok().filter(|v| v.is_positive() && !v.is_zero());
                let v = v.ok_or_else(|| Error::Schema {
                    path: format!("values[{i}]"),
                    message: format!("expected a positive rational, got `{s}`"),
                })?;
                pts.push(LogValue::from_ratio(&v)?);
            }
            ScaleSet::new(pts, *contains_zero)
        }
        SetDescriptor::Geometric { q, depth } => {
            let q = parse_rational(q).map_err(|_| Error::Schema {
                path: "q".into(),
                message: format!("invalid rational `{q}`"),
            })?;
            gen_geometric(&q, *depth)
        }
        SetDescriptor::Factorial { depth } => gen_factorial(*depth),
        SetDescriptor::SquaredExponential { depth } => gen_squared_exponential(*depth),
        SetDescriptor::Example28 { depth, partition } => Ok(gen_example_2_8(*depth, partition)?.0),
        SetDescriptor::RandomLadder { seed, depth } => gen_random_ladder(*seed, *depth),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(e: i64) -> LogValue {
        LogValue::pow2_int(e)
    }

    #[test]
    fn geometric_examples() {
        let half = BigRational::new(1.into(), 2.into());
        let s = gen_geometric(&half, 3).unwrap();
        assert_eq!(s.points(), &[pw(0), pw(-1), pw(-2)]);
        assert!(s.contains_zero());
        let third = BigRational::new(1.into(), 3.into());
        let s = gen_geometric(&third, 2).unwrap();
        assert_eq!(s.points()[1], LogValue::from_ratio(&third).unwrap());
        assert!(gen_geometric(&BigRational::one(), 3).is_err());
    }

    #[test]
    fn factorial_examples() {
        let s = gen_factorial(3).unwrap();
        assert_eq!(s.points(), &[pw(-1), pw(-2), pw(-6)]);
        let s = gen_factorial(4).unwrap();
        assert!(s.contains(&pw(-24)));
        assert_eq!(pw(-6).div(&pw(-24)), pw(18));
    }

    #[test]
    fn two_ladder_examples() {
        let (set, trace) = gen_example_2_8(20, &PartitionSpec::DyadicClasses).unwrap();
        // unrolled recurrence: sum of i^2 for i < n
        let mut acc = 0i64;
        for r in &trace.rows {
            assert_eq!(r.log2_tau, BigInt::from(-acc));
            acc += (r.n * r.n) as i64;
        }
        assert_eq!(trace.rows[3].log2_tau, BigInt::from(-14));
        assert_eq!(trace.rows[2].log2_tau, BigInt::from(-5));
        assert_eq!(trace.rows[2].log2_tau_star, BigInt::from(-6));
        assert_eq!(trace.rows[0].log2_tau_star, BigInt::from(-1));
        assert!(trace.validate().all_pass(), "{:?}", trace.validate().failures);
        // tau*_1 == tau_2 is the only coincidence
        assert_eq!(set.depth(), 39);
    }

    #[test]
    fn trace_checks_hold_up_to_cap() {
        for depth in [4, 17, 33, EXAMPLE_DEPTH_CAP] {
            let (_, t) = gen_example_2_8(depth, &PartitionSpec::DyadicClasses).unwrap();
            assert!(t.validate().all_pass());
        }
        assert!(gen_example_2_8(61, &PartitionSpec::DyadicClasses).is_err());
    }

    #[test]
    fn explicit_partitions_are_validated() {
        let ok = PartitionSpec::Explicit {
            classes: vec![vec![1, 3, 5], vec![2, 6], vec![4]],
        };
        assert!(ok.validate(6).is_ok());
        assert_eq!(ok.class_of(6), Some(2));
        assert_eq!(ok.nu(3), Some(4));
        let unordered = PartitionSpec::Explicit {
            classes: vec![vec![2, 3], vec![1]],
        };
        assert!(matches!(unordered.validate(3), Err(Error::InvalidPartition(_))));
        let overlap = PartitionSpec::Explicit {
            classes: vec![vec![1, 2], vec![2, 3]],
        };
        assert!(overlap.validate(3).is_err());
        let gap = PartitionSpec::Explicit { classes: vec![vec![1, 2]] };
        assert!(gap.validate(3).is_err());
    }

    #[test]
    fn descriptors() {
        let d = SetDescriptor::from_json(r#"{"kind":"geometric","q":"1/2","depth":8}"#).unwrap();
        assert_eq!(gen_from_descriptor(&d).unwrap().depth(), 8);
        let d = SetDescriptor::from_json(r#"{"kind":"example-2-8","depth":20}"#).unwrap();
        assert_eq!(gen_from_descriptor(&d).unwrap().depth(), 39);
        let d = SetDescriptor::from_json(r#"{"kind":"explicit","log2_points":["0","-3"]}"#).unwrap();
        assert_eq!(gen_from_descriptor(&d).unwrap().depth(), 2);
        let err = SetDescriptor::from_json(r#"{"kind":"geometric","q":"1/2","depth":"x"}"#).unwrap_err();
        match err {
            Error::Schema { path, .. } => assert_eq!(path, "depth"),
            e => panic!("{e:?}"),
        }
        let d = SetDescriptor::from_json(r#"{"kind":"explicit","log2_points":["a"]}"#).unwrap();
        assert!(matches!(gen_from_descriptor(&d), Err(Error::Schema { .. })));
    }

    #[test]
    fn short_forms() {
        assert_eq!(
            SetDescriptor::parse_short("geometric:1/2", 40).unwrap(),
            SetDescriptor::Geometric { q: "1/2".into(), depth: 40 }
        );
        assert_eq!(
            SetDescriptor::parse_short("example-2-8:30", 40).unwrap(),
            SetDescriptor::Example28 { depth: 30, partition: PartitionSpec::DyadicClasses }
        );
        assert!(SetDescriptor::parse_short("cantor:3", 40).is_err());
        assert!(SetDescriptor::parse_short("geometric:x", 40).is_err());
    }

    #[test]
    fn generators_are_pure() {
        assert_eq!(gen_random_ladder(7, 30).unwrap(), gen_random_ladder(7, 30).unwrap());
        assert_eq!(gen_factorial(12).unwrap(), gen_factorial(12).unwrap());
    }
}
