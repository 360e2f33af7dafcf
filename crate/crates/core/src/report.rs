//! Report artifacts: verdict JSON, score tables, run manifests.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::porosity::{PorosityVerdict, ScoreRow, Status};
use crate::scaleset::{format_rational, LogValue};

/// Largest `|exponent|` printed as a plain rational.
const PLAIN_EXPONENT_LIMIT: i64 = 256;

/// Exact string for a value: `"p/q"` when it is a rational of moderate size,
/// `"m*2^(e)"` otherwise.
pub fn value_string(v: &LogValue) -> String {
    let e = v.exponent();
    if e.is_integer() {
        if let Some(ei) = e.to_integer().to_i64().filter(|x| x.abs() <= PLAIN_EXPONENT_LIMIT) {
            let two = num_rational::BigRational::from_integer(2.into());
            let p = if ei >= 0 {
                num_traits::pow(two, ei as usize)
            } else {
                num_traits::pow(two, (-ei) as usize).recip()
            };
            return format_rational(&(v.mantissa() * p));
        }
    }
    format!("{}*2^({})", format_rational(v.mantissa()), format_rational(e))
}

/// `n,log2_tau_n,best_k,log2_K_star`.
pub fn scores_csv(rows: &[ScoreRow]) -> String {
    let mut out = String::from("n,log2_tau_n,best_k,log2_K_star\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            r.tau.log2_repr(),
            r.k.as_ref().map(value_string).unwrap_or_default(),
            r.k_star.log2_repr()
        ));
    }
    out
}

/// One criterion's verdict as written to disk.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub criterion: String,
    pub set: String,
    pub status: Status,
    pub k: Option<String>,
    pub c1: Option<String>,
    pub c2: Option<String>,
    /// `[log2 a_n, log2 b_n]` per witness gap.
    pub witness_gaps: Vec<[String; 2]>,
    pub counterexample: Option<Vec<usize>>,
    pub diagnostics: BTreeMap<String, String>,
    pub scores_csv: Option<String>,
}

impl VerdictReport {
    pub fn new(criterion: &str, set: &str, v: &PorosityVerdict, scores_path: Option<String>) -> Self {
        let w = v.witness.as_ref();
        VerdictReport {
            criterion: criterion.into(),
            set: set.into(),
            status: v.status,
            k: w.and_then(|w| w.k.as_ref()).map(value_string),
            c1: w.and_then(|w| w.constants.as_ref()).map(|c| format_rational(&c.0)),
            c2: w.and_then(|w| w.constants.as_ref()).map(|c| format_rational(&c.1)),
            witness_gaps: w
                .map(|w| w.gaps.iter().map(|g| [g.a.log2_repr(), g.b.log2_repr()]).collect())
                .unwrap_or_default(),
            counterexample: v.counterexample.clone(),
            diagnostics: v.diagnostics.clone(),
            scores_csv: scores_path,
        }
    }
}

/// Provenance of a run: enough to rerun it and check its inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    /// SHA-256 over the command, seed, version and inputs.
    pub config_digest: String,
    pub seed: u64,
    pub tool_version: String,
    pub inputs: Vec<String>,
    /// Paths relative to the output directory.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: Vec<String>, seed: u64, inputs: Vec<String>, outputs: Vec<String>) -> Self {
        let tool_version = env!("CARGO_PKG_VERSION").to_string();
        let config_digest = Self::digest(&command, seed, &tool_version, &inputs);
        RunManifest {
            command,
            config_digest,
            seed,
            tool_version,
            inputs,
            outputs,
        }
    }

    fn digest(command: &[String], seed: u64, version: &str, inputs: &[String]) -> String {
        let mut h = Sha256::new();
        for part in command.iter().chain(inputs) {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        h.update(seed.to_le_bytes());
        h.update(version.as_bytes());
        hex::encode(h.finalize())
    }

    /// The stored digest matches a recomputation.
    pub fn verify(&self) -> bool {
        Self::digest(&self.command, self.seed, &self.tool_version, &self.inputs) == self.config_digest
    }
}

/// Write each `(relative path, contents)` under `dir`.
pub fn write_files(dir: &Path, files: &[(String, String)]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    for (name, body) in files {
        std::fs::write(dir.join(name), body).map_err(|e| Error::Io(format!("{name}: {e}")))?;
    }
    Ok(())
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}
