//! Finite-depth subsets of `[0, inf)` accumulating at 0, stored in the log
//! domain, and their gap structure.

mod fixed;
mod logvalue;

pub use logvalue::{format_rational, parse_rational, LogValue, Magnitude, DEFAULT_PRECISION_BITS};

use crate::error::{Error, Result};

/// Sorted distinct positive points (strictly decreasing) plus a flag for
/// whether 0 belongs to the set.
///
/// A `ScaleSet` stands for the restriction of a conceptual infinite set to
/// `[min_point, window_top]`. When `contains_zero` is set, everything below
/// the smallest point is unresolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleSet {
    points: Vec<LogValue>,
    contains_zero: bool,
}

/// An open interval `(a, b)` missing the owning set, with `a` and `b` points of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    pub a: LogValue,
    pub b: LogValue,
}

impl Gap {
    /// `b / a`.
    pub fn ratio(&self) -> LogValue {
        self.b.div(&self.a)
    }

    /// `log2(b) - log2(a)` as a `"p/q"` string (prefixed `~` when rounded).
    pub fn ratio_log2_repr(&self) -> String {
        self.ratio().log2_repr()
    }
}

/// What lies below the smallest point of a set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BelowTruncation {
    /// `0` is not in the set, so `(0, min)` is a genuine empty component.
    Empty { min: LogValue },
    /// `0` is in the set and the region `(0, min)` is not resolved at this depth.
    Unresolved { min: LogValue },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapList {
    /// Gaps between consecutive points, in decreasing order of left endpoint.
    pub gaps: Vec<Gap>,
    pub below: BelowTruncation,
}

impl ScaleSet {
    /// Build a set from arbitrary positive values; duplicates are removed and
    /// points are sorted strictly decreasing.
    pub fn new(mut values: Vec<LogValue>, contains_zero: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySet);
        }
        values.sort_by(|a, b| b.cmp(a));
        values.dedup();
        Ok(ScaleSet {
            points: values,
            contains_zero,
        })
    }

    pub fn points(&self) -> &[LogValue] {
        &self.points
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_zero
    }

    pub fn depth(&self) -> usize {
        self.points.len()
    }

    pub fn window_top(&self) -> &LogValue {
        &self.points[0]
    }

    pub fn min_point(&self) -> &LogValue {
        self.points.last().expect("nonempty")
    }

    pub fn contains(&self, t: &LogValue) -> bool {
        self.points.binary_search_by(|p| t.cmp(p)).is_ok()
    }

    /// Index (into `points`) of `t`, if it is a point.
    pub fn index_of(&self, t: &LogValue) -> Option<usize> {
        self.points.binary_search_by(|p| t.cmp(p)).ok()
    }

    /// Start index of the tail window holding the last `fraction` of the points
    /// (at least one point).
    pub fn tail_start(&self, fraction: f64) -> usize {
        tail_start(self.depth(), fraction)
    }

    pub fn gaps(&self) -> Result<GapList> {
        if self.depth() < 2 && self.contains_zero {
            return Err(Error::Precondition(
                "gaps need depth >= 2, or depth >= 1 without 0".into(),
            ));
        }
        let gaps = self
            .points
            .windows(2)
            .map(|w| Gap {
                a: w[1].clone(),
                b: w[0].clone(),
            })
            .collect();
        let min = self.min_point().clone();
        let below = if self.contains_zero {
            BelowTruncation::Unresolved { min }
        } else {
            BelowTruncation::Empty { min }
        };
        Ok(GapList { gaps, below })
    }

    /// Smallest point `>= t`; `None` when no point of the window lies at or
    /// above `t`.
    pub fn next_above(&self, t: &LogValue) -> Result<Option<&LogValue>> {
        if t > self.window_top() {
            return Err(Error::OutsideWindow);
        }
        let count = self.points.partition_point(|p| p >= t);
        Ok(count.checked_sub(1).map(|i| &self.points[i]))
    }

    /// Smallest point `> t`, if any.
    pub fn next_strictly_above(&self, t: &LogValue) -> Option<&LogValue> {
        let count = self.points.partition_point(|p| p > t);
        count.checked_sub(1).map(|i| &self.points[i])
    }

    /// Largest point `<= t`, if any.
    pub fn prev_at_or_below(&self, t: &LogValue) -> Option<&LogValue> {
        let count = self.points.partition_point(|p| p > t);
        self.points.get(count)
    }
}

pub(crate) fn tail_start(len: usize, fraction: f64) -> usize {
    let w = ((len as f64) * fraction).floor() as usize;
    len - w.clamp(1.min(len), len)
}
