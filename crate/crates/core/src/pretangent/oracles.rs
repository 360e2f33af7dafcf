//! Concrete pointed metric spaces.

use std::f64::consts::PI;

use super::MetricOracle;
use crate::scaleset::{LogValue, Magnitude, ScaleSet, DEFAULT_PRECISION_BITS};

/// `E ∪ {0}` for a [`ScaleSet`] `E`, with the usual distance and `p = 0`.
#[derive(Clone, Debug)]
pub struct SubsetOfLine {
    set: ScaleSet,
}

impl SubsetOfLine {
    pub fn new(set: ScaleSet) -> Self {
        SubsetOfLine { set }
    }

    pub fn set(&self) -> &ScaleSet {
        &self.set
    }

    /// `[nearest point >= s, nearest point <= s]`, clamped to the window top
    /// and to 0.
    fn bracket(&self, s: &LogValue) -> [Magnitude; 2] {
        let above = if s > self.set.window_top() {
            self.set.window_top().clone()
        } else {
            self.set.next_above(s).ok().flatten().cloned().unwrap_or_else(|| self.set.min_point().clone())
        };
        let below = match self.set.prev_at_or_below(s) {
            Some(p) => Magnitude::Positive(p.clone()),
            None => Magnitude::Zero,
        };
        [Magnitude::Positive(above), below]
    }
}

impl MetricOracle for SubsetOfLine {
    type Point = Magnitude;

    fn distance(&self, x: &Magnitude, y: &Magnitude) -> Magnitude {
        Magnitude::abs_diff(x, y, DEFAULT_PRECISION_BITS)
    }

    fn marked_point(&self) -> Magnitude {
        Magnitude::Zero
    }

    fn points_near(&self, scale: &LogValue) -> Vec<Magnitude> {
        self.bracket(scale).to_vec()
    }

    fn enumerate(&self, budget: usize) -> Vec<Magnitude> {
        self.set
            .points()
            .iter()
            .take(budget)
            .map(|p| Magnitude::Positive(p.clone()))
            .collect()
    }

    fn label(&self) -> String {
        format!("line-subset({} points)", self.set.depth())
    }
}

/// A point of `E ∪ -E ∪ {0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPoint {
    pub negative: bool,
    pub abs: Magnitude,
}

/// `E ∪ -E ∪ {0}` with `p = 0`; its distance set is `E ∪ {0}`.
#[derive(Clone, Debug)]
pub struct SymmetricLine {
    half: SubsetOfLine,
}

impl SymmetricLine {
    pub fn new(set: ScaleSet) -> Self {
        SymmetricLine {
            half: SubsetOfLine::new(set),
        }
    }
}

impl MetricOracle for SymmetricLine {
    type Point = SignedPoint;

    fn distance(&self, x: &SignedPoint, y: &SignedPoint) -> Magnitude {
        if x.negative == y.negative || x.abs == Magnitude::Zero || y.abs == Magnitude::Zero {
            Magnitude::abs_diff(&x.abs, &y.abs, DEFAULT_PRECISION_BITS)
        } else {
            Magnitude::sum(&x.abs, &y.abs, DEFAULT_PRECISION_BITS)
        }
    }

    fn marked_point(&self) -> SignedPoint {
        SignedPoint {
            negative: false,
            abs: Magnitude::Zero,
        }
    }

    fn points_near(&self, scale: &LogValue) -> Vec<SignedPoint> {
        let [above, below] = self.half.bracket(scale);
        vec![
            SignedPoint { negative: false, abs: above.clone() },
            SignedPoint { negative: false, abs: below.clone() },
            SignedPoint { negative: true, abs: above },
            SignedPoint { negative: true, abs: below },
        ]
    }

    fn enumerate(&self, budget: usize) -> Vec<SignedPoint> {
        self.half
            .enumerate(budget.div_ceil(2))
            .into_iter()
            .flat_map(|m| {
                [
                    SignedPoint { negative: false, abs: m.clone() },
                    SignedPoint { negative: true, abs: m },
                ]
            })
            .take(budget)
            .collect()
    }

    fn label(&self) -> String {
        format!("symmetric-line({} points per side)", self.half.set.depth())
    }
}

/// The closed half-line `[0, inf)` with `p = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Ray;

impl MetricOracle for Ray {
    type Point = Magnitude;

    fn distance(&self, x: &Magnitude, y: &Magnitude) -> Magnitude {
        Magnitude::abs_diff(x, y, DEFAULT_PRECISION_BITS)
    }

    fn marked_point(&self) -> Magnitude {
        Magnitude::Zero
    }

    fn points_near(&self, scale: &LogValue) -> Vec<Magnitude> {
        vec![Magnitude::Positive(scale.clone())]
    }

    fn enumerate(&self, budget: usize) -> Vec<Magnitude> {
        (0..budget as i64).map(|n| Magnitude::Positive(LogValue::pow2_int(-n))).collect()
    }

    fn label(&self) -> String {
        "ray".into()
    }
}

/// The unit circle with arc-length distance; points are angles in `[0, 2 pi)`
/// and `p` is angle 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct Circle;

fn angle_magnitude(d: f64) -> Magnitude {
    if d <= 0.0 {
        Magnitude::Zero
    } else {
        Magnitude::Positive(LogValue::from_f64(d).expect("finite positive"))
    }
}

impl MetricOracle for Circle {
    type Point = f64;

    fn distance(&self, x: &f64, y: &f64) -> Magnitude {
        let d = (x - y).abs().rem_euclid(2.0 * PI);
        angle_magnitude(d.min(2.0 * PI - d))
    }

    fn marked_point(&self) -> f64 {
        0.0
    }

    fn points_near(&self, scale: &LogValue) -> Vec<f64> {
        let s = scale.to_f64().min(PI);
        vec![s, 2.0 * PI - s]
    }

    /// Angles `pi (i + 1) / budget`, so the distances fill `(0, pi]`.
    fn enumerate(&self, budget: usize) -> Vec<f64> {
        (0..budget).map(|i| PI * (i + 1) as f64 / budget as f64).collect()
    }

    fn label(&self) -> String {
        "circle".into()
    }
}

/// The one-point space.
#[derive(Clone, Copy, Debug, Default)]
pub struct OnePoint;

impl MetricOracle for OnePoint {
    type Point = ();

    fn distance(&self, _: &(), _: &()) -> Magnitude {
        Magnitude::Zero
    }

    fn marked_point(&self) {}

    fn points_near(&self, _: &LogValue) -> Vec<()> {
        vec![()]
    }

    fn enumerate(&self, _: usize) -> Vec<()> {
        Vec::new()
    }

    fn label(&self) -> String {
        "one-point".into()
    }
}

/// `E ∪ {0}` with the squared distance `|x - y|^2`, which breaks the triangle
/// inequality.
#[derive(Clone, Debug)]
pub struct SquaredLine {
    inner: SubsetOfLine,
}

impl SquaredLine {
    pub fn new(set: ScaleSet) -> Self {
        SquaredLine {
            inner: SubsetOfLine::new(set),
        }
    }
}

impl MetricOracle for SquaredLine {
    type Point = Magnitude;

    fn distance(&self, x: &Magnitude, y: &Magnitude) -> Magnitude {
        match self.inner.distance(x, y) {
            Magnitude::Zero => Magnitude::Zero,
            Magnitude::Positive(d) => Magnitude::Positive(d.mul(&d)),
        }
    }

    fn marked_point(&self) -> Magnitude {
        Magnitude::Zero
    }

    fn points_near(&self, scale: &LogValue) -> Vec<Magnitude> {
        self.inner.points_near(scale)
    }

    fn enumerate(&self, budget: usize) -> Vec<Magnitude> {
        self.inner.enumerate(budget)
    }

    fn label(&self) -> String {
        "squared-line".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(e: i64) -> Magnitude {
        Magnitude::Positive(LogValue::pow2_int(e))
    }

    #[test]
    fn opposite_sides_add() {
        let set = ScaleSet::new(vec![LogValue::pow2_int(-1), LogValue::pow2_int(-2)], true).unwrap();
        let x = SymmetricLine::new(set);
        let a = SignedPoint { negative: false, abs: pw(-1) };
        let b = SignedPoint { negative: true, abs: pw(-2) };
        assert_eq!(
            x.distance(&a, &b),
            Magnitude::Positive(LogValue::from_parts(3, -2).unwrap())
        );
        assert_eq!(x.distance(&a, &a), Magnitude::Zero);
    }

    #[test]
    fn circle_distances() {
        let c = Circle;
        let d = c.distance(&0.1, &(2.0 * PI - 0.1));
        assert!((d.as_log_value().unwrap().to_f64() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn line_brackets() {
        let set = ScaleSet::new(vec![LogValue::pow2_int(0), LogValue::pow2_int(-2)], true).unwrap();
        let x = SubsetOfLine::new(set);
        assert_eq!(x.points_near(&LogValue::pow2_int(-1)), vec![pw(0), pw(-2)]);
        assert_eq!(x.points_near(&LogValue::pow2_int(-5)), vec![pw(-2), Magnitude::Zero]);
        assert_eq!(x.points_near(&LogValue::pow2_int(3)), vec![pw(0), pw(0)]);
    }

    #[test]
    fn squared_line_breaks_triangle() {
        let set = ScaleSet::new(vec![LogValue::pow2_int(0), LogValue::pow2_int(-1)], true).unwrap();
        let x = SquaredLine::new(set);
        let d02 = x.distance(&Magnitude::Zero, &pw(0));
        let d01 = x.distance(&Magnitude::Zero, &pw(-1));
        let d12 = x.distance(&pw(-1), &pw(0));
        assert!(d02 > Magnitude::sum(&d01, &d12, 64));
    }
}
