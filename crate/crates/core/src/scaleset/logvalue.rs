use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fixed;
use crate::error::{Error, Result};

/// Fractional bits kept by inexact linear-scale operations.
pub const DEFAULT_PRECISION_BITS: u64 = 64;

/// Exponent gaps up to this size are handled with exact big-integer shifts.
const EXACT_SHIFT_LIMIT: u64 = 4096;

/// A strictly positive real `mantissa * 2^exponent` with both parts exact
/// rationals and `1 <= mantissa < 2`.
///
/// The canonical form is unique, so structural equality is numeric
/// equality. Products, quotients and order comparisons are exact; only
/// linear-scale sums and differences across a non-integer exponent gap (or a
/// huge integer gap) are rounded, see [`LogValue::linear_difference`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogValue {
    mantissa: BigRational,
    exponent: BigRational,
}

fn two_pow(k: u64) -> BigInt {
    BigInt::one() << k
}

fn ratio_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Parse `"p/q"`, `"p"` or a plain decimal like `"1.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let f = BigRational::new(frac_part, den);
        let base = BigRational::from_integer(int_part);
        return Ok(if neg { base - f } else { base + f });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Format a rational as `"p/q"` (or `"p"` when integral).
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl LogValue {
    fn normalized(mantissa: BigRational, exponent: BigRational) -> Self {
        debug_assert!(mantissa.is_positive());
        let nb = mantissa.numer().bits() as i64;
        let db = mantissa.denom().bits() as i64;
        let mut k = nb - db;
        let mut m = shift(&mantissa, -k);
        if m < BigRational::one() {
            k -= 1;
            m = &m * ratio_int(2);
        }
        LogValue {
            mantissa: m,
            exponent: exponent + ratio_int(k),
        }
    }

    /// `2^exponent`.
    pub fn pow2(exponent: BigRational) -> Self {
        LogValue {
            mantissa: BigRational::one(),
            exponent,
        }
    }

    pub fn pow2_int(exponent: i64) -> Self {
        Self::pow2(ratio_int(exponent))
    }

    /// `mantissa * 2^exponent` from machine integers (`mantissa > 0`).
    pub fn from_parts(mantissa: i64, exponent: i64) -> Result<Self> {
        Self::new(ratio_int(mantissa), ratio_int(exponent))
    }

    pub fn one() -> Self {
        Self::pow2_int(0)
    }

    /// `mantissa * 2^exponent` for any positive rational `mantissa`.
    pub fn new(mantissa: BigRational, exponent: BigRational) -> Result<Self> {
        if !mantissa.is_positive() {
            return Err(Error::NonFinite(format_rational(&mantissa)));
        }
        Ok(Self::normalized(mantissa, exponent))
    }

    pub fn from_ratio(r: &BigRational) -> Result<Self> {
        Self::new(r.clone(), BigRational::zero())
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::NonFinite(x.to_string()));
        }
        let r = BigRational::from_float(x).ok_or_else(|| Error::NonFinite(x.to_string()))?;
        Self::from_ratio(&r)
    }

    pub fn mantissa(&self) -> &BigRational {
        &self.mantissa
    }

    pub fn exponent(&self) -> &BigRational {
        &self.exponent
    }

    /// True when the value is an exact power of two.
    pub fn is_pow2(&self) -> bool {
        self.mantissa.is_one()
    }

    /// Exact base-2 logarithm, available only for exact powers of two.
    pub fn log2_exact(&self) -> Option<BigRational> {
        self.is_pow2().then(|| self.exponent.clone())
    }

    /// Base-2 logarithm, exact for powers of two and otherwise accurate to
    /// about `bits` fractional bits.
    pub fn log2_approx(&self, bits: u64) -> BigRational {
        if self.is_pow2() {
            return self.exponent.clone();
        }
        let l = fixed::log2_mantissa(&self.mantissa, bits);
        &self.exponent + fixed::round_to_bits(&l, bits)
    }

    pub fn log2_f64(&self) -> f64 {
        let e = self.exponent.to_f64().unwrap_or(f64::NAN);
        let m = self.mantissa.to_f64().unwrap_or(1.0);
        e + m.log2()
    }

    /// `log2` as an exact `"p/q"` string, or `"~p/q"` when rounded to
    /// [`DEFAULT_PRECISION_BITS`].
    pub fn log2_repr(&self) -> String {
        match self.log2_exact() {
            Some(l) => format_rational(&l),
            None => format!("~{}", format_rational(&self.log2_approx(DEFAULT_PRECISION_BITS))),
        }
    }

    /// The represented real as `f64`; saturates to `0.0` / `inf` outside the
    /// `f64` range.
    pub fn to_f64(&self) -> f64 {
        let fl = self.exponent.floor();
        let frac = &self.exponent - &fl;
        let Some(e) = fl.to_integer().to_i64() else {
            return if self.exponent.is_negative() { 0.0 } else { f64::INFINITY };
        };
        if e > 1100 {
            return f64::INFINITY;
        }
        if e < -1200 {
            return 0.0;
        }
        let m = self.mantissa.to_f64().unwrap_or(1.0) * frac.to_f64().unwrap_or(0.0).exp2();
        let half = e / 2;
        m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// A rational approximation of the value, exact for dyadic exponents.
    pub fn to_rational(&self, bits: u64) -> BigRational {
        let fl = self.exponent.floor();
        let frac = &self.exponent - &fl;
        let scale = if frac.is_zero() {
            self.mantissa.clone()
        } else {
            &self.mantissa * fixed::pow2_frac(&frac, bits)
        };
        let e = fl.to_integer();
        match e.to_i64() {
            Some(e) if e.unsigned_abs() <= 1 << 20 => shift(&scale, e),
            _ => {
                if e.is_negative() {
                    BigRational::zero()
                } else {
                    scale
                }
            }
        }
    }

    pub fn mul(&self, other: &LogValue) -> LogValue {
        Self::normalized(&self.mantissa * &other.mantissa, &self.exponent + &other.exponent)
    }

    pub fn div(&self, other: &LogValue) -> LogValue {
        Self::normalized(&self.mantissa / &other.mantissa, &self.exponent - &other.exponent)
    }

    pub fn recip(&self) -> LogValue {
        Self::normalized(self.mantissa.recip(), -&self.exponent)
    }

    /// Multiply by a positive rational.
    pub fn scale(&self, r: &BigRational) -> LogValue {
        debug_assert!(r.is_positive());
        Self::normalized(&self.mantissa * r, self.exponent.clone())
    }

    /// Multiply by `2^e`.
    pub fn shift_exp(&self, e: &BigRational) -> LogValue {
        LogValue {
            mantissa: self.mantissa.clone(),
            exponent: &self.exponent + e,
        }
    }

    /// `self - other` for `self > other`.
    ///
    /// Exact whenever the exponent gap is an integer of at most
    /// `EXACT_SHIFT_LIMIT`; otherwise the mantissa carries a relative error
    /// below `2^-precision_bits`.
    pub fn linear_difference(&self, other: &LogValue, precision_bits: u64) -> Result<LogValue> {
        if self <= other {
            return Err(Error::NonpositiveDifference);
        }
        let d = &self.exponent - &other.exponent;
        // self > other forces d > -1; an integral gap is then >= 0.
        if d.is_integer() {
            let Some(k) = d.to_integer().to_u64().filter(|k| *k <= EXACT_SHIFT_LIMIT) else {
                return Ok(self.round_mantissa(precision_bits));
            };
            let m = shift(&self.mantissa, k as i64) - &other.mantissa;
            return Ok(Self::normalized(m, other.exponent.clone()));
        }
        let r = match other.relative_to(self, precision_bits) {
            Some(r) => r,
            None => return Ok(self.round_mantissa(precision_bits)),
        };
        let m = &self.mantissa * (BigRational::one() - r);
        Ok(Self::normalized(m, self.exponent.clone()).round_mantissa(precision_bits + 16))
    }

    /// `self + other`, with the same precision contract as
    /// [`LogValue::linear_difference`].
    pub fn linear_sum(&self, other: &LogValue, precision_bits: u64) -> LogValue {
        let (hi, lo) = if self >= other { (self, other) } else { (other, self) };
        let d = &hi.exponent - &lo.exponent;
        if d.is_integer() {
            let Some(k) = d.to_integer().to_u64().filter(|k| *k <= EXACT_SHIFT_LIMIT) else {
                return hi.round_mantissa(precision_bits);
            };
            let m = shift(&hi.mantissa, k as i64) + &lo.mantissa;
            return Self::normalized(m, lo.exponent.clone());
        }
        match lo.relative_to(hi, precision_bits) {
            Some(r) => {
                let m = &hi.mantissa * (BigRational::one() + r);
                Self::normalized(m, hi.exponent.clone()).round_mantissa(precision_bits + 16)
            }
            None => hi.round_mantissa(precision_bits),
        }
    }

    /// Approximates `self / hi` for `self <= hi` as a rational, or `None`
    /// when it is below `2^-(precision + 64)`.
    fn relative_to(&self, hi: &LogValue, precision_bits: u64) -> Option<BigRational> {
        let d = &hi.exponent - &self.exponent;
        let fl = d.floor();
        let frac = &d - &fl;
        let whole = (fl.to_integer() + 1u32).to_u64()?;
        if whole > precision_bits + 64 {
            return None;
        }
        // 2^-d = 2^-(fl + 1) * 2^(1 - frac)
        let p = if frac.is_zero() {
            ratio_int(2)
        } else {
            fixed::pow2_frac(&(BigRational::one() - &frac), precision_bits + 32)
        };
        Some(&self.mantissa / &hi.mantissa * shift(&p, -(whole as i64)))
    }

    fn round_mantissa(&self, bits: u64) -> LogValue {
        let m = fixed::round_to_bits(&self.mantissa, bits);
        Self::normalized(m, self.exponent.clone())
    }

    /// Exact comparison of `self * 2^e` against `other` when they may differ
    /// by a fractional power of two.
    fn cmp_exact(&self, other: &LogValue) -> Ordering {
        let d = &self.exponent - &other.exponent;
        if d.is_zero() {
            return self.mantissa.cmp(&other.mantissa);
        }
        let fl = d.floor();
        if fl >= BigRational::one() {
            return Ordering::Greater;
        }
        if fl <= ratio_int(-2) {
            return Ordering::Less;
        }
        if d.is_integer() {
            // only d == -1 remains
            let lhs = &self.mantissa;
            let rhs = &other.mantissa * ratio_int(2);
            return lhs.cmp(&rhs);
        }
        // compare 2^d against r = other.m / self.m, d = p/q in (-2, 1)
        let r = &other.mantissa / &self.mantissa;
        let p = d.numer().clone();
        let q = d.denom().clone();
        if let Some(qq) = q.to_u32().filter(|q| *q <= 512) {
            let lhs_pow = two_pow(p.abs().to_u64().unwrap_or(0));
            let rn = num_traits::pow(r.numer().clone(), qq as usize);
            let rd = num_traits::pow(r.denom().clone(), qq as usize);
            // 2^p vs rn/rd  <=>  2^p * rd vs rn (p >= 0), rd vs rn * 2^-p (p < 0)
            let (a, b) = if p.is_negative() {
                (rd, rn * lhs_pow)
            } else {
                (lhs_pow * rd, rn)
            };
            return a.cmp(&b);
        }
        // Large denominators: refine a fixed-point approximation until it
        // separates; 2^d is irrational so this terminates.
        let mut bits = 64;
        loop {
            let lhs = self.to_ratio_near_one(&d, bits);
            let eps = BigRational::new(BigInt::one(), two_pow(bits - 8));
            let diff = &lhs - &r;
            if diff.abs() > eps {
                return if diff.is_positive() { Ordering::Greater } else { Ordering::Less };
            }
            bits *= 2;
            if bits > 1 << 16 {
                return Ordering::Equal;
            }
        }
    }

    fn to_ratio_near_one(&self, d: &BigRational, bits: u64) -> BigRational {
        let fl = d.floor();
        let frac = d - &fl;
        let base = fixed::pow2_frac(&frac, bits);
        shift(&base, fl.to_integer().to_i64().unwrap_or(0))
    }
}

/// Multiply a rational by `2^k`.
fn shift(r: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        BigRational::new(r.numer() << (k as u64), r.denom().clone())
    } else {
        BigRational::new(r.numer().clone(), r.denom() << ((-k) as u64))
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pow2() {
            write!(f, "2^({})", format_rational(&self.exponent))
        } else {
            write!(
                f,
                "{}*2^({})",
                format_rational(&self.mantissa),
                format_rational(&self.exponent)
            )
        }
    }
}

/// A nonnegative magnitude: zero or a [`LogValue`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Magnitude {
    Zero,
    Positive(LogValue),
}

impl Magnitude {
    pub fn abs_diff(a: &Magnitude, b: &Magnitude, precision_bits: u64) -> Magnitude {
        match (a, b) {
            (Magnitude::Zero, x) | (x, Magnitude::Zero) => x.clone(),
            (Magnitude::Positive(x), Magnitude::Positive(y)) => match x.cmp(y) {
                Ordering::Equal => Magnitude::Zero,
                Ordering::Greater => Magnitude::Positive(
                    x.linear_difference(y, precision_bits).expect("x > y"),
                ),
                Ordering::Less => Magnitude::Positive(
                    y.linear_difference(x, precision_bits).expect("y > x"),
                ),
            },
        }
    }

    pub fn sum(a: &Magnitude, b: &Magnitude, precision_bits: u64) -> Magnitude {
        match (a, b) {
            (Magnitude::Zero, x) | (x, Magnitude::Zero) => x.clone(),
            (Magnitude::Positive(x), Magnitude::Positive(y)) => {
                Magnitude::Positive(x.linear_sum(y, precision_bits))
            }
        }
    }

    /// `self / r` as `f64`.
    pub fn ratio_f64(&self, r: &LogValue) -> f64 {
        match self {
            Magnitude::Zero => 0.0,
            Magnitude::Positive(x) => x.div(r).to_f64(),
        }
    }

    pub fn as_log_value(&self) -> Option<&LogValue> {
        match self {
            Magnitude::Zero => None,
            Magnitude::Positive(v) => Some(v),
        }
    }
}
