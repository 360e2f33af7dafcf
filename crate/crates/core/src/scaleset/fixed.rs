//! Binary fixed-point helpers for the few transcendental steps the log
//! domain needs: `2^f` for fractional `f`, and `log2(m)` for a mantissa in
//! `[1, 2)`. Values are `BigInt`s scaled by `2^bits`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const GUARD: u64 = 32;

fn to_fixed(r: &BigRational, bits: u64) -> BigInt {
    (r.numer() << bits).div_floor(r.denom())
}

/// ln 2 as fixed point with `bits` fractional bits.
fn ln2_fixed(bits: u64) -> BigInt {
    // ln 2 = sum_{k>=1} 1 / (k 2^k)
    let one = BigInt::one() << bits;
    let mut sum = BigInt::zero();
    let mut k: u64 = 1;
    loop {
        let term = (&one >> k) / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        sum += term;
        k += 1;
    }
    sum
}

/// exp(x) for fixed-point `0 <= x < 1`.
fn exp_fixed(x: &BigInt, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let mut sum = one.clone();
    let mut term = one;
    let mut i: u64 = 1;
    loop {
        term = ((&term * x) >> bits) / BigInt::from(i);
        if term.is_zero() {
            break;
        }
        sum += &term;
        i += 1;
    }
    sum
}

/// `2^f` for rational `0 <= f < 1`, as a rational with about `bits`
/// correct fractional bits.
pub(crate) fn pow2_frac(f: &BigRational, bits: u64) -> BigRational {
    debug_assert!(!f.is_negative() && f < &BigRational::one());
    let w = bits + GUARD;
    let x = (to_fixed(f, w) * ln2_fixed(w)) >> w;
    let v = exp_fixed(&x, w);
    BigRational::new(v, BigInt::one() << w)
}

/// `log2(m)` for rational `1 <= m < 2`, to about `bits` fractional bits.
pub(crate) fn log2_mantissa(m: &BigRational, bits: u64) -> BigRational {
    if m.is_one() {
        return BigRational::zero();
    }
    let w = bits + GUARD;
    // ln m = 2 atanh(z), z = (m - 1) / (m + 1) <= 1/3
    let one = BigRational::one();
    let z = (m - &one) / (m + &one);
    let zf = to_fixed(&z, w);
    let z2 = (&zf * &zf) >> w;
    let mut power = zf;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += term;
        power = (&power * &z2) >> w;
        k += 1;
    }
    let ln_m = sum << 1u32;
    let ln2 = ln2_fixed(w);
    BigRational::new(ln_m, ln2)
}

/// Round `r` to a multiple of `2^-bits` (half away from zero).
pub(crate) fn round_to_bits(r: &BigRational, bits: u64) -> BigRational {
    let scaled = r * BigRational::from_integer(BigInt::one() << bits);
    BigRational::new(scaled.round().to_integer(), BigInt::one() << bits)
}
