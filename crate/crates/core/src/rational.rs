//! Exact rational arithmetic helpers.
//!
//! All cost accounting, fractional values, and LP pivoting in this crate run
//! on arbitrary-precision rationals so that phase boundaries (powers of two),
//! feasibility sums, and optimal values are exact. Values cross process
//! boundaries as `"p/q"` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Build a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Build a rational from an integer.
pub fn rint(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Exact power of two, any sign of exponent.
pub fn pow2(exp: i32) -> Rat {
    if exp >= 0 {
        Rat::from_integer(BigInt::one() << exp as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-exp) as usize)
    }
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num.parse().map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let q: BigInt = den.parse().map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(p, q))
}

/// Render as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Smallest integer `>= r`, as usize. Caller guarantees `r >= 0` and fits.
pub fn ceil_usize(r: &Rat) -> usize {
    debug_assert!(!r.is_negative());
    r.ceil().to_integer().to_usize().expect("ceil out of usize range")
}

/// Largest `i >= 0` with `2^i <= r`, or 0 when `r < 1`.
pub fn floor_log2(r: &Rat) -> u32 {
    if *r < Rat::one() {
        return 0;
    }
    let mut i = 0u32;
    let mut p = Rat::from_integer(BigInt::from(2));
    while p <= *r {
        i += 1;
        p = p * rint(2);
    }
    i
}

/// Lossy conversion for reporting and for transcendental steps (ln, sqrt).
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}
