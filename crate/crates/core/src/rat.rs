//! Exact rational and integer arithmetic helpers shared across the crate.
//!
//! All geometric quantities in this crate are exact: rationals are
//! `num::BigRational`, integers are `num::BigInt`, and nothing is ever
//! rounded through floating point.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};

/// Exact arbitrary-precision integer.
pub type Int = BigInt;
/// Exact arbitrary-precision rational.
pub type Rat = BigRational;

/// Builds an integer from a machine integer.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Builds a rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(int(n), int(d))
}

/// Builds the rational `n/1`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

/// Parses an exact rational from a string such as `"3"`, `"-7"` or `"11/9"`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| format!("invalid exact rational {s:?}: {e}"))
}

/// Formats a rational exactly (`"3"`, `"11/9"`); never decimal.
pub fn rat_string(r: &Rat) -> String {
    r.to_string()
}

/// Floor of the integer square root of a non-negative integer.
pub fn int_sqrt_floor(n: &Int) -> Int {
    assert!(!n.is_negative(), "int_sqrt_floor of a negative integer");
    n.sqrt()
}

/// Returns `Some(s)` with `s^2 == n` when `n` is a perfect square.
pub fn perfect_square_root(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Exact comparison of a rational `x` against `sqrt(n)` for integer `n >= 0`.
///
/// Returns `Ordering::Less` when `x < sqrt(n)` and so on; never goes through
/// floating point (compares `x^2` with `n`, respecting signs).
pub fn cmp_rat_sqrt(x: &Rat, n: &Int) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    assert!(!n.is_negative(), "cmp_rat_sqrt against sqrt of a negative");
    if x.is_negative() {
        return if n.is_zero() && x.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Less
        };
    }
    let lhs = x.numer() * x.numer();
    let rhs = n * x.denom() * x.denom();
    lhs.cmp(&rhs)
}

/// Binomial coefficient `C(n, k)` as an exact integer (0 when `k > n`).
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int((i + 1) as i64);
    }
    acc
}

/// Binomial coefficient as a `usize`; panics on overflow (fine for the small
/// monomial-counting uses in this crate).
pub fn binomial_usize(n: u64, k: u64) -> usize {
    use num::ToPrimitive;
    binomial(n, k)
        .to_usize()
        .expect("binomial coefficient does not fit in usize")
}

/// True when the rational is an integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Sign of an integer as -1/0/1.
pub fn sign(n: &Int) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
