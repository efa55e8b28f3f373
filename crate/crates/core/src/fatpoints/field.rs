//! Exact coefficient fields for the linear algebra underneath fat-point
//! computations: arbitrary-precision rationals and prime fields F_p.
//!
//! Field elements are passed by value through a small trait so the matrix
//! and monomial code is written once. The two implementations are `Rat`
//! (exact rationals) and `u64` residues for a prime modulus.

use crate::rat::{int, parse_rat, rat_string, Int, Rat};
use num::{BigInt, Integer, Signed, ToPrimitive, Zero};
use std::fmt;

/// Field operations over an element type chosen by the implementation.
pub trait FieldOps: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; panics on zero (callers guard).
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Canonical image of an integer.
    fn from_int(&self, n: &Int) -> Self::Elem;
    /// Exact string form for reports.
    fn elem_string(&self, a: &Self::Elem) -> String;
    /// Parses the string form accepted in configuration files.
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, String>;
    /// Characteristic (0 for Q).
    fn characteristic(&self) -> u64;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// The rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalField;

impl FieldOps for RationalField {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::from_integer(int(1))
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a.clone()
    }
    fn inv(&self, a: &Rat) -> Rat {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_int(&self, n: &Int) -> Rat {
        Rat::from_integer(n.clone())
    }
    fn elem_string(&self, a: &Rat) -> String {
        rat_string(a)
    }
    fn parse_elem(&self, s: &str) -> Result<Rat, String> {
        parse_rat(s)
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// The prime field F_p for a prime modulus `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds F_p; the modulus must be a prime at least 2.
    pub fn new(p: u64) -> Result<Self, String> {
        if p < 2 {
            return Err(format!("modulus {p} is not prime"));
        }
        if !is_prime(p) {
            return Err(format!("modulus {p} is not prime"));
        }
        if p >= (1u64 << 63) {
            return Err(format!("modulus {p} too large"));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

/// Deterministic Miller-Rabin, exact for all u64 inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        pow_mod(*a, self.p - 2, self.p)
    }
    fn from_int(&self, n: &Int) -> u64 {
        let p = Int::from(self.p);
        let mut r = n.mod_floor(&p);
        if r.is_negative() {
            r += &p;
        }
        r.to_u64().expect("residue fits in u64")
    }
    fn elem_string(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse_elem(&self, s: &str) -> Result<u64, String> {
        let n: BigInt = s
            .trim()
            .parse()
            .map_err(|_| format!("invalid integer '{s}'"))?;
        Ok(self.from_int(&n))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(2147483647).unwrap();
        let a = 1234567890u64;
        let inv = f.inv(&a);
        assert_eq!(f.mul(&a, &inv), 1);
        assert_eq!(f.add(&(f.modulus() - 1), &1), 0);
        assert_eq!(f.from_int(&Int::from(-1)), f.modulus() - 1);
    }

    #[test]
    fn primality_checks() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(2147483647).is_ok());
        assert!(PrimeField::new(2147483649).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(561).is_err()); // Carmichael number
    }

    #[test]
    fn rational_field_matches_rat() {
        let f = RationalField;
        let a = f.parse_elem("3/4").unwrap();
        let b = f.parse_elem("-1/2").unwrap();
        assert_eq!(f.elem_string(&f.add(&a, &b)), "1/4");
        assert_eq!(f.elem_string(&f.mul(&a, &f.inv(&b))), "-3/2");
    }
}
