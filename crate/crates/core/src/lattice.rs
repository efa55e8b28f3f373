//! Divisor classes on the blow-up of the projective plane at `r` points and
//! the intersection pairing between them.
//!
//! The class lattice has the orthogonal basis `L, E_1, ..., E_r`, where `L`
//! is the pullback of a line and `E_i` is the exceptional curve over the
//! i-th point. The pairing is `L·L = 1`, `E_i·E_j = -δ_ij`, `L·E_i = 0`.
//! A class is stored in the normal form
//!
//! ```text
//! D = d·L - m_1·E_1 - ... - m_r·E_r
//! ```
//!
//! as the coefficient vector `(d; m_1, ..., m_r)`, so for the class of a
//! plane curve `d` is its degree and `m_i` its multiplicity at the i-th
//! point. Coefficients are exact rationals; most geometric operations also
//! make sense for rational classes, and the ones that do not (genus,
//! abnormality) check integrality and report structured errors.

use crate::rat::{int, is_integer, rat_string, Int, Rat};
use num::{BigInt, Integer, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Errors from lattice operations.
#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    /// Two classes (or a class and its context) disagree on the number of
    /// blown-up points.
    #[error("divisor classes live on different blow-ups ({left} vs {right} exceptional directions)")]
    DimensionMismatch { left: usize, right: usize },
    /// An operation that needs integer coefficients was given a properly
    /// rational class.
    #[error("operation requires an integral divisor class, got {class}")]
    NotIntegral { class: String },
    /// Averaging multiplicities needs at least one point.
    #[error("averaging multiplicities requires r >= 1")]
    NothingToAverage,
    /// Abnormality is only defined for integral classes with positive degree
    /// and non-negative multiplicities, not all zero.
    #[error("abnormality needs d > 0, every m_i >= 0 and some m_i > 0; got {class}")]
    AbnormalityDomain { class: String },
}

/// A divisor class `d·L - Σ m_i·E_i` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    d: Rat,
    m: Vec<Rat>,
}

impl DivisorClass {
    /// Builds a class from its degree and multiplicity vector.
    pub fn new(d: Rat, m: Vec<Rat>) -> Self {
        DivisorClass { d, m }
    }

    /// Builds an integral class from machine integers.
    pub fn from_ints(d: i64, m: &[i64]) -> Self {
        DivisorClass {
            d: Rat::from_integer(int(d)),
            m: m.iter().map(|&x| Rat::from_integer(int(x))).collect(),
        }
    }

    /// The uniform class `d·L - m·(E_1 + ... + E_r)`.
    pub fn uniform(d: i64, m: i64, r: usize) -> Self {
        Self::from_ints(d, &vec![m; r])
    }

    /// Degree coefficient `d` (coefficient of `L`).
    pub fn degree(&self) -> &Rat {
        &self.d
    }

    /// Multiplicity vector `m_1, ..., m_r`.
    pub fn multiplicities(&self) -> &[Rat] {
        &self.m
    }

    /// Number of exceptional directions the class knows about.
    pub fn r(&self) -> usize {
        self.m.len()
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        is_integer(&self.d) && self.m.iter().all(is_integer)
    }

    /// Sum of the multiplicities `Σ m_i`.
    pub fn multiplicity_sum(&self) -> Rat {
        self.m.iter().fold(Rat::zero(), |acc, x| acc + x)
    }

    /// Integer coefficients `(d, [m_i])`, if the class is integral.
    pub fn to_ints(&self) -> Option<(Int, Vec<Int>)> {
        if !self.is_integral() {
            return None;
        }
        Some((
            self.d.to_integer(),
            self.m.iter().map(|x| x.to_integer()).collect(),
        ))
    }

    /// Componentwise sum. Panics if the dimensions disagree; callers validate
    /// dimensions at the API boundary.
    pub fn plus(&self, other: &DivisorClass) -> DivisorClass {
        assert_eq!(self.r(), other.r(), "divisor class dimension mismatch");
        DivisorClass {
            d: &self.d + &other.d,
            m: self
                .m
                .iter()
                .zip(&other.m)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Componentwise difference. Panics if the dimensions disagree.
    pub fn minus(&self, other: &DivisorClass) -> DivisorClass {
        assert_eq!(self.r(), other.r(), "divisor class dimension mismatch");
        DivisorClass {
            d: &self.d - &other.d,
            m: self
                .m
                .iter()
                .zip(&other.m)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Scales every coefficient by an exact rational.
    pub fn scaled(&self, k: &Rat) -> DivisorClass {
        DivisorClass {
            d: &self.d * k,
            m: self.m.iter().map(|x| x * k).collect(),
        }
    }

    /// The zero class on the same blow-up.
    pub fn zero_like(&self) -> DivisorClass {
        DivisorClass {
            d: Rat::zero(),
            m: vec![Rat::zero(); self.r()],
        }
    }

    /// True when every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.m.iter().all(|x| x.is_zero())
    }

    /// Applies a permutation to the multiplicity vector: entry `i` of the
    /// result is `m_{perm[i]}`.
    pub fn permuted(&self, perm: &[usize]) -> DivisorClass {
        assert_eq!(perm.len(), self.r());
        DivisorClass {
            d: self.d.clone(),
            m: perm.iter().map(|&j| self.m[j].clone()).collect(),
        }
    }

    /// Exact coefficient strings `[d, m_1, ..., m_r]`, e.g. `["3", "11/9"]`.
    pub fn coefficient_strings(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.r() + 1);
        out.push(rat_string(&self.d));
        out.extend(self.m.iter().map(rat_string));
        out
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DivisorClass {
    /// Compact form `(d; m_1,...,m_r)`, e.g. `(3; 1,1,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", rat_string(&self.d))?;
        if self.m.is_empty() {
            return write!(f, ")");
        }
        let strs: Vec<String> = self.m.iter().map(rat_string).collect();
        write!(f, " {})", strs.join(","))
    }
}

/// Serializes as a JSON array of exact rational strings `["3","1","1"]`.
impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.r() + 1))?;
        for s in self.coefficient_strings() {
            seq.serialize_element(&s)?;
        }
        seq.end()
    }
}

/// Accepts a JSON array whose entries are exact rational strings or plain
/// integers: `["3","11/9"]` and `[3, 1, 1]` both parse.
impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = DivisorClass;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an array [d, m_1, ..., m_r] of exact rationals")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                #[derive(Deserialize)]
                #[serde(untagged)]
                enum Coeff {
                    Str(String),
                    Num(i64),
                }
                let mut coeffs: Vec<Rat> = Vec::new();
                while let Some(c) = seq.next_element::<Coeff>()? {
                    let r = match c {
                        Coeff::Str(s) => crate::rat::parse_rat(&s).map_err(de::Error::custom)?,
                        Coeff::Num(n) => Rat::from_integer(int(n)),
                    };
                    coeffs.push(r);
                }
                if coeffs.is_empty() {
                    return Err(de::Error::custom(
                        "divisor class needs at least the degree coefficient",
                    ));
                }
                let d = coeffs.remove(0);
                Ok(DivisorClass::new(d, coeffs))
            }
        }
        deserializer.deserialize_seq(V)
    }
}

/// The class lattice of the blow-up of the plane at `r` distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeContext {
    r: usize,
}

impl LatticeContext {
    /// Context for a blow-up at `r` points.
    pub fn new(r: usize) -> Self {
        LatticeContext { r }
    }

    /// Number of blown-up points.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Rank of the class lattice, `r + 1`.
    pub fn rank(&self) -> usize {
        self.r + 1
    }

    /// The line class `L`.
    pub fn line(&self) -> DivisorClass {
        DivisorClass::from_ints(1, &vec![0; self.r])
    }

    /// The exceptional class `E_i` (0-based index).
    pub fn exceptional(&self, i: usize) -> DivisorClass {
        assert!(i < self.r, "exceptional index out of range");
        let mut m = vec![0; self.r];
        m[i] = -1;
        DivisorClass::from_ints(0, &m)
    }

    /// The canonical class `K = -3L + E_1 + ... + E_r`.
    pub fn canonical_class(&self) -> DivisorClass {
        DivisorClass::from_ints(-3, &vec![-1; self.r])
    }

    /// Checks that a class belongs to this lattice.
    fn check(&self, a: &DivisorClass) -> Result<(), LatticeError> {
        if a.r() != self.r {
            return Err(LatticeError::DimensionMismatch {
                left: a.r(),
                right: self.r,
            });
        }
        Ok(())
    }

    /// Intersection pairing `a·b = a_d·b_d - Σ a_i·b_i`.
    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rat, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        let mut acc = &a.d * &b.d;
        for (x, y) in a.m.iter().zip(&b.m) {
            acc -= x * y;
        }
        Ok(acc)
    }

    /// Self-intersection `a·a`.
    pub fn self_intersect(&self, a: &DivisorClass) -> Result<Rat, LatticeError> {
        self.intersect(a, a)
    }

    /// Arithmetic genus of an integral class via adjunction:
    /// `p(C) = (C·C + K·C)/2 + 1`.
    pub fn adjunction_genus(&self, c: &DivisorClass) -> Result<Int, LatticeError> {
        self.check(c)?;
        let (d, m) = c.to_ints().ok_or_else(|| LatticeError::NotIntegral {
            class: c.to_string(),
        })?;
        // (d(d-3) - Σ m_i(m_i - 1)) / 2 + 1; both products are even.
        let mut num: Int = &d * (&d - BigInt::from(3));
        for mi in &m {
            num -= mi * (mi - BigInt::from(1));
        }
        debug_assert!(num.is_even());
        Ok(num / BigInt::from(2) + BigInt::from(1))
    }

    /// Euler characteristic by Riemann-Roch:
    /// `chi(D) = (D·D - K·D)/2 + 1`.
    pub fn riemann_roch_chi(&self, d: &DivisorClass) -> Result<Rat, LatticeError> {
        let dd = self.self_intersect(d)?;
        let kd = self.intersect(&self.canonical_class(), d)?;
        Ok((dd - kd) / Rat::from_integer(int(2)) + Rat::from_integer(int(1)))
    }

    /// Replaces every multiplicity by the average `(Σ m_i)/r`, keeping the
    /// degree. Smoothing multiplicities this way never decreases the
    /// self-intersection.
    pub fn average_class(&self, c: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.check(c)?;
        if self.r == 0 {
            return Err(LatticeError::NothingToAverage);
        }
        let avg = c.multiplicity_sum() / Rat::from_integer(int(self.r as i64));
        Ok(DivisorClass::new(c.d.clone(), vec![avg; self.r]))
    }

    /// Whether an integral class `C = dL - Σ m_i E_i` (with `d > 0`,
    /// `m_i >= 0`, `Σ m_i > 0`) is abnormal, i.e. whether its uniform
    /// average has negative self-intersection. Decided by the exact integer
    /// comparison `d²·r < (Σ m_i)²`.
    pub fn is_abnormal(&self, c: &DivisorClass) -> Result<bool, LatticeError> {
        self.check(c)?;
        let (d, m) = c.to_ints().ok_or_else(|| LatticeError::NotIntegral {
            class: c.to_string(),
        })?;
        let msum: Int = m.iter().sum();
        if !d.is_positive() || m.iter().any(|x| x.is_negative()) || !msum.is_positive() {
            return Err(LatticeError::AbnormalityDomain {
                class: c.to_string(),
            });
        }
        Ok(&d * &d * int(self.r as i64) < &msum * &msum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn pairing_on_basis_classes() {
        let ctx = LatticeContext::new(4);
        let l = ctx.line();
        assert_eq!(ctx.intersect(&l, &l).unwrap(), rat(1, 1));
        for i in 0..4 {
            let ei = ctx.exceptional(i);
            assert_eq!(ctx.intersect(&l, &ei).unwrap(), rat(0, 1));
            for j in 0..4 {
                let ej = ctx.exceptional(j);
                let expected = if i == j { rat(-1, 1) } else { rat(0, 1) };
                assert_eq!(ctx.intersect(&ei, &ej).unwrap(), expected);
            }
        }
    }

    #[test]
    fn canonical_class_square_is_9_minus_r() {
        for r in 0..12 {
            let ctx = LatticeContext::new(r);
            let k = ctx.canonical_class();
            assert_eq!(ctx.self_intersect(&k).unwrap(), rat(9 - r as i64, 1));
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let ctx = LatticeContext::new(3);
        let a = DivisorClass::from_ints(1, &[1, 1, 1]);
        let b = DivisorClass::from_ints(1, &[1, 1]);
        assert!(matches!(
            ctx.intersect(&a, &b),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn genus_of_standard_classes() {
        let ctx = LatticeContext::new(8);
        // Lines and conics are rational, plane cubics have genus 1.
        assert_eq!(
            ctx.adjunction_genus(&DivisorClass::from_ints(1, &[0; 8])).unwrap(),
            int(0)
        );
        assert_eq!(
            ctx.adjunction_genus(&DivisorClass::from_ints(2, &[0; 8])).unwrap(),
            int(0)
        );
        assert_eq!(
            ctx.adjunction_genus(&DivisorClass::from_ints(3, &[0; 8])).unwrap(),
            int(1)
        );
        // A degree-6 class with one triple and seven double points.
        let c = DivisorClass::from_ints(6, &[3, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(ctx.adjunction_genus(&c).unwrap(), int(0));
        // Genus rejects non-integral classes.
        let half = DivisorClass::new(rat(1, 2), vec![rat(0, 1); 8]);
        assert!(matches!(
            ctx.adjunction_genus(&half),
            Err(LatticeError::NotIntegral { .. })
        ));
    }

    #[test]
    fn chi_of_standard_classes() {
        let ctx0 = LatticeContext::new(0);
        let zero = DivisorClass::from_ints(0, &[]);
        assert_eq!(ctx0.riemann_roch_chi(&zero).unwrap(), rat(1, 1));
        assert_eq!(ctx0.riemann_roch_chi(&ctx0.line()).unwrap(), rat(3, 1));

        let ctx6 = LatticeContext::new(6);
        let f = DivisorClass::uniform(5, 2, 6);
        assert_eq!(ctx6.riemann_roch_chi(&f).unwrap(), rat(3, 1));

        let ctx9 = LatticeContext::new(9);
        let cubic = DivisorClass::uniform(3, 1, 9);
        assert_eq!(ctx9.riemann_roch_chi(&cubic).unwrap(), rat(1, 1));
    }

    #[test]
    fn averaging_keeps_degree_and_can_raise_square() {
        let ctx = LatticeContext::new(9);
        let c = DivisorClass::from_ints(4, &[3, 1, 1, 1, 1, 1, 1, 1, 1]);
        let avg = ctx.average_class(&c).unwrap();
        assert_eq!(avg.degree(), &rat(4, 1));
        assert_eq!(avg.multiplicities()[0], rat(11, 9));
        // The original class has square -1, the averaged one is positive.
        assert_eq!(ctx.self_intersect(&c).unwrap(), rat(-1, 1));
        assert_eq!(ctx.self_intersect(&avg).unwrap(), rat(23, 9));
    }

    #[test]
    fn abnormality_on_examples() {
        // A line through r >= 2 collinear points is abnormal.
        for r in 2..=10 {
            let ctx = LatticeContext::new(r);
            let lam = DivisorClass::uniform(1, 1, r);
            assert!(ctx.is_abnormal(&lam).unwrap());
        }
        // d²r = (Σm)² exactly: not abnormal (strict inequality required).
        let ctx4 = LatticeContext::new(4);
        let c = DivisorClass::from_ints(1, &[1, 1, 0, 0]);
        assert!(!ctx4.is_abnormal(&c).unwrap());
        let ctx9 = LatticeContext::new(9);
        assert!(!ctx9.is_abnormal(&DivisorClass::uniform(3, 1, 9)).unwrap());
        // Domain errors: zero degree, negative multiplicity, all-zero m.
        assert!(ctx4.is_abnormal(&DivisorClass::from_ints(0, &[1, 1, 1, 1])).is_err());
        assert!(ctx4.is_abnormal(&DivisorClass::from_ints(2, &[-1, 1, 1, 1])).is_err());
        assert!(ctx4.is_abnormal(&DivisorClass::from_ints(2, &[0, 0, 0, 0])).is_err());
    }

    #[test]
    fn serde_roundtrip_with_strings_and_numbers() {
        let c = DivisorClass::new(rat(3, 1), vec![rat(11, 9), rat(-1, 1)]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"["3","11/9","-1"]"#);
        let back: DivisorClass = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        let from_numbers: DivisorClass = serde_json::from_str("[3,1,1,1]").unwrap();
        assert_eq!(from_numbers, DivisorClass::from_ints(3, &[1, 1, 1]));
    }
}
