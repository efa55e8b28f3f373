//! Fat-point subschemes of projective space: homogeneous ideal components,
//! symbolic powers, ordinary powers, Hilbert functions, and containment
//! tests between symbolic and ordinary powers.
//!
//! A fat-point scheme is a finite set of distinct points with multiplicities.
//! Its degree-`t` ideal component is cut out by divided-power derivative
//! conditions at the points, which makes every computation exact in any
//! characteristic. All bases are kept in reduced row echelon form over a
//! fixed monomial order, so equal subspaces have equal representations.

pub mod field;
pub mod matrix;
pub mod monomial;

use crate::rat::{binomial_usize, rat_int, Int, Rat};
use field::FieldOps;
use matrix::{in_row_space, kernel_basis, rref, Rref};
use monomial::{derivative_indices, hasse_row, multiply, MonomialBasis};
use num::One;
use std::cell::RefCell;
use std::collections::HashMap;
use thiserror::Error;

/// Errors from fat-point computations.
#[derive(Debug, Error)]
pub enum FatPointError {
    #[error("point {index} has {got} coordinates, expected {expected}")]
    BadCoordinateCount {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("point {index} is the zero vector")]
    ZeroPoint { index: usize },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("{points} points given but {mults} multiplicities")]
    MultiplicityCount { points: usize, mults: usize },
    #[error("operation requires a reduced scheme (all multiplicities 1)")]
    NotReduced,
    #[error("operation requires m >= 1, got {0}")]
    BadSymbolicExponent(u32),
    #[error("operation requires r >= 1, got {0}")]
    BadPowerExponent(u32),
    #[error("invalid gamma bounds: need 1 <= lower <= upper, got [{lower}, {upper}]")]
    BadGammaBounds { lower: String, upper: String },
    #[error("frobenius check requires positive characteristic, field has characteristic 0")]
    CharacteristicZero,
    #[error("q = {q} is not a power of the field characteristic {p}")]
    NotPowerOfChar { q: u64, p: u64 },
    #[error("frobenius check implemented for ambient dimension 2, got {0}")]
    BadAmbientDim(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// A canonical basis of one graded component of an ideal: the reduced row
/// echelon form of the coefficient vectors over the degree-`t` monomial
/// basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentBasis<E> {
    pub degree: u32,
    pub space: Rref<E>,
}

impl<E> ComponentBasis<E> {
    pub fn dim(&self) -> usize {
        self.space.rank()
    }
}

/// Memoized results for a fixed scheme. The scheme is immutable after
/// construction, so every cached value stays valid for its lifetime.
#[derive(Clone, Debug)]
struct SchemeCache<E> {
    symbolic: HashMap<(u32, u32), ComponentBasis<E>>,
    power: HashMap<(u32, u32), ComponentBasis<E>>,
    alpha: HashMap<u32, u32>,
    regularity: Option<u32>,
    gens: Option<Vec<ComponentBasis<E>>>,
}

impl<E> Default for SchemeCache<E> {
    fn default() -> Self {
        SchemeCache {
            symbolic: HashMap::new(),
            power: HashMap::new(),
            alpha: HashMap::new(),
            regularity: None,
            gens: None,
        }
    }
}

/// A finite set of distinct points in P^n with multiplicities.
///
/// Coordinates are normalized so the first nonzero coordinate of each point
/// is 1; equality of normalized tuples detects duplicates.
#[derive(Clone, Debug)]
pub struct FatPointScheme<F: FieldOps> {
    field: F,
    n: usize,
    points: Vec<Vec<F::Elem>>,
    multiplicities: Vec<u32>,
    cache: RefCell<SchemeCache<F::Elem>>,
}

impl<F: FieldOps> FatPointScheme<F> {
    /// Builds a scheme from homogeneous coordinates (length `n + 1` each)
    /// and one multiplicity per point.
    pub fn new(
        field: F,
        n: usize,
        points: Vec<Vec<F::Elem>>,
        multiplicities: Vec<u32>,
    ) -> Result<Self, FatPointError> {
        assert!(n >= 1, "ambient dimension must be at least 1");
        if points.len() != multiplicities.len() {
            return Err(FatPointError::MultiplicityCount {
                points: points.len(),
                mults: multiplicities.len(),
            });
        }
        let mut normalized: Vec<Vec<F::Elem>> = Vec::with_capacity(points.len());
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != n + 1 {
                return Err(FatPointError::BadCoordinateCount {
                    index: i,
                    got: p.len(),
                    expected: n + 1,
                });
            }
            let lead = p.iter().position(|c| !field.is_zero(c));
            let Some(lead) = lead else {
                return Err(FatPointError::ZeroPoint { index: i });
            };
            let inv = field.inv(&p[lead]);
            let scaled: Vec<F::Elem> = p.iter().map(|c| field.mul(c, &inv)).collect();
            normalized.push(scaled);
        }
        for i in 0..normalized.len() {
            for j in (i + 1)..normalized.len() {
                if normalized[i] == normalized[j] {
                    return Err(FatPointError::DuplicatePoint {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(FatPointScheme {
            field,
            n,
            points: normalized,
            multiplicities,
            cache: RefCell::new(SchemeCache::default()),
        })
    }

    /// A reduced scheme: every point with multiplicity 1.
    pub fn reduced(field: F, n: usize, points: Vec<Vec<F::Elem>>) -> Result<Self, FatPointError> {
        let k = points.len();
        Self::new(field, n, points, vec![1; k])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn is_reduced(&self) -> bool {
        !self.points.is_empty() && self.multiplicities.iter().all(|&m| m == 1)
    }

    /// Scheme degree: the total number of independent conditions imposed
    /// when the points are in good position, `sum C(m_i + n - 1, n)`.
    pub fn degree(&self) -> usize {
        self.multiplicities
            .iter()
            .map(|&m| {
                if m == 0 {
                    0
                } else {
                    binomial_usize((m as usize + self.n - 1) as u64, self.n as u64)
                }
            })
            .sum()
    }

    fn condition_rows(&self, scale: u32, t: u32) -> (MonomialBasis, Vec<Vec<F::Elem>>) {
        let basis = MonomialBasis::new(self.n + 1, t);
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for (p, &m) in self.points.iter().zip(&self.multiplicities) {
            let order = scale.saturating_mul(m);
            if order == 0 {
                continue;
            }
            // Vanishing to order `order` at a point with a unit coordinate
            // is equivalent to vanishing of the divided-power derivatives
            // of order < `order` in the remaining variables alone: those
            // are the Taylor coefficients of the dehomogenization in the
            // chart where that coordinate is 1. Skipping the unit
            // coordinate keeps the condition matrix small.
            let lead = p
                .iter()
                .position(|c| !self.field.is_zero(c))
                .expect("points are nonzero");
            for small in derivative_indices(self.n, order - 1) {
                let mut alpha = small;
                alpha.insert(lead, 0);
                rows.push(hasse_row(&self.field, &basis, p, &alpha));
            }
        }
        (basis, rows)
    }

    /// Canonical basis of the degree-`t` component of the `m`-th symbolic
    /// power of the ideal of the scheme.
    pub fn symbolic_component(&self, m: u32, t: u32) -> Result<ComponentBasis<F::Elem>, FatPointError> {
        if m == 0 {
            return Err(FatPointError::BadSymbolicExponent(0));
        }
        if let Some(hit) = self.cache.borrow().symbolic.get(&(m, t)) {
            return Ok(hit.clone());
        }
        let (basis, rows) = self.condition_rows(m, t);
        let space = kernel_basis(&self.field, rows, basis.len());
        let out = ComponentBasis { degree: t, space };
        self.cache
            .borrow_mut()
            .symbolic
            .insert((m, t), out.clone());
        Ok(out)
    }

    /// Degree-`t` component of the ideal itself.
    pub fn ideal_component(&self, t: u32) -> Result<ComponentBasis<F::Elem>, FatPointError> {
        self.symbolic_component(1, t)
    }

    /// Hilbert function of the quotient by the ideal: the number of
    /// independent conditions the scheme imposes in degree `t`.
    pub fn hilbert_function(&self, t: u32) -> usize {
        let (basis, rows) = self.condition_rows(1, t);
        matrix::rank(&self.field, rows, basis.len())
    }

    /// Least degree `t >= 0` at which the Hilbert function equals its value
    /// at `t - 1` (with value 0 at -1). The function increases strictly
    /// until it reaches the scheme degree and is constant afterwards.
    pub fn regularity(&self) -> u32 {
        if let Some(r) = self.cache.borrow().regularity {
            return r;
        }
        let mut prev = 0usize;
        let bound = self.degree() as u32 + 2;
        for t in 0..=bound {
            let h = self.hilbert_function(t);
            if h == prev {
                self.cache.borrow_mut().regularity = Some(t);
                return t;
            }
            prev = h;
        }
        unreachable!("Hilbert function failed to stabilize by degree bound");
    }

    /// Initial degree of the `m`-th symbolic power: the least `t` with a
    /// nonzero degree-`t` element. A product of lines through the points
    /// shows `alpha <= m * sum(m_i)`, so the search below is bounded.
    pub fn alpha_symbolic(&self, m: u32) -> Result<u32, FatPointError> {
        if m == 0 {
            return Err(FatPointError::BadSymbolicExponent(0));
        }
        if let Some(&a) = self.cache.borrow().alpha.get(&m) {
            return Ok(a);
        }
        let total: u32 = self.multiplicities.iter().sum();
        let bound = m.saturating_mul(total);
        // A nonzero degree-t form has a nonzero order-t divided-power
        // derivative (those are exactly its coefficients), so it cannot
        // vanish to order above t at any point. The search may therefore
        // start at the largest local vanishing order.
        let start = self
            .multiplicities
            .iter()
            .map(|&mi| m.saturating_mul(mi))
            .max()
            .unwrap_or(0);
        for t in start..=bound {
            if self.symbolic_component(m, t)?.dim() > 0 {
                self.cache.borrow_mut().alpha.insert(m, t);
                return Ok(t);
            }
        }
        unreachable!("symbolic power has an element by degree m * sum(m_i)");
    }

    /// Initial degree of the ideal.
    pub fn alpha(&self) -> Result<u32, FatPointError> {
        self.alpha_symbolic(1)
    }

    /// Ideal components in the generating range of degrees
    /// `alpha..=regularity+1`, with a runtime check that no generators
    /// appear beyond the range (multiplying by linear forms reaches the
    /// next component exactly).
    fn generating_components(&self) -> Result<Vec<ComponentBasis<F::Elem>>, FatPointError> {
        if let Some(g) = &self.cache.borrow().gens {
            return Ok(g.clone());
        }
        let a = self.alpha()?;
        let top = self.regularity() + 1;
        let mut gens = Vec::new();
        for d in a..=top {
            gens.push(self.ideal_component(d)?);
        }
        // Saturation check: S_1 * I_top must already span I_{top+1}.
        let last = gens.last().expect("range nonempty");
        let next = self.ideal_component(top + 1)?;
        let lin = MonomialBasis::new(self.n + 1, 1);
        let btop = MonomialBasis::new(self.n + 1, top);
        let bnext = MonomialBasis::new(self.n + 1, top + 1);
        let mut prod_rows = Vec::new();
        for row in &last.space.rows {
            for k in 0..lin.len() {
                let mut unit = vec![self.field.zero(); lin.len()];
                unit[k] = self.field.one();
                prod_rows.push(multiply(&self.field, &btop, row, &lin, &unit, &bnext));
            }
        }
        let spanned = matrix::rank(&self.field, prod_rows, bnext.len());
        if spanned != next.dim() {
            return Err(FatPointError::Internal(format!(
                "generator range check failed: degree {} spans {} of {} dims",
                top + 1,
                spanned,
                next.dim()
            )));
        }
        self.cache.borrow_mut().gens = Some(gens.clone());
        Ok(gens)
    }

    /// Canonical basis of the degree-`t` component of the `r`-th ordinary
    /// power of the ideal.
    pub fn power_component(&self, r: u32, t: u32) -> Result<ComponentBasis<F::Elem>, FatPointError> {
        if r == 0 {
            return Err(FatPointError::BadPowerExponent(0));
        }
        let gens = self.generating_components()?;
        self.power_rec(&gens, r, t)
    }

    /// Memoized recursion for ordinary powers: `(I^r)_t` is spanned by the
    /// products of ideal generators with `(I^(r-1))_(t - deg)`. Borrows of
    /// the cache are kept short so the recursion can re-enter it.
    fn power_rec(
        &self,
        gens: &[ComponentBasis<F::Elem>],
        r: u32,
        t: u32,
    ) -> Result<ComponentBasis<F::Elem>, FatPointError> {
        if let Some(hit) = self.cache.borrow().power.get(&(r, t)) {
            return Ok(hit.clone());
        }
        let result = if r == 1 {
            self.ideal_component(t)?
        } else {
            let btarget = MonomialBasis::new(self.n + 1, t);
            let mut rows: Vec<Vec<F::Elem>> = Vec::new();
            for g in gens {
                if g.degree > t || g.dim() == 0 {
                    continue;
                }
                let prev = self.power_rec(gens, r - 1, t - g.degree)?;
                if prev.dim() == 0 {
                    continue;
                }
                let bprev = MonomialBasis::new(self.n + 1, t - g.degree);
                let bgen = MonomialBasis::new(self.n + 1, g.degree);
                for a in &prev.space.rows {
                    for b in &g.space.rows {
                        rows.push(multiply(&self.field, &bprev, a, &bgen, b, &btarget));
                    }
                }
            }
            let space = rref(&self.field, rows, btarget.len());
            ComponentBasis { degree: t, space }
        };
        self.cache.borrow_mut().power.insert((r, t), result.clone());
        Ok(result)
    }

    /// Decides whether the `m`-th symbolic power is contained in the `r`-th
    /// ordinary power, by exact degree-by-degree comparison.
    ///
    /// Degrees below `alpha(I^(m))` have nothing to test, and from
    /// `r * regularity` on the ordinary power agrees with the symbolic
    /// power in each degree, so the sweep over
    /// `alpha(I^(m)) <= t < r * regularity` is exhaustive.
    pub fn contains_symbolic_in_power(
        &self,
        m: u32,
        r: u32,
    ) -> Result<Containment, FatPointError> {
        if m == 0 {
            return Err(FatPointError::BadSymbolicExponent(0));
        }
        if r == 0 {
            return Err(FatPointError::BadPowerExponent(0));
        }
        let alpha_m = self.alpha_symbolic(m)?;
        // A smaller symbolic exponent cannot be contained: the power's
        // initial degree is r * alpha(I), strictly beyond alpha(I^(m)).
        if m < r && !self.points.is_empty() && self.multiplicities.iter().any(|&x| x > 0) {
            let sym = self.symbolic_component(m, alpha_m)?;
            let pow = self.power_component(r, alpha_m)?;
            if sym.dim() > 0 && pow.dim() == 0 {
                return Ok(Containment {
                    m,
                    r,
                    contained: false,
                    rule: ContainmentRule::SmallPower,
                    checked_degrees: vec![alpha_m],
                    first_failing_degree: Some(alpha_m),
                    witness: first_row_string(&self.field, &sym),
                });
            }
        }
        let stop = r * self.regularity();
        let mut checked = Vec::new();
        for t in alpha_m..stop {
            checked.push(t);
            let sym = self.symbolic_component(m, t)?;
            if sym.dim() == 0 {
                continue;
            }
            let pow = self.power_component(r, t)?;
            for row in &sym.space.rows {
                if !in_row_space(&self.field, &pow.space, row) {
                    return Ok(Containment {
                        m,
                        r,
                        contained: false,
                        rule: ContainmentRule::Direct,
                        checked_degrees: checked,
                        first_failing_degree: Some(t),
                        witness: Some(row_string(&self.field, &sym, row)),
                    });
                }
            }
        }
        Ok(Containment {
            m,
            r,
            contained: true,
            rule: ContainmentRule::Direct,
            checked_degrees: checked,
            first_failing_degree: None,
            witness: None,
        })
    }

    /// Quick containment criteria from initial degrees and regularity:
    /// containment fails when `alpha(I^(m)) < r * alpha(I)` and holds when
    /// `r * regularity(I) <= alpha(I^(m))`; otherwise indeterminate.
    pub fn bh_criteria(&self, m: u32, r: u32) -> Result<BhOutcome, FatPointError> {
        if m == 0 {
            return Err(FatPointError::BadSymbolicExponent(0));
        }
        if r == 0 {
            return Err(FatPointError::BadPowerExponent(0));
        }
        let alpha_m = self.alpha_symbolic(m)?;
        let alpha1 = self.alpha()?;
        let reg = self.regularity();
        if alpha_m < r * alpha1 {
            return Ok(BhOutcome::FailsByAlpha {
                alpha_symbolic: alpha_m,
                r_alpha: r * alpha1,
            });
        }
        if r * reg <= alpha_m {
            return Ok(BhOutcome::HoldsByReg {
                r_reg: r * reg,
                alpha_symbolic: alpha_m,
            });
        }
        Ok(BhOutcome::Indeterminate {
            alpha_symbolic: alpha_m,
            r_alpha: r * alpha1,
            r_reg: r * reg,
        })
    }

    /// Runs the exact containment sweep and the quick criteria together,
    /// failing with an internal error if they contradict each other.
    pub fn containment_with_consistency(
        &self,
        m: u32,
        r: u32,
    ) -> Result<(Containment, BhOutcome), FatPointError> {
        let direct = self.contains_symbolic_in_power(m, r)?;
        let bh = self.bh_criteria(m, r)?;
        let conflict = match &bh {
            BhOutcome::FailsByAlpha { .. } => direct.contained,
            BhOutcome::HoldsByReg { .. } => !direct.contained,
            BhOutcome::Indeterminate { .. } => false,
        };
        if conflict {
            return Err(FatPointError::Internal(format!(
                "containment sweep says contained={} but degree criteria say {:?}",
                direct.contained, bh
            )));
        }
        Ok((direct, bh))
    }

    /// Samples `alpha(I^(m)) / m` for `m = 1..=m_max` on a reduced scheme.
    /// The least sample is an upper bound for the limit; a caller-supplied
    /// per-point lower bound `eps` turns into the lower bound
    /// `max(1, r * eps)`.
    pub fn waldschmidt_estimate(
        &self,
        m_max: u32,
        eps_lower: Option<&Rat>,
    ) -> Result<WaldschmidtEstimate, FatPointError> {
        if !self.is_reduced() {
            return Err(FatPointError::NotReduced);
        }
        if m_max == 0 {
            return Err(FatPointError::BadSymbolicExponent(0));
        }
        let mut samples = Vec::new();
        let mut upper: Option<Rat> = None;
        for m in 1..=m_max {
            let d = self.alpha_symbolic(m)?;
            let ratio = Rat::new(Int::from(d), Int::from(m));
            if upper.as_ref().map_or(true, |u| &ratio < u) {
                upper = Some(ratio.clone());
            }
            samples.push(WaldschmidtSample {
                m,
                alpha: d,
                ratio,
            });
        }
        let one = Rat::one();
        let lower = match eps_lower {
            Some(eps) => {
                let scaled = rat_int(self.points.len() as i64) * eps;
                if scaled > one {
                    scaled
                } else {
                    one
                }
            }
            None => one,
        };
        Ok(WaldschmidtEstimate {
            samples,
            lower,
            upper: upper.expect("m_max >= 1"),
        })
    }

    /// Interval bounds for the resurgence from an interval `[lower, upper]`
    /// around the Waldschmidt constant: the resurgence lies in
    /// `[alpha / upper, regularity / lower]`.
    pub fn resurgence_bounds(
        &self,
        gamma_lower: &Rat,
        gamma_upper: &Rat,
    ) -> Result<(Rat, Rat), FatPointError> {
        if !self.is_reduced() {
            return Err(FatPointError::NotReduced);
        }
        let one = Rat::one();
        if gamma_lower < &one || gamma_upper < gamma_lower {
            return Err(FatPointError::BadGammaBounds {
                lower: crate::rat::rat_string(gamma_lower),
                upper: crate::rat::rat_string(gamma_upper),
            });
        }
        let alpha = rat_int(self.alpha()? as i64);
        let reg = rat_int(self.regularity() as i64);
        let mut lo = alpha / gamma_upper;
        if lo < one {
            lo = one;
        }
        let hi = reg / gamma_lower;
        Ok((lo, hi))
    }

    /// Direct verification of the characteristic-p containment
    /// `I^(2q-1) subset of I^q` for points in the plane, where `q` is a
    /// power of the field characteristic.
    pub fn frobenius_containment_check(&self, q: u64) -> Result<Containment, FatPointError> {
        let p = self.field.characteristic();
        if p == 0 {
            return Err(FatPointError::CharacteristicZero);
        }
        if self.n != 2 {
            return Err(FatPointError::BadAmbientDim(self.n));
        }
        let mut v = q;
        if v < p {
            return Err(FatPointError::NotPowerOfChar { q, p });
        }
        while v > 1 {
            if v % p != 0 {
                return Err(FatPointError::NotPowerOfChar { q, p });
            }
            v /= p;
        }
        let qq = u32::try_from(q)
            .map_err(|_| FatPointError::Internal(format!("q = {q} too large")))?;
        self.contains_symbolic_in_power(2 * qq - 1, qq)
    }
}

/// Which rule decided a containment query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContainmentRule {
    /// Exact degree-by-degree comparison (possibly over an empty range).
    Direct,
    /// `m < r`: the symbolic power starts strictly below the ordinary one.
    SmallPower,
}

impl ContainmentRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            ContainmentRule::Direct => "direct",
            ContainmentRule::SmallPower => "small-power",
        }
    }
}

/// Result of a containment query.
#[derive(Clone, Debug)]
pub struct Containment {
    pub m: u32,
    pub r: u32,
    pub contained: bool,
    pub rule: ContainmentRule,
    pub checked_degrees: Vec<u32>,
    pub first_failing_degree: Option<u32>,
    /// A symbolic-power element outside the ordinary power, when one exists.
    pub witness: Option<String>,
}

/// Outcome of the quick degree criteria for containment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BhOutcome {
    FailsByAlpha { alpha_symbolic: u32, r_alpha: u32 },
    HoldsByReg { r_reg: u32, alpha_symbolic: u32 },
    Indeterminate {
        alpha_symbolic: u32,
        r_alpha: u32,
        r_reg: u32,
    },
}

impl BhOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            BhOutcome::FailsByAlpha { .. } => "fails-by-alpha",
            BhOutcome::HoldsByReg { .. } => "holds-by-reg",
            BhOutcome::Indeterminate { .. } => "indeterminate",
        }
    }
}

/// One sample of the initial-degree sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct WaldschmidtSample {
    pub m: u32,
    pub alpha: u32,
    pub ratio: Rat,
}

/// Two-sided estimate of the limit `alpha(I^(m)) / m`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaldschmidtEstimate {
    pub samples: Vec<WaldschmidtSample>,
    pub lower: Rat,
    pub upper: Rat,
}

fn first_row_string<F: FieldOps>(field: &F, basis: &ComponentBasis<F::Elem>) -> Option<String> {
    basis
        .space
        .rows
        .first()
        .map(|row| row_string(field, basis, row))
}

/// Renders a coefficient vector as a readable polynomial.
pub fn row_string<F: FieldOps>(
    field: &F,
    basis: &ComponentBasis<F::Elem>,
    row: &[F::Elem],
) -> String {
    let monos = MonomialBasis::new(row_nvars(basis, row), basis.degree);
    let mut terms = Vec::new();
    for (i, c) in row.iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        let cs = field.elem_string(c);
        let ms = monos.monomial_string(i);
        if cs == "1" && ms != "1" {
            terms.push(ms);
        } else if ms == "1" {
            terms.push(cs);
        } else {
            terms.push(format!("{cs}*{ms}"));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn row_nvars<E>(basis: &ComponentBasis<E>, row: &[E]) -> usize {
    // Recover the variable count from the component size: the degree-t
    // basis in v variables has C(t + v - 1, v - 1) monomials.
    let len = row.len();
    for v in 1..=8 {
        if binomial_usize((basis.degree as usize + v - 1) as u64, (v - 1) as u64) == len {
            return v;
        }
    }
    panic!("cannot infer variable count from component size {len}");
}

#[cfg(test)]
mod tests {
    use super::field::{PrimeField, RationalField};
    use super::*;
    use crate::rat::rat;

    fn qpoint(coords: &[i64]) -> Vec<Rat> {
        coords.iter().map(|&c| rat(c, 1)).collect()
    }

    fn three_coordinate_points() -> FatPointScheme<RationalField> {
        FatPointScheme::reduced(
            RationalField,
            2,
            vec![qpoint(&[1, 0, 0]), qpoint(&[0, 1, 0]), qpoint(&[0, 0, 1])],
        )
        .unwrap()
    }

    fn three_collinear_points() -> FatPointScheme<RationalField> {
        FatPointScheme::reduced(
            RationalField,
            2,
            vec![qpoint(&[1, 0, 0]), qpoint(&[0, 1, 0]), qpoint(&[1, 1, 0])],
        )
        .unwrap()
    }

    fn three_collinear_plus_one() -> FatPointScheme<RationalField> {
        FatPointScheme::reduced(
            RationalField,
            2,
            vec![
                qpoint(&[1, 0, 0]),
                qpoint(&[0, 1, 0]),
                qpoint(&[1, 1, 0]),
                qpoint(&[0, 0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validation_rejects_bad_input() {
        let f = RationalField;
        assert!(matches!(
            FatPointScheme::reduced(f, 2, vec![qpoint(&[0, 0, 0])]),
            Err(FatPointError::ZeroPoint { .. })
        ));
        assert!(matches!(
            FatPointScheme::reduced(f, 2, vec![qpoint(&[1, 0, 0]), qpoint(&[2, 0, 0])]),
            Err(FatPointError::DuplicatePoint { .. })
        ));
        assert!(matches!(
            FatPointScheme::reduced(f, 2, vec![qpoint(&[1, 0])]),
            Err(FatPointError::BadCoordinateCount { .. })
        ));
    }

    #[test]
    fn three_points_basic_invariants() {
        let z = three_coordinate_points();
        assert_eq!(z.alpha().unwrap(), 2);
        assert_eq!(z.regularity(), 2);
        assert_eq!(z.degree(), 3);
        // Hilbert function 1, 3, 3, 3, ...
        assert_eq!(z.hilbert_function(0), 1);
        assert_eq!(z.hilbert_function(1), 3);
        assert_eq!(z.hilbert_function(2), 3);
        assert_eq!(z.hilbert_function(5), 3);
        // I_2 is spanned by the three coordinate products.
        assert_eq!(z.ideal_component(2).unwrap().dim(), 3);
    }

    #[test]
    fn three_points_symbolic_alpha_sequence() {
        // alpha(I^(m)) = 3s + 2i for m = 2s + i with i in {0, 1}.
        let z = three_coordinate_points();
        let expected = [2u32, 3, 5, 6, 8, 9];
        for (m, want) in (1..=6).zip(expected) {
            assert_eq!(z.alpha_symbolic(m).unwrap(), want, "m = {m}");
        }
    }

    #[test]
    fn symbolic_square_in_degree_three_is_the_triple_product() {
        let z = three_coordinate_points();
        let c = z.symbolic_component(2, 3).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(
            row_string(&RationalField, &c, &c.space.rows[0]),
            "x0*x1*x2"
        );
    }

    #[test]
    fn power_component_dimensions() {
        let one_point =
            FatPointScheme::reduced(RationalField, 2, vec![qpoint(&[1, 0, 0])]).unwrap();
        assert_eq!(one_point.power_component(2, 2).unwrap().dim(), 3);

        let z = three_coordinate_points();
        assert_eq!(z.power_component(2, 4).unwrap().dim(), 6);
        // alpha(I^2) = 4: nothing in degree 3.
        assert_eq!(z.power_component(2, 3).unwrap().dim(), 0);
    }

    #[test]
    fn containment_for_three_points() {
        let z = three_coordinate_points();
        let bad = z.contains_symbolic_in_power(2, 2).unwrap();
        assert!(!bad.contained);
        assert_eq!(bad.first_failing_degree, Some(3));
        assert_eq!(bad.witness.as_deref(), Some("x0*x1*x2"));
        let good = z.contains_symbolic_in_power(3, 2).unwrap();
        assert!(good.contained);
        // m >= (4r - 1) / 3 is the exact containment law for this scheme.
        for r in 1..=3u32 {
            for m in 1..=6u32 {
                let want = 3 * m >= 4 * r - 1;
                let got = z.contains_symbolic_in_power(m, r).unwrap().contained;
                assert_eq!(got, want, "m = {m}, r = {r}");
            }
        }
    }

    #[test]
    fn consistency_check_never_conflicts_on_three_points() {
        let z = three_coordinate_points();
        for r in 1..=3u32 {
            for m in 1..=6u32 {
                z.containment_with_consistency(m, r).unwrap();
            }
        }
    }

    #[test]
    fn small_power_rule_gives_witness() {
        let z = three_coordinate_points();
        let c = z.contains_symbolic_in_power(1, 2).unwrap();
        assert!(!c.contained);
        assert_eq!(c.rule, ContainmentRule::SmallPower);
        assert_eq!(c.first_failing_degree, Some(2));
    }

    #[test]
    fn collinear_alpha_is_linear_in_m() {
        let z = three_collinear_points();
        assert_eq!(z.regularity(), 3);
        for m in 1..=5 {
            assert_eq!(z.alpha_symbolic(m).unwrap(), m);
        }
    }

    #[test]
    fn three_collinear_plus_one_alpha_sequence() {
        let z = three_collinear_plus_one();
        let expected = [2u32, 4, 5, 7, 9, 10];
        for (m, want) in (1..=6).zip(expected) {
            assert_eq!(z.alpha_symbolic(m).unwrap(), want, "m = {m}");
        }
    }

    #[test]
    fn waldschmidt_estimate_three_points() {
        let z = three_coordinate_points();
        let est = z
            .waldschmidt_estimate(4, Some(&rat(1, 2)))
            .unwrap();
        assert_eq!(est.upper, rat(3, 2));
        assert_eq!(est.lower, rat(3, 2));
        let fat = FatPointScheme::new(
            RationalField,
            2,
            vec![qpoint(&[1, 0, 0])],
            vec![2],
        )
        .unwrap();
        assert!(matches!(
            fat.waldschmidt_estimate(2, None),
            Err(FatPointError::NotReduced)
        ));
    }

    #[test]
    fn resurgence_bounds_three_points() {
        let z = three_coordinate_points();
        let (lo, hi) = z.resurgence_bounds(&rat(3, 2), &rat(3, 2)).unwrap();
        assert_eq!(lo, rat(4, 3));
        assert_eq!(hi, rat(4, 3));
        assert!(z.resurgence_bounds(&rat(2, 1), &rat(1, 1)).is_err());
    }

    #[test]
    fn single_point_resurgence_is_one() {
        let z = FatPointScheme::reduced(RationalField, 2, vec![qpoint(&[1, 0, 0])]).unwrap();
        assert_eq!(z.alpha().unwrap(), 1);
        assert_eq!(z.regularity(), 1);
        let (lo, hi) = z.resurgence_bounds(&rat(1, 1), &rat(1, 1)).unwrap();
        assert_eq!(lo, rat(1, 1));
        assert_eq!(hi, rat(1, 1));
    }

    #[test]
    fn frobenius_containment_char_two() {
        let f2 = PrimeField::new(2).unwrap();
        let pts: Vec<Vec<u64>> = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
        ];
        let z = FatPointScheme::reduced(f2, 2, pts).unwrap();
        let c = z.frobenius_containment_check(2).unwrap();
        assert!(c.contained);
        assert!(matches!(
            z.frobenius_containment_check(3),
            Err(FatPointError::NotPowerOfChar { .. })
        ));
        let q = three_coordinate_points();
        assert!(matches!(
            q.frobenius_containment_check(2),
            Err(FatPointError::CharacteristicZero)
        ));
    }

    #[test]
    fn frobenius_containment_char_three() {
        let f3 = PrimeField::new(3).unwrap();
        let pts: Vec<Vec<u64>> = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]];
        let z = FatPointScheme::reduced(f3, 2, pts).unwrap();
        assert!(z.frobenius_containment_check(3).unwrap().contained);
    }

    #[test]
    fn hilbert_function_over_prime_field_matches_rational_for_integral_points() {
        let fq = RationalField;
        let fp = PrimeField::new(2147483647).unwrap();
        let qz = FatPointScheme::new(
            fq,
            2,
            vec![qpoint(&[1, 0, 0]), qpoint(&[0, 1, 0]), qpoint(&[1, 1, 1])],
            vec![2, 1, 1],
        )
        .unwrap();
        let pz = FatPointScheme::new(
            fp,
            2,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 1]],
            vec![2, 1, 1],
        )
        .unwrap();
        for t in 0..6 {
            assert_eq!(qz.hilbert_function(t), pz.hilbert_function(t), "t = {t}");
        }
    }
}
