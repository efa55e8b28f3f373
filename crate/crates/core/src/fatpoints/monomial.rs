//! Monomial bases for graded pieces of a polynomial ring, vanishing
//! conditions for fat points, and multiplication of homogeneous forms
//! expressed in those bases.
//!
//! A form of degree `t` in `nvars` variables is stored as a coefficient
//! vector over the degree-`t` monomial basis in descending graded reverse
//! lexicographic order. The ordering is fixed so that bases (and hence
//! reduced echelon forms) are canonical.

use super::field::FieldOps;
use crate::rat::{binomial, Int};
use std::collections::HashMap;

/// The degree-`t` monomial basis in `nvars` variables, with an index map
/// for products.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub nvars: usize,
    pub degree: u32,
    pub exponents: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

/// Compares exponent vectors in graded reverse lexicographic order
/// (equal degrees assumed): `a` precedes `b` when the last nonzero entry
/// of `a - b` is negative.
fn grevlex_greater(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // Smaller exponent on the latest differing variable ranks higher.
            return b[i].cmp(&a[i]).reverse();
        }
    }
    std::cmp::Ordering::Equal
}

impl MonomialBasis {
    /// Enumerates all monomials of the given degree, descending grevlex.
    pub fn new(nvars: usize, degree: u32) -> Self {
        assert!(nvars >= 1);
        let mut exponents: Vec<Vec<u32>> = Vec::new();
        let mut current = vec![0u32; nvars];
        fill(&mut exponents, &mut current, 0, degree);
        exponents.sort_by(|a, b| grevlex_greater(a, b));
        let index = exponents
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        MonomialBasis {
            nvars,
            degree,
            exponents,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn index_of(&self, exp: &[u32]) -> usize {
        *self.index.get(exp).expect("monomial in basis")
    }

    /// Human-readable monomial such as `x0^2*x2`.
    pub fn monomial_string(&self, i: usize) -> String {
        let exp = &self.exponents[i];
        let mut parts: Vec<String> = Vec::new();
        for (v, &e) in exp.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{v}")),
                _ => parts.push(format!("x{v}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, var: usize, remaining: u32) {
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e;
        fill(out, current, var + 1, remaining - e);
        current[var] = 0;
    }
}

/// The row of the vanishing-conditions matrix for one divided-power
/// (Hasse) derivative `alpha` at `point`: the entry over monomial
/// `x^beta` is `prod_j C(beta_j, alpha_j) * point^(beta-alpha)`.
///
/// Divided powers make the condition set correct in every characteristic;
/// imposing all rows with `|alpha| <= m-1` cuts out exactly the degree-`t`
/// forms with multiplicity at least `m` at the point.
pub fn hasse_row<F: FieldOps>(
    field: &F,
    basis: &MonomialBasis,
    point: &[F::Elem],
    alpha: &[u32],
) -> Vec<F::Elem> {
    assert_eq!(point.len(), basis.nvars);
    assert_eq!(alpha.len(), basis.nvars);
    let mut row = Vec::with_capacity(basis.len());
    'mono: for beta in &basis.exponents {
        let mut entry = field.one();
        for j in 0..basis.nvars {
            if beta[j] < alpha[j] {
                row.push(field.zero());
                continue 'mono;
            }
            let c: Int = binomial(beta[j] as u64, alpha[j] as u64);
            entry = field.mul(&entry, &field.from_int(&c));
            let mut pw = field.one();
            for _ in 0..(beta[j] - alpha[j]) {
                pw = field.mul(&pw, &point[j]);
            }
            entry = field.mul(&entry, &pw);
        }
        row.push(entry);
    }
    row
}

/// All derivative multi-indices `alpha` with `|alpha| <= order` in
/// `nvars` variables, in a deterministic order.
pub fn derivative_indices(nvars: usize, order: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = Vec::new();
    for d in 0..=order {
        let basis = MonomialBasis::new(nvars, d);
        all.extend(basis.exponents);
    }
    all
}

/// Product of homogeneous forms given by coefficient vectors over the
/// degree bases `ba` and `bb`; the result is over the basis of degree
/// `ba.degree + bb.degree`.
pub fn multiply<F: FieldOps>(
    field: &F,
    ba: &MonomialBasis,
    a: &[F::Elem],
    bb: &MonomialBasis,
    b: &[F::Elem],
    bc: &MonomialBasis,
) -> Vec<F::Elem> {
    assert_eq!(ba.nvars, bb.nvars);
    assert_eq!(bc.degree, ba.degree + bb.degree);
    let mut out = vec![field.zero(); bc.len()];
    for (i, ea) in ba.exponents.iter().enumerate() {
        if field.is_zero(&a[i]) {
            continue;
        }
        for (j, eb) in bb.exponents.iter().enumerate() {
            if field.is_zero(&b[j]) {
                continue;
            }
            let sum: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let k = bc.index_of(&sum);
            let t = field.mul(&a[i], &b[j]);
            out[k] = field.add(&out[k], &t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::field::RationalField;
    use super::*;
    use crate::rat::rat;

    #[test]
    fn basis_sizes_are_binomial_coefficients() {
        // dim of degree-t forms in n+1 variables is C(t+n, n).
        assert_eq!(MonomialBasis::new(3, 0).len(), 1);
        assert_eq!(MonomialBasis::new(3, 1).len(), 3);
        assert_eq!(MonomialBasis::new(3, 2).len(), 6);
        assert_eq!(MonomialBasis::new(3, 5).len(), 21);
        assert_eq!(MonomialBasis::new(4, 3).len(), 20);
    }

    #[test]
    fn grevlex_order_degree_two() {
        let b = MonomialBasis::new(3, 2);
        let listed: Vec<Vec<u32>> = b.exponents.clone();
        assert_eq!(
            listed,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![0, 1, 1],
                vec![0, 0, 2],
            ]
        );
        assert_eq!(b.monomial_string(1), "x0*x1");
    }

    #[test]
    fn hasse_row_at_coordinate_point() {
        let f = RationalField;
        let b = MonomialBasis::new(3, 2);
        // Evaluation (alpha = 0) at (1,0,0) picks out the x0^2 coefficient.
        let row = hasse_row(&f, &b, &[rat(1, 1), rat(0, 1), rat(0, 1)], &[0, 0, 0]);
        let expected: Vec<_> = (0..6).map(|i| rat((i == 0) as i64, 1)).collect();
        assert_eq!(row, expected);
        // d/dx1 at (1,0,0): picks x0*x1 with coefficient 1.
        let row = hasse_row(&f, &b, &[rat(1, 1), rat(0, 1), rat(0, 1)], &[0, 1, 0]);
        assert_eq!(row[1], rat(1, 1));
        assert_eq!(row.iter().filter(|e| *e != &rat(0, 1)).count(), 1);
    }

    #[test]
    fn multiplication_matches_hand_product() {
        let f = RationalField;
        let b1 = MonomialBasis::new(2, 1);
        let b2 = MonomialBasis::new(2, 2);
        // (x0 + x1)^2 = x0^2 + 2 x0 x1 + x1^2.
        let lin = vec![rat(1, 1), rat(1, 1)];
        let sq = multiply(&f, &b1, &lin, &b1, &lin, &b2);
        assert_eq!(sq, vec![rat(1, 1), rat(2, 1), rat(1, 1)]);
    }

    #[test]
    fn derivative_index_count() {
        // |alpha| <= 2 in 3 variables: 1 + 3 + 6 = 10 indices.
        assert_eq!(derivative_indices(3, 2).len(), 10);
    }
}
