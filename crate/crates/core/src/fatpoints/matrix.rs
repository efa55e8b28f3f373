//! Exact dense linear algebra over a [`FieldOps`] field: reduced row
//! echelon form, rank, kernel bases, and row-space membership.
//!
//! Every routine is deterministic and produces a canonical result, so two
//! computations of the same subspace yield identical row lists. That lets
//! higher layers compare bases by equality.

use super::field::FieldOps;

/// A matrix in reduced row echelon form: nonzero rows only, pivot columns
/// strictly increasing, pivots equal to one, pivot columns cleared.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<E> {
    pub ncols: usize,
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
}

impl<E> Rref<E> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Reduces `rows` to canonical reduced row echelon form.
pub fn rref<F: FieldOps>(field: &F, rows: Vec<Vec<F::Elem>>, ncols: usize) -> Rref<F::Elem> {
    let mut work: Vec<Vec<F::Elem>> = rows;
    for row in &work {
        assert_eq!(row.len(), ncols, "row length mismatch");
    }
    let mut pivots: Vec<usize> = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        // Find a pivot in this column at or below next_row.
        let mut pivot_row = None;
        for (i, row) in work.iter().enumerate().skip(next_row) {
            if !field.is_zero(&row[col]) {
                pivot_row = Some(i);
                break;
            }
        }
        let Some(p) = pivot_row else { continue };
        work.swap(next_row, p);
        let inv = field.inv(&work[next_row][col]);
        for c in col..ncols {
            work[next_row][c] = field.mul(&work[next_row][c], &inv);
        }
        for i in 0..work.len() {
            if i == next_row || field.is_zero(&work[i][col]) {
                continue;
            }
            let factor = work[i][col].clone();
            for c in col..ncols {
                let t = field.mul(&factor, &work[next_row][c]);
                work[i][c] = field.sub(&work[i][c], &t);
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == work.len() {
            break;
        }
    }
    work.truncate(next_row);
    Rref {
        ncols,
        rows: work,
        pivots,
    }
}

/// Rank of the row span.
pub fn rank<F: FieldOps>(field: &F, rows: Vec<Vec<F::Elem>>, ncols: usize) -> usize {
    rref(field, rows, ncols).rank()
}

/// Canonical basis of the right kernel `{x : M x = 0}` of the matrix with
/// the given rows, returned as the reduced row echelon form of the kernel.
pub fn kernel_basis<F: FieldOps>(
    field: &F,
    rows: Vec<Vec<F::Elem>>,
    ncols: usize,
) -> Rref<F::Elem> {
    let reduced = rref(field, rows, ncols);
    let pivot_set: std::collections::HashSet<usize> = reduced.pivots.iter().copied().collect();
    let mut basis: Vec<Vec<F::Elem>> = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (i, &p) in reduced.pivots.iter().enumerate() {
            v[p] = field.neg(&reduced.rows[i][free]);
        }
        basis.push(v);
    }
    // Re-reduce so the basis is canonical regardless of construction order.
    rref(field, basis, ncols)
}

/// Whether `v` lies in the row space described by `space` (must be in RREF).
pub fn in_row_space<F: FieldOps>(field: &F, space: &Rref<F::Elem>, v: &[F::Elem]) -> bool {
    assert_eq!(v.len(), space.ncols, "vector length mismatch");
    let mut rem: Vec<F::Elem> = v.to_vec();
    for (i, &p) in space.pivots.iter().enumerate() {
        if field.is_zero(&rem[p]) {
            continue;
        }
        let factor = rem[p].clone();
        for c in p..space.ncols {
            let t = field.mul(&factor, &space.rows[i][c]);
            rem[c] = field.sub(&rem[c], &t);
        }
    }
    rem.iter().all(|e| field.is_zero(e))
}

#[cfg(test)]
mod tests {
    use super::super::field::{PrimeField, RationalField};
    use super::*;
    use crate::rat::rat;

    fn qrows(data: &[&[i64]]) -> Vec<Vec<crate::rat::Rat>> {
        data.iter()
            .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
            .collect()
    }

    #[test]
    fn rref_is_canonical() {
        let f = RationalField;
        let a = rref(&f, qrows(&[&[2, 4, 6], &[1, 2, 4]]), 3);
        let b = rref(&f, qrows(&[&[1, 2, 4], &[4, 8, 12]]), 3);
        assert_eq!(a, b);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.pivots, vec![0, 2]);
        assert_eq!(a.rows[0], vec![rat(1, 1), rat(2, 1), rat(0, 1)]);
    }

    #[test]
    fn kernel_dimension_and_membership() {
        let f = RationalField;
        // x + y + z = 0 over Q: kernel has dimension 2.
        let ker = kernel_basis(&f, qrows(&[&[1, 1, 1]]), 3);
        assert_eq!(ker.rank(), 2);
        for row in &ker.rows {
            let sum = row.iter().fold(rat(0, 1), |a, b| a + b);
            assert_eq!(sum, rat(0, 1));
        }
        let space = rref(&f, qrows(&[&[1, 0, -1], &[0, 1, 2]]), 3);
        assert!(in_row_space(&f, &space, &[rat(2, 1), rat(3, 1), rat(4, 1)]));
        assert!(!in_row_space(&f, &space, &[rat(0, 1), rat(0, 1), rat(1, 1)]));
    }

    #[test]
    fn prime_field_rank_matches_rational_rank_away_from_bad_primes() {
        let q = RationalField;
        let p = PrimeField::new(2147483647).unwrap();
        let data: [&[i64]; 3] = [&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]];
        let qr = rank(&q, qrows(&data), 3);
        let prows: Vec<Vec<u64>> = data
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| p.from_int(&crate::rat::int(x).into()))
                    .collect()
            })
            .collect();
        assert_eq!(qr, 2);
        assert_eq!(rank(&p, prows, 3), 2);
    }

    #[test]
    fn kernel_of_full_rank_matrix_is_empty() {
        let f = PrimeField::new(101).unwrap();
        let rows = vec![vec![1u64, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(kernel_basis(&f, rows, 3).rank(), 0);
    }
}
