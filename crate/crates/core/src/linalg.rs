//! Exact Gaussian elimination over a [`Field`].

use std::collections::BTreeMap;

use crate::field::{Coeff, Field};

/// Sparse row: `(column, value)` pairs with strictly increasing columns and
/// no zero values.
pub type SparseRow<E> = Vec<(usize, E)>;

/// Basis of `{ x : M x = 0 }` for the `rows × ncols` matrix given by its
/// sparse rows.
///
/// Reduced row echelon form, scanning columns left to right and pivoting on
/// the first remaining row with a nonzero entry. Each basis vector has a 1 in
/// one free column and zeros in the others; vectors come out in increasing
/// free-column order.
pub fn nullspace<F: Field>(
    field: &F,
    rows: &[SparseRow<F::Elem>],
    ncols: usize,
) -> Vec<Vec<F::Elem>> {
    let (pivots, reduced) = rref(field, rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::with_capacity(ncols - pivots.len());
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = reduced[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Rank of the matrix given by sparse rows.
pub fn matrix_rank<F: Field>(field: &F, rows: &[SparseRow<F::Elem>], ncols: usize) -> usize {
    rref(field, rows, ncols).0.len()
}

fn rref<F: Field>(
    field: &F,
    rows: &[SparseRow<F::Elem>],
    ncols: usize,
) -> (Vec<usize>, Vec<Vec<F::Elem>>) {
    let mut m: Vec<Vec<F::Elem>> = rows
        .iter()
        .map(|row| {
            let mut dense = vec![field.zero(); ncols];
            for (c, v) in row {
                dense[*c] = v.clone();
            }
            dense
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == m.len() {
            break;
        }
        let Some(found) = (next..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next, found);
        let inv = field.inv(&m[next][col]).expect("nonzero pivot");
        for x in m[next].iter_mut().skip(col) {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m[next].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..ncols {
                if !pivot_row[c].is_zero() {
                    row[c] = field.sub(&row[c], &field.mul(&factor, &pivot_row[c]));
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    m.truncate(pivots.len());
    (pivots, m)
}

/// Incremental row echelon form for rank computations on many sparse
/// vectors.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    field: F,
    pivots: BTreeMap<usize, SparseRow<F::Elem>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F) -> Self {
        Echelon {
            field,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the stored pivots; returns `true` if it was
    /// independent (and is now stored).
    pub fn insert(&mut self, mut row: SparseRow<F::Elem>) -> bool {
        row.retain(|(_, v)| !v.is_zero());
        loop {
            let Some((lead, lead_val)) = row.first().cloned() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(pivot) => {
                    row = axpy(&self.field, &row, &lead_val.neg(), pivot);
                }
                None => {
                    let inv = self.field.inv(&lead_val).expect("nonzero lead");
                    for (_, v) in row.iter_mut() {
                        *v = self.field.mul(v, &inv);
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }
}

/// `x + factor * y` on sparse rows.
fn axpy<F: Field>(
    field: &F,
    x: &SparseRow<F::Elem>,
    factor: &F::Elem,
    y: &SparseRow<F::Elem>,
) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, field.mul(factor, &y[j].1)));
            j += 1;
        } else {
            let v = x[i].1.add(&field.mul(factor, &y[j].1));
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};

    fn rows<F: Field>(f: &F, dense: &[&[i64]]) -> Vec<SparseRow<F::Elem>> {
        dense
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(c, &v)| (c, f.lift(v)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn nullspace_of_small_matrix() {
        let f = RationalField;
        let m = rows(&f, &[&[1, 1, 0], &[0, 1, 1]]);
        let ns = nullspace(&f, &m, 3);
        assert_eq!(ns.len(), 1);
        let v: Vec<_> = ns[0].iter().map(|x| x.to_integer()).collect();
        assert_eq!(v, vec![1.into(), (-1).into(), 1.into()]);
        assert_eq!(matrix_rank(&f, &m, 3), 2);
    }

    #[test]
    fn nullspace_without_constraints() {
        let f = PrimeField::default();
        assert_eq!(nullspace(&f, &[], 3).len(), 3);
    }

    #[test]
    fn echelon_rank() {
        let f = PrimeField::default();
        let mut e = Echelon::new(f);
        for r in rows(
            &f,
            &[&[1, 2, 0], &[2, 4, 0], &[0, 1, 1], &[1, 3, 1], &[0, 0, 0]],
        ) {
            e.insert(r);
        }
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn modular_rank_sees_characteristic() {
        let g2 = PrimeField::new(2).unwrap();
        let q = RationalField;
        let m = [&[1i64, 1][..], &[1, -1][..]];
        assert_eq!(matrix_rank(&g2, &rows(&g2, &m), 2), 1);
        assert_eq!(matrix_rank(&q, &rows(&q, &m), 2), 2);
    }
}
