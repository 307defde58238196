//! Exact Gaussian elimination over [`Scalar`].

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves the square system `a x = b`.
pub fn solve(mut a: Vec<Vec<Scalar>>, mut b: Vec<Scalar>) -> Result<Vec<Scalar>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("system is not square".into()));
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularSystem)?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].inv()?;
        for k in col..n {
            a[col][k] = &a[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for k in col..n {
                let t = &f * &a[col][k];
                a[r][k] -= &t;
            }
            let t = &f * &b[col];
            b[r] -= &t;
        }
    }
    Ok(b)
}

/// Rank of a dense matrix given by rows.
pub fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(ncols, Scalar::zero());
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] * &inv;
            for k in col..ncols {
                let t = &f * &rows[rank][k];
                rows[r][k] -= &t;
            }
        }
        rank += 1;
    }
    rank
}

/// Incremental row reduction of sparse rows. Each stored row is normalized
/// to a leading `1` in its smallest column.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    pivots: BTreeMap<usize, BTreeMap<usize, Scalar>>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        SparseEchelon::default()
    }

    /// Reduces `row` against the stored pivots. Returns the new pivot column,
    /// or `None` when the row was dependent.
    pub fn insert(&mut self, mut row: BTreeMap<usize, Scalar>) -> Option<usize> {
        row.retain(|_, v| !v.is_zero());
        while let Some((&col, lead)) = row.iter().next() {
            let Some(piv) = self.pivots.get(&col) else {
                let inv = lead.inv().expect("nonzero entry");
                for v in row.values_mut() {
                    *v = &*v * &inv;
                }
                self.pivots.insert(col, row);
                return Some(col);
            };
            let f = lead.clone();
            for (k, pv) in piv {
                let t = &f * pv;
                let e = row.entry(*k).or_insert_with(Scalar::zero);
                *e -= &t;
                if e.is_zero() {
                    row.remove(k);
                }
            }
        }
        None
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }
}
