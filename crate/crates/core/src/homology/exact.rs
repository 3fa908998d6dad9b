//! Rank over `Q` with exact integer arithmetic.
//!
//! Boundary matrices have `±1` entries, so most of the rank comes from unit
//! pivots, which eliminate over `Z` without denominators. Columns whose
//! leading entry is not a unit are set aside, fully reduced against the unit
//! pivots afterwards, and what is left (the Schur complement on the non-pivot
//! rows) goes to fraction-free Bareiss elimination over big integers.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::complex::BoundaryMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_EXACT_COLUMN_CAP: usize = 20_000;

/// Cells above which the dense Bareiss stage refuses to run.
const BAREISS_CELL_CAP: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct ExactOptions<'a> {
    pub column_cap: usize,
    pub cancel: Option<&'a AtomicBool>,
}

impl Default for ExactOptions<'_> {
    fn default() -> Self {
        ExactOptions { column_cap: DEFAULT_EXACT_COLUMN_CAP, cancel: None }
    }
}

struct Overflow;

type SparseCol = BTreeMap<u32, i64>;

pub fn rank(m: &BoundaryMatrix, opts: &ExactOptions<'_>) -> Result<usize> {
    if m.cols() > opts.column_cap {
        return Err(Error::CapacityExceeded {
            what: "columns for exact rank".into(),
            count: m.cols() as u64,
            cap: opts.column_cap as u64,
        });
    }
    if m.nnz() == 0 {
        return Ok(0);
    }
    match unit_pivot_rank(m, opts.cancel)? {
        Ok(r) => Ok(r),
        Err(Overflow) => {
            let dense: Vec<Vec<BigInt>> = m
                .to_dense()
                .into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect();
            bareiss_rank(dense, m.rows(), m.cols())
        }
    }
}

fn check_cancel(cancel: Option<&AtomicBool>) -> Result<()> {
    match cancel {
        Some(flag) if flag.load(Ordering::Relaxed) => Err(Error::Cancelled),
        _ => Ok(()),
    }
}

/// Subtracts `coef * pivot` from `col`, where the pivot has leading entry 1.
fn eliminate(col: &mut SparseCol, pivot: &[(u32, i64)], coef: i64) -> std::result::Result<(), Overflow> {
    for &(r, w) in pivot {
        let delta = coef.checked_mul(w).ok_or(Overflow)?;
        let e = col.entry(r).or_insert(0);
        *e = e.checked_sub(delta).ok_or(Overflow)?;
        if *e == 0 {
            col.remove(&r);
        }
    }
    Ok(())
}

fn unit_pivot_rank(m: &BoundaryMatrix, cancel: Option<&AtomicBool>) -> Result<std::result::Result<usize, Overflow>> {
    // rows eliminated from last to first, matching the modular engine's
    // default for boundary matrices
    let rows = m.rows() as u32;
    let flip = |r: u32| rows - 1 - r;
    let mut pivots: Vec<Option<Vec<(u32, i64)>>> = vec![None; m.rows()];
    let mut deferred: Vec<SparseCol> = Vec::new();
    let mut rank = 0usize;

    for c in 0..m.cols() {
        if c % 256 == 0 {
            check_cancel(cancel)?;
        }
        let mut col: SparseCol = m.column(c).map(|(r, v)| (flip(r), v as i64)).collect();
        while let Some((&lead, &coef)) = col.iter().next() {
            match &pivots[lead as usize] {
                Some(piv) => {
                    if eliminate(&mut col, piv, coef).is_err() {
                        return Ok(Err(Overflow));
                    }
                }
                None if coef.abs() == 1 => {
                    let piv: Vec<(u32, i64)> = col.iter().map(|(&r, &v)| (r, v * coef)).collect();
                    pivots[lead as usize] = Some(piv);
                    rank += 1;
                    col.clear();
                    break;
                }
                None => {
                    deferred.push(std::mem::take(&mut col));
                    break;
                }
            }
        }
    }

    // clear every pivot row from the deferred columns
    let mut residual: Vec<SparseCol> = Vec::new();
    for mut col in deferred {
        check_cancel(cancel)?;
        let mut cursor = 0u32;
        while let Some((&r, &coef)) = col.range(cursor..).next() {
            match &pivots[r as usize] {
                Some(piv) => {
                    if eliminate(&mut col, piv, coef).is_err() {
                        return Ok(Err(Overflow));
                    }
                }
                None => cursor = r + 1,
            }
        }
        if !col.is_empty() {
            residual.push(col);
        }
    }
    if residual.is_empty() {
        return Ok(Ok(rank));
    }
    let mut free_rows: Vec<u32> = residual.iter().flat_map(|c| c.keys().copied()).collect();
    free_rows.sort_unstable();
    free_rows.dedup();
    let index = |r: u32| free_rows.binary_search(&r).unwrap();
    let (nr, nc) = (free_rows.len(), residual.len());
    let mut dense = vec![vec![BigInt::zero(); nc]; nr];
    for (c, col) in residual.iter().enumerate() {
        for (&r, &v) in col {
            dense[index(r)][c] = BigInt::from(v);
        }
    }
    Ok(Ok(rank + bareiss_rank(dense, nr, nc)?))
}

/// Fraction-free Gaussian elimination; every intermediate entry is a minor of
/// the input, so the divisions are exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>, rows: usize, cols: usize) -> Result<usize> {
    if rows.saturating_mul(cols) > BAREISS_CELL_CAP {
        return Err(Error::CapacityExceeded {
            what: "dense cells for Bareiss elimination".into(),
            count: (rows * cols) as u64,
            cap: BAREISS_CELL_CAP as u64,
        });
    }
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, piv);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pv = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let f = row[c].clone();
            for k in c + 1..cols {
                let v = &pv * &row[k] - &f * &pivot_row[k];
                row[k] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pv;
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hollow_triangle_and_simplex() {
        let d1 = BoundaryMatrix::from_columns(
            3,
            &[vec![(0, -1), (1, 1)], vec![(0, -1), (2, 1)], vec![(1, -1), (2, 1)]],
        );
        assert_eq!(rank(&d1, &ExactOptions::default()).unwrap(), 2);
        let d2 = BoundaryMatrix::from_columns(3, &[vec![(0, 1), (1, -1), (2, 1)]]);
        assert_eq!(rank(&d2, &ExactOptions::default()).unwrap(), 1);
    }

    #[test]
    fn non_unit_entries_go_through_bareiss() {
        // [[2, 4], [3, 6]] has rank 1; [[2, 0], [0, 3]] has rank 2
        let m = BoundaryMatrix::from_columns(2, &[vec![(0, 2), (1, 3)], vec![(0, 4), (1, 6)]]);
        assert_eq!(rank(&m, &ExactOptions::default()).unwrap(), 1);
        let m = BoundaryMatrix::from_columns(2, &[vec![(0, 2)], vec![(1, 3)]]);
        assert_eq!(rank(&m, &ExactOptions::default()).unwrap(), 2);
    }

    #[test]
    fn bareiss_with_skipped_columns() {
        let a = vec![
            vec![BigInt::from(0), BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(4), BigInt::from(2)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(5)],
        ];
        assert_eq!(bareiss_rank(a, 3, 3).unwrap(), 2);
    }

    #[test]
    fn column_cap() {
        let m = BoundaryMatrix::zeros(1, 10);
        let o = ExactOptions { column_cap: 5, cancel: None };
        assert!(rank(&m, &o).unwrap_err().is_capacity());
    }
}
