//! Rank over `F_p` by sparse left-looking elimination.
//!
//! Columns are reduced one at a time against pivots keyed by their leading row
//! (the first nonzero row in the elimination order). Before any arithmetic,
//! each leading row is claimed by its sparsest column; those columns are
//! processed first and become pivots for free. Small inputs go to dense
//! Gaussian elimination instead.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, Ordering};

use crate::complex::BoundaryMatrix;
use crate::error::{Error, Result};

/// Order in which rows are tried as pivot rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOrder {
    Natural,
    /// Last row first. For simplicial boundaries with faces in lexicographic
    /// order this puts `τ \ {min τ}` first among the facets of `τ`, so cone
    /// pairings `σ ↔ {a} ∪ σ` with `a < min σ` show up as structural pivots.
    Reversed,
    /// Rows with fewest nonzeros first (Markowitz-style fill heuristic).
    /// Fills in badly on large boundary matrices.
    SparsestFirst,
}

#[derive(Clone, Debug)]
pub struct ModpOptions<'a> {
    pub prime: u32,
    pub row_order: RowOrder,
    /// Matrices with `rows * cols` at most this many cells use dense elimination.
    pub dense_cells: usize,
    /// Stop as soon as the rank reaches this value.
    pub target: Option<usize>,
    pub cancel: Option<&'a AtomicBool>,
}

impl ModpOptions<'_> {
    pub fn new(prime: u32) -> Self {
        ModpOptions {
            prime,
            row_order: RowOrder::Reversed,
            dense_cells: 1 << 16,
            target: None,
            cancel: None,
        }
    }
}

const CANCEL_POLL: usize = 512;

/// Reduced pivot column as `(row, value)` pairs.
type PivotRow = Box<[(u32, u32)]>;

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat; p is prime
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

#[inline]
fn reduce_signed(v: i32, p: u32) -> u32 {
    v.rem_euclid(p as i32) as u32
}

fn polled(cancel: Option<&AtomicBool>) -> Result<()> {
    match cancel {
        Some(flag) if flag.load(Ordering::Relaxed) => Err(Error::Cancelled),
        _ => Ok(()),
    }
}

/// Position of every row in the elimination order.
fn row_positions(m: &BoundaryMatrix, order: RowOrder) -> Vec<u32> {
    let n = m.rows();
    match order {
        RowOrder::Natural => (0..n as u32).collect(),
        RowOrder::Reversed => (0..n as u32).rev().collect(),
        RowOrder::SparsestFirst => {
            let mut counts = vec![0u32; n];
            for (r, _, _) in m.entries() {
                counts[r as usize] += 1;
            }
            let mut rows: Vec<u32> = (0..n as u32).collect();
            rows.sort_by_key(|&r| (counts[r as usize], r));
            let mut pos = vec![0u32; n];
            for (i, &r) in rows.iter().enumerate() {
                pos[r as usize] = i as u32;
            }
            pos
        }
    }
}

pub fn rank(m: &BoundaryMatrix, opts: &ModpOptions<'_>) -> Result<usize> {
    let p = opts.prime;
    if m.rows() == 0 || m.cols() == 0 || m.nnz() == 0 {
        return Ok(0);
    }
    if m.rows().saturating_mul(m.cols()) <= opts.dense_cells {
        polled(opts.cancel)?;
        return Ok(dense_rank(m, p));
    }
    let pos = row_positions(m, opts.row_order);

    // columns in position space, sorted by position
    let mut columns: Vec<Vec<(u32, u32)>> = (0..m.cols())
        .map(|c| {
            let mut col: Vec<(u32, u32)> = m
                .column(c)
                .map(|(r, v)| (pos[r as usize], reduce_signed(v, p)))
                .filter(|&(_, v)| v != 0)
                .collect();
            col.sort_unstable_by_key(|e| e.0);
            col
        })
        .collect();

    // structural pass: the sparsest column per leading row goes first
    let nrows = m.rows();
    let mut claim: Vec<u32> = vec![u32::MAX; nrows];
    for (c, col) in columns.iter().enumerate() {
        if let Some(&(lead, _)) = col.first() {
            let slot = &mut claim[lead as usize];
            if *slot == u32::MAX || columns[*slot as usize].len() > col.len() {
                *slot = c as u32;
            }
        }
    }
    let mut order: Vec<u32> = claim.iter().copied().filter(|&c| c != u32::MAX).collect();
    order.sort_unstable();
    let mut is_claimer = vec![false; columns.len()];
    for &c in &order {
        is_claimer[c as usize] = true;
    }
    order.extend((0..columns.len() as u32).filter(|&c| !is_claimer[c as usize] && !columns[c as usize].is_empty()));

    let target = opts.target.unwrap_or(usize::MAX).min(nrows).min(columns.len());
    let mut pivots: Vec<Option<PivotRow>> = vec![None; nrows];
    let mut rank = 0usize;
    let mut acc = Accumulator::new(nrows);

    for (step, &c) in order.iter().enumerate() {
        if rank >= target {
            break;
        }
        if step % CANCEL_POLL == 0 {
            polled(opts.cancel)?;
        }
        let col = std::mem::take(&mut columns[c as usize]);
        let lead = col[0].0 as usize;
        if pivots[lead].is_none() {
            pivots[lead] = Some(normalize(col, p));
            rank += 1;
            continue;
        }
        if let Some(reduced) = acc.reduce(&col, &pivots, p) {
            let lead = reduced[0].0 as usize;
            pivots[lead] = Some(normalize(reduced, p));
            rank += 1;
        }
    }
    Ok(rank)
}

fn normalize(mut col: Vec<(u32, u32)>, p: u32) -> Box<[(u32, u32)]> {
    let lead = col[0].1;
    if lead != 1 {
        let inv = inv_mod(lead, p);
        for e in col.iter_mut() {
            e.1 = mul_mod(e.1, inv, p);
        }
    }
    col.into_boxed_slice()
}

/// Dense scratch vector plus a min-heap of touched positions.
struct Accumulator {
    vals: Vec<u32>,
    queued: Vec<bool>,
    heap: BinaryHeap<Reverse<u32>>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator { vals: vec![0; n], queued: vec![false; n], heap: BinaryHeap::new() }
    }

    fn push(&mut self, at: u32) {
        if !self.queued[at as usize] {
            self.queued[at as usize] = true;
            self.heap.push(Reverse(at));
        }
    }

    /// Reduces `col` until its leading row has no pivot. Returns the reduced
    /// column (sorted) or `None` when it vanishes. Leaves the scratch clean.
    fn reduce(
        &mut self,
        col: &[(u32, u32)],
        pivots: &[Option<PivotRow>],
        p: u32,
    ) -> Option<Vec<(u32, u32)>> {
        for &(r, v) in col {
            self.vals[r as usize] = v;
            self.push(r);
        }
        while let Some(Reverse(r)) = self.heap.pop() {
            let ri = r as usize;
            self.queued[ri] = false;
            let coef = self.vals[ri];
            if coef == 0 {
                continue;
            }
            match &pivots[ri] {
                Some(piv) => {
                    // leading coefficient of a stored pivot is 1
                    self.vals[ri] = 0;
                    let f = p - coef;
                    for &(q, w) in &piv[1..] {
                        let qi = q as usize;
                        let nv = (self.vals[qi] as u64 + f as u64 * w as u64) % p as u64;
                        self.vals[qi] = nv as u32;
                        if nv != 0 {
                            self.push(q);
                        }
                    }
                }
                None => {
                    let mut out = vec![(r, coef)];
                    self.vals[ri] = 0;
                    let mut rest: Vec<u32> = self.heap.drain().map(|Reverse(q)| q).collect();
                    rest.sort_unstable();
                    for q in rest {
                        let qi = q as usize;
                        self.queued[qi] = false;
                        if self.vals[qi] != 0 {
                            out.push((q, self.vals[qi]));
                            self.vals[qi] = 0;
                        }
                    }
                    return Some(out);
                }
            }
        }
        None
    }
}

/// Plain Gaussian elimination on a dense copy.
pub fn dense_rank(m: &BoundaryMatrix, p: u32) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = vec![0u32; rows * cols];
    for (r, c, v) in m.entries() {
        a[r as usize * cols + c as usize] = reduce_signed(v, p);
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else { continue };
        if piv != rank {
            for k in 0..cols {
                a.swap(piv * cols + k, rank * cols + k);
            }
        }
        let inv = inv_mod(a[rank * cols + c], p);
        for k in c..cols {
            a[rank * cols + k] = mul_mod(a[rank * cols + k], inv, p);
        }
        for r in rank + 1..rows {
            let f = a[r * cols + c];
            if f == 0 {
                continue;
            }
            let f = p - f;
            for k in c..cols {
                let pv = a[rank * cols + k];
                if pv != 0 {
                    a[r * cols + k] = ((a[r * cols + k] as u64 + f as u64 * pv as u64) % p as u64) as u32;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
