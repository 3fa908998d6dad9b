//! Independent reference implementations used as test oracles. None of this
//! touches the library's elimination or face enumeration code.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank over `Q` by textbook Gaussian elimination on rationals.
pub fn dense_rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..n_cols {
        let Some(piv) = (rank..n_rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, piv);
        let inv = BigRational::one() / a[rank][c].clone();
        for r in 0..n_rows {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone() * inv.clone();
                for k in c..n_cols {
                    let sub = f.clone() * a[rank][k].clone();
                    a[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank modulo a small prime, dense, for cross-checking the sparse engine.
pub fn dense_rank_mod(rows: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect()).collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let pow = |mut b: i64, mut e: i64| {
        let mut acc = 1i64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..n_cols {
        let Some(piv) = (rank..n_rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = pow(a[rank][c], p - 2);
        for r in 0..n_rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * inv % p;
                for k in c..n_cols {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Every subset `F` of `points` with `s_F ≤ bound` coordinatewise, grouped by
/// size, each group sorted lexicographically. Index `k` holds faces with `k`
/// vertices, so index 0 is the empty face.
pub fn faces_by_subsets(points: &[Vec<u32>], bound: &[u32]) -> Vec<Vec<Vec<u32>>> {
    let usable: Vec<u32> = (0..points.len() as u32)
        .filter(|&i| points[i as usize].iter().zip(bound).all(|(a, b)| a <= b))
        .collect();
    assert!(usable.len() <= 22, "oracle only handles small vertex sets");
    let mut by_size: Vec<Vec<Vec<u32>>> = vec![Vec::new(); usable.len() + 1];
    for mask in 0u32..(1 << usable.len()) {
        let face: Vec<u32> = (0..usable.len()).filter(|&k| mask >> k & 1 == 1).map(|k| usable[k]).collect();
        let mut sum = vec![0u32; bound.len()];
        for &v in &face {
            for (s, a) in sum.iter_mut().zip(&points[v as usize]) {
                *s += a;
            }
        }
        if sum.iter().zip(bound).all(|(s, b)| s <= b) {
            by_size[face.len()].push(face);
        }
    }
    while by_size.len() > 1 && by_size.last().is_some_and(Vec::is_empty) {
        by_size.pop();
    }
    for group in &mut by_size {
        group.sort();
    }
    if usable.is_empty() {
        // no vertex: the void complex, not even the empty face
        by_size[0].clear();
    }
    by_size
}

/// Dense boundary matrix from faces of size `k` to faces of size `k − 1`,
/// with sign `(−1)^i` for deleting the `i`-th vertex.
pub fn dense_boundary(lower: &[Vec<u32>], upper: &[Vec<u32>]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; upper.len()]; lower.len()];
    for (c, face) in upper.iter().enumerate() {
        for i in 0..face.len() {
            let mut facet = face.clone();
            facet.remove(i);
            let r = lower.binary_search(&facet).expect("complex is closed under faces");
            m[r][c] = if i % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

/// All reduced Betti numbers `β̃_j`, `j = −1, 0, 1, ...`, by dense rational ranks.
pub fn brute_force_reduced_betti(points: &[Vec<u32>], bound: &[u32]) -> Vec<usize> {
    let faces = faces_by_subsets(points, bound);
    let ranks: Vec<usize> = (0..=faces.len())
        .map(|k| {
            if k == 0 || k >= faces.len() || faces[k].is_empty() || faces[k - 1].is_empty() {
                0
            } else {
                dense_rational_rank(&dense_boundary(&faces[k - 1], &faces[k]))
            }
        })
        .collect();
    (0..faces.len()).map(|k| faces[k].len() - ranks[k] - ranks[k + 1]).collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
