//! Reduced homology ranks of complex slices.
//!
//! Ranks are computed modulo a 30-bit prime first. A modular Betti number is
//! never smaller than the rational one, so a zero modulo `p` certifies a zero
//! over `Q`. A nonzero modular value is always recomputed with exact rational
//! ranks before it is reported.

pub mod exact;
pub mod modp;

use std::sync::atomic::AtomicBool;

use serde::{Deserialize, Serialize};

use crate::complex::{boundary_matrix, BoundaryMatrix, ComplexSlice};
use crate::error::{Error, Result};

pub use exact::{ExactOptions, DEFAULT_EXACT_COLUMN_CAP};
pub use modp::{ModpOptions, RowOrder};

/// Fixed default prime, `2^30 − 35`.
pub const DEFAULT_PRIME: u32 = 1_073_741_789;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    Modular { prime: u32 },
    ExactRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub method: RankMethod,
    pub certified_over_q: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldStrategy {
    #[default]
    ModularFirst,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiNumber {
    pub j: i32,
    pub value: usize,
    /// The bound vector `b` (or `v`) of the complex.
    pub multidegree: Vec<u32>,
    pub certified: bool,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut f = 3u64;
    while f * f <= p {
        if p.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Smallest prime at or above `start` (for randomized primes).
pub fn next_prime(start: u32) -> u32 {
    let mut p = start.max(3) | 1;
    while !is_prime(p as u64) {
        p += 2;
    }
    p
}

pub fn checked_prime(p: u64) -> Result<u32> {
    if p <= 2 || p >= 1 << 31 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(p as u32)
}

pub fn rank_mod_p(m: &BoundaryMatrix, p: u64) -> Result<RankResult> {
    let prime = checked_prime(p)?;
    rank_mod_p_with(m, &ModpOptions::new(prime))
}

pub fn rank_mod_p_with(m: &BoundaryMatrix, opts: &ModpOptions<'_>) -> Result<RankResult> {
    let prime = checked_prime(opts.prime as u64)?;
    Ok(RankResult {
        rank: modp::rank(m, opts)?,
        method: RankMethod::Modular { prime },
        certified_over_q: false,
    })
}

pub fn rank_exact(m: &BoundaryMatrix) -> Result<RankResult> {
    rank_exact_with(m, &ExactOptions::default())
}

pub fn rank_exact_with(m: &BoundaryMatrix, opts: &ExactOptions<'_>) -> Result<RankResult> {
    Ok(RankResult {
        rank: exact::rank(m, opts)?,
        method: RankMethod::ExactRational,
        certified_over_q: true,
    })
}

#[derive(Clone, Debug)]
pub struct BettiOptions<'a> {
    pub strategy: FieldStrategy,
    pub prime: u32,
    /// Report zero without linear algebra when some vertex cones every `j`-face.
    pub cone_shortcut: bool,
    pub dense_cells: usize,
    pub exact_column_cap: usize,
    pub cancel: Option<&'a AtomicBool>,
}

impl Default for BettiOptions<'_> {
    fn default() -> Self {
        BettiOptions {
            strategy: FieldStrategy::ModularFirst,
            prime: DEFAULT_PRIME,
            cone_shortcut: false,
            dense_cells: 1 << 16,
            exact_column_cap: DEFAULT_EXACT_COLUMN_CAP,
            cancel: None,
        }
    }
}

impl<'a> BettiOptions<'a> {
    fn modp(&self, target: Option<usize>) -> ModpOptions<'a> {
        ModpOptions {
            prime: self.prime,
            row_order: RowOrder::Reversed,
            dense_cells: self.dense_cells,
            target,
            cancel: self.cancel,
        }
    }

    fn exact(&self) -> ExactOptions<'a> {
        ExactOptions { column_cap: self.exact_column_cap, cancel: self.cancel }
    }
}

/// `β̃_j = #faces_j − rank ∂_j − rank ∂_{j+1}`.
pub fn reduced_betti(slice: &ComplexSlice, j: i32, opts: &BettiOptions<'_>) -> Result<BettiNumber> {
    let (lo, hi) = slice.dims();
    if j < -1 || j - 1 < lo || j + 1 > hi {
        return Err(Error::InvalidArgument(format!(
            "reduced Betti number in dimension {j} needs dimensions [{}, {}] but slice has [{lo}, {hi}]",
            j - 1,
            j + 1
        )));
    }
    checked_prime(opts.prime as u64)?;
    let betti = |value| BettiNumber { j, value, multidegree: slice.bound().to_vec(), certified: true };
    let faces = slice.face_count(j);
    if faces == 0 {
        return Ok(betti(0));
    }
    if opts.cone_shortcut && slice.cone_apex(j).is_some() {
        return Ok(betti(0));
    }
    if opts.strategy == FieldStrategy::Exact {
        return Ok(betti(exact_betti(slice, j, opts)?));
    }

    let lower = if j >= 1 { modular_rank_with_lower_targets(slice, j, opts)? } else { 1 };
    let target = faces - lower;
    let upper = if slice.face_count(j + 1) == 0 {
        0
    } else {
        modp::rank(&boundary_matrix(slice, j + 1)?, &opts.modp(Some(target)))?
    };
    let modular = faces - lower - upper;
    if modular == 0 {
        return Ok(betti(0));
    }
    Ok(betti(exact_betti(slice, j, opts)?))
}

/// Computes `rank ∂_j` mod p. When the slice reaches down to dimension −1,
/// the lower boundaries are ranked first so every rank has a cycle-space
/// dimension as its early-exit target.
fn modular_rank_with_lower_targets(slice: &ComplexSlice, j: i32, opts: &BettiOptions<'_>) -> Result<usize> {
    let (lo, _) = slice.dims();
    if lo > -1 {
        return modp::rank(&boundary_matrix(slice, j)?, &opts.modp(None));
    }
    // rank ∂_0 is 1 whenever a vertex exists
    let mut prev = if slice.face_count(0) > 0 { 1 } else { 0 };
    for k in 1..=j {
        let target = slice.face_count(k - 1) - prev;
        prev = if slice.face_count(k) == 0 || target == 0 {
            0
        } else {
            modp::rank(&boundary_matrix(slice, k)?, &opts.modp(Some(target)))?
        };
    }
    Ok(prev)
}

fn exact_rank_of(slice: &ComplexSlice, k: i32, opts: &BettiOptions<'_>) -> Result<usize> {
    if k == 0 {
        return Ok(usize::from(slice.face_count(0) > 0 && slice.face_count(-1) > 0));
    }
    if slice.face_count(k) == 0 || slice.face_count(k - 1) == 0 {
        return Ok(0);
    }
    exact::rank(&boundary_matrix(slice, k)?, &opts.exact())
}

fn exact_betti(slice: &ComplexSlice, j: i32, opts: &BettiOptions<'_>) -> Result<usize> {
    let faces = slice.face_count(j);
    let lower = exact_rank_of(slice, j, opts)?;
    let upper = exact_rank_of(slice, j + 1, opts)?;
    faces
        .checked_sub(lower + upper)
        .ok_or_else(|| Error::Inconsistent(format!("negative Betti number in dimension {j}")))
}

/// All reduced Betti numbers the slice determines, i.e. dimensions
/// `j_lo + 1 ..= j_hi − 1`.
pub fn reduced_betti_numbers(slice: &ComplexSlice, opts: &BettiOptions<'_>) -> Result<Vec<BettiNumber>> {
    let (lo, hi) = slice.dims();
    (lo + 1..hi).map(|j| reduced_betti(slice, j, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_slice, BuildOptions};
    use crate::lattice::{veronese_points, PointConfig};

    #[test]
    fn primes() {
        assert!(is_prime(DEFAULT_PRIME as u64));
        assert!(!is_prime(1_073_741_791));
        assert_eq!(next_prime(1 << 29), 536_870_923);
        let m = BoundaryMatrix::zeros(1, 1);
        assert!(matches!(rank_mod_p(&m, 2), Err(Error::NotPrime(2))));
        assert!(matches!(rank_mod_p(&m, 15), Err(Error::NotPrime(15))));
        assert!(rank_mod_p(&m, 1 << 31).is_err());
    }

    #[test]
    fn rank_results_carry_method() {
        let d1 = BoundaryMatrix::from_columns(
            3,
            &[vec![(0, -1), (1, 1)], vec![(0, -1), (2, 1)], vec![(1, -1), (2, 1)]],
        );
        let r = rank_mod_p(&d1, 10007).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.method, RankMethod::Modular { prime: 10007 });
        assert!(!r.certified_over_q);
        let e = rank_exact(&d1).unwrap();
        assert_eq!((e.rank, e.certified_over_q), (2, true));
    }

    #[test]
    fn twisted_cubic_betti() {
        let c = veronese_points(1, 3).unwrap();
        let o = BettiOptions::default();
        for b in [[3u32, 3], [4, 2]] {
            let s = build_slice(&c, &b, -1, 1, &BuildOptions::default()).unwrap();
            let betti = reduced_betti(&s, 0, &o).unwrap();
            assert_eq!((betti.value, betti.certified), (1, true), "b = {b:?}");
        }
        let s = build_slice(&c, &[6, 0], -1, 1, &BuildOptions::default()).unwrap();
        assert_eq!(reduced_betti(&s, 0, &o).unwrap().value, 0);
    }

    #[test]
    fn full_simplex_is_acyclic() {
        let c = PointConfig::general(vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
            .unwrap();
        let s = build_slice(&c, &[1, 1, 1, 1], -1, 3, &BuildOptions::default()).unwrap();
        for strategy in [FieldStrategy::ModularFirst, FieldStrategy::Exact] {
            let o = BettiOptions { strategy, ..Default::default() };
            for j in 0..=2 {
                assert_eq!(reduced_betti(&s, j, &o).unwrap().value, 0);
            }
        }
    }

    #[test]
    fn missing_band_is_an_error() {
        let c = veronese_points(1, 3).unwrap();
        let s = build_slice(&c, &[3, 3], 0, 1, &BuildOptions::default()).unwrap();
        assert!(matches!(reduced_betti(&s, 0, &BettiOptions::default()), Err(Error::InvalidArgument(_))));
        assert!(matches!(reduced_betti(&s, 1, &BettiOptions::default()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn cone_shortcut_agrees() {
        let c = veronese_points(2, 2).unwrap();
        let s = build_slice(&c, &[4, 2, 2], -1, 3, &BuildOptions::default()).unwrap();
        let plain = reduced_betti_numbers(&s, &BettiOptions::default()).unwrap();
        let coned =
            reduced_betti_numbers(&s, &BettiOptions { cone_shortcut: true, ..Default::default() }).unwrap();
        assert_eq!(plain, coned);
    }
}
