//! Characters of polynomial `GL(V)`-modules and their Schur decompositions.
//!
//! A character is stored as its full weight multiset. Decomposition peels off
//! the lexicographically largest weight `λ` (necessarily the highest weight of
//! a constituent) and subtracts the character of `S^λ V`, whose weight
//! multiplicities are Kostka numbers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::koszul::{self, KoszulOptions, MonomialBasis, DEFAULT_BASIS_CAP};
use crate::lattice::{compositions, orbit_size};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("partition {parts:?} is not non-increasing")));
        }
        Ok(Partition { parts })
    }

    /// Drops zero coordinates of a dominant weight.
    pub fn from_dominant(weight: &[u32]) -> Result<Self> {
        Partition::new(weight.iter().copied().filter(|&x| x > 0).collect())
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weight multiplicities of a `GL(V)`-module, `dim V = v_dim`, homogeneous of
/// one degree. Zero multiplicities are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightCharacter {
    v_dim: usize,
    mults: BTreeMap<Vec<u32>, u64>,
}

impl WeightCharacter {
    /// Validates lengths, homogeneity and symmetry under permuting coordinates.
    pub fn new(v_dim: usize, mults: BTreeMap<Vec<u32>, u64>) -> Result<Self> {
        if v_dim == 0 {
            return Err(Error::InvalidArgument("v_dim must be positive".into()));
        }
        let mults: BTreeMap<Vec<u32>, u64> = mults.into_iter().filter(|&(_, m)| m > 0).collect();
        let mut degree = None;
        let mut orbit_members: HashMap<Vec<u32>, u64> = HashMap::new();
        for (w, &m) in &mults {
            if w.len() != v_dim {
                return Err(Error::InvalidArgument(format!("weight {w:?} does not have {v_dim} coordinates")));
            }
            let s: u32 = w.iter().sum();
            if *degree.get_or_insert(s) != s {
                return Err(Error::InvalidArgument("character is not homogeneous".into()));
            }
            let mut sorted = w.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            if mults.get(&sorted) != Some(&m) {
                return Err(Error::InvalidArgument(format!(
                    "character is not symmetric: weight {w:?} has multiplicity {m}, {sorted:?} has {}",
                    mults.get(&sorted).copied().unwrap_or(0)
                )));
            }
            *orbit_members.entry(sorted).or_insert(0) += 1;
        }
        for (rep, count) in orbit_members {
            if count != orbit_size(&rep) {
                return Err(Error::InvalidArgument(format!(
                    "character is not symmetric: only {count} permutations of {rep:?} occur"
                )));
            }
        }
        Ok(WeightCharacter { v_dim, mults })
    }

    pub fn zero(v_dim: usize) -> Self {
        WeightCharacter { v_dim, mults: BTreeMap::new() }
    }

    pub fn v_dim(&self) -> usize {
        self.v_dim
    }

    pub fn mults(&self) -> &BTreeMap<Vec<u32>, u64> {
        &self.mults
    }

    pub fn mult(&self, weight: &[u32]) -> u64 {
        self.mults.get(weight).copied().unwrap_or(0)
    }

    pub fn dimension(&self) -> u64 {
        self.mults.values().sum()
    }
}

/// Character of `∧^p Sym^d V ⊗ Sym^{qd} V`.
pub fn weight_character(p: usize, q: u32, d: u32, v_dim: usize) -> Result<WeightCharacter> {
    if v_dim == 0 {
        return Err(Error::InvalidArgument("v_dim must be positive".into()));
    }
    let linear = MonomialBasis::new(v_dim, d);
    let sym = MonomialBasis::new(v_dim, q * d);
    let wedge_count = binomial(linear.len() as u64, p as u64);
    let count = wedge_count.saturating_mul(sym.len() as u64);
    if count > DEFAULT_BASIS_CAP as u64 {
        return Err(Error::CapacityExceeded { what: "basis elements of the tensor product".into(), count, cap: DEFAULT_BASIS_CAP as u64 });
    }
    // weights of ∧^p Sym^d first, then convolve with Sym^{qd}
    let mut wedge: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut sum = vec![0u32; v_dim];
    wedge_weights(&linear, 0, p, &mut sum, &mut wedge);
    let mut mults = BTreeMap::new();
    for (w, &m) in &wedge {
        for f in &sym.exponents {
            let total: Vec<u32> = w.iter().zip(f).map(|(a, b)| a + b).collect();
            *mults.entry(total).or_insert(0) += m;
        }
    }
    WeightCharacter::new(v_dim, mults)
}

fn wedge_weights(linear: &MonomialBasis, start: usize, left: usize, sum: &mut Vec<u32>, out: &mut HashMap<Vec<u32>, u64>) {
    if left == 0 {
        *out.entry(sum.clone()).or_insert(0) += 1;
        return;
    }
    for i in start..linear.len() {
        let m = &linear.exponents[i];
        sum.iter_mut().zip(m).for_each(|(s, a)| *s += a);
        wedge_weights(linear, i + 1, left - 1, sum, out);
        sum.iter_mut().zip(m).for_each(|(s, a)| *s -= a);
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Number of semistandard tableaux of shape `shape` and content `content`.
pub fn kostka(shape: &Partition, content: &[u32]) -> Result<u64> {
    let total: u32 = content.iter().sum();
    if total != shape.size() {
        return Err(Error::InvalidArgument(format!(
            "content {content:?} has size {total} but shape {shape} has size {}",
            shape.size()
        )));
    }
    let mut memo = HashMap::new();
    let content: Vec<u32> = content.iter().copied().filter(|&c| c > 0).collect();
    Ok(fill(&shape.parts, &content, vec![0; shape.rows()], &mut memo))
}

/// Counts ways to grow `current` to `shape` by horizontal strips of sizes
/// `content[..]` in order (the cells holding each successive entry).
fn fill(shape: &[u32], content: &[u32], current: Vec<u32>, memo: &mut HashMap<(usize, Vec<u32>), u64>) -> u64 {
    let Some((&strip, rest)) = content.split_first() else {
        return u64::from(current == shape);
    };
    let key = (content.len(), current.clone());
    if let Some(&hit) = memo.get(&key) {
        return hit;
    }
    let mut total = 0;
    let mut next = current.clone();
    strips(shape, &current, 0, strip, &mut next, &mut |grown| {
        total += fill(shape, rest, grown.to_vec(), memo);
    });
    memo.insert(key, total);
    total
}

fn strips(shape: &[u32], current: &[u32], row: usize, left: u32, next: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if row == shape.len() {
        if left == 0 {
            visit(next);
        }
        return;
    }
    let cap = if row == 0 { shape[0] } else { shape[row].min(current[row - 1]) };
    let room = cap - current[row];
    for add in 0..=room.min(left) {
        next[row] = current[row] + add;
        strips(shape, current, row + 1, left - add, next, visit);
    }
    next[row] = current[row];
}

/// Terms in extraction order, lexicographically decreasing `λ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchurDecomposition {
    pub terms: Vec<(Partition, u64)>,
}

impl SchurDecomposition {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_rows(&self) -> usize {
        self.terms.iter().map(|(l, _)| l.rows()).max().unwrap_or(0)
    }

    /// Expands back to a weight character through Kostka numbers.
    pub fn character(&self, v_dim: usize) -> Result<WeightCharacter> {
        let mut mults = BTreeMap::new();
        for (lambda, c) in &self.terms {
            for (w, k) in schur_character(lambda, v_dim)? {
                *mults.entry(w).or_insert(0) += c * k;
            }
        }
        WeightCharacter::new(v_dim, mults)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    partition: Partition,
    mult: u64,
}

impl Serialize for SchurDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> =
            self.terms.iter().map(|(partition, mult)| TermJson { partition: partition.clone(), mult: *mult }).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SchurDecomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        Ok(SchurDecomposition { terms: terms.into_iter().map(|t| (t.partition, t.mult)).collect() })
    }
}

/// Weights of `S^λ V` with their Kostka multiplicities.
fn schur_character(lambda: &Partition, v_dim: usize) -> Result<Vec<(Vec<u32>, u64)>> {
    if lambda.rows() > v_dim {
        return Ok(Vec::new());
    }
    let mut by_orbit: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut out = Vec::new();
    for w in compositions(lambda.size(), v_dim) {
        let mut sorted = w.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let k = match by_orbit.get(&sorted) {
            Some(&k) => k,
            None => {
                let k = kostka(lambda, &sorted)?;
                by_orbit.insert(sorted, k);
                k
            }
        };
        if k > 0 {
            out.push((w, k));
        }
    }
    Ok(out)
}

pub fn schur_decompose(character: &WeightCharacter) -> Result<SchurDecomposition> {
    // re-validate: callers may hand in a character built elsewhere
    let v_dim = character.v_dim;
    WeightCharacter::new(v_dim, character.mults.clone())?;
    let mut residue: BTreeMap<Vec<u32>, i128> = character.mults.iter().map(|(w, &m)| (w.clone(), m as i128)).collect();
    let mut terms = Vec::new();
    loop {
        residue.retain(|_, m| *m != 0);
        if let Some((w, m)) = residue.iter().find(|(_, &m)| m < 0) {
            return Err(Error::Inconsistent(format!("negative multiplicity {m} at weight {w:?} during decomposition")));
        }
        let Some((top, &c)) = residue.iter().next_back() else { break };
        let lambda = Partition::from_dominant(top).map_err(|_| {
            Error::Inconsistent(format!("lexicographically largest weight {top:?} is not dominant"))
        })?;
        for (w, k) in schur_character(&lambda, v_dim)? {
            *residue.entry(w).or_insert(0) -= c * k as i128;
        }
        terms.push((lambda, c as u64));
    }
    Ok(SchurDecomposition { terms })
}

/// Schur decomposition of `Tor_p(·)_{p+q}` for `P(V)` embedded by degree `d`.
pub fn tor_schur_decomposition(p: usize, q: u32, d: u32, v_dim: usize) -> Result<SchurDecomposition> {
    tor_schur_decomposition_with(p, q, d, v_dim, &KoszulOptions::default())
}

pub fn tor_schur_decomposition_with(
    p: usize,
    q: u32,
    d: u32,
    v_dim: usize,
    opts: &KoszulOptions,
) -> Result<SchurDecomposition> {
    if v_dim < p + 1 {
        return Err(Error::InvalidArgument(format!("v_dim must be at least p + 1 = {}", p + 1)));
    }
    let slice = koszul::tor_slice_with(p, q, v_dim - 1, d, opts)?;
    let mults = slice.weight_character.into_iter().map(|(w, m)| (w, m as u64)).collect();
    let character = WeightCharacter::new(v_dim, mults)
        .map_err(|e| Error::Inconsistent(format!("Tor character failed validation: {e}")))?;
    schur_decompose(&character)
}
