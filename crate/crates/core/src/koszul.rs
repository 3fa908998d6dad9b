//! Tor of the Veronese ring as homology of the Koszul complex
//!
//! ```text
//! ∧^{p+1} Sym^d V ⊗ Sym^{(q−1)d} V → ∧^p Sym^d V ⊗ Sym^{qd} V → ∧^{p−1} Sym^d V ⊗ Sym^{(q+1)d} V
//! ```
//!
//! built from explicit monomial bases. This is deliberately independent of the
//! divisor-complex code and serves as its oracle.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::BoundaryMatrix;
use crate::error::{Error, Result};
use crate::homology::{self, ExactOptions, ModpOptions, DEFAULT_PRIME};
use crate::lattice::compositions;

pub const DEFAULT_BASIS_CAP: usize = 1_000_000;

/// Monomials of `Sym^m V`, `dim V = v_dim`, as exponent vectors in
/// lexicographically decreasing order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub degree: u32,
    pub exponents: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
}

impl MonomialBasis {
    pub fn new(v_dim: usize, degree: u32) -> Self {
        let exponents = compositions(degree, v_dim);
        let index = exponents.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        MonomialBasis { degree, exponents, index }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn index_of(&self, exponent: &[u32]) -> Option<u32> {
        self.index.get(exponent).copied()
    }
}

/// Basis `m_{i_1} ∧ … ∧ m_{i_p} ⊗ f` of `∧^p Sym^d V ⊗ Sym^{qd} V`, with
/// `i_1 < … < i_p` indexing the degree-`d` basis. Restricted to one weight
/// when requested.
#[derive(Clone, Debug)]
pub struct WedgeTensorBasis {
    pub p: usize,
    pub elements: Vec<(Vec<u32>, u32)>,
    index: HashMap<(Vec<u32>, u32), u32>,
}

impl WedgeTensorBasis {
    pub fn new(
        p: usize,
        linear: &MonomialBasis,
        sym: &MonomialBasis,
        weight: Option<&[u32]>,
        cap: usize,
    ) -> Result<Self> {
        let mut elements = Vec::new();
        let mut tuple = Vec::with_capacity(p);
        match weight {
            None => {
                let count = binomial(linear.len(), p).saturating_mul(sym.len());
                if count > cap {
                    return Err(Error::CapacityExceeded {
                        what: "Koszul basis elements".into(),
                        count: count as u64,
                        cap: cap as u64,
                    });
                }
                for_each_subset(linear.len(), p, &mut tuple, &mut |t| {
                    for f in 0..sym.len() as u32 {
                        elements.push((t.to_vec(), f));
                    }
                    Ok(())
                })?;
            }
            Some(b) => {
                let mut sum = vec![0u32; b.len()];
                wedge_under(linear, b, 0, p, &mut tuple, &mut sum, &mut |t, s| {
                    let rest: Vec<u32> = b.iter().zip(s).map(|(x, y)| x - y).collect();
                    if let Some(f) = sym.index_of(&rest) {
                        elements.push((t.to_vec(), f));
                        if elements.len() > cap {
                            return Err(Error::CapacityExceeded {
                                what: "Koszul basis elements".into(),
                                count: elements.len() as u64,
                                cap: cap as u64,
                            });
                        }
                    }
                    Ok(())
                })?;
            }
        }
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        Ok(WedgeTensorBasis { p, elements, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn index_of(&self, tuple: &[u32], f: u32) -> Option<u32> {
        self.index.get(&(tuple.to_vec(), f)).copied()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn for_each_subset<F>(n: usize, k: usize, tuple: &mut Vec<u32>, visit: &mut F) -> Result<()>
where
    F: FnMut(&[u32]) -> Result<()>,
{
    if tuple.len() == k {
        return visit(tuple);
    }
    let start = tuple.last().map_or(0, |&t| t as usize + 1);
    for i in start..n {
        tuple.push(i as u32);
        for_each_subset(n, k, tuple, visit)?;
        tuple.pop();
    }
    Ok(())
}

/// Increasing `k`-tuples of degree-`d` monomials whose exponent sum stays
/// below `bound` coordinatewise.
fn wedge_under<F>(
    linear: &MonomialBasis,
    bound: &[u32],
    start: usize,
    k: usize,
    tuple: &mut Vec<u32>,
    sum: &mut Vec<u32>,
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(&[u32], &[u32]) -> Result<()>,
{
    if tuple.len() == k {
        return visit(tuple, sum);
    }
    for i in start..linear.len() {
        let m = &linear.exponents[i];
        if m.iter().zip(sum.iter()).zip(bound).any(|((a, s), b)| a + s > *b) {
            continue;
        }
        sum.iter_mut().zip(m).for_each(|(s, a)| *s += a);
        tuple.push(i as u32);
        wedge_under(linear, bound, i + 1, k, tuple, sum, visit)?;
        tuple.pop();
        sum.iter_mut().zip(m).for_each(|(s, a)| *s -= a);
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct KoszulOptions {
    pub basis_cap: usize,
    pub prime: u32,
}

impl Default for KoszulOptions {
    fn default() -> Self {
        KoszulOptions { basis_cap: DEFAULT_BASIS_CAP, prime: DEFAULT_PRIME }
    }
}

fn check_weight(weight: Option<&[u32]>, v_dim: usize, total: u32) -> Result<()> {
    if let Some(b) = weight {
        if b.len() != v_dim {
            return Err(Error::InvalidArgument(format!("weight has {} coordinates, expected {v_dim}", b.len())));
        }
        let sum: u64 = b.iter().map(|&x| x as u64).sum();
        if sum != total as u64 {
            return Err(Error::InvalidArgument(format!("weight {b:?} has coordinate sum {sum}, expected {total}")));
        }
    }
    Ok(())
}

/// Matrix of `α_{p,q}`: `(m_1∧…∧m_p)⊗f ↦ Σ_i (−1)^{i+1} (m_1∧…m̂_i…∧m_p)⊗(m_i f)`.
/// Columns index the source basis, rows the target.
pub fn koszul_map(p: usize, q: u32, n: usize, d: u32, weight: Option<&[u32]>) -> Result<BoundaryMatrix> {
    koszul_map_with(p, q, n, d, weight, &KoszulOptions::default())
}

pub fn koszul_map_with(
    p: usize,
    q: u32,
    n: usize,
    d: u32,
    weight: Option<&[u32]>,
    opts: &KoszulOptions,
) -> Result<BoundaryMatrix> {
    if p == 0 {
        return Err(Error::InvalidArgument("Koszul differential needs p ≥ 1".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("degree d must be positive".into()));
    }
    let v_dim = n + 1;
    check_weight(weight, v_dim, (p as u32 + q) * d)?;
    let linear = MonomialBasis::new(v_dim, d);
    let source_sym = MonomialBasis::new(v_dim, q * d);
    let target_sym = MonomialBasis::new(v_dim, (q + 1) * d);
    let source = WedgeTensorBasis::new(p, &linear, &source_sym, weight, opts.basis_cap)?;
    let target = WedgeTensorBasis::new(p - 1, &linear, &target_sym, weight, opts.basis_cap)?;

    let mut m = BoundaryMatrix::new(target.len());
    let mut product = vec![0u32; v_dim];
    let mut face = Vec::with_capacity(p);
    for (tuple, f) in &source.elements {
        let mut col = Vec::with_capacity(p);
        for i in 0..p {
            face.clear();
            face.extend(tuple.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &t)| t));
            let mi = &linear.exponents[tuple[i] as usize];
            let fx = &source_sym.exponents[*f as usize];
            for (slot, (a, b)) in product.iter_mut().zip(mi.iter().zip(fx)) {
                *slot = a + b;
            }
            let g = target_sym.index_of(&product).expect("product has the target degree");
            let row = target.index_of(&face, g).ok_or_else(|| {
                Error::Inconsistent("Koszul image falls outside the target basis".into())
            })?;
            col.push((row, if i % 2 == 0 { 1 } else { -1 }));
        }
        col.sort_unstable_by_key(|e| e.0);
        m.push_column(col);
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Modular(u32),
    Rational,
}

fn rank_in(m: &BoundaryMatrix, field: Field) -> Result<usize> {
    match field {
        Field::Modular(p) => homology::modp::rank(m, &ModpOptions::new(p)),
        Field::Rational => homology::exact::rank(m, &ExactOptions { column_cap: usize::MAX, cancel: None }),
    }
}

fn tor_in(p: usize, q: u32, n: usize, d: u32, weight: Option<&[u32]>, opts: &KoszulOptions, field: Field) -> Result<usize> {
    let alpha = koszul_map_with(p, q, n, d, weight, opts)?;
    let incoming = koszul_map_with(p + 1, q - 1, n, d, weight, opts)?;
    let kernel = alpha.cols() - rank_in(&alpha, field)?;
    kernel
        .checked_sub(rank_in(&incoming, field)?)
        .ok_or_else(|| Error::Inconsistent(format!("Koszul image exceeds kernel at p={p}, q={q}")))
}

/// `dim Tor_p(·)_{p+q}`, optionally in a single weight `b` with coordinate
/// sum `(p+q)d`. Modular first; nonzero values are recomputed over `Q`.
pub fn tor_dimension(p: usize, q: u32, n: usize, d: u32, weight: Option<&[u32]>) -> Result<usize> {
    tor_dimension_with(p, q, n, d, weight, &KoszulOptions::default())
}

pub fn tor_dimension_with(
    p: usize,
    q: u32,
    n: usize,
    d: u32,
    weight: Option<&[u32]>,
    opts: &KoszulOptions,
) -> Result<usize> {
    if p == 0 {
        return Err(Error::InvalidArgument(
            "Tor_0 is not computed from the Koszul complex; see tor0_dimension".into(),
        ));
    }
    if q == 0 {
        return Err(Error::InvalidArgument("tor_dimension needs q ≥ 1".into()));
    }
    homology::checked_prime(opts.prime as u64)?;
    let modular = tor_in(p, q, n, d, weight, opts, Field::Modular(opts.prime))?;
    if modular == 0 {
        return Ok(0);
    }
    tor_in(p, q, n, d, weight, opts, Field::Rational)
}

/// `Tor_0` of the ring is the residue field: dimension 1 in degree 0 only.
pub const fn tor0_dimension(total_degree: u32) -> usize {
    if total_degree == 0 {
        1
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorSlice {
    pub p: usize,
    pub q: u32,
    pub total_dim: usize,
    pub weight_character: BTreeMap<Vec<u32>, usize>,
}

/// Sweeps every weight of coordinate sum `(p+q)d` and records the nonzero
/// Tor dimensions.
pub fn tor_slice(p: usize, q: u32, n: usize, d: u32) -> Result<TorSlice> {
    tor_slice_with(p, q, n, d, &KoszulOptions::default())
}

pub fn tor_slice_with(p: usize, q: u32, n: usize, d: u32, opts: &KoszulOptions) -> Result<TorSlice> {
    let weights = compositions((p as u32 + q) * d, n + 1);
    let job = |b: &Vec<u32>| tor_dimension_with(p, q, n, d, Some(b), opts).map(|dim| (b.clone(), dim));
    #[cfg(feature = "parallel")]
    let dims: Vec<Result<(Vec<u32>, usize)>> = {
        use rayon::prelude::*;
        weights.par_iter().map(job).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let dims: Vec<Result<(Vec<u32>, usize)>> = weights.iter().map(job).collect();

    let mut weight_character = BTreeMap::new();
    let mut total_dim = 0;
    for entry in dims {
        let (b, dim) = entry?;
        if dim > 0 {
            total_dim += dim;
            weight_character.insert(b, dim);
        }
    }
    Ok(TorSlice { p, q, total_dim, weight_character })
}

#[derive(Serialize, Deserialize)]
struct WeightEntry {
    b: Vec<u32>,
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct TorSliceJson {
    p: usize,
    q: u32,
    total_dim: usize,
    weights: Vec<WeightEntry>,
}

impl Serialize for TorSlice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TorSliceJson {
            p: self.p,
            q: self.q,
            total_dim: self.total_dim,
            weights: self.weight_character.iter().map(|(b, &mult)| WeightEntry { b: b.clone(), mult }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorSlice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TorSliceJson::deserialize(d)?;
        let weight_character: BTreeMap<Vec<u32>, usize> = raw.weights.into_iter().map(|w| (w.b, w.mult)).collect();
        let sum: usize = weight_character.values().sum();
        if sum != raw.total_dim {
            return Err(serde::de::Error::custom(format!(
                "total_dim {} disagrees with weight sum {sum}",
                raw.total_dim
            )));
        }
        Ok(TorSlice { p: raw.p, q: raw.q, total_dim: raw.total_dim, weight_character })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        let b = MonomialBasis::new(3, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.exponents[0], vec![2, 0, 0]);
        assert_eq!(b.index_of(&[0, 0, 2]), Some(5));
        let lin = MonomialBasis::new(2, 2);
        let sym = MonomialBasis::new(2, 4);
        let w = WedgeTensorBasis::new(2, &lin, &sym, None, DEFAULT_BASIS_CAP).unwrap();
        assert_eq!(w.len(), 3 * 5);
        assert!(WedgeTensorBasis::new(2, &lin, &sym, None, 10).unwrap_err().is_capacity());
    }

    #[test]
    fn multiplication_maps() {
        let m = koszul_map(1, 1, 1, 1, None).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 4));
        assert_eq!(homology::rank_exact(&m).unwrap().rank, 3);
        let m = koszul_map(1, 1, 1, 2, None).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 9));
        assert_eq!(homology::rank_exact(&m).unwrap().rank, 5);
    }

    #[test]
    fn small_tor() {
        assert_eq!(tor_dimension(1, 1, 1, 1, None).unwrap(), 0);
        assert_eq!(tor_dimension(1, 1, 1, 2, None).unwrap(), 1);
        assert_eq!(tor_dimension(1, 1, 1, 2, Some(&[2, 2])).unwrap(), 1);
        assert_eq!(tor_dimension(1, 1, 1, 2, Some(&[3, 1])).unwrap(), 0);
        let cubic = tor_slice(1, 1, 1, 3).unwrap();
        assert_eq!(cubic.total_dim, 3);
        let weights: Vec<&Vec<u32>> = cubic.weight_character.keys().collect();
        assert_eq!(weights, [&vec![2, 4], &vec![3, 3], &vec![4, 2]]);
    }

    #[test]
    fn degenerate_arguments() {
        assert!(matches!(tor_dimension(0, 1, 1, 2, None), Err(Error::InvalidArgument(_))));
        assert!(matches!(tor_dimension(1, 0, 1, 2, None), Err(Error::InvalidArgument(_))));
        assert!(koszul_map(1, 1, 1, 2, Some(&[2, 1])).is_err());
        assert!(koszul_map(1, 1, 1, 2, Some(&[2, 2, 0])).is_err());
        assert_eq!(tor0_dimension(0), 1);
        assert_eq!(tor0_dimension(3), 0);
    }

    #[test]
    fn json_round_trip() {
        let t = tor_slice(1, 1, 1, 3).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert!(text.contains("\"weights\":[{\"b\":[2,4],\"mult\":1}"));
        let back: TorSlice = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
        let broken = text.replace("\"total_dim\":3", "\"total_dim\":4");
        assert!(serde_json::from_str::<TorSlice>(&broken).is_err());
    }
}
