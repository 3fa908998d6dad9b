//! Squarefree divisor complexes `Δ_v` restricted to a band of dimensions.
//!
//! A set `F` of points is a face of `Δ_v` when `v − Σ_{a∈F} a` lies in the
//! semigroup. For Veronese configurations this is the coordinatewise rule
//! `Σ_{a∈F} a ≤ v`, which is also how the generalized complex is defined for
//! bounds `v` outside the semigroup. Only vertices that appear in some face
//! are stored.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{contains_by_search, ConfigKind, PointConfig};

/// Faces are packed lexicographically into one word: index `i` of the sorted
/// vertex list occupies the 8-bit field `15 − i`. For a fixed face size,
/// numeric order equals lexicographic order of the index lists.
pub type FaceKey = u128;

const FIELD_BITS: u32 = 8;
pub const MAX_FACE_VERTICES: usize = 16;
pub const MAX_VERTICES: usize = 256;
pub const DEFAULT_FACE_CAP: u64 = 50_000_000;

pub fn pack_face(indices: &[u32]) -> FaceKey {
    debug_assert!(indices.len() <= MAX_FACE_VERTICES);
    indices.iter().enumerate().fold(0, |key, (pos, &v)| {
        key | (v as u128) << (FIELD_BITS * (MAX_FACE_VERTICES as u32 - 1 - pos as u32))
    })
}

pub fn unpack_face(key: FaceKey, len: usize) -> Vec<u32> {
    (0..len).map(|pos| field(key, pos)).collect()
}

#[inline]
fn field(key: FaceKey, pos: usize) -> u32 {
    ((key >> (FIELD_BITS * (MAX_FACE_VERTICES as u32 - 1 - pos as u32))) & 0xff) as u32
}

/// Key of the face with the vertex at position `pos` removed.
#[inline]
pub fn drop_vertex(key: FaceKey, pos: usize) -> FaceKey {
    let low_bits = FIELD_BITS * (MAX_FACE_VERTICES as u32 - 1 - pos as u32);
    let lower = key & ((1u128 << low_bits) - 1);
    let upper = if pos == 0 { 0 } else { key & !((1u128 << (low_bits + FIELD_BITS)) - 1) };
    upper | (lower << FIELD_BITS)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub vertex_indices: Vec<u32>,
}

impl Face {
    pub fn dim(&self) -> i32 {
        self.vertex_indices.len() as i32 - 1
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Maximum number of faces stored in any single dimension.
    pub face_cap: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { face_cap: DEFAULT_FACE_CAP }
    }
}

#[derive(Clone, Debug)]
pub struct ComplexSlice {
    config: PointConfig,
    bound: Vec<u32>,
    j_lo: i32,
    j_hi: i32,
    vertices: Vec<u32>,
    faces: Vec<Vec<FaceKey>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceSummary {
    pub bound: Vec<u32>,
    pub dims: [i32; 2],
    pub face_counts: Vec<usize>,
}

/// Admissibility test for adding a vertex to a partial face.
enum Rule<'a> {
    Coordinatewise,
    Residual { points: &'a [Vec<u32>], memo: HashMap<Vec<u32>, bool> },
}

impl Rule<'_> {
    fn admits(&mut self, residual: &[u32], point: &[u32]) -> bool {
        if !point.iter().zip(residual).all(|(a, r)| a <= r) {
            return false;
        }
        match self {
            Rule::Coordinatewise => true,
            Rule::Residual { points, memo } => {
                let rest: Vec<u32> = residual.iter().zip(point).map(|(r, a)| r - a).collect();
                if let Some(&hit) = memo.get(&rest) {
                    return hit;
                }
                let signed: Vec<i64> = rest.iter().map(|&c| c as i64).collect();
                let hit = contains_by_search(points, &signed);
                memo.insert(rest, hit);
                hit
            }
        }
    }
}

fn rule_for(config: &PointConfig) -> Rule<'_> {
    match config.kind() {
        ConfigKind::Veronese { .. } => Rule::Coordinatewise,
        ConfigKind::General => Rule::Residual { points: config.points(), memo: HashMap::new() },
    }
}

/// Builds the faces of `Δ_v` with dimension in `[j_lo, j_hi]`.
pub fn build_slice(
    config: &PointConfig,
    bound: &[u32],
    j_lo: i32,
    j_hi: i32,
    opts: &BuildOptions,
) -> Result<ComplexSlice> {
    build_slice_with_rule(config, bound, j_lo, j_hi, opts, false)
}

/// Same as [`build_slice`] but always applies the semigroup residual test,
/// even for Veronese configurations. Used to check the coordinatewise shortcut.
pub fn build_slice_by_residual(
    config: &PointConfig,
    bound: &[u32],
    j_lo: i32,
    j_hi: i32,
    opts: &BuildOptions,
) -> Result<ComplexSlice> {
    build_slice_with_rule(config, bound, j_lo, j_hi, opts, true)
}

fn build_slice_with_rule(
    config: &PointConfig,
    bound: &[u32],
    j_lo: i32,
    j_hi: i32,
    opts: &BuildOptions,
    force_residual: bool,
) -> Result<ComplexSlice> {
    if j_lo < -1 || j_hi < j_lo {
        return Err(Error::InvalidArgument(format!("bad dimension range [{j_lo}, {j_hi}]")));
    }
    if bound.len() != config.ambient_dim() {
        return Err(Error::InvalidArgument(format!(
            "bound has {} coordinates, configuration lives in N^{}",
            bound.len(),
            config.ambient_dim()
        )));
    }
    if config.len() > MAX_VERTICES {
        return Err(Error::CapacityExceeded {
            what: "vertices in configuration".into(),
            count: config.len() as u64,
            cap: MAX_VERTICES as u64,
        });
    }
    if j_hi as usize + 1 > MAX_FACE_VERTICES {
        return Err(Error::CapacityExceeded {
            what: "face size".into(),
            count: j_hi as u64 + 1,
            cap: MAX_FACE_VERTICES as u64,
        });
    }
    let make_rule = |cfg| {
        if force_residual {
            Rule::Residual { points: config.points(), memo: HashMap::new() }
        } else {
            rule_for(cfg)
        }
    };

    let mut rule = make_rule(config);
    let vertices: Vec<u32> = (0..config.len() as u32)
        .filter(|&i| rule.admits(bound, &config.points()[i as usize]))
        .collect();

    let band = (j_hi - j_lo + 1) as usize;
    let mut faces: Vec<Vec<FaceKey>> = vec![Vec::new(); band];
    if !vertices.is_empty() && j_lo == -1 {
        faces[0].push(0);
    }
    let max_len = (j_hi + 1) as usize;
    let min_len = (j_lo + 1).max(1) as usize;

    let roots: Vec<usize> = (0..vertices.len()).collect();
    let explore = |root: usize| -> Result<Vec<Vec<FaceKey>>> {
        let mut rule = make_rule(config);
        let mut out: Vec<Vec<FaceKey>> = vec![Vec::new(); band];
        let mut stack = FaceDfs {
            config,
            vertices: &vertices,
            min_len,
            max_len,
            j_lo,
            cap: opts.face_cap,
            indices: Vec::with_capacity(max_len),
        };
        let mut residual = bound.to_vec();
        stack.extend_from(root, &mut residual, &mut rule, &mut out)?;
        Ok(out)
    };

    #[cfg(feature = "parallel")]
    let parts: Vec<Result<Vec<Vec<FaceKey>>>> = {
        use rayon::prelude::*;
        roots.par_iter().map(|&r| explore(r)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Result<Vec<Vec<FaceKey>>>> = roots.iter().map(|&r| explore(r)).collect();

    for part in parts {
        let part = part?;
        for (dst, src) in faces.iter_mut().zip(part) {
            dst.extend(src);
        }
    }
    for (i, level) in faces.iter().enumerate() {
        if level.len() as u64 > opts.face_cap {
            return Err(Error::CapacityExceeded {
                what: format!("faces of dimension {}", j_lo + i as i32),
                count: level.len() as u64,
                cap: opts.face_cap,
            });
        }
    }
    Ok(ComplexSlice { config: config.clone(), bound: bound.to_vec(), j_lo, j_hi, vertices, faces })
}

struct FaceDfs<'a> {
    config: &'a PointConfig,
    vertices: &'a [u32],
    min_len: usize,
    max_len: usize,
    j_lo: i32,
    cap: u64,
    indices: Vec<u32>,
}

impl FaceDfs<'_> {
    /// Adds `vertices[pos]` to the current face and explores all extensions by
    /// later vertices. `residual` is the bound minus the current face sum.
    fn extend_from(
        &mut self,
        pos: usize,
        residual: &mut [u32],
        rule: &mut Rule<'_>,
        out: &mut [Vec<FaceKey>],
    ) -> Result<()> {
        let v = self.vertices[pos];
        let point = &self.config.points()[v as usize];
        for (r, a) in residual.iter_mut().zip(point) {
            *r -= a;
        }
        self.indices.push(v);
        let len = self.indices.len();
        if len >= self.min_len {
            let level = &mut out[(len as i32 - 1 - self.j_lo) as usize];
            level.push(pack_face(&self.indices));
            if level.len() as u64 > self.cap {
                return Err(Error::CapacityExceeded {
                    what: format!("faces of dimension {}", len - 1),
                    count: level.len() as u64,
                    cap: self.cap,
                });
            }
        }
        if len < self.max_len {
            for next in pos + 1..self.vertices.len() {
                let p = &self.config.points()[self.vertices[next] as usize];
                if rule.admits(residual, p) {
                    self.extend_from(next, residual, rule, out)?;
                }
            }
        }
        self.indices.pop();
        for (r, a) in residual.iter_mut().zip(point) {
            *r += a;
        }
        Ok(())
    }
}

impl ComplexSlice {
    pub fn config(&self) -> &PointConfig {
        &self.config
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    pub fn dims(&self) -> (i32, i32) {
        (self.j_lo, self.j_hi)
    }

    pub fn has_dim(&self, j: i32) -> bool {
        j >= self.j_lo && j <= self.j_hi
    }

    /// Indices of points that are vertices of `Δ_v`.
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn face_keys(&self, j: i32) -> &[FaceKey] {
        if self.has_dim(j) {
            &self.faces[(j - self.j_lo) as usize]
        } else {
            &[]
        }
    }

    pub fn face_count(&self, j: i32) -> usize {
        self.face_keys(j).len()
    }

    pub fn faces(&self, j: i32) -> impl Iterator<Item = Face> + '_ {
        let len = (j + 1).max(0) as usize;
        self.face_keys(j)
            .iter()
            .map(move |&k| Face { vertex_indices: unpack_face(k, len) })
    }

    pub fn contains_face(&self, vertex_indices: &[u32]) -> bool {
        let j = vertex_indices.len() as i32 - 1;
        self.face_keys(j).binary_search(&pack_face(vertex_indices)).is_ok()
    }

    pub fn summary(&self) -> SliceSummary {
        SliceSummary {
            bound: self.bound.clone(),
            dims: [self.j_lo, self.j_hi],
            face_counts: self.faces.iter().map(Vec::len).collect(),
        }
    }

    /// One line per face: `dim: i1 i2 ... ik`.
    pub fn to_face_list(&self) -> String {
        let mut s = String::new();
        for j in self.j_lo..=self.j_hi {
            for face in self.faces(j) {
                let _ = write!(s, "{j}:");
                for v in &face.vertex_indices {
                    let _ = write!(s, " {v}");
                }
                s.push('\n');
            }
        }
        s
    }

    /// A vertex `a` such that `F ∪ {a}` is a face for every `j`-face `F` of the
    /// slice. Its existence forces `H̃_j = 0`: every `j`-cycle lies in the cone
    /// over its support with apex `a`.
    pub fn cone_apex(&self, j: i32) -> Option<u32> {
        if !self.has_dim(j) || j < 0 {
            return None;
        }
        let points = self.config.points();
        let mut rule = rule_for(&self.config);
        let mut candidates: Vec<u32> = self.vertices.clone();
        let len = (j + 1) as usize;
        let mut residual = vec![0u32; self.bound.len()];
        for &key in self.face_keys(j) {
            residual.copy_from_slice(&self.bound);
            for pos in 0..len {
                for (r, a) in residual.iter_mut().zip(&points[field(key, pos) as usize]) {
                    *r -= a;
                }
            }
            candidates.retain(|&a| {
                (0..len).any(|pos| field(key, pos) == a) || rule.admits(&residual, &points[a as usize])
            });
            if candidates.is_empty() {
                return None;
            }
        }
        candidates.first().copied()
    }
}

/// Sparse integer matrix stored by columns. Used for simplicial boundaries and
/// Koszul differentials alike.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    rows: usize,
    col_start: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<i32>,
}

impl BoundaryMatrix {
    pub fn new(rows: usize) -> Self {
        BoundaryMatrix { rows, col_start: vec![0], row_idx: Vec::new(), vals: Vec::new() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BoundaryMatrix { rows, col_start: vec![0; cols + 1], row_idx: Vec::new(), vals: Vec::new() }
    }

    /// Appends a column given as `(row, value)` pairs with distinct rows.
    pub fn push_column<I: IntoIterator<Item = (u32, i32)>>(&mut self, entries: I) {
        for (r, v) in entries {
            debug_assert!((r as usize) < self.rows);
            if v != 0 {
                self.row_idx.push(r);
                self.vals.push(v);
            }
        }
        self.col_start.push(self.row_idx.len());
    }

    pub fn from_columns(rows: usize, cols: &[Vec<(u32, i32)>]) -> Self {
        let mut m = BoundaryMatrix::new(rows);
        for c in cols {
            m.push_column(c.iter().copied());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.col_start.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (u32, i32)> + '_ {
        let range = self.col_start[c]..self.col_start[c + 1];
        self.row_idx[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn column_len(&self, c: usize) -> usize {
        self.col_start[c + 1] - self.col_start[c]
    }

    /// All nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, i32)> + '_ {
        (0..self.cols()).flat_map(move |c| self.column(c).map(move |(r, v)| (r, c as u32, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0i64; self.cols()]; self.rows];
        for (r, c, v) in self.entries() {
            d[r as usize][c as usize] = v as i64;
        }
        d
    }

    /// Product `self * rhs` as a sparse matrix (for complex checks).
    pub fn mul(&self, rhs: &BoundaryMatrix) -> Result<BoundaryMatrix> {
        if self.cols() != rhs.rows() {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        let mut out = BoundaryMatrix::new(self.rows);
        let mut acc: HashMap<u32, i64> = HashMap::new();
        for c in 0..rhs.cols() {
            acc.clear();
            for (k, v) in rhs.column(c) {
                for (r, w) in self.column(k as usize) {
                    *acc.entry(r).or_default() += v as i64 * w as i64;
                }
            }
            let mut col: Vec<(u32, i32)> = acc
                .iter()
                .filter(|(_, &v)| v != 0)
                .map(|(&r, &v)| {
                    i32::try_from(v).map(|v| (r, v)).map_err(|_| Error::Inconsistent(
                        "entry overflow in sparse product".into(),
                    ))
                })
                .collect::<Result<_>>()?;
            col.sort_unstable();
            out.push_column(col);
        }
        Ok(out)
    }

    /// Triplet text, one `row col value` line per nonzero entry.
    pub fn to_triplets(&self) -> String {
        let mut s = String::new();
        for (r, c, v) in self.entries() {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn from_triplets(text: &str, rows: usize, cols: usize) -> Result<BoundaryMatrix> {
        let mut by_col: Vec<Vec<(u32, i32)>> = vec![Vec::new(); cols];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("line {}: expected 'row col value'", lineno + 1));
            if parts.len() != 3 {
                return Err(bad());
            }
            let r: u32 = parts[0].parse().map_err(|_| bad())?;
            let c: usize = parts[1].parse().map_err(|_| bad())?;
            let v: i32 = parts[2].parse().map_err(|_| bad())?;
            if r as usize >= rows || c >= cols {
                return Err(Error::Parse(format!("line {}: entry out of range", lineno + 1)));
            }
            by_col[c].push((r, v));
        }
        for col in &mut by_col {
            col.sort_unstable();
        }
        Ok(BoundaryMatrix::from_columns(rows, &by_col))
    }
}

/// Simplicial boundary `∂_j : C_j → C_{j−1}` with the alternating sign
/// convention on sorted vertex lists. At `j = 0` this is the augmentation to
/// the empty face.
pub fn boundary_matrix(slice: &ComplexSlice, j: i32) -> Result<BoundaryMatrix> {
    if j - 1 < slice.j_lo || j > slice.j_hi {
        return Err(Error::InvalidArgument(format!(
            "boundary in dimension {j} needs dimensions {} and {j} in slice range [{}, {}]",
            j - 1,
            slice.j_lo,
            slice.j_hi
        )));
    }
    let rows = slice.face_keys(j - 1);
    let cols = slice.face_keys(j);
    let mut m = BoundaryMatrix::new(rows.len());
    if j == 0 {
        for _ in cols {
            m.push_column([(0u32, 1i32)]);
        }
        return Ok(m);
    }
    let len = (j + 1) as usize;
    let mut entries: Vec<(u32, i32)> = Vec::with_capacity(len);
    for &key in cols {
        entries.clear();
        for pos in 0..len {
            let facet = drop_vertex(key, pos);
            let r = rows.binary_search(&facet).map_err(|_| {
                Error::Inconsistent(format!("facet of {:?} missing", unpack_face(key, len)))
            })?;
            entries.push((r as u32, if pos % 2 == 0 { 1 } else { -1 }));
        }
        entries.sort_unstable();
        m.push_column(entries.iter().copied());
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::veronese_points;

    fn faces_of(slice: &ComplexSlice, j: i32) -> Vec<Vec<u32>> {
        slice.faces(j).map(|f| f.vertex_indices).collect()
    }

    #[test]
    fn packing_round_trip() {
        let f = [3u32, 7, 200, 255];
        let k = pack_face(&f);
        assert_eq!(unpack_face(k, 4), f);
        assert_eq!(unpack_face(drop_vertex(k, 0), 3), [7, 200, 255]);
        assert_eq!(unpack_face(drop_vertex(k, 2), 3), [3, 7, 255]);
        assert_eq!(unpack_face(drop_vertex(k, 3), 3), [3, 7, 200]);
        assert!(pack_face(&[1, 5]) < pack_face(&[2, 3]));
    }

    #[test]
    fn twisted_cubic_balanced_bound() {
        let c = veronese_points(1, 3).unwrap();
        let s = build_slice(&c, &[3, 3], -1, 1, &BuildOptions::default()).unwrap();
        assert_eq!(s.face_count(-1), 1);
        assert_eq!(faces_of(&s, 0), vec![vec![0], vec![1], vec![2], vec![3]]);
        // (3,0)+(0,3) and (2,1)+(1,2)
        assert_eq!(faces_of(&s, 1), vec![vec![0, 3], vec![1, 2]]);
    }

    #[test]
    fn twisted_cubic_skewed_bound() {
        let c = veronese_points(1, 3).unwrap();
        let s = build_slice(&c, &[4, 2], 0, 1, &BuildOptions::default()).unwrap();
        assert_eq!(faces_of(&s, 0), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(faces_of(&s, 1), vec![vec![0, 2]]);
    }

    #[test]
    fn zero_bound_is_empty() {
        let c = veronese_points(2, 2).unwrap();
        let s = build_slice(&c, &[0, 0, 0], -1, 2, &BuildOptions::default()).unwrap();
        assert!(s.vertices().is_empty());
        assert_eq!(s.summary().face_counts, vec![0, 0, 0, 0]);
    }

    #[test]
    fn rejects_bad_ranges() {
        let c = veronese_points(1, 2).unwrap();
        let o = BuildOptions::default();
        assert!(build_slice(&c, &[2, 2], -2, 1, &o).is_err());
        assert!(build_slice(&c, &[2, 2], 1, 0, &o).is_err());
        assert!(build_slice(&c, &[2, 2, 2], 0, 1, &o).is_err());
    }

    #[test]
    fn face_cap_is_enforced() {
        let c = veronese_points(2, 2).unwrap();
        let o = BuildOptions { face_cap: 3 };
        let err = build_slice(&c, &[4, 4, 4], 0, 1, &o).unwrap_err();
        assert!(err.is_capacity());
    }

    fn hollow_triangle() -> ComplexSlice {
        let c = PointConfig::general(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        build_slice(&c, &[1, 1, 1], -1, 1, &BuildOptions::default()).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let s = hollow_triangle();
        // the triple is a face of the full complex, but the slice stops at dimension 1
        let d1 = boundary_matrix(&s, 1).unwrap();
        assert_eq!((d1.rows(), d1.cols()), (3, 3));
        for c in 0..3 {
            let col: Vec<_> = d1.column(c).collect();
            assert_eq!(col.len(), 2);
            assert_eq!(col.iter().map(|e| e.1).sum::<i32>(), 0);
        }
        let d0 = boundary_matrix(&s, 0).unwrap();
        assert_eq!(d0.rows(), 1);
        assert!(d0.entries().all(|(r, _, v)| r == 0 && v == 1));
        assert!(boundary_matrix(&s, -1).is_err());
        assert!(boundary_matrix(&s, 2).is_err());
    }

    #[test]
    fn single_two_simplex_boundary() {
        let c = PointConfig::general(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let s = build_slice(&c, &[1, 1, 1], 1, 2, &BuildOptions::default()).unwrap();
        let d2 = boundary_matrix(&s, 2).unwrap();
        assert_eq!((d2.rows(), d2.cols()), (3, 1));
        // facets in lex order: {0,1},{0,2},{1,2}; ∂[0,1,2] = [1,2] − [0,2] + [0,1]
        assert_eq!(d2.column(0).collect::<Vec<_>>(), vec![(0, 1), (1, -1), (2, 1)]);
    }

    #[test]
    fn exports() {
        let c = veronese_points(1, 3).unwrap();
        let s = build_slice(&c, &[3, 3], -1, 1, &BuildOptions::default()).unwrap();
        assert_eq!(s.to_face_list(), "-1:\n0: 0\n0: 1\n0: 2\n0: 3\n1: 0 3\n1: 1 2\n");
        let json = serde_json::to_string(&s.summary()).unwrap();
        assert_eq!(json, r#"{"bound":[3,3],"dims":[-1,1],"face_counts":[1,4,2]}"#);
        let d1 = boundary_matrix(&s, 1).unwrap();
        let back = BoundaryMatrix::from_triplets(&d1.to_triplets(), d1.rows(), d1.cols()).unwrap();
        assert_eq!(back, d1);
    }

    #[test]
    fn cone_apex_detection() {
        let c = veronese_points(1, 2).unwrap();
        // bound (4,2): vertices (2,0),(1,1),(0,2); edges {0,1},{0,2}; vertex 0 cones everything
        let s = build_slice(&c, &[4, 2], -1, 1, &BuildOptions::default()).unwrap();
        assert_eq!(s.cone_apex(0), Some(0));
        let c3 = veronese_points(1, 3).unwrap();
        let s = build_slice(&c3, &[3, 3], -1, 1, &BuildOptions::default()).unwrap();
        assert_eq!(s.cone_apex(0), None);
    }
}
