//! Point configurations, semigroup membership and multidegree enumeration.
//!
//! A [`PointConfig`] is a finite set `A ⊂ N^k` whose toric ideal we study. The
//! Veronese preset `A_{d,n}` is the set of exponent vectors of all degree-`d`
//! monomials in `n + 1` variables; it is by far the most common input and gets
//! closed-form shortcuts for membership and enumeration.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted value of `total_degree * d` (coordinate sum of a multidegree).
pub const MAX_COORDINATE_SUM: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConfigKind {
    Veronese { n: usize, d: u32 },
    General,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointConfig {
    points: Vec<Vec<u32>>,
    homogenizer: Option<Vec<BigRational>>,
    kind: ConfigKind,
}

impl PointConfig {
    /// General configuration from explicit points. A homogenizer is solved for
    /// exactly over the rationals; configurations without one are still accepted
    /// (membership and complexes work) but have no notion of total degree.
    pub fn general(points: Vec<Vec<u32>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("configuration has no points".into()));
        }
        let k = points[0].len();
        if k == 0 {
            return Err(Error::InvalidArgument("points must have at least one coordinate".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != k) {
            return Err(Error::InvalidArgument(format!(
                "point {p:?} has {} coordinates, expected {k}",
                p.len()
            )));
        }
        if points.iter().any(|p| p.iter().all(|&c| c == 0)) {
            return Err(Error::InvalidArgument("the zero vector cannot be a point".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::InvalidArgument(format!("duplicate point {p:?}")));
            }
        }
        let homogenizer = solve_homogenizer(&points);
        Ok(PointConfig { points, homogenizer, kind: ConfigKind::General })
    }

    /// Parses the plain-text format: one point per line, whitespace-separated
    /// nonnegative integers. Blank lines and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let point = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().map_err(|_| {
                        Error::Parse(format!("line {}: '{tok}' is not a nonnegative integer", lineno + 1))
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            points.push(point);
        }
        PointConfig::general(points)
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ambient dimension `k`.
    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn kind(&self) -> ConfigKind {
        self.kind
    }

    pub fn homogenizer(&self) -> Option<&[BigRational]> {
        self.homogenizer.as_deref()
    }

    pub fn is_veronese(&self) -> bool {
        matches!(self.kind, ConfigKind::Veronese { .. })
    }

    /// `ω · v`, when a homogenizer exists and the value is a nonnegative integer.
    pub fn degree_of(&self, v: &[u32]) -> Option<u32> {
        if let ConfigKind::Veronese { d, .. } = self.kind {
            let s: u64 = v.iter().map(|&c| c as u64).sum();
            return s.is_multiple_of(d as u64).then(|| (s / d as u64) as u32);
        }
        let omega = self.homogenizer.as_ref()?;
        let mut acc = BigRational::zero();
        for (w, &c) in omega.iter().zip(v) {
            acc += w * BigRational::from_integer(BigInt::from(c));
        }
        if !acc.is_integer() || acc.is_negative() {
            return None;
        }
        acc.to_integer().to_u32()
    }

    /// Whether `v` is a nonnegative-integer combination of the points.
    pub fn contains(&self, v: &[i64]) -> bool {
        semigroup_contains(self, v)
    }
}

/// All compositions of `d` into `n + 1` parts, in lexicographically descending
/// order, with homogenizer `(1/d, …, 1/d)`.
pub fn veronese_points(n: usize, d: u32) -> Result<PointConfig> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension n must be at least 1".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("degree d must be at least 1".into()));
    }
    let points = compositions(d, n + 1);
    let w = BigRational::new(BigInt::one(), BigInt::from(d));
    Ok(PointConfig {
        points,
        homogenizer: Some(vec![w; n + 1]),
        kind: ConfigKind::Veronese { n, d },
    })
}

/// Compositions of `total` into `parts` nonnegative parts, lexicographically descending.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Partitions of `total` into at most `parts` parts, zero-padded to length
/// `parts`, lexicographically descending.
pub fn padded_partitions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // remaining parts are each <= max, so they can absorb at most parts*max
        if (total as u64) > parts as u64 * max as u64 {
            return;
        }
        for first in (0..=total.min(max)).rev() {
            prefix.push(first);
            rec(total - first, parts - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, total, &mut Vec::with_capacity(parts), &mut out);
    out
}

pub fn semigroup_contains(config: &PointConfig, v: &[i64]) -> bool {
    if v.len() != config.ambient_dim() || v.iter().any(|&c| c < 0) {
        return false;
    }
    match config.kind {
        ConfigKind::Veronese { d, .. } => contains_closed_form(d, v),
        ConfigKind::General => contains_by_search(config.points(), v),
    }
}

/// Membership in `N A_{d,n}`: every composition of `d` is a point, so any
/// nonnegative vector with coordinate sum divisible by `d` decomposes greedily.
pub fn contains_closed_form(d: u32, v: &[i64]) -> bool {
    v.iter().all(|&c| c >= 0) && v.iter().sum::<i64>() % d as i64 == 0
}

/// Depth-first search over residual vectors with memoization. Every point is
/// nonzero and nonnegative, so each step strictly lowers the coordinate sum.
pub fn contains_by_search(points: &[Vec<u32>], v: &[i64]) -> bool {
    if v.iter().any(|&c| c < 0) {
        return false;
    }
    let start: Vec<u32> = v.iter().map(|&c| c as u32).collect();
    let mut memo: HashMap<Vec<u32>, bool> = HashMap::new();
    // frame: residual, index of the next point to try
    let mut stack: Vec<(Vec<u32>, usize)> = vec![(start, 0)];
    while let Some((residual, next)) = stack.last_mut() {
        if residual.iter().all(|&c| c == 0) {
            return true;
        }
        let found = points[*next..]
            .iter()
            .position(|p| p.iter().zip(residual.iter()).all(|(a, r)| a <= r))
            .map(|off| *next + off);
        match found {
            None => {
                let (r, _) = stack.pop().unwrap();
                memo.insert(r, false);
            }
            Some(idx) => {
                *next = idx + 1;
                let child: Vec<u32> =
                    residual.iter().zip(&points[idx]).map(|(r, a)| r - a).collect();
                match memo.get(&child) {
                    Some(true) => return true,
                    Some(false) => {}
                    None => stack.push((child, 0)),
                }
            }
        }
    }
    false
}

/// A vector of the semigroup together with its total degree `ω · b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multidegree {
    pub coords: Vec<u32>,
    pub total_degree: u32,
}

impl Multidegree {
    /// Validates membership and computes the degree.
    pub fn new(config: &PointConfig, coords: Vec<u32>) -> Result<Self> {
        let signed: Vec<i64> = coords.iter().map(|&c| c as i64).collect();
        if coords.len() != config.ambient_dim() {
            return Err(Error::InvalidArgument(format!(
                "multidegree has {} coordinates, configuration lives in N^{}",
                coords.len(),
                config.ambient_dim()
            )));
        }
        if !semigroup_contains(config, &signed) {
            return Err(Error::NotInSemigroup(coords));
        }
        let total_degree = config.degree_of(&coords).ok_or_else(|| {
            Error::UnsupportedConfig("configuration has no homogenizer; degree undefined".into())
        })?;
        Ok(Multidegree { coords, total_degree })
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Representative of a coordinate-permutation orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRep {
    pub canonical: Multidegree,
    pub orbit_size: u64,
}

pub fn canonical_rep(b: &Multidegree) -> OrbitRep {
    let mut coords = b.coords.clone();
    coords.sort_unstable_by(|a, b| b.cmp(a));
    let orbit_size = orbit_size(&coords);
    OrbitRep { canonical: Multidegree { coords, total_degree: b.total_degree }, orbit_size }
}

/// `k! / ∏ m_i!` over the multiplicities `m_i` of repeated values.
pub fn orbit_size(coords: &[u32]) -> u64 {
    let mut counts: HashMap<u32, u64> = HashMap::new();
    for &c in coords {
        *counts.entry(c).or_default() += 1;
    }
    let mut size: u128 = factorial(coords.len() as u64);
    for &m in counts.values() {
        size /= factorial(m);
    }
    size as u64
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

fn check_enumeration(config: &PointConfig, total_degree: u32) -> Result<(usize, u32)> {
    let ConfigKind::Veronese { n, d } = config.kind else {
        return Err(Error::UnsupportedConfig(
            "multidegree enumeration is only defined for Veronese configurations".into(),
        ));
    };
    let sum = total_degree as u64 * d as u64;
    if sum > MAX_COORDINATE_SUM {
        return Err(Error::CapacityExceeded {
            what: "coordinate sum total_degree*d".into(),
            count: sum,
            cap: MAX_COORDINATE_SUM,
        });
    }
    Ok((n, sum as u32))
}

/// All multidegrees of total degree `total_degree`, lexicographically descending.
pub fn enumerate_multidegrees(config: &PointConfig, total_degree: u32) -> Result<Vec<Multidegree>> {
    let (n, sum) = check_enumeration(config, total_degree)?;
    Ok(compositions(sum, n + 1)
        .into_iter()
        .map(|coords| Multidegree { coords, total_degree })
        .collect())
}

/// One non-increasing representative per permutation orbit, lexicographically descending.
pub fn enumerate_orbits(config: &PointConfig, total_degree: u32) -> Result<Vec<OrbitRep>> {
    let (n, sum) = check_enumeration(config, total_degree)?;
    Ok(padded_partitions(sum, n + 1)
        .into_iter()
        .map(|coords| {
            let orbit_size = orbit_size(&coords);
            OrbitRep { canonical: Multidegree { coords, total_degree }, orbit_size }
        })
        .collect())
}

/// Solves `ω · a = 1` for every point, returning one rational solution if any.
#[allow(clippy::needless_range_loop)]
fn solve_homogenizer(points: &[Vec<u32>]) -> Option<Vec<BigRational>> {
    let k = points[0].len();
    let mut rows: Vec<Vec<BigRational>> = points
        .iter()
        .map(|p| {
            let mut r: Vec<BigRational> =
                p.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
            r.push(BigRational::one());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(pr) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pr);
        let inv = rows[row][col].recip();
        for c in col..=k {
            rows[row][c] = &rows[row][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=k {
                    let delta = &f * &rows[row][c];
                    rows[r][c] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if rows[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut omega = vec![BigRational::zero(); k];
    for (r, &c) in pivot_cols.iter().enumerate() {
        omega[c] = rows[r][k].clone();
    }
    Some(omega)
}

#[derive(Serialize, Deserialize)]
struct PointConfigJson {
    kind: String,
    n: Option<usize>,
    d: Option<u32>,
    points: Vec<Vec<u32>>,
}

impl Serialize for PointConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, n, d) = match self.kind {
            ConfigKind::Veronese { n, d } => ("veronese", Some(n), Some(d)),
            ConfigKind::General => ("general", None, None),
        };
        PointConfigJson { kind: kind.into(), n, d, points: self.points.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointConfig {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PointConfigJson::deserialize(de)?;
        match raw.kind.as_str() {
            "veronese" => {
                let (Some(n), Some(d)) = (raw.n, raw.d) else {
                    return Err(D::Error::custom("veronese config needs n and d"));
                };
                let cfg = veronese_points(n, d).map_err(D::Error::custom)?;
                if !raw.points.is_empty() && raw.points != cfg.points {
                    return Err(D::Error::custom("points do not match veronese(n, d)"));
                }
                Ok(cfg)
            }
            "general" => PointConfig::general(raw.points).map_err(D::Error::custom),
            other => Err(D::Error::custom(format!("unknown config kind '{other}'"))),
        }
    }
}
