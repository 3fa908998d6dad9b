//! Property `N_p` for Veronese embeddings, decided up to a degree bound.
//!
//! `O_{P^n}(d)` satisfies `N_p` iff `H̃_{q−1}(Δ_b) = 0` for every `b ∈ NA_{d,n}`
//! with `deg b ≥ q + 2`, for every `q ≤ p`. Each `(q, b)` pair with `b` an
//! orbit representative is one job. The reported witness is the first nonzero
//! job in the order (q, deg b, b lexicographically increasing), independent of
//! scheduling.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complex::{build_slice, BuildOptions, DEFAULT_FACE_CAP};
use crate::error::{Error, Result};
use crate::homology::{checked_prime, reduced_betti, BettiNumber, BettiOptions, FieldStrategy, DEFAULT_PRIME};
use crate::koszul::{tor_dimension_with, KoszulOptions};
use crate::lattice::{compositions, padded_partitions, veronese_points, Multidegree, PointConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeBounds {
    /// `deg b ∈ [q+2, q+2+slack]`; `None` means slack = effective `n`.
    PerStep { slack: Option<u32> },
    /// The listed total degrees, for every `q` with `deg b ≥ q + 2`.
    Explicit(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpQuery {
    pub n: usize,
    pub d: u32,
    pub p: usize,
    /// Largest `q` examined; defaults to `p`.
    pub q_max: Option<usize>,
    pub degrees: DegreeBounds,
    pub strategy: FieldStrategy,
    pub use_reduction: bool,
    pub use_symmetry: bool,
    pub cone_shortcut: bool,
    pub prime: u32,
    pub face_cap: u64,
}

impl NpQuery {
    pub fn new(n: usize, d: u32, p: usize) -> Self {
        NpQuery {
            n,
            d,
            p,
            q_max: None,
            degrees: DegreeBounds::PerStep { slack: None },
            strategy: FieldStrategy::ModularFirst,
            use_reduction: true,
            use_symmetry: true,
            cone_shortcut: false,
            prime: DEFAULT_PRIME,
            face_cap: DEFAULT_FACE_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 || self.p == 0 {
            return Err(Error::InvalidArgument("n, d and p must be positive".into()));
        }
        if self.q_max == Some(0) {
            return Err(Error::InvalidArgument("q_max must be positive".into()));
        }
        if let DegreeBounds::Explicit(list) = &self.degrees {
            if list.is_empty() {
                return Err(Error::InvalidArgument("explicit degree list is empty".into()));
            }
        }
        Ok(())
    }
}

/// Property `N_p` for `P^n` is decided by `P^{min(n,p)}`.
pub fn reduce_dimension(n: usize, p: usize, enabled: bool) -> usize {
    if enabled {
        n.min(p)
    } else {
        n
    }
}

/// Castelnuovo–Mumford regularity of the `d`-th Veronese ring of `P^n`:
/// `Tor_q` lives in degrees `q + k` with `k ≤ n + 1 − ⌈(n+1)/d⌉`.
pub fn veronese_regularity(n: usize, d: u32) -> u32 {
    let dim = n as u32 + 1;
    dim - dim.div_ceil(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NpStatus {
    HoldsUpToBound,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub b: Vec<u32>,
    pub total_degree: u32,
    /// The `q` of the criterion: `β̃_{q−1}(Δ_b)` counts `q`-th syzygies.
    pub q: usize,
    /// Internal degree offset `deg b − q`, the `q` of `Tor_q(·)_{q+k}` grading.
    pub koszul_q: u32,
    pub orbit_size: u64,
    pub betti: BettiNumber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedStep {
    pub q: usize,
    pub degrees: Vec<u32>,
    pub jobs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobStats {
    pub planned: usize,
    pub computed: usize,
    pub from_store: usize,
    pub coned: usize,
    pub skipped_after_witness: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NpVerdict {
    pub n: usize,
    pub d: u32,
    pub p: usize,
    pub effective_n: usize,
    pub q_max: usize,
    pub slack: Option<u32>,
    pub status: NpStatus,
    pub statement: String,
    pub witness: Option<Witness>,
    pub checked_degrees: Vec<CheckedStep>,
    pub regularity: u32,
    pub degree_bound_covers_regularity: bool,
    pub stats: JobStats,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Timing>,
    /// Every Betti number computed or loaded, in job order.
    #[serde(skip)]
    pub table: Vec<BettiNumber>,
}

struct Job {
    q: usize,
    total_degree: u32,
    b: Vec<u32>,
    orbit_size: u64,
    // only the parallel scheduler orders by cost
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    cost: f64,
}

enum Outcome {
    Stored(usize),
    Coned,
    Computed(usize),
}

impl Outcome {
    fn value(&self) -> usize {
        match *self {
            Outcome::Stored(v) | Outcome::Computed(v) => v,
            Outcome::Coned => 0,
        }
    }
}

fn canonical(b: &[u32]) -> Vec<u32> {
    let mut c = b.to_vec();
    c.sort_unstable_by(|x, y| y.cmp(x));
    c
}

fn plan(query: &NpQuery, config: &PointConfig, effective_n: usize, q_max: usize) -> (Vec<CheckedStep>, Vec<Job>) {
    let slack = match query.degrees {
        DegreeBounds::PerStep { slack } => slack.unwrap_or(effective_n as u32),
        DegreeBounds::Explicit(_) => 0,
    };
    let mut steps = Vec::new();
    let mut jobs = Vec::new();
    for q in 1..=q_max {
        let lo = q as u32 + 2;
        let degrees: Vec<u32> = match &query.degrees {
            DegreeBounds::PerStep { .. } => (lo..=lo + slack).collect(),
            DegreeBounds::Explicit(list) => {
                let mut l: Vec<u32> = list.iter().copied().filter(|&g| g >= lo).collect();
                l.sort_unstable();
                l.dedup();
                l
            }
        };
        let before = jobs.len();
        for &g in &degrees {
            let sum = g * query.d;
            let mut level = if query.use_symmetry {
                padded_partitions(sum, effective_n + 1)
            } else {
                compositions(sum, effective_n + 1)
            };
            level.reverse();
            for b in level {
                let vertices = config.points().iter().filter(|a| a.iter().zip(&b).all(|(x, y)| x <= y)).count();
                let orbit_size = if query.use_symmetry { crate::lattice::orbit_size(&b) } else { 1 };
                jobs.push(Job { q, total_degree: g, b, orbit_size, cost: binomial_f64(vertices, q + 1) });
            }
        }
        steps.push(CheckedStep { q, degrees, jobs: jobs.len() - before });
    }
    (steps, jobs)
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn run_job(
    job: &Job,
    config: &PointConfig,
    query: &NpQuery,
    stored: &HashMap<(Vec<u32>, i32), usize>,
    cancel: &AtomicBool,
) -> Result<Outcome> {
    let j = job.q as i32 - 1;
    if let Some(&v) = stored.get(&(canonical(&job.b), j)) {
        return Ok(Outcome::Stored(v));
    }
    let wrap = |e: Error| match e {
        Error::Cancelled => Error::Cancelled,
        other => Error::Job { multidegree: job.b.clone(), j, source: Box::new(other) },
    };
    let slice = build_slice(config, &job.b, j - 1, j + 1, &BuildOptions { face_cap: query.face_cap }).map_err(wrap)?;
    if query.cone_shortcut && slice.cone_apex(j).is_some() {
        return Ok(Outcome::Coned);
    }
    let opts = BettiOptions {
        strategy: query.strategy,
        prime: query.prime,
        cancel: Some(cancel),
        ..Default::default()
    };
    reduced_betti(&slice, j, &opts).map(|b| Outcome::Computed(b.value)).map_err(wrap)
}

/// Wall clock, absent on `wasm32-unknown-unknown` where `Instant` panics.
struct Stopwatch(#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
            std::time::Instant::now(),
        )
    }

    fn elapsed_ms(&self) -> Option<u64> {
        #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
        return Some(self.0.elapsed().as_millis() as u64);
        #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
        None
    }
}

pub fn check_np(query: &NpQuery) -> Result<NpVerdict> {
    check_np_with_store(query, None)
}

pub fn check_np_with_store(query: &NpQuery, store: Option<&ResultsStore>) -> Result<NpVerdict> {
    query.validate()?;
    checked_prime(query.prime as u64)?;
    let started = Stopwatch::start();
    let effective_n = reduce_dimension(query.n, query.p, query.use_reduction);
    let q_max = query.q_max.unwrap_or(query.p).min(query.p);
    let config = veronese_points(effective_n, query.d)?;
    let (steps, jobs) = plan(query, &config, effective_n, q_max);
    let stored = match store {
        Some(s) => s.load(effective_n, query.d)?,
        None => HashMap::new(),
    };

    // the first terminal event (witness or error) in job order cancels all later jobs
    let first_stop = AtomicUsize::new(usize::MAX);
    let flags: Vec<AtomicBool> = jobs.iter().map(|_| AtomicBool::new(false)).collect();
    let stop_at = |k: usize| {
        let prev = first_stop.fetch_min(k, Ordering::SeqCst);
        for flag in flags.iter().take(prev.min(jobs.len())).skip(k + 1) {
            flag.store(true, Ordering::Relaxed);
        }
    };
    let work = |k: usize| -> Option<Result<Outcome>> {
        if k > first_stop.load(Ordering::SeqCst) {
            return None;
        }
        let r = run_job(&jobs[k], &config, query, &stored, &flags[k]);
        match &r {
            Ok(o) if o.value() > 0 => stop_at(k),
            Err(Error::Cancelled) => return None,
            Err(_) => stop_at(k),
            Ok(_) => {}
        }
        Some(r)
    };

    let mut outcomes: Vec<Option<Result<Outcome>>> = Vec::with_capacity(jobs.len());
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let mut schedule: Vec<usize> = (0..jobs.len()).collect();
        schedule.sort_by(|&a, &b| jobs[b].cost.total_cmp(&jobs[a].cost).then(a.cmp(&b)));
        let done: Vec<(usize, Option<Result<Outcome>>)> = schedule.par_iter().map(|&k| (k, work(k))).collect();
        outcomes.resize_with(jobs.len(), || None);
        for (k, r) in done {
            outcomes[k] = r;
        }
    }
    #[cfg(not(feature = "parallel"))]
    for k in 0..jobs.len() {
        outcomes.push(work(k));
    }

    let mut stats = JobStats { planned: jobs.len(), ..Default::default() };
    let mut table = Vec::new();
    let mut fresh = Vec::new();
    let mut witness = None;
    for (k, outcome) in outcomes.into_iter().enumerate() {
        let job = &jobs[k];
        let Some(outcome) = outcome else {
            stats.skipped_after_witness += 1;
            continue;
        };
        if witness.is_some() {
            // finished before the cancellation reached it
            stats.skipped_after_witness += 1;
            continue;
        }
        let outcome = outcome?;
        let value = outcome.value();
        match outcome {
            Outcome::Stored(_) => stats.from_store += 1,
            Outcome::Coned => stats.coned += 1,
            Outcome::Computed(_) => stats.computed += 1,
        }
        let betti = BettiNumber { j: job.q as i32 - 1, value, multidegree: job.b.clone(), certified: true };
        if !matches!(outcome, Outcome::Stored(_)) {
            fresh.push(BettiNumber { multidegree: canonical(&job.b), ..betti.clone() });
        }
        table.push(betti.clone());
        if value > 0 {
            witness = Some(Witness {
                b: job.b.clone(),
                total_degree: job.total_degree,
                q: job.q,
                koszul_q: job.total_degree - job.q as u32,
                orbit_size: job.orbit_size,
                betti,
            });
        }
    }
    if let Some(s) = store {
        s.append(effective_n, query.d, &fresh)?;
    }

    let slack = match query.degrees {
        DegreeBounds::PerStep { slack } => Some(slack.unwrap_or(effective_n as u32)),
        DegreeBounds::Explicit(_) => None,
    };
    let regularity = veronese_regularity(effective_n, query.d);
    let covers = steps
        .iter()
        .all(|s| (s.q as u32 + 2..=s.q as u32 + regularity).all(|g| s.degrees.contains(&g)));
    let mut checked_degrees = steps;
    if let Some(w) = &witness {
        checked_degrees.truncate(w.q);
        if let Some(last) = checked_degrees.last_mut() {
            last.degrees.retain(|&g| g <= w.total_degree);
            last.jobs = table.iter().filter(|b| b.j == w.q as i32 - 1).count();
        }
    }
    let statement = statement(query, effective_n, q_max, slack, witness.as_ref(), covers, regularity);
    Ok(NpVerdict {
        n: query.n,
        d: query.d,
        p: query.p,
        effective_n,
        q_max,
        slack,
        status: if witness.is_some() { NpStatus::Fails } else { NpStatus::HoldsUpToBound },
        statement,
        witness,
        checked_degrees,
        regularity,
        degree_bound_covers_regularity: covers,
        stats,
        timing: started.elapsed_ms().map(|elapsed_ms| Timing { elapsed_ms }),
        table,
    })
}

fn statement(
    query: &NpQuery,
    effective_n: usize,
    q_max: usize,
    slack: Option<u32>,
    witness: Option<&Witness>,
    covers: bool,
    regularity: u32,
) -> String {
    let (n, d, p) = (query.n, query.d, query.p);
    if let Some(w) = witness {
        return format!(
            "O_P^{n}({d}) fails N_{p}: H~_{}(Delta_b) has dimension {} at b = {:?} (deg b = {} >= q+2 with q = {}), certified over Q",
            w.q - 1,
            w.betti.value,
            w.b,
            w.total_degree,
            w.q
        );
    }
    let range = match slack {
        Some(s) => format!("q+2 <= deg b <= q+2+{s}"),
        None => "the listed degrees".to_string(),
    };
    let mut s = format!(
        "H~_{{q-1}}(Delta_b) = 0 for every b with {range}, q = 1..{q_max}; N_{p} holds up to this degree bound, higher degrees were not examined"
    );
    if q_max < p {
        s.push_str(&format!("; q = {}..{p} were not examined", q_max + 1));
    }
    if effective_n < n {
        s.push_str(&format!("; checked on P^{effective_n}, which decides N_{p} for every n >= {p}"));
    }
    if covers {
        s.push_str(&format!(
            "; the bound reaches the regularity {regularity} of the Veronese ring, past which these groups vanish"
        ));
    }
    s
}

/// Append-only JSON-lines files of certified Betti numbers, one file per
/// `(n, d)` named by a hash of those parameters.
#[derive(Clone, Debug)]
pub struct ResultsStore {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct StoreLine {
    n: usize,
    d: u32,
    b: Vec<u32>,
    j: i32,
    value: usize,
    certified: bool,
}

impl ResultsStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(ResultsStore { dir: dir.as_ref().to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_for(&self, n: usize, d: u32) -> PathBuf {
        let digest = Sha256::digest(format!("veronese-betti/v1 n={n} d={d}").as_bytes());
        self.dir.join(format!("{}.jsonl", hex::encode(&digest[..16])))
    }

    /// Entries keyed by `(canonical b, j)`. A truncated final line (an
    /// interrupted append) is ignored; any other malformed line is an error.
    pub fn load(&self, n: usize, d: u32) -> Result<HashMap<(Vec<u32>, i32), usize>> {
        let path = self.file_for(n, d);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(HashMap::new()),
            Err(e) => return Err(e.into()),
        };
        let complete = if text.ends_with('\n') { text.as_str() } else { &text[..text.rfind('\n').map_or(0, |i| i + 1)] };
        let mut out = HashMap::new();
        for (no, line) in complete.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: StoreLine = serde_json::from_str(line)
                .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), no + 1)))?;
            if entry.n != n || entry.d != d || !entry.certified {
                return Err(Error::Inconsistent(format!("{}:{}: foreign entry", path.display(), no + 1)));
            }
            out.insert((canonical(&entry.b), entry.j), entry.value);
        }
        Ok(out)
    }

    pub fn append(&self, n: usize, d: u32, entries: &[BettiNumber]) -> Result<()> {
        if entries.is_empty() {
            return Ok(());
        }
        let mut buf = String::new();
        for e in entries.iter().filter(|e| e.certified) {
            let line = StoreLine { n, d, b: canonical(&e.multidegree), j: e.j, value: e.value, certified: true };
            buf.push_str(&serde_json::to_string(&line)?);
            buf.push('\n');
        }
        let mut f = OpenOptions::new().create(true).append(true).open(self.file_for(n, d))?;
        f.write_all(buf.as_bytes())?;
        Ok(())
    }
}

/// CSV with columns `b, j, value, certified`.
pub fn betti_table_csv(rows: &[BettiNumber]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["b", "j", "value", "certified"]).map_err(csv_err)?;
    for r in rows {
        let b: Vec<String> = r.multidegree.iter().map(u32::to_string).collect();
        w.write_record([b.join(" "), r.j.to_string(), r.value.to_string(), r.certified.to_string()])
            .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Inconsistent(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparedPair {
    pub b: Vec<u32>,
    pub koszul: usize,
    pub betti: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossReport {
    pub n: usize,
    pub d: u32,
    pub p: usize,
    pub q: u32,
    pub compared: usize,
    pub matched_nonzero: usize,
    pub matched_zero: usize,
    /// Weights where either side is nonzero.
    pub pairs: Vec<ComparedPair>,
    pub mismatches: Vec<ComparedPair>,
}

impl CrossReport {
    pub fn ensure_consistent(&self) -> Result<()> {
        if self.mismatches.is_empty() {
            return Ok(());
        }
        let named: Vec<String> = self
            .mismatches
            .iter()
            .map(|m| format!("b = {:?}: Koszul {} vs divisor complex {}", m.b, m.koszul, m.betti))
            .collect();
        Err(Error::Inconsistent(format!("cross-validation mismatch at {}", named.join("; "))))
    }
}

#[derive(Clone, Debug)]
pub struct CrossOptions {
    /// Compare every multidegree, not only orbit representatives.
    pub all_weights: bool,
    pub koszul: KoszulOptions,
}

impl Default for CrossOptions {
    fn default() -> Self {
        CrossOptions { all_weights: true, koszul: KoszulOptions::default() }
    }
}

/// Compares `dim Tor_p(·)_{p+q}` at weight `b` from the Koszul complex with
/// `β̃_{p−1}(Δ_b)` for every `b` of degree `p + q`.
pub fn cross_validate(n: usize, d: u32, p: usize, q: u32, opts: &CrossOptions) -> Result<CrossReport> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidArgument("cross-validation needs p ≥ 1 and q ≥ 1".into()));
    }
    let config = veronese_points(n, d)?;
    let total = p as u32 + q;
    let sum = total * d;
    let weights = if opts.all_weights { compositions(sum, n + 1) } else { padded_partitions(sum, n + 1) };
    let j = p as i32 - 1;
    let compare = |b: &Vec<u32>| -> Result<ComparedPair> {
        Multidegree::new(&config, b.clone())?;
        let koszul = tor_dimension_with(p, q, n, d, Some(b), &opts.koszul)?;
        let slice = build_slice(&config, b, j - 1, j + 1, &BuildOptions::default())?;
        let betti = reduced_betti(&slice, j, &BettiOptions { prime: opts.koszul.prime, ..Default::default() })?.value;
        Ok(ComparedPair { b: b.clone(), koszul, betti })
    };
    #[cfg(feature = "parallel")]
    let results: Vec<Result<ComparedPair>> = {
        use rayon::prelude::*;
        weights.par_iter().map(compare).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<ComparedPair>> = weights.iter().map(compare).collect();

    let mut report = CrossReport {
        n,
        d,
        p,
        q,
        compared: 0,
        matched_nonzero: 0,
        matched_zero: 0,
        pairs: Vec::new(),
        mismatches: Vec::new(),
    };
    for r in results {
        let pair = r?;
        report.compared += 1;
        match (pair.koszul == pair.betti, pair.koszul) {
            (true, 0) => report.matched_zero += 1,
            (true, _) => report.matched_nonzero += 1,
            (false, _) => report.mismatches.push(pair.clone()),
        }
        if pair.koszul > 0 || pair.betti > 0 {
            report.pairs.push(pair);
        }
    }
    Ok(report)
}
