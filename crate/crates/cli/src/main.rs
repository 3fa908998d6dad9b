//! `syzygy`: command-line front end.
//!
//! Exit codes: 0 success, 1 a failing verdict (N_p fails, cross-validation
//! mismatch), 2 usage, membership or capacity errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use toric_syzygy::complex::{boundary_matrix, build_slice, BuildOptions, DEFAULT_FACE_CAP};
use toric_syzygy::homology::{self, BettiOptions, FieldStrategy, ModpOptions, RowOrder, DEFAULT_PRIME};
use toric_syzygy::koszul::{self, TorSlice};
use toric_syzygy::lattice::{veronese_points, PointConfig};
use toric_syzygy::npchecker::{self, CrossOptions, DegreeBounds, NpQuery, NpStatus, ResultsStore};
use toric_syzygy::reptheory;
use toric_syzygy::Error;

#[derive(Parser)]
#[command(name = "syzygy", version, about = "Graded Betti numbers and Property N_p of Veronese embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SYZYGY_THREADS")]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List the points of A_{d,n}.
    Points(Veronese),
    /// Build Δ_b up to dimension j and list its faces.
    Complex(ComplexArgs),
    /// Reduced Betti number β̃_j(Δ_b).
    Betti(BettiArgs),
    /// Decide Property N_p up to a degree bound.
    CheckNp(CheckNpArgs),
    /// Tor dimensions from the Koszul complex.
    Koszul(KoszulArgs),
    /// Schur decomposition of Tor_p(·)_{p+q}.
    Schur(SchurArgs),
    /// Compare Koszul Tor dimensions with divisor-complex homology.
    CrossValidate(CrossArgs),
    /// Time slice construction and boundary ranks for one b.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Veronese {
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 'd')]
    d: u32,
}

#[derive(Args)]
struct Source {
    #[arg(short = 'n', required_unless_present = "config")]
    n: Option<usize>,
    #[arg(short = 'd', required_unless_present = "config")]
    d: Option<u32>,
    /// A general point configuration (text, one point per line, or JSON).
    #[arg(long, conflicts_with_all = ["n", "d"])]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Field {
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    /// Draw a 30-bit prime from this seed instead of using --prime.
    #[arg(long, conflicts_with = "prime")]
    random_prime: Option<u64>,
    /// Rational ranks only, no modular pass.
    #[arg(long)]
    exact: bool,
    /// Report H̃_j = 0 when a vertex cones every j-face.
    #[arg(long)]
    cone_shortcut: bool,
}

impl Field {
    fn prime(&self) -> u32 {
        match self.random_prime {
            Some(seed) => {
                let start = ChaCha8Rng::seed_from_u64(seed).random_range(1u32 << 29..1u32 << 30);
                let p = homology::next_prime(start);
                eprintln!("note: using prime {p}");
                p
            }
            None => self.prime,
        }
    }

    fn strategy(&self) -> FieldStrategy {
        if self.exact {
            FieldStrategy::Exact
        } else {
            FieldStrategy::ModularFirst
        }
    }
}

#[derive(Args)]
struct ComplexArgs {
    #[command(flatten)]
    source: Source,
    #[arg(short = 'b')]
    b: Coords,
    /// Highest face dimension.
    #[arg(short = 'j')]
    j: i32,
    #[arg(long, default_value_t = DEFAULT_FACE_CAP)]
    face_cap: u64,
}

#[derive(Args)]
struct BettiArgs {
    #[command(flatten)]
    source: Source,
    #[arg(short = 'b')]
    b: Coords,
    #[arg(short = 'j')]
    j: i32,
    #[command(flatten)]
    field: Field,
    #[arg(long, default_value_t = DEFAULT_FACE_CAP)]
    face_cap: u64,
}

#[derive(Args)]
struct CheckNpArgs {
    #[command(flatten)]
    veronese: Veronese,
    #[arg(short = 'p')]
    p: usize,
    /// Check deg b ∈ [q+2, q+2+slack] (default: the effective n).
    #[arg(long, conflicts_with = "degrees")]
    slack: Option<u32>,
    /// Explicit total degrees instead of a slack window.
    #[arg(long)]
    degrees: Option<Coords>,
    #[arg(long)]
    qmax: Option<usize>,
    #[command(flatten)]
    field: Field,
    /// Check P^n itself instead of P^{min(n,p)}.
    #[arg(long)]
    no_reduction: bool,
    /// Check every multidegree instead of one per permutation orbit.
    #[arg(long)]
    no_symmetry: bool,
    /// Results store directory.
    #[arg(long, env = "SYZYGY_STORE")]
    store: Option<PathBuf>,
    /// Include wall-clock timing (output is then not reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = DEFAULT_FACE_CAP)]
    face_cap: u64,
}

#[derive(Args)]
struct KoszulArgs {
    #[command(flatten)]
    veronese: Veronese,
    #[arg(short = 'p')]
    p: usize,
    #[arg(short = 'q')]
    q: u32,
    /// Single weight; default sweeps all weights.
    #[arg(short = 'b')]
    b: Option<Coords>,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
}

#[derive(Args)]
struct SchurArgs {
    #[arg(short = 'p')]
    p: usize,
    #[arg(short = 'q')]
    q: u32,
    #[arg(short = 'd')]
    d: u32,
    #[arg(long)]
    vdim: usize,
    /// Decompose ∧^p Sym^d V ⊗ Sym^{qd} V instead of its Koszul homology.
    #[arg(long)]
    chain: bool,
}

#[derive(Args)]
struct CrossArgs {
    #[command(flatten)]
    veronese: Veronese,
    #[arg(short = 'p')]
    p: usize,
    #[arg(short = 'q')]
    q: u32,
    /// Compare orbit representatives only.
    #[arg(long)]
    orbits: bool,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    veronese: Veronese,
    #[arg(short = 'b')]
    b: Coords,
    #[arg(short = 'j')]
    j: i32,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
}

/// Comma-separated nonnegative integers.
#[derive(Clone, Debug)]
struct Coords(Vec<u32>);

impl std::str::FromStr for Coords {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| format!("'{t}' is not a nonnegative integer")))
            .collect::<Result<Vec<u32>, String>>()
            .map(Coords)
    }
}

enum Failure {
    /// A mathematical negative result; the output was already written.
    Verdict,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type Outcome = Result<(), Failure>;

struct Out {
    format: Format,
    buf: String,
}

impl Out {
    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Error> {
        self.buf.push_str(&serde_json::to_string_pretty(value)?);
        self.buf.push('\n');
        Ok(())
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.buf.push_str(s.as_ref());
        self.buf.push('\n');
    }

    fn csv_unsupported(&self, command: &str) -> Result<(), Error> {
        if self.format == Format::Csv {
            return Err(Error::InvalidArgument(format!("--format csv is not available for {command}")));
        }
        Ok(())
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn validate_veronese(n: usize, d: u32) -> Result<PointConfig, Error> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("-n and -d must be positive".into()));
    }
    veronese_points(n, d)
}

fn load_config(source: &Source) -> Result<PointConfig, Error> {
    if let Some(path) = &source.config {
        let text = std::fs::read_to_string(path)?;
        if text.trim_start().starts_with('{') {
            return Ok(serde_json::from_str(&text)?);
        }
        return PointConfig::parse_text(&text);
    }
    validate_veronese(source.n.unwrap_or(0), source.d.unwrap_or(0))
}

/// Checks `b ∈ NA` and, for Veronese configurations, replaces `b` by its
/// orbit representative.
fn prepare_bound(config: &PointConfig, b: &[u32]) -> Result<Vec<u32>, Error> {
    if b.len() != config.ambient_dim() {
        return Err(Error::InvalidArgument(format!(
            "-b has {} coordinates, configuration lives in N^{}",
            b.len(),
            config.ambient_dim()
        )));
    }
    let signed: Vec<i64> = b.iter().map(|&c| c as i64).collect();
    if !config.contains(&signed) {
        return Err(Error::NotInSemigroup(b.to_vec()));
    }
    if !config.is_veronese() {
        return Ok(b.to_vec());
    }
    let mut canon = b.to_vec();
    canon.sort_unstable_by(|x, y| y.cmp(x));
    if canon != b {
        eprintln!("note: using orbit representative b = {} for {}", join(&canon), join(b));
    }
    Ok(canon)
}

fn cmd_points(args: &Veronese, out: &mut Out) -> Outcome {
    let config = validate_veronese(args.n, args.d)?;
    match out.format {
        Format::Json => out.json(&json!({ "n": args.n, "d": args.d, "count": config.len(), "points": config.points() }))?,
        Format::Text | Format::Csv => {
            for p in config.points() {
                let cells: Vec<String> = p.iter().map(u32::to_string).collect();
                out.line(cells.join(if out.format == Format::Csv { "," } else { " " }));
            }
        }
    }
    Ok(())
}

fn cmd_complex(args: &ComplexArgs, out: &mut Out) -> Outcome {
    out.csv_unsupported("complex")?;
    let config = load_config(&args.source)?;
    let b = prepare_bound(&config, &args.b.0)?;
    let slice = build_slice(&config, &b, -1, args.j, &BuildOptions { face_cap: args.face_cap })?;
    match out.format {
        Format::Json => {
            let faces: Vec<Vec<Vec<u32>>> =
                (-1..=args.j).map(|k| slice.faces(k).map(|f| f.vertex_indices).collect()).collect();
            out.json(&json!({ "summary": slice.summary(), "vertices": slice.vertices(), "faces": faces }))?;
        }
        _ => out.buf.push_str(&slice.to_face_list()),
    }
    Ok(())
}

fn cmd_betti(args: &BettiArgs, out: &mut Out) -> Outcome {
    out.csv_unsupported("betti")?;
    let config = load_config(&args.source)?;
    let b = prepare_bound(&config, &args.b.0)?;
    if args.j < 0 {
        return Err(Error::InvalidArgument("-j must be nonnegative".into()).into());
    }
    let slice = build_slice(&config, &b, args.j - 1, args.j + 1, &BuildOptions { face_cap: args.face_cap })?;
    let opts = BettiOptions {
        strategy: args.field.strategy(),
        prime: args.field.prime(),
        cone_shortcut: args.field.cone_shortcut,
        ..Default::default()
    };
    let betti = homology::reduced_betti(&slice, args.j, &opts)?;
    match out.format {
        Format::Json => out.json(&betti)?,
        _ => out.line(format!("b = {}  j = {}  betti = {}", join(&betti.multidegree), betti.j, betti.value)),
    }
    Ok(())
}

fn cmd_check_np(args: &CheckNpArgs, out: &mut Out) -> Outcome {
    let degrees = match &args.degrees {
        Some(list) => DegreeBounds::Explicit(list.0.clone()),
        None => DegreeBounds::PerStep { slack: args.slack },
    };
    let query = NpQuery {
        q_max: args.qmax,
        degrees,
        strategy: args.field.strategy(),
        use_reduction: !args.no_reduction,
        use_symmetry: !args.no_symmetry,
        cone_shortcut: args.field.cone_shortcut,
        prime: args.field.prime(),
        face_cap: args.face_cap,
        ..NpQuery::new(args.veronese.n, args.veronese.d, args.p)
    };
    let store = args.store.as_ref().map(ResultsStore::open).transpose()?;
    let mut verdict = npchecker::check_np_with_store(&query, store.as_ref())?;
    if !args.timing {
        verdict.timing = None;
    }
    match out.format {
        Format::Json => out.json(&verdict)?,
        Format::Csv => out.buf.push_str(&npchecker::betti_table_csv(&verdict.table)?),
        Format::Text => {
            let status = match verdict.status {
                NpStatus::HoldsUpToBound => "holds_up_to_bound",
                NpStatus::Fails => "fails",
            };
            out.line(format!("N_{} for O_P^{}({}): {status}", verdict.p, verdict.n, verdict.d));
            out.line(&verdict.statement);
            for step in &verdict.checked_degrees {
                out.line(format!("  q = {}: deg b in {{{}}}, {} jobs", step.q, join(&step.degrees), step.jobs));
            }
            if let Some(w) = &verdict.witness {
                out.line(format!(
                    "  witness: b = {}, q = {}, deg b = {}, betti = {}",
                    join(&w.b),
                    w.q,
                    w.total_degree,
                    w.betti.value
                ));
            }
            if let Some(t) = &verdict.timing {
                out.line(format!("  elapsed: {} ms", t.elapsed_ms));
            }
        }
    }
    match verdict.status {
        NpStatus::HoldsUpToBound => Ok(()),
        NpStatus::Fails => Err(Failure::Verdict),
    }
}

fn cmd_koszul(args: &KoszulArgs, out: &mut Out) -> Outcome {
    out.csv_unsupported("koszul")?;
    validate_veronese(args.veronese.n, args.veronese.d)?;
    let (n, d) = (args.veronese.n, args.veronese.d);
    let opts = koszul::KoszulOptions { prime: args.prime, ..Default::default() };
    let slice = match &args.b {
        Some(Coords(b)) => {
            let dim = koszul::tor_dimension_with(args.p, args.q, n, d, Some(b), &opts)?;
            let mut weight_character = std::collections::BTreeMap::new();
            if dim > 0 {
                weight_character.insert(b.clone(), dim);
            }
            TorSlice { p: args.p, q: args.q, total_dim: dim, weight_character }
        }
        None => koszul::tor_slice_with(args.p, args.q, n, d, &opts)?,
    };
    match out.format {
        Format::Json => out.json(&slice)?,
        _ => {
            out.line(format!("Tor_{}(·)_{} of O_P^{n}({d}): total_dim = {}", args.p, args.p as u32 + args.q, slice.total_dim));
            for (b, m) in &slice.weight_character {
                out.line(format!("  {}: {m}", join(b)));
            }
        }
    }
    Ok(())
}

fn cmd_schur(args: &SchurArgs, out: &mut Out) -> Outcome {
    out.csv_unsupported("schur")?;
    let dec = if args.chain {
        reptheory::schur_decompose(&reptheory::weight_character(args.p, args.q, args.d, args.vdim)?)?
    } else {
        reptheory::tor_schur_decomposition(args.p, args.q, args.d, args.vdim)?
    };
    match out.format {
        Format::Json => out.json(&dec)?,
        _ => {
            if dec.is_empty() {
                out.line("0");
            }
            for (lambda, m) in &dec.terms {
                out.line(format!("{m} x S^{lambda}"));
            }
        }
    }
    Ok(())
}

fn cmd_cross_validate(args: &CrossArgs, out: &mut Out) -> Outcome {
    out.csv_unsupported("cross-validate")?;
    validate_veronese(args.veronese.n, args.veronese.d)?;
    let opts = CrossOptions {
        all_weights: !args.orbits,
        koszul: koszul::KoszulOptions { prime: args.prime, ..Default::default() },
    };
    let report = npchecker::cross_validate(args.veronese.n, args.veronese.d, args.p, args.q, &opts)?;
    match out.format {
        Format::Json => out.json(&report)?,
        _ => {
            out.line(format!(
                "{} weights compared: {} matches, {} zero on both sides, {} mismatches",
                report.compared,
                report.matched_nonzero,
                report.matched_zero,
                report.mismatches.len()
            ));
            for pair in &report.pairs {
                out.line(format!("  b = {}: koszul {} betti {}", join(&pair.b), pair.koszul, pair.betti));
            }
        }
    }
    if report.mismatches.is_empty() {
        Ok(())
    } else {
        if let Err(e) = report.ensure_consistent() {
            eprintln!("error: {e}");
        }
        Err(Failure::Verdict)
    }
}

fn cmd_bench(args: &BenchArgs, out: &mut Out) -> Outcome {
    out.csv_unsupported("bench")?;
    let config = validate_veronese(args.veronese.n, args.veronese.d)?;
    let b = prepare_bound(&config, &args.b.0)?;
    homology::checked_prime(args.prime as u64)?;
    let t = Instant::now();
    let slice = build_slice(&config, &b, (args.j - 1).max(-1), args.j + 1, &BuildOptions::default())?;
    let build_ms = t.elapsed().as_secs_f64() * 1e3;
    let mut ranks = Vec::new();
    for k in [args.j, args.j + 1] {
        if k < 1 || slice.face_count(k) == 0 {
            continue;
        }
        let m = boundary_matrix(&slice, k)?;
        let mut row = json!({ "k": k, "rows": m.rows(), "cols": m.cols(), "nnz": m.nnz() });
        for (name, order) in [("reversed", RowOrder::Reversed), ("natural", RowOrder::Natural)] {
            let t = Instant::now();
            let rank = homology::modp::rank(&m, &ModpOptions { row_order: order, ..ModpOptions::new(args.prime) })?;
            row[name] = json!({ "rank": rank, "ms": t.elapsed().as_secs_f64() * 1e3 });
        }
        ranks.push(row);
    }
    let t = Instant::now();
    let betti = if args.j >= 0 {
        let opts = BettiOptions { prime: args.prime, ..Default::default() };
        Some(homology::reduced_betti(&slice, args.j, &opts)?.value)
    } else {
        None
    };
    let betti_ms = t.elapsed().as_secs_f64() * 1e3;
    let report = json!({
        "b": b, "j": args.j, "face_counts": slice.summary().face_counts, "build_ms": build_ms,
        "ranks": ranks, "betti": betti, "betti_ms": betti_ms,
    });
    match out.format {
        Format::Json => out.json(&report)?,
        _ => out.line(serde_json::to_string(&report).map_err(Error::from)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = Out { format: cli.format, buf: String::new() };
    let result = match &cli.command {
        Command::Points(a) => cmd_points(a, &mut out),
        Command::Complex(a) => cmd_complex(a, &mut out),
        Command::Betti(a) => cmd_betti(a, &mut out),
        Command::CheckNp(a) => cmd_check_np(a, &mut out),
        Command::Koszul(a) => cmd_koszul(a, &mut out),
        Command::Schur(a) => cmd_schur(a, &mut out),
        Command::CrossValidate(a) => cmd_cross_validate(a, &mut out),
        Command::Bench(a) => cmd_bench(a, &mut out),
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.buf.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
