//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every function returns a JSON string. The `*_json` variants are plain Rust
//! so they can be tested natively.

use serde_json::json;
use toric_syzygy::complex::{build_slice, BuildOptions};
use toric_syzygy::homology::{reduced_betti, BettiOptions};
use toric_syzygy::lattice::veronese_points;
use toric_syzygy::npchecker::{check_np, DegreeBounds, NpQuery};
use toric_syzygy::reptheory::tor_schur_decomposition;
use toric_syzygy::Error;
use wasm_bindgen::prelude::*;

/// Keeps a single browser call within a few seconds.
const WEB_FACE_CAP: u64 = 200_000;

fn parse_coords(text: &str) -> Result<Vec<u32>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| format!("bad coordinate {s:?}")))
        .collect()
}

fn text(e: Error) -> String {
    e.to_string()
}

pub fn betti_json(n: usize, d: u32, b: &str, j: i32) -> Result<String, String> {
    let config = veronese_points(n, d).map_err(text)?;
    let mut b = parse_coords(b)?;
    if b.len() != n + 1 {
        return Err(format!("b needs {} coordinates", n + 1));
    }
    let signed: Vec<i64> = b.iter().map(|&c| c as i64).collect();
    if !config.contains(&signed) {
        return Err(text(Error::NotInSemigroup(b)));
    }
    if j < 0 {
        return Err("j must be nonnegative".into());
    }
    b.sort_unstable_by(|x, y| y.cmp(x));
    let slice = build_slice(&config, &b, j - 1, j + 1, &BuildOptions { face_cap: WEB_FACE_CAP }).map_err(text)?;
    let betti = reduced_betti(&slice, j, &BettiOptions::default()).map_err(text)?;
    Ok(json!({
        "b": b,
        "j": j,
        "betti": betti.value,
        "face_counts": slice.summary().face_counts,
    })
    .to_string())
}

pub fn check_np_json(n: usize, d: u32, p: usize, slack: u32) -> Result<String, String> {
    let query = NpQuery {
        degrees: DegreeBounds::PerStep { slack: Some(slack) },
        face_cap: WEB_FACE_CAP,
        ..NpQuery::new(n, d, p)
    };
    let mut verdict = check_np(&query).map_err(text)?;
    verdict.timing = None;
    serde_json::to_string(&verdict).map_err(|e| e.to_string())
}

pub fn schur_json(p: usize, q: u32, d: u32, v_dim: usize) -> Result<String, String> {
    let dec = tor_schur_decomposition(p, q, d, v_dim).map_err(text)?;
    let terms: Vec<_> = dec
        .terms
        .iter()
        .map(|(lambda, mult)| json!({ "partition": lambda.parts(), "label": lambda.to_string(), "mult": mult }))
        .collect();
    Ok(json!({ "p": p, "q": q, "d": d, "vdim": v_dim, "max_rows": dec.max_rows(), "terms": terms }).to_string())
}

/// `β̃_j(Δ_b)` for the Veronese configuration; `b` is a comma list.
#[wasm_bindgen]
pub fn betti(n: usize, d: u32, b: &str, j: i32) -> Result<String, String> {
    betti_json(n, d, b, j)
}

#[wasm_bindgen(js_name = checkNp)]
pub fn check_np_js(n: usize, d: u32, p: usize, slack: u32) -> Result<String, String> {
    check_np_json(n, d, p, slack)
}

#[wasm_bindgen]
pub fn schur(p: usize, q: u32, d: u32, v_dim: usize) -> Result<String, String> {
    schur_json(p, q, d, v_dim)
}
