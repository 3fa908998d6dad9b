use std::fs;

use toric_syzygy::koszul::tor_dimension;
use toric_syzygy::npchecker::*;

fn run(n: usize, d: u32, p: usize) -> NpVerdict {
    check_np(&NpQuery::new(n, d, p)).unwrap()
}

fn sorted_desc(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

#[test]
fn failures_persist_to_larger_p() {
    // Property N_p is nested, so the first obstruction found for p = 6 is also
    // the first for p = 7
    let six = run(3, 2, 6);
    let seven = run(3, 2, 7);
    assert_eq!(six.status, NpStatus::Fails);
    assert_eq!(seven.status, NpStatus::Fails);
    assert_eq!(six.witness, seven.witness);
    let w = six.witness.unwrap();
    assert!(w.betti.certified && w.betti.value > 0);
    assert_eq!(w.koszul_q, w.total_degree - w.q as u32);
}

#[test]
fn symmetry_reduction_is_sound() {
    for (n, d, p, slack) in [(1usize, 3u32, 3usize, 2u32), (2, 2, 3, 1), (2, 3, 7, 0), (3, 2, 6, 0)] {
        let base = NpQuery { degrees: DegreeBounds::PerStep { slack: Some(slack) }, ..NpQuery::new(n, d, p) };
        let with = check_np(&base).unwrap();
        let without = check_np(&NpQuery { use_symmetry: false, ..base }).unwrap();
        assert_eq!(with.status, without.status, "n={n} d={d} p={p}");
        match (with.witness, without.witness) {
            (Some(a), Some(b)) => {
                assert_eq!((a.q, a.total_degree, a.betti.value), (b.q, b.total_degree, b.betti.value));
                assert_eq!(sorted_desc(&a.b), sorted_desc(&b.b));
            }
            (None, None) => {}
            other => panic!("witness mismatch {other:?}"),
        }
        assert!(with.stats.planned <= without.stats.planned);
    }
}

#[test]
fn witness_agrees_with_koszul_complex() {
    let v = run(2, 3, 7);
    let w = v.witness.expect("N_7 fails for the cubic Veronese surface");
    assert_eq!((w.b.as_slice(), w.q, w.total_degree, w.koszul_q), (&[9, 9, 9][..], 7, 9, 2));
    assert_eq!(tor_dimension(w.q, w.koszul_q, 2, 3, Some(&w.b)).unwrap(), w.betti.value);
}

#[test]
fn field_strategies_agree() {
    let q = NpQuery::new(2, 3, 7);
    let exact = check_np(&NpQuery { strategy: toric_syzygy::homology::FieldStrategy::Exact, ..q.clone() }).unwrap();
    let modular = check_np(&q).unwrap();
    assert_eq!(exact.status, modular.status);
    assert_eq!(exact.witness, modular.witness);
    let coned = check_np(&NpQuery { cone_shortcut: true, ..q }).unwrap();
    assert_eq!(coned.witness, modular.witness);
}

#[test]
fn verdicts_are_deterministic() {
    let strip = |mut v: NpVerdict| {
        v.timing = None;
        serde_json::to_string(&v).unwrap()
    };
    for (n, d, p) in [(2usize, 3u32, 7usize), (2, 2, 4)] {
        assert_eq!(strip(run(n, d, p)), strip(run(n, d, p)));
    }
}

#[test]
fn holds_reports_its_bound() {
    let v = run(2, 3, 6);
    assert_eq!(v.status, NpStatus::HoldsUpToBound);
    assert!(v.witness.is_none());
    assert_eq!(v.slack, Some(2));
    for step in &v.checked_degrees {
        assert_eq!(step.degrees, (step.q as u32 + 2..=step.q as u32 + 4).collect::<Vec<_>>());
    }
    assert_eq!(v.regularity, veronese_regularity(2, 3));
    assert!(v.degree_bound_covers_regularity);
    assert!(v.statement.contains("up to"));
}

#[test]
fn explicit_degrees_and_qmax() {
    let q = NpQuery { degrees: DegreeBounds::Explicit(vec![9]), q_max: Some(6), ..NpQuery::new(2, 3, 7) };
    let v = check_np(&q).unwrap();
    assert_eq!(v.status, NpStatus::HoldsUpToBound);
    assert_eq!(v.q_max, 6);
    assert!(v.checked_degrees.iter().all(|s| s.degrees == [9]));
    let q = NpQuery { degrees: DegreeBounds::Explicit(vec![9]), ..NpQuery::new(2, 3, 7) };
    assert_eq!(check_np(&q).unwrap().status, NpStatus::Fails);
}

#[test]
fn dimension_reduction() {
    assert_eq!(reduce_dimension(5, 2, true), 2);
    assert_eq!(reduce_dimension(5, 2, false), 5);
    assert_eq!(reduce_dimension(1, 4, true), 1);
    let v = run(4, 2, 2);
    assert_eq!(v.effective_n, 2);
    assert_eq!(v.status, run(2, 2, 2).status);
}

#[test]
fn rejects_bad_queries() {
    assert!(check_np(&NpQuery::new(0, 2, 2)).is_err());
    assert!(check_np(&NpQuery::new(2, 0, 2)).is_err());
    assert!(check_np(&NpQuery::new(2, 2, 0)).is_err());
    assert!(check_np(&NpQuery { q_max: Some(0), ..NpQuery::new(2, 2, 2) }).is_err());
    assert!(check_np(&NpQuery { degrees: DegreeBounds::Explicit(vec![]), ..NpQuery::new(2, 2, 2) }).is_err());
    assert!(check_np(&NpQuery { prime: 100, ..NpQuery::new(2, 2, 2) }).is_err());
    let capped = check_np(&NpQuery { face_cap: 5, ..NpQuery::new(2, 3, 4) }).unwrap_err();
    assert!(capped.is_capacity(), "{capped}");
}

#[test]
fn results_store_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let store = ResultsStore::open(dir.path()).unwrap();
    let q = NpQuery::new(2, 3, 6);
    let first = check_np_with_store(&q, Some(&store)).unwrap();
    assert!(first.stats.computed > 0);
    assert_eq!(first.stats.from_store, 0);
    let path = store.file_for(2, 3);
    let lines = fs::read_to_string(&path).unwrap().lines().count();
    assert!(lines > 0);

    let second = check_np_with_store(&q, Some(&store)).unwrap();
    assert_eq!(second.stats.computed, 0);
    assert_eq!(second.stats.from_store, first.stats.computed);
    assert_eq!(second.status, first.status);
    assert_eq!(second.table, first.table);
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), lines, "nothing new appended");

    // an interrupted append leaves a partial last line, which is skipped
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("{\"n\":2,\"d\":3,\"b\":[");
    fs::write(&path, &text).unwrap();
    assert_eq!(store.load(2, 3).unwrap().len(), lines);

    fs::write(&path, "not json\n").unwrap();
    assert!(store.load(2, 3).is_err());
    assert_ne!(store.file_for(2, 3), store.file_for(3, 2));
}

#[test]
fn betti_table_as_csv() {
    let v = run(1, 3, 2);
    let csv = betti_table_csv(&v.table).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("b,j,value,certified"));
    assert_eq!(lines.count(), v.table.len());
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn cross_validation_examples() {
    let opts = CrossOptions::default();
    let r = cross_validate(1, 3, 1, 1, &opts).unwrap();
    assert_eq!((r.compared, r.matched_nonzero, r.matched_zero), (7, 3, 4));
    let weights: Vec<&[u32]> = r.pairs.iter().map(|p| p.b.as_slice()).collect();
    assert_eq!(weights, [&[4, 2][..], &[3, 3], &[2, 4]]);
    let conic = cross_validate(1, 2, 1, 1, &opts).unwrap();
    assert_eq!(conic.matched_nonzero, 1);
    assert_eq!(conic.pairs[0].b, [2, 2]);
    let surface = cross_validate(2, 2, 1, 2, &opts).unwrap();
    assert!(surface.pairs.is_empty() && surface.mismatches.is_empty());
    assert!(surface.ensure_consistent().is_ok());
    let orbits = cross_validate(1, 3, 1, 1, &CrossOptions { all_weights: false, ..opts }).unwrap();
    assert_eq!(orbits.compared, 4);
}
