use taiko_core::search::{
    resume_search, run_search, table_cell, Checkpoint, GirthFloor, NullSink, SearchConfig, TableStatus,
};

#[test]
fn small_full_searches_find_nothing() {
    for m in 2..=4 {
        for n in 2..=7 {
            let r = run_search(&SearchConfig::full(m, n)).unwrap().report;
            assert!(r.completed.is_empty(), "{m}x{n}");
            assert!(!r.truncated);
            assert_eq!(r.bound_violations, 0);
        }
    }
}

#[test]
fn checkpoint_survives_a_file_round_trip() {
    let cfg = SearchConfig::full(5, 5);
    let whole = run_search(&cfg).unwrap().report;
    let cut = run_search(&SearchConfig { max_nodes: Some(20), ..cfg.clone() }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.json");
    cut.checkpoint.unwrap().write(&path).unwrap();
    let cp = Checkpoint::read(&path).unwrap();
    let done = resume_search(&cp, &SearchConfig { workers: 3, ..cfg }, &NullSink).unwrap().report;
    assert_eq!(done.per_level, whole.per_level);
    assert_eq!(done.completed, whole.completed);
}

#[test]
fn table_entries_at_the_corners() {
    let green = table_cell(4, 4, GirthFloor { p: 3, q: 3 }, Some(1_000_000), 1).unwrap();
    assert_eq!(green.status, TableStatus::Green);
    assert!(green.witness.unwrap().is_full_partition());
    let red = table_cell(6, 4, GirthFloor { p: 4, q: 4 }, Some(10_000_000), 1).unwrap();
    assert_eq!(red.status, TableStatus::Red);
    let unknown = table_cell(6, 6, GirthFloor { p: 4, q: 4 }, Some(3), 1).unwrap();
    assert_eq!(unknown.status, TableStatus::Unknown);
}

#[test]
fn odd_grids_seed_with_a_one_cell() {
    let r = run_search(&SearchConfig::full(3, 5)).unwrap().report;
    assert!(r.completed.is_empty());
    assert_eq!(r.per_level[1].valid, 1);
}
