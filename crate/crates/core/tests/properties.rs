mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use taiko_core::align::{left_align, AlignmentContext};
use taiko_core::horizontal::{OrientedSkeleton, Side};
use taiko_core::midlink::{side_graph, Graph, MiddleLink, TripleGirth};
use taiko_core::oracle::{all_two_cells, iso_key, naive_girth, oracle_validate, CanonMethod, Conditions, Guard};
use taiko_core::search::{validate_with, Checker, ChildError, GirthFloor, SearchConfig};
use taiko_core::midlink::GirthPair;
use taiko_core::Cell;

use common::*;

fn all_floors() -> Vec<GirthFloor> {
    GirthPair::ALL.into_iter().map(GirthFloor::from).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn relabeling_preserves_verdict_and_girth(seed: u64, m in 2u16..7, n in 2u16..7, k in 1usize..7) {
        let mut r = rng(seed);
        let p = random_subpartition(&mut r, m, n, k);
        let q = relabeled(&p, &random_perm(&mut r, m), &random_perm(&mut r, n));
        let (vp, vq) = (validate_with(&p, &all_floors(), false, true), validate_with(&q, &all_floors(), false, true));
        prop_assert_eq!(vp.verdict.condition(), vq.verdict.condition());
        prop_assert_eq!(vp.girth, vq.girth);
    }

    #[test]
    fn canonical_keys_ignore_relabeling(seed: u64, m in 2u16..6, n in 2u16..6, k in 1usize..5) {
        let mut r = rng(seed);
        let p = random_subpartition(&mut r, m, n, k);
        let q = relabeled(&p, &random_perm(&mut r, m), &random_perm(&mut r, n));
        for method in [CanonMethod::CellOrder, CanonMethod::RelabelSweep] {
            prop_assert_eq!(iso_key(&p, method).unwrap(), iso_key(&q, method).unwrap());
        }
    }

    #[test]
    fn class_flips_preserve_fold_pattern_and_girth(seed: u64, m in 2u16..7, n in 2u16..7, k in 1usize..8) {
        let mut r = rng(seed);
        let p = random_subpartition(&mut r, m, n, k);
        let sk = OrientedSkeleton::from_cells(p.cells());
        prop_assume!(sk.is_orientable());
        let before = (
            sk.find_fold().unwrap().is_some(),
            sk.find_repeated_pattern().unwrap().is_some(),
            TripleGirth::measure(&sk, p.grid()).unwrap(),
        );
        let mut flipped = sk.clone();
        for class in sk.color_classes() {
            if coin(&mut r) {
                flipped.flip_class(class[0]);
            }
        }
        let after = (
            flipped.find_fold().unwrap().is_some(),
            flipped.find_repeated_pattern().unwrap().is_some(),
            TripleGirth::measure(&flipped, p.grid()).unwrap(),
        );
        prop_assert_eq!(before, after);
    }

    #[test]
    fn failures_persist_under_extension(seed: u64, m in 3u16..7, n in 3u16..7, k in 1usize..7) {
        let mut r = rng(seed);
        let p = random_subpartition(&mut r, m, n, k);
        let v = validate_with(&p, &all_floors(), false, true);
        prop_assume!(!v.verdict.is_valid());
        for c in all_two_cells(p.grid()) {
            if let Ok(bigger) = p.extend(c) {
                prop_assert!(!validate_with(&bigger, &all_floors(), false, true).verdict.is_valid(), "{} then {}", p, c);
            }
        }
    }

    #[test]
    fn incremental_checks_match_scratch(seed: u64, m in 3u16..8, n in 3u16..8, cap: bool, t3: bool) {
        let mut r = rng(seed);
        let cfg = SearchConfig { smallest_edge: false, theorem1_cap: cap, check_t3: t3, ..SearchConfig::census(m, n, 8) };
        let checker = Checker::new(&cfg).unwrap();
        let mut node = checker.root(&cfg);
        let rule = cfg.candidate_rule();
        loop {
            let cands = checker.candidates(&node, rule);
            let mut next = None;
            for &c in &cands {
                let scratch = validate_with(&node.p.extend(c).unwrap(), &cfg.girth_floors, cap, t3);
                match checker.child(&node, c) {
                    Ok(child) => {
                        prop_assert!(scratch.verdict.is_valid(), "{} accepted", child.p);
                        if next.is_none() || r.gen_bool(0.3) {
                            next = Some(child);
                        }
                    }
                    Err(ChildError::Rejected(rej)) => {
                        prop_assert_eq!(scratch.verdict.condition(), Some(rej.condition), "{}", rej.p);
                    }
                    Err(ChildError::Structure(e)) => prop_assert!(false, "{}", e),
                }
            }
            match next {
                Some(child) => node = child,
                None => break,
            }
        }
    }

    #[test]
    fn graph_girth_matches_edge_removal(seed: u64, vertices in 1usize..12, density in 0.0f64..0.6) {
        let mut r = rng(seed);
        let mut g = Graph::new(vertices);
        let mut edges = BTreeSet::new();
        for x in 0..vertices {
            for y in x + 1..vertices {
                if r.gen_bool(density) {
                    g.add_edge(x, y);
                    edges.insert((x, y));
                }
            }
        }
        prop_assert_eq!(g.girth().finite(), naive_girth(&edges));
    }

    #[test]
    fn left_alignment_is_idempotent_and_isomorphic(seed: u64, k in 0usize..4) {
        let mut r = rng(seed);
        let p = random_aligned(&mut r, 9, 9, k);
        let ctx = AlignmentContext::of(&p);
        let cells: Vec<Cell> = all_two_cells(p.grid()).into_iter().filter(|c| p.extend(*c).is_ok()).collect();
        prop_assume!(!cells.is_empty());
        let c = cells[r.gen_range(0..cells.len())];
        let aligned = left_align(ctx, c).unwrap();
        prop_assert_eq!(left_align(ctx, aligned.cell).unwrap(), aligned);
        let a = p.extend(c).unwrap();
        let b = p.extend(aligned.cell).unwrap();
        prop_assert_eq!(iso_key(&a, CanonMethod::CellOrder).unwrap(), iso_key(&b, CanonMethod::CellOrder).unwrap());
    }

    #[test]
    fn brute_force_agrees_with_skeleton(seed: u64, m in 2u16..7, n in 2u16..7, k in 1usize..7) {
        let mut r = rng(seed);
        let p = random_subpartition(&mut r, m, n, k);
        let sk = OrientedSkeleton::from_cells(p.cells());
        let v = oracle_validate(&p, &Conditions::none(), Guard::EXTENDED).unwrap();
        prop_assert_eq!(v.orientable, sk.is_orientable());
        prop_assume!(v.orientable);
        prop_assert_eq!(v.colors, sk.color_count());
        prop_assert_eq!(v.fold, sk.find_fold().unwrap().is_some());
        prop_assert_eq!(v.repeated_pattern, sk.find_repeated_pattern().unwrap().is_some());
        let t = TripleGirth::measure(&sk, p.grid()).unwrap();
        prop_assert_eq!(v.girth_ab, t.girth_ab.finite());
        prop_assert_eq!(v.half_girth_l1, t.half_girth_l1.finite());
        let link = MiddleLink::build(&sk, p.grid()).unwrap();
        prop_assert_eq!(v.l1_edges, link.graph().edge_count());
        let ab = side_graph(&sk, p.grid(), Side::A).girth().min(side_graph(&sk, p.grid(), Side::B).girth());
        prop_assert_eq!(ab, t.girth_ab);
    }
}
