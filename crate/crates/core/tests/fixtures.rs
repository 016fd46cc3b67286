use taiko_core::fixtures::{self, FixtureFile};
use taiko_core::horizontal::OrientedSkeleton;
use taiko_core::midlink::{Girth, MiddleLink, TripleGirth};
use taiko_core::search::{validate_with, Condition};

#[test]
fn fixture_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in fixtures::NAMES {
        let p = fixtures::subpartition(name).unwrap();
        let path = dir.path().join(format!("{name}.json"));
        FixtureFile::from_subpartition(&p).write(&path).unwrap();
        let back = FixtureFile::read(&path).unwrap().to_subpartition().unwrap();
        assert_eq!(back.cells(), p.cells(), "{name}");
    }
}

#[test]
fn schema_matches_hand_written_json() {
    let text = r#"{"m":2,"n":2,"parity":"even","cells":[[[1,1],[2,2]],[[1,2],[2,1]]]}"#;
    let f: FixtureFile = serde_json::from_str(text).unwrap();
    let p = f.to_subpartition().unwrap();
    assert!(p.is_full_partition());
    assert_eq!(serde_json::to_string(&FixtureFile::from_subpartition(&p)).unwrap(), text);
    assert_eq!(validate_with(&p, &[], false, true).verdict.condition(), Some(Condition::T1));
}

#[test]
fn full_4x4_example() {
    let p = fixtures::full_4x4();
    assert!(p.is_full_partition());
    let sk = OrientedSkeleton::from_cells(p.cells());
    assert!(sk.is_orientable());
    assert_eq!(sk.color_count(), 4);
    let t = TripleGirth::measure(&sk, p.grid()).unwrap();
    assert_eq!(t.girth_ab, Girth::Finite(3));
    let link = MiddleLink::build(&sk, p.grid()).unwrap();
    assert_eq!((link.graph().vertex_count(), link.graph().edge_count()), (16, 24));
    assert_eq!(t.half_girth_l1, link.half_girth());
}

#[test]
fn level_three_fixtures_are_valid() {
    for name in fixtures::VALID_LEVEL3 {
        let p = fixtures::subpartition(name).unwrap();
        let floors: Vec<_> = taiko_core::midlink::GirthPair::ALL.into_iter().map(Into::into).collect();
        assert!(validate_with(&p, &floors, true, false).verdict.is_valid(), "{name}");
    }
}
