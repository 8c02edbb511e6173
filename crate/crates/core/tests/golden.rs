//! Worked (4, 6, 8, 12, 20) example and the JSON interchange formats.

use sumsys_core::jof::{count_jof, enumerate_jof, DimTuple, Jof};
use sumsys_core::sumsys::{build_sum_system, verify_sum_system, SumSystem, DEFAULT_VERIFY_GUARD};

const GOLDEN: &str = include_str!("data/worked_example.json");

fn golden() -> (Jof, SumSystem) {
    let doc: serde_json::Value = serde_json::from_str(GOLDEN).unwrap();
    let jof: Jof = serde_json::from_value(doc["jof"].clone()).unwrap();
    let sys = SumSystem::from_json(&doc["system"].to_string()).unwrap();
    (jof, sys)
}

#[test]
fn listed_sets_form_a_sum_system() {
    let (_, listed) = golden();
    assert_eq!(listed.dims(), vec![4, 6, 8, 12, 20]);
    let v = verify_sum_system(&listed, DEFAULT_VERIFY_GUARD).unwrap();
    assert!(v.valid);
    assert_eq!(v.num_sums, 46_080);
}

#[test]
fn eleven_pair_chain_builds_frozen_system() {
    let (jof, listed) = golden();
    assert_eq!(jof.len(), 11);
    let built = build_sum_system(&jof).unwrap();
    // Prefix products before each pair: 1 2 4 8 40 160 320 1280 2560 7680 15360.
    let expected = SumSystem::new(vec![
        vec![0, 1, 7680, 7681],
        vec![0, 4, 15360, 15364, 30720, 30724],
        vec![0, 40, 80, 120, 1280, 1320, 1360, 1400],
        vec![0, 320, 640, 960, 2560, 2880, 3200, 3520, 5120, 5440, 5760, 6080],
        vec![
            0, 2, 8, 10, 16, 18, 24, 26, 32, 34, 160, 162, 168, 170, 176, 178, 184, 186, 192, 194,
        ],
    ])
    .unwrap();
    assert_eq!(built, expected);
    assert!(verify_sum_system(&built, DEFAULT_VERIFY_GUARD).unwrap().valid);
    for k in [0, 1, 4] {
        assert_eq!(built.components()[k], listed.components()[k]);
    }
}

#[test]
fn listed_sets_come_from_merged_chain() {
    let (_, listed) = golden();
    let merged = Jof::from_json(
        "[[1,2],[5,2],[2,2],[5,5],[3,4],[5,2],[4,12],[3,2],[1,2],[2,3]]",
    )
    .unwrap();
    assert_eq!(merged.dims().parts(), &[4, 6, 8, 12, 20]);
    assert_eq!(build_sum_system(&merged).unwrap(), listed);
}

#[test]
fn golden_json_round_trips() {
    let (jof, sys) = golden();
    assert_eq!(
        jof.to_json(),
        "[[1,2],[5,2],[2,2],[5,5],[3,4],[5,2],[4,4],[3,2],[4,3],[1,2],[2,3]]"
    );
    assert_eq!(SumSystem::from_json(&sys.to_json()).unwrap(), sys);
    assert!(sys.to_json().starts_with(r#"{"dims":[4,6,8,12,20],"components":[[0,1,7680,7681],"#));
}

#[test]
fn first_chain_in_canonical_order() {
    let a = DimTuple::new(vec![4, 6, 8, 12, 20]).unwrap();
    let first = enumerate_jof(&a).next().unwrap();
    assert_eq!(
        first.to_json(),
        "[[1,2],[2,2],[1,2],[2,3],[3,2],[4,2],[3,2],[4,2],[3,2],[4,3],[5,20]]"
    );
    assert_eq!(count_jof(&a), 86_184_000u64.into());
}
