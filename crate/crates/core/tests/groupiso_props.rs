mod common;

use common::spec;
use gcfg::gpgen::builtin_group;
use gcfg::group::{validate_table, GroupDefect};
use gcfg::groupiso::{iso_check, iso_check_unpruned};
use gcfg::FiniteGroupTable;

/// Builtin groups of order at most 12, several orders hit twice.
const SMALL: [&str; 20] = [
    "trivial",
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:2*cyclic:2",
    "cyclic:5",
    "cyclic:6",
    "symmetric:3",
    "dihedral:3",
    "cyclic:2*cyclic:3",
    "cyclic:7",
    "cyclic:8",
    "cyclic:2*cyclic:4",
    "cyclic:2*cyclic:2*cyclic:2",
    "dihedral:4",
    "quaternion8",
    "cyclic:9",
    "cyclic:3*cyclic:3",
    "dihedral:6",
    "cyclic:12",
];

fn groups() -> Vec<(&'static str, FiniteGroupTable)> {
    SMALL
        .iter()
        .map(|&s| (s, builtin_group(&spec(s)).unwrap()))
        .collect()
}

#[test]
fn pruning_is_sound_against_unpruned_search() {
    let gs = groups();
    for (s1, g1) in &gs {
        for (s2, g2) in &gs {
            let pruned = iso_check(g1, g2).unwrap();
            let full = iso_check_unpruned(g1, g2).unwrap();
            assert_eq!(pruned.is_some(), full.is_some(), "{s1} vs {s2}");
            if let Some(w) = pruned.as_ref().or(full.as_ref()) {
                assert!(w.verify(g1, g2), "{s1} vs {s2}");
            }
            if g1.order_profile() != g2.order_profile() {
                assert!(full.is_none(), "{s1} vs {s2}");
            }
        }
    }
}

#[test]
fn iso_is_reflexive_and_symmetric() {
    let gs = groups();
    for (s1, g1) in &gs {
        assert!(iso_check(g1, g1).unwrap().is_some(), "{s1}");
        for (s2, g2) in &gs {
            let forward = iso_check(g1, g2).unwrap().is_some();
            assert_eq!(
                forward,
                iso_check(g2, g1).unwrap().is_some(),
                "{s1} vs {s2}"
            );
        }
    }
}

#[test]
fn known_isomorphism_classes() {
    let iso = |a: &str, b: &str| {
        iso_check(
            &builtin_group(&spec(a)).unwrap(),
            &builtin_group(&spec(b)).unwrap(),
        )
        .unwrap()
        .is_some()
    };
    assert!(iso("cyclic:6", "cyclic:2*cyclic:3"));
    assert!(iso("cyclic:12", "cyclic:3*cyclic:4"));
    assert!(iso("dihedral:6", "symmetric:3*cyclic:2"));
    assert!(!iso("cyclic:4", "cyclic:2*cyclic:2"));
    assert!(!iso("dihedral:4", "quaternion8"));
    assert!(!iso("cyclic:9", "cyclic:3*cyclic:3"));
}

#[test]
fn validate_table_examples() {
    for (s, g) in groups() {
        assert!(validate_table(&g.to_data()).is_ok(), "{s}");
    }
    // Swapping two cells of a row of Z/4 keeps the row a permutation.
    let mut data = builtin_group(&spec("cyclic:4")).unwrap().to_data();
    data.table[1][1] = 3;
    data.table[1][2] = 2;
    assert!(matches!(
        validate_table(&data),
        Err(GroupDefect::NotAssociative { .. })
    ));
    let one = builtin_group(&spec("trivial")).unwrap();
    assert!(validate_table(&one.to_data()).is_ok());
}
