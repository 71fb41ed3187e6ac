#![allow(dead_code)]

use std::collections::HashSet;

use gcfg::gpgen::{builtin_action, gen_configuration, ActionSpec, GroupSpec};
use gcfg::FunctionalInstance;

/// Regular-action corpus: every Z/n for n = 2..12, then the non-cyclic groups.
pub const CORPUS: [&str; 18] = [
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:5",
    "cyclic:6",
    "cyclic:7",
    "cyclic:8",
    "cyclic:9",
    "cyclic:10",
    "cyclic:11",
    "cyclic:12",
    "cyclic:2*cyclic:2",
    "cyclic:2*cyclic:4",
    "symmetric:3",
    "symmetric:4",
    "dihedral:4",
    "dihedral:5",
    "quaternion8",
];

pub const NON_ABELIAN: [&str; 5] = [
    "symmetric:3",
    "symmetric:4",
    "dihedral:4",
    "dihedral:5",
    "quaternion8",
];

pub fn spec(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

pub fn regular(s: &str) -> FunctionalInstance {
    let action = builtin_action(&spec(s), &ActionSpec::Regular).unwrap();
    gen_configuration(&action, None).unwrap()
}

/// Rank by brute force: the span of `n` vectors has `p^rank` elements.
pub fn span_rank(p: u64, ambient: usize, vectors: &[Vec<u64>]) -> usize {
    let mut span: HashSet<Vec<u64>> = HashSet::new();
    span.insert(vec![0; ambient]);
    for v in vectors {
        let current: Vec<Vec<u64>> = span.iter().cloned().collect();
        for w in current {
            for c in 1..p {
                let sum: Vec<u64> = w
                    .iter()
                    .zip(v)
                    .map(|(x, y)| (x + c * (y % p)) % p)
                    .collect();
                span.insert(sum);
            }
        }
    }
    let mut size = span.len();
    let mut rank = 0;
    while size > 1 {
        assert_eq!(size % p as usize, 0, "span size is a power of p");
        size /= p as usize;
        rank += 1;
    }
    rank
}
