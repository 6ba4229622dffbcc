//! Fixture outputs frozen in `fixtures/expected`.

use std::collections::BTreeMap;

use relquiv_core::ext::arrow_multiset;
use relquiv_core::fixtures;
use relquiv_core::oracle::Oracle;
use relquiv_core::resolution::global_dimension;
use relquiv_core::{new_arrows, StringPresentation, Vertex};

const ORACLE: &str = include_str!("../../../fixtures/expected/oracle.json");

fn labels(p: &StringPresentation, ms: &[(Vertex, Vertex, usize)]) -> Vec<String> {
    ms.iter()
        .map(|(z, c, i)| format!("{}->{}@{i}", p.vertex_name(*z), p.vertex_name(*c)))
        .collect()
}

#[test]
fn oracle_verdicts_are_stable() {
    let frozen: BTreeMap<String, Vec<String>> = serde_json::from_str(ORACLE).unwrap();
    for (name, p) in fixtures::all() {
        assert_eq!(
            labels(&p, &Oracle::new(&p).new_arrow_multiset()),
            frozen[name],
            "{name}"
        );
    }
}

#[test]
fn engine_reproduces_oracle_verdicts() {
    let frozen: BTreeMap<String, Vec<String>> = serde_json::from_str(ORACLE).unwrap();
    for (name, p) in fixtures::all() {
        assert_eq!(
            labels(&p, &arrow_multiset(&new_arrows(&p))),
            frozen[name],
            "{name}"
        );
    }
}

#[test]
fn global_dimensions() {
    let got: Vec<(&str, usize)> = fixtures::all()
        .iter()
        .map(|(n, p)| (*n, global_dimension(p)))
        .collect();
    assert_eq!(
        got,
        [
            ("fix-a", 2),
            ("fix-b", 3),
            ("fix-c", 4),
            ("fix-d", 3),
            ("fix-e", 2),
            ("fix-f", 2)
        ]
    );
}
