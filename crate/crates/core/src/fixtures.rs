//! Named presentations shipped with the crate.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ext::NewArrow;
use crate::presentation::StringPresentation;

pub const FIX_A: &str = include_str!("../../../fixtures/fix-a.bqv");
pub const FIX_B: &str = include_str!("../../../fixtures/fix-b.bqv");
pub const FIX_C: &str = include_str!("../../../fixtures/fix-c.bqv");
pub const FIX_D: &str = include_str!("../../../fixtures/fix-d.bqv");
pub const FIX_E: &str = include_str!("../../../fixtures/fix-e.bqv");
pub const FIX_F: &str = include_str!("../../../fixtures/fix-f.bqv");

/// New arrows `z->c` drawn in the published result figures, keyed by
/// fixture name.
pub const FIGURES: &str = include_str!("../../../fixtures/expected/figures.json");

fn load(src: &str) -> StringPresentation {
    StringPresentation::parse(src).expect("bundled fixture parses")
}

pub fn fix_a() -> StringPresentation {
    load(FIX_A)
}

pub fn fix_b() -> StringPresentation {
    load(FIX_B)
}

pub fn fix_c() -> StringPresentation {
    load(FIX_C)
}

pub fn fix_d() -> StringPresentation {
    load(FIX_D)
}

pub fn fix_e() -> StringPresentation {
    load(FIX_E)
}

pub fn fix_f() -> StringPresentation {
    load(FIX_F)
}

/// All fixtures with their short names.
pub fn all() -> Vec<(&'static str, StringPresentation)> {
    vec![
        ("fix-a", fix_a()),
        ("fix-b", fix_b()),
        ("fix-c", fix_c()),
        ("fix-d", fix_d()),
        ("fix-e", fix_e()),
        ("fix-f", fix_f()),
    ]
}

pub fn by_name(name: &str) -> Option<StringPresentation> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, p)| p)
}

/// Figure arrows for a fixture, as `(z, c)` vertex names.
pub fn figure(name: &str) -> Option<Vec<(String, String)>> {
    let all: BTreeMap<String, Vec<String>> =
        serde_json::from_str(FIGURES).expect("bundled figures parse");
    all.get(name).map(|arrows| {
        arrows
            .iter()
            .map(|a| {
                let (z, c) = a.split_once("->").expect("z->c");
                (z.to_string(), c.to_string())
            })
            .collect()
    })
}

/// Difference between a drawn figure and computed new arrows, ignoring
/// degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FigureDelta {
    pub fixture: String,
    /// In the figure but not computed.
    pub missing: Vec<String>,
    /// Computed but not in the figure.
    pub extra: Vec<String>,
}

impl FigureDelta {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn figure_delta(
    name: &str,
    p: &StringPresentation,
    figure: &[(String, String)],
    computed: &[NewArrow],
) -> FigureDelta {
    let drawn: Vec<String> = figure.iter().map(|(z, c)| format!("{z}->{c}")).collect();
    let mut got: Vec<String> = computed
        .iter()
        .map(|a| format!("{}->{}", p.vertex_name(a.source), p.vertex_name(a.target)))
        .collect();
    got.sort();
    got.dedup();
    FigureDelta {
        fixture: name.to_string(),
        missing: drawn.iter().filter(|a| !got.contains(a)).cloned().collect(),
        extra: got.iter().filter(|a| !drawn.contains(a)).cloned().collect(),
    }
}
