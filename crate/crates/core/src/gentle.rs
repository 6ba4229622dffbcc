//! Overlappings of quadratic relations in gentle trees.
//!
//! A maximal chain of relations `α1α2, α2α3, …, αtα(t+1)` from `c` to `z`
//! contributes exactly one new arrow `z -> c` in degree `t + 1`, and the
//! relations of both extensions are written down from these chains.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::{new_arrow_names, NewArrow, SurvivedFilters};
use crate::extension::{build_extension, ExtensionMode};
use crate::presentation::{ArrowId, Path, StringPresentation, ValidationReport, Vertex};

/// A maximal chain of relations, each sharing its last arrow with the
/// first arrow of the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlapping {
    /// Indices into `relations()`, in chain order.
    pub relations: Vec<usize>,
    /// `α1 … α(t+1)`.
    pub arrows: Vec<ArrowId>,
    pub source: Vertex,
    pub sink: Vertex,
    /// Subpaths shared by consecutive relations.
    pub shared: Vec<Path>,
}

impl Overlapping {
    /// Number of relations in the chain.
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn first_arrow(&self) -> ArrowId {
        self.arrows[0]
    }

    pub fn last_arrow(&self) -> ArrowId {
        *self.arrows.last().expect("nonempty chain")
    }

    pub fn to_json(&self, p: &StringPresentation) -> serde_json::Value {
        serde_json::json!({
            "source": p.vertex_name(self.source),
            "sink": p.vertex_name(self.sink),
            "length": self.len(),
            "arrows": self.arrows.iter().map(|a| p.arrow_name(*a)).collect::<Vec<_>>(),
        })
    }
}

fn require_gentle_tree(p: &StringPresentation) -> Result<()> {
    let r = p.validate();
    if !r.is_tree && p.vertex_count() > 0 {
        return Err(Error::NotStringTree("the quiver is not a tree".into()));
    }
    if !r.is_gentle {
        return Err(Error::NotGentle(format!(
            "{} axiom violations",
            gentle_violations(&r)
        )));
    }
    Ok(())
}

fn gentle_violations(r: &ValidationReport) -> usize {
    [&r.s1, &r.s2, &r.s3, &r.g1, &r.g2]
        .iter()
        .map(|c| c.violations.len())
        .sum()
}

/// All maximal overlappings, ordered by their first arrow.
pub fn maximal_overlappings(p: &StringPresentation) -> Result<Vec<Overlapping>> {
    require_gentle_tree(p)?;
    let n = p.arrows().len();
    // relation index starting with each arrow, and whether an arrow ends one
    let mut starting: Vec<Option<usize>> = vec![None; n];
    let mut ends = vec![false; n];
    for (i, r) in p.relations().iter().enumerate() {
        starting[r[0].0] = Some(i);
        ends[r[1].0] = true;
    }
    let mut out = Vec::new();
    for a in p.arrow_ids() {
        if ends[a.0] || starting[a.0].is_none() {
            continue;
        }
        let mut relations = Vec::new();
        let mut arrows = vec![a];
        let mut shared = Vec::new();
        let mut cur = a;
        while let Some(i) = starting[cur.0] {
            let next = p.relations()[i][1];
            if !relations.is_empty() {
                shared.push(p.path_of(&[cur]).expect("arrow"));
            }
            relations.push(i);
            arrows.push(next);
            cur = next;
        }
        out.push(Overlapping {
            relations,
            source: p.arrow(a).source,
            sink: p.arrow(cur).target,
            arrows,
            shared,
        });
    }
    Ok(out)
}

/// New arrows read off the maximal overlappings, in the same order as
/// [`crate::ext::new_arrows`].
pub fn gentle_new_arrows(p: &StringPresentation) -> Result<Vec<NewArrow>> {
    let mut out: Vec<NewArrow> = maximal_overlappings(p)?
        .into_iter()
        .map(|o| NewArrow {
            source: o.sink,
            target: o.source,
            degree: o.len() + 1,
            witness: None,
            survived_filters: SurvivedFilters {
                left: true,
                right: true,
            },
            overlapping: Some(o),
        })
        .collect();
    out.sort_by_key(|a| (a.degree, a.source, a.target));
    Ok(out)
}

fn names(p: &StringPresentation, arrows: &[ArrowId]) -> Vec<String> {
    arrows
        .iter()
        .map(|a| p.arrow_name(*a).to_string())
        .collect()
}

fn old_relations(p: &StringPresentation) -> Vec<Vec<String>> {
    p.relations().iter().map(|r| names(p, r)).collect()
}

/// Tensor-algebra generators for the given new arrows, which must carry
/// overlappings; `labels` are their arrow names.
pub(crate) fn tensor_words(
    p: &StringPresentation,
    arrows: &[NewArrow],
    labels: &[String],
) -> Vec<Vec<String>> {
    let mut out = old_relations(p);
    for (a, name) in arrows.iter().zip(labels) {
        let o = a
            .overlapping
            .as_ref()
            .expect("gentle arrows carry overlappings");
        out.push(vec![
            name.clone(),
            p.arrow_name(o.first_arrow()).to_string(),
        ]);
        out.push(vec![p.arrow_name(o.last_arrow()).to_string(), name.clone()]);
    }
    out
}

fn contains_word(hay: &[String], needle: &[String]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Tensor generators plus the minimal words `ζρζ'` with `ζ, ζ'` new arrows
/// and `ρ` a nonzero old path.
pub(crate) fn trivial_words(
    p: &StringPresentation,
    arrows: &[NewArrow],
    labels: &[String],
) -> Vec<Vec<String>> {
    let tensor = tensor_words(p, arrows, labels);
    let mut extra: Vec<Vec<String>> = Vec::new();
    for (first, first_name) in arrows.iter().zip(labels) {
        for (second, second_name) in arrows.iter().zip(labels) {
            for rho in p.nonzero_paths_between(first.target, second.source) {
                let mut word = vec![first_name.clone()];
                word.extend(names(p, &rho.arrows));
                word.push(second_name.clone());
                if tensor.iter().any(|t| contains_word(&word, t)) || extra.contains(&word) {
                    continue;
                }
                extra.push(word);
            }
        }
    }
    let minimal: Vec<Vec<String>> = extra
        .iter()
        .filter(|w| {
            !extra
                .iter()
                .any(|v| v.len() < w.len() && contains_word(w, v))
        })
        .cloned()
        .collect();
    tensor.into_iter().chain(minimal).collect()
}

/// Relations of the tensor algebra of the higher relation bimodule, as
/// arrow-name words. All have length two.
pub fn tensor_relations(p: &StringPresentation) -> Result<Vec<Vec<String>>> {
    let arrows = gentle_new_arrows(p)?;
    let labels = new_arrow_names(p, &arrows);
    Ok(tensor_words(p, &arrows, &labels))
}

/// Relations of the trivial extension by the higher relation bimodule.
pub fn trivial_extension_relations(p: &StringPresentation) -> Result<Vec<Vec<String>>> {
    let arrows = gentle_new_arrows(p)?;
    let labels = new_arrow_names(p, &arrows);
    Ok(trivial_words(p, &arrows, &labels))
}

/// Verdicts on the two extensions of a gentle tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GentleExtensionReport {
    /// The tensor algebra is a finite-dimensional gentle algebra.
    pub tensor_gentle: bool,
    pub tensor_quadratic: bool,
    /// The trivial extension is given by an admissible monomial ideal.
    pub trivial_monomial: bool,
    pub trivial_gentle: bool,
    pub tensor_validation: ValidationReport,
    pub trivial_validation: ValidationReport,
}

/// Build both extensions and validate them.
pub fn check_gentle_extensions(p: &StringPresentation) -> Result<GentleExtensionReport> {
    require_gentle_tree(p)?;
    let tensor = build_extension(p, ExtensionMode::Tensor)?;
    let trivial = build_extension(p, ExtensionMode::Trivial)?;
    let tv = tensor.presentation.validate();
    let rv = trivial.presentation.validate();
    Ok(GentleExtensionReport {
        tensor_gentle: tv.is_gentle && tv.admissible.holds,
        tensor_quadratic: tensor.presentation.relations().iter().all(|r| r.len() == 2),
        trivial_monomial: rv.admissible.holds,
        trivial_gentle: rv.is_gentle && rv.admissible.holds,
        tensor_validation: tv,
        trivial_validation: rv,
    })
}
