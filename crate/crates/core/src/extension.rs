//! The extended bound quiver: old arrows plus one arrow per basis element
//! of the top of the higher relation bimodule.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{
    arrow_multiset, new_arrow_names, ExtEngine, NewArrow, SurvivedFilters, WitnessRecord,
};
use crate::gentle::{gentle_new_arrows, tensor_words, trivial_words, Overlapping};
use crate::presentation::{PresentationBuilder, StringPresentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMode {
    /// Tensor algebra of the bimodule: quadratic relations only.
    #[default]
    Tensor,
    /// Trivial extension: products of two bimodule elements also vanish.
    Trivial,
}

impl std::str::FromStr for ExtensionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor" => Ok(ExtensionMode::Tensor),
            "trivial" => Ok(ExtensionMode::Trivial),
            other => Err(Error::Document(format!("unknown mode `{other}`"))),
        }
    }
}

/// `gentle` and `monomial` are `None` when no relations are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionFlags {
    pub gentle: Option<bool>,
    pub monomial: Option<bool>,
    pub has_2_cycle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedPresentation {
    pub base: StringPresentation,
    pub mode: ExtensionMode,
    pub new_arrows: Vec<NewArrow>,
    /// Names of `new_arrows` in the extended quiver.
    pub new_arrow_names: Vec<String>,
    /// Relations as arrow-name words; `None` for non-gentle input.
    pub relations: Option<Vec<Vec<String>>>,
    /// The extended quiver with `relations` (or with none when unknown).
    pub presentation: StringPresentation,
    pub flags: ExtensionFlags,
}

fn has_2_cycle(p: &StringPresentation) -> bool {
    p.arrows().iter().any(|a| {
        p.arrows()
            .iter()
            .any(|b| a.source == b.target && a.target == b.source)
    })
}

fn assemble(
    base: &StringPresentation,
    new_arrows: &[NewArrow],
    labels: &[String],
    relations: Option<&[Vec<String>]>,
) -> Result<StringPresentation> {
    let mut b = PresentationBuilder::new().vertices(base.vertex_names().iter().cloned());
    for a in base.arrows() {
        b = b.arrow(
            a.name.clone(),
            base.vertex_name(a.source),
            base.vertex_name(a.target),
        );
    }
    for (a, name) in new_arrows.iter().zip(labels) {
        b = b.arrow(
            name.clone(),
            base.vertex_name(a.source),
            base.vertex_name(a.target),
        );
    }
    for r in relations.unwrap_or_default() {
        b = b.relation(r.clone());
    }
    b.build()
}

fn flags_of(presentation: &StringPresentation, relations_known: bool) -> ExtensionFlags {
    let (gentle, monomial) = if relations_known {
        let r = presentation.validate();
        (
            Some(r.is_gentle && r.admissible.holds),
            Some(r.admissible.holds),
        )
    } else {
        (None, None)
    };
    ExtensionFlags {
        gentle,
        monomial,
        has_2_cycle: has_2_cycle(presentation),
    }
}

/// Extend a string tree by its higher relation bimodule. The empty
/// presentation extends to itself.
pub fn build_extension(
    p: &StringPresentation,
    mode: ExtensionMode,
) -> Result<ExtendedPresentation> {
    let report = p.validate();
    if p.vertex_count() > 0 && !report.is_string_tree() {
        return Err(Error::NotStringTree(
            if report.is_tree {
                "string axioms fail"
            } else {
                "the quiver is not a tree"
            }
            .into(),
        ));
    }
    let mut arrows = ExtEngine::new(p).new_arrows();
    let relations = if report.is_gentle {
        let gentle = gentle_new_arrows(p)?;
        if arrow_multiset(&gentle) != arrow_multiset(&arrows) {
            return Err(Error::Inconsistent(
                "overlapping arrows differ from the Ext engine's arrows".into(),
            ));
        }
        // both lists are sorted by (degree, source, target)
        for (a, g) in arrows.iter_mut().zip(gentle) {
            a.overlapping = g.overlapping;
        }
        Some(())
    } else {
        None
    };
    let labels = new_arrow_names(p, &arrows);
    let relations = relations.map(|()| match mode {
        ExtensionMode::Tensor => tensor_words(p, &arrows, &labels),
        ExtensionMode::Trivial => trivial_words(p, &arrows, &labels),
    });
    let presentation = assemble(p, &arrows, &labels, relations.as_deref())?;
    let flags = flags_of(&presentation, relations.is_some());
    Ok(ExtendedPresentation {
        base: p.clone(),
        mode,
        new_arrows: arrows,
        new_arrow_names: labels,
        relations,
        presentation,
        flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowKind {
    Old,
    New,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowRecord {
    pub name: String,
    pub src: String,
    pub tgt: String,
    pub kind: ArrowKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    /// Arrow names of the overlapping chain, gentle input only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlapping: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub survived_filters: Option<SurvivedFilters>,
}

/// JSON document for an [`ExtendedPresentation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDocument {
    pub mode: ExtensionMode,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowRecord>,
    /// Relations of the input.
    pub base_relations: Vec<Vec<String>>,
    /// `"specified"`, or `"unspecified"` when the input is not gentle.
    pub relations_status: String,
    pub relations: Option<Vec<Vec<String>>>,
    pub flags: ExtensionFlags,
}

fn overlapping_from_names(p: &StringPresentation, names: &[String]) -> Result<Overlapping> {
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let path = p.path_from_names(&refs)?;
    let relations = path
        .arrows
        .windows(2)
        .map(|w| {
            p.relations()
                .iter()
                .position(|r| r.as_slice() == w)
                .ok_or_else(|| {
                    Error::Document(format!(
                        "{} {} is not a relation",
                        p.arrow_name(w[0]),
                        p.arrow_name(w[1])
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let shared = path.arrows[1..path.arrows.len() - 1]
        .iter()
        .map(|a| p.path_of(&[*a]).expect("arrow"))
        .collect();
    Ok(Overlapping {
        relations,
        source: path.source,
        sink: path.target,
        arrows: path.arrows,
        shared,
    })
}

impl ExtendedPresentation {
    pub fn to_document(&self) -> ExtensionDocument {
        let p = &self.base;
        let mut arrows: Vec<ArrowRecord> = p
            .arrows()
            .iter()
            .map(|a| ArrowRecord {
                name: a.name.clone(),
                src: p.vertex_name(a.source).into(),
                tgt: p.vertex_name(a.target).into(),
                kind: ArrowKind::Old,
                degree: None,
                witness: None,
                overlapping: None,
                survived_filters: None,
            })
            .collect();
        for (a, name) in self.new_arrows.iter().zip(&self.new_arrow_names) {
            arrows.push(ArrowRecord {
                name: name.clone(),
                src: p.vertex_name(a.source).into(),
                tgt: p.vertex_name(a.target).into(),
                kind: ArrowKind::New,
                degree: Some(a.degree),
                witness: a.witness.as_ref().map(|w| w.to_record(p)),
                overlapping: a.overlapping.as_ref().map(|o| {
                    o.arrows
                        .iter()
                        .map(|x| p.arrow_name(*x).to_string())
                        .collect()
                }),
                survived_filters: Some(a.survived_filters),
            });
        }
        ExtensionDocument {
            mode: self.mode,
            vertices: p.vertex_names().to_vec(),
            arrows,
            base_relations: p
                .relations()
                .iter()
                .map(|r| r.iter().map(|a| p.arrow_name(*a).to_string()).collect())
                .collect(),
            relations_status: if self.relations.is_some() {
                "specified"
            } else {
                "unspecified"
            }
            .into(),
            relations: self.relations.clone(),
            flags: self.flags,
        }
    }

    pub fn from_document(doc: &ExtensionDocument) -> Result<Self> {
        let mut b = PresentationBuilder::new().vertices(doc.vertices.iter().cloned());
        for a in doc.arrows.iter().filter(|a| a.kind == ArrowKind::Old) {
            b = b.arrow(a.name.clone(), a.src.clone(), a.tgt.clone());
        }
        for r in &doc.base_relations {
            b = b.relation(r.clone());
        }
        let base = b.build()?;
        let mut new_arrows = Vec::new();
        let mut labels = Vec::new();
        for a in doc.arrows.iter().filter(|a| a.kind == ArrowKind::New) {
            let vertex = |n: &str| {
                base.vertex_by_name(n)
                    .ok_or_else(|| Error::UnknownVertex(n.to_string()))
            };
            new_arrows.push(NewArrow {
                source: vertex(&a.src)?,
                target: vertex(&a.tgt)?,
                degree: a.degree.ok_or_else(|| {
                    Error::Document(format!("new arrow `{}` has no degree", a.name))
                })?,
                witness: a.witness.as_ref().map(|w| w.resolve(&base)).transpose()?,
                overlapping: a
                    .overlapping
                    .as_ref()
                    .map(|o| overlapping_from_names(&base, o))
                    .transpose()?,
                survived_filters: a.survived_filters.unwrap_or(SurvivedFilters {
                    left: true,
                    right: true,
                }),
            });
            labels.push(a.name.clone());
        }
        let presentation = assemble(&base, &new_arrows, &labels, doc.relations.as_deref())?;
        Ok(ExtendedPresentation {
            base,
            mode: doc.mode,
            new_arrows,
            new_arrow_names: labels,
            relations: doc.relations.clone(),
            presentation,
            flags: doc.flags,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("plain document")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ExtensionDocument =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        Self::from_document(&doc)
    }

    /// Graphviz rendering; new arrows are dashed.
    pub fn to_dot(&self) -> String {
        let p = &self.base;
        let mut out = String::from("digraph extension {\n  rankdir=LR;\n");
        for v in p.vertex_names() {
            writeln!(out, "  \"{v}\";").unwrap();
        }
        for a in p.arrows() {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                p.vertex_name(a.source),
                p.vertex_name(a.target),
                a.name
            )
            .unwrap();
        }
        for (a, name) in self.new_arrows.iter().zip(&self.new_arrow_names) {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{name}\", style=dashed];",
                p.vertex_name(a.source),
                p.vertex_name(a.target)
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn new_pairs(e: &ExtendedPresentation) -> Vec<(String, String)> {
        let mut v: Vec<_> = e
            .new_arrows
            .iter()
            .map(|a| {
                (
                    e.base.vertex_name(a.source).to_string(),
                    e.base.vertex_name(a.target).to_string(),
                )
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn fix_d_has_two_cycle() {
        let e = build_extension(&fixtures::fix_d(), ExtensionMode::Tensor).unwrap();
        let pairs = new_pairs(&e);
        for want in [("2", "1"), ("4", "1"), ("6", "1")] {
            assert!(pairs.contains(&(want.0.into(), want.1.into())));
        }
        assert!(e.flags.has_2_cycle);
        assert!(e.relations.is_none());
        assert_eq!(e.flags.gentle, None);
    }

    #[test]
    fn fix_e_modes() {
        let t = build_extension(&fixtures::fix_e(), ExtensionMode::Tensor).unwrap();
        assert_eq!(t.flags.gentle, Some(true));
        assert!(t
            .new_arrows
            .iter()
            .all(|a| a.overlapping.is_some() && a.witness.is_some()));
        let r = build_extension(&fixtures::fix_e(), ExtensionMode::Trivial).unwrap();
        assert_eq!(r.flags.gentle, Some(false));
        assert_eq!(r.flags.monomial, Some(true));
        assert!(r.relations.unwrap().iter().any(|w| w.len() == 3));
    }

    #[test]
    fn relation_free_is_unchanged() {
        let p = StringPresentation::parse("vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 3 -> 2\n")
            .unwrap();
        let e = build_extension(&p, ExtensionMode::Trivial).unwrap();
        assert!(e.new_arrows.is_empty());
        assert_eq!(e.presentation, p);
    }

    #[test]
    fn rejects_non_tree() {
        let p =
            StringPresentation::parse("vertices: 1 2\narrow a: 1 -> 2\narrow b: 1 -> 2\n").unwrap();
        assert!(matches!(
            build_extension(&p, ExtensionMode::Tensor),
            Err(Error::NotStringTree(_))
        ));
    }

    #[test]
    fn fix_a_dot() {
        let e = build_extension(&fixtures::fix_a(), ExtensionMode::Tensor).unwrap();
        let dot = e.to_dot();
        let dashed: Vec<_> = dot.lines().filter(|l| l.contains("dashed")).collect();
        assert_eq!(
            dashed,
            vec!["  \"4\" -> \"1\" [label=\"x_4_1_2\", style=dashed];"]
        );
    }

    #[test]
    fn empty_documents() {
        let p = StringPresentation::parse("").unwrap();
        let e = build_extension(&p, ExtensionMode::Tensor).unwrap();
        assert_eq!(e.to_dot(), "digraph extension {\n  rankdir=LR;\n}\n");
        let v: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["arrows"], serde_json::json!([]));
        assert_eq!(ExtendedPresentation::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn json_round_trip_on_fixtures() {
        for (_, p) in fixtures::all() {
            for mode in [ExtensionMode::Tensor, ExtensionMode::Trivial] {
                let e = build_extension(&p, mode).unwrap();
                assert_eq!(ExtendedPresentation::from_json(&e.to_json()).unwrap(), e);
            }
        }
    }
}
