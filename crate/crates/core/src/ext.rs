//! Combinatorial `Ext^i(I(c), P(z))`: witnesses, supports, the two top
//! criteria and the resulting new arrows.
//!
//! Everything is read off resolution trees. The `z`-side (right action)
//! is computed as the `c`-side of the opposite presentation, whose trees
//! are the coresolutions of projectives.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use crate::gentle::Overlapping;
use crate::presentation::{Path, StringPresentation, Vertex};
use crate::resolution::{global_dimension, injective_tree_on, ResolutionTree, Side};

/// How a class of `Ext^i(I(c), P(z))` is represented. Node ids refer to the
/// tree of `resolve_injective(c)` (projective side) or of
/// `coresolve_projective(z)` (injective side).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessKind {
    /// A nonzero path between `z` and a level-`i` node point that avoids
    /// the parent point and dies against every child.
    Path { node: usize, path: Path },
    /// `z` (resp. `c`) is a level-`(i-1)` node with two children; the class
    /// is the 0-child inclusion minus the 1-child inclusion.
    Difference { node: usize, children: [usize; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtWitness {
    pub c: Vertex,
    pub z: Vertex,
    pub degree: usize,
    pub side: Side,
    pub kind: WitnessKind,
}

impl ExtWitness {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            WitnessKind::Path { .. } => "path",
            WitnessKind::Difference { .. } => "difference",
        }
    }

    pub fn describe(&self, p: &StringPresentation) -> String {
        match &self.kind {
            WitnessKind::Path { node, path } => {
                format!("path {} at node {node}", path.display(p))
            }
            WitnessKind::Difference { node, children } => {
                format!(
                    "difference at node {node} of children {} and {}",
                    children[0], children[1]
                )
            }
        }
    }

    pub fn to_record(&self, p: &StringPresentation) -> WitnessRecord {
        let (node, path, stationary_at, children) = match &self.kind {
            WitnessKind::Path { node, path } => (
                *node,
                Some(
                    path.arrows
                        .iter()
                        .map(|a| p.arrow_name(*a).to_string())
                        .collect(),
                ),
                path.is_stationary()
                    .then(|| p.vertex_name(path.source).to_string()),
                None,
            ),
            WitnessKind::Difference { node, children } => (*node, None, None, Some(*children)),
        };
        WitnessRecord {
            c: p.vertex_name(self.c).to_string(),
            z: p.vertex_name(self.z).to_string(),
            degree: self.degree,
            side: self.side,
            kind: self.kind_name().to_string(),
            node,
            path,
            stationary_at,
            children,
        }
    }

    pub fn to_json(&self, p: &StringPresentation) -> serde_json::Value {
        serde_json::to_value(self.to_record(p)).expect("plain record")
    }
}

/// Serialized form of an [`ExtWitness`], by vertex and arrow names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub c: String,
    pub z: String,
    pub degree: usize,
    pub side: Side,
    pub kind: String,
    pub node: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationary_at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub children: Option<[usize; 2]>,
}

impl WitnessRecord {
    pub fn resolve(&self, p: &StringPresentation) -> Result<ExtWitness> {
        let vertex = |name: &str| {
            p.vertex_by_name(name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let kind = match self.kind.as_str() {
            "path" => {
                let names = self.path.clone().unwrap_or_default();
                let path = if names.is_empty() {
                    let at = self.stationary_at.as_deref().ok_or_else(|| {
                        Error::Document("stationary witness without a vertex".into())
                    })?;
                    Path::stationary(vertex(at)?)
                } else {
                    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                    p.path_from_names(&refs)?
                };
                WitnessKind::Path {
                    node: self.node,
                    path,
                }
            }
            "difference" => WitnessKind::Difference {
                node: self.node,
                children: self
                    .children
                    .ok_or_else(|| Error::Document("difference witness without children".into()))?,
            },
            other => return Err(Error::Document(format!("unknown witness kind `{other}`"))),
        };
        Ok(ExtWitness {
            c: vertex(&self.c)?,
            z: vertex(&self.z)?,
            degree: self.degree,
            side: self.side,
            kind,
        })
    }
}

/// One `ζ` (or `Θ`) interval: the vertices it covers and its far endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportInterval {
    pub node: usize,
    pub start: Vertex,
    pub end: Vertex,
    pub includes_start: bool,
    pub vertices: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtSupport {
    /// The fixed index: `c` for `ζ`, `z` for `Θ`.
    pub fixed: Vertex,
    pub degree: usize,
    pub side: Side,
    pub intervals: Vec<SupportInterval>,
}

impl ExtSupport {
    /// Union of all intervals, sorted.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .intervals
            .iter()
            .flat_map(|i| i.vertices.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivedFilters {
    pub left: bool,
    pub right: bool,
}

/// A new arrow `z -> c` of the extended quiver. Arrows from the Ext engine
/// carry a witness; arrows from the gentle fast path carry the overlapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewArrow {
    pub source: Vertex,
    pub target: Vertex,
    pub degree: usize,
    pub witness: Option<ExtWitness>,
    pub overlapping: Option<Overlapping>,
    pub survived_filters: SurvivedFilters,
}

impl NewArrow {
    pub fn key(&self) -> (Vertex, Vertex, usize) {
        (self.source, self.target, self.degree)
    }
}

/// Witness data on one presentation, indices in its own orientation.
#[derive(Debug, Clone)]
enum RawWitness {
    Path { node: usize, path: Path },
    Difference { node: usize, children: [usize; 2] },
}

fn raw_witnesses(
    q: &StringPresentation,
    tree: &ResolutionTree,
    z: Vertex,
    i: usize,
) -> Vec<RawWitness> {
    let mut out = Vec::new();
    if i < 2 {
        return out;
    }
    for (id, n) in tree.nodes.iter().enumerate() {
        if n.level == i {
            let parent = &tree.nodes[n.parent().expect("level >= 2 has a parent")];
            let Some(omega) = q.path_between(z, n.point) else {
                continue;
            };
            if omega.passes_through(q, parent.point) {
                continue;
            }
            let dies = n.children.iter().all(|m| {
                let link = tree.nodes[*m].link().expect("child link");
                q.concat(&omega, link).is_none()
            });
            if dies {
                out.push(RawWitness::Path {
                    node: id,
                    path: omega,
                });
            }
        } else if n.level + 1 == i && n.children.len() == 2 && n.point == z {
            out.push(RawWitness::Difference {
                node: id,
                children: [n.children[0], n.children[1]],
            });
        }
    }
    out
}

/// Left-top test: the class does not come from a neighbour `y` of `z`
/// through the arrow `z -> y`.
fn in_left_top(q: &StringPresentation, tree: &ResolutionTree, w: &RawWitness) -> bool {
    // some child link survives composition with `tail`
    let alive_after = |tail: &Path, node: usize| {
        tree.nodes[node].children.iter().any(|m| {
            let link = tree.nodes[*m].link().expect("child link");
            q.concat(tail, link).is_some()
        })
    };
    match w {
        RawWitness::Path { node, path } => {
            if tree.nodes[*node].children.is_empty() {
                path.is_stationary()
            } else {
                match path.tail(q) {
                    Some(tail) => alive_after(&tail, *node),
                    None => false,
                }
            }
        }
        RawWitness::Difference { children, .. } => children.iter().all(|k| {
            let link = tree.nodes[*k].link().expect("child link");
            let tail = link.tail(q).expect("links have positive length");
            alive_after(&tail, *k)
        }),
    }
}

/// `ζ` intervals on one presentation.
fn raw_support(q: &StringPresentation, tree: &ResolutionTree, i: usize) -> Vec<SupportInterval> {
    let mut out = Vec::new();
    if i < 2 {
        return out;
    }
    for (id, n) in tree.nodes.iter().enumerate().filter(|(_, n)| n.level == i) {
        let pid = n.parent().expect("level >= 2 has a parent");
        let parent = &tree.nodes[pid];
        let link = n.link().expect("link");
        let end = match n.children.first() {
            Some(first) => {
                // the relation through this node that ends at the 0-child
                let mut arrows = link.arrows.clone();
                arrows.extend_from_slice(&tree.nodes[*first].link().expect("link").arrows);
                let full = q.path_of(&arrows).expect("composable");
                let verts = full.vertices(q);
                let mut start = 0;
                // shortest zero suffix
                for s in (0..verts.len() - 1).rev() {
                    let suffix = full.subpath(q, s, verts.len() - 1);
                    if q.is_zero(&suffix) {
                        start = s;
                        break;
                    }
                }
                verts[start]
            }
            None => n.point,
        };
        let includes_start = parent.children.len() == 2;
        let verts = link.vertices(q);
        let stop = verts
            .iter()
            .position(|v| *v == end)
            .unwrap_or(verts.len() - 1);
        let vertices: Vec<Vertex> = verts[..=stop]
            .iter()
            .enumerate()
            .filter(|(k, _)| *k > 0 || includes_start)
            .map(|(_, v)| *v)
            .collect();
        out.push(SupportInterval {
            node: id,
            start: parent.point,
            end,
            includes_start,
            vertices,
        });
    }
    out
}

/// Cached trees for both sides of one presentation.
pub struct ExtEngine<'a> {
    p: &'a StringPresentation,
    op: StringPresentation,
    trees: Vec<ResolutionTree>,
    op_trees: Vec<ResolutionTree>,
    gldim: usize,
}

impl<'a> ExtEngine<'a> {
    pub fn new(p: &'a StringPresentation) -> Self {
        let op = p.opposite();
        let trees = p.vertices().map(|c| injective_tree_on(p, c)).collect();
        let op_trees = op.vertices().map(|z| injective_tree_on(&op, z)).collect();
        ExtEngine {
            p,
            op,
            trees,
            op_trees,
            gldim: global_dimension(p),
        }
    }

    pub fn global_dimension(&self) -> usize {
        self.gldim
    }

    /// Tree of `resolve_injective(c)`.
    pub fn tree(&self, c: Vertex) -> &ResolutionTree {
        &self.trees[c.0]
    }

    fn lift(&self, c: Vertex, z: Vertex, i: usize, side: Side, raw: RawWitness) -> ExtWitness {
        let kind = match raw {
            RawWitness::Path { node, path } => WitnessKind::Path {
                node,
                path: match side {
                    Side::Projective => path,
                    Side::Injective => path.reversed(),
                },
            },
            RawWitness::Difference { node, children } => WitnessKind::Difference { node, children },
        };
        ExtWitness {
            c,
            z,
            degree: i,
            side,
            kind,
        }
    }

    /// All witnesses of `Ext^i(I(c), P(z))` on the resolution of `I(c)`.
    pub fn ext_witnesses(&self, c: Vertex, z: Vertex, i: usize) -> Vec<ExtWitness> {
        raw_witnesses(self.p, &self.trees[c.0], z, i)
            .into_iter()
            .map(|w| self.lift(c, z, i, Side::Projective, w))
            .collect()
    }

    /// The same group read off the coresolution of `P(z)`.
    pub fn ext_cowitnesses(&self, c: Vertex, z: Vertex, i: usize) -> Vec<ExtWitness> {
        raw_witnesses(&self.op, &self.op_trees[z.0], c, i)
            .into_iter()
            .map(|w| self.lift(c, z, i, Side::Injective, w))
            .collect()
    }

    /// `ζ` intervals: the `z` with `Ext^i(I(c), P(z)) ≠ 0`.
    pub fn ext_support(&self, c: Vertex, i: usize) -> ExtSupport {
        ExtSupport {
            fixed: c,
            degree: i,
            side: Side::Projective,
            intervals: raw_support(self.p, &self.trees[c.0], i),
        }
    }

    /// `Θ` intervals: the `c` with `Ext^i(I(c), P(z)) ≠ 0`.
    pub fn ext_cosupport(&self, z: Vertex, i: usize) -> ExtSupport {
        ExtSupport {
            fixed: z,
            degree: i,
            side: Side::Injective,
            intervals: raw_support(&self.op, &self.op_trees[z.0], i),
        }
    }

    /// Witnesses in the top of the left module `Ext^i(I(c), A)`.
    pub fn left_top_basis(&self, c: Vertex, i: usize) -> Vec<(Vertex, ExtWitness)> {
        let tree = &self.trees[c.0];
        let mut out = Vec::new();
        for z in self.p.vertices() {
            for w in raw_witnesses(self.p, tree, z, i) {
                if in_left_top(self.p, tree, &w) {
                    out.push((z, self.lift(c, z, i, Side::Projective, w)));
                }
            }
        }
        out
    }

    /// Witnesses in the top of the right module `Ext^i(DA, P(z))`.
    pub fn right_top_basis(&self, z: Vertex, i: usize) -> Vec<(Vertex, ExtWitness)> {
        let tree = &self.op_trees[z.0];
        let mut out = Vec::new();
        for c in self.op.vertices() {
            for w in raw_witnesses(&self.op, tree, c, i) {
                if in_left_top(&self.op, tree, &w) {
                    out.push((c, self.lift(c, z, i, Side::Injective, w)));
                }
            }
        }
        out
    }

    /// New arrows `z -> c` of every degree. With `restrict`, only `c` that
    /// are sources or targets of relations are scanned.
    pub fn new_arrows_with(&self, restrict: bool) -> Vec<NewArrow> {
        let endpoints = self.p.relation_endpoints();
        let mut out = Vec::new();
        for i in 2..=self.gldim {
            let right: Vec<BTreeMap<Vertex, usize>> = self
                .p
                .vertices()
                .map(|z| {
                    let mut m = BTreeMap::new();
                    for (c, _) in self.right_top_basis(z, i) {
                        *m.entry(c).or_insert(0) += 1;
                    }
                    m
                })
                .collect();
            for c in self.p.vertices() {
                if restrict && !endpoints.contains(&c) {
                    continue;
                }
                let mut by_z: BTreeMap<Vertex, Vec<ExtWitness>> = BTreeMap::new();
                for (z, w) in self.left_top_basis(c, i) {
                    by_z.entry(z).or_default().push(w);
                }
                for (z, ws) in by_z {
                    let r = right[z.0].get(&c).copied().unwrap_or(0);
                    for w in ws.into_iter().take(r) {
                        out.push(NewArrow {
                            source: z,
                            target: c,
                            degree: i,
                            witness: Some(w),
                            overlapping: None,
                            survived_filters: SurvivedFilters {
                                left: true,
                                right: true,
                            },
                        });
                    }
                }
            }
        }
        out.sort_by_key(|a| (a.degree, a.source, a.target));
        out
    }

    pub fn new_arrows(&self) -> Vec<NewArrow> {
        self.new_arrows_with(true)
    }
}

/// New arrows of the higher relation extension of a string tree.
pub fn new_arrows(p: &StringPresentation) -> Vec<NewArrow> {
    ExtEngine::new(p).new_arrows()
}

/// `(z, c, i)` keys, sorted.
pub fn arrow_multiset(arrows: &[NewArrow]) -> Vec<(Vertex, Vertex, usize)> {
    let mut out: Vec<_> = arrows.iter().map(NewArrow::key).collect();
    out.sort();
    out
}

/// Arrow names `x_{z}_{c}_{i}`, with a `_{k}` suffix (from 1) when the same
/// triple occurs more than once.
pub fn new_arrow_names(p: &StringPresentation, arrows: &[NewArrow]) -> Vec<String> {
    let mut count: BTreeMap<(Vertex, Vertex, usize), usize> = BTreeMap::new();
    for a in arrows {
        *count.entry(a.key()).or_insert(0) += 1;
    }
    let mut seen: BTreeMap<(Vertex, Vertex, usize), usize> = BTreeMap::new();
    arrows
        .iter()
        .map(|a| {
            let base = format!(
                "x_{}_{}_{}",
                p.vertex_name(a.source),
                p.vertex_name(a.target),
                a.degree
            );
            if count[&a.key()] > 1 {
                let k = seen.entry(a.key()).or_insert(0);
                *k += 1;
                format!("{base}_{k}")
            } else {
                base
            }
        })
        .collect()
}
