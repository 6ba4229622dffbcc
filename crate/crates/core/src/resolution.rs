//! Maximal-sequence trees and the minimal (co)resolutions they encode.
//!
//! A tree node at level `k` stands for one indecomposable summand of the
//! `k`-th term. On the projective side its generator maps to its parent's
//! generator along the connecting path (parent point to node point).
//! Injective-side trees are built on the opposite presentation and stored
//! with paths in the original orientation (node point to parent point).

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modules::{inj_rep, interval_module, Interval};
use crate::oracle::{ChainResolution, FreeModule};
use crate::presentation::{Path, StringPresentation, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Projective,
    Injective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeRole {
    /// Generator of the module being resolved.
    Root,
    /// Branch point on the other maximal path through a root.
    D,
    /// The point `c` itself, mapping to both roots.
    C,
    Uniserial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub parent: usize,
    pub sign: i64,
    pub path: Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub level: usize,
    pub point: Vertex,
    /// `None` only for the c-node, whose image is not uniserial.
    pub interval: Option<Interval>,
    pub role: NodeRole,
    /// One link, except for the c-node which has two.
    pub parents: Vec<Link>,
    /// 0-child first.
    pub children: Vec<usize>,
}

impl TreeNode {
    pub fn parent(&self) -> Option<usize> {
        self.parents.first().map(|l| l.parent)
    }

    pub fn link(&self) -> Option<&Path> {
        self.parents.first().map(|l| &l.path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTree {
    pub side: Side,
    pub nodes: Vec<TreeNode>,
}

impl ResolutionTree {
    fn new(side: Side) -> Self {
        ResolutionTree {
            side,
            nodes: Vec::new(),
        }
    }

    fn push(&mut self, node: TreeNode) -> usize {
        let id = self.nodes.len();
        for l in &node.parents {
            self.nodes[l.parent].children.push(id);
        }
        self.nodes.push(node);
        id
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0)
    }

    /// Node ids per level, in creation (breadth-first) order.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if out.len() <= n.level {
                out.resize(n.level + 1, Vec::new());
            }
            out[n.level].push(i);
        }
        out
    }

    pub fn level(&self, k: usize) -> Vec<usize> {
        self.levels().get(k).cloned().unwrap_or_default()
    }

    /// Node points per level.
    pub fn terms(&self) -> Vec<Vec<Vertex>> {
        self.levels()
            .iter()
            .map(|l| l.iter().map(|i| self.nodes[*i].point).collect())
            .collect()
    }

    pub fn roots(&self) -> Vec<usize> {
        self.level(0)
    }

    /// Reverse every path, flipping the side. Used to carry trees built on
    /// the opposite presentation back to the original one.
    fn mirrored(mut self) -> Self {
        self.side = match self.side {
            Side::Projective => Side::Injective,
            Side::Injective => Side::Projective,
        };
        for n in &mut self.nodes {
            if let Some(iv) = &mut n.interval {
                iv.path = iv.path.reversed();
            }
            for l in &mut n.parents {
                l.path = l.path.reversed();
            }
        }
        self
    }

    /// Connecting paths in the orientation of the presentation the tree was
    /// built on (parent point to node point).
    fn native_links(&self) -> Vec<Vec<Link>> {
        self.nodes
            .iter()
            .map(|n| {
                n.parents
                    .iter()
                    .map(|l| Link {
                        parent: l.parent,
                        sign: l.sign,
                        path: match self.side {
                            Side::Projective => l.path.clone(),
                            Side::Injective => l.path.reversed(),
                        },
                    })
                    .collect()
            })
            .collect()
    }
}

/// Children of a node with interval `[x,y]` (over `q`): the continuation of
/// the maximal path through `[x,y]` first, then the other maximal path.
/// Each entry is `(child interval, connecting path)`.
fn interval_children(q: &StringPresentation, iv: &Interval) -> Vec<(Interval, Path)> {
    let x = iv.start();
    let maxes = q.maximal_nonzero_paths_from(x);
    let mut out = Vec::new();
    let split = |m: &Path, at: usize| -> (Interval, Path) {
        let n = m.len();
        (
            Interval {
                path: m.subpath(q, at, n),
            },
            m.subpath(q, 0, at),
        )
    };
    if iv.path.is_stationary() {
        for m in maxes.iter().filter(|m| !m.is_stationary()) {
            out.push(split(m, 1));
        }
        return out;
    }
    let containing = maxes
        .iter()
        .find(|m| m.arrows.starts_with(&iv.path.arrows))
        .expect("a nonzero path lies on a maximal path");
    if containing.len() > iv.len() {
        out.push(split(containing, iv.len() + 1));
    }
    for m in maxes
        .iter()
        .filter(|m| *m != containing && !m.is_stationary())
    {
        out.push(split(m, 1));
    }
    out
}

/// Breadth-first completion of all nodes in `queue` by [`interval_children`].
fn grow(q: &StringPresentation, tree: &mut ResolutionTree, mut queue: VecDeque<usize>) {
    while let Some(id) = queue.pop_front() {
        if tree.nodes[id].interval.is_some() {
            expand_once(q, tree, id, &mut queue);
        }
    }
}

fn check_interval(p: &StringPresentation, iv: &Interval) -> Result<()> {
    if p.is_zero(&iv.path) {
        Err(Error::ZeroPath(iv.path.display(p).to_string()))
    } else {
        Ok(())
    }
}

fn right_tree_on(q: &StringPresentation, iv: &Interval) -> ResolutionTree {
    let mut tree = ResolutionTree::new(Side::Projective);
    let root = tree.push(TreeNode {
        level: 0,
        point: iv.start(),
        interval: Some(iv.clone()),
        role: NodeRole::Root,
        parents: Vec::new(),
        children: Vec::new(),
    });
    grow(q, &mut tree, VecDeque::from([root]));
    tree
}

/// The right maximal sequence of `[x0,y0]`, indexing the minimal projective
/// resolution of `M[x0,y0]`.
pub fn right_max_tree(p: &StringPresentation, iv: &Interval) -> Result<ResolutionTree> {
    check_interval(p, iv)?;
    Ok(right_tree_on(p, iv))
}

/// The left maximal sequence of `[r0,s0]`, indexing the minimal injective
/// coresolution of `M[r0,s0]`; node points are the `s`-ends.
pub fn left_max_tree(p: &StringPresentation, iv: &Interval) -> Result<ResolutionTree> {
    check_interval(p, iv)?;
    let op = p.opposite();
    let rev = Interval {
        path: iv.path.reversed(),
    };
    Ok(right_tree_on(&op, &rev).mirrored())
}

/// What a [`Resolution`] resolves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Uniserial(Interval),
    Injective(Vertex),
    Projective(Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub target: Target,
    pub tree: ResolutionTree,
}

impl Resolution {
    /// Summand points per degree.
    pub fn terms(&self) -> Vec<Vec<Vertex>> {
        self.tree.terms()
    }

    pub fn length(&self) -> usize {
        self.tree.depth()
    }

    pub fn side(&self) -> Side {
        self.tree.side
    }

    pub fn target_label(&self, p: &StringPresentation) -> String {
        match &self.target {
            Target::Uniserial(iv) => format!("M{}", iv.label(p)),
            Target::Injective(c) => format!("I({})", p.vertex_name(*c)),
            Target::Projective(z) => format!("P({})", p.vertex_name(*z)),
        }
    }

    /// `0 → P(..) → … → M → 0`, or the injective analogue.
    pub fn sequence(&self, p: &StringPresentation) -> String {
        let letter = match self.side() {
            Side::Projective => "P",
            Side::Injective => "I",
        };
        let terms: Vec<String> = self
            .terms()
            .iter()
            .map(|t| {
                t.iter()
                    .map(|v| format!("{letter}({})", p.vertex_name(*v)))
                    .collect::<Vec<_>>()
                    .join(" ⊕ ")
            })
            .collect();
        let target = self.target_label(p);
        match self.side() {
            Side::Projective => {
                let mut parts = vec!["0".to_string()];
                parts.extend(terms.into_iter().rev());
                parts.push(target);
                parts.push("0".into());
                parts.join(" → ")
            }
            Side::Injective => {
                let mut parts = vec!["0".to_string(), target];
                parts.extend(terms);
                parts.push("0".into());
                parts.join(" → ")
            }
        }
    }

    /// Indented rendering of the tree, children marked by their index.
    pub fn ascii_tree(&self, p: &StringPresentation) -> String {
        let mut out = String::new();
        let label = |n: &TreeNode| -> String {
            let iv = n
                .interval
                .as_ref()
                .map(|iv| iv.label(p))
                .unwrap_or_else(|| format!("{{{}}}", p.vertex_name(n.point)));
            match n.role {
                NodeRole::Root => format!("{iv} (root)"),
                NodeRole::D => format!("{iv} (d)"),
                NodeRole::C => format!("{iv} (c)"),
                NodeRole::Uniserial => iv,
            }
        };
        fn walk(
            t: &ResolutionTree,
            id: usize,
            prefix: &str,
            out: &mut String,
            label: &dyn Fn(&TreeNode) -> String,
            p: &StringPresentation,
        ) {
            let kids = &t.nodes[id].children;
            for (k, child) in kids.iter().enumerate() {
                let last = k + 1 == kids.len();
                let node = &t.nodes[*child];
                let shared = node.parents.len() > 1 && node.parents[0].parent != id;
                let _ = write!(
                    out,
                    "{prefix}{}{k}─ {}",
                    if last { "└─" } else { "├─" },
                    label(node)
                );
                if shared {
                    out.push_str(" (see above)\n");
                    continue;
                }
                if node.parents.len() > 1 {
                    let others: Vec<&str> = node.parents[1..]
                        .iter()
                        .map(|l| p.vertex_name(t.nodes[l.parent].point))
                        .collect();
                    let _ = write!(out, " (also under {})", others.join(", "));
                }
                out.push('\n');
                let next = format!("{prefix}{}", if last { "     " } else { "│    " });
                walk(t, *child, &next, out, label, p);
            }
        }
        for r in self.tree.roots() {
            let _ = writeln!(out, "{}", label(&self.tree.nodes[r]));
            walk(&self.tree, r, "", &mut out, &label, p);
        }
        out
    }

    pub fn to_json(&self, p: &StringPresentation) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .tree
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                serde_json::json!({
                    "id": i,
                    "level": n.level,
                    "point": p.vertex_name(n.point),
                    "interval": n.interval.as_ref().map(|iv| [p.vertex_name(iv.start()), p.vertex_name(iv.end())]),
                    "role": n.role,
                    "parents": n.parents.iter().map(|l| serde_json::json!({
                        "node": l.parent,
                        "sign": l.sign,
                        "path": l.path.arrows.iter().map(|a| p.arrow_name(*a)).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                    "children": n.children,
                })
            })
            .collect();
        let terms: Vec<Vec<&str>> = self
            .terms()
            .iter()
            .map(|t| t.iter().map(|v| p.vertex_name(*v)).collect())
            .collect();
        serde_json::json!({
            "side": self.side(),
            "target": self.target_label(p),
            "terms": terms,
            "sequence": self.sequence(p),
            "nodes": nodes,
        })
    }

    /// Explicit chain complex with generator images, for exactness and
    /// minimality checks. Injective-side resolutions are returned as the
    /// dual projective resolution over the opposite presentation.
    pub fn to_chain(&self, p: &StringPresentation) -> (StringPresentation, ChainResolution) {
        let q = match self.side() {
            Side::Projective => p.clone(),
            Side::Injective => p.opposite(),
        };
        let links = self.tree.native_links();
        let levels = self.tree.levels();
        let terms: Vec<FreeModule> = levels
            .iter()
            .map(|l| FreeModule::new(&q, l.iter().map(|i| self.tree.nodes[*i].point).collect()))
            .collect();
        // index of each node inside its level
        let mut slot = vec![0usize; self.tree.nodes.len()];
        for l in &levels {
            for (k, i) in l.iter().enumerate() {
                slot[*i] = k;
            }
        }
        let (module, augmentation) = match (&self.target, self.side()) {
            (Target::Uniserial(iv), side) => {
                let iv = match side {
                    Side::Projective => iv.clone(),
                    Side::Injective => Interval {
                        path: iv.path.reversed(),
                    },
                };
                let m = interval_module(&q, &iv).expect("nonzero interval");
                (m, vec![vec![1]])
            }
            (Target::Injective(c), _) | (Target::Projective(c), _) => {
                let m = inj_rep(&q, *c);
                let to_c = q.nonzero_paths_to(*c);
                let aug = levels[0]
                    .iter()
                    .map(|r| {
                        let node = &self.tree.nodes[*r];
                        let iv = node.interval.as_ref().expect("roots carry intervals");
                        let native = match self.side() {
                            Side::Projective => iv.path.clone(),
                            Side::Injective => iv.path.reversed(),
                        };
                        let at: Vec<&Path> =
                            to_c.iter().filter(|x| x.source == node.point).collect();
                        let mut v = vec![0u32; at.len()];
                        let pos = at
                            .iter()
                            .position(|x| **x == native)
                            .expect("root path ends at c");
                        v[pos] = 1;
                        v
                    })
                    .collect();
                (m, aug)
            }
        };
        let differentials = (1..levels.len())
            .map(|k| {
                levels[k]
                    .iter()
                    .map(|i| {
                        let node = &self.tree.nodes[*i];
                        let terms_of: Vec<(usize, &Path, i64)> = links[*i]
                            .iter()
                            .map(|l| (slot[l.parent], &l.path, l.sign))
                            .collect();
                        terms[k - 1].element(node.point, &terms_of)
                    })
                    .collect()
            })
            .collect();
        (
            q,
            ChainResolution {
                module,
                terms,
                augmentation,
                differentials,
            },
        )
    }

    /// Oracle check: exact, `d∘d = 0`, minimal.
    pub fn verify(&self, p: &StringPresentation) -> std::result::Result<(), String> {
        let (q, chain) = self.to_chain(p);
        chain.check(&q)
    }
}

/// Minimal projective resolution of `M[x0,y0]`.
pub fn resolve_uniserial(p: &StringPresentation, iv: &Interval) -> Result<Resolution> {
    Ok(Resolution {
        target: Target::Uniserial(iv.clone()),
        tree: right_max_tree(p, iv)?,
    })
}

/// Minimal injective coresolution of `M[r0,s0]`.
pub fn coresolve_uniserial(p: &StringPresentation, iv: &Interval) -> Result<Resolution> {
    Ok(Resolution {
        target: Target::Uniserial(iv.clone()),
        tree: left_max_tree(p, iv)?,
    })
}

/// Tree for the projective resolution of `I(c)` over `q`.
pub(crate) fn injective_tree_on(q: &StringPresentation, c: Vertex) -> ResolutionTree {
    let ends = q.maximal_nonzero_paths_to(c);
    if ends.len() < 2 {
        let iv = Interval {
            path: ends
                .into_iter()
                .next()
                .unwrap_or_else(|| Path::stationary(c)),
        };
        return right_tree_on(q, &iv);
    }
    let (p0, p1) = (ends[0].clone(), ends[1].clone());
    let mut tree = ResolutionTree::new(Side::Projective);
    let mut roots = Vec::new();
    for pi in [&p0, &p1] {
        roots.push(tree.push(TreeNode {
            level: 0,
            point: pi.source,
            interval: Some(Interval { path: pi.clone() }),
            role: NodeRole::Root,
            parents: Vec::new(),
            children: Vec::new(),
        }));
    }
    // d-nodes: the other maximal path through each root
    let mut d_nodes = [None, None];
    for (k, pi) in [&p0, &p1].into_iter().enumerate() {
        let other = q
            .maximal_nonzero_paths_from(pi.source)
            .into_iter()
            .find(|m| !m.is_stationary() && !m.arrows.starts_with(&pi.arrows[..1]));
        d_nodes[k] = other.map(|m| {
            let n = m.len();
            (
                Interval {
                    path: m.subpath(q, 1, n),
                },
                m.subpath(q, 0, 1),
            )
        });
    }
    let d0 = d_nodes[0].clone().map(|(iv, link)| {
        tree.push(TreeNode {
            level: 1,
            point: iv.start(),
            interval: Some(iv),
            role: NodeRole::D,
            parents: vec![Link {
                parent: roots[0],
                sign: 1,
                path: link,
            }],
            children: Vec::new(),
        })
    });
    let c_node = tree.push(TreeNode {
        level: 1,
        point: c,
        interval: None,
        role: NodeRole::C,
        parents: vec![
            Link {
                parent: roots[0],
                sign: 1,
                path: p0.clone(),
            },
            Link {
                parent: roots[1],
                sign: -1,
                path: p1.clone(),
            },
        ],
        children: Vec::new(),
    });
    let d1 = d_nodes[1].clone().map(|(iv, link)| {
        tree.push(TreeNode {
            level: 1,
            point: iv.start(),
            interval: Some(iv),
            role: NodeRole::D,
            parents: vec![Link {
                parent: roots[1],
                sign: 1,
                path: link,
            }],
            children: Vec::new(),
        })
    });
    // c-node children: on each branch from c, the first vertex where both
    // p0·q and p1·q vanish
    let survives = |path: &Path| -> bool {
        [&p0, &p1]
            .iter()
            .any(|pi| q.compose(pi, path).expect("paths meet at c").is_some())
    };
    let mut branches = q.maximal_nonzero_paths_from(c);
    branches.retain(|m| !m.is_stationary());
    let continued_by = |m: &Path, pi: &Path| {
        q.compose(pi, &m.subpath(q, 0, 1))
            .expect("meet at c")
            .is_some()
    };
    branches.sort_by_key(|m| {
        if continued_by(m, &p0) {
            0
        } else if continued_by(m, &p1) {
            1
        } else {
            2
        }
    });
    let mut c_children = Vec::new();
    for m in &branches {
        let mut keep = 0;
        while keep < m.len() && survives(&m.subpath(q, 0, keep + 1)) {
            keep += 1;
        }
        if keep < m.len() {
            c_children.push((
                Interval {
                    path: m.subpath(q, keep + 1, m.len()),
                },
                m.subpath(q, 0, keep + 1),
            ));
        }
    }
    // level 2 in order: children of d0, of the c-node, of d1
    let mut ordered: VecDeque<usize> = VecDeque::new();
    if let Some(d0) = d0 {
        expand_once(q, &mut tree, d0, &mut ordered);
    }
    for (iv, link) in c_children {
        ordered.push_back(tree.push(TreeNode {
            level: 2,
            point: iv.start(),
            interval: Some(iv),
            role: NodeRole::Uniserial,
            parents: vec![Link {
                parent: c_node,
                sign: 1,
                path: link,
            }],
            children: Vec::new(),
        }));
    }
    if let Some(d1) = d1 {
        expand_once(q, &mut tree, d1, &mut ordered);
    }
    grow(q, &mut tree, ordered);
    tree
}

fn expand_once(
    q: &StringPresentation,
    tree: &mut ResolutionTree,
    id: usize,
    out: &mut VecDeque<usize>,
) {
    let iv = tree.nodes[id].interval.clone().expect("interval node");
    let level = tree.nodes[id].level;
    for (child, link) in interval_children(q, &iv) {
        out.push_back(tree.push(TreeNode {
            level: level + 1,
            point: child.start(),
            interval: Some(child),
            role: NodeRole::Uniserial,
            parents: vec![Link {
                parent: id,
                sign: 1,
                path: link,
            }],
            children: Vec::new(),
        }));
    }
}

/// Minimal projective resolution of the indecomposable injective `I(c)`.
pub fn resolve_injective(p: &StringPresentation, c: Vertex) -> Resolution {
    Resolution {
        target: Target::Injective(c),
        tree: injective_tree_on(p, c),
    }
}

/// Minimal injective coresolution of the indecomposable projective `P(z)`.
pub fn coresolve_projective(p: &StringPresentation, z: Vertex) -> Resolution {
    let op = p.opposite();
    Resolution {
        target: Target::Projective(z),
        tree: injective_tree_on(&op, z).mirrored(),
    }
}

/// Maximum projective dimension of a simple module.
pub fn global_dimension(p: &StringPresentation) -> usize {
    p.vertices()
        .map(|v| right_tree_on(p, &Interval::stationary(v)).depth())
        .max()
        .unwrap_or(0)
}
