//! Bound quiver presentations `kQ/I` with monomial `I`: the data model, the
//! `.bqv` text format, axiom validation and path arithmetic.
//!
//! Paths compose left to right: `pq` traverses `p` and then `q`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArrowId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: Vertex,
    pub target: Vertex,
}

/// A path in the quiver. The empty arrow list is the stationary path at
/// `source` (and then `source == target`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: Vertex,
    pub target: Vertex,
    pub arrows: Vec<ArrowId>,
}

impl Path {
    pub fn stationary(v: Vertex) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_stationary(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Vertices visited, in order, source and target included.
    pub fn vertices(&self, p: &StringPresentation) -> Vec<Vertex> {
        let mut out = vec![self.source];
        out.extend(self.arrows.iter().map(|a| p.arrow(*a).target));
        out
    }

    pub fn passes_through(&self, p: &StringPresentation, v: Vertex) -> bool {
        self.vertices(p).contains(&v)
    }

    /// Drop the first arrow. `None` on a stationary path.
    pub fn tail(&self, p: &StringPresentation) -> Option<Path> {
        let (first, rest) = self.arrows.split_first()?;
        Some(Path {
            source: p.arrow(*first).target,
            target: self.target,
            arrows: rest.to_vec(),
        })
    }

    /// Subpath between positions `from..=to` of [`Path::vertices`].
    pub fn subpath(&self, p: &StringPresentation, from: usize, to: usize) -> Path {
        let verts = self.vertices(p);
        Path {
            source: verts[from],
            target: verts[to],
            arrows: self.arrows[from..to].to_vec(),
        }
    }

    pub fn reversed(&self) -> Path {
        Path {
            source: self.target,
            target: self.source,
            arrows: self.arrows.iter().rev().copied().collect(),
        }
    }

    pub fn display<'a>(&'a self, p: &'a StringPresentation) -> PathDisplay<'a> {
        PathDisplay {
            path: self,
            pres: p,
        }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    pres: &'a StringPresentation,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_stationary() {
            write!(f, "e{}", self.pres.vertex_name(self.path.source))
        } else {
            let names: Vec<&str> = self
                .path
                .arrows
                .iter()
                .map(|a| self.pres.arrow_name(*a))
                .collect();
            write!(f, "{}", names.join("·"))
        }
    }
}

#[derive(Debug, Default)]
struct PathTable {
    paths: Vec<Path>,
    index: HashMap<(Vertex, Vec<ArrowId>), usize>,
    from: Vec<Vec<usize>>,
    to: Vec<Vec<usize>>,
}

/// A monomial bound quiver `(Q, I)`, immutable after construction.
#[derive(Debug)]
pub struct StringPresentation {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<Vec<ArrowId>>,
    vertex_lookup: HashMap<String, Vertex>,
    arrow_lookup: HashMap<String, ArrowId>,
    table: OnceLock<PathTable>,
}

impl Clone for StringPresentation {
    fn clone(&self) -> Self {
        Self {
            vertices: self.vertices.clone(),
            arrows: self.arrows.clone(),
            relations: self.relations.clone(),
            vertex_lookup: self.vertex_lookup.clone(),
            arrow_lookup: self.arrow_lookup.clone(),
            table: OnceLock::new(),
        }
    }
}

impl PartialEq for StringPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.arrows == other.arrows
            && self.relations == other.relations
    }
}

impl Eq for StringPresentation {}

/// Incremental constructor working with names.
#[derive(Debug, Default, Clone)]
pub struct PresentationBuilder {
    vertices: Vec<String>,
    arrows: Vec<(String, String, String)>,
    relations: Vec<Vec<String>>,
}

impl PresentationBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, name: impl Into<String>) -> Self {
        self.vertices.push(name.into());
        self
    }

    pub fn vertices<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.vertices.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn arrow(
        mut self,
        name: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        self.arrows
            .push((name.into(), source.into(), target.into()));
        self
    }

    pub fn relation<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.relations
            .push(names.into_iter().map(Into::into).collect());
        self
    }

    pub fn build(self) -> Result<StringPresentation> {
        Ok(self.build_with_warnings()?.0)
    }

    /// Build, returning the normalization warnings (duplicate or non-minimal
    /// relations that were dropped).
    pub fn build_with_warnings(self) -> Result<(StringPresentation, Vec<String>)> {
        let mut vertex_lookup = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vertex_lookup.insert(v.clone(), Vertex(i)).is_some() {
                return Err(Error::Duplicate(v.clone()));
            }
        }
        let mut arrows = Vec::with_capacity(self.arrows.len());
        let mut arrow_lookup = HashMap::new();
        for (i, (name, s, t)) in self.arrows.iter().enumerate() {
            let source = *vertex_lookup
                .get(s)
                .ok_or_else(|| Error::UnknownVertex(s.clone()))?;
            let target = *vertex_lookup
                .get(t)
                .ok_or_else(|| Error::UnknownVertex(t.clone()))?;
            if arrow_lookup.insert(name.clone(), ArrowId(i)).is_some() {
                return Err(Error::Duplicate(name.clone()));
            }
            arrows.push(Arrow {
                name: name.clone(),
                source,
                target,
            });
        }
        let mut relations = Vec::new();
        for rel in &self.relations {
            let ids = rel
                .iter()
                .map(|n| {
                    arrow_lookup
                        .get(n)
                        .copied()
                        .ok_or_else(|| Error::UnknownArrow {
                            line: 0,
                            name: n.clone(),
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            if ids.len() < 2 {
                return Err(Error::NonComposableRelation(format!(
                    "{} (relations need length at least 2)",
                    rel.join(" ")
                )));
            }
            if ids
                .windows(2)
                .any(|w| arrows[w[0].0].target != arrows[w[1].0].source)
            {
                return Err(Error::NonComposableRelation(rel.join(" ")));
            }
            relations.push(ids);
        }
        let (relations, warnings) = normalize_relations(relations, &arrows);
        for w in &warnings {
            log::warn!("{w}");
        }
        Ok((
            StringPresentation {
                vertices: self.vertices,
                arrows,
                relations,
                vertex_lookup,
                arrow_lookup,
                table: OnceLock::new(),
            },
            warnings,
        ))
    }
}

fn contains_subword(hay: &[ArrowId], needle: &[ArrowId]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

fn normalize_relations(
    rels: Vec<Vec<ArrowId>>,
    arrows: &[Arrow],
) -> (Vec<Vec<ArrowId>>, Vec<String>) {
    let name = |r: &[ArrowId]| {
        r.iter()
            .map(|a| arrows[a.0].name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut warnings = Vec::new();
    let mut dedup: Vec<Vec<ArrowId>> = Vec::new();
    for r in rels {
        if dedup.contains(&r) {
            warnings.push(format!("duplicate relation `{}` removed", name(&r)));
        } else {
            dedup.push(r);
        }
    }
    let mut out = Vec::new();
    for (i, r) in dedup.iter().enumerate() {
        let shorter = dedup
            .iter()
            .enumerate()
            .find(|(j, s)| *j != i && s.len() < r.len() && contains_subword(r, s));
        match shorter {
            Some((_, s)) => warnings.push(format!(
                "relation `{}` is not minimal (contains `{}`), dropped",
                name(r),
                name(s)
            )),
            None => out.push(r.clone()),
        }
    }
    (out, warnings)
}

impl StringPresentation {
    pub fn builder() -> PresentationBuilder {
        PresentationBuilder::new()
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::parse_with_warnings(text)?.0)
    }

    /// Parse `.bqv` source:
    ///
    /// ```text
    /// vertices: 1 2 3
    /// arrow a: 1 -> 2
    /// arrow b: 2 -> 3
    /// relation: a b
    /// ```
    ///
    /// `#` starts a comment.
    pub fn parse_with_warnings(text: &str) -> Result<(Self, Vec<String>)> {
        let mut builder = PresentationBuilder::new();
        let mut relation_lines = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let syntax = |column: usize, message: &str| Error::Syntax {
                line: line_no,
                column: column + 1,
                message: message.to_string(),
            };
            if let Some(rest) = trimmed.strip_prefix("vertices:") {
                for v in rest.split_whitespace() {
                    builder = builder.vertex(v);
                }
            } else if let Some(rest) = trimmed.strip_prefix("relation:") {
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                if names.is_empty() {
                    return Err(syntax(indent + "relation:".len(), "empty relation"));
                }
                relation_lines.push((line_no, names));
            } else if let Some(rest) = trimmed.strip_prefix("arrow") {
                if !rest.starts_with(char::is_whitespace) {
                    return Err(syntax(
                        indent,
                        "expected `vertices:`, `arrow` or `relation:`",
                    ));
                }
                let Some((name, ends)) = rest.split_once(':') else {
                    return Err(syntax(
                        indent + trimmed.len(),
                        "expected `:` after arrow name",
                    ));
                };
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax(indent + "arrow".len() + 1, "invalid arrow name"));
                }
                let colon = indent + "arrow".len() + rest.find(':').unwrap_or(0);
                let Some((s, t)) = ends.split_once("->") else {
                    return Err(syntax(colon + 1, "expected `<source> -> <target>`"));
                };
                let (s, t) = (s.trim(), t.trim());
                if s.is_empty()
                    || t.is_empty()
                    || s.contains(char::is_whitespace)
                    || t.contains(char::is_whitespace)
                {
                    return Err(syntax(colon + 1, "expected `<source> -> <target>`"));
                }
                builder = builder.arrow(name, s, t);
            } else {
                return Err(syntax(
                    indent,
                    "expected `vertices:`, `arrow` or `relation:`",
                ));
            }
        }
        // resolve relation names with line information
        let known: HashSet<&str> = builder.arrows.iter().map(|(n, _, _)| n.as_str()).collect();
        for (line, names) in &relation_lines {
            if let Some(bad) = names.iter().find(|n| !known.contains(n.as_str())) {
                return Err(Error::UnknownArrow {
                    line: *line,
                    name: bad.clone(),
                });
            }
        }
        for (_, names) in relation_lines {
            builder = builder.relation(names);
        }
        builder.build_with_warnings()
    }

    /// Canonical `.bqv` text.
    pub fn to_bqv(&self) -> String {
        let mut out = String::new();
        out.push_str("vertices:");
        for v in &self.vertices {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
        for a in &self.arrows {
            out.push_str(&format!(
                "arrow {}: {} -> {}\n",
                a.name,
                self.vertex_name(a.source),
                self.vertex_name(a.target)
            ));
        }
        for r in &self.relations {
            let names: Vec<&str> = r.iter().map(|a| self.arrow_name(*a)).collect();
            out.push_str(&format!("relation: {}\n", names.join(" ")));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertices.len()).map(Vertex)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<Vertex> {
        self.vertex_lookup.get(name).copied()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a.0].name
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.arrow_lookup.get(name).copied()
    }

    pub fn relations(&self) -> &[Vec<ArrowId>] {
        &self.relations
    }

    pub fn relation_path(&self, i: usize) -> Path {
        self.path_of(&self.relations[i])
            .expect("relations are composable")
    }

    pub fn outgoing(&self, v: Vertex) -> Vec<ArrowId> {
        self.arrow_ids()
            .filter(|a| self.arrow(*a).source == v)
            .collect()
    }

    pub fn incoming(&self, v: Vertex) -> Vec<ArrowId> {
        self.arrow_ids()
            .filter(|a| self.arrow(*a).target == v)
            .collect()
    }

    /// The path spelled by an arrow sequence, if composable and nonempty.
    pub fn path_of(&self, arrows: &[ArrowId]) -> Option<Path> {
        let first = arrows.first()?;
        if arrows
            .windows(2)
            .any(|w| self.arrow(w[0]).target != self.arrow(w[1]).source)
        {
            return None;
        }
        Some(Path {
            source: self.arrow(*first).source,
            target: self.arrow(*arrows.last().unwrap()).target,
            arrows: arrows.to_vec(),
        })
    }

    pub fn path_from_names(&self, names: &[&str]) -> Result<Path> {
        let ids = names
            .iter()
            .map(|n| {
                self.arrow_by_name(n).ok_or_else(|| Error::UnknownArrow {
                    line: 0,
                    name: n.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.path_of(&ids)
            .ok_or_else(|| Error::NonComposable(names.join(" ")))
    }

    /// True iff some relation generator occurs as a contiguous subword.
    pub fn is_zero(&self, p: &Path) -> bool {
        self.relations
            .iter()
            .any(|r| contains_subword(&p.arrows, r))
    }

    /// `p` followed by `q`; `Ok(None)` is the zero element.
    pub fn compose(&self, p: &Path, q: &Path) -> Result<Option<Path>> {
        if p.target != q.source {
            return Err(Error::NonComposable(format!(
                "{} ends at {} but {} starts at {}",
                p.display(self),
                self.vertex_name(p.target),
                q.display(self),
                self.vertex_name(q.source)
            )));
        }
        let mut arrows = p.arrows.clone();
        arrows.extend_from_slice(&q.arrows);
        let path = Path {
            source: p.source,
            target: q.target,
            arrows,
        };
        Ok(if self.is_zero(&path) {
            None
        } else {
            Some(path)
        })
    }

    /// Composition for callers that have already checked the endpoints.
    pub fn concat(&self, p: &Path, q: &Path) -> Option<Path> {
        self.compose(p, q).expect("endpoints checked by caller")
    }

    fn table(&self) -> &PathTable {
        self.table.get_or_init(|| self.build_table())
    }

    fn build_table(&self) -> PathTable {
        // Bound guards against infinite algebras; string trees never get close.
        const MAX_PATHS: usize = 200_000;
        let n = self.vertices.len();
        let mut t = PathTable {
            from: vec![Vec::new(); n],
            to: vec![Vec::new(); n],
            ..Default::default()
        };
        let out: Vec<Vec<ArrowId>> = self.vertices().map(|v| self.outgoing(v)).collect();
        for v in self.vertices() {
            let mut stack = vec![Path::stationary(v)];
            while let Some(p) = stack.pop() {
                let idx = t.paths.len();
                t.index.insert((p.source, p.arrows.clone()), idx);
                t.from[p.source.0].push(idx);
                t.to[p.target.0].push(idx);
                for a in out[p.target.0].iter().rev() {
                    let mut arrows = p.arrows.clone();
                    arrows.push(*a);
                    let q = Path {
                        source: p.source,
                        target: self.arrow(*a).target,
                        arrows,
                    };
                    if !self.is_zero(&q) {
                        stack.push(q);
                    }
                }
                t.paths.push(p);
                assert!(t.paths.len() < MAX_PATHS, "path enumeration exceeded {MAX_PATHS} paths; is the algebra finite dimensional?");
            }
        }
        // deterministic order: by length, then arrow declaration order
        for list in t.from.iter_mut().chain(t.to.iter_mut()) {
            list.sort_by(|a, b| {
                let (pa, pb) = (&t.paths[*a], &t.paths[*b]);
                (pa.len(), &pa.arrows, pa.source).cmp(&(pb.len(), &pb.arrows, pb.source))
            });
        }
        t
    }

    /// All nonzero paths starting at `v` (stationary first). Requires a
    /// finite-dimensional algebra.
    pub fn nonzero_paths_from(&self, v: Vertex) -> Vec<Path> {
        let t = self.table();
        t.from[v.0].iter().map(|i| t.paths[*i].clone()).collect()
    }

    pub fn nonzero_paths_to(&self, v: Vertex) -> Vec<Path> {
        let t = self.table();
        t.to[v.0].iter().map(|i| t.paths[*i].clone()).collect()
    }

    /// Nonzero paths from `a` to `b`; at most one on a tree.
    pub fn nonzero_paths_between(&self, a: Vertex, b: Vertex) -> Vec<Path> {
        let t = self.table();
        t.from[a.0]
            .iter()
            .map(|i| &t.paths[*i])
            .filter(|p| p.target == b)
            .cloned()
            .collect()
    }

    /// The nonzero path from `a` to `b`, if any (first in declaration order).
    pub fn path_between(&self, a: Vertex, b: Vertex) -> Option<Path> {
        let t = self.table();
        t.from[a.0]
            .iter()
            .map(|i| &t.paths[*i])
            .find(|p| p.target == b)
            .cloned()
    }

    /// Index of a nonzero path in the internal enumeration (used as a basis
    /// label by the representation code).
    pub fn nonzero_path_count(&self) -> usize {
        self.table().paths.len()
    }

    /// Nonzero paths from `v` that admit no nonzero one-arrow extension.
    /// At most two for a string presentation; ordered by first arrow.
    pub fn maximal_nonzero_paths_from(&self, v: Vertex) -> Vec<Path> {
        let all = self.nonzero_paths_from(v);
        let mut maxes: Vec<Path> = all
            .iter()
            .filter(|p| {
                self.outgoing(p.target).iter().all(|a| {
                    let mut arrows = p.arrows.clone();
                    arrows.push(*a);
                    self.is_zero(&Path {
                        source: p.source,
                        target: self.arrow(*a).target,
                        arrows,
                    })
                })
            })
            .cloned()
            .collect();
        let snapshot = maxes.clone();
        maxes.retain(|p| {
            !snapshot
                .iter()
                .any(|q| q != p && q.arrows.starts_with(&p.arrows))
        });
        maxes.sort_by(|a, b| a.arrows.cmp(&b.arrows));
        maxes
    }

    /// Nonzero paths ending at `v` that admit no nonzero one-arrow extension
    /// on the left.
    pub fn maximal_nonzero_paths_to(&self, v: Vertex) -> Vec<Path> {
        let all = self.nonzero_paths_to(v);
        let mut maxes: Vec<Path> = all
            .iter()
            .filter(|p| {
                self.incoming(p.source).iter().all(|a| {
                    let mut arrows = vec![*a];
                    arrows.extend_from_slice(&p.arrows);
                    self.is_zero(&Path {
                        source: self.arrow(*a).source,
                        target: p.target,
                        arrows,
                    })
                })
            })
            .cloned()
            .collect();
        let snapshot = maxes.clone();
        maxes.retain(|p| {
            !snapshot
                .iter()
                .any(|q| q != p && q.arrows.ends_with(&p.arrows))
        });
        maxes.sort_by(|a, b| a.arrows.iter().rev().cmp(b.arrows.iter().rev()));
        maxes
    }

    /// The opposite presentation: same vertices and arrow names, arrows and
    /// relations reversed.
    pub fn opposite(&self) -> StringPresentation {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                source: a.target,
                target: a.source,
            })
            .collect();
        let relations = self
            .relations
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        StringPresentation {
            vertices: self.vertices.clone(),
            arrows,
            relations,
            vertex_lookup: self.vertex_lookup.clone(),
            arrow_lookup: self.arrow_lookup.clone(),
            table: OnceLock::new(),
        }
    }

    /// Underlying undirected graph is connected and acyclic.
    pub fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.arrows.len() != n - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for a in &self.arrows {
            let (x, y) = (find(&mut parent, a.source.0), find(&mut parent, a.target.0));
            if x == y {
                return false;
            }
            parent[x] = y;
        }
        true
    }

    /// Finite dimensionality: no arbitrarily long nonzero path. Returns an
    /// arrow cycle witnessing infinite dimension otherwise.
    pub fn infinite_path_witness(&self) -> Option<Vec<ArrowId>> {
        let max_len = self.relations.iter().map(Vec::len).max().unwrap_or(1);
        let keep = max_len.saturating_sub(1).max(1);
        // states: nonzero arrow words of length <= keep (suffix memory)
        let mut index: HashMap<Vec<ArrowId>, usize> = HashMap::new();
        let mut states: Vec<Vec<ArrowId>> = Vec::new();
        let mut edges: Vec<Vec<(usize, ArrowId)>> = Vec::new();
        let mut queue: Vec<Vec<ArrowId>> = self.arrow_ids().map(|a| vec![a]).collect();
        for s in &queue {
            index.insert(s.clone(), states.len());
            states.push(s.clone());
            edges.push(Vec::new());
        }
        while let Some(s) = queue.pop() {
            let from = index[&s];
            let last = *s.last().unwrap();
            for b in self.outgoing(self.arrow(last).target) {
                let mut word = s.clone();
                word.push(b);
                if self.relations.iter().any(|r| word.ends_with(r)) {
                    continue;
                }
                let start = word.len().saturating_sub(keep);
                let next = word[start..].to_vec();
                let to = match index.get(&next) {
                    Some(i) => *i,
                    None => {
                        let i = states.len();
                        index.insert(next.clone(), i);
                        states.push(next.clone());
                        edges.push(Vec::new());
                        queue.push(next);
                        i
                    }
                };
                edges[from].push((to, b));
            }
        }
        // cycle detection (iterative DFS with colors)
        let n = states.len();
        let mut color = vec![0u8; n];
        let mut via: Vec<Option<(usize, ArrowId)>> = vec![None; n];
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            color[root] = 1;
            while let Some((u, i)) = stack.pop() {
                if i < edges[u].len() {
                    stack.push((u, i + 1));
                    let (w, a) = edges[u][i];
                    if color[w] == 1 {
                        // back edge: recover the cycle of arrows
                        let mut cycle = vec![a];
                        let mut cur = u;
                        while cur != w {
                            let (prev, arrow) = via[cur].expect("tree edge");
                            cycle.push(arrow);
                            cur = prev;
                        }
                        cycle.reverse();
                        return Some(cycle);
                    } else if color[w] == 0 {
                        color[w] = 1;
                        via[w] = Some((u, a));
                        stack.push((w, 0));
                    }
                } else {
                    color[u] = 2;
                }
            }
        }
        None
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport::compute(self)
    }

    /// Vertices that are the source or the target of some relation.
    pub fn relation_endpoints(&self) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        for i in 0..self.relations.len() {
            let p = self.relation_path(i);
            out.insert(p.source);
            out.insert(p.target);
        }
        out
    }
}

/// A failed axiom, with the offending vertex or arrows (by name).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ShortRelation {
        relation: Vec<String>,
    },
    InfiniteDimensional {
        cycle: Vec<String>,
    },
    TooManyOutgoing {
        vertex: String,
        arrows: Vec<String>,
    },
    TooManyIncoming {
        vertex: String,
        arrows: Vec<String>,
    },
    /// S3: more than one nonzero continuation.
    NonzeroSuccessors {
        arrow: String,
        successors: Vec<String>,
    },
    NonzeroPredecessors {
        arrow: String,
        predecessors: Vec<String>,
    },
    /// G1: more than one zero continuation.
    ZeroSuccessors {
        arrow: String,
        successors: Vec<String>,
    },
    ZeroPredecessors {
        arrow: String,
        predecessors: Vec<String>,
    },
    /// G2: a generator of length other than two.
    NonQuadratic {
        relation: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

impl AxiomCheck {
    fn from(violations: Vec<Violation>) -> Self {
        AxiomCheck {
            holds: violations.is_empty(),
            violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub admissible: AxiomCheck,
    pub s1: AxiomCheck,
    pub s2: AxiomCheck,
    pub s3: AxiomCheck,
    pub g1: AxiomCheck,
    pub g2: AxiomCheck,
    pub is_tree: bool,
    pub is_string: bool,
    pub is_gentle: bool,
}

impl ValidationReport {
    fn compute(p: &StringPresentation) -> Self {
        let names = |ids: &[ArrowId]| {
            ids.iter()
                .map(|a| p.arrow_name(*a).to_string())
                .collect::<Vec<_>>()
        };
        let is_rel2 = |a: ArrowId, b: ArrowId| {
            p.relations
                .iter()
                .any(|r| r.len() == 2 && r[0] == a && r[1] == b)
        };

        let s1 = AxiomCheck::from(
            p.relations
                .iter()
                .filter(|r| r.len() < 2)
                .map(|r| Violation::ShortRelation { relation: names(r) })
                .collect(),
        );
        let mut adm = s1.violations.clone();
        if let Some(cycle) = p.infinite_path_witness() {
            adm.push(Violation::InfiniteDimensional {
                cycle: names(&cycle),
            });
        }

        let mut s2 = Vec::new();
        for v in p.vertices() {
            let out = p.outgoing(v);
            if out.len() > 2 {
                s2.push(Violation::TooManyOutgoing {
                    vertex: p.vertex_name(v).to_string(),
                    arrows: names(&out),
                });
            }
            let inc = p.incoming(v);
            if inc.len() > 2 {
                s2.push(Violation::TooManyIncoming {
                    vertex: p.vertex_name(v).to_string(),
                    arrows: names(&inc),
                });
            }
        }

        let mut s3 = Vec::new();
        let mut g1 = Vec::new();
        for a in p.arrow_ids() {
            let succ = p.outgoing(p.arrow(a).target);
            let (zero, nonzero): (Vec<ArrowId>, Vec<ArrowId>) =
                succ.iter().partition(|b| is_rel2(a, **b));
            if nonzero.len() > 1 {
                s3.push(Violation::NonzeroSuccessors {
                    arrow: p.arrow_name(a).to_string(),
                    successors: names(&nonzero),
                });
            }
            if zero.len() > 1 {
                g1.push(Violation::ZeroSuccessors {
                    arrow: p.arrow_name(a).to_string(),
                    successors: names(&zero),
                });
            }
            let pred = p.incoming(p.arrow(a).source);
            let (zero, nonzero): (Vec<ArrowId>, Vec<ArrowId>) =
                pred.iter().partition(|c| is_rel2(**c, a));
            if nonzero.len() > 1 {
                s3.push(Violation::NonzeroPredecessors {
                    arrow: p.arrow_name(a).to_string(),
                    predecessors: names(&nonzero),
                });
            }
            if zero.len() > 1 {
                g1.push(Violation::ZeroPredecessors {
                    arrow: p.arrow_name(a).to_string(),
                    predecessors: names(&zero),
                });
            }
        }
        let g2: Vec<Violation> = p
            .relations
            .iter()
            .filter(|r| r.len() != 2)
            .map(|r| Violation::NonQuadratic { relation: names(r) })
            .collect();

        let s2 = AxiomCheck::from(s2);
        let s3 = AxiomCheck::from(s3);
        let g1 = AxiomCheck::from(g1);
        let g2 = AxiomCheck::from(g2);
        let is_string = s1.holds && s2.holds && s3.holds;
        let is_gentle = is_string && g1.holds && g2.holds;
        ValidationReport {
            admissible: AxiomCheck::from(adm),
            s1,
            s2,
            s3,
            g1,
            g2,
            is_tree: p.is_tree(),
            is_string,
            is_gentle,
        }
    }

    /// String axioms hold and the quiver is a tree.
    pub fn is_string_tree(&self) -> bool {
        self.is_string && self.is_tree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(p: &StringPresentation, paths: &[Path]) -> Vec<(String, String)> {
        paths
            .iter()
            .map(|q| {
                (
                    p.vertex_name(q.source).to_string(),
                    p.vertex_name(q.target).to_string(),
                )
            })
            .collect()
    }

    #[test]
    fn parse_fix_a() {
        let p = fixtures::fix_a();
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.arrows().len(), 3);
        assert_eq!(p.relations().len(), 1);
        assert_eq!(p.relations()[0].len(), 3);
    }

    #[test]
    fn single_vertex_is_valid() {
        let p = StringPresentation::parse("vertices: 1\n").unwrap();
        assert_eq!(p.vertex_count(), 1);
        let r = p.validate();
        assert!(r.is_string && r.is_gentle && r.is_tree);
    }

    #[test]
    fn unknown_arrow_in_relation() {
        let err = StringPresentation::parse("vertices: 1 2\narrow a: 1 -> 2\nrelation: a x\n")
            .unwrap_err();
        assert_eq!(
            err,
            Error::UnknownArrow {
                line: 3,
                name: "x".into()
            }
        );
    }

    #[test]
    fn syntax_error_position() {
        let err = StringPresentation::parse("vertices: 1 2\narrow a 1 -> 2\n").unwrap_err();
        match err {
            Error::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = StringPresentation::parse("vertices: 1\n  bogus\n").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                column: 3,
                message: "expected `vertices:`, `arrow` or `relation:`".into()
            }
        );
    }

    #[test]
    fn non_composable_relation() {
        let err = StringPresentation::parse(
            "vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 3 -> 2\nrelation: a b\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonComposableRelation(_)));
    }

    #[test]
    fn normalization_drops_duplicates_and_non_minimal() {
        let src = "vertices: 1 2 3 4\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 3 -> 4\nrelation: a b\nrelation: a b c\nrelation: a b\n";
        let (p, warnings) = StringPresentation::parse_with_warnings(src).unwrap();
        assert_eq!(p.relations().len(), 1);
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn validate_fixtures() {
        let e = fixtures::fix_e().validate();
        assert!(e.is_string && e.is_gentle && e.is_tree);
        let b = fixtures::fix_b().validate();
        assert!(b.is_string && !b.is_gentle);
        assert!(!b.g1.holds);
        // c: 3->4 is preceded by b and d, both compositions zero
        assert!(b.g1.violations.iter().any(|v| matches!(v,
            Violation::ZeroPredecessors { arrow, .. } if arrow == "c")));
    }

    #[test]
    fn three_incoming_breaks_s2() {
        let p = StringPresentation::parse(
            "vertices: 1 2 3 4\narrow a: 1 -> 4\narrow b: 2 -> 4\narrow c: 3 -> 4\n",
        )
        .unwrap();
        let r = p.validate();
        assert!(!r.s2.holds && !r.is_string);
    }

    #[test]
    fn compose_examples() {
        let p = fixtures::fix_a();
        let a = p.path_from_names(&["a"]).unwrap();
        let b = p.path_from_names(&["b"]).unwrap();
        let c = p.path_from_names(&["c"]).unwrap();
        let ab = p.compose(&a, &b).unwrap().expect("ab is nonzero");
        assert_eq!(p.vertex_name(ab.source), "1");
        assert_eq!(p.vertex_name(ab.target), "3");
        assert_eq!(p.compose(&ab, &c).unwrap(), None);
        let e = Path::stationary(Vertex(0));
        assert_eq!(p.compose(&e, &e).unwrap(), Some(e.clone()));
        assert!(p.compose(&b, &a).is_err());
    }

    #[test]
    fn maximal_paths_fix_c() {
        let p = fixtures::fix_c();
        let v3 = p.vertex_by_name("3").unwrap();
        let got = names(&p, &p.maximal_nonzero_paths_from(v3));
        assert_eq!(
            got,
            vec![("3".into(), "5".into()), ("3".into(), "15".into())]
        );
        let v9 = p.vertex_by_name("9").unwrap();
        assert_eq!(
            names(&p, &p.maximal_nonzero_paths_from(v9)),
            vec![("9".into(), "17".into())]
        );
        let v17 = p.vertex_by_name("17").unwrap();
        let sink = p.maximal_nonzero_paths_from(v17);
        assert_eq!(sink, vec![Path::stationary(v17)]);
    }

    #[test]
    fn round_trip_text() {
        for p in fixtures::all() {
            let text = p.1.to_bqv();
            assert_eq!(StringPresentation::parse(&text).unwrap(), p.1);
        }
    }

    #[test]
    fn finite_dimension_detection() {
        let cyc =
            StringPresentation::parse("vertices: 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\n").unwrap();
        assert!(cyc.infinite_path_witness().is_some());
        let bounded = StringPresentation::parse(
            "vertices: 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation: a b\nrelation: b a\n",
        )
        .unwrap();
        assert!(bounded.infinite_path_witness().is_none());
        assert!(bounded.validate().admissible.holds);
    }
}
