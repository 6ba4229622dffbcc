//! Interval and string modules, projectives and injectives, as matrix
//! representations over `F_p`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::presentation::{ArrowId, Path, StringPresentation, Vertex};

/// A nonzero path `[start, end]`, the datum of a uniserial module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub path: Path,
}

impl Interval {
    /// The interval along the nonzero path from `a` to `b`.
    pub fn new(p: &StringPresentation, a: Vertex, b: Vertex) -> Result<Self> {
        match p.path_between(a, b) {
            Some(path) => Ok(Interval { path }),
            None => Err(Error::ZeroPath(format!(
                "[{},{}]",
                p.vertex_name(a),
                p.vertex_name(b)
            ))),
        }
    }

    pub fn from_path(p: &StringPresentation, path: Path) -> Result<Self> {
        if p.is_zero(&path) {
            return Err(Error::ZeroPath(path.display(p).to_string()));
        }
        Ok(Interval { path })
    }

    pub fn by_names(p: &StringPresentation, a: &str, b: &str) -> Result<Self> {
        let va = p
            .vertex_by_name(a)
            .ok_or_else(|| Error::UnknownVertex(a.into()))?;
        let vb = p
            .vertex_by_name(b)
            .ok_or_else(|| Error::UnknownVertex(b.into()))?;
        Self::new(p, va, vb)
    }

    pub fn stationary(v: Vertex) -> Self {
        Interval {
            path: Path::stationary(v),
        }
    }

    pub fn start(&self) -> Vertex {
        self.path.source
    }

    pub fn end(&self) -> Vertex {
        self.path.target
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self, p: &StringPresentation) -> Vec<Vertex> {
        self.path.vertices(p)
    }

    pub fn label(&self, p: &StringPresentation) -> String {
        format!(
            "[{},{}]",
            p.vertex_name(self.start()),
            p.vertex_name(self.end())
        )
    }
}

/// One letter of a walk: an arrow traversed forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Direct(ArrowId),
    Inverse(ArrowId),
}

/// A reduced walk in the quiver starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub start: Vertex,
    pub letters: Vec<Letter>,
}

impl Walk {
    pub fn stationary(v: Vertex) -> Self {
        Walk {
            start: v,
            letters: Vec::new(),
        }
    }

    /// Walk from a start vertex and arrow names; a trailing `-` marks an
    /// inverse letter.
    pub fn from_names(p: &StringPresentation, start: &str, letters: &[&str]) -> Result<Self> {
        let start = p
            .vertex_by_name(start)
            .ok_or_else(|| Error::UnknownVertex(start.into()))?;
        let letters = letters
            .iter()
            .map(|l| {
                let (name, inverse) = match l.strip_suffix('-') {
                    Some(n) => (n, true),
                    None => (*l, false),
                };
                let a = p.arrow_by_name(name).ok_or_else(|| Error::UnknownArrow {
                    line: 0,
                    name: name.into(),
                })?;
                Ok(if inverse {
                    Letter::Inverse(a)
                } else {
                    Letter::Direct(a)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Walk { start, letters })
    }

    /// Vertices visited, in order.
    pub fn vertices(&self, p: &StringPresentation) -> Result<Vec<Vertex>> {
        let mut out = vec![self.start];
        let mut cur = self.start;
        for l in &self.letters {
            let next = match *l {
                Letter::Direct(a) if p.arrow(a).source == cur => p.arrow(a).target,
                Letter::Inverse(a) if p.arrow(a).target == cur => p.arrow(a).source,
                _ => return Err(Error::InvalidWalk("letters are not composable".into())),
            };
            out.push(next);
            cur = next;
        }
        Ok(out)
    }

    /// Reduced and free of zero relations in either direction.
    pub fn validate(&self, p: &StringPresentation) -> Result<()> {
        self.vertices(p)?;
        for w in self.letters.windows(2) {
            match (w[0], w[1]) {
                (Letter::Direct(a), Letter::Inverse(b))
                | (Letter::Inverse(a), Letter::Direct(b))
                    if a == b =>
                {
                    return Err(Error::InvalidWalk(format!(
                        "not reduced at {}",
                        p.arrow_name(a)
                    )));
                }
                _ => {}
            }
        }
        let mut run: Vec<ArrowId> = Vec::new();
        let mut run_inverse = false;
        let flush = |run: &mut Vec<ArrowId>, inverse: bool| -> Result<()> {
            if run.is_empty() {
                return Ok(());
            }
            let arrows: Vec<ArrowId> = if inverse {
                run.iter().rev().copied().collect()
            } else {
                run.clone()
            };
            let path = p.path_of(&arrows).expect("composable run");
            run.clear();
            if p.is_zero(&path) {
                Err(Error::InvalidWalk(format!(
                    "crosses a relation along {}",
                    path.display(p)
                )))
            } else {
                Ok(())
            }
        };
        for l in &self.letters {
            let (a, inv) = match *l {
                Letter::Direct(a) => (a, false),
                Letter::Inverse(a) => (a, true),
            };
            if inv != run_inverse {
                flush(&mut run, run_inverse)?;
                run_inverse = inv;
            }
            run.push(a);
        }
        flush(&mut run, run_inverse)
    }
}

/// A finite-dimensional representation: one space per vertex and one
/// matrix (`dim target x dim source`) per arrow.
#[derive(Clone, PartialEq, Eq)]
pub struct Representation {
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("dims", &self.dims)
            .finish()
    }
}

impl Representation {
    pub fn new(p: &StringPresentation, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        if dims.len() != p.vertex_count() || maps.len() != p.arrows().len() {
            return Err(Error::Document(
                "representation shape does not match the quiver".into(),
            ));
        }
        for (a, m) in p.arrows().iter().zip(&maps) {
            if m.rows() != dims[a.target.0] || m.cols() != dims[a.source.0] {
                return Err(Error::Document(format!(
                    "matrix for arrow {} has the wrong shape",
                    a.name
                )));
            }
        }
        let rep = Representation { dims, maps };
        if !rep.satisfies_relations(p) {
            return Err(Error::Document("relations do not act by zero".into()));
        }
        Ok(rep)
    }

    pub fn zero(p: &StringPresentation) -> Self {
        Representation {
            dims: vec![0; p.vertex_count()],
            maps: p.arrows().iter().map(|_| Matrix::zeros(0, 0)).collect(),
        }
    }

    /// Assemble without checking relations; used for kernels of morphisms
    /// whose relations hold by construction.
    pub(crate) fn from_parts(dims: Vec<usize>, maps: Vec<Matrix>) -> Self {
        Representation { dims, maps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: Vertex) -> usize {
        self.dims[v.0]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn map(&self, a: ArrowId) -> &Matrix {
        &self.maps[a.0]
    }

    pub fn support(&self) -> Vec<Vertex> {
        (0..self.dims.len())
            .filter(|i| self.dims[*i] > 0)
            .map(Vertex)
            .collect()
    }

    /// Action of a path (first arrow applied first).
    pub fn path_map(&self, p: &Path) -> Matrix {
        let mut m = Matrix::identity(self.dims[p.source.0]);
        for a in &p.arrows {
            m = self.maps[a.0].mul(&m);
        }
        m
    }

    pub fn satisfies_relations(&self, p: &StringPresentation) -> bool {
        (0..p.relations().len()).all(|i| self.path_map(&p.relation_path(i)).is_zero())
    }

    /// `phi` (one matrix per vertex, `self -> other`) commutes with every arrow.
    pub fn is_morphism(
        &self,
        p: &StringPresentation,
        other: &Representation,
        phi: &[Matrix],
    ) -> bool {
        p.arrow_ids().all(|a| {
            let arrow = p.arrow(a);
            other.map(a).mul(&phi[arrow.source.0]) == phi[arrow.target.0].mul(self.map(a))
        })
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| block_diag(a, b))
            .collect();
        Representation { dims, maps }
    }
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j));
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j));
        }
    }
    m
}

/// Representation with basis vectors labelled by positions; `edges` lists
/// `(arrow, from_label, to_label)` unit entries.
fn from_labelled(
    p: &StringPresentation,
    labels: &[Vertex],
    edges: &[(ArrowId, usize, usize)],
) -> Representation {
    let mut dims = vec![0; p.vertex_count()];
    let mut local = Vec::with_capacity(labels.len());
    for v in labels {
        local.push(dims[v.0]);
        dims[v.0] += 1;
    }
    let mut maps: Vec<Matrix> = p
        .arrows()
        .iter()
        .map(|a| Matrix::zeros(dims[a.target.0], dims[a.source.0]))
        .collect();
    for &(a, from, to) in edges {
        maps[a.0].set(local[to], local[from], 1);
    }
    Representation { dims, maps }
}

/// The uniserial module `M[a,b]`.
pub fn interval_module(p: &StringPresentation, iv: &Interval) -> Result<Representation> {
    if p.is_zero(&iv.path) {
        return Err(Error::ZeroPath(iv.path.display(p).to_string()));
    }
    let labels = iv.vertices(p);
    let edges: Vec<_> = iv
        .path
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| (*a, i, i + 1))
        .collect();
    Ok(from_labelled(p, &labels, &edges))
}

/// Basis of `P(v)`: nonzero paths from `v`, in the order returned by
/// [`StringPresentation::nonzero_paths_from`]; the space at `u` is spanned
/// by the paths ending at `u`, in that same order.
pub fn proj_rep(p: &StringPresentation, v: Vertex) -> Representation {
    let paths = p.nonzero_paths_from(v);
    let labels: Vec<Vertex> = paths.iter().map(|q| q.target).collect();
    let mut edges = Vec::new();
    for (i, q) in paths.iter().enumerate() {
        for a in p.outgoing(q.target) {
            let mut arrows = q.arrows.clone();
            arrows.push(a);
            if let Some(j) = paths
                .iter()
                .position(|r| r.arrows == arrows && !arrows.is_empty())
            {
                edges.push((a, i, j));
            }
        }
    }
    from_labelled(p, &labels, &edges)
}

/// Basis of `I(v)`: duals of nonzero paths ending at `v`, ordered as in
/// [`StringPresentation::nonzero_paths_to`]. An arrow `α` sends `(αq)*`
/// to `q*`.
pub fn inj_rep(p: &StringPresentation, v: Vertex) -> Representation {
    let paths = p.nonzero_paths_to(v);
    let labels: Vec<Vertex> = paths.iter().map(|q| q.source).collect();
    let mut edges = Vec::new();
    for (i, q) in paths.iter().enumerate() {
        if let Some((first, rest)) = q.arrows.split_first() {
            let j = paths
                .iter()
                .position(|r| r.arrows == rest && r.source == p.arrow(*first).target)
                .expect("suffix of a nonzero path is nonzero");
            edges.push((*first, i, j));
        }
    }
    from_labelled(p, &labels, &edges)
}

/// Simple module at `v`.
pub fn simple_rep(p: &StringPresentation, v: Vertex) -> Representation {
    from_labelled(p, &[v], &[])
}

/// The string module of a walk: one basis vector per position.
pub fn string_module(p: &StringPresentation, w: &Walk) -> Result<Representation> {
    w.validate(p)?;
    let labels = w.vertices(p)?;
    let edges: Vec<_> = w
        .letters
        .iter()
        .enumerate()
        .map(|(i, l)| match *l {
            Letter::Direct(a) => (a, i, i + 1),
            Letter::Inverse(a) => (a, i + 1, i),
        })
        .collect();
    Ok(from_labelled(p, &labels, &edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Matrix;

    fn v(p: &StringPresentation, name: &str) -> Vertex {
        p.vertex_by_name(name).unwrap()
    }

    fn support_names(p: &StringPresentation, r: &Representation) -> Vec<String> {
        r.support()
            .iter()
            .map(|x| p.vertex_name(*x).to_string())
            .collect()
    }

    #[test]
    fn interval_fix_c() {
        let p = fixtures::fix_c();
        let m = interval_module(&p, &Interval::by_names(&p, "3", "9").unwrap()).unwrap();
        assert_eq!(support_names(&p, &m), vec!["3", "7", "9"]);
        assert_eq!(m.total_dim(), 3);
        let s = interval_module(&p, &Interval::stationary(v(&p, "5"))).unwrap();
        assert_eq!(s, simple_rep(&p, v(&p, "5")));
    }

    #[test]
    fn zero_interval_rejected() {
        let p = fixtures::fix_a();
        let abc = p.path_from_names(&["a", "b", "c"]).unwrap();
        assert!(Interval::from_path(&p, abc).is_err());
        assert!(Interval::by_names(&p, "1", "4").is_err());
    }

    #[test]
    fn projectives_and_injectives() {
        let a = fixtures::fix_a();
        let p1 = proj_rep(&a, v(&a, "1"));
        assert_eq!(support_names(&a, &p1), vec!["1", "2", "3"]);
        assert_eq!(p1.total_dim(), 3);
        let c = fixtures::fix_c();
        let i4 = inj_rep(&c, v(&c, "4"));
        assert_eq!(support_names(&c, &i4), vec!["2", "3", "4"]);
        let sink = v(&c, "17");
        assert_eq!(proj_rep(&c, sink), simple_rep(&c, sink));
    }

    #[test]
    fn string_module_shapes() {
        let c = fixtures::fix_c();
        let w = Walk::from_names(&c, "5", &["a4-", "a3-", "a6", "a8", "a9", "a11", "a14"]).unwrap();
        let m = string_module(&c, &w).unwrap();
        assert_eq!(m.total_dim(), 8);
        assert!(m.satisfies_relations(&c));
        let one = Walk::from_names(&c, "3", &["a3"]).unwrap();
        assert_eq!(
            string_module(&c, &one).unwrap(),
            interval_module(&c, &Interval::by_names(&c, "3", "4").unwrap()).unwrap()
        );
        let st = Walk::stationary(v(&c, "8"));
        assert_eq!(string_module(&c, &st).unwrap(), simple_rep(&c, v(&c, "8")));
        let bad = Walk::from_names(&c, "3", &["a3", "a4", "a5"]).unwrap();
        assert!(string_module(&c, &bad).is_err());
        let unreduced = Walk::from_names(&c, "3", &["a3", "a3-"]).unwrap();
        assert!(string_module(&c, &unreduced).is_err());
    }

    #[test]
    fn interval_is_quotient_of_projective() {
        let c = fixtures::fix_c();
        let iv = Interval::by_names(&c, "3", "9").unwrap();
        let m = interval_module(&c, &iv).unwrap();
        let pa = proj_rep(&c, iv.start());
        let paths = c.nonzero_paths_from(iv.start());
        let on_path = iv.vertices(&c);
        // send each path to the matching basis vector of M if it is a prefix
        let phi: Vec<Matrix> = c
            .vertices()
            .map(|u| {
                let cols: Vec<Vec<u32>> = paths
                    .iter()
                    .filter(|q| q.target == u)
                    .map(|q| {
                        let mut col = vec![0; m.dim(u)];
                        if iv.path.arrows.starts_with(&q.arrows) && on_path.contains(&u) {
                            col[0] = 1;
                        }
                        col
                    })
                    .collect();
                Matrix::from_columns(m.dim(u), &cols)
            })
            .collect();
        assert!(pa.is_morphism(&c, &m, &phi));
        assert!(c.vertices().all(|u| phi[u.0].rank() == m.dim(u)));
    }
}
