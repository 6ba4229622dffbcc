//! Ground truth by brute-force linear algebra: minimal projective
//! resolutions of arbitrary representations, Hom complexes, Ext dimensions
//! in two independent models, chain-map lifts and the top of the bimodule
//! `⊕ Ext^i(DA, A)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{fp, Matrix, PivotOrder};
use crate::modules::{inj_rep, simple_rep, Representation};
use crate::presentation::{ArrowId, Path, StringPresentation, Vertex};

/// `⊕_j P(tops[j])`, with basis `(j, path from tops[j])` at each vertex.
#[derive(Debug, Clone)]
pub struct FreeModule {
    tops: Vec<Vertex>,
    basis: Vec<Vec<(usize, Path)>>,
    index: HashMap<(usize, Vec<ArrowId>), usize>,
    rep: Representation,
}

impl FreeModule {
    pub fn new(p: &StringPresentation, tops: Vec<Vertex>) -> Self {
        let mut basis = vec![Vec::new(); p.vertex_count()];
        let mut index = HashMap::new();
        let mut rep = Representation::zero(p);
        let mut first = true;
        for (j, a) in tops.iter().enumerate() {
            for q in p.nonzero_paths_from(*a) {
                index.insert((j, q.arrows.clone()), basis[q.target.0].len());
                basis[q.target.0].push((j, q));
            }
            let pj = crate::modules::proj_rep(p, *a);
            rep = if first { pj } else { rep.direct_sum(&pj) };
            first = false;
        }
        FreeModule {
            tops,
            basis,
            index,
            rep,
        }
    }

    pub fn tops(&self) -> &[Vertex] {
        &self.tops
    }

    pub fn rank(&self) -> usize {
        self.tops.len()
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn basis_at(&self, v: Vertex) -> &[(usize, Path)] {
        &self.basis[v.0]
    }

    /// Coordinate of the basis element `(j, path)` in the space at the
    /// path's target.
    pub fn position(&self, j: usize, path: &Path) -> Option<usize> {
        self.index.get(&(j, path.arrows.clone())).copied()
    }

    /// Element `Σ coeff · (j, path)` of the space at `v`.
    pub fn element(&self, v: Vertex, terms: &[(usize, &Path, i64)]) -> Vec<u32> {
        let mut out = vec![0u32; self.rep.dim(v)];
        for (j, path, c) in terms {
            let pos = self
                .position(*j, path)
                .expect("path is a nonzero basis element");
            out[pos] = fp(out[pos] as i64 + c);
        }
        out
    }

    pub fn generator(&self, j: usize) -> Vec<u32> {
        self.element(self.tops[j], &[(j, &Path::stationary(self.tops[j]), 1)])
    }

    /// Vertexwise matrices of the morphism to `target` sending generator `j`
    /// to `images[j]`.
    pub fn morphism(&self, target: &Representation, images: &[Vec<u32>]) -> Vec<Matrix> {
        self.basis
            .iter()
            .enumerate()
            .map(|(v, elems)| {
                let cols: Vec<Vec<u32>> = elems
                    .iter()
                    .map(|(j, path)| target.path_map(path).apply(&images[*j]))
                    .collect();
                Matrix::from_columns(target.dims()[v], &cols)
            })
            .collect()
    }

    /// Offsets of the generator blocks in `Hom(self, n) = ⊕_j n_{tops[j]}`.
    fn hom_offsets(&self, n: &Representation) -> (Vec<usize>, usize) {
        let mut offs = Vec::with_capacity(self.tops.len());
        let mut total = 0;
        for a in &self.tops {
            offs.push(total);
            total += n.dim(*a);
        }
        (offs, total)
    }

    pub fn hom_dim(&self, n: &Representation) -> usize {
        self.hom_offsets(n).1
    }
}

/// Matrix of `Hom(tgt, n) -> Hom(src, n)`, `f ↦ f∘h`, where `h` sends the
/// generator `j` of `src` to `images[j]` in `tgt`.
fn pullback(src: &FreeModule, tgt: &FreeModule, images: &[Vec<u32>], n: &Representation) -> Matrix {
    let (off_s, total_s) = src.hom_offsets(n);
    let (off_t, total_t) = tgt.hom_offsets(n);
    let mut m = Matrix::zeros(total_s, total_t);
    for (j, a) in src.tops.iter().enumerate() {
        for (pos, (jt, path)) in tgt.basis[a.0].iter().enumerate() {
            let coeff = images[j][pos];
            if coeff == 0 {
                continue;
            }
            let block = n.path_map(path).scale(coeff as i64);
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    m.add_to(off_s[j] + r, off_t[*jt] + c, block.get(r, c));
                }
            }
        }
    }
    m
}

/// A projective resolution `… → F_1 → F_0 → M` stored by generator images.
#[derive(Debug, Clone)]
pub struct ChainResolution {
    pub module: Representation,
    pub terms: Vec<FreeModule>,
    /// Images of the generators of `terms[0]` in `module`.
    pub augmentation: Vec<Vec<u32>>,
    /// `differentials[k]`: images of the generators of `terms[k + 1]` in
    /// `terms[k]`.
    pub differentials: Vec<Vec<Vec<u32>>>,
}

impl ChainResolution {
    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    /// Multiset of generator vertices per degree.
    pub fn term_tops(&self) -> Vec<Vec<Vertex>> {
        self.terms.iter().map(|t| t.tops().to_vec()).collect()
    }

    fn differential_matrices(&self, k: usize) -> Vec<Matrix> {
        self.terms[k + 1].morphism(self.terms[k].rep(), &self.differentials[k])
    }

    /// Exactness, `d∘d = 0`, minimality and the Euler characteristic.
    pub fn check(&self, p: &StringPresentation) -> Result<(), String> {
        let eps = match self.terms.first() {
            Some(t) => t.morphism(&self.module, &self.augmentation),
            None => {
                return if self.module.total_dim() == 0 {
                    Ok(())
                } else {
                    Err("empty resolution of a nonzero module".into())
                }
            }
        };
        let ds: Vec<Vec<Matrix>> = (0..self.differentials.len())
            .map(|k| self.differential_matrices(k))
            .collect();
        for (k, term) in self.terms.iter().enumerate().skip(1) {
            if !term
                .rep()
                .is_morphism(p, self.terms[k - 1].rep(), &ds[k - 1])
            {
                return Err(format!("differential {k} is not a module map"));
            }
        }
        for v in p.vertices() {
            let i = v.0;
            if eps[i].rank() != self.module.dim(v) {
                return Err(format!("augmentation not onto at {}", p.vertex_name(v)));
            }
            let mut prev_kernel = self.terms[0].rep().dim(v) - eps[i].rank();
            let mut prev = &eps[i];
            for (k, d) in ds.iter().enumerate() {
                if !prev.mul(&d[i]).is_zero() {
                    return Err(format!(
                        "d∘d ≠ 0 at degree {} vertex {}",
                        k + 1,
                        p.vertex_name(v)
                    ));
                }
                if d[i].rank() != prev_kernel {
                    return Err(format!(
                        "not exact at degree {k} vertex {}",
                        p.vertex_name(v)
                    ));
                }
                prev_kernel = self.terms[k + 1].rep().dim(v) - d[i].rank();
                prev = &d[i];
            }
            if prev_kernel != 0 {
                return Err(format!(
                    "last differential not injective at {}",
                    p.vertex_name(v)
                ));
            }
        }
        // minimality: F_0 has exactly dim top(M) generators, and no later
        // generator maps onto a stationary basis element
        let top_dim: usize = p
            .vertices()
            .map(|v| {
                let mut rad = Matrix::zeros(self.module.dim(v), 0);
                for a in p.incoming(v) {
                    rad = rad.hcat(self.module.map(a));
                }
                self.module.dim(v) - rad.rank()
            })
            .sum();
        if top_dim != self.terms[0].rank() {
            return Err("projective cover is not minimal".into());
        }
        for (k, images) in self.differentials.iter().enumerate() {
            let tgt = &self.terms[k];
            for (j, img) in images.iter().enumerate() {
                let a = self.terms[k + 1].tops()[j];
                for (pos, (_, path)) in tgt.basis_at(a).iter().enumerate() {
                    if path.is_stationary() && img[pos] != 0 {
                        return Err(format!("degree {} is not minimal", k + 1));
                    }
                }
            }
        }
        let euler: i64 = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let d = t.rep().total_dim() as i64;
                if k % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum();
        if euler != self.module.total_dim() as i64 {
            return Err("alternating dimension sum differs from the module dimension".into());
        }
        Ok(())
    }
}

/// Minimal projective resolution of any representation, by iterated
/// projective covers and kernels.
pub fn minimal_resolution(p: &StringPresentation, m: &Representation) -> ChainResolution {
    let mut res = ChainResolution {
        module: m.clone(),
        terms: Vec::new(),
        augmentation: Vec::new(),
        differentials: Vec::new(),
    };
    // current module to cover, with an embedding of its spaces into the
    // previous term (None for the module itself)
    let mut current = m.clone();
    let mut embedding: Option<Vec<Matrix>> = None;
    while current.total_dim() > 0 {
        let mut tops = Vec::new();
        let mut images = Vec::new();
        for v in p.vertices() {
            let incoming = p.incoming(v);
            let mut rad = Matrix::zeros(current.dim(v), 0);
            for a in incoming {
                rad = rad.hcat(current.map(a));
            }
            let comp = rad.complement_of_column_space();
            for c in 0..comp.cols() {
                tops.push(v);
                images.push(comp.column(c));
            }
        }
        let free = FreeModule::new(p, tops);
        let pi = free.morphism(&current, &images);
        match &embedding {
            None => res.augmentation = images.clone(),
            Some(emb) => {
                let lifted = images
                    .iter()
                    .zip(free.tops())
                    .map(|(x, a)| emb[a.0].apply(x))
                    .collect();
                res.differentials.push(lifted);
            }
        }
        let kernels: Vec<Matrix> = pi.iter().map(Matrix::kernel).collect();
        let dims: Vec<usize> = kernels.iter().map(Matrix::cols).collect();
        let maps: Vec<Matrix> = p
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, arrow)| {
                let ks = &kernels[arrow.source.0];
                let kt = &kernels[arrow.target.0];
                let moved = free.rep().map(ArrowId(ai)).mul(ks);
                kt.solve_matrix(&moved)
                    .expect("kernel is a subrepresentation")
            })
            .collect();
        current = Representation::from_parts(dims, maps);
        embedding = Some(kernels);
        res.terms.push(free);
    }
    res
}

/// Cochain complex `Hom(F_•, n)` of a resolution.
#[derive(Debug, Clone)]
pub struct HomComplex {
    pub dims: Vec<usize>,
    /// `coboundaries[k]: C^k -> C^{k+1}`.
    pub coboundaries: Vec<Matrix>,
}

impl HomComplex {
    pub fn new(res: &ChainResolution, n: &Representation) -> Self {
        let dims = res.terms.iter().map(|t| t.hom_dim(n)).collect();
        let coboundaries = (0..res.differentials.len())
            .map(|k| pullback(&res.terms[k + 1], &res.terms[k], &res.differentials[k], n))
            .collect();
        HomComplex { dims, coboundaries }
    }

    fn outgoing(&self, i: usize) -> Option<&Matrix> {
        self.coboundaries.get(i)
    }

    fn incoming(&self, i: usize) -> Option<&Matrix> {
        if i == 0 {
            None
        } else {
            self.coboundaries.get(i - 1)
        }
    }

    pub fn cohomology_dim(&self, i: usize) -> usize {
        let Some(&d) = self.dims.get(i) else {
            return 0;
        };
        let out = self.outgoing(i).map_or(0, Matrix::rank);
        let inc = self.incoming(i).map_or(0, Matrix::rank);
        d - out - inc
    }

    /// Basis of `Z^i` as columns.
    pub fn cocycles(&self, i: usize) -> Matrix {
        match self.outgoing(i) {
            Some(d) => d.kernel(),
            None => Matrix::identity(self.dims.get(i).copied().unwrap_or(0)),
        }
    }

    /// Spanning set of `B^i` as columns.
    pub fn coboundaries_into(&self, i: usize) -> Matrix {
        match self.incoming(i) {
            Some(d) => d.clone(),
            None => Matrix::zeros(self.dims.get(i).copied().unwrap_or(0), 0),
        }
    }

    pub fn is_complex(&self) -> bool {
        self.coboundaries
            .windows(2)
            .all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// `Σ (-1)^k dim C^k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, d)| if k % 2 == 0 { *d as i64 } else { -(*d as i64) })
            .sum()
    }
}

/// Nonzero paths `z ⇝ a`, the basis of `Hom(P(a), P(z))`.
pub fn hom_basis(p: &StringPresentation, a: Vertex, z: Vertex) -> Vec<Path> {
    p.nonzero_paths_between(z, a)
}

pub fn hom_dim(p: &StringPresentation, a: Vertex, z: Vertex) -> usize {
    hom_basis(p, a, z).len()
}

/// The map `I(c) -> I(b)` induced by an arrow `β: b -> c`: `(qβ)* ↦ q*`.
pub fn arrow_injective_map(p: &StringPresentation, beta: ArrowId) -> Vec<Matrix> {
    let (b, c) = (p.arrow(beta).source, p.arrow(beta).target);
    let to_c = p.nonzero_paths_to(c);
    let to_b = p.nonzero_paths_to(b);
    p.vertices()
        .map(|u| {
            let src: Vec<&Path> = to_c.iter().filter(|q| q.source == u).collect();
            let tgt: Vec<&Path> = to_b.iter().filter(|q| q.source == u).collect();
            let mut m = Matrix::zeros(tgt.len(), src.len());
            for (i, q) in src.iter().enumerate() {
                if q.arrows.last() == Some(&beta) {
                    let prefix = &q.arrows[..q.arrows.len() - 1];
                    let j = tgt
                        .iter()
                        .position(|r| r.arrows == prefix)
                        .expect("prefix is nonzero");
                    m.set(j, i, 1);
                }
            }
            m
        })
        .collect()
}

/// Degreewise generator images of a chain map `F -> G` between resolutions.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub components: Vec<Vec<Vec<u32>>>,
}

/// Lift a module map `h: F.module -> G.module` (vertexwise matrices) to a
/// chain map between projective resolutions by solving the commutation
/// equations degree by degree.
pub fn lift_chain_map(
    f: &ChainResolution,
    g: &ChainResolution,
    h: &[Matrix],
    order: PivotOrder,
) -> ChainMap {
    let mut components: Vec<Vec<Vec<u32>>> = Vec::new();
    let eps_f = f
        .terms
        .first()
        .map(|t| t.morphism(&f.module, &f.augmentation));
    for (k, term) in f.terms.iter().enumerate() {
        let prev: Option<Vec<Matrix>> = if k == 0 {
            None
        } else {
            g.terms
                .get(k - 1)
                .map(|gt| f.terms[k - 1].morphism(gt.rep(), &components[k - 1]))
        };
        let system: Option<Vec<Matrix>> = match (k, g.terms.get(k)) {
            (_, None) => None,
            (0, Some(g0)) => Some(g0.morphism(&g.module, &g.augmentation)),
            (_, Some(gk)) => Some(gk.morphism(g.terms[k - 1].rep(), &g.differentials[k - 1])),
        };
        let mut comp = Vec::with_capacity(term.rank());
        for (j, a) in term.tops().iter().enumerate() {
            let target = if k == 0 {
                let eps = eps_f.as_ref().expect("nonempty resolution");
                h[a.0].apply(&eps[a.0].apply(&term.generator(j)))
            } else {
                match &prev {
                    Some(pm) => pm[a.0].apply(&f.differentials[k - 1][j]),
                    None => Vec::new(),
                }
            };
            match &system {
                Some(m) => comp.push(
                    m[a.0]
                        .solve_with(&target, order)
                        .expect("lifting problem is solvable"),
                ),
                None => {
                    assert!(
                        target.iter().all(|x| *x == 0),
                        "nonzero obstruction past the end of the target resolution"
                    );
                    comp.push(Vec::new());
                }
            }
        }
        components.push(comp);
    }
    ChainMap { components }
}

impl ChainMap {
    /// Residual check of the defining equations `ε_G φ_0 = h ε_F` and
    /// `d_G φ_k = φ_{k-1} d_F`.
    pub fn commutes(&self, f: &ChainResolution, g: &ChainResolution, h: &[Matrix]) -> bool {
        let Some(f0) = f.terms.first() else {
            return true;
        };
        let nv = h.len();
        let eps_f = f0.morphism(&f.module, &f.augmentation);
        let Some(g0) = g.terms.first() else {
            return (0..nv).all(|v| h[v].mul(&eps_f[v]).is_zero());
        };
        let phi0 = f0.morphism(g0.rep(), &self.components[0]);
        let eps_g = g0.morphism(&g.module, &g.augmentation);
        if (0..nv).any(|v| eps_g[v].mul(&phi0[v]) != h[v].mul(&eps_f[v])) {
            return false;
        }
        for k in 1..f.terms.len() {
            let Some(gprev) = g.terms.get(k - 1) else {
                break;
            };
            let phiprev = f.terms[k - 1].morphism(gprev.rep(), &self.components[k - 1]);
            let df = f.terms[k].morphism(f.terms[k - 1].rep(), &f.differentials[k - 1]);
            match g.terms.get(k) {
                Some(gk) => {
                    let phik = f.terms[k].morphism(gk.rep(), &self.components[k]);
                    let dg = gk.morphism(gprev.rep(), &g.differentials[k - 1]);
                    if (0..nv).any(|v| dg[v].mul(&phik[v]) != phiprev[v].mul(&df[v])) {
                        return false;
                    }
                }
                None => {
                    if (0..nv).any(|v| !phiprev[v].mul(&df[v]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `dim e_z · top(Ext^i(DA, A)) · e_c`, indexed `[z][c]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleTop {
    pub degree: usize,
    pub entries: Vec<Vec<usize>>,
}

impl BimoduleTop {
    pub fn total(&self) -> usize {
        self.entries.iter().flatten().sum()
    }

    /// Nonzero entries as `(z, c, multiplicity)`.
    pub fn nonzero(&self) -> Vec<(Vertex, Vertex, usize)> {
        let mut out = Vec::new();
        for (z, row) in self.entries.iter().enumerate() {
            for (c, m) in row.iter().enumerate() {
                if *m > 0 {
                    out.push((Vertex(z), Vertex(c), *m));
                }
            }
        }
        out
    }
}

/// Per-presentation cache of all resolutions and complexes the oracle uses.
pub struct Oracle<'a> {
    p: &'a StringPresentation,
    op: StringPresentation,
    proj: Vec<FreeModule>,
    proj_op: Vec<FreeModule>,
    inj_res: Vec<ChainResolution>,
    inj_res_op: Vec<ChainResolution>,
    gldim: usize,
}

impl<'a> Oracle<'a> {
    pub fn new(p: &'a StringPresentation) -> Self {
        let op = p.opposite();
        let proj = p.vertices().map(|v| FreeModule::new(p, vec![v])).collect();
        let proj_op = op
            .vertices()
            .map(|v| FreeModule::new(&op, vec![v]))
            .collect();
        let inj_res = p
            .vertices()
            .map(|c| minimal_resolution(p, &inj_rep(p, c)))
            .collect();
        let inj_res_op = op
            .vertices()
            .map(|z| minimal_resolution(&op, &inj_rep(&op, z)))
            .collect();
        let gldim = p
            .vertices()
            .map(|v| minimal_resolution(p, &simple_rep(p, v)).length())
            .max()
            .unwrap_or(0);
        Oracle {
            p,
            op,
            proj,
            proj_op,
            inj_res,
            inj_res_op,
            gldim,
        }
    }

    pub fn presentation(&self) -> &StringPresentation {
        self.p
    }

    pub fn global_dimension(&self) -> usize {
        self.gldim
    }

    /// Minimal projective resolution of `I(c)`.
    pub fn injective_resolution(&self, c: Vertex) -> &ChainResolution {
        &self.inj_res[c.0]
    }

    /// Minimal projective resolution of the opposite injective at `z`, the
    /// dual of the minimal injective coresolution of `P(z)`.
    pub fn projective_coresolution_dual(&self, z: Vertex) -> &ChainResolution {
        &self.inj_res_op[z.0]
    }

    pub fn opposite(&self) -> &StringPresentation {
        &self.op
    }

    fn complex(&self, c: Vertex, z: Vertex) -> HomComplex {
        HomComplex::new(&self.inj_res[c.0], self.proj[z.0].rep())
    }

    /// `dim Ext^i(I(c), P(z))` from the projective resolution of `I(c)`.
    pub fn ext_dim_projective_model(&self, c: Vertex, z: Vertex, i: usize) -> usize {
        self.complex(c, z).cohomology_dim(i)
    }

    /// The same group computed from the coresolution of `P(z)`, realised
    /// over the opposite algebra as `Ext^i(I°(z), P°(c))`.
    pub fn ext_dim_injective_model(&self, c: Vertex, z: Vertex, i: usize) -> usize {
        HomComplex::new(&self.inj_res_op[z.0], self.proj_op[c.0].rep()).cohomology_dim(i)
    }

    /// Both models; callers assert equality.
    pub fn ext_dims(&self, c: Vertex, z: Vertex, i: usize) -> (usize, usize) {
        (
            self.ext_dim_projective_model(c, z, i),
            self.ext_dim_injective_model(c, z, i),
        )
    }

    pub fn ext_dim(&self, c: Vertex, z: Vertex, i: usize) -> usize {
        self.ext_dim_projective_model(c, z, i)
    }

    /// Hom complex of `I(c)` against `P(z)`.
    pub fn hom_complex(&self, c: Vertex, z: Vertex) -> HomComplex {
        self.complex(c, z)
    }

    /// Vertexwise matrices of `P(y) -> P(z)`, left multiplication by `α: z -> y`.
    fn left_multiplication(&self, alpha: ArrowId) -> Vec<Matrix> {
        let (z, y) = (self.p.arrow(alpha).source, self.p.arrow(alpha).target);
        let pz = &self.proj[z.0];
        let path = self.p.path_of(&[alpha]).expect("single arrow");
        let img = pz.element(y, &[(0, &path, 1)]);
        self.proj[y.0].morphism(pz.rep(), &[img])
    }

    /// `Hom(F_i, P(y)) -> Hom(F_i, P(z))` induced by `α: z -> y`, with
    /// `F` the resolution of `I(c)`.
    fn left_action(&self, c: Vertex, alpha: ArrowId, i: usize) -> Matrix {
        let y = self.p.arrow(alpha).target;
        let z = self.p.arrow(alpha).source;
        let lam = self.left_multiplication(alpha);
        let term = &self.inj_res[c.0].terms[i];
        let (off_s, rows) = term.hom_offsets(self.proj[z.0].rep());
        let (off_t, cols) = term.hom_offsets(self.proj[y.0].rep());
        let mut m = Matrix::zeros(rows, cols);
        for (j, a) in term.tops().iter().enumerate() {
            let block = &lam[a.0];
            for r in 0..block.rows() {
                for col in 0..block.cols() {
                    m.set(off_s[j] + r, off_t[j] + col, block.get(r, col));
                }
            }
        }
        m
    }

    /// Lift of `I(c) -> I(b)` for `β: b -> c` to the projective resolutions.
    pub fn arrow_lift(&self, beta: ArrowId, order: PivotOrder) -> ChainMap {
        let (b, c) = (self.p.arrow(beta).source, self.p.arrow(beta).target);
        let h = arrow_injective_map(self.p, beta);
        lift_chain_map(&self.inj_res[c.0], &self.inj_res[b.0], &h, order)
    }

    /// `Hom(F^b_i, P(z)) -> Hom(F^c_i, P(z))` by precomposition with a lift.
    fn right_action(&self, beta: ArrowId, lift: &ChainMap, z: Vertex, i: usize) -> Matrix {
        let (b, c) = (self.p.arrow(beta).source, self.p.arrow(beta).target);
        let fc = &self.inj_res[c.0];
        let fb = &self.inj_res[b.0];
        let n = self.proj[z.0].rep();
        match fb.terms.get(i) {
            Some(tb) => pullback(&fc.terms[i], tb, &lift.components[i], n),
            None => Matrix::zeros(fc.terms[i].hom_dim(n), 0),
        }
    }

    /// Top dimensions with both actions, the left action only and the
    /// right action only.
    pub fn top_dims(&self, z: Vertex, c: Vertex, i: usize, order: PivotOrder) -> TopDims {
        let fc = &self.inj_res[c.0];
        if i >= fc.terms.len() {
            return TopDims::default();
        }
        let cx = self.complex(c, z);
        let zi = cx.cocycles(i);
        let bi = cx.coboundaries_into(i);
        let mut left = bi.clone();
        for alpha in self.p.outgoing(z) {
            let y = self.p.arrow(alpha).target;
            let zy = self.complex(c, y).cocycles(i);
            left = left.hcat(&self.left_action(c, alpha, i).mul(&zy));
        }
        let mut right = bi.clone();
        for beta in self.p.incoming(c) {
            let b = self.p.arrow(beta).source;
            let lift = self.arrow_lift(beta, order);
            let zb = self.complex(b, z).cocycles(i);
            right = right.hcat(&self.right_action(beta, &lift, z, i).mul(&zb));
        }
        let both = left.hcat(&right);
        let dz = zi.cols();
        TopDims {
            ext: dz - bi.rank(),
            left_top: dz - left.rank(),
            right_top: dz - right.rank(),
            bimodule_top: dz - both.rank(),
        }
    }

    pub fn bimodule_top_dims(&self, i: usize) -> BimoduleTop {
        self.bimodule_top_dims_with(i, PivotOrder::Forward)
    }

    pub fn bimodule_top_dims_with(&self, i: usize, order: PivotOrder) -> BimoduleTop {
        let n = self.p.vertex_count();
        let mut entries = vec![vec![0; n]; n];
        if i >= 2 {
            for z in self.p.vertices() {
                for c in self.p.vertices() {
                    entries[z.0][c.0] = self.top_dims(z, c, i, order).bimodule_top;
                }
            }
        }
        BimoduleTop { degree: i, entries }
    }

    /// All `(z, c, i)` with multiplicity, sorted.
    pub fn new_arrow_multiset(&self) -> Vec<(Vertex, Vertex, usize)> {
        let mut out = Vec::new();
        for i in 2..=self.gldim {
            for (z, c, m) in self.bimodule_top_dims(i).nonzero() {
                for _ in 0..m {
                    out.push((z, c, i));
                }
            }
        }
        out.sort();
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopDims {
    pub ext: usize,
    pub left_top: usize,
    pub right_top: usize,
    pub bimodule_top: usize,
}

/// Multiset of new arrows of the higher relation extension, `(z, c, i)`.
pub fn oracle_new_arrow_multiset(p: &StringPresentation) -> Vec<(Vertex, Vertex, usize)> {
    Oracle::new(p).new_arrow_multiset()
}
