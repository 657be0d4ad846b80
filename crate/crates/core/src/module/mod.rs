//! Finite-dimensional left modules as representations: one vector space per
//! vertex and one matrix per basis element of the algebra.

mod decompose;
mod hom;
mod resolution;
mod tilting;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::FDAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, CoordinateSystem, Matrix, Scalar};

pub use decompose::{
    basic_algebra, decompose, endo_algebra, has_free_summand, is_basic, is_isomorphic, is_isomorphic_indecomposable,
    Decomposition, EndoAlgebra, Summand,
};
pub use hom::{hom_space, map_from_free, split_left_inverse, HomSpace};
pub use resolution::{
    ext, ext_classes, min_projective_resolution, projective_cover, radical_submodule, ExtDim, ExtGroup, Resolution,
};
pub use tilting::{tilting_module_check, Coresolution, PdValue, TiltingReport, TiltingVerdict};

struct ModuleData {
    algebra: Arc<FDAlgebra>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    actions: Vec<Matrix>,
    free: Option<Vec<usize>>,
}

/// A left module. Cloning is cheap.
#[derive(Clone)]
pub struct Module(Arc<ModuleData>);

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module{:?}", self.0.dims)
    }
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.0.algebra, &other.0.algebra)
            && self.0.dims == other.0.dims
            && self.0.actions == other.0.actions
    }
}

impl Eq for Module {}

pub(crate) fn same_algebra(a: &Arc<FDAlgebra>, b: &Arc<FDAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn offsets_of(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    out.push(0);
    for d in dims {
        acc += d;
        out.push(acc);
    }
    out
}

impl Module {
    /// Builds a module from one matrix per basis element, checking the axioms.
    pub fn new(algebra: &Arc<FDAlgebra>, dims: Vec<usize>, actions: Vec<Matrix>) -> Result<Self> {
        let m = Self::unchecked(algebra, dims, actions, None)?;
        m.validate()?;
        Ok(m)
    }

    fn unchecked(
        algebra: &Arc<FDAlgebra>,
        dims: Vec<usize>,
        actions: Vec<Matrix>,
        free: Option<Vec<usize>>,
    ) -> Result<Self> {
        if dims.len() != algebra.num_vertices() {
            return Err(Error::DimensionMismatch(format!(
                "{} vertex dimensions for {} vertices",
                dims.len(),
                algebra.num_vertices()
            )));
        }
        if actions.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for an algebra of dimension {}",
                actions.len(),
                algebra.dim()
            )));
        }
        for (b, m) in actions.iter().enumerate() {
            let (s, t) = (algebra.source(b), algebra.target(b));
            if m.rows() != dims[t] || m.cols() != dims[s] {
                return Err(Error::DimensionMismatch(format!(
                    "action of {} should be {}x{}",
                    algebra.labels()[b],
                    dims[t],
                    dims[s]
                )));
            }
        }
        let offsets = offsets_of(&dims);
        Ok(Module(Arc::new(ModuleData { algebra: algebra.clone(), dims, offsets, actions, free })))
    }

    /// Builds a module from matrices for the algebra generators (arrows for
    /// quiver algebras). Generators not listed act by zero.
    /// Skips the action axioms; only shapes are checked. Used for negative controls.
    #[doc(hidden)]
    pub fn new_unvalidated(algebra: &Arc<FDAlgebra>, dims: Vec<usize>, actions: Vec<Matrix>) -> Result<Self> {
        Self::unchecked(algebra, dims, actions, None)
    }

    pub fn from_generator_actions(
        algebra: &Arc<FDAlgebra>,
        dims: Vec<usize>,
        generator_actions: &[(String, Matrix)],
    ) -> Result<Self> {
        if dims.len() != algebra.num_vertices() {
            return Err(Error::DimensionMismatch("vertex dimension count".into()));
        }
        let gens = algebra.generators();
        let mut gmats: Vec<Matrix> =
            gens.iter().map(|&g| Matrix::zeros(dims[algebra.target(g)], dims[algebra.source(g)])).collect();
        for (label, m) in generator_actions {
            let b = algebra.label_index(label).ok_or_else(|| Error::UnknownArrow(label.clone()))?;
            let pos = gens
                .iter()
                .position(|&g| g == b)
                .ok_or_else(|| Error::InvalidPresentation(format!("{label} is not a generator of the algebra")))?;
            if m.rows() != gmats[pos].rows() || m.cols() != gmats[pos].cols() {
                return Err(Error::DimensionMismatch(format!("action of {label}")));
            }
            gmats[pos] = m.clone();
        }
        let words: Vec<Matrix> = algebra
            .words()
            .iter()
            .map(|w| {
                let mut acc = Matrix::identity(dims[w.vertex]);
                for &f in w.factors.iter().rev() {
                    acc = gmats[f].mul(&acc);
                }
                acc
            })
            .collect();
        let actions = (0..algebra.dim())
            .map(|b| {
                let mut m = Matrix::zeros(dims[algebra.target(b)], dims[algebra.source(b)]);
                for (w, c) in algebra.word_expansion(b) {
                    m.axpy(c, &words[*w]);
                }
                m
            })
            .collect();
        Self::new(algebra, dims, actions)
    }

    /// Checks the unit and multiplication axioms on all composable basis pairs.
    pub fn validate(&self) -> Result<()> {
        let a = self.algebra();
        for v in 0..a.num_vertices() {
            if self.action(a.idempotent(v)) != &Matrix::identity(self.dims()[v]) {
                return Err(Error::ActionAxiom(format!("e_{} does not act as the identity", a.vertices()[v])));
            }
        }
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                if a.source(x) != a.target(y) || a.is_idempotent_basis(x) || a.is_idempotent_basis(y) {
                    continue;
                }
                let lhs = self.action(x).mul(self.action(y));
                let rhs = self.combine(a.product(x, y), a.source(y), a.target(x));
                if lhs != rhs {
                    return Err(Error::ActionAxiom(format!("{}*{} is not respected", a.labels()[x], a.labels()[y])));
                }
            }
        }
        Ok(())
    }

    fn combine(&self, v: &crate::algebra::Sparse, s: usize, t: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dims()[t], self.dims()[s]);
        for (k, c) in v {
            m.axpy(c, self.action(*k));
        }
        m
    }

    /// The free module `A e_{g_1} + ... + A e_{g_r}`. At each vertex the basis
    /// lists summands in order, each by its basis elements of `e_j A e_{g_k}`.
    pub fn free(algebra: &Arc<FDAlgebra>, gens: &[usize]) -> Self {
        let a = algebra;
        let nv = a.num_vertices();
        let dims: Vec<usize> = (0..nv).map(|j| gens.iter().map(|&g| a.block(g, j).len()).sum()).collect();
        // position of (summand k, basis element b) inside its vertex space
        let local = |k: usize, b: usize| -> usize {
            let j = a.target(b);
            gens[..k].iter().map(|&g| a.block(g, j).len()).sum::<usize>() + a.position_in_block(b)
        };
        let actions = (0..a.dim())
            .map(|x| {
                let (s, t) = (a.source(x), a.target(x));
                let mut m = Matrix::zeros(dims[t], dims[s]);
                for (k, &g) in gens.iter().enumerate() {
                    for &b in a.block(g, s) {
                        for (p, c) in a.product(x, b) {
                            m.set(local(k, *p), local(k, b), c.clone());
                        }
                    }
                }
                m
            })
            .collect();
        Self::unchecked(a, dims, actions, Some(gens.to_vec())).expect("shapes are consistent")
    }

    pub fn projective(algebra: &Arc<FDAlgebra>, v: usize) -> Self {
        Self::free(algebra, &[v])
    }

    pub fn projective_named(algebra: &Arc<FDAlgebra>, vertex: &str) -> Result<Self> {
        Ok(Self::projective(algebra, algebra.vertex_index(vertex)?))
    }

    pub fn regular(algebra: &Arc<FDAlgebra>) -> Self {
        Self::free(algebra, &(0..algebra.num_vertices()).collect::<Vec<_>>())
    }

    /// Top of the projective at `v`.
    pub fn simple(algebra: &Arc<FDAlgebra>, v: usize) -> Self {
        let a = algebra;
        let mut dims = vec![0; a.num_vertices()];
        dims[v] = 1;
        let actions = (0..a.dim())
            .map(|b| {
                let (s, t) = (a.source(b), a.target(b));
                if b == a.idempotent(v) {
                    Matrix::identity(1)
                } else {
                    Matrix::zeros(dims[t], dims[s])
                }
            })
            .collect();
        let naive = Self::unchecked(a, dims, actions, None).expect("shapes are consistent");
        if naive.validate().is_ok() {
            return naive;
        }
        // non-basic vertex: take the top of the projective
        let p = Self::projective(a, v);
        let (_, incl) = resolution::radical_submodule(&p);
        let bases: Vec<Vec<Vec<Scalar>>> = incl.components.iter().map(|m| m.columns()).collect();
        p.quotient(&bases).0.forget_free()
    }

    pub fn zero(algebra: &Arc<FDAlgebra>) -> Self {
        Self::free(algebra, &[])
    }

    pub fn algebra(&self) -> &Arc<FDAlgebra> {
        &self.0.algebra
    }

    pub fn dims(&self) -> &[usize] {
        &self.0.dims
    }

    pub fn total_dim(&self) -> usize {
        *self.0.offsets.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn offset(&self, v: usize) -> usize {
        self.0.offsets[v]
    }

    pub fn action(&self, b: usize) -> &Matrix {
        &self.0.actions[b]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.0.actions
    }

    /// Generator vertices when the module was built as a free module.
    pub fn free_generators(&self) -> Option<&[usize]> {
        self.0.free.as_deref()
    }

    /// Vertex of each global basis index.
    pub fn vertex_of(&self, i: usize) -> usize {
        self.0.offsets.partition_point(|&o| o <= i) - 1
    }

    /// For a free module: summand and algebra basis element of global index `i`.
    pub fn free_basis_element(&self, i: usize) -> Option<(usize, usize)> {
        let gens = self.free_generators()?;
        let a = self.algebra();
        let j = self.vertex_of(i);
        let mut local = i - self.offset(j);
        for (k, &g) in gens.iter().enumerate() {
            let blk = a.block(g, j);
            if local < blk.len() {
                return Some((k, blk[local]));
            }
            local -= blk.len();
        }
        None
    }

    /// Global index of the basis element `(summand k, algebra basis element b)` of a free module.
    pub fn free_index(&self, k: usize, b: usize) -> Option<usize> {
        let gens = self.free_generators()?;
        let a = self.algebra();
        if a.source(b) != gens[k] {
            return None;
        }
        let j = a.target(b);
        let before: usize = gens[..k].iter().map(|&h| a.block(h, j).len()).sum();
        Some(self.offset(j) + before + a.position_in_block(b))
    }

    /// Global index of generator `k` of a free module.
    pub fn free_generator_index(&self, k: usize) -> Option<usize> {
        let gens = self.free_generators()?;
        let a = self.algebra();
        let g = gens[k];
        let before: usize = gens[..k].iter().map(|&h| a.block(h, g).len()).sum();
        Some(self.offset(g) + before + a.position_in_block(a.idempotent(g)))
    }

    /// Action of basis element `b` on a global coordinate vector.
    pub fn act(&self, b: usize, v: &[Scalar]) -> Vec<Scalar> {
        let a = self.algebra();
        let (s, t) = (a.source(b), a.target(b));
        let part = &v[self.offset(s)..self.offset(s + 1)];
        let img = self.action(b).mul_vec(part);
        let mut out = vec![Scalar::zero(); self.total_dim()];
        out[self.offset(t)..self.offset(t + 1)].clone_from_slice(&img);
        out
    }

    /// Action of an algebra element given in basis coordinates.
    pub fn act_element(&self, x: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.total_dim()];
        for (b, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = linalg::vec_add(&out, &linalg::vec_scale(&self.act(b, v), c));
            }
        }
        out
    }

    /// Action of `b` as a `total x total` matrix.
    pub fn action_global(&self, b: usize) -> Matrix {
        let a = self.algebra();
        let mut m = Matrix::zeros(self.total_dim(), self.total_dim());
        m.set_block(self.offset(a.target(b)), self.offset(a.source(b)), self.action(b));
        m
    }

    /// Vertex part `e_v x` of a global vector, in local coordinates.
    pub fn vertex_part(&self, v: usize, x: &[Scalar]) -> Vec<Scalar> {
        x[self.offset(v)..self.offset(v + 1)].to_vec()
    }

    pub fn embed_vertex(&self, v: usize, local: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.total_dim()];
        out[self.offset(v)..self.offset(v + 1)].clone_from_slice(local);
        out
    }

    pub fn identity(&self) -> ModuleMap {
        ModuleMap {
            source: self.clone(),
            target: self.clone(),
            components: self.dims().iter().map(|&d| Matrix::identity(d)).collect(),
        }
    }

    /// Closure of the given per-vertex vectors (local coordinates) under the action.
    pub fn generated_subspaces(&self, seeds: &[Vec<Vec<Scalar>>]) -> Vec<Vec<Vec<Scalar>>> {
        let a = self.algebra();
        let nv = a.num_vertices();
        let mut spans: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); nv];
        let mut queue: Vec<(usize, Vec<Scalar>)> = Vec::new();
        let push =
            |spans: &mut Vec<Vec<Vec<Scalar>>>, queue: &mut Vec<(usize, Vec<Scalar>)>, v: usize, x: Vec<Scalar>| {
                if linalg::is_zero_vec(&x) {
                    return;
                }
                let mut cand = spans[v].clone();
                cand.push(x.clone());
                if linalg::independent_subset(&cand, self.dims()[v]).len() == cand.len() {
                    spans[v].push(x.clone());
                    queue.push((v, x));
                }
            };
        for (v, list) in seeds.iter().enumerate() {
            for x in list {
                push(&mut spans, &mut queue, v, x.clone());
            }
        }
        while let Some((v, x)) = queue.pop() {
            for &g in a.generators() {
                if a.source(g) != v {
                    continue;
                }
                let y = self.action(g).mul_vec(&x);
                push(&mut spans, &mut queue, a.target(g), y);
            }
        }
        spans
    }

    /// Submodule spanned per vertex by the given (action-closed) vectors.
    pub fn submodule(&self, bases: &[Vec<Vec<Scalar>>]) -> (Module, ModuleMap) {
        let a = self.algebra();
        let nv = a.num_vertices();
        let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let coords: Vec<Option<CoordinateSystem>> =
            (0..nv).map(|v| (!bases[v].is_empty()).then(|| CoordinateSystem::new(&bases[v], self.dims()[v]))).collect();
        let actions = (0..a.dim())
            .map(|b| {
                let (s, t) = (a.source(b), a.target(b));
                let cols: Vec<Vec<Scalar>> = bases[s]
                    .iter()
                    .map(|x| {
                        let y = self.action(b).mul_vec(x);
                        match &coords[t] {
                            Some(cs) => cs.coords(&y).expect("subspaces are closed under the action"),
                            None => {
                                debug_assert!(linalg::is_zero_vec(&y));
                                vec![]
                            }
                        }
                    })
                    .collect();
                Matrix::from_columns(&cols, dims[t]).expect("lengths")
            })
            .collect();
        let sub = Module::unchecked(a, dims.clone(), actions, None).expect("shapes");
        let components = (0..nv).map(|v| Matrix::from_columns(&bases[v], self.dims()[v]).expect("lengths")).collect();
        let incl = ModuleMap { source: sub.clone(), target: self.clone(), components };
        (sub, incl)
    }

    /// Quotient by per-vertex subspaces that form a submodule.
    pub fn quotient(&self, bases: &[Vec<Vec<Scalar>>]) -> (Module, ModuleMap) {
        let a = self.algebra();
        let nv = a.num_vertices();
        let qs: Vec<linalg::SubspaceQuotient> =
            (0..nv).map(|v| linalg::subspace_quotient(self.dims()[v], &bases[v]).expect("lengths")).collect();
        let dims: Vec<usize> = qs.iter().map(|q| q.quotient_dim()).collect();
        let actions = (0..a.dim())
            .map(|b| {
                let (s, t) = (a.source(b), a.target(b));
                qs[t].projection.mul(self.action(b)).mul(&qs[s].section())
            })
            .collect();
        let q = Module::unchecked(a, dims, actions, None).expect("shapes");
        let components = qs.iter().map(|q| q.projection.clone()).collect();
        let proj = ModuleMap { source: self.clone(), target: q.clone(), components };
        (q, proj)
    }

    /// Direct sum with inclusions and projections. Free modules stay free.
    pub fn direct_sum(mods: &[Module]) -> Result<(Module, Vec<ModuleMap>, Vec<ModuleMap>)> {
        let first = mods.first().ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
        let a = first.algebra().clone();
        if mods.iter().any(|m| !same_algebra(m.algebra(), &a)) {
            return Err(Error::AlgebraMismatch);
        }
        let nv = a.num_vertices();
        let dims: Vec<usize> = (0..nv).map(|v| mods.iter().map(|m| m.dims()[v]).sum()).collect();
        let actions = (0..a.dim())
            .map(|b| {
                let (s, t) = (a.source(b), a.target(b));
                let mut m = Matrix::zeros(dims[t], dims[s]);
                let (mut r, mut c) = (0, 0);
                for x in mods {
                    m.set_block(r, c, x.action(b));
                    r += x.dims()[t];
                    c += x.dims()[s];
                }
                m
            })
            .collect();
        let free = mods
            .iter()
            .map(|m| m.free_generators().map(|g| g.to_vec()))
            .collect::<Option<Vec<_>>>()
            .map(|v| v.concat());
        let sum = Module::unchecked(&a, dims.clone(), actions, free)?;
        let mut incl = Vec::new();
        let mut proj = Vec::new();
        let mut before = vec![0; nv];
        for x in mods {
            let mut ic = Vec::new();
            let mut pc = Vec::new();
            for v in 0..nv {
                let mut i = Matrix::zeros(dims[v], x.dims()[v]);
                let mut p = Matrix::zeros(x.dims()[v], dims[v]);
                for k in 0..x.dims()[v] {
                    i.set(before[v] + k, k, Scalar::one());
                    p.set(k, before[v] + k, Scalar::one());
                }
                ic.push(i);
                pc.push(p);
                before[v] += x.dims()[v];
            }
            incl.push(ModuleMap { source: x.clone(), target: sum.clone(), components: ic });
            proj.push(ModuleMap { source: sum.clone(), target: x.clone(), components: pc });
        }
        Ok((sum, incl, proj))
    }

    pub fn power(&self, n: usize) -> Module {
        if n == 0 {
            return Module::zero(self.algebra());
        }
        Module::direct_sum(&vec![self.clone(); n]).expect("same algebra").0
    }

    /// `D X = Hom_k(X, k)` as a module over the given opposite algebra.
    pub fn dual_over(&self, opposite: &Arc<FDAlgebra>) -> Result<Module> {
        let a = self.algebra();
        if opposite.dim() != a.dim() || opposite.num_vertices() != a.num_vertices() {
            return Err(Error::AlgebraMismatch);
        }
        for b in 0..a.dim() {
            if opposite.source(b) != a.target(b) || opposite.target(b) != a.source(b) {
                return Err(Error::AlgebraMismatch);
            }
        }
        let actions = self.0.actions.iter().map(|m| m.transpose()).collect();
        Module::unchecked(opposite, self.dims().to_vec(), actions, None)
    }

    pub fn dual(&self) -> Module {
        let op = Arc::new(self.algebra().opposite());
        self.dual_over(&op).expect("opposite algebra matches")
    }

    /// Same module with the free-module bookkeeping dropped.
    pub fn forget_free(&self) -> Module {
        Module::unchecked(self.algebra(), self.dims().to_vec(), self.0.actions.clone(), None).expect("shapes")
    }
}

/// A module homomorphism, one matrix per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    pub components: Vec<Matrix>,
}

impl ModuleMap {
    pub fn new(source: &Module, target: &Module, components: Vec<Matrix>) -> Result<Self> {
        let f = ModuleMap { source: source.clone(), target: target.clone(), components };
        f.validate()?;
        Ok(f)
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        let components = source.dims().iter().zip(target.dims()).map(|(&s, &t)| Matrix::zeros(t, s)).collect();
        ModuleMap { source: source.clone(), target: target.clone(), components }
    }

    /// Builds a map from a `total x total` matrix that is block diagonal by vertex.
    pub fn from_global(source: &Module, target: &Module, m: &Matrix) -> Self {
        let components = (0..source.dims().len())
            .map(|v| m.block(target.offset(v), source.offset(v), target.dims()[v], source.dims()[v]))
            .collect();
        ModuleMap { source: source.clone(), target: target.clone(), components }
    }

    /// Checks shapes and that the map commutes with every generator action.
    pub fn validate(&self) -> Result<()> {
        if !same_algebra(self.source.algebra(), self.target.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let a = self.source.algebra();
        for (v, m) in self.components.iter().enumerate() {
            if m.rows() != self.target.dims()[v] || m.cols() != self.source.dims()[v] {
                return Err(Error::DimensionMismatch(format!("map component at {}", a.vertices()[v])));
            }
        }
        for &g in a.generators() {
            let (s, t) = (a.source(g), a.target(g));
            let lhs = self.target.action(g).mul(&self.components[s]);
            let rhs = self.components[t].mul(self.source.action(g));
            if lhs != rhs {
                return Err(Error::ActionAxiom(format!("map does not commute with {}", a.labels()[g])));
            }
        }
        Ok(())
    }

    pub fn global(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.total_dim(), self.source.total_dim());
        for (v, c) in self.components.iter().enumerate() {
            m.set_block(self.target.offset(v), self.source.offset(v), c);
        }
        m
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.target.total_dim());
        for (v, c) in self.components.iter().enumerate() {
            out.extend(c.mul_vec(&self.source.vertex_part(v, x)));
        }
        out
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: other.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().zip(&other.components).map(|(f, g)| f.mul(g)).collect(),
        }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().zip(&other.components).map(|(f, g)| f.add(g)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(|f| f.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank()).sum()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.total_dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.total_dim()
    }

    pub fn is_iso(&self) -> bool {
        self.source.total_dim() == self.target.total_dim() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        let components = self.components.iter().map(|c| c.inverse()).collect::<Option<Vec<_>>>()?;
        Some(ModuleMap { source: self.target.clone(), target: self.source.clone(), components })
    }

    /// Flattened coordinates, vertex by vertex, row-major.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.components.iter().flat_map(|c| c.entries().iter().cloned()).collect()
    }

    pub fn kernel(&self) -> (Module, ModuleMap) {
        let bases: Vec<Vec<Vec<Scalar>>> = self.components.iter().map(|c| c.kernel()).collect();
        self.source.submodule(&bases)
    }

    pub fn image(&self) -> (Module, ModuleMap) {
        let bases: Vec<Vec<Vec<Scalar>>> = self.components.iter().map(|c| c.column_space()).collect();
        self.target.submodule(&bases)
    }

    pub fn cokernel(&self) -> (Module, ModuleMap) {
        let bases: Vec<Vec<Vec<Scalar>>> = self.components.iter().map(|c| c.column_space()).collect();
        self.target.quotient(&bases)
    }

    /// Map between direct sums given by a block matrix of maps `blocks[i][j]: X_j -> Y_i`.
    pub fn from_blocks(
        sources: &[Module],
        targets: &[Module],
        blocks: &[Vec<ModuleMap>],
    ) -> Result<(Module, Module, ModuleMap)> {
        let (x, _, _) = Module::direct_sum(sources)?;
        let (y, _, _) = Module::direct_sum(targets)?;
        let nv = x.dims().len();
        let mut components: Vec<Matrix> = (0..nv).map(|v| Matrix::zeros(y.dims()[v], x.dims()[v])).collect();
        for v in 0..nv {
            let mut r = 0;
            for (i, t) in targets.iter().enumerate() {
                let mut c = 0;
                for (j, s) in sources.iter().enumerate() {
                    components[v].set_block(r, c, &blocks[i][j].components[v]);
                    c += s.dims()[v];
                }
                r += t.dims()[v];
            }
        }
        let f = ModuleMap { source: x.clone(), target: y.clone(), components };
        Ok((x, y, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::int;

    #[test]
    fn projective_dims() {
        let a = fixtures::kr(3, 2);
        assert_eq!(Module::projective_named(&a, "x").unwrap().dims(), &[3, 2]);
        assert_eq!(Module::projective_named(&a, "y").unwrap().dims(), &[0, 2]);
        let a2 = fixtures::a2();
        assert_eq!(Module::projective_named(&a2, "y").unwrap().dims(), &[0, 1]);
        assert!(matches!(Module::projective_named(&a2, "z"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn free_modules_validate() {
        for a in [fixtures::kr(3, 2), fixtures::kr_variant(3, 3, 2, Some(1)), fixtures::matrix_algebra()] {
            Module::regular(&a).validate().unwrap();
        }
    }

    #[test]
    fn generator_actions_reject_bad_relation() {
        let a = fixtures::kr(3, 2);
        // theta acting invertibly breaks theta^2 = 0
        let err = Module::from_generator_actions(
            &a,
            vec![0, 1],
            &[("theta".into(), Matrix::from_rows(&[vec![int(1)]], 1).unwrap())],
        )
        .unwrap_err();
        assert!(matches!(err, Error::ActionAxiom(_)));
    }

    #[test]
    fn dual_of_simple_is_simple() {
        let a = fixtures::kr(3, 2);
        let s = Module::simple(&a, 0);
        let d = s.dual();
        assert_eq!(d.dims(), &[1, 0]);
        d.validate().unwrap();
        let reg = Module::regular(&a).dual();
        reg.validate().unwrap();
        assert_eq!(reg.dims(), &[3, 4]);
    }

    #[test]
    fn kernels_and_cokernels() {
        let a = fixtures::kr(3, 2);
        let px = Module::projective(&a, 0);
        let (rad, incl) = radical_submodule(&px);
        assert_eq!(rad.dims(), &[2, 2]);
        let (top, _) = incl.cokernel();
        assert_eq!(top.dims(), &[1, 0]);
        top.validate().unwrap();
        rad.validate().unwrap();
        incl.validate().unwrap();
    }
}
