//! The recollement of `A-mod` induced by an idempotent `e`: the functors
//! `i^*, i_*, i^!` to and from `A/AeA`, and `j_!, j^*, j_*` to and from `eAe`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{FDAlgebra, Sparse, TriangularPresentation};
use crate::ar::is_projective;
use crate::error::{Error, Result};
use crate::linalg::{self, CoordinateSystem, Matrix, Scalar, SubspaceQuotient};
use crate::module::{hom_space, is_isomorphic, projective_cover, same_algebra, Module, ModuleMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    IUpper,
    ILower,
    IShriek,
    JShriek,
    JUpper,
    JLower,
}

impl Functor {
    pub const ALL: [Functor; 6] =
        [Functor::IUpper, Functor::ILower, Functor::IShriek, Functor::JShriek, Functor::JUpper, Functor::JLower];

    pub fn name(&self) -> &'static str {
        match self {
            Functor::IUpper => "i_upper",
            Functor::ILower => "i_lower",
            Functor::IShriek => "i_shriek",
            Functor::JShriek => "j_shriek",
            Functor::JUpper => "j_upper",
            Functor::JLower => "j_lower",
        }
    }

    pub fn parse(s: &str) -> Option<Functor> {
        Functor::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which algebra a functor's input lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Ambient,
    Corner,
    Quotient,
}

#[derive(Clone, Debug)]
pub struct IdempotentRecollement {
    pub ambient: Arc<FDAlgebra>,
    pub e_vertices: Vec<usize>,
    pub f_vertices: Vec<usize>,
    /// `eAe` with the basis map into `A`.
    pub corner: Arc<FDAlgebra>,
    pub corner_basis: Vec<usize>,
    /// `A/AeA` with representative basis elements and surviving vertices of `A`.
    pub quotient: Arc<FDAlgebra>,
    pub quotient_reps: Vec<usize>,
    pub quotient_vertices: Vec<usize>,
    /// Image of every basis element of `A` in `A/AeA`.
    projection: Vec<Sparse>,
    pub ideal_dim: usize,
}

/// `Ae (x) N` as a quotient of the free vector space on pairs `(a, n_i)`.
struct TensorData {
    gens: Vec<Vec<(usize, usize)>>,
    index: Vec<HashMap<(usize, usize), usize>>,
    quots: Vec<SubspaceQuotient>,
}

/// `Hom_{eAe}(eA, N)` inside `prod_b N_{target b}` per vertex.
struct HomData {
    slots: Vec<Vec<(usize, usize)>>,
    spaces: Vec<Vec<Vec<Scalar>>>,
}

impl IdempotentRecollement {
    pub fn new(a: &Arc<FDAlgebra>, e_vertices: &[usize]) -> Result<Self> {
        let nv = a.num_vertices();
        let mut e: Vec<usize> = e_vertices.to_vec();
        e.sort_unstable();
        e.dedup();
        if let Some(&v) = e.iter().find(|&&v| v >= nv) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let f: Vec<usize> = (0..nv).filter(|v| !e.contains(v)).collect();
        let (corner, corner_basis) = a.corner(&e);
        let (quotient, quotient_reps, quotient_vertices) = a.quotient_by_vertices(&e);
        let ideal = a.idempotent_ideal(&e);
        let mut projection = vec![Vec::new(); a.dim()];
        let mut ideal_dim = 0;
        let rep_index: HashMap<usize, usize> = quotient_reps.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        for s in 0..nv {
            for t in 0..nv {
                let blk = a.block(s, t);
                if blk.is_empty() {
                    continue;
                }
                let local: Vec<Vec<Scalar>> =
                    ideal[s][t].iter().map(|v| blk.iter().map(|&b| v[b].clone()).collect()).collect();
                let q = linalg::subspace_quotient(blk.len(), &local)?;
                ideal_dim += q.dim();
                for (i, &b) in blk.iter().enumerate() {
                    let p = q.project(&linalg::unit_vec(blk.len(), i));
                    projection[b] = p
                        .into_iter()
                        .zip(&q.reps)
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, &r)| (rep_index[&blk[r]], c))
                        .collect();
                }
            }
        }
        Ok(IdempotentRecollement {
            ambient: a.clone(),
            e_vertices: e,
            f_vertices: f,
            corner: Arc::new(corner),
            corner_basis,
            quotient: Arc::new(quotient),
            quotient_reps,
            quotient_vertices,
            projection,
            ideal_dim,
        })
    }

    /// The recollement for `1 - e`.
    pub fn complementary(&self) -> Result<Self> {
        Self::new(&self.ambient, &self.f_vertices)
    }

    pub fn input_side(&self, which: Functor) -> Side {
        match which {
            Functor::IUpper | Functor::IShriek | Functor::JUpper => Side::Ambient,
            Functor::ILower => Side::Quotient,
            Functor::JShriek | Functor::JLower => Side::Corner,
        }
    }

    pub fn side_algebra(&self, side: Side) -> &Arc<FDAlgebra> {
        match side {
            Side::Ambient => &self.ambient,
            Side::Corner => &self.corner,
            Side::Quotient => &self.quotient,
        }
    }

    fn check(&self, which: Functor, x: &Module) -> Result<()> {
        if same_algebra(x.algebra(), self.side_algebra(self.input_side(which))) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn apply(&self, which: Functor, x: &Module) -> Result<Module> {
        self.check(which, x)?;
        match which {
            Functor::IUpper => self.restrict_quotient(&self.ideal_quotient(x).0),
            Functor::ILower => self.inflate(x),
            Functor::IShriek => self.restrict_quotient(&self.annihilator(x).0),
            Functor::JUpper => self.restrict_corner(x),
            Functor::JShriek => Ok(self.tensor(x)?.0),
            Functor::JLower => Ok(self.coinduce(x)?.0),
        }
    }

    /// The functor on a morphism.
    pub fn apply_map(&self, which: Functor, f: &ModuleMap) -> Result<ModuleMap> {
        self.check(which, &f.source)?;
        self.check(which, &f.target)?;
        let src = self.apply(which, &f.source)?;
        let tgt = self.apply(which, &f.target)?;
        let components: Vec<Matrix> = match which {
            Functor::IUpper => {
                let (_, p) = self.ideal_quotient(&f.source);
                let (_, p2) = self.ideal_quotient(&f.target);
                let qs = self.quotients_of(&f.source, &p);
                self.quotient_vertices
                    .iter()
                    .map(|&v| p2.components[v].mul(&f.components[v]).mul(&qs[v].section()))
                    .collect()
            }
            Functor::ILower => {
                let nv = self.ambient.num_vertices();
                (0..nv)
                    .map(|v| match self.quotient_local(v) {
                        Some(l) => f.components[l].clone(),
                        None => Matrix::zeros(0, 0),
                    })
                    .collect()
            }
            Functor::IShriek => {
                let (_, i1) = self.annihilator(&f.source);
                let (_, i2) = self.annihilator(&f.target);
                self.quotient_vertices
                    .iter()
                    .map(|&v| {
                        let cs = CoordinateSystem::new(&i2.components[v].columns(), f.target.dims()[v]);
                        let img = f.components[v].mul(&i1.components[v]);
                        let cols: Vec<Vec<Scalar>> =
                            img.columns().iter().map(|c| cs.coords(c).expect("annihilators are preserved")).collect();
                        Matrix::from_columns(&cols, i2.components[v].cols()).expect("lengths")
                    })
                    .collect()
            }
            Functor::JUpper => self.e_vertices.iter().map(|&v| f.components[v].clone()).collect(),
            Functor::JShriek => {
                let (_, d1) = self.tensor(&f.source)?;
                let (_, d2) = self.tensor(&f.target)?;
                let nv = self.ambient.num_vertices();
                (0..nv)
                    .map(|t| {
                        let mut m = Matrix::zeros(d2.gens[t].len(), d1.gens[t].len());
                        for (col, &(a, i)) in d1.gens[t].iter().enumerate() {
                            let l = self.corner_local(self.ambient.source(a)).unwrap();
                            let g = &f.components[l];
                            for j in 0..g.rows() {
                                let c = g.get(j, i);
                                if !c.is_zero() {
                                    m.add_at(d2.index[t][&(a, j)], col, c);
                                }
                            }
                        }
                        d2.quots[t].projection.mul(&m).mul(&d1.quots[t].section())
                    })
                    .collect()
            }
            Functor::JLower => {
                let (_, h1) = self.coinduce(&f.source)?;
                let (_, h2) = self.coinduce(&f.target)?;
                let nv = self.ambient.num_vertices();
                (0..nv)
                    .map(|v| {
                        let len2: usize = h2.slots[v].iter().map(|&(_, d)| d).sum();
                        let cs = CoordinateSystem::new(&h2.spaces[v], len2);
                        let cols: Vec<Vec<Scalar>> = h1.spaces[v]
                            .iter()
                            .map(|phi| {
                                let mut out = Vec::with_capacity(len2);
                                let mut off = 0;
                                for &(b, d) in &h1.slots[v] {
                                    let l = self.corner_local(self.ambient.target(b)).unwrap();
                                    out.extend(f.components[l].mul_vec(&phi[off..off + d]));
                                    off += d;
                                }
                                cs.coords(&out).expect("composite is eAe-linear")
                            })
                            .collect();
                        Matrix::from_columns(&cols, h2.spaces[v].len()).expect("lengths")
                    })
                    .collect()
            }
        };
        ModuleMap::new(&src, &tgt, components)
    }

    fn corner_local(&self, v: usize) -> Option<usize> {
        self.e_vertices.iter().position(|&w| w == v)
    }

    fn quotient_local(&self, v: usize) -> Option<usize> {
        self.quotient_vertices.iter().position(|&w| w == v)
    }

    fn restrict_corner(&self, x: &Module) -> Result<Module> {
        let dims = self.e_vertices.iter().map(|&v| x.dims()[v]).collect();
        let actions = self.corner_basis.iter().map(|&b| x.action(b).clone()).collect();
        Module::new(&self.corner, dims, actions)
    }

    /// Restriction of an `A`-module killed by `AeA` to `A/AeA`.
    fn restrict_quotient(&self, x: &Module) -> Result<Module> {
        let dims = self.quotient_vertices.iter().map(|&v| x.dims()[v]).collect();
        let actions = self.quotient_reps.iter().map(|&b| x.action(b).clone()).collect();
        Module::new(&self.quotient, dims, actions)
    }

    fn inflate(&self, y: &Module) -> Result<Module> {
        let a = &self.ambient;
        let dims: Vec<usize> =
            (0..a.num_vertices()).map(|v| self.quotient_local(v).map_or(0, |l| y.dims()[l])).collect();
        let actions = (0..a.dim())
            .map(|b| {
                let mut m = Matrix::zeros(dims[a.target(b)], dims[a.source(b)]);
                for (r, c) in &self.projection[b] {
                    m.axpy(c, y.action(*r));
                }
                m
            })
            .collect();
        Module::new(a, dims, actions)
    }

    /// `X -> X / AeAX`.
    fn ideal_quotient(&self, x: &Module) -> (Module, ModuleMap) {
        let nv = self.ambient.num_vertices();
        let seeds: Vec<Vec<Vec<Scalar>>> = (0..nv)
            .map(|v| {
                if self.e_vertices.contains(&v) {
                    (0..x.dims()[v]).map(|i| linalg::unit_vec(x.dims()[v], i)).collect()
                } else {
                    vec![]
                }
            })
            .collect();
        x.quotient(&x.generated_subspaces(&seeds))
    }

    fn quotients_of(&self, x: &Module, p: &ModuleMap) -> Vec<SubspaceQuotient> {
        (0..self.ambient.num_vertices())
            .map(|v| {
                let k = p.components[v].kernel();
                linalg::subspace_quotient(x.dims()[v], &k).expect("lengths")
            })
            .collect()
    }

    /// `{x : eAx = 0}` with its inclusion.
    fn annihilator(&self, x: &Module) -> (Module, ModuleMap) {
        let a = &self.ambient;
        let bases: Vec<Vec<Vec<Scalar>>> = (0..a.num_vertices())
            .map(|v| {
                let d = x.dims()[v];
                let mut stacked = Matrix::zeros(0, d);
                for &t in &self.e_vertices {
                    for &b in a.block(v, t) {
                        stacked = stacked.vstack(x.action(b));
                    }
                }
                if stacked.rows() == 0 {
                    (0..d).map(|i| linalg::unit_vec(d, i)).collect()
                } else {
                    stacked.kernel()
                }
            })
            .collect();
        x.submodule(&bases)
    }

    fn tensor(&self, n: &Module) -> Result<(Module, TensorData)> {
        let a = &self.ambient;
        let nv = a.num_vertices();
        let mut gens: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        let mut index: Vec<HashMap<(usize, usize), usize>> = vec![HashMap::new(); nv];
        for b in 0..a.dim() {
            if let Some(l) = self.corner_local(a.source(b)) {
                let t = a.target(b);
                for i in 0..n.dims()[l] {
                    index[t].insert((b, i), gens[t].len());
                    gens[t].push((b, i));
                }
            }
        }
        let mut rels: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); nv];
        for b in 0..a.dim() {
            let Some(lb) = self.corner_local(a.source(b)) else { continue };
            let t = a.target(b);
            for (ci, &c) in self.corner_basis.iter().enumerate() {
                if self.corner.target(ci) != lb {
                    continue;
                }
                let ls = self.corner.source(ci);
                for j in 0..n.dims()[ls] {
                    let mut r = vec![Scalar::zero(); gens[t].len()];
                    for (k, coef) in a.product(b, c) {
                        r[index[t][&(*k, j)]] += coef;
                    }
                    let cn = n.action(ci).column(j);
                    for (i, coef) in cn.iter().enumerate() {
                        if !coef.is_zero() {
                            r[index[t][&(b, i)]] -= coef;
                        }
                    }
                    if !linalg::is_zero_vec(&r) {
                        rels[t].push(r);
                    }
                }
            }
        }
        let quots: Vec<SubspaceQuotient> =
            (0..nv).map(|t| linalg::subspace_quotient(gens[t].len(), &rels[t])).collect::<Result<_>>()?;
        let dims: Vec<usize> = quots.iter().map(|q| q.quotient_dim()).collect();
        let actions = (0..a.dim())
            .map(|x| {
                let (s, t) = (a.source(x), a.target(x));
                let mut m = Matrix::zeros(gens[t].len(), gens[s].len());
                for (col, &(b, i)) in gens[s].iter().enumerate() {
                    for (k, coef) in a.product(x, b) {
                        m.add_at(index[t][&(*k, i)], col, coef);
                    }
                }
                quots[t].projection.mul(&m).mul(&quots[s].section())
            })
            .collect();
        let module = Module::new(a, dims, actions)?;
        Ok((module, TensorData { gens, index, quots }))
    }

    fn coinduce(&self, n: &Module) -> Result<(Module, HomData)> {
        let a = &self.ambient;
        let nv = a.num_vertices();
        let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        let mut offsets: Vec<HashMap<usize, usize>> = vec![HashMap::new(); nv];
        let mut lens = vec![0usize; nv];
        for b in 0..a.dim() {
            if let Some(l) = self.corner_local(a.target(b)) {
                let v = a.source(b);
                offsets[v].insert(b, lens[v]);
                lens[v] += n.dims()[l];
                slots[v].push((b, n.dims()[l]));
            }
        }
        let mut spaces = Vec::with_capacity(nv);
        for v in 0..nv {
            // phi(c b) = c phi(b) for every corner element c
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for &(b, _) in &slots[v] {
                let lt = self.corner_local(a.target(b)).unwrap();
                for (ci, &c) in self.corner_basis.iter().enumerate() {
                    if self.corner.source(ci) != lt {
                        continue;
                    }
                    let lt2 = self.corner.target(ci);
                    let act = n.action(ci);
                    for r in 0..n.dims()[lt2] {
                        let mut row = vec![Scalar::zero(); lens[v]];
                        for (k, coef) in a.product(c, b) {
                            row[offsets[v][k] + r] += coef;
                        }
                        let o = offsets[v][&b];
                        for col in 0..n.dims()[lt] {
                            row[o + col] -= act.get(r, col);
                        }
                        rows.push(row);
                    }
                }
            }
            let sys = Matrix::from_rows(&rows, lens[v])?;
            spaces.push(if rows.is_empty() {
                (0..lens[v]).map(|i| linalg::unit_vec(lens[v], i)).collect()
            } else {
                sys.kernel()
            });
        }
        let dims: Vec<usize> = spaces.iter().map(|s: &Vec<Vec<Scalar>>| s.len()).collect();
        let coords: Vec<CoordinateSystem> = (0..nv).map(|v| CoordinateSystem::new(&spaces[v], lens[v])).collect();
        let actions = (0..a.dim())
            .map(|x| {
                let (v, w) = (a.source(x), a.target(x));
                let cols: Vec<Vec<Scalar>> = spaces[v]
                    .iter()
                    .map(|phi| {
                        // (x phi)(b') = phi(b' x)
                        let mut out = vec![Scalar::zero(); lens[w]];
                        for &(b2, d) in &slots[w] {
                            let o2 = offsets[w][&b2];
                            for (k, coef) in a.product(b2, x) {
                                let o = offsets[v][k];
                                for i in 0..d {
                                    out[o2 + i] += coef * &phi[o + i];
                                }
                            }
                        }
                        coords[w].coords(&out).expect("Hom over eAe is an A-module")
                    })
                    .collect();
                Matrix::from_columns(&cols, dims[w]).expect("lengths")
            })
            .collect();
        let module = Module::new(a, dims, actions)?;
        Ok((module, HomData { slots, spaces }))
    }

    pub fn dim_quotient(&self) -> usize {
        self.quotient.dim()
    }
}

/// One failed check with a human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomFailure {
    pub check: String,
    pub witness: String,
}

#[derive(Clone, Debug, Default)]
pub struct RecollementReport {
    pub checks: usize,
    pub failures: Vec<AxiomFailure>,
}

impl RecollementReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, check: &str, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(AxiomFailure { check: check.into(), witness: witness() });
        }
    }
}

/// Modules over the three algebras of a recollement.
#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub ambient: Vec<Module>,
    pub corner: Vec<Module>,
    pub quotient: Vec<Module>,
}

impl Corpus {
    /// Projectives and simples over each of the three algebras.
    pub fn standard(r: &IdempotentRecollement) -> Corpus {
        let basic = |a: &Arc<FDAlgebra>| {
            let mut v: Vec<Module> = (0..a.num_vertices()).map(|i| Module::projective(a, i)).collect();
            v.extend((0..a.num_vertices()).map(|i| Module::simple(a, i)));
            v
        };
        Corpus { ambient: basic(&r.ambient), corner: basic(&r.corner), quotient: basic(&r.quotient) }
    }
}

fn dims_str(m: &Module) -> String {
    format!("{:?}", m.dims())
}

/// Adjunction dimension equalities, the composite identities and the vanishing
/// composites, checked on a corpus.
pub fn verify_recollement_axioms(r: &IdempotentRecollement, corpus: &Corpus) -> Result<RecollementReport> {
    use Functor::*;
    let mut rep = RecollementReport::default();
    let valid = |rep: &mut RecollementReport, label: &str, list: &[Module]| -> Vec<Module> {
        let mut ok = Vec::new();
        for (i, m) in list.iter().enumerate() {
            match m.validate() {
                Ok(()) => ok.push(m.clone()),
                Err(e) => rep.record("module_valid", false, || format!("{label} module {i}: {e}")),
            }
        }
        ok
    };
    let amb = valid(&mut rep, "ambient", &corpus.ambient);
    let cor = valid(&mut rep, "corner", &corpus.corner);
    let quo = valid(&mut rep, "quotient", &corpus.quotient);
    for x in &amb {
        if !same_algebra(x.algebra(), &r.ambient) {
            return Err(Error::AlgebraMismatch);
        }
    }
    // (i^*, i_*) and (i_*, i^!)
    for x in &amb {
        let ix = r.apply(IUpper, x)?;
        let sx = r.apply(IShriek, x)?;
        for y in &quo {
            let iy = r.apply(ILower, y)?;
            let (l, rr) = (hom_space(&ix, y)?.dim(), hom_space(x, &iy)?.dim());
            rep.record("adjunction_i_upper_i_lower", l == rr, || {
                format!("X={} Y={}: {l} vs {rr}", dims_str(x), dims_str(y))
            });
            let (l, rr) = (hom_space(&iy, x)?.dim(), hom_space(y, &sx)?.dim());
            rep.record("adjunction_i_lower_i_shriek", l == rr, || {
                format!("X={} Y={}: {l} vs {rr}", dims_str(x), dims_str(y))
            });
        }
        // (j_!, j^*) and (j^*, j_*)
        let jx = r.apply(JUpper, x)?;
        for n in &cor {
            let (l, rr) = (hom_space(&r.apply(JShriek, n)?, x)?.dim(), hom_space(n, &jx)?.dim());
            rep.record("adjunction_j_shriek_j_upper", l == rr, || {
                format!("X={} N={}: {l} vs {rr}", dims_str(x), dims_str(n))
            });
            let (l, rr) = (hom_space(&jx, n)?.dim(), hom_space(x, &r.apply(JLower, n)?)?.dim());
            rep.record("adjunction_j_upper_j_lower", l == rr, || {
                format!("X={} N={}: {l} vs {rr}", dims_str(x), dims_str(n))
            });
        }
    }
    for y in &quo {
        let iy = r.apply(ILower, y)?;
        let back = r.apply(IUpper, &iy)?;
        rep.record("i_upper_i_lower_identity", back == *y, || format!("Y={}", dims_str(y)));
        let back = r.apply(IShriek, &iy)?;
        rep.record("i_shriek_i_lower_identity", back == *y, || format!("Y={}", dims_str(y)));
        let j = r.apply(JUpper, &iy)?;
        rep.record("j_upper_i_lower_zero", j.is_zero(), || format!("Y={} gives {}", dims_str(y), dims_str(&j)));
    }
    for n in &cor {
        let js = r.apply(JShriek, n)?;
        let back = r.apply(JUpper, &js)?;
        rep.record("j_upper_j_shriek_identity", is_isomorphic(&back, n)?, || format!("N={}", dims_str(n)));
        let jl = r.apply(JLower, n)?;
        let back = r.apply(JUpper, &jl)?;
        rep.record("j_upper_j_lower_identity", is_isomorphic(&back, n)?, || format!("N={}", dims_str(n)));
        let z = r.apply(IUpper, &js)?;
        rep.record("i_upper_j_shriek_zero", z.is_zero(), || format!("N={} gives {}", dims_str(n), dims_str(&z)));
        let z = r.apply(IShriek, &jl)?;
        rep.record("i_shriek_j_lower_zero", z.is_zero(), || format!("N={} gives {}", dims_str(n), dims_str(&z)));
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop33Verdicts {
    /// `i^*(Af)` is projective.
    pub i_upper_preserves_projectives: bool,
    /// `A/AeA` is a projective `A`-module.
    pub i_shriek_exact: bool,
    /// `A/AfA (x) -` is exact on the generating family.
    pub iota_upper_exact: bool,
    /// `Af (x)_{fAf} N` has the dimension of `N` for projective `N`.
    pub tau_shriek_inclusion: bool,
    pub corner_ef_dim: usize,
    /// Names the short exact sequences used for the exactness test.
    pub exactness_family: &'static str,
}

impl Prop33Verdicts {
    pub fn all(&self) -> bool {
        self.i_upper_preserves_projectives && self.i_shriek_exact && self.iota_upper_exact && self.tau_shriek_inclusion
    }

    pub fn consistent(&self) -> bool {
        self.all() == (self.corner_ef_dim == 0)
    }
}

fn sequence_exact_under(r: &IdempotentRecollement, incl: &ModuleMap, proj: &ModuleMap) -> Result<bool> {
    let fi = r.apply_map(Functor::IUpper, incl)?;
    let fp = r.apply_map(Functor::IUpper, proj)?;
    let (k, m, c) = (fi.source.total_dim(), fi.target.total_dim(), fp.target.total_dim());
    Ok(fi.is_injective() && fp.is_surjective() && k + c == m && fp.compose(&fi).is_zero())
}

pub fn prop33_check(a: &Arc<FDAlgebra>, e_vertices: &[usize]) -> Result<Prop33Verdicts> {
    let r = IdempotentRecollement::new(a, e_vertices)?;
    let iota = r.complementary()?;
    let f = &r.f_vertices;
    let af = Module::free(a, f);
    let i_af = r.apply(Functor::IUpper, &af)?;
    let i_upper_preserves_projectives = is_projective(&i_af)?;
    let a_mod_aea = r.apply(Functor::ILower, &Module::regular(&r.quotient))?;
    let i_shriek_exact = is_projective(&a_mod_aea)?;
    let mut iota_upper_exact = true;
    for v in 0..a.num_vertices() {
        let s = Module::simple(a, v);
        let cover = projective_cover(&s)?;
        let (k, incl) = cover.kernel();
        iota_upper_exact &= sequence_exact_under(&iota, &incl, &cover)?;
        if !k.is_zero() {
            let c2 = projective_cover(&k)?;
            let (_, i2) = c2.kernel();
            iota_upper_exact &= sequence_exact_under(&iota, &i2, &c2)?;
        }
    }
    let mut tau_shriek_inclusion = true;
    for l in 0..iota.corner.num_vertices() {
        let n = Module::projective(&iota.corner, l);
        tau_shriek_inclusion &= iota.apply(Functor::JShriek, &n)?.total_dim() == n.total_dim();
    }
    let corner_ef_dim = r.e_vertices.iter().map(|&t| f.iter().map(|&s| a.block(s, t).len()).sum::<usize>()).sum();
    Ok(Prop33Verdicts {
        i_upper_preserves_projectives,
        i_shriek_exact,
        iota_upper_exact,
        tau_shriek_inclusion,
        corner_ef_dim,
        exactness_family: "0 -> rad P -> P -> S -> 0 for every simple S, and the cover sequence of rad P",
    })
}

#[derive(Clone, Debug)]
pub struct TorsionPairWitness {
    /// `t(X) = e_C X` and its inclusion.
    pub torsion: Module,
    pub inclusion: ModuleMap,
    /// `X / t(X)`, supported on the `B` vertices.
    pub torsion_free: Module,
    pub projection: ModuleMap,
    /// `e_B X` as a `B`-module.
    pub over_b: Module,
    pub closed_under_action: bool,
    pub exact: bool,
    pub hom_vanishes: bool,
}

impl TorsionPairWitness {
    pub fn verified(&self) -> bool {
        self.closed_under_action && self.exact && self.hom_vanishes
    }
}

pub fn torsion_canonical_sequence(t: &TriangularPresentation, x: &Module) -> Result<TorsionPairWitness> {
    if !same_algebra(x.algebra(), &t.ambient) {
        return Err(Error::AlgebraMismatch);
    }
    let nv = t.ambient.num_vertices();
    let bases: Vec<Vec<Vec<Scalar>>> = (0..nv)
        .map(|v| {
            let d = x.dims()[v];
            if t.c_vertices.contains(&v) {
                (0..d).map(|i| linalg::unit_vec(d, i)).collect()
            } else {
                vec![]
            }
        })
        .collect();
    let closure = x.generated_subspaces(&bases);
    let closed_under_action = (0..nv).all(|v| closure[v].len() == bases[v].len());
    let (torsion, inclusion) = x.submodule(&bases);
    let (torsion_free, projection) = x.quotient(&bases);
    let exact = inclusion.is_injective()
        && projection.is_surjective()
        && projection.compose(&inclusion).is_zero()
        && torsion.total_dim() + torsion_free.total_dim() == x.total_dim();
    let dims = t.b_vertices.iter().map(|&v| torsion_free.dims()[v]).collect();
    let actions = t.b_embedding.iter().map(|&b| torsion_free.action(b).clone()).collect();
    let over_b = Module::new(&t.b, dims, actions)?;
    let hom_vanishes = hom_space(&torsion, &torsion_free)?.dim() == 0;
    Ok(TorsionPairWitness {
        torsion,
        inclusion,
        torsion_free,
        projection,
        over_b,
        closed_under_action,
        exact,
        hom_vanishes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::detect_triangular;
    use crate::fixtures;

    #[test]
    fn kr_functors() {
        let a = fixtures::kr(3, 2);
        let r = IdempotentRecollement::new(&a, &[0]).unwrap();
        assert_eq!(r.corner.dim(), 3);
        assert_eq!(r.dim_quotient(), a.dim() - r.ideal_dim);
        assert_eq!(r.dim_quotient(), 2);
        let ju = r.apply(Functor::JUpper, &Module::regular(&a)).unwrap();
        assert_eq!(ju.dims(), &[3]);
        let js = r.apply(Functor::JShriek, &Module::regular(&r.corner)).unwrap();
        assert_eq!(js.dims(), &[3, 2]);
        assert_eq!(r.apply(Functor::IUpper, &Module::projective(&a, 1)).unwrap().dims(), &[2]);
        assert_eq!(r.apply(Functor::IUpper, &Module::projective(&a, 0)).unwrap().dims(), &[0]);
        let jl = r.apply(Functor::JLower, &Module::regular(&r.corner)).unwrap();
        assert_eq!(jl.dims(), &[3, 0]);
    }

    #[test]
    fn axioms_on_standard_corpus() {
        for (a, e) in
            [(fixtures::kr(3, 2), vec![0]), (fixtures::kr(2, 2), vec![1]), (fixtures::matrix_algebra(), vec![0])]
        {
            let r = IdempotentRecollement::new(&a, &e).unwrap();
            let rep = verify_recollement_axioms(&r, &Corpus::standard(&r)).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures);
            assert!(rep.checks > 0);
        }
    }

    #[test]
    fn corrupted_module_reported() {
        let a = fixtures::kr(3, 2);
        let r = IdempotentRecollement::new(&a, &[0]).unwrap();
        let p = Module::projective(&a, 0);
        let mut acts = p.actions().to_vec();
        let d = a.label_index("delta").unwrap();
        acts[d] = Matrix::identity(3);
        let bad = Module::new_unvalidated(&a, p.dims().to_vec(), acts).unwrap();
        let corpus = Corpus { ambient: vec![bad], ..Corpus::default() };
        let rep = verify_recollement_axioms(&r, &corpus).unwrap();
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.failures[0].check, "module_valid");
    }

    #[test]
    fn functor_maps_compose() {
        let a = fixtures::kr(3, 2);
        let r = IdempotentRecollement::new(&a, &[0]).unwrap();
        let x = Module::regular(&a);
        let rad = crate::module::radical_submodule(&x).1;
        for w in [Functor::IUpper, Functor::IShriek, Functor::JUpper] {
            let m = r.apply_map(w, &rad).unwrap();
            m.validate().unwrap();
        }
        let n = Module::regular(&r.corner);
        let rad = crate::module::radical_submodule(&n).1;
        for w in [Functor::JShriek, Functor::JLower] {
            r.apply_map(w, &rad).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn prop33_cases() {
        let v = prop33_check(&fixtures::kr(3, 2), &[0]).unwrap();
        assert!(v.all() && v.consistent());
        let v = prop33_check(&fixtures::kr(3, 2), &[1]).unwrap();
        assert!(!v.all() && v.consistent());
        let v = prop33_check(&fixtures::matrix_algebra(), &[0]).unwrap();
        assert!(v.consistent());
        assert!(!v.tau_shriek_inclusion);
        let v = prop33_check(&fixtures::product_of_fields(2), &[1]).unwrap();
        assert!(v.all());
    }

    #[test]
    fn torsion_sequences() {
        let a = fixtures::kr(3, 2);
        let t = detect_triangular(&a, &[0]).unwrap();
        let w = torsion_canonical_sequence(&t, &Module::projective(&a, 0)).unwrap();
        assert!(w.verified());
        assert_eq!(w.torsion.total_dim(), 2);
        assert_eq!(w.over_b.dims(), &[3]);
        let w = torsion_canonical_sequence(&t, &Module::projective(&a, 1)).unwrap();
        assert!(w.verified() && w.torsion_free.is_zero());
        let w = torsion_canonical_sequence(&t, &Module::simple(&a, 0)).unwrap();
        assert!(w.verified() && w.torsion.is_zero());
    }
}
