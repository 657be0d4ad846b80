//! Krull-Schmidt decomposition via Fitting's lemma, isomorphism tests and
//! endomorphism algebras.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::hom::hom_space;
use super::{Module, ModuleMap};
use crate::algebra::FDAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Scalar};

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub module: Module,
    /// Indecomposable summands ordered by total dimension, then dimension vector.
    pub summands: Vec<Summand>,
    /// `(index of a representative summand, multiplicity)` per isomorphism class.
    pub classes: Vec<(usize, usize)>,
}

impl Decomposition {
    pub fn class_modules(&self) -> Vec<(Module, usize)> {
        self.classes.iter().map(|&(i, m)| (self.summands[i].module.clone(), m)).collect()
    }

    /// Direct sum of one representative per isomorphism class.
    pub fn basic_part(&self) -> Module {
        let reps: Vec<Module> = self.classes.iter().map(|&(i, _)| self.summands[i].module.clone()).collect();
        if reps.is_empty() {
            return Module::zero(self.module.algebra());
        }
        Module::direct_sum(&reps).expect("same algebra").0
    }
}

/// Dimension of `End(X) / rad End(X)`, via the trace form of `X` restricted to `End(X)`.
pub(crate) fn endo_top_dim(basis: &[ModuleMap]) -> usize {
    let n = basis.len();
    if n == 0 {
        return 0;
    }
    let globals: Vec<Matrix> = basis.iter().map(|f| f.global()).collect();
    let mut form = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = globals[i].mul(&globals[j]).trace();
            form.set(i, j, t.clone());
            form.set(j, i, t);
        }
    }
    form.rank()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let small = n.to_u64()?;
    if small > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= small {
        if small % d == 0 {
            out.push(BigInt::from(d));
            if d * d != small {
                out.push(BigInt::from(small / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Characteristic polynomial coefficients `c_0..c_n` (monic) by Faddeev-LeVerrier.
fn char_poly(a: &Matrix) -> Vec<Scalar> {
    let n = a.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        let id = Matrix::identity(n).scale(&coeffs[n - k + 1]);
        next = next.add(&id);
        m = next;
        let am = a.mul(&m);
        coeffs[n - k] = -am.trace() / Scalar::from_integer(BigInt::from(k as i64));
    }
    coeffs
}

fn rational_roots(coeffs: &[Scalar]) -> Vec<Scalar> {
    let mut c: Vec<Scalar> = coeffs.to_vec();
    let mut roots = Vec::new();
    while c.len() > 1 && c[0].is_zero() {
        c.remove(0);
        if !roots.contains(&Scalar::zero()) {
            roots.push(Scalar::zero());
        }
    }
    if c.len() <= 1 {
        return roots;
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * Scalar::from_integer(lcm.clone())).to_integer()).collect();
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
        return roots;
    };
    let eval = |x: &Scalar| c.iter().rev().fold(Scalar::zero(), |acc, k| acc * x + k);
    for p in &ps {
        for q in &qs {
            for sign in [1, -1] {
                let r = Scalar::new(p * BigInt::from(sign), q.clone());
                if !roots.contains(&r) && eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Tries to split `x` with `phi - lambda` for a rational eigenvalue `lambda`.
fn fitting_split(x: &Module, phi: &ModuleMap) -> Option<(Vec<Vec<Vec<Scalar>>>, Vec<Vec<Vec<Scalar>>>)> {
    let n = x.total_dim();
    let mut lambdas: Vec<Scalar> = Vec::new();
    for c in &phi.components {
        if c.rows() == 0 {
            continue;
        }
        for r in rational_roots(&char_poly(c)) {
            if !lambdas.contains(&r) {
                lambdas.push(r);
            }
        }
    }
    for lambda in lambdas {
        let powered: Vec<Matrix> =
            phi.components.iter().map(|c| c.sub(&Matrix::identity(c.rows()).scale(&lambda)).pow(n)).collect();
        let rank: usize = powered.iter().map(|p| p.rank()).sum();
        if rank == 0 || rank == n {
            continue;
        }
        let image = powered.iter().map(|p| p.column_space()).collect();
        let kernel = powered.iter().map(|p| p.kernel()).collect();
        return Some((image, kernel));
    }
    None
}

fn projection_onto_first(
    x: &Module,
    first: &[Vec<Vec<Scalar>>],
    second: &[Vec<Vec<Scalar>>],
    first_module: &Module,
) -> ModuleMap {
    let components = (0..x.dims().len())
        .map(|v| {
            let d = x.dims()[v];
            let mut cols = first[v].clone();
            cols.extend(second[v].iter().cloned());
            if d == 0 {
                return Matrix::zeros(0, 0);
            }
            let change = Matrix::from_columns(&cols, d).expect("lengths");
            let inv = change.inverse().expect("complementary subspaces");
            inv.block(0, 0, first[v].len(), d)
        })
        .collect();
    ModuleMap { source: x.clone(), target: first_module.clone(), components }
}

fn split_candidates(basis: &[ModuleMap]) -> impl Iterator<Item = ModuleMap> + '_ {
    let n = basis.len();
    let singles = (0..n).map(move |i| basis[i].clone());
    let pairs = (0..n).flat_map(move |i| (i + 1..n).map(move |j| basis[i].add(&basis[j])));
    let weighted = (0..n).flat_map(move |i| {
        (0..n).filter(move |&j| j != i).map(move |j| basis[i].add(&basis[j].scale(&linalg::int(2))))
    });
    singles.chain(pairs).chain(weighted)
}

fn decompose_rec(x: &Module) -> Result<Vec<(Module, ModuleMap, ModuleMap)>> {
    if x.is_zero() {
        return Ok(vec![]);
    }
    let end = hom_space(x, x)?;
    if endo_top_dim(&end.basis) == 1 {
        return Ok(vec![(x.clone(), x.identity(), x.identity())]);
    }
    for phi in split_candidates(&end.basis) {
        if let Some((image, kernel)) = fitting_split(x, &phi) {
            let (im_mod, im_incl) = x.submodule(&image);
            let (ker_mod, ker_incl) = x.submodule(&kernel);
            let im_proj = projection_onto_first(x, &image, &kernel, &im_mod);
            let ker_proj = projection_onto_first(x, &kernel, &image, &ker_mod);
            let mut out = Vec::new();
            for (part, incl, proj) in [(im_mod, im_incl, im_proj), (ker_mod, ker_incl, ker_proj)] {
                for (m, i, p) in decompose_rec(&part)? {
                    out.push((m, incl.compose(&i), p.compose(&proj)));
                }
            }
            return Ok(out);
        }
    }
    Err(Error::DecomposeFailed(format!(
        "no endomorphism with a rational eigenvalue splits the module of dimension vector {:?}",
        x.dims()
    )))
}

pub fn decompose(x: &Module) -> Result<Decomposition> {
    let mut parts = decompose_rec(x)?;
    parts.sort_by(|a, b| a.0.total_dim().cmp(&b.0.total_dim()).then_with(|| a.0.dims().cmp(b.0.dims())));
    let summands: Vec<Summand> =
        parts.into_iter().map(|(module, inclusion, projection)| Summand { module, inclusion, projection }).collect();
    let mut classes: Vec<(usize, usize)> = Vec::new();
    for (i, s) in summands.iter().enumerate() {
        let mut found = false;
        for c in classes.iter_mut() {
            if is_isomorphic_indecomposable(&summands[c.0].module, &s.module)? {
                c.1 += 1;
                found = true;
                break;
            }
        }
        if !found {
            classes.push((i, 1));
        }
    }
    Ok(Decomposition { module: x.clone(), summands, classes })
}

/// Isomorphism test for indecomposable modules: some `g . f` is invertible.
pub fn is_isomorphic_indecomposable(x: &Module, y: &Module) -> Result<bool> {
    if x.dims() != y.dims() {
        return Ok(false);
    }
    let fs = hom_space(x, y)?;
    let gs = hom_space(y, x)?;
    for f in &fs.basis {
        for g in &gs.basis {
            if g.compose(f).is_iso() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

pub fn is_isomorphic(x: &Module, y: &Module) -> Result<bool> {
    if x.dims() != y.dims() {
        return Ok(false);
    }
    let h = hom_space(x, y)?;
    // a fixed generic-looking combination is almost always invertible when an iso exists
    let coeffs: Vec<Scalar> = (0..h.dim()).map(|i| linalg::int(((i * i * 7 + i * 3 + 1) % 97 + 1) as i64)).collect();
    if h.combination(&coeffs).is_iso() {
        return Ok(true);
    }
    let dx = decompose(x)?;
    let dy = decompose(y)?;
    let cy = dy.class_modules();
    let cx = dx.class_modules();
    if cx.len() != cy.len() {
        return Ok(false);
    }
    let mut used = vec![false; cy.len()];
    for (m, k) in &cx {
        let mut matched = false;
        for (j, (n, l)) in cy.iter().enumerate() {
            if !used[j] && k == l && is_isomorphic_indecomposable(m, n)? {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the regular module of `c` is a direct summand of `m`.
pub fn has_free_summand(c: &Arc<FDAlgebra>, m: &Module) -> Result<bool> {
    if !super::same_algebra(c, m.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let reg = decompose(&Module::regular(c))?;
    let dm = decompose(m)?;
    for (p, need) in reg.class_modules() {
        let mut have = 0;
        for (q, k) in dm.class_modules() {
            if is_isomorphic_indecomposable(&p, &q)? {
                have += k;
            }
        }
        if have < need {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every vertex idempotent is primitive and no two vertices give isomorphic projectives.
pub fn is_basic(a: &Arc<FDAlgebra>) -> Result<bool> {
    let nv = a.num_vertices();
    if (0..nv).any(|v| crate::algebra::local_top_dim(a, v) != 1) {
        return Ok(false);
    }
    for v in 0..nv {
        for w in v + 1..nv {
            if is_isomorphic_indecomposable(&Module::projective(a, v), &Module::projective(a, w))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The basic algebra Morita equivalent to `a`, as `End(P)^op` for the basic
/// part `P` of the regular module.
pub fn basic_algebra(a: &Arc<FDAlgebra>) -> Result<Arc<FDAlgebra>> {
    if is_basic(a)? {
        return Ok(a.clone());
    }
    let d = decompose(&Module::regular(a))?;
    Ok(endo_algebra(&d.basic_part())?.algebra)
}

/// `End(X)^op` with the summand projections as distinguished idempotents.
#[derive(Clone, Debug)]
pub struct EndoAlgebra {
    pub algebra: Arc<FDAlgebra>,
    pub decomposition: Decomposition,
    /// The endomorphism of `X` represented by each basis element.
    pub maps: Vec<ModuleMap>,
}

pub fn endo_algebra(x: &Module) -> Result<EndoAlgebra> {
    let decomposition = decompose(x)?;
    if decomposition.summands.is_empty() {
        return Err(Error::ZeroModule);
    }
    let end = hom_space(x, x)?;
    let n = end.dim();
    let coords = |f: &ModuleMap| end.coordinates(f).expect("endomorphism lies in End(X)");
    // End(X)^op: f * g = g . f
    let products: Vec<Vec<Vec<Scalar>>> =
        (0..n).map(|i| (0..n).map(|j| coords(&end.basis[j].compose(&end.basis[i]))).collect()).collect();
    let idempotents: Vec<Vec<Scalar>> =
        decomposition.summands.iter().map(|s| coords(&s.inclusion.compose(&s.projection))).collect();
    let names: Vec<String> = (1..=idempotents.len()).map(|i| format!("s{i}")).collect();
    let (algebra, basis) = FDAlgebra::from_structure_constants_with_basis(names, &products, &idempotents)?;
    let maps = basis.iter().map(|c| end.combination(c)).collect();
    Ok(EndoAlgebra { algebra: Arc::new(algebra), decomposition, maps })
}
