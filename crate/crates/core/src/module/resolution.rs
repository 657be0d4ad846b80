//! Radicals, projective covers, minimal resolutions and Ext.

use num_traits::Zero;

use super::hom::map_from_free;
use super::{same_algebra, Module, ModuleMap};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Scalar};

/// `rad X = J X` with its inclusion.
pub fn radical_submodule(x: &Module) -> (Module, ModuleMap) {
    let bases = radical_bases(x);
    x.submodule(&bases)
}

fn radical_bases(x: &Module) -> Vec<Vec<Vec<Scalar>>> {
    let a = x.algebra();
    let nv = a.num_vertices();
    let mut spans: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); nv];
    for (s, t, r) in a.radical_blocks() {
        if x.dims()[*s] == 0 || x.dims()[*t] == 0 {
            continue;
        }
        let mut m = Matrix::zeros(x.dims()[*t], x.dims()[*s]);
        for (b, c) in r.iter().enumerate() {
            if !c.is_zero() {
                m.axpy(c, x.action(b));
            }
        }
        spans[*t].extend(m.columns());
    }
    (0..nv)
        .map(|v| {
            let keep = linalg::independent_subset(&spans[v], x.dims()[v]);
            keep.into_iter().map(|i| spans[v][i].clone()).collect()
        })
        .collect()
}

/// Projective cover `P -> X`, with generators lifted from a basis of `X / rad X`.
pub fn projective_cover(x: &Module) -> Result<ModuleMap> {
    if x.is_zero() {
        return Err(Error::ZeroModule);
    }
    let a = x.algebra();
    let rad = radical_bases(x);
    let mut gens = Vec::new();
    let mut images = Vec::new();
    for v in 0..a.num_vertices() {
        let q = linalg::subspace_quotient(x.dims()[v], &rad[v])?;
        for &r in &q.reps {
            gens.push(v);
            let mut local = vec![Scalar::zero(); x.dims()[v]];
            local[r] = linalg::one();
            images.push(x.embed_vertex(v, &local));
        }
    }
    let p = Module::free(a, &gens);
    Ok(map_from_free(&p, x, &images))
}

/// A projective resolution `... -> P_1 -> P_0 -> X`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub target: Module,
    pub modules: Vec<Module>,
    /// `differentials[i-1]` is `d_i: P_i -> P_{i-1}`.
    pub differentials: Vec<ModuleMap>,
    pub augmentation: Option<ModuleMap>,
    /// `syzygies[i]` is `ker(P_i -> P_{i-1})` (or of the augmentation) with its inclusion.
    pub syzygies: Vec<ModuleMap>,
    pub pd: Option<usize>,
    pub truncated: bool,
    pub minimal: bool,
}

pub fn min_projective_resolution(x: &Module, bound: usize) -> Result<Resolution> {
    let mut res = Resolution {
        target: x.clone(),
        modules: vec![],
        differentials: vec![],
        augmentation: None,
        syzygies: vec![],
        pd: Some(0),
        truncated: false,
        minimal: true,
    };
    if x.is_zero() {
        return Ok(res);
    }
    let cover = projective_cover(x)?;
    let (_, incl) = cover.kernel();
    res.modules.push(cover.source.clone());
    res.augmentation = Some(cover);
    res.syzygies.push(incl);
    let mut i = 1;
    loop {
        let prev = res.syzygies.last().unwrap().clone();
        if prev.source.is_zero() {
            res.pd = Some(i - 1);
            break;
        }
        if i > bound {
            res.pd = None;
            res.truncated = true;
            break;
        }
        // minimality: the syzygy sits in the radical of the previous term
        let rad = radical_bases(&prev.target);
        for v in 0..prev.target.dims().len() {
            let q = linalg::subspace_quotient(prev.target.dims()[v], &rad[v])?;
            if prev.components[v].columns().iter().any(|c| !q.contains(c)) {
                res.minimal = false;
            }
        }
        let cover = projective_cover(&prev.source)?;
        let d = prev.compose(&cover);
        let (_, incl) = cover.kernel();
        res.modules.push(cover.source.clone());
        res.differentials.push(d);
        res.syzygies.push(incl);
        i += 1;
    }
    Ok(res)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtDim {
    Known(usize),
    /// The resolution was cut off before this degree.
    Unknown {
        bound: usize,
    },
}

impl ExtDim {
    pub fn is_zero(&self) -> bool {
        matches!(self, ExtDim::Known(0))
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, ExtDim::Known(n) if *n > 0)
    }
}

/// `Ext^n(X, Y)` with representative cocycles in generator coordinates of
/// `Hom(P_n, Y)`: the images of the generators of `P_n`, concatenated.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub degree: usize,
    pub dim: ExtDim,
    pub cocycles: Vec<Vec<Scalar>>,
}

impl Resolution {
    /// Length of `Hom(P_n, Y)` in generator coordinates.
    fn gen_coords(&self, n: usize, y: &Module) -> Vec<(usize, usize)> {
        // (generator vertex, offset) per generator
        let gens = self.modules[n].free_generators().expect("free term");
        let mut off = 0;
        gens.iter()
            .map(|&g| {
                let r = (g, off);
                off += y.dims()[g];
                r
            })
            .collect()
    }

    /// Matrix of `f -> f(p)` from generator coordinates of `Hom(P_n, Y)` to `Y`.
    fn evaluation(&self, n: usize, y: &Module, p: &[Scalar]) -> Matrix {
        let pn = &self.modules[n];
        let layout = self.gen_coords(n, y);
        let width = layout.last().map(|(g, o)| o + y.dims()[*g]).unwrap_or(0);
        let mut m = Matrix::zeros(y.total_dim(), width);
        for (i, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (k, b) = pn.free_basis_element(i).expect("free term");
            let (g, off) = layout[k];
            let a = y.algebra();
            let t = a.target(b);
            let act = y.action(b);
            for r in 0..act.rows() {
                for col in 0..act.cols() {
                    let e = act.get(r, col);
                    if !e.is_zero() {
                        m.add_at(y.offset(t) + r, off + col, &(e * c));
                    }
                }
            }
            debug_assert_eq!(a.source(b), g);
        }
        m
    }

    /// The homomorphism `P_n -> Y` with the given generator coordinates.
    pub fn cochain_map(&self, n: usize, y: &Module, coords: &[Scalar]) -> ModuleMap {
        let layout = self.gen_coords(n, y);
        let images: Vec<Vec<Scalar>> =
            layout.iter().map(|&(g, off)| y.embed_vertex(g, &coords[off..off + y.dims()[g]])).collect();
        map_from_free(&self.modules[n], y, &images)
    }

    /// Generator coordinates of a homomorphism `P_n -> Y`.
    pub fn cochain_coords(&self, n: usize, f: &ModuleMap) -> Vec<Scalar> {
        let pn = &self.modules[n];
        let gens = pn.free_generators().expect("free term");
        let mut out = Vec::new();
        for (k, &g) in gens.iter().enumerate() {
            let idx = pn.free_generator_index(k).unwrap();
            let img = f.apply(&linalg::unit_vec(pn.total_dim(), idx));
            out.extend(f.target.vertex_part(g, &img));
        }
        out
    }

    pub fn ext(&self, y: &Module, n: usize) -> Result<ExtGroup> {
        if !same_algebra(self.target.algebra(), y.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        if n >= self.modules.len() {
            return Ok(ExtGroup {
                degree: n,
                dim: if self.truncated { ExtDim::Unknown { bound: self.modules.len() - 1 } } else { ExtDim::Known(0) },
                cocycles: vec![],
            });
        }
        let width: usize = self.gen_coords(n, y).iter().map(|(g, _)| y.dims()[*g]).sum();
        // cocycles: vanish on the syzygy inside P_n
        let syz = &self.syzygies[n];
        let mut rows = Matrix::zeros(0, width);
        for j in 0..syz.source.total_dim() {
            let w = syz.apply(&linalg::unit_vec(syz.source.total_dim(), j));
            rows = rows.vstack(&self.evaluation(n, y, &w));
        }
        let z: Vec<Vec<Scalar>> =
            if rows.rows() == 0 { (0..width).map(|i| linalg::unit_vec(width, i)).collect() } else { rows.kernel() };
        // coboundaries: f . d_n for f in Hom(P_{n-1}, Y)
        let mut bvecs: Vec<Vec<Scalar>> = Vec::new();
        if n >= 1 {
            let d = &self.differentials[n - 1];
            let pn = &self.modules[n];
            let gens = pn.free_generators().unwrap();
            let prev_width: usize = self.gen_coords(n - 1, y).iter().map(|(g, _)| y.dims()[*g]).sum();
            let mut dmat = Matrix::zeros(width, prev_width);
            let mut row = 0;
            for (k, &g) in gens.iter().enumerate() {
                let idx = pn.free_generator_index(k).unwrap();
                let img = d.apply(&linalg::unit_vec(pn.total_dim(), idx));
                let ev = self.evaluation(n - 1, y, &img);
                let part = ev.block(y.offset(g), 0, y.dims()[g], prev_width);
                dmat.set_block(row, 0, &part);
                row += y.dims()[g];
            }
            bvecs = dmat.column_space();
        }
        let mut family = bvecs.clone();
        family.extend(z.iter().cloned());
        let pivots = linalg::independent_subset(&family, width);
        let cocycles: Vec<Vec<Scalar>> =
            pivots.into_iter().filter(|&i| i >= bvecs.len()).map(|i| family[i].clone()).collect();
        Ok(ExtGroup { degree: n, dim: ExtDim::Known(cocycles.len()), cocycles })
    }

    /// Whether a cocycle in `Hom(P_n, Y)` is a coboundary.
    pub fn is_coboundary(&self, y: &Module, n: usize, coords: &[Scalar]) -> Result<bool> {
        let mut fam = self.coboundaries(y, n)?;
        let base_rank = linalg::independent_subset(&fam, coords.len()).len();
        fam.push(coords.to_vec());
        Ok(linalg::independent_subset(&fam, coords.len()).len() == base_rank)
    }

    fn coboundaries(&self, y: &Module, n: usize) -> Result<Vec<Vec<Scalar>>> {
        if n == 0 || n >= self.modules.len() {
            return Ok(vec![]);
        }
        let d = &self.differentials[n - 1];
        let prev = self.ext_width(y, n - 1);
        let mut out = Vec::new();
        for i in 0..prev {
            let f = self.cochain_map(n - 1, y, &linalg::unit_vec(prev, i));
            out.push(self.cochain_coords(n, &f.compose(d)));
        }
        Ok(out)
    }

    fn ext_width(&self, y: &Module, n: usize) -> usize {
        self.gen_coords(n, y).iter().map(|(g, _)| y.dims()[*g]).sum()
    }
}

/// `dim Ext^n(X, Y)` from a resolution of `X` computed up to `bound`.
pub fn ext(x: &Module, y: &Module, n: usize, bound: usize) -> Result<ExtDim> {
    Ok(ext_classes(x, y, n, bound)?.dim)
}

pub fn ext_classes(x: &Module, y: &Module, n: usize, bound: usize) -> Result<ExtGroup> {
    if !same_algebra(x.algebra(), y.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let res = min_projective_resolution(x, bound)?;
    res.ext(y, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ar::tau_inverse;
    use crate::fixtures;
    use crate::module::hom_space;

    #[test]
    fn covers() {
        let a = fixtures::kr(3, 2);
        for v in 0..2 {
            let s = Module::simple(&a, v);
            let c = projective_cover(&s).unwrap();
            assert_eq!(c.source.free_generators().unwrap(), &[v]);
            assert!(c.is_surjective());
            let p = Module::projective(&a, v);
            let c = projective_cover(&p).unwrap();
            assert!(c.is_iso());
        }
        assert_eq!(projective_cover(&Module::zero(&a)).unwrap_err(), Error::ZeroModule);
    }

    #[test]
    fn resolutions() {
        let a = fixtures::kr(3, 2);
        let p = Module::regular(&a);
        assert_eq!(min_projective_resolution(&p, 4).unwrap().pd, Some(0));
        let t = tau_inverse(&Module::projective(&a, 1)).unwrap().module;
        let r = min_projective_resolution(&t, 6).unwrap();
        assert_eq!(r.pd, Some(1));
        assert!(r.minimal);
        assert_eq!(r.modules[1].free_generators().unwrap(), &[1]);
        // S_y over KR(3,2) has infinite projective dimension: theta has a periodic resolution
        let sy = Module::simple(&a, 1);
        let r = min_projective_resolution(&sy, 3).unwrap();
        assert!(r.truncated);
        assert_eq!(r.pd, None);
        assert_eq!(ext(&sy, &sy, 5, 3).unwrap(), ExtDim::Unknown { bound: 3 });
    }

    #[test]
    fn ext_values() {
        let c = fixtures::truncated_polynomial(2);
        let s = Module::simple(&c, 0);
        assert_eq!(ext(&s, &s, 1, 4).unwrap(), ExtDim::Known(1));
        assert_eq!(ext(&s, &s, 3, 4).unwrap(), ExtDim::Known(1));
        let a = fixtures::kr(3, 2);
        let py = Module::projective(&a, 1);
        let t = tau_inverse(&py).unwrap().module;
        assert!(ext(&t, &py, 1, 4).unwrap().is_nonzero());
        for y in [Module::simple(&a, 0), Module::regular(&a)] {
            assert_eq!(ext(&py, &y, 1, 4).unwrap(), ExtDim::Known(0));
        }
        let x = Module::simple(&a, 0);
        assert_eq!(ext(&x, &t, 0, 4).unwrap(), ExtDim::Known(hom_space(&x, &t).unwrap().dim()));
    }

    #[test]
    fn ext_duality() {
        let a = fixtures::kr(2, 2);
        let op = std::sync::Arc::new(a.opposite());
        let mods = [Module::simple(&a, 0), Module::simple(&a, 1), Module::regular(&a)];
        for x in &mods {
            for y in &mods {
                for n in 0..3 {
                    let lhs = ext(x, y, n, 6).unwrap();
                    let dy = y.dual_over(&op).unwrap();
                    let dx = x.dual_over(&op).unwrap();
                    let rhs = ext(&dy, &dx, n, 6).unwrap();
                    if let (ExtDim::Known(l), ExtDim::Known(r)) = (lhs, rhs) {
                        assert_eq!(l, r, "n={n}");
                    }
                }
            }
        }
    }
}
