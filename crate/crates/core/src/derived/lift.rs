//! The recollement functors of a triangular algebra applied to complexes.

use std::sync::Arc;

use super::resolve::proj_resolve;
use super::Complex;
use crate::algebra::{FDAlgebra, TriangularPresentation};
use crate::error::{Error, Result};
use crate::module::{same_algebra, Module, ModuleMap};
use crate::recollement::{Functor, IdempotentRecollement};

/// `i_*`, `j_!` and `j_*` for `A = [[B, 0], [M, C]]`, computed through the
/// idempotent recollement of `e_B`. Modules over `B` and `C` are moved to the
/// corner `e_B A e_B` and the quotient `A / A e_B A` by matching basis elements.
#[derive(Clone, Debug)]
pub struct TriangularFunctors {
    pub presentation: TriangularPresentation,
    pub recollement: IdempotentRecollement,
    corner_vertices: Vec<usize>,
    corner_basis: Vec<usize>,
    quotient_vertices: Vec<usize>,
    quotient_basis: Vec<usize>,
}

fn match_indices(targets: &[usize], sources: &[usize]) -> Result<Vec<usize>> {
    targets
        .iter()
        .map(|t| {
            sources
                .iter()
                .position(|s| s == t)
                .ok_or_else(|| Error::InvalidAlgebra("triangular blocks do not match the recollement".into()))
        })
        .collect()
}

/// Re-expresses `x` over `to`; `vmap[i]`/`bmap[i]` give the vertex/basis
/// element of `x`'s algebra matching vertex/basis element `i` of `to`.
fn transport(x: &Module, to: &Arc<FDAlgebra>, vmap: &[usize], bmap: &[usize]) -> Result<Module> {
    let dims = vmap.iter().map(|&v| x.dims()[v]).collect();
    let actions = bmap.iter().map(|&b| x.action(b).clone()).collect();
    Module::new(to, dims, actions)
}

fn transport_map(f: &ModuleMap, src: &Module, tgt: &Module, vmap: &[usize]) -> Result<ModuleMap> {
    ModuleMap::new(src, tgt, vmap.iter().map(|&v| f.components[v].clone()).collect())
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (i, &j) in map.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

impl TriangularFunctors {
    pub fn new(t: &TriangularPresentation) -> Result<Self> {
        let r = IdempotentRecollement::new(&t.ambient, &t.b_vertices)?;
        let corner_vertices = match_indices(&r.e_vertices, &t.b_vertices)?;
        let corner_basis = match_indices(&r.corner_basis, &t.b_embedding)?;
        let quotient_vertices = match_indices(&r.quotient_vertices, &t.c_vertices)?;
        let quotient_basis = match_indices(&r.quotient_reps, &t.c_embedding)?;
        if corner_basis.len() != t.b.dim() || quotient_basis.len() != t.c.dim() {
            return Err(Error::InvalidAlgebra("triangular blocks do not match the recollement".into()));
        }
        Ok(TriangularFunctors {
            presentation: t.clone(),
            recollement: r,
            corner_vertices,
            corner_basis,
            quotient_vertices,
            quotient_basis,
        })
    }

    fn side(&self, which: Functor) -> Result<(&Arc<FDAlgebra>, &Arc<FDAlgebra>, &[usize], &[usize])> {
        let t = &self.presentation;
        let r = &self.recollement;
        match which {
            Functor::ILower => Ok((&t.c, &r.quotient, &self.quotient_vertices, &self.quotient_basis)),
            Functor::JShriek | Functor::JLower => Ok((&t.b, &r.corner, &self.corner_vertices, &self.corner_basis)),
            _ => Err(Error::Precondition(format!("{} is not lifted from a block algebra", which.name()))),
        }
    }

    fn to_side(&self, which: Functor, x: &Complex) -> Result<Complex> {
        let (from, to, vmap, bmap) = self.side(which)?;
        if !same_algebra(x.algebra(), from) {
            return Err(Error::AlgebraMismatch);
        }
        let terms: Vec<Module> = x.terms().iter().map(|m| transport(m, to, vmap, bmap)).collect::<Result<_>>()?;
        let diffs = x
            .diffs()
            .iter()
            .enumerate()
            .map(|(k, d)| transport_map(d, &terms[k], &terms[k + 1], vmap))
            .collect::<Result<_>>()?;
        Complex::new(to, x.lo(), terms, diffs)
    }

    fn apply_degreewise(&self, which: Functor, x: &Complex) -> Result<Complex> {
        let r = &self.recollement;
        let terms: Vec<Module> = x.terms().iter().map(|m| r.apply(which, m)).collect::<Result<_>>()?;
        let diffs = x.diffs().iter().map(|d| r.apply_map(which, d)).collect::<Result<_>>()?;
        Complex::new(&r.ambient, x.lo(), terms, diffs)
    }

    /// `i_*` or `j_*` on a module homomorphism.
    pub fn lift_map(&self, which: Functor, f: &ModuleMap) -> Result<ModuleMap> {
        if !matches!(which, Functor::ILower | Functor::JLower) {
            return Err(Error::Precondition(format!("{} is not applied degreewise", which.name())));
        }
        let (from, to, vmap, bmap) = self.side(which)?;
        if !same_algebra(f.source.algebra(), from) {
            return Err(Error::AlgebraMismatch);
        }
        let s = transport(&f.source, to, vmap, bmap)?;
        let t = transport(&f.target, to, vmap, bmap)?;
        self.recollement.apply_map(which, &transport_map(f, &s, &t, vmap)?)
    }

    /// `i_*` or `j_*` on a module.
    pub fn lift_module(&self, which: Functor, x: &Module) -> Result<Module> {
        if !matches!(which, Functor::ILower | Functor::JLower) {
            return Err(Error::Precondition(format!("{} is not applied degreewise", which.name())));
        }
        let (from, to, vmap, bmap) = self.side(which)?;
        if !same_algebra(x.algebra(), from) {
            return Err(Error::AlgebraMismatch);
        }
        self.recollement.apply(which, &transport(x, to, vmap, bmap)?)
    }

    /// `A e_B`.
    pub fn aeb(&self) -> Result<Module> {
        let t = &self.presentation;
        let parts: Vec<Module> = t.b_vertices.iter().map(|&v| Module::projective(&t.ambient, v)).collect();
        Ok(Module::direct_sum(&parts)?.0)
    }

    /// `M e_v = e_C A e_v` for the `v`-th vertex of `B`, as a module over `A`.
    pub fn m_column(&self, v: usize) -> Result<Module> {
        let t = &self.presentation;
        let p = Module::projective(&t.ambient, t.b_vertices[v]);
        Ok(self.c_part(&p))
    }

    fn c_part(&self, x: &Module) -> Module {
        let t = &self.presentation;
        let bases: Vec<Vec<Vec<crate::linalg::Scalar>>> = (0..t.ambient.num_vertices())
            .map(|v| {
                let d = x.dims()[v];
                if t.c_vertices.contains(&v) {
                    (0..d).map(|i| crate::linalg::unit_vec(d, i)).collect()
                } else {
                    vec![]
                }
            })
            .collect();
        x.submodule(&bases).0
    }

    /// `j^* X = e_B X` as a module over `B`.
    pub fn restrict_to_b(&self, x: &Module) -> Result<Module> {
        let y = self.recollement.apply(Functor::JUpper, x)?;
        let t = &self.presentation;
        transport(&y, &t.b, &invert(&self.corner_vertices), &invert(&self.corner_basis))
    }

    /// `e_C X` as a module over `C`.
    pub fn restrict_to_c(&self, x: &Module) -> Result<Module> {
        let t = &self.presentation;
        let dims = t.c_vertices.iter().map(|&v| x.dims()[v]).collect();
        let actions = t.c_embedding.iter().map(|&b| x.action(b).clone()).collect();
        Module::new(&t.c, dims, actions)
    }

    /// The module `M = e_C A e_B` over `A`.
    pub fn m_over_a(&self) -> Result<Module> {
        Ok(self.c_part(&self.aeb()?))
    }
}

/// `i_*` on complexes over `C`, `j_!` (left derived) and `j_*` on complexes over `B`.
pub fn lift_functor(t: &TriangularPresentation, which: Functor, x: &Complex, bound: usize) -> Result<Complex> {
    let f = TriangularFunctors::new(t)?;
    f.lift(which, x, bound)
}

impl TriangularFunctors {
    pub fn lift(&self, which: Functor, x: &Complex, bound: usize) -> Result<Complex> {
        let x = x.trimmed();
        if x.terms().is_empty() {
            self.side(which)?;
            return Ok(Complex::zero(&self.presentation.ambient));
        }
        match which {
            Functor::ILower | Functor::JLower => self.apply_degreewise(which, &self.to_side(which, &x)?),
            Functor::JShriek => {
                let r = proj_resolve(&x, bound)?;
                if r.truncated {
                    return Err(Error::Truncated(bound));
                }
                self.apply_degreewise(which, &self.to_side(which, &r.complex)?)
            }
            _ => Err(Error::Precondition(format!("{} is not lifted from a block algebra", which.name()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::detect_triangular;
    use crate::ar::is_projective;
    use crate::fixtures;

    fn kr_tp(a: usize, b: usize) -> TriangularPresentation {
        detect_triangular(&fixtures::kr(a, b), &[0]).unwrap()
    }

    #[test]
    fn jshriek_of_b_is_aeb() {
        let t = kr_tp(3, 2);
        let x = lift_functor(&t, Functor::JShriek, &Complex::stalk(&Module::regular(&t.b), 0), 4).unwrap();
        assert_eq!(x.lo(), 0);
        assert_eq!(x.terms().len(), 1);
        let aeb = Module::projective(&t.ambient, t.b_vertices[0]);
        assert_eq!(x.term(0).dims(), aeb.dims());
        assert!(is_projective(&x.term(0)).unwrap());
    }

    #[test]
    fn ilower_of_c_is_aec() {
        let t = kr_tp(3, 2);
        let x = lift_functor(&t, Functor::ILower, &Complex::stalk(&Module::regular(&t.c), 0), 4).unwrap();
        let aec = Module::projective(&t.ambient, t.c_vertices[0]);
        assert_eq!(x.term(0).dims(), aec.dims());
        assert!(is_projective(&x.term(0)).unwrap());
    }

    #[test]
    fn jlower_of_b_not_projective() {
        let t = kr_tp(3, 2);
        let x = lift_functor(&t, Functor::JLower, &Complex::stalk(&Module::regular(&t.b), 0), 4).unwrap();
        assert_eq!(x.term(0).dims()[t.c_vertices[0]], 0);
        assert!(!is_projective(&x.term(0)).unwrap());
        assert!(lift_functor(&t, Functor::JLower, &Complex::stalk(&Module::regular(&t.c), 0), 4).is_err());
    }

    #[test]
    fn jshriek_resolves_first() {
        let a = fixtures::linear_an(3);
        let t = detect_triangular(&a, &[0, 1]).or_else(|| detect_triangular(&a, &[1, 2])).unwrap();
        let s = (0..2).map(|v| Module::simple(&t.b, v)).find(|s| !is_projective(s).unwrap()).unwrap();
        let x = lift_functor(&t, Functor::JShriek, &Complex::stalk(&s, 0), 6).unwrap();
        assert_eq!(x.lo(), -1);
        for m in x.terms() {
            assert!(is_projective(m).unwrap());
        }
        let f = TriangularFunctors::new(&t).unwrap();
        // e_B H^0 recovers the simple
        assert_eq!(f.restrict_to_b(&x.homology(0)).unwrap().dims(), s.dims());
        assert_eq!(f.m_over_a().unwrap().total_dim(), t.m.dim);
    }
}
