use num_traits::One;

use super::{ChainMap, Complex};
use crate::ar::is_projective;
use crate::error::Result;
use crate::linalg::Scalar;
use crate::module::{projective_cover, Module, ModuleMap};

/// A complex of projectives with a quasi-isomorphism onto the input.
#[derive(Clone, Debug)]
pub struct ProjResolution {
    pub complex: Complex,
    pub quasi_iso: ChainMap,
    /// The construction stopped before the cycles ran out.
    pub truncated: bool,
    /// Lowest degree whose term and outgoing differential agree with an
    /// untruncated resolution.
    pub valid_from: i64,
}

impl ProjResolution {
    /// Whether `Hom(P, Y[n])` for `Y` supported in `[c, _]` is unaffected by truncation.
    pub fn covers(&self, y_lo: i64, n: i64) -> bool {
        !self.truncated || y_lo - n > self.valid_from
    }
}

pub fn all_projective(x: &Complex) -> Result<bool> {
    for t in x.terms() {
        if !is_projective(t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds `P -> X` degree by degree from the top: `P^n` covers the cycles of
/// the mapping cone in degree `n`. At most `bound` terms are added below the
/// support of `X`.
pub fn proj_resolve(x: &Complex, bound: usize) -> Result<ProjResolution> {
    let x = x.trimmed();
    let a = x.algebra().clone();
    if all_projective(&x)? {
        return Ok(ProjResolution {
            quasi_iso: ChainMap::identity(&x),
            valid_from: x.lo(),
            complex: x,
            truncated: false,
        });
    }
    let (lo, hi) = (x.lo(), x.hi());
    let zero = Module::zero(&a);
    // built from the top; index 0 is degree hi
    let mut p_terms: Vec<Module> = Vec::new();
    let mut d_maps: Vec<ModuleMap> = Vec::new(); // d_maps[k]: P^{hi-k-1} -> P^{hi-k}
    let mut q_maps: Vec<ModuleMap> = Vec::new();
    let mut n = hi;
    let mut truncated = false;
    loop {
        let (p_next, d_next, q_next) = match p_terms.last() {
            Some(p) => (p.clone(), d_maps.last().cloned(), q_maps.last().cloned().unwrap()),
            None => (zero.clone(), None, ModuleMap::zero(&zero, &x.term(n + 1))),
        };
        let p_next2 = if p_terms.len() >= 2 { p_terms[p_terms.len() - 2].clone() } else { zero.clone() };
        let d_next = d_next.unwrap_or_else(|| ModuleMap::zero(&p_next, &p_next2));
        let xn = x.term(n);
        let sources = [p_next.clone(), xn.clone()];
        let targets = [p_next2.clone(), x.term(n + 1)];
        let blocks = vec![vec![d_next.clone(), ModuleMap::zero(&xn, &p_next2)], vec![q_next.clone(), x.diff(n)]];
        let (s, _, phi) = ModuleMap::from_blocks(&sources, &targets, &blocks)?;
        let (_, _, projs) = Module::direct_sum(&sources)?;
        let (w, iota) = phi.kernel();
        if n < lo && w.is_zero() {
            break;
        }
        if n < lo && (lo - n) as usize > bound {
            truncated = true;
            break;
        }
        let (pn, pi) = if w.is_zero() {
            (zero.clone(), ModuleMap::zero(&zero, &w))
        } else {
            let c = projective_cover(&w)?;
            (c.source.clone(), c)
        };
        let into_s = iota.compose(&pi);
        debug_assert!(into_s.target == s);
        let dn = projs[0].compose(&into_s);
        let qn = projs[1].compose(&into_s).scale(&-Scalar::one());
        p_terms.push(pn);
        if p_terms.len() >= 2 {
            d_maps.push(dn);
        }
        q_maps.push(qn);
        n -= 1;
    }
    let built_lo = n + 1;
    p_terms.reverse();
    d_maps.reverse();
    q_maps.reverse();
    let p = Complex::new(&a, built_lo, p_terms, d_maps)?;
    let q = ChainMap::new(&p, &x, q_maps)?;
    Ok(ProjResolution { complex: p, quasi_iso: q, truncated, valid_from: built_lo })
}
