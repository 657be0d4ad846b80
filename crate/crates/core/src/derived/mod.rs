//! Bounded complexes of modules, chain maps and the homotopy category.
//!
//! Differentials raise degree: `d_n: X^n -> X^{n+1}`. Shifts follow
//! `X[s]^n = X^{n+s}` with differential `(-1)^s d`.

mod checks;
mod homotopy;
mod lift;
mod resolve;

use std::sync::Arc;

pub use checks::{compactness_check, degree_window, exceptionality_check, Compactness, Exceptionality};
pub use homotopy::{
    compose_derived, derived_endomorphism_algebra, hom_derived, hom_homotopy, hom_resolved, lift_through, DerivedEndo,
    HomK,
};
pub use lift::{lift_functor, TriangularFunctors};
pub use resolve::{all_projective, proj_resolve, ProjResolution};

use crate::algebra::FDAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, CoordinateSystem, Scalar};
use crate::module::{same_algebra, Module, ModuleMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    algebra: Arc<FDAlgebra>,
    lo: i64,
    terms: Vec<Module>,
    /// `diffs[k]: terms[k] -> terms[k + 1]`.
    diffs: Vec<ModuleMap>,
}

impl Complex {
    pub fn new(algebra: &Arc<FDAlgebra>, lo: i64, terms: Vec<Module>, diffs: Vec<ModuleMap>) -> Result<Self> {
        if diffs.len() != terms.len().saturating_sub(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} terms need {} differentials",
                terms.len(),
                terms.len().saturating_sub(1)
            )));
        }
        for t in &terms {
            if !same_algebra(t.algebra(), algebra) {
                return Err(Error::AlgebraMismatch);
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source != terms[k] || d.target != terms[k + 1] {
                return Err(Error::DimensionMismatch(format!("differential in degree {}", lo + k as i64)));
            }
            d.validate()?;
        }
        for k in 1..diffs.len() {
            if !diffs[k].compose(&diffs[k - 1]).is_zero() {
                return Err(Error::InvalidPresentation(format!("d d != 0 at degree {}", lo + k as i64 - 1)));
            }
        }
        Ok(Complex { algebra: algebra.clone(), lo, terms, diffs })
    }

    pub fn zero(algebra: &Arc<FDAlgebra>) -> Self {
        Complex { algebra: algebra.clone(), lo: 0, terms: vec![], diffs: vec![] }
    }

    pub fn stalk(x: &Module, degree: i64) -> Self {
        Complex { algebra: x.algebra().clone(), lo: degree, terms: vec![x.clone()], diffs: vec![] }
    }

    /// Two-term complex `d: X^lo -> X^{lo+1}`.
    pub fn two_term(d: &ModuleMap, lo: i64) -> Self {
        Complex {
            algebra: d.source.algebra().clone(),
            lo,
            terms: vec![d.source.clone(), d.target.clone()],
            diffs: vec![d.clone()],
        }
    }

    pub fn algebra(&self) -> &Arc<FDAlgebra> {
        &self.algebra
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored degree; `lo - 1` for the empty complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn terms(&self) -> &[Module] {
        &self.terms
    }

    pub fn diffs(&self) -> &[ModuleMap] {
        &self.diffs
    }

    pub fn term(&self, n: i64) -> Module {
        if n < self.lo || n > self.hi() {
            Module::zero(&self.algebra)
        } else {
            self.terms[(n - self.lo) as usize].clone()
        }
    }

    pub fn diff(&self, n: i64) -> ModuleMap {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            ModuleMap::zero(&self.term(n), &self.term(n + 1))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }

    /// Degrees of the outermost nonzero terms.
    pub fn support(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> =
            self.terms.iter().enumerate().filter(|(_, t)| !t.is_zero()).map(|(k, _)| self.lo + k as i64).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    pub fn amplitude(&self) -> i64 {
        self.support().map_or(0, |(a, b)| b - a)
    }

    /// Drops zero terms at both ends.
    pub fn trimmed(&self) -> Complex {
        match self.support() {
            None => Complex::zero(&self.algebra),
            Some((a, b)) => {
                let (s, e) = ((a - self.lo) as usize, (b - self.lo) as usize);
                Complex {
                    algebra: self.algebra.clone(),
                    lo: a,
                    terms: self.terms[s..=e].to_vec(),
                    diffs: self.diffs[s..e].to_vec(),
                }
            }
        }
    }

    pub fn shift(&self, s: i64) -> Complex {
        let sign = if s.rem_euclid(2) == 0 { linalg::one() } else { -linalg::one() };
        Complex {
            algebra: self.algebra.clone(),
            lo: self.lo - s,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&sign)).collect(),
        }
    }

    /// Same complex stored on the degree range `[lo, hi]` (which must contain the support).
    pub fn padded(&self, lo: i64, hi: i64) -> Complex {
        let terms: Vec<Module> = (lo..=hi).map(|n| self.term(n)).collect();
        let diffs = (lo..hi).map(|n| self.diff(n)).collect();
        Complex { algebra: self.algebra.clone(), lo, terms, diffs }
    }

    pub fn direct_sum(parts: &[Complex]) -> Result<(Complex, Vec<ChainMap>, Vec<ChainMap>)> {
        let first = parts.first().ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
        let a = first.algebra.clone();
        let lo = parts.iter().map(|c| c.lo).min().unwrap();
        let hi = parts.iter().map(|c| c.hi()).max().unwrap().max(lo - 1);
        let padded: Vec<Complex> = parts.iter().map(|c| c.padded(lo, hi)).collect();
        let mut terms = Vec::new();
        let mut incls: Vec<Vec<ModuleMap>> = vec![Vec::new(); parts.len()];
        let mut projs: Vec<Vec<ModuleMap>> = vec![Vec::new(); parts.len()];
        for n in lo..=hi {
            let mods: Vec<Module> = padded.iter().map(|c| c.term(n)).collect();
            let (s, i, p) = Module::direct_sum(&mods)?;
            terms.push(s);
            for k in 0..parts.len() {
                incls[k].push(i[k].clone());
                projs[k].push(p[k].clone());
            }
        }
        let mut diffs = Vec::new();
        for n in lo..hi {
            let k0 = (n - lo) as usize;
            let mut d = ModuleMap::zero(&terms[k0], &terms[k0 + 1]);
            for (k, c) in padded.iter().enumerate() {
                d = d.add(&incls[k][k0 + 1].compose(&c.diff(n)).compose(&projs[k][k0]));
            }
            diffs.push(d);
        }
        let sum = Complex { algebra: a, lo, terms, diffs };
        let incl = (0..parts.len())
            .map(|k| ChainMap { source: padded[k].clone(), target: sum.clone(), components: incls[k].clone() })
            .collect();
        let proj = (0..parts.len())
            .map(|k| ChainMap { source: sum.clone(), target: padded[k].clone(), components: projs[k].clone() })
            .collect();
        Ok((sum, incl, proj))
    }

    /// `H^n = ker d_n / im d_{n-1}`.
    pub fn homology(&self, n: i64) -> Module {
        let (z, incl) = self.diff(n).kernel();
        let (_, im) = self.diff(n - 1).image();
        let nv = self.algebra.num_vertices();
        let bases: Vec<Vec<Vec<Scalar>>> = (0..nv)
            .map(|v| {
                let cs = CoordinateSystem::new(&incl.components[v].columns(), self.term(n).dims()[v]);
                im.components[v].columns().iter().map(|c| cs.coords(c).expect("boundaries are cycles")).collect()
            })
            .collect();
        z.quotient(&bases).0
    }

    pub fn is_acyclic(&self) -> bool {
        (self.lo..=self.hi()).all(|n| self.homology(n).is_zero())
    }

    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(|t| t.total_dim()).sum()
    }
}

/// Degree-preserving map of complexes; `components[k]` sits in degree `source.lo() + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    pub components: Vec<ModuleMap>,
}

impl ChainMap {
    pub fn new(source: &Complex, target: &Complex, components: Vec<ModuleMap>) -> Result<Self> {
        let f = ChainMap { source: source.clone(), target: target.clone(), components };
        f.validate()?;
        Ok(f)
    }

    pub fn zero(source: &Complex, target: &Complex) -> Self {
        let components = (source.lo..=source.hi()).map(|n| ModuleMap::zero(&source.term(n), &target.term(n))).collect();
        ChainMap { source: source.clone(), target: target.clone(), components }
    }

    pub fn identity(x: &Complex) -> Self {
        ChainMap { source: x.clone(), target: x.clone(), components: x.terms.iter().map(|t| t.identity()).collect() }
    }

    pub fn component(&self, n: i64) -> ModuleMap {
        if n < self.source.lo || n > self.source.hi() {
            ModuleMap::zero(&self.source.term(n), &self.target.term(n))
        } else {
            self.components[(n - self.source.lo) as usize].clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.len() != self.source.terms.len() {
            return Err(Error::DimensionMismatch("one component per source degree".into()));
        }
        for n in self.source.lo..=self.source.hi() {
            let f = self.component(n);
            if f.source != self.source.term(n) || f.target != self.target.term(n) {
                return Err(Error::DimensionMismatch(format!("chain map component in degree {n}")));
            }
            f.validate()?;
        }
        for n in (self.source.lo - 1)..=self.source.hi() {
            let lhs = self.target.diff(n).compose(&self.component(n));
            let rhs = self.component(n + 1).compose(&self.source.diff(n));
            if lhs != rhs.with_endpoints(&lhs) {
                return Err(Error::ActionAxiom(format!("chain map does not commute in degree {n}")));
            }
        }
        Ok(())
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        let components =
            (other.source.lo..=other.source.hi()).map(|n| self.component(n).compose(&other.component(n))).collect();
        ChainMap { source: other.source.clone(), target: self.target.clone(), components }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let components = self.components.iter().zip(&other.components).map(|(f, g)| f.add(g)).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), components }
    }

    pub fn scale(&self, s: &Scalar) -> ChainMap {
        let components = self.components.iter().map(|f| f.scale(s)).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|f| f.is_zero())
    }

    /// The same components viewed as a map `X[s] -> Y[s]` (signs cancel).
    pub fn shift(&self, s: i64) -> ChainMap {
        ChainMap { source: self.source.shift(s), target: self.target.shift(s), components: self.components.clone() }
    }

    pub fn is_quasi_iso(&self) -> bool {
        let lo = self.source.lo.min(self.target.lo);
        let hi = self.source.hi().max(self.target.hi());
        (lo..=hi).all(|n| {
            let hs = self.source.homology(n).total_dim();
            let ht = self.target.homology(n).total_dim();
            hs == ht && self.induced_homology_injective(n)
        })
    }

    fn induced_homology_injective(&self, n: i64) -> bool {
        // cycles of X mapping into boundaries of Y must be boundaries of X
        let (z, zi) = self.source.diff(n).kernel();
        if z.is_zero() {
            return true;
        }
        let img = self.component(n).compose(&zi);
        let (_, by) = self.target.diff(n - 1).image();
        let (_, bx) = self.source.diff(n - 1).image();
        let nv = self.source.algebra.num_vertices();
        (0..nv).all(|v| {
            // dim{c in Z : f(c) in B_Y} must equal dim B_X
            let f = img.components[v].clone();
            let byv = by.components[v].clone();
            let stacked = f.hstack(&byv.neg());
            let ker = stacked.kernel();
            let zdim = z.dims()[v];
            let pre: Vec<Vec<Scalar>> = ker.iter().map(|k| k[..zdim].to_vec()).collect();
            let pre_dim = linalg::independent_subset(&pre, zdim).len();
            pre_dim == bx.components[v].rank()
        })
    }
}

impl ModuleMap {
    /// Same matrices with the source and target replaced, for comparisons of
    /// maps whose endpoints differ only in zero terms.
    pub(crate) fn with_endpoints(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap { source: other.source.clone(), target: other.target.clone(), components: self.components.clone() }
    }
}
