//! `Hom` in the homotopy category: chain maps modulo null-homotopic maps.

use std::sync::Arc;

use num_traits::Zero;

use super::resolve::{all_projective, proj_resolve, ProjResolution};
use super::{ChainMap, Complex};
use crate::algebra::FDAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, CoordinateSystem, Matrix, Scalar, SubspaceQuotient};
use crate::module::{basic_algebra, hom_space, ExtDim, HomSpace, ModuleMap};

/// `Hom_K(P, Y[n])` for a complex of projectives `P`.
#[derive(Clone, Debug)]
pub struct HomK {
    pub source: Complex,
    /// `Y[n]`.
    pub target: Complex,
    pub shift: i64,
    pub dim: ExtDim,
    /// Chain maps `P -> Y[n]` whose classes form a basis.
    pub basis: Vec<ChainMap>,
    spaces: Vec<HomSpace>,
    offsets: Vec<usize>,
    quotient: Option<SubspaceQuotient>,
    coords: Option<CoordinateSystem>,
}

impl HomK {
    fn unknown(source: &Complex, target: &Complex, shift: i64, bound: usize) -> Self {
        HomK {
            source: source.clone(),
            target: target.clone(),
            shift,
            dim: ExtDim::Unknown { bound },
            basis: vec![],
            spaces: vec![],
            offsets: vec![0],
            quotient: None,
            coords: None,
        }
    }

    pub fn known_dim(&self) -> Option<usize> {
        match self.dim {
            ExtDim::Known(d) => Some(d),
            ExtDim::Unknown { .. } => None,
        }
    }

    fn variables(&self, f: &ChainMap) -> Option<Vec<Scalar>> {
        let mut out = Vec::with_capacity(*self.offsets.last().unwrap());
        for (k, h) in self.spaces.iter().enumerate() {
            let n = self.source.lo() + k as i64;
            out.extend(h.coordinates(&f.component(n))?);
        }
        Some(out)
    }

    fn chain_map(&self, vars: &[Scalar]) -> ChainMap {
        let components = self
            .spaces
            .iter()
            .enumerate()
            .map(|(k, h)| h.combination(&vars[self.offsets[k]..self.offsets[k + 1]]))
            .collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), components }
    }

    /// Coordinates of the homotopy class of `f` in `basis`.
    pub fn coordinates(&self, f: &ChainMap) -> Option<Vec<Scalar>> {
        let v = self.variables(f)?;
        let q = self.quotient.as_ref()?;
        let p = q.project(&v);
        match &self.coords {
            Some(c) => c.coords(&p),
            None => linalg::is_zero_vec(&p).then(Vec::new),
        }
    }

    pub fn is_null_homotopic(&self, f: &ChainMap) -> bool {
        self.coordinates(f).is_some_and(|c| linalg::is_zero_vec(&c))
    }

    pub fn combination(&self, coeffs: &[Scalar]) -> ChainMap {
        let mut f = ChainMap::zero(&self.source, &self.target);
        for (g, c) in self.basis.iter().zip(coeffs) {
            if !c.is_zero() {
                f = f.add(&g.scale(c));
            }
        }
        f
    }
}

/// `Hom_K(P, Y[n])`. `P` must consist of projective modules.
pub fn hom_homotopy(p: &Complex, y: &Complex, n: i64) -> Result<HomK> {
    if !crate::module::same_algebra(p.algebra(), y.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if !all_projective(p)? {
        return Err(Error::Precondition("source complex must consist of projective modules".into()));
    }
    hom_k(p, &y.shift(n), n)
}

/// `Hom_D(X, Y[n])` through a projective resolution of `X`; `Unknown` when the
/// truncated resolution cannot decide it.
pub fn hom_derived(x: &Complex, y: &Complex, n: i64, bound: usize) -> Result<HomK> {
    let r = proj_resolve(x, bound)?;
    hom_resolved(&r, y, n, bound)
}

pub fn hom_resolved(r: &ProjResolution, y: &Complex, n: i64, bound: usize) -> Result<HomK> {
    let ys = y.shift(n);
    match y.support() {
        None => hom_k(&r.complex, &ys, n),
        Some((c, _)) if r.covers(c, n) => hom_k(&r.complex, &ys, n),
        Some(_) => Ok(HomK::unknown(&r.complex, &ys, n, bound)),
    }
}

fn flat_len(m: &ModuleMap) -> usize {
    m.source.dims().iter().zip(m.target.dims()).map(|(a, b)| a * b).sum()
}

fn hom_k(p: &Complex, y: &Complex, shift: i64) -> Result<HomK> {
    let (lo, hi) = (p.lo(), p.hi());
    let spaces: Vec<HomSpace> = (lo..=hi).map(|m| hom_space(&p.term(m), &y.term(m))).collect::<Result<_>>()?;
    let mut offsets = vec![0];
    for h in &spaces {
        offsets.push(offsets.last().unwrap() + h.dim());
    }
    let nvars = *offsets.last().unwrap();
    // constraint in degree m: d_Y f^m - f^{m+1} d_P : P^m -> Y^{m+1}
    let cons_degrees: Vec<i64> = ((lo - 1)..=hi).collect();
    let cons_len: Vec<usize> =
        cons_degrees.iter().map(|&m| flat_len(&ModuleMap::zero(&p.term(m), &y.term(m + 1)))).collect();
    let mut cons_off = vec![0];
    for l in &cons_len {
        cons_off.push(cons_off.last().unwrap() + l);
    }
    let nrows = *cons_off.last().unwrap();
    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(nvars);
    for (k, h) in spaces.iter().enumerate() {
        let m = lo + k as i64;
        for f in &h.basis {
            let mut col = vec![Scalar::zero(); nrows];
            let ci = (m - (lo - 1)) as usize;
            for (i, v) in y.diff(m).compose(f).flatten().into_iter().enumerate() {
                col[cons_off[ci] + i] += v;
            }
            let ci = (m - 1 - (lo - 1)) as usize;
            for (i, v) in f.compose(&p.diff(m - 1)).flatten().into_iter().enumerate() {
                col[cons_off[ci] + i] -= v;
            }
            columns.push(col);
        }
    }
    let cycles: Vec<Vec<Scalar>> = if nvars == 0 {
        vec![]
    } else if nrows == 0 {
        (0..nvars).map(|i| linalg::unit_vec(nvars, i)).collect()
    } else {
        Matrix::from_columns(&columns, nrows)?.kernel()
    };
    // null-homotopic maps d_Y h^m + h^{m+1} d_P with h^m: P^m -> Y^{m-1}
    let mut boundaries: Vec<Vec<Scalar>> = Vec::new();
    for m in lo..=hi {
        let hh = hom_space(&p.term(m), &y.term(m - 1))?;
        for h in &hh.basis {
            let mut v = vec![Scalar::zero(); nvars];
            if m >= lo && m <= hi {
                let k = (m - lo) as usize;
                let c = spaces[k].coordinates(&y.diff(m - 1).compose(h)).expect("A-linear");
                for (i, x) in c.into_iter().enumerate() {
                    v[offsets[k] + i] += x;
                }
            }
            if m > lo {
                let k = (m - 1 - lo) as usize;
                let c = spaces[k].coordinates(&h.compose(&p.diff(m - 1))).expect("A-linear");
                for (i, x) in c.into_iter().enumerate() {
                    v[offsets[k] + i] += x;
                }
            }
            boundaries.push(v);
        }
    }
    let quotient = linalg::subspace_quotient(nvars, &boundaries)?;
    let projected: Vec<Vec<Scalar>> = cycles.iter().map(|z| quotient.project(z)).collect();
    let keep = linalg::independent_subset(&projected, quotient.quotient_dim());
    let mut out = HomK {
        source: p.clone(),
        target: y.clone(),
        shift,
        dim: ExtDim::Known(keep.len()),
        basis: vec![],
        spaces,
        offsets,
        quotient: None,
        coords: None,
    };
    out.basis = keep.iter().map(|&i| out.chain_map(&cycles[i])).collect();
    let kept: Vec<Vec<Scalar>> = keep.iter().map(|&i| projected[i].clone()).collect();
    out.coords = (!kept.is_empty()).then(|| CoordinateSystem::new(&kept, quotient.quotient_dim()));
    out.quotient = Some(quotient);
    Ok(out)
}

/// A chain map `g: P -> Q` with `q g` homotopic to `f`, where `q: Q -> X` is a
/// quasi-isomorphism and `P` consists of projectives.
pub fn lift_through(f: &ChainMap, q: &ChainMap) -> Result<Option<ChainMap>> {
    let p = &f.source;
    let qq = &q.source;
    let x = &q.target;
    let (lo, hi) = (p.lo(), p.hi());
    let gs: Vec<HomSpace> = (lo..=hi).map(|m| hom_space(&p.term(m), &qq.term(m))).collect::<Result<_>>()?;
    let hs: Vec<HomSpace> = (lo..=hi).map(|m| hom_space(&p.term(m), &x.term(m - 1))).collect::<Result<_>>()?;
    let ng: usize = gs.iter().map(|h| h.dim()).sum();
    let nh: usize = hs.iter().map(|h| h.dim()).sum();
    // equation blocks: chain condition for g in degrees lo-1..=hi, then q g - d h - h d = f in lo..=hi
    let mut eq_off = vec![0usize];
    for m in (lo - 1)..=hi {
        let l = flat_len(&ModuleMap::zero(&p.term(m), &qq.term(m + 1)));
        eq_off.push(eq_off.last().unwrap() + l);
    }
    let base = *eq_off.last().unwrap();
    let mut eq2_off = vec![base];
    for m in lo..=hi {
        let l = flat_len(&ModuleMap::zero(&p.term(m), &x.term(m)));
        eq2_off.push(eq2_off.last().unwrap() + l);
    }
    let nrows = *eq2_off.last().unwrap();
    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(ng + nh);
    let add = |col: &mut Vec<Scalar>, off: usize, m: &ModuleMap, sign: bool| {
        for (i, v) in m.flatten().into_iter().enumerate() {
            if sign {
                col[off + i] += v;
            } else {
                col[off + i] -= v;
            }
        }
    };
    for (k, h) in gs.iter().enumerate() {
        let m = lo + k as i64;
        for g in &h.basis {
            let mut col = vec![Scalar::zero(); nrows];
            add(&mut col, eq_off[(m - lo + 1) as usize], &qq.diff(m).compose(g), true);
            add(&mut col, eq_off[(m - lo) as usize], &g.compose(&p.diff(m - 1)), false);
            add(&mut col, eq2_off[k], &q.component(m).compose(g), true);
            columns.push(col);
        }
    }
    for (k, hsp) in hs.iter().enumerate() {
        let m = lo + k as i64;
        for h in &hsp.basis {
            let mut col = vec![Scalar::zero(); nrows];
            add(&mut col, eq2_off[k], &x.diff(m - 1).compose(h), false);
            if m > lo {
                add(&mut col, eq2_off[k - 1], &h.compose(&p.diff(m - 1)), false);
            }
            columns.push(col);
        }
    }
    let mut rhs = vec![Scalar::zero(); nrows];
    for m in lo..=hi {
        let k = (m - lo) as usize;
        for (i, v) in f.component(m).flatten().into_iter().enumerate() {
            rhs[eq2_off[k] + i] = v;
        }
    }
    if ng + nh == 0 {
        return Ok(linalg::is_zero_vec(&rhs).then(|| ChainMap::zero(p, qq)));
    }
    let Some(sol) = linalg::solve(&Matrix::from_columns(&columns, nrows)?, &rhs)? else {
        return Ok(None);
    };
    let mut off = 0;
    let components = gs
        .iter()
        .map(|h| {
            let g = h.combination(&sol.particular[off..off + h.dim()]);
            off += h.dim();
            g
        })
        .collect();
    Ok(Some(ChainMap { source: p.clone(), target: qq.clone(), components }))
}

/// `End_D(X)^op` for `X = X_1 + ... + X_r`, with the summands as vertices.
#[derive(Clone, Debug)]
pub struct DerivedEndo {
    pub algebra: Arc<FDAlgebra>,
    /// Basic algebra Morita equivalent to `algebra`.
    pub basic: Arc<FDAlgebra>,
    /// `homs[i][j] = Hom_D(X_i, X_j)`.
    pub homs: Vec<Vec<HomK>>,
    pub resolutions: Vec<ProjResolution>,
    /// Index `(i, j, k)` of each input basis element before re-basing.
    pub input_basis: Vec<(usize, usize, usize)>,
    /// Structure constants of `End^op` in the `input_basis`.
    pub products: Vec<Vec<Vec<Scalar>>>,
    pub idempotents: Vec<Vec<Scalar>>,
}

/// Composition `g . f` in `D` for `f: X_i -> X_j`, `g: X_j -> X_k`, given as
/// chain maps out of the resolutions.
pub fn compose_derived(g: &ChainMap, f: &ChainMap, rj: &ProjResolution) -> Result<ChainMap> {
    let lifted = lift_through(f, &rj.quasi_iso)?
        .ok_or_else(|| Error::Precondition("map does not lift through the resolution".into()))?;
    Ok(g.compose(&lifted))
}

pub fn derived_endomorphism_algebra(summands: &[Complex], bound: usize) -> Result<DerivedEndo> {
    let r = summands.len();
    if r == 0 {
        return Err(Error::Precondition("no summands".into()));
    }
    let resolutions: Vec<ProjResolution> = summands.iter().map(|x| proj_resolve(x, bound)).collect::<Result<_>>()?;
    let mut homs: Vec<Vec<HomK>> = Vec::with_capacity(r);
    for ri in &resolutions {
        let mut row = Vec::with_capacity(r);
        for x in summands {
            let h = hom_resolved(ri, &x.trimmed(), 0, bound)?;
            if h.known_dim().is_none() {
                return Err(Error::Truncated(bound));
            }
            row.push(h);
        }
        homs.push(row);
    }
    let mut input_basis = Vec::new();
    let mut start = vec![vec![0usize; r]; r];
    for i in 0..r {
        for j in 0..r {
            start[i][j] = input_basis.len();
            input_basis.extend((0..homs[i][j].basis.len()).map(|k| (i, j, k)));
        }
    }
    let n = input_basis.len();
    let mut products = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for (a, &(i, j, ka)) in input_basis.iter().enumerate() {
        for (b, &(j2, k, kb)) in input_basis.iter().enumerate() {
            if j2 != j {
                continue;
            }
            // a * b = b . a in End^op
            let comp = compose_derived(&homs[j][k].basis[kb], &homs[i][j].basis[ka], &resolutions[j])?;
            let c = homs[i][k].coordinates(&comp).expect("composite lies in the Hom space");
            for (t, v) in c.into_iter().enumerate() {
                products[a][b][start[i][k] + t] = v;
            }
        }
    }
    let idempotents: Vec<Vec<Scalar>> = (0..r)
        .map(|i| {
            let mut e = vec![Scalar::zero(); n];
            let c =
                homs[i][i].coordinates(&resolutions[i].quasi_iso.with_target(&homs[i][i].target)).expect("identity");
            for (t, v) in c.into_iter().enumerate() {
                e[start[i][i] + t] = v;
            }
            e
        })
        .collect();
    let names: Vec<String> = (1..=r).map(|i| format!("x{i}")).collect();
    let algebra = Arc::new(FDAlgebra::from_structure_constants(names, &products, &idempotents)?);
    let basic = basic_algebra(&algebra)?;
    Ok(DerivedEndo { algebra, basic, homs, resolutions, input_basis, products, idempotents })
}

impl DerivedEndo {
    /// Position in `input_basis` of the first basis element of `Hom(X_i, X_j)`.
    pub fn offset(&self, i: usize, j: usize) -> usize {
        self.input_basis.iter().position(|&(a, b, _)| (a, b) >= (i, j)).unwrap_or(self.input_basis.len())
    }

    pub fn num_summands(&self) -> usize {
        self.homs.len()
    }
}

impl ChainMap {
    /// Same components with the target complex replaced by an equal-termed one.
    pub(crate) fn with_target(&self, target: &Complex) -> ChainMap {
        ChainMap { source: self.source.clone(), target: target.clone(), components: self.components.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::module::{ext, Module};

    #[test]
    fn stalk_projective_hom() {
        let a = fixtures::kr(3, 2);
        let p = Complex::stalk(&Module::projective(&a, 0), 0);
        let x = Complex::stalk(&Module::simple(&a, 0), 0);
        assert_eq!(hom_homotopy(&p, &x, 0).unwrap().dim, ExtDim::Known(1));
        assert!(hom_homotopy(&x, &x, 0).is_err());
    }

    #[test]
    fn matches_ext() {
        let a = fixtures::kr(3, 2);
        let mods = vec![Module::simple(&a, 0), Module::simple(&a, 1), Module::projective(&a, 0)];
        for x in &mods {
            for y in &mods {
                for n in 0..4 {
                    let h = hom_derived(&Complex::stalk(x, 0), &Complex::stalk(y, 0), n, 6).unwrap();
                    assert_eq!(h.dim, ext(x, y, n as usize, 6).unwrap(), "n={n}");
                }
            }
        }
    }

    #[test]
    fn truncation_is_unknown() {
        let a = fixtures::truncated_polynomial(2);
        let s = Complex::stalk(&Module::simple(&a, 0), 0);
        let h = hom_derived(&s, &s, 5, 3).unwrap();
        assert!(matches!(h.dim, ExtDim::Unknown { .. }));
        assert_eq!(hom_derived(&s, &s, 2, 3).unwrap().dim, ExtDim::Known(1));
    }

    #[test]
    fn endomorphisms_of_regular_stalk() {
        let a = fixtures::kr(2, 2);
        let parts: Vec<Complex> = (0..2).map(|v| Complex::stalk(&Module::projective(&a, v), 0)).collect();
        let e = derived_endomorphism_algebra(&parts, 4).unwrap();
        assert_eq!(e.algebra.dim(), a.dim());
        let cmp = crate::certificate::invariants_compare(&a, &e.basic);
        assert!(cmp.agree());
    }

    #[test]
    fn lifting_identity() {
        let a = fixtures::kr(3, 2);
        let s = Complex::stalk(&Module::simple(&a, 1), 0);
        let r = proj_resolve(&s, 6).unwrap();
        let g = lift_through(&r.quasi_iso, &r.quasi_iso).unwrap().unwrap();
        assert!(g.validate().is_ok());
    }
}
