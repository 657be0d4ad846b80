//! Quivers with relations and the construction of `kQ/(I + J^N)`.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::Zero;

use super::{FDAlgebra, HomogeneousData, Sparse};
use crate::error::{Error, Result};
use crate::linalg::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

/// A path as a list of arrow names in traversal order.
pub type Path = Vec<String>;

/// A linear combination of paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Path)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathAlgebraPresentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub nilpotency_bound: usize,
}

/// How an algebra was obtained from a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathProvenance {
    pub presentation: PathAlgebraPresentation,
    /// Arrow indices of the chosen path for each basis element, traversal order.
    pub basis_paths: Vec<Vec<usize>>,
    /// True when raising the bound would enlarge the algebra, i.e. `J^N` is
    /// not contained in `I + J^(N+1)`.
    pub truncation_active: bool,
}

impl Quiver {
    pub fn new(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Self {
        Quiver {
            vertices: vertices.iter().map(|v| v.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|(n, s, t)| Arrow { name: n.to_string(), source: s.to_string(), target: t.to_string() })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate vertex {v:?}")));
            }
        }
        let mut names = HashSet::new();
        for a in &self.arrows {
            if !names.insert(a.name.as_str()) || seen.contains(a.name.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate name {:?}", a.name)));
            }
            for end in [&a.source, &a.target] {
                if !seen.contains(end.as_str()) {
                    return Err(Error::UnknownVertex(end.clone()));
                }
            }
        }
        Ok(())
    }

    fn vertex(&self, name: &str) -> usize {
        self.vertices.iter().position(|v| v == name).expect("validated vertex")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct RawPath {
    source: usize,
    target: usize,
    arrows: Vec<usize>,
}

struct Resolved {
    arrow_source: Vec<usize>,
    arrow_target: Vec<usize>,
    relations: Vec<(usize, usize, Vec<(Scalar, Vec<usize>)>)>,
}

impl PathAlgebraPresentation {
    pub fn new(quiver: Quiver, relations: Vec<Relation>, nilpotency_bound: usize) -> Self {
        PathAlgebraPresentation { quiver, relations, nilpotency_bound }
    }

    fn resolve(&self) -> Result<Resolved> {
        self.quiver.validate()?;
        if self.nilpotency_bound == 0 {
            return Err(Error::InvalidPresentation("nilpotency bound must be at least 1".into()));
        }
        let q = &self.quiver;
        let arrow_source: Vec<usize> = q.arrows.iter().map(|a| q.vertex(&a.source)).collect();
        let arrow_target: Vec<usize> = q.arrows.iter().map(|a| q.vertex(&a.target)).collect();
        let index: HashMap<&str, usize> = q.arrows.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
        let mut relations = Vec::new();
        for rel in &self.relations {
            if rel.terms.is_empty() {
                return Err(Error::InvalidPresentation("empty relation".into()));
            }
            let mut ends: Option<(usize, usize)> = None;
            let mut terms = Vec::new();
            for (c, path) in &rel.terms {
                if path.len() < 2 {
                    return Err(Error::InvalidPresentation(format!("relation path {path:?} has length below 2")));
                }
                let mut ids = Vec::new();
                for name in path {
                    ids.push(*index.get(name.as_str()).ok_or_else(|| Error::UnknownArrow(name.clone()))?);
                }
                for w in ids.windows(2) {
                    if arrow_target[w[0]] != arrow_source[w[1]] {
                        return Err(Error::NonComposable(path.join(" then ")));
                    }
                }
                let e = (arrow_source[ids[0]], arrow_target[*ids.last().unwrap()]);
                match ends {
                    None => ends = Some(e),
                    Some(prev) if prev != e => {
                        return Err(Error::InvalidPresentation(
                            "paths of one relation must share source and target".into(),
                        ))
                    }
                    _ => {}
                }
                if !c.is_zero() {
                    terms.push((c.clone(), ids));
                }
            }
            let (s, t) = ends.unwrap();
            relations.push((s, t, terms));
        }
        Ok(Resolved { arrow_source, arrow_target, relations })
    }
}

/// All paths of length below `bound`, grouped by `(source, target)`.
fn enumerate_paths(nv: usize, r: &Resolved, bound: usize) -> BTreeMap<(usize, usize), Vec<RawPath>> {
    let mut out: BTreeMap<(usize, usize), Vec<RawPath>> = BTreeMap::new();
    let mut frontier: Vec<RawPath> = (0..nv).map(|v| RawPath { source: v, target: v, arrows: vec![] }).collect();
    let mut len = 0;
    while !frontier.is_empty() && len < bound {
        let mut next = Vec::new();
        for p in frontier {
            for (a, &s) in r.arrow_source.iter().enumerate() {
                if s == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a);
                    next.push(RawPath { source: p.source, target: r.arrow_target[a], arrows });
                }
            }
            out.entry((p.source, p.target)).or_default().push(p);
        }
        frontier = next;
        len += 1;
    }
    out
}

/// Per-block quotient of path space by the truncated ideal.
struct BlockQuotient {
    paths: Vec<RawPath>,
    index: HashMap<Vec<usize>, usize>,
    quotient: linalg::SubspaceQuotient,
}

fn block_quotients(nv: usize, r: &Resolved, bound: usize) -> BTreeMap<(usize, usize), BlockQuotient> {
    let all = enumerate_paths(nv, r, bound);
    // paths ending at / starting from each vertex, for two-sided multiples
    let mut into: Vec<Vec<&RawPath>> = vec![Vec::new(); nv];
    let mut from: Vec<Vec<&RawPath>> = vec![Vec::new(); nv];
    for p in all.values().flatten() {
        into[p.target].push(p);
        from[p.source].push(p);
    }
    let mut out = BTreeMap::new();
    for (&(s, t), paths) in &all {
        // longest paths first so they become pivots and short paths survive
        let mut ordered = paths.clone();
        ordered.sort_by(|a, b| b.arrows.len().cmp(&a.arrows.len()).then(a.arrows.cmp(&b.arrows)));
        let index: HashMap<Vec<usize>, usize> =
            ordered.iter().enumerate().map(|(i, p)| (p.arrows.clone(), i)).collect();
        let n = ordered.len();
        let mut gens = Vec::new();
        for (rs, rt, terms) in &r.relations {
            for v in into[*rs].iter().filter(|v| v.source == s) {
                for u in from[*rt].iter().filter(|u| u.target == t) {
                    let mut vec = vec![Scalar::zero(); n];
                    let mut any = false;
                    for (c, p) in terms {
                        let mut full = v.arrows.clone();
                        full.extend(p);
                        full.extend(&u.arrows);
                        if full.len() < bound {
                            vec[index[&full]] += c;
                            any = true;
                        }
                    }
                    if any && !linalg::is_zero_vec(&vec) {
                        gens.push(vec);
                    }
                }
            }
        }
        let quotient = linalg::subspace_quotient(n, &gens).expect("uniform lengths");
        out.insert((s, t), BlockQuotient { paths: ordered, index, quotient });
    }
    out
}

fn label(q: &Quiver, p: &RawPath) -> String {
    if p.arrows.is_empty() {
        format!("e_{}", q.vertices[p.source])
    } else {
        p.arrows.iter().rev().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }
}

/// Builds `kQ/(I + J^N)` with a basis of shortest surviving paths.
pub fn build_fd_algebra(p: &PathAlgebraPresentation) -> Result<FDAlgebra> {
    let r = p.resolve()?;
    let q = &p.quiver;
    let nv = q.vertices.len();
    let bound = p.nilpotency_bound;
    let blocks = block_quotients(nv, &r, bound);

    let mut basis: Vec<RawPath> = Vec::new();
    for bq in blocks.values() {
        for &i in &bq.quotient.reps {
            basis.push(bq.paths[i].clone());
        }
    }
    basis.sort_by(|a, b| {
        let trivial = |x: &RawPath| if x.arrows.is_empty() { 0 } else { 1 };
        trivial(a).cmp(&trivial(b)).then(a.arrows.len().cmp(&b.arrows.len())).then_with(|| {
            if a.arrows.is_empty() {
                a.source.cmp(&b.source)
            } else {
                label(q, a).cmp(&label(q, b))
            }
        })
    });
    let position: HashMap<Vec<usize>, usize> =
        basis.iter().enumerate().filter(|(_, b)| !b.arrows.is_empty()).map(|(i, b)| (b.arrows.clone(), i)).collect();
    let idempotents: Vec<usize> = (0..nv).collect();
    if (0..nv).any(|v| !basis[v].arrows.is_empty() || basis[v].source != v) {
        return Err(Error::InvalidPresentation("a trivial path lies in the ideal".into()));
    }
    let lookup = |bp: &RawPath| -> usize {
        if bp.arrows.is_empty() {
            bp.source
        } else {
            position[&bp.arrows]
        }
    };

    let n = basis.len();
    let mut table: Vec<Vec<Sparse>> = vec![vec![Vec::new(); n]; n];
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            if a.source != b.target {
                continue;
            }
            let mut full = b.arrows.clone();
            full.extend(&a.arrows);
            if full.len() >= bound {
                continue;
            }
            let bq = &blocks[&(b.source, a.target)];
            let mut v = vec![Scalar::zero(); bq.paths.len()];
            v[bq.index[&full]] = linalg::one();
            let coords = bq.quotient.project(&v);
            table[i][j] = coords
                .into_iter()
                .zip(&bq.quotient.reps)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, &rep)| (lookup(&bq.paths[rep]), c))
                .collect();
            table[i][j].sort_by_key(|(k, _)| *k);
        }
    }

    let larger = block_quotients(nv, &r, bound + 1);
    let larger_dim: usize = larger.values().map(|b| b.quotient.quotient_dim()).sum();
    let provenance = PathProvenance {
        presentation: p.clone(),
        basis_paths: basis.iter().map(|b| b.arrows.clone()).collect(),
        truncation_active: larger_dim > n,
    };
    FDAlgebra::from_homogeneous_with(
        HomogeneousData {
            vertices: q.vertices.clone(),
            labels: basis.iter().map(|b| label(q, b)).collect(),
            source: basis.iter().map(|b| b.source).collect(),
            target: basis.iter().map(|b| b.target).collect(),
            idempotents,
            table,
        },
        Some(provenance),
    )
}

/// A quiver presentation of an algebra whose generators and idempotents span
/// it multiplicatively. Arrows are the generators; relations span the kernel of
/// path evaluation below the Loewy length. Algebras built from a presentation
/// return it unchanged.
pub fn presentation_of(a: &FDAlgebra) -> Result<PathAlgebraPresentation> {
    if let Some(p) = a.provenance() {
        return Ok(p.presentation.clone());
    }
    let vertices = a.vertices().to_vec();
    // generators independent modulo rad^2
    let rad: Vec<&Vec<Scalar>> = a.radical_blocks().iter().map(|(_, _, v)| v).collect();
    let mut span: Vec<Vec<Scalar>> = Vec::new();
    for x in &rad {
        for y in &rad {
            let p = a.mul(x, y);
            if !linalg::is_zero_vec(&p) {
                span.push(p);
            }
        }
    }
    let rank = |vs: &[Vec<Scalar>]| {
        if vs.is_empty() {
            0
        } else {
            linalg::Matrix::from_columns(vs, a.dim()).expect("lengths").rank()
        }
    };
    let mut r = rank(&span);
    let mut gens = Vec::new();
    for &g in a.generators() {
        span.push(a.basis_vec(g));
        let r2 = rank(&span);
        if r2 > r {
            gens.push(g);
            r = r2;
        } else {
            span.pop();
        }
    }
    let mut taken: HashSet<String> = vertices.iter().cloned().collect();
    let mut arrows = Vec::new();
    for (i, &g) in gens.iter().enumerate() {
        let mut name = a.labels()[g].clone();
        let mut k = i;
        while name.is_empty() || taken.contains(&name) {
            name = format!("g{k}");
            k += gens.len();
        }
        taken.insert(name.clone());
        arrows.push(Arrow { name, source: vertices[a.source(g)].clone(), target: vertices[a.target(g)].clone() });
    }
    // (first source, arrows in traversal order, value in A)
    let mut layer: Vec<(usize, Vec<usize>, Vec<Scalar>)> =
        gens.iter().enumerate().map(|(i, &g)| (a.source(g), vec![i], a.basis_vec(g))).collect();
    let mut longer: BTreeMap<(usize, usize), Vec<(Vec<usize>, Vec<Scalar>)>> = BTreeMap::new();
    let mut bound = 1;
    while !layer.iter().all(|(_, _, v)| linalg::is_zero_vec(v)) {
        bound += 1;
        if bound > a.dim() + 1 {
            return Err(Error::InvalidAlgebra("generators are not nilpotent".into()));
        }
        let mut next = Vec::new();
        for (s, p, v) in layer.iter().filter(|(_, _, v)| !linalg::is_zero_vec(v)) {
            let end = a.target(gens[*p.last().unwrap()]);
            for (i, &g) in gens.iter().enumerate() {
                if a.source(g) != end {
                    continue;
                }
                let mut q = p.clone();
                q.push(i);
                next.push((*s, q, a.mul(&a.basis_vec(g), v)));
            }
        }
        layer = next;
        if !layer.iter().all(|(_, _, v)| linalg::is_zero_vec(v)) {
            for (s, p, v) in &layer {
                let t = a.target(gens[*p.last().unwrap()]);
                longer.entry((*s, t)).or_default().push((p.clone(), v.clone()));
            }
        }
    }
    let mut relations = Vec::new();
    for paths in longer.values() {
        let cols: Vec<Vec<Scalar>> = paths.iter().map(|(_, v)| v.clone()).collect();
        for k in linalg::Matrix::from_columns(&cols, a.dim())?.kernel() {
            let terms = k
                .into_iter()
                .zip(paths)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, (p, _))| (c, p.iter().map(|&i| arrows[i].name.clone()).collect()))
                .collect();
            relations.push(Relation { terms });
        }
    }
    let presentation = PathAlgebraPresentation::new(Quiver { vertices, arrows }, relations, bound);
    if build_fd_algebra(&presentation)?.dim() != a.dim() {
        return Err(Error::InvalidAlgebra("generators do not span the algebra".into()));
    }
    Ok(presentation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn path(names: &[&str]) -> Path {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn kr_presentation(a: usize, b: usize, n: usize) -> PathAlgebraPresentation {
        let quiver = Quiver::new(&["x", "y"], &[("delta", "x", "x"), ("alpha", "x", "y"), ("theta", "y", "y")]);
        let relations = vec![
            Relation { terms: vec![(int(1), vec!["delta".to_string(); a])] },
            Relation { terms: vec![(int(1), vec!["theta".to_string(); b])] },
            Relation { terms: vec![(int(1), path(&["delta", "alpha"])), (int(-1), path(&["alpha", "theta"]))] },
        ];
        PathAlgebraPresentation::new(quiver, relations, n)
    }

    #[test]
    fn kr_dimensions() {
        let a = build_fd_algebra(&kr_presentation(3, 2, 5)).unwrap();
        assert_eq!(a.dim(), 7);
        let (x, y) = (0, 1);
        assert_eq!(a.block(x, x).len(), 3);
        assert_eq!(a.block(y, y).len(), 2);
        assert_eq!(a.block(x, y).len(), 2);
        assert_eq!(a.block(y, x).len(), 0);
        assert!(!a.provenance().unwrap().truncation_active);
    }

    #[test]
    fn corner_dimension_is_min() {
        for a in 1..=4 {
            for b in 1..=4 {
                let alg = build_fd_algebra(&crate::fixtures::kr_presentation(a, b)).unwrap();
                assert_eq!(alg.block(0, 1).len(), a.min(b), "a={a} b={b}");
                assert_eq!(alg.dim(), a + b + a.min(b));
            }
        }
    }

    #[test]
    fn labels_use_composition_order() {
        let a = build_fd_algebra(&kr_presentation(3, 2, 5)).unwrap();
        assert!(a.label_index("alpha*delta").is_some() || a.label_index("theta*alpha").is_some());
        assert_eq!(a.labels()[0], "e_x");
    }

    #[test]
    fn single_vertex_field() {
        let p = PathAlgebraPresentation::new(Quiver::new(&["v"], &[]), vec![], 1);
        assert_eq!(build_fd_algebra(&p).unwrap().dim(), 1);
    }

    #[test]
    fn a2_path_algebra() {
        let p = PathAlgebraPresentation::new(Quiver::new(&["x", "y"], &[("a", "x", "y")]), vec![], 2);
        let alg = build_fd_algebra(&p).unwrap();
        assert_eq!(alg.dim(), 3);
    }

    #[test]
    fn truncation_is_reported() {
        let p = PathAlgebraPresentation::new(Quiver::new(&["v"], &[("t", "v", "v")]), vec![], 3);
        let alg = build_fd_algebra(&p).unwrap();
        assert_eq!(alg.dim(), 3);
        assert!(alg.provenance().unwrap().truncation_active);
    }

    #[test]
    fn errors() {
        let mut p = kr_presentation(3, 2, 5);
        p.relations.push(Relation { terms: vec![(int(1), path(&["delta", "gamma"]))] });
        assert_eq!(build_fd_algebra(&p).unwrap_err(), Error::UnknownArrow("gamma".into()));
        let mut p = kr_presentation(3, 2, 5);
        p.relations.push(Relation { terms: vec![(int(1), path(&["alpha", "delta"]))] });
        assert!(matches!(build_fd_algebra(&p).unwrap_err(), Error::NonComposable(_)));
        let mut p = kr_presentation(3, 2, 5);
        p.relations.push(Relation { terms: vec![(int(1), path(&["alpha"]))] });
        assert!(matches!(build_fd_algebra(&p).unwrap_err(), Error::InvalidPresentation(_)));
    }

    #[test]
    fn presentation_of_structure_constant_algebras() {
        use crate::algebra::{cartan_matrix, center_dimension, glue_triangular, Bimodule};
        let b = crate::fixtures::truncated_polynomial(3);
        let c = crate::fixtures::a2();
        let tp = glue_triangular(&b, &c, &Bimodule::zero(&b, &c)).unwrap();
        let kr = crate::fixtures::kr(2, 2).opposite();
        for a in [tp.ambient.as_ref().clone(), kr] {
            let p = presentation_of(&a).unwrap();
            let r = build_fd_algebra(&p).unwrap();
            assert_eq!(r.dim(), a.dim());
            assert_eq!(cartan_matrix(&r).unwrap().determinant, cartan_matrix(&a).unwrap().determinant);
            assert_eq!(center_dimension(&r), center_dimension(&a));
            assert_eq!(presentation_of(&r).unwrap(), p);
        }
    }
}
