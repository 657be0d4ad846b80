//! Finite-dimensional algebras given by structure constants on a basis that
//! is homogeneous for a complete set of orthogonal idempotents.
//!
//! Every basis element `b` lives in exactly one Peirce block `e_t A e_s`;
//! `source(b) = s` and `target(b) = t`. Products follow the composition
//! convention of paths: `a * b` is nonzero only when `source(a) == target(b)`.

mod invariants;
mod quiver;
mod triangular;

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, CoordinateSystem, Matrix, Scalar};

pub(crate) use invariants::local_top_dim;
pub use invariants::{
    cartan_matrix, center_dimension, is_selfinjective_local, radical, CartanMatrix, SelfInjectiveLocalVerdict,
};
pub use quiver::{
    build_fd_algebra, presentation_of, Arrow, Path, PathAlgebraPresentation, PathProvenance, Quiver, Relation,
};
pub use triangular::{
    corner_dims, detect_triangular, glue_triangular, product_algebra, Bimodule, TriangularPresentation,
};

/// Sparse coordinate vector: `(basis index, coefficient)` pairs with nonzero coefficients.
pub type Sparse = Vec<(usize, Scalar)>;

/// A monomial `g_1 * ... * g_m * e_vertex` in the algebra generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub vertex: usize,
    /// Generator positions (indices into `generators()`), leftmost factor first.
    pub factors: Vec<usize>,
}

#[derive(Debug)]
pub struct FDAlgebra {
    vertices: Vec<String>,
    labels: Vec<String>,
    source: Vec<usize>,
    target: Vec<usize>,
    idempotents: Vec<usize>,
    table: Vec<Vec<Sparse>>,
    blocks: Vec<Vec<Vec<usize>>>,
    position: Vec<usize>,
    generators: Vec<usize>,
    words: Vec<Word>,
    word_coords: Vec<Sparse>,
    provenance: Option<PathProvenance>,
    radical: OnceLock<Vec<(usize, usize, Vec<Scalar>)>>,
}

impl Clone for FDAlgebra {
    fn clone(&self) -> Self {
        FDAlgebra {
            vertices: self.vertices.clone(),
            labels: self.labels.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            idempotents: self.idempotents.clone(),
            table: self.table.clone(),
            blocks: self.blocks.clone(),
            position: self.position.clone(),
            generators: self.generators.clone(),
            words: self.words.clone(),
            word_coords: self.word_coords.clone(),
            provenance: self.provenance.clone(),
            radical: OnceLock::new(),
        }
    }
}

impl PartialEq for FDAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.source == other.source
            && self.target == other.target
            && self.idempotents == other.idempotents
            && self.table == other.table
    }
}

impl Eq for FDAlgebra {}

/// Raw data of an algebra with a homogeneous basis, before validation.
#[derive(Clone, Debug)]
pub struct HomogeneousData {
    pub vertices: Vec<String>,
    pub labels: Vec<String>,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub idempotents: Vec<usize>,
    pub table: Vec<Vec<Sparse>>,
}

fn sparse_from_dense(v: &[Scalar]) -> Sparse {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

impl FDAlgebra {
    /// Validates homogeneous structure constants and builds the algebra.
    pub fn from_homogeneous(data: HomogeneousData) -> Result<Self> {
        Self::from_homogeneous_with(data, None)
    }

    pub(crate) fn from_homogeneous_with(data: HomogeneousData, provenance: Option<PathProvenance>) -> Result<Self> {
        let HomogeneousData { vertices, labels, source, target, idempotents, table } = data;
        let n = labels.len();
        let nv = vertices.len();
        let bad = |m: String| Err(Error::InvalidAlgebra(m));
        if source.len() != n || target.len() != n || table.len() != n {
            return bad("basis metadata lengths disagree".into());
        }
        if idempotents.len() != nv {
            return bad("one distinguished idempotent per vertex required".into());
        }
        for (v, &e) in idempotents.iter().enumerate() {
            if e >= n || source[e] != v || target[e] != v {
                return bad(format!("idempotent of vertex {} is not in its diagonal block", vertices[v]));
            }
        }
        if source.iter().chain(&target).any(|&v| v >= nv) {
            return bad("basis element attached to an undeclared vertex".into());
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return bad("structure constant table is not square".into());
            }
            for (b, prod) in row.iter().enumerate() {
                if prod.iter().any(|(k, c)| *k >= n || c.is_zero()) {
                    return bad(format!("malformed product entry ({a},{b})"));
                }
                if source[a] != target[b] {
                    if !prod.is_empty() {
                        return bad(format!("{}*{} must vanish", labels[a], labels[b]));
                    }
                    continue;
                }
                for (k, _) in prod {
                    if source[*k] != source[b] || target[*k] != target[a] {
                        return bad(format!("{}*{} leaves its Peirce block", labels[a], labels[b]));
                    }
                }
            }
        }
        // unit laws for idempotents
        for (v, &e) in idempotents.iter().enumerate() {
            for b in 0..n {
                let unit = vec![(b, Scalar::one())];
                let left = &table[e][b];
                let right = &table[b][e];
                if target[b] == v && *left != unit {
                    return bad(format!("e_{} does not act as a left unit on {}", vertices[v], labels[b]));
                }
                if source[b] == v && *right != unit {
                    return bad(format!("e_{} does not act as a right unit on {}", vertices[v], labels[b]));
                }
            }
        }
        let mut blocks = vec![vec![Vec::new(); nv]; nv];
        let mut position = vec![0; n];
        for b in 0..n {
            let blk: &mut Vec<usize> = &mut blocks[source[b]][target[b]];
            position[b] = blk.len();
            blk.push(b);
        }
        let mut alg = FDAlgebra {
            vertices,
            labels,
            source,
            target,
            idempotents,
            table,
            blocks,
            position,
            generators: Vec::new(),
            words: Vec::new(),
            word_coords: Vec::new(),
            provenance,
            radical: OnceLock::new(),
        };
        alg.check_associative()?;
        alg.compute_generators();
        Ok(alg)
    }

    /// Builds an algebra from dense structure constants and idempotent vectors,
    /// changing to a basis adapted to the Peirce decomposition.
    pub fn from_structure_constants(
        vertices: Vec<String>,
        products: &[Vec<Vec<Scalar>>],
        idempotents: &[Vec<Scalar>],
    ) -> Result<Self> {
        Ok(Self::from_structure_constants_with_basis(vertices, products, idempotents)?.0)
    }

    /// Like `from_structure_constants`, also returning the new basis in the
    /// coordinates of the input basis.
    pub fn from_structure_constants_with_basis(
        vertices: Vec<String>,
        products: &[Vec<Vec<Scalar>>],
        idempotents: &[Vec<Scalar>],
    ) -> Result<(Self, Vec<Vec<Scalar>>)> {
        let n = products.len();
        if products.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n))
            || idempotents.iter().any(|e| e.len() != n)
        {
            return Err(Error::DimensionMismatch("structure constants must be n x n x n".into()));
        }
        let mul = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
            let mut out = vec![Scalar::zero(); n];
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.iter().enumerate() {
                    if yj.is_zero() {
                        continue;
                    }
                    let c = xi * yj;
                    for (k, p) in products[i][j].iter().enumerate() {
                        if !p.is_zero() {
                            out[k] += &c * p;
                        }
                    }
                }
            }
            out
        };
        if idempotents.len() != vertices.len() {
            return Err(Error::InvalidAlgebra("one idempotent per vertex required".into()));
        }
        let mut total = vec![Scalar::zero(); n];
        for (i, e) in idempotents.iter().enumerate() {
            for (j, f) in idempotents.iter().enumerate() {
                let p = mul(e, f);
                let expect = if i == j { e.clone() } else { vec![Scalar::zero(); n] };
                if p != expect {
                    return Err(Error::InvalidAlgebra(format!(
                        "idempotents {} and {} are not orthogonal idempotents",
                        vertices[i], vertices[j]
                    )));
                }
            }
            total = linalg::vec_add(&total, e);
        }
        for b in 0..n {
            let u = linalg::unit_vec(n, b);
            if mul(&total, &u) != u || mul(&u, &total) != u {
                return Err(Error::InvalidAlgebra("idempotents do not sum to the identity".into()));
            }
        }
        let nv = vertices.len();
        let mut new_basis: Vec<Vec<Scalar>> = Vec::new();
        let mut source = Vec::new();
        let mut target = Vec::new();
        let mut labels = Vec::new();
        let mut idem_index = vec![0; nv];
        for t in 0..nv {
            for s in 0..nv {
                let mut span: Vec<Vec<Scalar>> = Vec::new();
                if s == t {
                    span.push(idempotents[s].clone());
                }
                for b in 0..n {
                    let u = linalg::unit_vec(n, b);
                    span.push(mul(&mul(&idempotents[t], &u), &idempotents[s]));
                }
                for i in linalg::independent_subset(&span, n) {
                    if s == t && i == 0 {
                        idem_index[s] = new_basis.len();
                        labels.push(format!("e_{}", vertices[s]));
                    } else {
                        labels.push(format!("b{}", new_basis.len()));
                    }
                    new_basis.push(span[i].clone());
                    source.push(s);
                    target.push(t);
                }
            }
        }
        if new_basis.len() != n {
            return Err(Error::InvalidAlgebra("Peirce blocks do not span the algebra".into()));
        }
        let coords = CoordinateSystem::new(&new_basis, n);
        let mut table = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let p = mul(&new_basis[a], &new_basis[b]);
                let c = coords.coords(&p).expect("product lies in the algebra");
                table[a][b] = sparse_from_dense(&c);
            }
        }
        let alg = Self::from_homogeneous(HomogeneousData {
            vertices,
            labels,
            source,
            target,
            idempotents: idem_index,
            table,
        })?;
        Ok((alg, new_basis))
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                if self.source[a] != self.target[b] {
                    continue;
                }
                for c in 0..n {
                    if self.source[b] != self.target[c] {
                        continue;
                    }
                    let mut left = vec![Scalar::zero(); n];
                    for (k, x) in &self.table[a][b] {
                        for (m, y) in &self.table[*k][c] {
                            left[*m] += x * y;
                        }
                    }
                    let mut right = vec![Scalar::zero(); n];
                    for (k, x) in &self.table[b][c] {
                        for (m, y) in &self.table[a][*k] {
                            right[*m] += x * y;
                        }
                    }
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Greedy generating set: a non-idempotent basis element is added whenever
    /// it is not yet in the subalgebra generated by earlier choices.
    fn compute_generators(&mut self) {
        let n = self.dim();
        let mut words: Vec<Word> = Vec::new();
        let mut vecs: Vec<Vec<Scalar>> = Vec::new();
        for (v, &e) in self.idempotents.iter().enumerate() {
            words.push(Word { vertex: v, factors: vec![] });
            vecs.push(linalg::unit_vec(n, e));
        }
        let mut gens: Vec<usize> = Vec::new();
        let mut done: HashSet<(usize, usize)> = HashSet::new();
        for b in 0..n {
            if self.idempotents.contains(&b) {
                continue;
            }
            let span = linalg::subspace_quotient(n, &vecs).expect("lengths");
            if span.contains(&linalg::unit_vec(n, b)) {
                continue;
            }
            gens.push(b);
            let mut changed = true;
            while changed {
                changed = false;
                for i in 0..words.len() {
                    for (gpos, &g) in gens.iter().enumerate() {
                        if !done.insert((i, gpos)) {
                            continue;
                        }
                        let prod = self.mul(&linalg::unit_vec(n, g), &vecs[i]);
                        if linalg::is_zero_vec(&prod) {
                            continue;
                        }
                        let span = linalg::subspace_quotient(n, &vecs).expect("lengths");
                        if span.contains(&prod) {
                            continue;
                        }
                        let mut factors = vec![gpos];
                        factors.extend(words[i].factors.iter().copied());
                        words.push(Word { vertex: words[i].vertex, factors });
                        vecs.push(prod);
                        changed = true;
                    }
                }
            }
        }
        let coords = CoordinateSystem::new(&vecs, n);
        self.word_coords =
            (0..n).map(|b| sparse_from_dense(&coords.coords(&linalg::unit_vec(n, b)).expect("words span A"))).collect();
        self.generators = gens;
        self.words = words;
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn source(&self, b: usize) -> usize {
        self.source[b]
    }

    pub fn target(&self, b: usize) -> usize {
        self.target[b]
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn is_idempotent_basis(&self, b: usize) -> bool {
        self.source[b] == self.target[b] && self.idempotents[self.source[b]] == b
    }

    /// Basis elements of `e_t A e_s`, ascending.
    pub fn block(&self, s: usize, t: usize) -> &[usize] {
        &self.blocks[s][t]
    }

    /// Index of `b` within its Peirce block.
    pub fn position_in_block(&self, b: usize) -> usize {
        self.position[b]
    }

    pub fn product(&self, a: usize, b: usize) -> &Sparse {
        &self.table[a][b]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Expression of basis element `b` in the words.
    pub fn word_expansion(&self, b: usize) -> &Sparse {
        &self.word_coords[b]
    }

    pub fn provenance(&self) -> Option<&PathProvenance> {
        self.provenance.as_ref()
    }

    pub fn basis_vec(&self, b: usize) -> Vec<Scalar> {
        linalg::unit_vec(self.dim(), b)
    }

    pub fn one(&self) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        for &e in &self.idempotents {
            v[e] = Scalar::one();
        }
        v
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() || self.source[a] != self.target[b] {
                    continue;
                }
                let c = xa * yb;
                for (k, p) in &self.table[a][b] {
                    out[*k] += &c * p;
                }
            }
        }
        out
    }

    /// Matrix of `y -> x * y` in the basis.
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for b in 0..n {
            let col = self.mul(x, &linalg::unit_vec(n, b));
            for (k, c) in col.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(k, b, c);
                }
            }
        }
        m
    }

    pub fn opposite(&self) -> FDAlgebra {
        let n = self.dim();
        let table = (0..n).map(|a| (0..n).map(|b| self.table[b][a].clone()).collect()).collect();
        FDAlgebra::from_homogeneous(HomogeneousData {
            vertices: self.vertices.clone(),
            labels: self.labels.clone(),
            source: self.target.clone(),
            target: self.source.clone(),
            idempotents: self.idempotents.clone(),
            table,
        })
        .expect("opposite of a valid algebra is valid")
    }

    /// Corner algebra `eAe` for a set of vertices, with the basis map into `A`.
    pub fn corner(&self, verts: &[usize]) -> (FDAlgebra, Vec<usize>) {
        let mut vs: Vec<usize> = verts.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let local = |v: usize| vs.iter().position(|&w| w == v);
        let basis: Vec<usize> =
            (0..self.dim()).filter(|&b| local(self.source[b]).is_some() && local(self.target[b]).is_some()).collect();
        let index = |b: usize| basis.iter().position(|&x| x == b).expect("closed corner");
        let table = basis
            .iter()
            .map(|&a| {
                basis.iter().map(|&b| self.table[a][b].iter().map(|(k, c)| (index(*k), c.clone())).collect()).collect()
            })
            .collect();
        let alg = FDAlgebra::from_homogeneous(HomogeneousData {
            vertices: vs.iter().map(|&v| self.vertices[v].clone()).collect(),
            labels: basis.iter().map(|&b| self.labels[b].clone()).collect(),
            source: basis.iter().map(|&b| local(self.source[b]).unwrap()).collect(),
            target: basis.iter().map(|&b| local(self.target[b]).unwrap()).collect(),
            idempotents: vs.iter().map(|&v| index(self.idempotents[v])).collect(),
            table,
        })
        .expect("corner of a valid algebra is valid");
        (alg, basis)
    }

    /// Two-sided ideal generated by the idempotents of `verts`, as homogeneous
    /// spanning vectors grouped per Peirce block.
    pub fn idempotent_ideal(&self, verts: &[usize]) -> Vec<Vec<Vec<Vec<Scalar>>>> {
        let n = self.dim();
        let nv = self.num_vertices();
        let mut out = vec![vec![Vec::new(); nv]; nv];
        for &v in verts {
            for s in 0..nv {
                for t in 0..nv {
                    for &a in &self.blocks[v][t] {
                        for &b in &self.blocks[s][v] {
                            let mut p = vec![Scalar::zero(); n];
                            for (k, c) in &self.table[a][b] {
                                p[*k] = c.clone();
                            }
                            if !linalg::is_zero_vec(&p) {
                                out[s][t].push(p);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Quotient `A / A e A` for the vertices in `verts`. Returns the quotient
    /// algebra, the chosen representative basis elements of `A`, and the
    /// surviving vertices of `A`.
    pub fn quotient_by_vertices(&self, verts: &[usize]) -> (FDAlgebra, Vec<usize>, Vec<usize>) {
        let nv = self.num_vertices();
        let ideal = self.idempotent_ideal(verts);
        // per block quotient with standard representatives
        let mut reps: Vec<usize> = Vec::new();
        let mut projections: Vec<Vec<Option<linalg::SubspaceQuotient>>> = vec![vec![None; nv]; nv];
        for s in 0..nv {
            for t in 0..nv {
                let blk = &self.blocks[s][t];
                if blk.is_empty() {
                    continue;
                }
                let local: Vec<Vec<Scalar>> =
                    ideal[s][t].iter().map(|v| blk.iter().map(|&b| v[b].clone()).collect()).collect();
                let q = linalg::subspace_quotient(blk.len(), &local).expect("lengths");
                reps.extend(q.reps.iter().map(|&i| blk[i]));
                projections[s][t] = Some(q);
            }
        }
        reps.sort_unstable();
        let keep: Vec<usize> = (0..nv).filter(|&v| reps.contains(&self.idempotents[v])).collect();
        let local_vertex = |v: usize| keep.iter().position(|&w| w == v).unwrap();
        let index = |b: usize| reps.iter().position(|&x| x == b).unwrap();
        let mut table = vec![vec![Vec::new(); reps.len()]; reps.len()];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                if self.source[a] != self.target[b] {
                    continue;
                }
                let (s, t) = (self.source[b], self.target[a]);
                let blk = &self.blocks[s][t];
                let mut local = vec![Scalar::zero(); blk.len()];
                for (k, c) in &self.table[a][b] {
                    local[self.position[*k]] = c.clone();
                }
                let q = projections[s][t].as_ref().unwrap();
                let pc = q.project(&local);
                table[i][j] = pc
                    .into_iter()
                    .zip(&q.reps)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, &r)| (index(blk[r]), c))
                    .collect();
            }
        }
        let alg = FDAlgebra::from_homogeneous(HomogeneousData {
            vertices: keep.iter().map(|&v| self.vertices[v].clone()).collect(),
            labels: reps.iter().map(|&b| self.labels[b].clone()).collect(),
            source: reps.iter().map(|&b| local_vertex(self.source[b])).collect(),
            target: reps.iter().map(|&b| local_vertex(self.target[b])).collect(),
            idempotents: keep.iter().map(|&v| index(self.idempotents[v])).collect(),
            table,
        })
        .expect("quotient of a valid algebra is valid");
        (alg, reps, keep)
    }

    /// Homogeneous basis of the Jacobson radical, as `(source, target, vector)`.
    pub fn radical_blocks(&self) -> &[(usize, usize, Vec<Scalar>)] {
        self.radical.get_or_init(|| invariants::homogeneous_radical(self))
    }

    pub fn radical_dim(&self) -> usize {
        self.radical_blocks().len()
    }

    pub fn into_arc(self) -> Arc<FDAlgebra> {
        Arc::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::int;

    #[test]
    fn opposite_is_involutive() {
        let a = fixtures::kr(3, 2);
        assert_eq!(a.opposite().opposite(), *a);
    }

    #[test]
    fn opposite_of_commutative_local() {
        let c = fixtures::truncated_polynomial(2);
        assert_eq!(c.opposite(), *c);
    }

    #[test]
    fn opposite_flips_zero_corner() {
        let a = fixtures::kr(3, 2);
        let op = a.opposite();
        let (x, y) = (a.vertex_index("x").unwrap(), a.vertex_index("y").unwrap());
        // e_y A e_x (paths x -> y) has dim 2; in the opposite it becomes e_x A^op e_y
        assert_eq!(a.block(x, y).len(), 2);
        assert_eq!(op.block(y, x).len(), 2);
        assert_eq!(op.block(x, y).len(), 0);
    }

    #[test]
    fn structure_constants_are_normalized() {
        // 2x2 matrices with basis E11, E12, E21, E22 and idempotents E11, E22
        let unit = |i: usize, j: usize| (i, j);
        let elems = [unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)];
        let mut products = vec![vec![vec![int(0); 4]; 4]; 4];
        for (a, &(i, j)) in elems.iter().enumerate() {
            for (b, &(k, l)) in elems.iter().enumerate() {
                if j == k {
                    let c = elems.iter().position(|&e| e == (i, l)).unwrap();
                    products[a][b][c] = int(1);
                }
            }
        }
        let idem = vec![linalg::unit_vec(4, 0), linalg::unit_vec(4, 3)];
        let m2 = FDAlgebra::from_structure_constants(vec!["1".into(), "2".into()], &products, &idem).unwrap();
        assert_eq!(m2.dim(), 4);
        assert_eq!(m2.block(0, 1).len(), 1);
        assert_eq!(m2.block(1, 0).len(), 1);
    }

    #[test]
    fn rejects_non_associative_table() {
        let mut data = HomogeneousData {
            vertices: vec!["v".into()],
            labels: vec!["e_v".into(), "t".into()],
            source: vec![0, 0],
            target: vec![0, 0],
            idempotents: vec![0],
            table: vec![vec![vec![(0, int(1))], vec![(1, int(1))]], vec![vec![(1, int(1))], vec![(0, int(1))]]],
        };
        // t^2 = 1 is associative (group algebra of C2)
        assert!(FDAlgebra::from_homogeneous(data.clone()).is_ok());
        data.table[1][1] = vec![(0, int(1)), (1, int(1))];
        // t^2 = 1 + t still associative (commutative, generated by one element)
        assert!(FDAlgebra::from_homogeneous(data.clone()).is_ok());
        data.table[0][1] = vec![(1, int(2))];
        assert!(FDAlgebra::from_homogeneous(data).is_err());
    }

    #[test]
    fn generators_of_path_algebra_are_arrows() {
        let a = fixtures::kr(3, 2);
        let names: Vec<&str> = a.generators().iter().map(|&g| a.labels()[g].as_str()).collect();
        assert_eq!(names, vec!["alpha", "delta", "theta"]);
    }

    #[test]
    fn quotient_by_corner() {
        let a = fixtures::kr(3, 2);
        let x = a.vertex_index("x").unwrap();
        let (q, _, keep) = a.quotient_by_vertices(&[x]);
        assert_eq!(q.dim(), 2);
        assert_eq!(keep, vec![a.vertex_index("y").unwrap()]);
    }
}
