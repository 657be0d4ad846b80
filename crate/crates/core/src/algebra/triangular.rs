//! Triangular matrix algebras `[[B, 0], [M, C]]`.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::{FDAlgebra, HomogeneousData, Sparse};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Scalar};

/// A `C`-`B`-bimodule. `left[c]` is the matrix of `m -> c*m` and `right[b]`
/// the matrix of `m -> m*b`, both in the basis of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub dim: usize,
    pub labels: Vec<String>,
    pub left: Vec<Matrix>,
    pub right: Vec<Matrix>,
}

impl Bimodule {
    pub fn zero(b: &FDAlgebra, c: &FDAlgebra) -> Self {
        Bimodule {
            dim: 0,
            labels: vec![],
            left: vec![Matrix::zeros(0, 0); c.dim()],
            right: vec![Matrix::zeros(0, 0); b.dim()],
        }
    }

    /// Checks the module axioms on basis elements and the bimodule
    /// compatibility `(c*m)*b = c*(m*b)`.
    pub fn validate(&self, b: &FDAlgebra, c: &FDAlgebra) -> Result<()> {
        if self.left.len() != c.dim() || self.right.len() != b.dim() || self.labels.len() != self.dim {
            return Err(Error::DimensionMismatch("bimodule action counts".into()));
        }
        for m in self.left.iter().chain(&self.right) {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(Error::DimensionMismatch("bimodule action matrix shape".into()));
            }
        }
        let id = Matrix::identity(self.dim);
        let combine = |mats: &[Matrix], v: &Sparse| {
            let mut out = Matrix::zeros(self.dim, self.dim);
            for (k, s) in v {
                out.axpy(s, &mats[*k]);
            }
            out
        };
        if combine(&self.left, &sparse_unit(c)) != id {
            return Err(Error::ActionAxiom("unit of C does not act as identity".into()));
        }
        if combine(&self.right, &sparse_unit(b)) != id {
            return Err(Error::ActionAxiom("unit of B does not act as identity".into()));
        }
        for x in 0..c.dim() {
            for y in 0..c.dim() {
                let lhs = combine(&self.left, c.product(x, y));
                if lhs != self.left[x].mul(&self.left[y]) {
                    return Err(Error::ActionAxiom(format!(
                        "left action: ({}*{})*m differs from {}*({}*m)",
                        c.labels()[x],
                        c.labels()[y],
                        c.labels()[x],
                        c.labels()[y]
                    )));
                }
            }
        }
        for x in 0..b.dim() {
            for y in 0..b.dim() {
                let lhs = combine(&self.right, b.product(x, y));
                if lhs != self.right[y].mul(&self.right[x]) {
                    return Err(Error::ActionAxiom(format!(
                        "right action: m*({}*{}) differs from (m*{})*{}",
                        b.labels()[x],
                        b.labels()[y],
                        b.labels()[x],
                        b.labels()[y]
                    )));
                }
            }
        }
        for x in 0..c.dim() {
            for y in 0..b.dim() {
                if self.left[x].mul(&self.right[y]) != self.right[y].mul(&self.left[x]) {
                    return Err(Error::ActionAxiom(format!(
                        "({}*m)*{} differs from {}*(m*{})",
                        c.labels()[x],
                        b.labels()[y],
                        c.labels()[x],
                        b.labels()[y]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Rewrites the basis so each element lies in some `e_t M e_s`.
    /// Returns the new bimodule with the `(s, t)` pair of each basis element.
    fn homogenize(&self, b: &FDAlgebra, c: &FDAlgebra) -> (Bimodule, Vec<(usize, usize)>) {
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        let mut ends = Vec::new();
        for t in 0..c.num_vertices() {
            for s in 0..b.num_vertices() {
                let p = self.left[c.idempotent(t)].mul(&self.right[b.idempotent(s)]);
                for v in p.column_space() {
                    basis.push(v);
                    ends.push((s, t));
                }
            }
        }
        let already_standard =
            ends.len() == self.dim && basis.iter().enumerate().all(|(i, v)| *v == linalg::unit_vec(self.dim, i));
        if already_standard {
            return (self.clone(), ends);
        }
        let change = Matrix::from_columns(&basis, self.dim).expect("lengths");
        let inv = change.inverse().expect("Peirce decomposition of M is a basis");
        let conj = |m: &Matrix| inv.mul(m).mul(&change);
        let labels = (0..self.dim).map(|i| format!("m{i}")).collect();
        (
            Bimodule {
                dim: self.dim,
                labels,
                left: self.left.iter().map(conj).collect(),
                right: self.right.iter().map(conj).collect(),
            },
            ends,
        )
    }
}

fn sparse_unit(a: &FDAlgebra) -> Sparse {
    a.idempotents().iter().map(|&e| (e, Scalar::one())).collect()
}

fn matrix_column_sparse(m: &Matrix, col: usize, offset: usize) -> Sparse {
    (0..m.rows()).filter(|&r| !m.get(r, col).is_zero()).map(|r| (offset + r, m.get(r, col).clone())).collect()
}

#[derive(Clone, Debug)]
pub struct TriangularPresentation {
    pub ambient: Arc<FDAlgebra>,
    /// Vertices of `A` making up `e_B` and `e_C`.
    pub b_vertices: Vec<usize>,
    pub c_vertices: Vec<usize>,
    pub b: Arc<FDAlgebra>,
    pub c: Arc<FDAlgebra>,
    pub m: Bimodule,
    /// Basis index in `A` of each basis element of `B`, `C` and `M`.
    pub b_embedding: Vec<usize>,
    pub c_embedding: Vec<usize>,
    pub m_embedding: Vec<usize>,
}

impl TriangularPresentation {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.b.dim(), self.c.dim(), self.m.dim)
    }
}

/// Builds `A = [[B, 0], [M, C]]`. Vertices of `B` come first.
pub fn glue_triangular(b: &FDAlgebra, c: &FDAlgebra, m: &Bimodule) -> Result<TriangularPresentation> {
    m.validate(b, c)?;
    let (m, ends) = m.homogenize(b, c);
    let nb = b.dim();
    let nc = c.dim();
    let n = nb + nc + m.dim;
    let vb = b.num_vertices();
    let clash = b.vertices().iter().any(|v| c.vertices().contains(v));
    let mut vertices: Vec<String> = Vec::new();
    for v in b.vertices() {
        vertices.push(if clash { format!("B.{v}") } else { v.clone() });
    }
    for v in c.vertices() {
        vertices.push(if clash { format!("C.{v}") } else { v.clone() });
    }
    let mut labels = Vec::with_capacity(n);
    let mut source = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    for i in 0..nb {
        labels.push(if clash { format!("B.{}", b.labels()[i]) } else { b.labels()[i].clone() });
        source.push(b.source(i));
        target.push(b.target(i));
    }
    for i in 0..nc {
        labels.push(if clash { format!("C.{}", c.labels()[i]) } else { c.labels()[i].clone() });
        source.push(vb + c.source(i));
        target.push(vb + c.target(i));
    }
    for (i, &(s, t)) in ends.iter().enumerate() {
        labels.push(m.labels[i].clone());
        source.push(s);
        target.push(vb + t);
    }
    let mut table: Vec<Vec<Sparse>> = vec![vec![Vec::new(); n]; n];
    for x in 0..nb {
        for y in 0..nb {
            table[x][y] = b.product(x, y).clone();
        }
    }
    for x in 0..nc {
        for y in 0..nc {
            table[nb + x][nb + y] = c.product(x, y).iter().map(|(k, s)| (nb + k, s.clone())).collect();
        }
    }
    let mo = nb + nc;
    for j in 0..m.dim {
        for x in 0..nc {
            table[nb + x][mo + j] = matrix_column_sparse(&m.left[x], j, mo);
        }
        for y in 0..nb {
            table[mo + j][y] = matrix_column_sparse(&m.right[y], j, mo);
        }
    }
    let mut idempotents: Vec<usize> = b.idempotents().to_vec();
    idempotents.extend(c.idempotents().iter().map(|e| nb + e));
    let ambient =
        FDAlgebra::from_homogeneous(HomogeneousData { vertices, labels, source, target, idempotents, table })?;
    Ok(TriangularPresentation {
        ambient: Arc::new(ambient),
        b_vertices: (0..vb).collect(),
        c_vertices: (vb..vb + c.num_vertices()).collect(),
        b: Arc::new(b.clone()),
        c: Arc::new(c.clone()),
        m,
        b_embedding: (0..nb).collect(),
        c_embedding: (nb..nb + nc).collect(),
        m_embedding: (mo..n).collect(),
    })
}

/// Recognizes `A` as triangular with `e_B = e` when `e A (1-e) = 0`.
pub fn detect_triangular(a: &Arc<FDAlgebra>, e: &[usize]) -> Option<TriangularPresentation> {
    let nv = a.num_vertices();
    let in_e = |v: usize| e.contains(&v);
    let f: Vec<usize> = (0..nv).filter(|&v| !in_e(v)).collect();
    // e A f: elements with source in f and target in e
    for &s in &f {
        for &t in e {
            if !a.block(s, t).is_empty() {
                return None;
            }
        }
    }
    let (b, b_embedding) = a.corner(e);
    let (c, c_embedding) = a.corner(&f);
    let m_embedding: Vec<usize> = (0..a.dim()).filter(|&x| in_e(a.source(x)) && !in_e(a.target(x))).collect();
    let md = m_embedding.len();
    let pos = |x: usize| m_embedding.iter().position(|&y| y == x).expect("product stays in M");
    let column = |prod: &Sparse| {
        let mut v = vec![Scalar::zero(); md];
        for (k, s) in prod {
            v[pos(*k)] = s.clone();
        }
        v
    };
    let left: Vec<Matrix> = c_embedding
        .iter()
        .map(|&cx| {
            let cols: Vec<Vec<Scalar>> = m_embedding.iter().map(|&mx| column(a.product(cx, mx))).collect();
            Matrix::from_columns(&cols, md).expect("lengths")
        })
        .collect();
    let right: Vec<Matrix> = b_embedding
        .iter()
        .map(|&bx| {
            let cols: Vec<Vec<Scalar>> = m_embedding.iter().map(|&mx| column(a.product(mx, bx))).collect();
            Matrix::from_columns(&cols, md).expect("lengths")
        })
        .collect();
    let m = Bimodule { dim: md, labels: m_embedding.iter().map(|&x| a.labels()[x].clone()).collect(), left, right };
    let mut b_vertices = e.to_vec();
    b_vertices.sort_unstable();
    Some(TriangularPresentation {
        ambient: a.clone(),
        b_vertices,
        c_vertices: f,
        b: Arc::new(b),
        c: Arc::new(c),
        m,
        b_embedding,
        c_embedding,
        m_embedding,
    })
}

/// Direct product `B x C`.
pub fn product_algebra(b: &FDAlgebra, c: &FDAlgebra) -> FDAlgebra {
    let m = Bimodule::zero(b, c);
    let p = glue_triangular(b, c, &m).expect("zero bimodule is valid");
    Arc::try_unwrap(p.ambient).unwrap_or_else(|a| (*a).clone())
}

/// `dims[s][t] = dim e_t A e_s`.
pub fn corner_dims(a: &FDAlgebra) -> Vec<Vec<usize>> {
    let nv = a.num_vertices();
    (0..nv).map(|s| (0..nv).map(|t| a.block(s, t).len()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cartan_matrix;
    use crate::fixtures;
    use crate::linalg::int;

    fn field() -> FDAlgebra {
        (*fixtures::truncated_polynomial(1)).clone()
    }

    fn one_dim_bimodule(b: &FDAlgebra, c: &FDAlgebra) -> Bimodule {
        Bimodule {
            dim: 1,
            labels: vec!["m".into()],
            left: (0..c.dim())
                .map(|x| if c.is_idempotent_basis(x) { Matrix::identity(1) } else { Matrix::zeros(1, 1) })
                .collect(),
            right: (0..b.dim())
                .map(|x| if b.is_idempotent_basis(x) { Matrix::identity(1) } else { Matrix::zeros(1, 1) })
                .collect(),
        }
    }

    #[test]
    fn one_point_extension_is_a2() {
        let k = field();
        let p = glue_triangular(&k, &k, &one_dim_bimodule(&k, &k)).unwrap();
        assert_eq!(p.ambient.dim(), 3);
        let c = cartan_matrix(&p.ambient).unwrap();
        assert_eq!(c.entries, cartan_matrix(&fixtures::a2()).unwrap().entries);
    }

    #[test]
    fn zero_bimodule_gives_product() {
        let k = field();
        let a = product_algebra(&k, &k);
        assert_eq!(a.dim(), 2);
        assert_eq!(crate::algebra::center_dimension(&a), 2);
    }

    #[test]
    fn glue_matches_kr() {
        let kr = fixtures::kr(3, 2);
        let p = detect_triangular(&kr, &[kr.vertex_index("x").unwrap()]).unwrap();
        assert_eq!(p.dims(), (3, 2, 2));
        let glued = glue_triangular(&p.b, &p.c, &p.m).unwrap();
        assert_eq!(glued.ambient.dim(), 7);
        assert_eq!(corner_dims(&glued.ambient), corner_dims(&kr));
        // structure constants agree after the basis permutation recorded by detection
        let perm: Vec<usize> = p.b_embedding.iter().chain(&p.c_embedding).chain(&p.m_embedding).copied().collect();
        for x in 0..7 {
            for y in 0..7 {
                let mut mapped: Vec<(usize, Scalar)> =
                    glued.ambient.product(x, y).iter().map(|(k, c)| (perm[*k], c.clone())).collect();
                mapped.sort_by_key(|(k, _)| *k);
                assert_eq!(&mapped, kr.product(perm[x], perm[y]));
            }
        }
        let again = detect_triangular(&glued.ambient, &glued.b_vertices).unwrap();
        assert_eq!(again.dims(), (3, 2, 2));
    }

    #[test]
    fn detect_on_products_and_matrices() {
        let kk = Arc::new(product_algebra(&field(), &field()));
        assert_eq!(detect_triangular(&kk, &[0]).unwrap().m.dim, 0);
        let m2 = fixtures::matrix_algebra();
        assert!(detect_triangular(&m2, &[0]).is_none());
    }

    #[test]
    fn action_axiom_witness() {
        let c = fixtures::truncated_polynomial(2);
        let k = field();
        let mut m = one_dim_bimodule(&k, &c);
        // theta acting by 1 violates theta^2 = 0
        let theta = (0..c.dim()).find(|&x| !c.is_idempotent_basis(x)).unwrap();
        m.left[theta] = Matrix::from_rows(&[vec![int(1)]], 1).unwrap();
        let err = glue_triangular(&k, &c, &m).unwrap_err();
        assert!(matches!(err, Error::ActionAxiom(msg) if msg.contains("theta")));
    }
}
