//! Radical, Cartan matrix, center and the local self-injective test.

use num_bigint::BigInt;
use num_traits::Zero;

use super::FDAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Scalar};
use crate::module::{self, ExtDim, Module};

/// Homogeneous basis of the radical, block by block.
pub(super) fn homogeneous_radical(a: &FDAlgebra) -> Vec<(usize, usize, Vec<Scalar>)> {
    let n = a.dim();
    // t_k = trace of left multiplication by b_k
    let traces: Vec<Scalar> = (0..n)
        .map(|k| {
            let mut t = Scalar::zero();
            for m in 0..n {
                for (idx, c) in a.product(k, m) {
                    if *idx == m {
                        t += c;
                    }
                }
            }
            t
        })
        .collect();
    let mut form = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = Scalar::zero();
            for (k, c) in a.product(i, j) {
                v += c * &traces[*k];
            }
            if !v.is_zero() {
                form.set(i, j, v);
            }
        }
    }
    let kernel = form.kernel();
    let mut out = Vec::new();
    let nv = a.num_vertices();
    for s in 0..nv {
        for t in 0..nv {
            let blk = a.block(s, t);
            if blk.is_empty() {
                continue;
            }
            let parts: Vec<Vec<Scalar>> = kernel
                .iter()
                .map(|v| {
                    let mut p = vec![Scalar::zero(); n];
                    for &b in blk {
                        p[b] = v[b].clone();
                    }
                    p
                })
                .filter(|p| !linalg::is_zero_vec(p))
                .collect();
            for i in linalg::independent_subset(&parts, n) {
                out.push((s, t, parts[i].clone()));
            }
        }
    }
    out
}

/// Basis of the Jacobson radical.
pub fn radical(a: &FDAlgebra) -> Vec<Vec<Scalar>> {
    a.radical_blocks().iter().map(|(_, _, v)| v.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    pub entries: Vec<Vec<i64>>,
    pub determinant: BigInt,
}

/// Dimension of the top of `e_v A e_v`; 1 exactly when `e_v` is primitive.
pub(crate) fn local_top_dim(a: &FDAlgebra, v: usize) -> usize {
    let rad = a.radical_blocks().iter().filter(|(s, t, _)| *s == v && *t == v).count();
    a.block(v, v).len() - rad
}

/// `entries[i][j] = dim e_i A e_j`.
pub fn cartan_matrix(a: &FDAlgebra) -> Result<CartanMatrix> {
    let nv = a.num_vertices();
    for v in 0..nv {
        if local_top_dim(a, v) != 1 {
            return Err(Error::NonPrimitive(a.vertices()[v].clone()));
        }
    }
    let entries: Vec<Vec<i64>> = (0..nv).map(|i| (0..nv).map(|j| a.block(j, i).len() as i64).collect()).collect();
    let determinant = linalg::integer_determinant(&entries);
    Ok(CartanMatrix { entries, determinant })
}

pub fn center_dimension(a: &FDAlgebra) -> usize {
    let n = a.dim();
    // central elements commute with every idempotent, so they lie in the diagonal blocks
    let diag: Vec<usize> = (0..n).filter(|&b| a.source(b) == a.target(b)).collect();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for b in 0..n {
        // coefficient of each output basis element in z*b - b*z
        let mut eq = vec![vec![Scalar::zero(); diag.len()]; n];
        for (col, &z) in diag.iter().enumerate() {
            for (k, c) in a.product(z, b) {
                eq[*k][col] += c;
            }
            for (k, c) in a.product(b, z) {
                eq[*k][col] -= c;
            }
        }
        rows.extend(eq.into_iter().filter(|r| !linalg::is_zero_vec(r)));
    }
    if rows.is_empty() {
        return diag.len();
    }
    let m = Matrix::from_rows(&rows, diag.len()).expect("uniform rows");
    diag.len() - m.rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfInjectiveLocalVerdict {
    pub local: bool,
    pub selfinjective: bool,
    /// Dimension of `C / rad C` when it is not 1.
    pub top_dim: usize,
    /// Simple modules `S` with `Ext^1(S, C) != 0`.
    pub failing_simples: Vec<String>,
}

pub fn is_selfinjective_local(c: &FDAlgebra) -> Result<SelfInjectiveLocalVerdict> {
    let top_dim = c.dim() - c.radical_dim();
    let arc = std::sync::Arc::new(c.clone());
    let regular = Module::free(&arc, &(0..c.num_vertices()).collect::<Vec<_>>());
    let mut failing = Vec::new();
    for v in 0..c.num_vertices() {
        let s = Module::simple(&arc, v);
        match module::ext(&s, &regular, 1, 2 * c.dim() + 2)? {
            ExtDim::Known(0) => {}
            _ => failing.push(c.vertices()[v].clone()),
        }
    }
    Ok(SelfInjectiveLocalVerdict {
        local: top_dim == 1,
        selfinjective: failing.is_empty(),
        top_dim,
        failing_simples: failing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn radical_dimensions() {
        assert_eq!(fixtures::product_of_fields(2).radical_dim(), 0);
        assert_eq!(fixtures::truncated_polynomial(2).radical_dim(), 1);
        assert_eq!(fixtures::kr(3, 2).radical_dim(), 5);
        assert_eq!(fixtures::matrix_algebra().radical_dim(), 0);
    }

    #[test]
    fn cartan_values() {
        let c = cartan_matrix(&fixtures::kr(3, 2)).unwrap();
        assert_eq!(c.entries, vec![vec![3, 0], vec![2, 2]]);
        assert_eq!(c.determinant, BigInt::from(6));
        let c = cartan_matrix(&fixtures::product_of_fields(2)).unwrap();
        assert_eq!(c.entries, vec![vec![1, 0], vec![0, 1]]);
        let c = cartan_matrix(&fixtures::a2()).unwrap();
        assert_eq!(c.entries, vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(c.determinant, BigInt::from(1));
    }

    #[test]
    fn cartan_rejects_non_primitive() {
        let m = fixtures::matrix_algebra_one_idempotent();
        assert!(matches!(cartan_matrix(&m), Err(Error::NonPrimitive(_))));
    }

    #[test]
    fn cartan_det_of_opposite() {
        for a in [fixtures::kr(3, 2), fixtures::kr(2, 2), fixtures::a2()] {
            assert_eq!(cartan_matrix(&a).unwrap().determinant, cartan_matrix(&a.opposite()).unwrap().determinant);
        }
    }

    #[test]
    fn centers() {
        assert_eq!(center_dimension(&fixtures::product_of_fields(2)), 2);
        assert_eq!(center_dimension(&fixtures::matrix_algebra()), 1);
        // brute force: z = sum of diagonal coefficients; compare with a direct search
        let a = fixtures::kr(2, 2);
        assert_eq!(center_dimension(&a), brute_center(&a));
    }

    fn brute_center(a: &FDAlgebra) -> usize {
        let n = a.dim();
        let mut rows = Vec::new();
        for b in 0..n {
            let lb = a.left_mult_matrix(&a.basis_vec(b));
            // right multiplication by b as a matrix: column z = z*b
            let mut rb = Matrix::zeros(n, n);
            for z in 0..n {
                let p = a.mul(&a.basis_vec(z), &a.basis_vec(b));
                for (k, c) in p.into_iter().enumerate() {
                    rb.set(k, z, c);
                }
            }
            rows.push(rb.sub(&lb));
        }
        let mut stacked = rows[0].clone();
        for r in &rows[1..] {
            stacked = stacked.vstack(r);
        }
        n - stacked.rank()
    }

    #[test]
    fn selfinjective_local() {
        let v = is_selfinjective_local(&fixtures::truncated_polynomial(3)).unwrap();
        assert!(v.local && v.selfinjective);
        let v = is_selfinjective_local(&fixtures::product_of_fields(2)).unwrap();
        assert!(!v.local);
        let v = is_selfinjective_local(&fixtures::a2()).unwrap();
        assert!(!v.local && !v.selfinjective);
    }
}
