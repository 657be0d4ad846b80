//! Exact dense linear algebra over the rationals.
//!
//! Every routine here is deterministic: elimination always pivots on the
//! leftmost available column and the topmost nonzero row, so bases computed
//! downstream are reproducible bit-for-bit.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact field element.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Formats a scalar as `num/den` (or just `num` for integers).
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let bad = || Error::Schema(format!("malformed rational scalar {text:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_scalar).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rank: usize,
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Outcome of a consistent linear system.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<Scalar>,
    pub kernel: Vec<Vec<Scalar>>,
}

/// Span of a generator family inside `k^n`, with a standard-basis
/// complement and the projection onto quotient coordinates.
#[derive(Clone, Debug)]
pub struct SubspaceQuotient {
    pub ambient: usize,
    /// Reduced basis of the span (rows of the RREF).
    pub basis: Vec<Vec<Scalar>>,
    /// Pivot coordinate of each basis vector.
    pub pivots: Vec<usize>,
    /// Standard basis indices whose classes form a basis of the quotient.
    pub reps: Vec<usize>,
    /// `reps.len() x ambient` matrix sending ambient coordinates to quotient coordinates.
    pub projection: Matrix,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Scalar>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(columns: &[Vec<Scalar>], rows: usize) -> Result<Self> {
        let mut m = Matrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column of length {} in matrix with {rows} rows",
                    col.len()
                )));
            }
            for (r, x) in col.iter().enumerate() {
                m.data[r * m.cols + c] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix { rows, cols, data: entries.iter().map(|&x| int(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        if !v.is_zero() {
            let e = &mut self.data[r * self.cols + c];
            *e += v;
        }
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.data[c * self.rows + r] = v.clone();
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = vec![Scalar::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (k, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = &self.data[i * self.cols + k];
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| -a).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Adds `s * other` into `self`.
    pub fn axpy(&mut self, s: &Scalar, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += s * b;
            }
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut m = Matrix::zeros(self.rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.data[r * cols + c] = self.get(r, c).clone();
            }
            for c in 0..other.cols {
                m.data[r * cols + self.cols + c] = other.get(r, c).clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = self.get(r0 + r, c0 + c).clone();
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + j] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend(self.row(r).iter().cloned());
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn trace(&self) -> Scalar {
        let n = self.rows.min(self.cols);
        (0..n).fold(Scalar::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn pow(&self, mut e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn rref(&self) -> Rref {
        rank_and_rref(self)
    }

    pub fn rank(&self) -> usize {
        rank_and_rref(self).rank
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        kernel_from_rref(&rank_and_rref(self), self.cols)
    }

    /// Basis of the column space, as the pivot columns of `self`.
    pub fn column_space(&self) -> Vec<Vec<Scalar>> {
        let r = rank_and_rref(self);
        r.pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                for c in 0..n {
                    a.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            let piv = a[col * n + col].clone();
            det *= &piv;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] / &piv;
                for c in col..n {
                    let sub = &f * &a[col * n + c];
                    a[r * n + c] -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        solve_matrix(self, &Matrix::identity(n)).filter(|_| self.rank() == n)
    }
}

/// Gauss-Jordan elimination with leftmost-column, topmost-row pivoting.
pub fn rank_and_rref(m: &Matrix) -> Rref {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow >= rows {
            break;
        }
        let Some(found) = (prow..rows).find(|&r| !a[r * cols + col].is_zero()) else {
            continue;
        };
        if found != prow {
            for c in 0..cols {
                a.swap(found * cols + c, prow * cols + c);
            }
        }
        let piv = a[prow * cols + col].clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for c in col..cols {
                let e = &mut a[prow * cols + c];
                if !e.is_zero() {
                    *e *= &inv;
                }
            }
        }
        for r in 0..rows {
            if r == prow || a[r * cols + col].is_zero() {
                continue;
            }
            let f = a[r * cols + col].clone();
            for c in col..cols {
                let p = &a[prow * cols + c];
                if p.is_zero() {
                    continue;
                }
                let sub = &f * p;
                a[r * cols + c] -= sub;
            }
        }
        pivots.push(col);
        prow += 1;
    }
    Rref { rank: pivots.len(), matrix: Matrix { rows, cols, data: a }, pivots }
}

fn kernel_from_rref(r: &Rref, cols: usize) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; cols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (row, &p) in r.pivots.iter().enumerate() {
            let e = r.matrix.get(row, free);
            if !e.is_zero() {
                v[p] = -e.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Solves `m x = rhs`. Returns `Ok(None)` when the system is inconsistent.
pub fn solve(m: &Matrix, rhs: &[Scalar]) -> Result<Option<Solution>> {
    if rhs.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for a system with {} equations",
            rhs.len(),
            m.rows
        )));
    }
    let aug = m.hstack(&Matrix::from_columns(&[rhs.to_vec()], m.rows)?);
    let r = rank_and_rref(&aug);
    if r.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut particular = vec![Scalar::zero(); m.cols];
    for (row, &p) in r.pivots.iter().enumerate() {
        particular[p] = r.matrix.get(row, m.cols).clone();
    }
    let coeff = Rref { rank: r.rank, matrix: r.matrix.block(0, 0, m.rows, m.cols), pivots: r.pivots.clone() };
    Ok(Some(Solution { particular, kernel: kernel_from_rref(&coeff, m.cols) }))
}

/// Finds some `x` with `m x = rhs` column by column (free variables set to zero).
pub fn solve_matrix(m: &Matrix, rhs: &Matrix) -> Option<Matrix> {
    assert_eq!(m.rows, rhs.rows);
    let aug = m.hstack(rhs);
    let r = rank_and_rref(&aug);
    if r.pivots.iter().any(|&p| p >= m.cols) {
        return None;
    }
    let mut x = Matrix::zeros(m.cols, rhs.cols);
    for (row, &p) in r.pivots.iter().enumerate() {
        for c in 0..rhs.cols {
            x.set(p, c, r.matrix.get(row, m.cols + c).clone());
        }
    }
    Some(x)
}

pub fn subspace_quotient(ambient: usize, generators: &[Vec<Scalar>]) -> Result<SubspaceQuotient> {
    for g in generators {
        if g.len() != ambient {
            return Err(Error::DimensionMismatch(format!(
                "generator of length {} in ambient dimension {ambient}",
                g.len()
            )));
        }
    }
    let m = Matrix::from_rows(generators, ambient)?;
    let r = rank_and_rref(&m);
    let basis: Vec<Vec<Scalar>> = (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect();
    let mut is_pivot = vec![false; ambient];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let reps: Vec<usize> = (0..ambient).filter(|&c| !is_pivot[c]).collect();
    let mut projection = Matrix::zeros(reps.len(), ambient);
    for (q, &c) in reps.iter().enumerate() {
        projection.set(q, c, Scalar::one());
    }
    for (k, &p) in r.pivots.iter().enumerate() {
        for (q, &c) in reps.iter().enumerate() {
            let e = &basis[k][c];
            if !e.is_zero() {
                projection.set(q, p, -e.clone());
            }
        }
    }
    Ok(SubspaceQuotient { ambient, basis, pivots: r.pivots, reps, projection })
}

impl SubspaceQuotient {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn quotient_dim(&self) -> usize {
        self.reps.len()
    }

    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.projection.mul_vec(v)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.project(v))
    }

    /// Ambient-coordinate lift of a quotient vector using the standard representatives.
    pub fn lift(&self, q: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.ambient];
        for (x, &c) in q.iter().zip(&self.reps) {
            v[c] = x.clone();
        }
        v
    }

    /// `ambient x quotient_dim` matrix of the representative embedding.
    pub fn section(&self) -> Matrix {
        let mut m = Matrix::zeros(self.ambient, self.reps.len());
        for (q, &c) in self.reps.iter().enumerate() {
            m.set(c, q, Scalar::one());
        }
        m
    }
}

/// Row-reduced basis of a growing subspace of `k^len`.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    /// Rows normalized to 1 at their pivot, which they alone occupy.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &c * r;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(&w) {
                    if !r.is_zero() {
                        *x -= &c * r;
                    }
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// Extracts a maximal linearly independent subfamily, keeping the earliest vectors.
pub fn independent_subset(vectors: &[Vec<Scalar>], dim: usize) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_columns(vectors, dim).expect("uniform vector lengths");
    rank_and_rref(&m).pivots
}

/// Coordinates of `v` in the (independent) family `basis`, if `v` lies in its span.
pub fn coordinates(basis: &[Vec<Scalar>], v: &[Scalar]) -> Option<Vec<Scalar>> {
    let m = Matrix::from_columns(basis, v.len()).ok()?;
    solve(&m, v).ok()?.map(|s| s.particular)
}

/// Precomputed coordinate extraction for a fixed independent family.
#[derive(Clone, Debug)]
pub struct CoordinateSystem {
    len: usize,
    rows: Vec<usize>,
    inverse: Matrix,
    check: Matrix,
}

impl CoordinateSystem {
    pub fn new(basis: &[Vec<Scalar>], len: usize) -> Self {
        let m = Matrix::from_columns(basis, len).expect("uniform vector lengths");
        // choose independent rows of m to invert
        let rows = rank_and_rref(&m.transpose()).pivots;
        assert_eq!(rows.len(), basis.len(), "coordinate family is not independent");
        let sq = m.select_rows(&rows);
        let inverse = sq.inverse().expect("invertible square block");
        CoordinateSystem { len, rows, inverse, check: m }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Coordinates of `v`; `None` when `v` is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.len);
        let sub: Vec<Scalar> = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.inverse.mul_vec(&sub);
        let back = self.check.mul_vec(&c);
        if back.as_slice() == v {
            Some(c)
        } else {
            None
        }
    }
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Scalar], s: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| x * s).collect()
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// Integer determinant of a matrix with integer entries.
pub fn integer_determinant(entries: &[Vec<i64>]) -> BigInt {
    let n = entries.len();
    if n == 0 {
        return BigInt::one();
    }
    let rows: Vec<Vec<Scalar>> = entries.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    let d = Matrix::from_rows(&rows, n).expect("square").determinant();
    debug_assert!(d.is_integer());
    d.to_integer()
}

pub fn abs(s: &Scalar) -> Scalar {
    s.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, e: &[i64]) -> Matrix {
        Matrix::from_i64(rows, cols, e)
    }

    #[test]
    fn rref_identity() {
        let r = m(2, 2, &[1, 0, 0, 1]).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_zero() {
        let z = Matrix::zeros(3, 4);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert!(r.matrix.is_zero());
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_dependent_rows() {
        // hand elimination: R2 - 2 R1 = 0
        let r = m(2, 2, &[1, 2, 2, 4]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.matrix, m(2, 2, &[1, 2, 0, 0]));
    }

    #[test]
    fn solve_identity() {
        let b = vec![int(3), int(-1)];
        let s = solve(&Matrix::identity(2), &b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn solve_inconsistent() {
        assert!(solve(&Matrix::zeros(2, 2), &[int(1), int(0)]).unwrap().is_none());
    }

    #[test]
    fn solve_underdetermined() {
        let s = solve(&m(1, 2, &[1, 1]), &[int(2)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![int(2), int(0)]);
        assert_eq!(s.kernel, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn solve_shape_error() {
        assert!(matches!(solve(&Matrix::identity(2), &[int(1)]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(subspace_quotient(3, &[]).unwrap().quotient_dim(), 3);
        let q = subspace_quotient(2, &[unit_vec(2, 0), unit_vec(2, 1)]).unwrap();
        assert_eq!(q.quotient_dim(), 0);
        let q = subspace_quotient(3, &[vec![int(1), int(1), int(0)]]).unwrap();
        assert_eq!(q.quotient_dim(), 2);
        assert_eq!(q.reps, vec![1, 2]);
        // e1 + e2 projects to zero, e1 projects to -e2's class
        assert!(q.contains(&[int(1), int(1), int(0)]));
        assert_eq!(q.project(&[int(1), int(0), int(0)]), vec![int(-1), int(0)]);
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(2, 2, &[2, 1, 1, 1]);
        assert_eq!(a.determinant(), int(1));
        assert_eq!(a.mul(&a.inverse().unwrap()), Matrix::identity(2));
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        assert_eq!(integer_determinant(&[vec![3, 0], vec![2, 2]]), BigInt::from(6));
    }

    #[test]
    fn scalar_text_roundtrip() {
        let s = parse_scalar("-3/6").unwrap();
        assert_eq!(format_scalar(&s), "-1/2");
        assert_eq!(format_scalar(&parse_scalar("4").unwrap()), "4");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |e| Matrix::from_i64(r, c, &e))
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(a in small_matrix()) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn solve_reproduces_rhs(a in small_matrix(), seed in proptest::collection::vec(-3i64..4, 4)) {
            let x: Vec<Scalar> = (0..a.cols()).map(|i| int(seed[i % seed.len()])).collect();
            let b = a.mul_vec(&x);
            let s = solve(&a, &b).unwrap().expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&s.particular), b);
            for k in &s.kernel {
                prop_assert!(is_zero_vec(&a.mul_vec(k)));
            }
            prop_assert_eq!(s.kernel.len(), a.cols() - a.rank());
        }

        #[test]
        fn quotient_dims_add_up(a in small_matrix()) {
            let gens: Vec<Vec<Scalar>> = (0..a.rows()).map(|r| a.row(r).to_vec()).collect();
            let q = subspace_quotient(a.cols(), &gens).unwrap();
            prop_assert_eq!(q.dim() + q.quotient_dim(), a.cols());
            for g in &gens {
                prop_assert!(q.contains(g));
            }
        }
    }
}
