use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{Rational, Scalar};

/// Dense column vector. Dimension mismatches in arithmetic panic: machine
/// constructors validate shapes up front, so a mismatch here is a bug, not
/// a user error.
#[derive(Clone, PartialEq)]
pub struct Vector<S: Scalar> {
    entries: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn from(entries: Vec<S>) -> Self {
        Vector { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector {
            entries: vec![S::zero(); dim],
        }
    }

    /// Standard basis vector `e_i` (0-indexed).
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.entries[i] = S::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> &S {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    /// Kronecker product: `(v ⊗ w)[i*dim(w)+j] = v[i]·w[j]`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                out.push(a.clone() * b.clone());
            }
        }
        Vector { entries: out }
    }

    /// Hermitian inner product `⟨self|other⟩`, conjugating `self`.
    pub fn inner(&self, other: &Self) -> S {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        let mut acc = S::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc = acc + a.conjugate() * b.clone();
        }
        acc
    }

    /// Squared Euclidean norm as a backend real.
    pub fn l2_norm_sq(&self) -> S::Real {
        let mut acc = S::real_zero();
        for a in &self.entries {
            acc = acc + a.abs_sq();
        }
        acc
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.entries.iter()
    }
}

impl Vector<Rational> {
    /// `Σ_i |v[i]|`, exact.
    pub fn l1_norm(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for a in &self.entries {
            acc += a.abs();
        }
        acc
    }

    /// `Σ_i v[i]`, exact. Affine states keep this at 1.
    pub fn entry_sum(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for a in &self.entries {
            acc += a.clone();
        }
        acc
    }
}

impl<S: Scalar> fmt::Debug for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for row in &rows {
            assert_eq!(row.len(), ncols, "ragged matrix rows");
        }
        Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix {
            rows: n,
            cols: n,
            data: vec![S::zero(); n * n],
        };
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn mat_vec(&self, v: &Vector<S>) -> Vector<S> {
        assert_eq!(self.cols, v.dim(), "mat_vec dimension mismatch");
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = S::zero();
            for j in 0..self.cols {
                acc = acc + self.get(i, j).clone() * v.get(j).clone();
            }
            out.push(acc);
        }
        Vector::from(out)
    }

    pub fn mat_mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mat_mul dimension mismatch");
        let mut data = vec![S::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if *a == S::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    data[i * other.cols + j] =
                        data[i * other.cols + j].clone() + a.clone() * other.get(k, j).clone();
                }
            }
        }
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Kronecker product. Block `(i,j)` of the result is `self[i,j] · other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![S::zero(); rows * cols];
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if *a == S::zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let r = i1 * other.rows + i2;
                        let c = j1 * other.cols + j2;
                        data[r * cols + c] = a.clone() * other.get(i2, j2).clone();
                    }
                }
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![S::zero(); self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut m = self.transpose();
        for e in &mut m.data {
            *e = e.conjugate();
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j {
                    let d = e.clone() - S::one();
                    d.abs_f64() <= if S::EXACT { 0.0 } else { tol }
                } else {
                    e.abs_f64() <= if S::EXACT { 0.0 } else { tol }
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// `M† M = I` within `tol` (exact backends ignore `tol`).
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.dagger().mat_mul(self).is_identity(tol)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(S::is_finite)
    }
}

impl Matrix<Rational> {
    /// Every column sums to exactly 1: the defining property of an affine
    /// transition matrix.
    pub fn is_affine(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for j in 0..self.cols {
            let mut sum = BigRational::zero();
            for i in 0..self.rows {
                sum += self.get(i, j).clone();
            }
            if !sum.is_one() {
                return false;
            }
        }
        true
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}
