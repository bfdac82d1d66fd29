//! Dense factorizations of the small real projected matrices.

mod svd;
mod symeig;

use std::ops::{Index, IndexMut};

use crate::error::Result;
use crate::scalar::Real;

pub use svd::svd;
pub use symeig::{sym_eig, tql2};

/// Small dense real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Keep the columns listed in `perm`, in that order.
    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, perm.len());
        for i in 0..self.rows {
            for (jn, &jo) in perm.iter().enumerate() {
                out[(i, jn)] = self[(i, jo)];
            }
        }
        out
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    SmallestFirst,
    LargestFirst,
}

/// Stable permutation that sorts `values` per `order`.
pub fn sort_permutation<T: Real>(values: &[T], order: Order) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        let c = values[a]
            .partial_cmp(&values[b])
            .unwrap_or(std::cmp::Ordering::Equal);
        match order {
            Order::SmallestFirst => c,
            Order::LargestFirst => c.reverse(),
        }
    });
    idx
}

/// Real symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag<T> {
    pub diag: Vec<T>,
    pub offdiag: Vec<T>,
}

impl<T: Real> SymTridiag<T> {
    pub fn new(diag: Vec<T>, offdiag: Vec<T>) -> Self {
        assert!(diag.is_empty() || offdiag.len() + 1 == diag.len());
        Self { diag, offdiag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_mat(&self) -> Mat<T> {
        let k = self.dim();
        let mut m = Mat::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = self.diag[i];
        }
        for (i, &b) in self.offdiag.iter().enumerate() {
            m[(i, i + 1)] = b;
            m[(i + 1, i)] = b;
        }
        m
    }
}

/// Real lower bidiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBidiag<T> {
    pub diag: Vec<T>,
    pub subdiag: Vec<T>,
}

impl<T: Real> LowerBidiag<T> {
    pub fn new(diag: Vec<T>, subdiag: Vec<T>) -> Self {
        assert!(diag.is_empty() || subdiag.len() + 1 == diag.len());
        Self { diag, subdiag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_mat(&self) -> Mat<T> {
        let k = self.dim();
        let mut m = Mat::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = self.diag[i];
        }
        for (i, &b) in self.subdiag.iter().enumerate() {
            m[(i + 1, i)] = b;
        }
        m
    }
}

/// Sorted eigen- or singular values with their orthogonal factors.
/// For an eigendecomposition `right` is `None` and `A = Q D Qᵀ`; for an SVD
/// `A = Q Σ Pᵀ` with `P` in `right`.
#[derive(Clone, Debug)]
pub struct SpectralFactor<T> {
    pub values: Vec<T>,
    pub vectors: Mat<T>,
    pub right: Option<Mat<T>>,
}

impl<T: Real> SpectralFactor<T> {
    fn reorder(self, order: Order) -> Self {
        let perm = sort_permutation(&self.values, order);
        Self {
            values: perm.iter().map(|&i| self.values[i]).collect(),
            vectors: self.vectors.permute_cols(&perm),
            right: self.right.map(|p| p.permute_cols(&perm)),
        }
    }
}

pub fn tridiag_eig<T: Real>(t: &SymTridiag<T>, order: Order) -> Result<SpectralFactor<T>> {
    let k = t.dim();
    let mut d = t.diag.clone();
    let mut e = vec![T::zero(); k];
    for i in 1..k {
        e[i] = t.offdiag[i - 1];
    }
    let mut q = Mat::identity(k);
    tql2(&mut d, &mut e, &mut q)?;
    Ok(SpectralFactor {
        values: d,
        vectors: q,
        right: None,
    }
    .reorder(order))
}

/// Eigendecomposition of a dense symmetric matrix (lower triangle is read).
pub fn dense_sym_eig<T: Real>(a: &Mat<T>, order: Order) -> Result<SpectralFactor<T>> {
    let (values, vectors) = sym_eig(a)?;
    Ok(SpectralFactor {
        values,
        vectors,
        right: None,
    }
    .reorder(order))
}

/// SVD `A = Q Σ Pᵀ` of a dense square matrix.
pub fn dense_svd<T: Real>(a: &Mat<T>, order: Order) -> Result<SpectralFactor<T>> {
    let (s, u, v) = svd(a)?;
    Ok(SpectralFactor {
        values: s,
        vectors: u,
        right: Some(v),
    }
    .reorder(order))
}

pub fn bidiag_svd<T: Real>(l: &LowerBidiag<T>, order: Order) -> Result<SpectralFactor<T>> {
    dense_svd(&l.to_mat(), order)
}

/// `‖T − L Lᵀ‖_max`.
pub fn cholesky_relation_check<T: Real>(t: &SymTridiag<T>, l: &LowerBidiag<T>) -> T {
    assert_eq!(t.dim(), l.dim());
    let lm = l.to_mat();
    t.to_mat().max_abs_diff(&lm.matmul(&lm.transpose()))
}
