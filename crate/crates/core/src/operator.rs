//! The Bethe–Salpeter operator and its two structured kernels.

use num_complex::Complex;

use crate::error::{BseError, Result};
use crate::scalar::{Cplx, Real};

/// Dense `n × n` block, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseBlock<T> {
    n: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> DenseBlock<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Cplx::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn from_row_major(n: usize, data: Vec<Cplx<T>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(BseError::DimensionMismatch(format!(
                "dense block of order {n} needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cplx<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }
}

/// Compressed sparse row block.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrBlock<T> {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Cplx<T>>,
}

impl<T: Real> CsrBlock<T> {
    /// Builds from coordinate triplets. Duplicates are summed and explicit
    /// zeros are kept.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, Cplx<T>)]) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, Cplx<T>)> = Vec::with_capacity(triplets.len());
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(BseError::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside a block of order {n}"
                )));
            }
            sorted.push((i, j, v));
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<Cplx<T>> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            indices.push(j);
            values.push(v);
            indptr[i + 1] += 1;
            last = Some((i, j));
        }
        for i in 0..n {
            indptr[i + 1] += indptr[i];
        }
        Ok(Self {
            n,
            indptr,
            indices,
            values,
        })
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Cplx<T>)> + '_ {
        let range = self.indptr[i]..self.indptr[i + 1];
        self.indices[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        let range = self.indptr[i]..self.indptr[i + 1];
        match self.indices[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => Cplx::new(T::zero(), T::zero()),
        }
    }
}

/// Explicit storage for one of the `R`, `C` blocks.
#[derive(Clone, Debug, PartialEq)]
pub enum Block<T> {
    Dense(DenseBlock<T>),
    Sparse(CsrBlock<T>),
}

impl<T: Real> Block<T> {
    pub fn dim(&self) -> usize {
        match self {
            Block::Dense(d) => d.n,
            Block::Sparse(s) => s.n,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        match self {
            Block::Dense(d) => d.get(i, j),
            Block::Sparse(s) => s.get(i, j),
        }
    }

    /// Stored entries in row-major order (all of them for dense storage).
    pub fn entries(&self) -> Vec<(usize, usize, Cplx<T>)> {
        match self {
            Block::Dense(d) => (0..d.n)
                .flat_map(|i| (0..d.n).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, d.get(i, j)))
                .collect(),
            Block::Sparse(s) => (0..s.n)
                .flat_map(|i| s.row(i).map(move |(j, v)| (i, j, v)))
                .collect(),
        }
    }

    /// `y += alpha * A * x`, or `y += alpha * A * conj(x)` when `conj_x`.
    pub fn mul_acc(&self, x: &[Cplx<T>], conj_x: bool, alpha: T, y: &mut [Cplx<T>]) {
        let sx = if conj_x { -T::one() } else { T::one() };
        let row_dot = |row: &mut dyn Iterator<Item = (usize, Cplx<T>)>| {
            let mut re = T::zero();
            let mut im = T::zero();
            for (j, a) in row {
                let (xr, xi) = (x[j].re, sx * x[j].im);
                re += a.re * xr - a.im * xi;
                im += a.re * xi + a.im * xr;
            }
            Complex::new(re, im)
        };
        match self {
            Block::Dense(d) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    let row = &d.data[i * d.n..(i + 1) * d.n];
                    let s = row_dot(&mut row.iter().copied().enumerate());
                    yi.re += alpha * s.re;
                    yi.im += alpha * s.im;
                }
            }
            Block::Sparse(s) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    let acc = row_dot(&mut s.row(i));
                    yi.re += alpha * acc.re;
                    yi.im += alpha * acc.im;
                }
            }
        }
    }

    /// Max row sum of absolute values.
    pub fn inf_norm(&self) -> T {
        (0..self.dim())
            .map(|i| match self {
                Block::Dense(d) => (0..d.n).map(|j| d.get(i, j).norm()).sum::<T>(),
                Block::Sparse(s) => s.row(i).map(|(_, v)| v.norm()).sum::<T>(),
            })
            .fold(T::zero(), T::max)
    }

    /// Largest `|A[i][j] - conj(A[j][i])|` with its position.
    pub fn hermitian_deviation(&self) -> (usize, usize, T) {
        self.pair_deviation(|a, b| a - b.conj())
    }

    /// Largest `|A[i][j] - A[j][i]|` with its position.
    pub fn symmetric_deviation(&self) -> (usize, usize, T) {
        self.pair_deviation(|a, b| a - b)
    }

    fn pair_deviation(&self, f: impl Fn(Cplx<T>, Cplx<T>) -> Cplx<T>) -> (usize, usize, T) {
        // every stored entry is visited, so an implicit-zero mirror is still caught
        let mut worst = (0, 0, T::zero());
        for (i, j, v) in self.entries() {
            let d = f(v, self.get(j, i)).norm();
            if d > worst.2 {
                worst = (i, j, d);
            }
        }
        worst
    }

    pub fn cast<U: Real>(&self) -> Block<U> {
        let conv = |z: Cplx<T>| Cplx::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy()));
        match self {
            Block::Dense(d) => Block::Dense(DenseBlock {
                n: d.n,
                data: d.data.iter().map(|&z| conv(z)).collect(),
            }),
            Block::Sparse(s) => Block::Sparse(CsrBlock {
                n: s.n,
                indptr: s.indptr.clone(),
                indices: s.indices.clone(),
                values: s.values.iter().map(|&z| conv(z)).collect(),
            }),
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, Block::Sparse(_))
    }
}

/// `H = [[R, C], [-C̄, -R̄]]` held through its two upper blocks.
///
/// Read-only after construction, so a single operator can be shared by
/// concurrent solver runs.
#[derive(Clone, Debug, PartialEq)]
pub struct BseOperator<T> {
    n: usize,
    r: Block<T>,
    c: Block<T>,
}

impl<T: Real> BseOperator<T> {
    /// Validates that `R` is exactly Hermitian and `C` exactly symmetric.
    pub fn new(r: Block<T>, c: Block<T>) -> Result<Self> {
        Self::with_tolerance(r, c, T::zero())
    }

    /// Like [`BseOperator::new`] but accepts deviations up to `tol` (absolute).
    pub fn with_tolerance(r: Block<T>, c: Block<T>, tol: T) -> Result<Self> {
        let n = r.dim();
        if n == 0 {
            return Err(BseError::DimensionMismatch("empty blocks".into()));
        }
        if c.dim() != n {
            return Err(BseError::DimensionMismatch(format!(
                "R has order {n} but C has order {}",
                c.dim()
            )));
        }
        let (i, j, dev) = r.hermitian_deviation();
        if dev > tol {
            return Err(BseError::SymmetryViolation {
                block: "R".into(),
                expected: "Hermitian",
                row: i,
                col: j,
                deviation: dev.to_f64_lossy(),
            });
        }
        let (i, j, dev) = c.symmetric_deviation();
        if dev > tol {
            return Err(BseError::SymmetryViolation {
                block: "C".into(),
                expected: "symmetric",
                row: i,
                col: j,
                deviation: dev.to_f64_lossy(),
            });
        }
        Ok(Self { n, r, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> &Block<T> {
        &self.r
    }

    pub fn c(&self) -> &Block<T> {
        &self.c
    }

    /// `R u + C ū`: top block of `H [u; ū]`.
    pub fn apply_plus(&self, u: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        self.check_len(u.len())?;
        let mut out = vec![Cplx::new(T::zero(), T::zero()); self.n];
        self.apply_plus_into(u, &mut out);
        Ok(out)
    }

    /// `R v - C v̄`: top block of `H [v; -v̄]`.
    pub fn apply_minus(&self, v: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        self.check_len(v.len())?;
        let mut out = vec![Cplx::new(T::zero(), T::zero()); self.n];
        self.apply_minus_into(v, &mut out);
        Ok(out)
    }

    /// Overwrites `out` with `R u + C ū`. Lengths are the caller's contract.
    pub fn apply_plus_into(&self, u: &[Cplx<T>], out: &mut [Cplx<T>]) {
        assert_eq!(u.len(), self.n);
        assert_eq!(out.len(), self.n);
        out.fill(Cplx::new(T::zero(), T::zero()));
        self.r.mul_acc(u, false, T::one(), out);
        self.c.mul_acc(u, true, T::one(), out);
    }

    /// Overwrites `out` with `R v - C v̄`.
    pub fn apply_minus_into(&self, v: &[Cplx<T>], out: &mut [Cplx<T>]) {
        assert_eq!(v.len(), self.n);
        assert_eq!(out.len(), self.n);
        out.fill(Cplx::new(T::zero(), T::zero()));
        self.r.mul_acc(v, false, T::one(), out);
        self.c.mul_acc(v, true, -T::one(), out);
    }

    /// Full product `H x` for a `2n` vector.
    pub fn apply_h(&self, x: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        self.check_len2(x.len())?;
        let n = self.n;
        let (x1, x2) = x.split_at(n);
        let mut out = vec![Cplx::new(T::zero(), T::zero()); 2 * n];
        {
            let (top, bot) = out.split_at_mut(n);
            self.r.mul_acc(x1, false, T::one(), top);
            self.c.mul_acc(x2, false, T::one(), top);
            // -C̄ x1 - R̄ x2 = -conj(C x̄1 + R x̄2)
            self.c.mul_acc(x1, true, T::one(), bot);
            self.r.mul_acc(x2, true, T::one(), bot);
            for z in bot.iter_mut() {
                *z = -z.conj();
            }
        }
        Ok(out)
    }

    /// `H^* y = [[R, -C], [C̄, -R̄]] y`.
    pub fn apply_h_adjoint(&self, y: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        self.check_len2(y.len())?;
        let n = self.n;
        let (y1, y2) = y.split_at(n);
        let mut out = vec![Cplx::new(T::zero(), T::zero()); 2 * n];
        {
            let (top, bot) = out.split_at_mut(n);
            self.r.mul_acc(y1, false, T::one(), top);
            self.c.mul_acc(y2, false, -T::one(), top);
            // C̄ y1 - R̄ y2 = conj(C ȳ1 - R ȳ2)
            self.c.mul_acc(y1, true, T::one(), bot);
            self.r.mul_acc(y2, true, -T::one(), bot);
            for z in bot.iter_mut() {
                *z = z.conj();
            }
        }
        Ok(out)
    }

    /// `‖R‖∞ + ‖C‖∞`, an upper bound for `‖H‖₂`.
    pub fn norm_bound(&self) -> T {
        self.r.inf_norm() + self.c.inf_norm()
    }

    pub fn cast<U: Real>(&self) -> BseOperator<U> {
        BseOperator {
            n: self.n,
            r: self.r.cast(),
            c: self.c.cast(),
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(BseError::DimensionMismatch(format!(
                "vector of length {len} for an operator with n = {}",
                self.n
            )));
        }
        Ok(())
    }

    fn check_len2(&self, len: usize) -> Result<()> {
        if len != 2 * self.n {
            return Err(BseError::DimensionMismatch(format!(
                "vector of length {len} for a {0}×{0} matrix",
                2 * self.n
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cplx<f64> {
        Cplx::new(re, im)
    }

    fn scalar_op(r: f64, cc: Cplx<f64>) -> BseOperator<f64> {
        BseOperator::new(
            Block::Dense(DenseBlock::from_row_major(1, vec![c(r, 0.0)]).unwrap()),
            Block::Dense(DenseBlock::from_row_major(1, vec![cc]).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn scalar_kernels() {
        let op = scalar_op(2.0, c(0.2, 0.0));
        assert_eq!(op.apply_plus(&[c(1.0, 0.0)]).unwrap(), vec![c(2.2, 0.0)]);
        let y = op.apply_plus(&[c(0.0, 1.0)]).unwrap();
        assert!((y[0] - c(0.0, 1.8)).norm() < 1e-15);
        assert_eq!(op.apply_minus(&[c(1.0, 0.0)]).unwrap(), vec![c(1.8, 0.0)]);
        let y = op.apply_minus(&[c(0.0, 1.0)]).unwrap();
        assert!((y[0] - c(0.0, 2.2)).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let op = scalar_op(2.0, c(0.2, 0.0));
        assert!(matches!(
            op.apply_plus(&[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(BseError::DimensionMismatch(_))
        ));
        assert!(op.apply_minus(&[]).is_err());
        assert!(op.apply_h(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn rejects_non_hermitian_r() {
        let r = DenseBlock::from_row_major(2, vec![c(1.0, 0.0), c(0.5, 0.1), c(0.5, 0.1), c(1.0, 0.0)])
            .unwrap();
        let cb = DenseBlock::zeros(2);
        let err = BseOperator::new(Block::Dense(r), Block::Dense(cb)).unwrap_err();
        assert!(matches!(err, BseError::SymmetryViolation { .. }), "{err}");
    }

    #[test]
    fn rejects_non_symmetric_c() {
        let r = DenseBlock::from_fn(2, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let cb = DenseBlock::from_row_major(2, vec![c(0.0, 0.0), c(0.3, 0.1), c(0.3, -0.1), c(0.0, 0.0)])
            .unwrap();
        assert!(BseOperator::new(Block::Dense(r), Block::Dense(cb)).is_err());
    }

    #[test]
    fn csr_duplicates_are_summed() {
        let b = CsrBlock::from_triplets(2, &[(0, 1, c(1.0, 0.0)), (0, 1, c(0.5, 1.0)), (1, 0, c(2.0, 0.0))])
            .unwrap();
        assert_eq!(b.nnz(), 2);
        assert_eq!(b.get(0, 1), c(1.5, 1.0));
        assert_eq!(b.get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn sparse_and_dense_agree() {
        let trip = vec![
            (0, 0, c(3.0, 0.0)),
            (0, 1, c(1.0, -0.5)),
            (1, 0, c(1.0, 0.5)),
            (1, 1, c(2.0, 0.0)),
            (2, 2, c(4.0, 0.0)),
        ];
        let sparse = Block::Sparse(CsrBlock::from_triplets(3, &trip).unwrap());
        let mut dense = DenseBlock::zeros(3);
        for &(i, j, v) in &trip {
            dense.set(i, j, v);
        }
        let dense = Block::Dense(dense);
        let x = vec![c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 1.0)];
        for conj in [false, true] {
            let mut y1 = vec![c(0.0, 0.0); 3];
            let mut y2 = vec![c(0.0, 0.0); 3];
            sparse.mul_acc(&x, conj, 1.5, &mut y1);
            dense.mul_acc(&x, conj, 1.5, &mut y2);
            for (a, b) in y1.iter().zip(&y2) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }
}
