//! Column bases of `n`-vectors and the structured (`2n`-row) bases built from
//! pairs of them.

use crate::linalg::Mat;
use crate::scalar::{axpy, axpy_real, dotc, Cplx, Real};

/// `n × m` complex matrix stored column by column, grown one column at a time.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnBasis<T> {
    n: usize,
    ncols: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> ColumnBasis<T> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ncols: 0,
            data: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize, cols: usize) -> Self {
        Self {
            n,
            ncols: 0,
            data: Vec::with_capacity(n * cols),
        }
    }

    pub fn from_columns(n: usize, cols: &[Vec<Cplx<T>>]) -> Self {
        let mut b = Self::with_capacity(n, cols.len());
        for c in cols {
            b.push(c);
        }
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ncols
    }

    pub fn is_empty(&self) -> bool {
        self.ncols == 0
    }

    pub fn push(&mut self, col: &[Cplx<T>]) {
        assert_eq!(col.len(), self.n, "column length");
        self.data.extend_from_slice(col);
        self.ncols += 1;
    }

    pub fn truncate(&mut self, m: usize) {
        if m < self.ncols {
            self.ncols = m;
            self.data.truncate(m * self.n);
        }
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[Cplx<T>] {
        assert!(j < self.ncols);
        &self.data[j * self.n..(j + 1) * self.n]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [Cplx<T>] {
        assert!(j < self.ncols);
        &mut self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[Cplx<T>]> {
        self.data.chunks_exact(self.n.max(1)).take(self.ncols)
    }

    /// `B[:, ..m]^H x`.
    pub fn adjoint_apply(&self, m: usize, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert!(m <= self.ncols);
        (0..m).map(|j| dotc(self.col(j), x)).collect()
    }

    /// `y -= B[:, ..coeffs.len()] * coeffs`.
    pub fn sub_combination(&self, coeffs: &[Cplx<T>], y: &mut [Cplx<T>]) {
        for (j, &c) in coeffs.iter().enumerate() {
            axpy(-c, self.col(j), y);
        }
    }

    /// `y -= B[:, ..coeffs.len()] * coeffs` for real coefficients.
    pub fn sub_combination_real(&self, coeffs: &[T], y: &mut [Cplx<T>]) {
        for (j, &c) in coeffs.iter().enumerate() {
            axpy_real(-c, self.col(j), y);
        }
    }

    /// `B[:, ..q.rows()] * q[:, ..keep]` as a new basis.
    pub fn rotate(&self, q: &Mat<T>, keep: usize) -> Self {
        let k = q.rows();
        assert!(k <= self.ncols && keep <= q.cols());
        let mut out = Self::with_capacity(self.n, keep + 1);
        let mut acc = vec![Cplx::new(T::zero(), T::zero()); self.n];
        for j in 0..keep {
            acc.fill(Cplx::new(T::zero(), T::zero()));
            for i in 0..k {
                let qij = q[(i, j)];
                if qij != T::zero() {
                    axpy_real(qij, self.col(i), &mut acc);
                }
            }
            out.push(&acc);
        }
        out
    }

    /// Entries `(B^H A)[i][j] = b_i^H a_j`.
    pub fn gram(&self, other: &ColumnBasis<T>) -> Vec<Vec<Cplx<T>>> {
        (0..self.ncols)
            .map(|i| (0..other.ncols).map(|j| dotc(self.col(i), other.col(j))).collect())
            .collect()
    }
}

/// Which structured basis a [`PairedBasis`] encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// `[[U, V], [Ū, -V̄]]`, Gram identity `2I`.
    Uv,
    /// `[[M, N], [M̄, -N̄]]` with primed companions `M' = RM + CM̄`,
    /// `N' = RN - CN̄`, Gram identity `I`.
    Mn,
    /// `[[W, Z̄], [Z, W̄]]`, Gram identity `I`.
    Wz,
}

/// Two collections of `n`-vectors encoding a `2n × 2m` structured basis.
#[derive(Clone, Debug)]
pub struct PairedBasis<T> {
    pub flavor: Flavor,
    pub first: ColumnBasis<T>,
    pub second: ColumnBasis<T>,
    pub first_primed: Option<ColumnBasis<T>>,
    pub second_primed: Option<ColumnBasis<T>>,
}

impl<T: Real> PairedBasis<T> {
    pub fn uv(u: ColumnBasis<T>, v: ColumnBasis<T>) -> Self {
        Self {
            flavor: Flavor::Uv,
            first: u,
            second: v,
            first_primed: None,
            second_primed: None,
        }
    }

    pub fn mn(m: ColumnBasis<T>, n: ColumnBasis<T>, mp: ColumnBasis<T>, np: ColumnBasis<T>) -> Self {
        Self {
            flavor: Flavor::Mn,
            first: m,
            second: n,
            first_primed: Some(mp),
            second_primed: Some(np),
        }
    }

    pub fn wz(w: ColumnBasis<T>, z: ColumnBasis<T>) -> Self {
        Self {
            flavor: Flavor::Wz,
            first: w,
            second: z,
            first_primed: None,
            second_primed: None,
        }
    }

    /// Max-norm deviation of the flavor's Gram identity, from explicit
    /// structured inner products over every stored column.
    pub fn orthogonality_defect(&self) -> T {
        let two = T::lit(2.0);
        let delta = |i: usize, j: usize, s: T| if i == j { s } else { T::zero() };
        let mut worst = T::zero();
        let mut upd = |x: T| {
            if x > worst || x.is_nan() {
                worst = x;
            }
        };
        match self.flavor {
            Flavor::Uv => {
                let (u, v) = (&self.first, &self.second);
                let vu = v.gram(u);
                let vv = v.gram(v);
                let uu = u.gram(u);
                for (i, row) in vu.iter().enumerate() {
                    for (j, z) in row.iter().enumerate() {
                        // block (1,1) is 2Re(V^H U); block (2,2) is its transpose
                        upd((two * z.re - delta(i, j, two)).abs());
                    }
                }
                for row in vv.iter().chain(uu.iter()) {
                    for z in row {
                        upd((two * z.im).abs());
                    }
                }
            }
            Flavor::Mn => {
                let mp = self.first_primed.as_ref().expect("MN basis without M'");
                let np = self.second_primed.as_ref().expect("MN basis without N'");
                let (m, n) = (&self.first, &self.second);
                for (i, row) in mp.gram(m).iter().enumerate() {
                    for (j, z) in row.iter().enumerate() {
                        upd((two * z.re - delta(i, j, T::one())).abs());
                    }
                }
                for (i, row) in np.gram(n).iter().enumerate() {
                    for (j, z) in row.iter().enumerate() {
                        upd((two * z.re - delta(i, j, T::one())).abs());
                    }
                }
                for row in mp.gram(n).iter().chain(np.gram(m).iter()) {
                    for z in row {
                        upd((two * z.im).abs());
                    }
                }
            }
            Flavor::Wz => {
                let (w, z) = (&self.first, &self.second);
                let ww = w.gram(w);
                let zz = z.gram(z);
                let cols = w.len().min(z.len());
                for i in 0..cols {
                    for j in 0..cols {
                        upd((ww[i][j] - zz[i][j] - Cplx::new(delta(i, j, T::one()), T::zero())).norm());
                        // W^H Z̄ - Z^H W̄, entrywise w_i^H z̄_j - z_i^H w̄_j
                        let wz = crate::scalar::dotu(&conj_slice(w.col(i)), &conj_slice(z.col(j)));
                        let zw = crate::scalar::dotu(&conj_slice(z.col(i)), &conj_slice(w.col(j)));
                        upd((wz - zw).norm());
                    }
                }
            }
        }
        worst
    }
}

fn conj_slice<T: Real>(x: &[Cplx<T>]) -> Vec<Cplx<T>> {
    x.iter().map(|z| z.conj()).collect()
}

/// Reorthogonalization coefficients of `x` against the `U/V` basis:
/// `c = Re(V^H x)` and `d = i·Im(U^H x)`, returned as the imaginary parts.
pub fn structured_coeffs_uv<T: Real>(
    u: &ColumnBasis<T>,
    v: &ColumnBasis<T>,
    j: usize,
    x: &[Cplx<T>],
) -> (Vec<T>, Vec<T>) {
    let c = v.adjoint_apply(j, x).into_iter().map(|z| z.re).collect();
    let d = u.adjoint_apply(j, x).into_iter().map(|z| z.im).collect();
    (c, d)
}

/// `x -= U c + V (i d)` for coefficients from [`structured_coeffs_uv`].
pub fn subtract_uv<T: Real>(
    u: &ColumnBasis<T>,
    v: &ColumnBasis<T>,
    c: &[T],
    d_imag: &[T],
    x: &mut [Cplx<T>],
) {
    u.sub_combination_real(c, x);
    let d: Vec<Cplx<T>> = d_imag.iter().map(|&di| Cplx::new(T::zero(), di)).collect();
    v.sub_combination(&d, x);
}
