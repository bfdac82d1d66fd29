//! Test instances: the pentadiagonal family and seeded random definite
//! problems.
//!
//! Random instances use `rand_chacha::ChaCha20Rng::seed_from_u64(seed)` and
//! draw every real number uniformly from `[-1, 1)` (or the stated interval)
//! in a fixed order, so a seed pins the instance on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{BseError, Result};
use crate::operator::{Block, BseOperator, CsrBlock, DenseBlock};
use crate::scalar::{Cplx, Real};

type C64 = Complex<f64>;

/// `R = pentadiag(a, b, c, b̄, ā)`, `C = tridiag(b, d, b)`: row `i` of `R`
/// holds `a`, `b` on the two subdiagonals and `b̄`, `ā` on the
/// superdiagonals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PentadiagSpec {
    pub n: usize,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl PentadiagSpec {
    pub const DEFAULT_A: C64 = C64::new(-0.1, 0.2);
    pub const DEFAULT_B: C64 = C64::new(1.0, 0.5);
    pub const DEFAULT_C: C64 = C64::new(4.5, 0.0);
    pub const DEFAULT_D: C64 = C64::new(2.0, 0.2);

    /// Default coefficients at order `n`.
    pub fn with_n(n: usize) -> Self {
        Self {
            n,
            a: Self::DEFAULT_A,
            b: Self::DEFAULT_B,
            c: Self::DEFAULT_C,
            d: Self::DEFAULT_D,
        }
    }
}

fn cast<T: Real>(z: C64) -> Cplx<T> {
    Cplx::new(T::lit(z.re), T::lit(z.im))
}

pub fn gen_pentadiag<T: Real>(spec: &PentadiagSpec) -> Result<BseOperator<T>> {
    let n = spec.n;
    if n < 3 {
        return Err(BseError::InvalidInput(format!("pentadiag needs n >= 3, got {n}")));
    }
    if spec.c.im != 0.0 {
        return Err(BseError::InvalidInput(format!(
            "diagonal coefficient c must be real, got {}",
            spec.c
        )));
    }
    let mut rt = Vec::with_capacity(5 * n);
    let mut ct = Vec::with_capacity(3 * n);
    for i in 0..n {
        if i >= 2 {
            rt.push((i, i - 2, cast(spec.a)));
        }
        if i >= 1 {
            rt.push((i, i - 1, cast(spec.b)));
            ct.push((i, i - 1, cast(spec.b)));
        }
        rt.push((i, i, cast(spec.c)));
        ct.push((i, i, cast(spec.d)));
        if i + 1 < n {
            rt.push((i, i + 1, cast(spec.b.conj())));
            ct.push((i, i + 1, cast(spec.b)));
        }
        if i + 2 < n {
            rt.push((i, i + 2, cast(spec.a.conj())));
        }
    }
    BseOperator::new(
        Block::Sparse(CsrBlock::from_triplets(n, &rt)?),
        Block::Sparse(CsrBlock::from_triplets(n, &ct)?),
    )
}

/// Random definite instance with `margin ∈ (0, 1)`.
///
/// `R = Q diag(ρ) Q^H` for a random unitary `Q`, with `ρ₁ = 1` and the rest
/// uniform in `[1, 4]`. With `q = Q e₁` and `P = I − q q^H`,
/// `C = margin·(q qᵀ + 0.1·P S Pᵀ)` for a random complex symmetric `S`
/// scaled to unit ∞-norm. Then `‖R^{-1/2} C R̄^{-1/2}‖₂ = margin` exactly,
/// so the instance is definite precisely when `margin < 1`.
pub fn gen_random_definite<T: Real>(n: usize, seed: u64, margin: f64) -> Result<BseOperator<T>> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(BseError::InvalidInput(format!(
            "margin must lie in (0, 1), got {margin}"
        )));
    }
    gen_random_bse(n, seed, margin)
}

/// Same construction as [`gen_random_definite`] without the margin check;
/// `margin ≥ 1` gives an indefinite instance.
pub fn gen_random_bse<T: Real>(n: usize, seed: u64, margin: f64) -> Result<BseOperator<T>> {
    if n == 0 {
        return Err(BseError::InvalidInput("n must be positive".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut draw = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));

    // columns of a random unitary
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(n);
    while q.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| draw()).collect();
        for _ in 0..2 {
            for p in &q {
                let proj: C64 = p.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, pi) in v.iter_mut().zip(p) {
                    *vi -= proj * pi;
                }
            }
        }
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nv > 1e-8 {
            v.iter_mut().for_each(|z| *z /= nv);
            q.push(v);
        }
    }
    let mut rho = vec![1.0];
    for _ in 1..n {
        rho.push(rng.gen_range(1.0..=4.0));
    }
    let mut s = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            s[i][j] = z;
            s[j][i] = z;
        }
    }
    let sinf = s
        .iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    s.iter_mut().flatten().for_each(|z| *z /= sinf);

    let mut r = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v: C64 = (0..n).map(|k| q[k][i] * rho[k] * q[k][j].conj()).sum();
            r[i][j] = v;
        }
    }
    let q1 = &q[0];
    // P S Pᵀ = (I − q q^H) S (I − q̄ qᵀ)
    let mut ps = s.clone();
    let qh_s: Vec<C64> = (0..n).map(|j| (0..n).map(|k| q1[k].conj() * s[k][j]).sum()).collect();
    for i in 0..n {
        for j in 0..n {
            ps[i][j] -= q1[i] * qh_s[j];
        }
    }
    let ps_qbar: Vec<C64> = (0..n).map(|i| (0..n).map(|k| ps[i][k] * q1[k].conj()).sum()).collect();
    let mut c = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let pspt = ps[i][j] - ps_qbar[i] * q1[j];
            c[i][j] = (q1[i] * q1[j] + pspt * 0.1) * margin;
        }
    }

    let rb = DenseBlock::from_fn(n, |i, j| {
        let z = if i > j {
            r[i][j]
        } else if i < j {
            r[j][i].conj()
        } else {
            C64::new(r[i][i].re, 0.0)
        };
        cast(z)
    });
    let cb = DenseBlock::from_fn(n, |i, j| cast(if i >= j { c[i][j] } else { c[j][i] }));
    BseOperator::new(Block::Dense(rb), Block::Dense(cb))
}
