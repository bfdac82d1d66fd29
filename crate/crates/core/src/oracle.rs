//! Unstructured dense reference: the full `2n × 2n` matrix, its complete
//! eigendecomposition through a complex Schur form, and a definiteness test.
//!
//! Everything here runs in `f64` regardless of the operator's precision and
//! shares no code path with the structured solvers.

use nalgebra::{Cholesky, DMatrix, DVector, Schur};
use num_complex::Complex;

use crate::error::{BseError, Result};
use crate::operator::BseOperator;
use crate::scalar::Real;

pub type C64 = Complex<f64>;

/// Largest block order the oracle will assemble.
pub const DENSE_LIMIT: usize = 2048;

fn guard(n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        Err(BseError::SizeGuard {
            n,
            limit: DENSE_LIMIT,
        })
    } else {
        Ok(())
    }
}

fn c64<T: Real>(z: Complex<T>) -> C64 {
    C64::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// `H = [[R, C], [−C̄, −R̄]]`.
pub fn assemble_h<T: Real>(op: &BseOperator<T>) -> Result<DMatrix<C64>> {
    let n = op.n();
    guard(n)?;
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    for (i, j, v) in op.r().entries() {
        let v = c64(v);
        h[(i, j)] += v;
        h[(n + i, n + j)] -= v.conj();
    }
    for (i, j, v) in op.c().entries() {
        let v = c64(v);
        h[(i, n + j)] += v;
        h[(n + i, j)] -= v.conj();
    }
    Ok(h)
}

/// `Ĥ = [[R, C], [C̄, R̄]]`, Hermitian.
pub fn assemble_hhat<T: Real>(op: &BseOperator<T>) -> Result<DMatrix<C64>> {
    let n = op.n();
    let mut h = assemble_h(op)?;
    for i in n..2 * n {
        for j in 0..2 * n {
            h[(i, j)] = -h[(i, j)];
        }
    }
    Ok(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    Definite,
    Indefinite,
    /// Smallest eigenvalue of `Ĥ` within `1e-12‖Ĥ‖` of zero.
    Borderline,
}

#[derive(Clone, Debug)]
pub struct DenseEigenDecomposition {
    pub values: Vec<C64>,
    /// Unit-norm right eigenvectors, one column per value.
    pub right_vectors: DMatrix<C64>,
    pub definiteness: Definiteness,
}

impl DenseEigenDecomposition {
    /// Real parts of the eigenvalues with positive real part, ascending.
    pub fn positive_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.values.iter().filter(|z| z.re > 0.0).map(|z| z.re).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    /// All eigenvalues sorted by real part.
    pub fn sorted_values(&self) -> Vec<C64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v
    }
}

/// Eigenvalues and unit right eigenvectors of a general square matrix.
pub fn dense_eig(h: &DMatrix<C64>) -> Result<(Vec<C64>, DMatrix<C64>)> {
    let m = h.nrows();
    if m != h.ncols() {
        return Err(BseError::DimensionMismatch(format!(
            "dense_eig needs a square matrix, got {}x{}",
            m,
            h.ncols()
        )));
    }
    let iters = 1000 * m.max(1);
    let schur = Schur::try_new(h.clone(), f64::EPSILON, iters).ok_or(BseError::NonConvergence {
        routine: "complex Schur",
        iterations: iters,
    })?;
    let (q, t) = schur.unpack();
    let tnorm = t.iter().fold(0.0f64, |a, z| a.max(z.norm())).max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * tnorm;
    let mut vectors = DMatrix::zeros(m, m);
    let mut values = Vec::with_capacity(m);
    for k in 0..m {
        let lam = t[(k, k)];
        values.push(lam);
        // back-substitution on the leading k×k block of T − λI
        let mut y = DVector::<C64>::zeros(m);
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = C64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * y[j];
            }
            let mut den = t[(i, i)] - lam;
            if den.norm() < small {
                den = C64::new(small, 0.0);
            }
            y[i] = -s / den;
        }
        let x = &q * y;
        let nx = x.norm();
        vectors.set_column(k, &(x / C64::new(nx, 0.0)));
    }
    Ok((values, vectors))
}

pub fn definiteness_check<T: Real>(op: &BseOperator<T>) -> Result<Definiteness> {
    let hh = assemble_hhat(op)?;
    let eig = hh.clone().symmetric_eigen();
    let norm = eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    let delta = 1e-12 * norm;
    let factors = Cholesky::new(hh).is_some();
    Ok(if min > delta && factors {
        Definiteness::Definite
    } else if min < -delta {
        Definiteness::Indefinite
    } else {
        Definiteness::Borderline
    })
}

/// Full decomposition of the assembled operator.
pub fn decompose<T: Real>(op: &BseOperator<T>) -> Result<DenseEigenDecomposition> {
    let h = assemble_h(op)?;
    let (values, right_vectors) = dense_eig(&h)?;
    Ok(DenseEigenDecomposition {
        values,
        right_vectors,
        definiteness: definiteness_check(op)?,
    })
}

/// Greedy nearest-value pairing of `computed` against `reference`: each
/// computed value (in order) takes the closest unused reference value.
/// Returns `(computed index, reference index, relative deviation)`, or an
/// error naming the first value outside the relative `gate`.
pub fn match_values(reference: &[f64], computed: &[f64], gate: f64) -> Result<Vec<(usize, usize, f64)>> {
    let mut used = vec![false; reference.len()];
    let mut out = Vec::with_capacity(computed.len());
    for (ci, &c) in computed.iter().enumerate() {
        let best = reference
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|a, b| (a.1 - c).abs().partial_cmp(&(b.1 - c).abs()).unwrap());
        let Some((ri, &r)) = best else {
            return Err(BseError::InvalidInput(format!(
                "no reference value left for computed value {c}"
            )));
        };
        let dev = (r - c).abs() / r.abs().max(f64::MIN_POSITIVE);
        if dev > gate {
            return Err(BseError::InvalidInput(format!(
                "computed value {c} has no reference within {gate:e} (nearest {r}, deviation {dev:e})"
            )));
        }
        used[ri] = true;
        out.push((ci, ri, dev));
    }
    Ok(out)
}

/// `‖H x − λ x‖₂` for a dense `H`.
pub fn residual(h: &DMatrix<C64>, lam: C64, x: &[C64]) -> f64 {
    let xv = DVector::from_column_slice(x);
    (h * &xv - xv * lam).norm()
}

/// Spectral norm of `H` estimated by its Frobenius norm (an upper bound).
pub fn norm_bound(h: &DMatrix<C64>) -> f64 {
    h.norm()
}
