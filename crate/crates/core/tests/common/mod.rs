#![allow(dead_code)]

use bse_lanczos::oracle::{self, C64};
use bse_lanczos::solver::Arrow;
use bse_lanczos::*;
use nalgebra::{DMatrix, DVector};

pub fn scalar_op(r: f64, c: C64) -> BseOperator<f64> {
    BseOperator::new(
        Block::Dense(DenseBlock::from_fn(1, |_, _| C64::new(r, 0.0))),
        Block::Dense(DenseBlock::from_fn(1, |_, _| c)),
    )
    .unwrap()
}

pub fn run_all(op: &BseOperator<f64>, cfg: &SolverConfig) -> Vec<(SolverKind, EigResult<f64>)> {
    SolverKind::ALL
        .iter()
        .map(|&k| (k, solve(op, k, cfg).unwrap_or_else(|e| panic!("{}: {e}", k.name()))))
        .collect()
}

/// Max over all returned triplets of `‖Hx − λx‖` and `‖H^*y − λy‖`,
/// computed with the assembled dense matrix.
pub fn dense_residuals(h: &DMatrix<C64>, res: &EigResult<f64>) -> (f64, f64) {
    let ha = h.adjoint();
    let mut worst = (0.0f64, 0.0f64);
    for (i, &l) in res.eigenvalues().iter().enumerate() {
        let lam = C64::new(l, 0.0);
        let x = res.right_vector(i);
        let y = res.left_vector(i);
        worst.0 = worst.0.max(oracle::residual(h, lam, &x));
        worst.1 = worst.1.max(oracle::residual(&ha, lam, &y));
    }
    worst
}

pub fn spectral_norm(h: &DMatrix<C64>) -> f64 {
    h.clone().singular_values().max()
}

pub fn max_col_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `[x̄₂; x̄₁]` for `x = [x₁; x₂]`.
pub fn swap_conj(x: &[C64]) -> Vec<C64> {
    let n = x.len() / 2;
    x[n..].iter().chain(&x[..n]).map(|z| z.conj()).collect()
}

/// `‖Hx − λx‖` through the kernels, without assembling `H`.
pub fn kernel_residual(op: &BseOperator<f64>, lam: f64, x: &[C64]) -> f64 {
    let hx = op.apply_h(x).unwrap();
    hx.iter().zip(x).map(|(a, b)| (a - b * lam).norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm(x: &[C64]) -> f64 {
    DVector::from_column_slice(x).norm()
}

fn sub(y: &mut [C64], x: &[C64], c: f64) {
    for (yk, xk) in y.iter_mut().zip(x) {
        *yk -= xk * c;
    }
}

/// `max_j ‖apply_minus(v_j) − Σ_i u_i T_ij − δ_{j,s−1} β u_s‖` for a
/// Shao-form decomposition with `s` complete columns.
pub fn shao_relation_defect(op: &BseOperator<f64>, u: &[Vec<C64>], v: &[Vec<C64>], t: &Arrow<f64>) -> f64 {
    let s = t.size();
    let tm = t.to_symmetric();
    let mut worst = 0.0f64;
    for j in 0..s {
        let mut y = op.apply_minus(&v[j]).unwrap();
        for (i, ui) in u.iter().enumerate().take(s) {
            sub(&mut y, ui, tm[(i, j)]);
        }
        if j + 1 == s {
            sub(&mut y, &u[s], t.last_off());
        }
        worst = worst.max(norm(&y));
    }
    worst
}

/// Same relation right after a compress: `apply_minus(v_j) = d_j u_j + b_j u_r`.
pub fn compressed_relation_defect(op: &BseOperator<f64>, u: &[Vec<C64>], v: &[Vec<C64>], t: &Arrow<f64>) -> f64 {
    let r = t.r;
    let mut worst = 0.0f64;
    for j in 0..r {
        let mut y = op.apply_minus(&v[j]).unwrap();
        sub(&mut y, &u[j], t.diag[j]);
        sub(&mut y, &u[r], t.spike[j]);
        worst = worst.max(norm(&y));
    }
    worst
}

/// `max_j ‖apply_plus(u_j) − v_j‖`.
pub fn plus_relation_defect(op: &BseOperator<f64>, u: &[Vec<C64>], v: &[Vec<C64>]) -> f64 {
    v.iter()
        .zip(u)
        .map(|(vj, uj)| max_col_diff(&op.apply_plus(uj).unwrap(), vj))
        .fold(0.0, f64::max)
}

pub fn cols(b: &ColumnBasis<f64>) -> Vec<Vec<C64>> {
    b.columns().map(|c| c.to_vec()).collect()
}
