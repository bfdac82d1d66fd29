//! Projected-BSE variant: bases `W`, `Z` with `W^H W − Z^H Z = I`,
//! `W^H Z̄ = Z^H W̄`, in which the projected matrix itself has BSE structure
//!
//! ```text
//!   [ A   B ]      A = (I + T)/2,  B = (I − T)/2
//!   [-B  -A ]
//! ```
//!
//! `T` is Shao's matrix; the `W`, `Z` vectors relate to Shao's through
//! `u = w + z̄`, `v = w − z̄`.
//!
//! The identity shift in `A` and `B` fixes an absolute scale: entries of `T`
//! below one lose relative accuracy. Operators with `‖H‖ < 1` are therefore
//! run as `H/s` for a power of two `s ≤ ‖H‖`; everything handed to the
//! driver is converted back to the scale of `H`.

use super::{
    breakdown_floor, classify_radicand, Arrow, Lanczos, Ritz, SolverKind, StepOutcome,
};
use crate::basis::{ColumnBasis, PairedBasis};
use crate::error::Result;
use crate::linalg::{Order, SymTridiag};
use crate::operator::BseOperator;
use crate::scalar::{axpy, axpy_real, conj_vec, dotc, norm2, Cplx, Real};

#[derive(Clone, Debug)]
pub struct ProjectedSolver<T> {
    basis: PairedBasis<T>,
    /// `T` of `H/s`, with the restart coupling kept in Shao scale.
    t: Arrow<T>,
    a: Vec<T>,
    s: T,
    inv_s: T,
}

impl<T: Real> ProjectedSolver<T> {
    pub fn w(&self) -> &ColumnBasis<T> {
        &self.basis.first
    }

    pub fn z(&self) -> &ColumnBasis<T> {
        &self.basis.second
    }

    /// Power of two the operator is divided by.
    pub fn scale(&self) -> T {
        self.s
    }

    /// Projected matrix of `H/s`.
    pub fn projected(&self) -> &Arrow<T> {
        &self.t
    }

    fn unscale(&self, x: &[T]) -> Vec<T> {
        let s2 = self.s * self.s;
        x.iter().map(|&v| v * s2).collect()
    }

    /// `α_j = 2a_j − 1`, the diagonal of `T`, in the scale of `H`.
    pub fn alpha(&self) -> Vec<T> {
        self.unscale(&self.t.diag)
    }

    /// `a_j = (1 + α_j)/2` of `H/s` for the steps taken since the last
    /// restart.
    pub fn a(&self) -> &[T] {
        &self.a
    }

    pub fn beta(&self) -> Vec<T> {
        self.unscale(&self.t.off)
    }

    pub fn tridiag(&self) -> SymTridiag<T> {
        let s = self.t.size();
        SymTridiag::new(self.alpha(), self.beta()[..s.saturating_sub(1)].to_vec())
    }

    fn plus(&self, op: &BseOperator<T>, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
        op.apply_plus_into(x, y);
        y.iter_mut().for_each(|z| *z = *z * self.inv_s);
    }

    fn minus(&self, op: &BseOperator<T>, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
        op.apply_minus_into(x, y);
        y.iter_mut().for_each(|z| *z = *z * self.inv_s);
    }

    pub fn extend_plain(&mut self, op: &BseOperator<T>, k: usize) -> Result<()> {
        while self.size() < k {
            if self.step(op)? == StepOutcome::Breakdown {
                break;
            }
        }
        Ok(())
    }

    /// Append `w = (u+v)/2`, `z = conj(u−v)/2` for `u = 2ǔ/β`, `v = 2ṽ/β`.
    fn push_next(&mut self, uc: &[Cplx<T>], vc: &[Cplx<T>], beta: T) {
        let s = T::lit(2.0) / beta;
        let half = T::lit(0.5);
        let w: Vec<_> = uc.iter().zip(vc).map(|(u, v)| (*u + *v) * (s * half)).collect();
        let z: Vec<_> = uc.iter().zip(vc).map(|(u, v)| ((*u - *v) * (s * half)).conj()).collect();
        self.basis.first.push(&w);
        self.basis.second.push(&z);
    }

    /// `u -= W c + conj(Z c)` with `c = W^H u − Z^H ū` over `j` columns.
    /// Returns `c`.
    fn orthogonalize(&self, j: usize, u: &mut [Cplx<T>]) -> Vec<Cplx<T>> {
        let ub = conj_vec(u);
        let cw = self.basis.first.adjoint_apply(j, u);
        let cz = self.basis.second.adjoint_apply(j, &ub);
        let c: Vec<_> = cw.iter().zip(&cz).map(|(a, b)| *a - *b).collect();
        self.basis.first.sub_combination(&c, u);
        let mut zc = vec![Cplx::new(T::zero(), T::zero()); u.len()];
        for (i, ci) in c.iter().enumerate() {
            axpy(*ci, self.basis.second.col(i), &mut zc);
        }
        for (ui, zi) in u.iter_mut().zip(&zc) {
            *ui -= zi.conj();
        }
        c
    }

    /// `y -= coef·(w_i + z̄_i)`
    fn sub_shao_u(&self, i: usize, coef: T, y: &mut [Cplx<T>]) {
        axpy_real(-coef, self.basis.first.col(i), y);
        for (yi, zi) in y.iter_mut().zip(self.basis.second.col(i)) {
            yi.re -= coef * zi.re;
            yi.im += coef * zi.im;
        }
    }
}

impl<T: Real> Lanczos<T> for ProjectedSolver<T> {
    const KIND: SolverKind = SolverKind::Projected;

    fn start(op: &BseOperator<T>, v0: &[Cplx<T>], kmax: usize) -> Result<Option<Self>> {
        let n = op.n();
        let bound = op.norm_bound();
        let s = if bound < T::one() && bound > T::zero() {
            T::lit(2.0).powi(bound.log2().floor().to_i32().unwrap_or(0))
        } else {
            T::one()
        };
        let mut s = Self {
            basis: PairedBasis::wz(
                ColumnBasis::with_capacity(n, kmax + 1),
                ColumnBasis::with_capacity(n, kmax + 1),
            ),
            t: Arrow::default(),
            a: Vec::new(),
            s,
            inv_s: T::one() / s,
        };
        let mut pv = vec![Cplx::new(T::zero(), T::zero()); n];
        s.plus(op, v0, &mut pv);
        let rad = dotc(v0, &pv).re;
        let Some(beta) = classify_radicand(rad, norm2(v0), norm2(&pv), "start vector")? else {
            return Ok(None);
        };
        // β here is Shao's β₀; push_next expects the doubled scale
        s.push_next(v0, &pv, T::lit(2.0) * beta);
        Ok(Some(s))
    }

    fn size(&self) -> usize {
        self.t.size()
    }

    fn has_next(&self) -> bool {
        self.basis.first.len() > self.size()
    }

    fn step(&mut self, op: &BseOperator<T>) -> Result<StepOutcome> {
        let j = self.size();
        let n = op.n();
        let half = T::lit(0.5);
        let (wj, zj) = (self.basis.first.col(j), self.basis.second.col(j));
        let v: Vec<_> = wj.iter().zip(zj).map(|(w, z)| *w - z.conj()).collect();
        let mut vp = vec![Cplx::new(T::zero(), T::zero()); n];
        self.minus(op, &v, &mut vp);
        let vpnorm = norm2(&vp);
        let wp: Vec<_> = vp.iter().zip(&v).map(|(a, b)| (*a + *b) * half).collect();
        let zp: Vec<_> = vp.iter().zip(&v).map(|(a, b)| ((*a - *b) * half).conj()).collect();
        let a_loc = (dotc(wj, &wp) - dotc(zj, &zp)).re;

        let mut u = wp;
        axpy_real(-a_loc, wj, &mut u);
        let am1 = a_loc - T::one();
        for (ui, zi) in u.iter_mut().zip(zj) {
            ui.re -= am1 * zi.re;
            ui.im += am1 * zi.im;
        }
        if j == self.t.r {
            for i in 0..self.t.r {
                self.sub_shao_u(i, half * self.t.spike[i], &mut u);
            }
        } else {
            self.sub_shao_u(j - 1, half * self.t.off[j - 1], &mut u);
        }

        let c = self.orthogonalize(j + 1, &mut u);
        let a = a_loc + c[j].re;
        self.a.push(a);
        self.t.diag.push(T::lit(2.0) * a - T::one());

        let unorm = norm2(&u);
        if unorm <= breakdown_floor::<T>() * vpnorm {
            self.t.off.push(T::zero());
            return Ok(StepOutcome::Breakdown);
        }
        let mut pv = vec![Cplx::new(T::zero(), T::zero()); n];
        self.plus(op, &u, &mut pv);
        let rad = dotc(&u, &pv).re;
        match classify_radicand(rad, unorm, norm2(&pv), "projected step")? {
            None => {
                self.t.off.push(T::zero());
                Ok(StepOutcome::Breakdown)
            }
            Some(root) => {
                let beta = T::lit(2.0) * root;
                self.t.off.push(beta);
                self.push_next(&u, &pv, beta);
                Ok(StepOutcome::Ok)
            }
        }
    }

    fn inject(&mut self, op: &BseOperator<T>, fresh: Vec<Cplx<T>>) -> Result<bool> {
        let j = self.size();
        let fnorm = norm2(&fresh);
        let mut u = fresh;
        for _ in 0..2 {
            self.orthogonalize(j, &mut u);
        }
        let unorm = norm2(&u);
        if unorm <= breakdown_floor::<T>() * fnorm {
            return Ok(false);
        }
        let mut pv = vec![Cplx::new(T::zero(), T::zero()); op.n()];
        self.plus(op, &u, &mut pv);
        let rad = dotc(&u, &pv).re;
        match classify_radicand(rad, unorm, norm2(&pv), "replacement vector")? {
            None => Ok(false),
            Some(root) => {
                self.push_next(&u, &pv, T::lit(2.0) * root);
                Ok(true)
            }
        }
    }

    fn ritz(&self, order: Order) -> Result<Ritz<T>> {
        let beta = if self.has_next() { self.t.last_off() } else { T::zero() };
        let mut ritz = self.t.sym_ritz(beta, order)?;
        if self.s != T::one() {
            let s2 = self.s * self.s;
            ritz.values.iter_mut().for_each(|l| *l *= self.s);
            ritz.b.iter_mut().for_each(|b| *b *= s2);
            ritz.factor.values.iter_mut().for_each(|d| *d *= s2);
        }
        Ok(ritz)
    }

    fn compress(&mut self, ritz: &Ritz<T>, keep: usize) {
        let s = self.size();
        let q = &ritz.factor.vectors;
        let mut w = self.basis.first.rotate(q, keep);
        let mut z = self.basis.second.rotate(q, keep);
        if self.has_next() {
            w.push(self.basis.first.col(s));
            z.push(self.basis.second.col(s));
        }
        self.basis = PairedBasis::wz(w, z);
        let s2 = self.s * self.s;
        let d: Vec<T> = ritz.factor.values[..keep].iter().map(|&d| d / s2).collect();
        let b: Vec<T> = ritz.b[..keep].iter().map(|&b| b / s2).collect();
        self.t.compress(&d, &b);
        self.a = d.iter().map(|&d| (T::one() + d) * T::lit(0.5)).collect();
    }

    fn extract(&self, ritz: &Ritz<T>, count: usize) -> (ColumnBasis<T>, ColumnBasis<T>) {
        let q = &ritz.factor.vectors;
        let wh = self.basis.first.rotate(q, count);
        let zh = self.basis.second.rotate(q, count);
        let n = wh.n();
        let mut x1 = ColumnBasis::with_capacity(n, count);
        let mut x2 = ColumnBasis::with_capacity(n, count);
        for i in 0..count {
            let l = ritz.values[i] * self.inv_s;
            let (p, m) = (l + T::one(), l - T::one());
            let (w, z) = (wh.col(i), zh.col(i));
            let c1: Vec<_> = w.iter().zip(z).map(|(a, b)| *a * p + b.conj() * m).collect();
            let c2: Vec<_> = w.iter().zip(z).map(|(a, b)| *b * p + a.conj() * m).collect();
            x1.push(&c1);
            x2.push(&c2);
        }
        (x1, x2)
    }

    fn rho(&self) -> T {
        if self.has_next() {
            let s = self.size();
            let u: Vec<_> = self
                .basis
                .first
                .col(s)
                .iter()
                .zip(self.basis.second.col(s))
                .map(|(w, z)| *w + z.conj())
                .collect();
            T::lit(2.0).sqrt() * norm2(&u) * self.inv_s
        } else {
            T::zero()
        }
    }

    fn basis(&self) -> &PairedBasis<T> {
        &self.basis
    }
}
