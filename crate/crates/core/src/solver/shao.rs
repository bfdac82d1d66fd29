//! Shao's variant: bases `U`, `V` with `2Re(V^H U) = 2I` and
//!
//! ```text
//!   R V − C V̄ = U T + β_k u_{k+1} e_kᵀ,     R U + C Ū = V
//! ```
//!
//! so `T` is real symmetric positive definite and its eigenvalues are `λ²`.

use super::{
    classify_radicand, breakdown_floor, Arrow, Lanczos, Ritz, SolverKind, StepOutcome,
};
use crate::basis::{structured_coeffs_uv, subtract_uv, ColumnBasis, PairedBasis};
use crate::error::Result;
use crate::linalg::{Order, SymTridiag};
use crate::operator::BseOperator;
use crate::scalar::{axpy_real, dotc, norm2, scale_in_place, Cplx, Real};

#[derive(Clone, Debug)]
pub struct ShaoSolver<T> {
    basis: PairedBasis<T>,
    t: Arrow<T>,
}

impl<T: Real> ShaoSolver<T> {
    pub fn u(&self) -> &ColumnBasis<T> {
        &self.basis.first
    }

    pub fn v(&self) -> &ColumnBasis<T> {
        &self.basis.second
    }

    /// Projected matrix `T` in its current (possibly restarted) shape.
    pub fn projected(&self) -> &Arrow<T> {
        &self.t
    }

    /// `T` as a tridiagonal; only meaningful before the first restart.
    pub fn tridiag(&self) -> SymTridiag<T> {
        let s = self.t.size();
        SymTridiag::new(self.t.diag.clone(), self.t.off[..s.saturating_sub(1)].to_vec())
    }

    /// Run steps without breakdown handling, for fixed-size experiments.
    pub fn extend_plain(&mut self, op: &BseOperator<T>, k: usize) -> Result<()> {
        while self.size() < k {
            if self.step(op)? == StepOutcome::Breakdown {
                break;
            }
        }
        Ok(())
    }

    fn push_next(&mut self, mut u: Vec<Cplx<T>>, mut v: Vec<Cplx<T>>, beta: T) {
        let s = T::one() / beta;
        scale_in_place(s, &mut u);
        scale_in_place(s, &mut v);
        self.basis.first.push(&u);
        self.basis.second.push(&v);
    }
}

impl<T: Real> Lanczos<T> for ShaoSolver<T> {
    const KIND: SolverKind = SolverKind::Shao;

    fn start(op: &BseOperator<T>, v0: &[Cplx<T>], kmax: usize) -> Result<Option<Self>> {
        let n = op.n();
        let u0 = v0.to_vec();
        let mut v1 = vec![Cplx::new(T::zero(), T::zero()); n];
        op.apply_plus_into(&u0, &mut v1);
        let rad = dotc(&u0, &v1).re;
        let Some(beta) = classify_radicand(rad, norm2(&u0), norm2(&v1), "start vector")? else {
            return Ok(None);
        };
        let mut s = Self {
            basis: PairedBasis::uv(
                ColumnBasis::with_capacity(n, kmax + 1),
                ColumnBasis::with_capacity(n, kmax + 1),
            ),
            t: Arrow::default(),
        };
        s.push_next(u0, v1, beta);
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
        let (u, v) = (&self.basis.first, &self.basis.second);
        let mut x = vec![Cplx::new(T::zero(), T::zero()); n];
        op.apply_minus_into(v.col(j), &mut x);
        let xnorm = norm2(&x);
        let alpha_loc = dotc(v.col(j), &x).re;

        let mut w = x;
        axpy_real(-alpha_loc, u.col(j), &mut w);
        if j == self.t.r {
            u.sub_combination_real(&self.t.spike, &mut w);
        } else {
            axpy_real(-self.t.off[j - 1], u.col(j - 1), &mut w);
        }

        let (c, d) = structured_coeffs_uv(u, v, j + 1, &w);
        subtract_uv(u, v, &c, &d, &mut w);
        self.t.diag.push(alpha_loc + c[j]);

        let wnorm = norm2(&w);
        if wnorm <= breakdown_floor::<T>() * xnorm {
            self.t.off.push(T::zero());
            return Ok(StepOutcome::Breakdown);
        }
        let mut pv = vec![Cplx::new(T::zero(), T::zero()); n];
        op.apply_plus_into(&w, &mut pv);
        let rad = dotc(&w, &pv).re;
        match classify_radicand(rad, wnorm, norm2(&pv), "Lanczos step")? {
            None => {
                self.t.off.push(T::zero());
                Ok(StepOutcome::Breakdown)
            }
            Some(beta) => {
                self.t.off.push(beta);
                self.push_next(w, pv, beta);
                Ok(StepOutcome::Ok)
            }
        }
    }

    fn inject(&mut self, op: &BseOperator<T>, fresh: Vec<Cplx<T>>) -> Result<bool> {
        let j = self.size();
        let fnorm = norm2(&fresh);
        let mut w = fresh;
        for _ in 0..2 {
            let (c, d) = structured_coeffs_uv(&self.basis.first, &self.basis.second, j, &w);
            subtract_uv(&self.basis.first, &self.basis.second, &c, &d, &mut w);
        }
        let wnorm = norm2(&w);
        if wnorm <= breakdown_floor::<T>() * fnorm {
            return Ok(false);
        }
        let mut pv = vec![Cplx::new(T::zero(), T::zero()); op.n()];
        op.apply_plus_into(&w, &mut pv);
        let rad = dotc(&w, &pv).re;
        match classify_radicand(rad, wnorm, norm2(&pv), "replacement vector")? {
            None => Ok(false),
            Some(beta) => {
                self.push_next(w, pv, beta);
                Ok(true)
            }
        }
    }

    fn ritz(&self, order: Order) -> Result<Ritz<T>> {
        let beta = if self.has_next() { self.t.last_off() } else { T::zero() };
        self.t.sym_ritz(beta, order)
    }

    fn compress(&mut self, ritz: &Ritz<T>, keep: usize) {
        let s = self.size();
        let q = &ritz.factor.vectors;
        let mut u = self.basis.first.rotate(q, keep);
        let mut v = self.basis.second.rotate(q, keep);
        if self.has_next() {
            u.push(self.basis.first.col(s));
            v.push(self.basis.second.col(s));
        }
        self.basis = PairedBasis::uv(u, v);
        self.t.compress(&ritz.factor.values[..keep], &ritz.b[..keep]);
    }

    fn extract(&self, ritz: &Ritz<T>, count: usize) -> (ColumnBasis<T>, ColumnBasis<T>) {
        let q = &ritz.factor.vectors;
        let uh = self.basis.first.rotate(q, count);
        let vh = self.basis.second.rotate(q, count);
        let n = uh.n();
        let mut x1 = ColumnBasis::with_capacity(n, count);
        let mut x2 = ColumnBasis::with_capacity(n, count);
        for i in 0..count {
            let l = ritz.values[i];
            let (a, b) = (uh.col(i), vh.col(i));
            let c1: Vec<_> = a.iter().zip(b).map(|(p, q)| *p * l + *q).collect();
            let c2: Vec<_> = a.iter().zip(b).map(|(p, q)| (*p * l - *q).conj()).collect();
            x1.push(&c1);
            x2.push(&c2);
        }
        (x1, x2)
    }

    fn rho(&self) -> T {
        if self.has_next() {
            T::lit(2.0).sqrt() * norm2(self.basis.first.col(self.size()))
        } else {
            T::zero()
        }
    }

    fn basis(&self) -> &PairedBasis<T> {
        &self.basis
    }
}
