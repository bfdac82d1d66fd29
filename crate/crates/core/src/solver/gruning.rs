//! Grüning's variant: bases `M`, `N` with companions `M' = RM + CM̄`,
//! `N' = RN − CN̄`, Gram identities `2Re(M'^H M) = I`, `2Re(N'^H N) = I`, and
//!
//! ```text
//!   M' = N Lᵀ,     N' = M L + β̂_{2k} m_{k+1} e_kᵀ
//! ```
//!
//! with `L` lower bidiagonal. The singular values of `L` are the Ritz values.

use super::{
    breakdown_floor, classify_radicand, Arrow, Lanczos, Ritz, SolverKind, StepOutcome,
};
use crate::basis::{ColumnBasis, PairedBasis};
use crate::error::{BseError, Result};
use crate::linalg::{bidiag_svd, dense_svd, LowerBidiag, Order};
use crate::operator::BseOperator;
use crate::scalar::{axpy_real, dotc, norm2, scale_in_place, Cplx, Real};

#[derive(Clone, Debug)]
pub struct GruningSolver<T> {
    basis: PairedBasis<T>,
    l: Arrow<T>,
}

impl<T: Real> GruningSolver<T> {
    pub fn m(&self) -> &ColumnBasis<T> {
        &self.basis.first
    }

    pub fn n_basis(&self) -> &ColumnBasis<T> {
        &self.basis.second
    }

    pub fn m_primed(&self) -> &ColumnBasis<T> {
        self.basis.first_primed.as_ref().unwrap()
    }

    pub fn n_primed(&self) -> &ColumnBasis<T> {
        self.basis.second_primed.as_ref().unwrap()
    }

    /// Projected factor `L` in its current (possibly restarted) shape.
    pub fn projected(&self) -> &Arrow<T> {
        &self.l
    }

    /// `L` as a lower bidiagonal; only meaningful before the first restart.
    pub fn bidiag(&self) -> LowerBidiag<T> {
        let s = self.l.size();
        LowerBidiag::new(self.l.diag.clone(), self.l.off[..s.saturating_sub(1)].to_vec())
    }

    pub fn extend_plain(&mut self, op: &BseOperator<T>, k: usize) -> Result<()> {
        while self.size() < k {
            if self.step(op)? == StepOutcome::Breakdown {
                break;
            }
        }
        Ok(())
    }

    fn mp_mut(&mut self) -> &mut ColumnBasis<T> {
        self.basis.first_primed.as_mut().unwrap()
    }

    fn np_mut(&mut self) -> &mut ColumnBasis<T> {
        self.basis.second_primed.as_mut().unwrap()
    }

    fn push_m(&mut self, mut m: Vec<Cplx<T>>, mut mp: Vec<Cplx<T>>, beta: T) {
        let s = T::one() / beta;
        scale_in_place(s, &mut m);
        scale_in_place(s, &mut mp);
        self.basis.first.push(&m);
        self.mp_mut().push(&mp);
    }

    /// `m -= M c + N (i d)` with `c = 2Re(M'^H m)`, `d = 2Im(N'^H m)` over the
    /// first `j` columns of each.
    fn orthogonalize(&self, j: usize, m: &mut [Cplx<T>]) {
        let two = T::lit(2.0);
        let c: Vec<T> = self.m_primed().adjoint_apply(j, m).iter().map(|z| two * z.re).collect();
        let d: Vec<Cplx<T>> = self
            .n_primed()
            .adjoint_apply(j, m)
            .iter()
            .map(|z| Cplx::new(T::zero(), two * z.im))
            .collect();
        self.basis.first.sub_combination_real(&c, m);
        self.basis.second.sub_combination(&d, m);
    }
}

impl<T: Real> Lanczos<T> for GruningSolver<T> {
    const KIND: SolverKind = SolverKind::Gruning;

    fn start(op: &BseOperator<T>, v0: &[Cplx<T>], kmax: usize) -> Result<Option<Self>> {
        let n = op.n();
        let m0 = v0.to_vec();
        let mut y = vec![Cplx::new(T::zero(), T::zero()); n];
        op.apply_plus_into(&m0, &mut y);
        let two = T::lit(2.0);
        let rad = two * dotc(&m0, &y).re;
        let Some(beta) = classify_radicand(rad, norm2(&m0), two * norm2(&y), "start vector")?
        else {
            return Ok(None);
        };
        let cap = |c| ColumnBasis::with_capacity(n, c);
        let mut s = Self {
            basis: PairedBasis::mn(cap(kmax + 1), cap(kmax), cap(kmax + 1), cap(kmax)),
            l: Arrow::default(),
        };
        s.push_m(m0, y, beta);
        Ok(Some(s))
    }

    fn size(&self) -> usize {
        self.l.size()
    }

    fn has_next(&self) -> bool {
        self.basis.first.len() > self.size()
    }

    fn step(&mut self, op: &BseOperator<T>) -> Result<StepOutcome> {
        let j = self.size();
        let n = op.n();
        let two = T::lit(2.0);

        let mut nt = self.m_primed().col(j).to_vec();
        if j == self.l.r {
            self.basis.second.sub_combination_real(&self.l.spike, &mut nt);
        } else {
            axpy_real(-self.l.off[j - 1], self.basis.second.col(j - 1), &mut nt);
        }
        let mut x = vec![Cplx::new(T::zero(), T::zero()); n];
        op.apply_minus_into(&nt, &mut x);
        let rad = two * dotc(&nt, &x).re;
        // β̂_j vanishing would make L, hence T = L Lᵀ, singular
        let beta_n = classify_radicand(rad, norm2(&nt), two * norm2(&x), "Grüning n-step")?
            .ok_or_else(|| {
                BseError::IndefiniteProblem(format!(
                    "Grüning n-step radicand {:e} vanished",
                    rad.to_f64_lossy()
                ))
            })?;
        let s = T::one() / beta_n;
        scale_in_place(s, &mut nt);
        scale_in_place(s, &mut x);
        self.basis.second.push(&nt);
        self.np_mut().push(&x);
        self.l.diag.push(beta_n);

        let mut mt = x;
        let xnorm = norm2(&mt);
        axpy_real(-beta_n, self.basis.first.col(j), &mut mt);
        self.orthogonalize(j + 1, &mut mt);

        let mnorm = norm2(&mt);
        if mnorm <= breakdown_floor::<T>() * xnorm {
            self.l.off.push(T::zero());
            return Ok(StepOutcome::Breakdown);
        }
        let mut y = vec![Cplx::new(T::zero(), T::zero()); n];
        op.apply_plus_into(&mt, &mut y);
        let rad = two * dotc(&mt, &y).re;
        match classify_radicand(rad, mnorm, two * norm2(&y), "Grüning m-step")? {
            None => {
                self.l.off.push(T::zero());
                Ok(StepOutcome::Breakdown)
            }
            Some(beta) => {
                self.l.off.push(beta);
                self.push_m(mt, y, beta);
                Ok(StepOutcome::Ok)
            }
        }
    }

    fn inject(&mut self, op: &BseOperator<T>, fresh: Vec<Cplx<T>>) -> Result<bool> {
        let j = self.size();
        let fnorm = norm2(&fresh);
        let mut m = fresh;
        for _ in 0..2 {
            self.orthogonalize(j, &mut m);
        }
        let mnorm = norm2(&m);
        if mnorm <= breakdown_floor::<T>() * fnorm {
            return Ok(false);
        }
        let two = T::lit(2.0);
        let mut y = vec![Cplx::new(T::zero(), T::zero()); op.n()];
        op.apply_plus_into(&m, &mut y);
        let rad = two * dotc(&m, &y).re;
        match classify_radicand(rad, mnorm, two * norm2(&y), "replacement vector")? {
            None => Ok(false),
            Some(beta) => {
                self.push_m(m, y, beta);
                Ok(true)
            }
        }
    }

    fn ritz(&self, order: Order) -> Result<Ritz<T>> {
        let s = self.size();
        let factor = if self.l.r == 0 {
            bidiag_svd(&self.bidiag(), order)?
        } else {
            dense_svd(&self.l.to_lower(), order)?
        };
        let beta = if self.has_next() { self.l.last_off() } else { T::zero() };
        let p = factor.right.as_ref().unwrap();
        let b = (0..s).map(|i| beta * p[(s - 1, i)]).collect();
        Ok(Ritz {
            values: factor.values.clone(),
            b,
            factor,
        })
    }

    fn compress(&mut self, ritz: &Ritz<T>, keep: usize) {
        let s = self.size();
        let q = &ritz.factor.vectors;
        let p = ritz.factor.right.as_ref().unwrap();
        let mut m = self.basis.first.rotate(q, keep);
        let mut mp = self.m_primed().rotate(q, keep);
        if self.has_next() {
            m.push(self.basis.first.col(s));
            mp.push(self.m_primed().col(s));
        }
        let nb = self.basis.second.rotate(p, keep);
        let np = self.n_primed().rotate(p, keep);
        self.basis = PairedBasis::mn(m, nb, mp, np);
        self.l.compress(&ritz.values[..keep], &ritz.b[..keep]);
    }

    fn extract(&self, ritz: &Ritz<T>, count: usize) -> (ColumnBasis<T>, ColumnBasis<T>) {
        let q = &ritz.factor.vectors;
        let p = ritz.factor.right.as_ref().unwrap();
        let mh = self.basis.first.rotate(q, count);
        let nh = self.basis.second.rotate(p, count);
        let n = mh.n();
        let h = T::one() / T::lit(2.0).sqrt();
        let mut x1 = ColumnBasis::with_capacity(n, count);
        let mut x2 = ColumnBasis::with_capacity(n, count);
        for i in 0..count {
            let (a, b) = (mh.col(i), nh.col(i));
            let c1: Vec<_> = a.iter().zip(b).map(|(p, q)| (*p + *q) * h).collect();
            let c2: Vec<_> = a.iter().zip(b).map(|(p, q)| ((*p - *q) * h).conj()).collect();
            x1.push(&c1);
            x2.push(&c2);
        }
        (x1, x2)
    }

    fn rho(&self) -> T {
        if self.has_next() {
            norm2(self.basis.first.col(self.size()))
        } else {
            T::zero()
        }
    }

    fn basis(&self) -> &PairedBasis<T> {
        &self.basis
    }
}
