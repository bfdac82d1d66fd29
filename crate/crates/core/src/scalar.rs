use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real base type of the working precision (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }

    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).unwrap()
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Cplx<T> = Complex<T>;

/// `x^H y` with the first argument conjugated.
#[inline]
pub fn dotc<T: Real>(x: &[Cplx<T>], y: &[Cplx<T>]) -> Cplx<T> {
    debug_assert_eq!(x.len(), y.len());
    let mut re = T::zero();
    let mut im = T::zero();
    for (a, b) in x.iter().zip(y) {
        re += a.re * b.re + a.im * b.im;
        im += a.re * b.im - a.im * b.re;
    }
    Cplx::new(re, im)
}

/// `x^T y`, no conjugation.
#[inline]
pub fn dotu<T: Real>(x: &[Cplx<T>], y: &[Cplx<T>]) -> Cplx<T> {
    debug_assert_eq!(x.len(), y.len());
    let mut re = T::zero();
    let mut im = T::zero();
    for (a, b) in x.iter().zip(y) {
        re += a.re * b.re - a.im * b.im;
        im += a.re * b.im + a.im * b.re;
    }
    Cplx::new(re, im)
}

#[inline]
pub fn norm2<T: Real>(x: &[Cplx<T>]) -> T {
    // scaled to avoid overflow for large entries
    let scale = x.iter().fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let s: T = x
        .iter()
        .map(|z| {
            let (a, b) = (z.re / scale, z.im / scale);
            a * a + b * b
        })
        .sum();
    scale * s.sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy<T: Real>(alpha: Cplx<T>, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `y += alpha * x` for a real coefficient.
#[inline]
pub fn axpy_real<T: Real>(alpha: T, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        yi.re += alpha * xi.re;
        yi.im += alpha * xi.im;
    }
}

pub fn scale_in_place<T: Real>(alpha: T, x: &mut [Cplx<T>]) {
    for xi in x.iter_mut() {
        xi.re *= alpha;
        xi.im *= alpha;
    }
}

pub fn conj_vec<T: Real>(x: &[Cplx<T>]) -> Vec<Cplx<T>> {
    x.iter().map(|z| z.conj()).collect()
}

pub fn max_abs_diff<T: Real>(x: &[Cplx<T>], y: &[Cplx<T>]) -> T {
    x.iter()
        .zip(y)
        .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
}
