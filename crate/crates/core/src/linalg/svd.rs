//! Householder bidiagonalization followed by Golub–Kahan implicit-shift QR on
//! the bidiagonal, in the LINPACK `dsvdc` arrangement.

use super::Mat;
use crate::error::{BseError, Result};
use crate::scalar::Real;

/// `A = U diag(s) Vᵀ` for `m × n` with `m ≥ n`. Singular values come back in
/// descending order.
pub fn svd<T: Real>(a: &Mat<T>) -> Result<(Vec<T>, Mat<T>, Mat<T>)> {
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n, "svd expects rows >= cols");
    if n == 0 {
        return Ok((vec![], Mat::zeros(m, 0), Mat::zeros(0, 0)));
    }
    let mut a = a.clone();
    let nu = n;
    let mut s = vec![T::zero(); (m + 1).min(n)];
    let mut u = Mat::zeros(m, nu);
    let mut v = Mat::zeros(n, n);
    let mut e = vec![T::zero(); n];
    let mut work = vec![T::zero(); m];

    let nct = (m - 1).min(n);
    let nrt = n.saturating_sub(2).min(m);
    for k in 0..nct.max(nrt) {
        if k < nct {
            s[k] = T::zero();
            for i in k..m {
                s[k] = s[k].hypot(a[(i, k)]);
            }
            if s[k] != T::zero() {
                if a[(k, k)] < T::zero() {
                    s[k] = -s[k];
                }
                for i in k..m {
                    a[(i, k)] /= s[k];
                }
                a[(k, k)] += T::one();
            }
            s[k] = -s[k];
        }
        for j in (k + 1)..n {
            if k < nct && s[k] != T::zero() {
                let mut t = T::zero();
                for i in k..m {
                    t += a[(i, k)] * a[(i, j)];
                }
                t = -t / a[(k, k)];
                for i in k..m {
                    let x = t * a[(i, k)];
                    a[(i, j)] += x;
                }
            }
            e[j] = a[(k, j)];
        }
        if k < nct {
            for i in k..m {
                u[(i, k)] = a[(i, k)];
            }
        }
        if k < nrt {
            e[k] = T::zero();
            for i in (k + 1)..n {
                e[k] = e[k].hypot(e[i]);
            }
            if e[k] != T::zero() {
                if e[k + 1] < T::zero() {
                    e[k] = -e[k];
                }
                let ek = e[k];
                for ei in e.iter_mut().take(n).skip(k + 1) {
                    *ei /= ek;
                }
                e[k + 1] += T::one();
            }
            e[k] = -e[k];
            if k + 1 < m && e[k] != T::zero() {
                for w in work.iter_mut().skip(k + 1) {
                    *w = T::zero();
                }
                for j in (k + 1)..n {
                    for i in (k + 1)..m {
                        work[i] += e[j] * a[(i, j)];
                    }
                }
                for j in (k + 1)..n {
                    let t = -e[j] / e[k + 1];
                    for i in (k + 1)..m {
                        let x = t * work[i];
                        a[(i, j)] += x;
                    }
                }
            }
            for i in (k + 1)..n {
                v[(i, k)] = e[i];
            }
        }
    }

    let mut p = n.min(m + 1);
    if nct < n {
        s[nct] = a[(nct, nct)];
    }
    if m < p {
        s[p - 1] = T::zero();
    }
    if nrt + 1 < p {
        e[nrt] = a[(nrt, p - 1)];
    }
    e[p - 1] = T::zero();

    for j in nct..nu {
        for i in 0..m {
            u[(i, j)] = T::zero();
        }
        u[(j, j)] = T::one();
    }
    for k in (0..nct).rev() {
        if s[k] != T::zero() {
            for j in (k + 1)..nu {
                let mut t = T::zero();
                for i in k..m {
                    t += u[(i, k)] * u[(i, j)];
                }
                t = -t / u[(k, k)];
                for i in k..m {
                    let x = t * u[(i, k)];
                    u[(i, j)] += x;
                }
            }
            for i in k..m {
                u[(i, k)] = -u[(i, k)];
            }
            u[(k, k)] += T::one();
            for i in 0..k {
                u[(i, k)] = T::zero();
            }
        } else {
            for i in 0..m {
                u[(i, k)] = T::zero();
            }
            u[(k, k)] = T::one();
        }
    }

    for k in (0..n).rev() {
        if k < nrt && e[k] != T::zero() {
            for j in (k + 1)..nu {
                let mut t = T::zero();
                for i in (k + 1)..n {
                    t += v[(i, k)] * v[(i, j)];
                }
                t = -t / v[(k + 1, k)];
                for i in (k + 1)..n {
                    let x = t * v[(i, k)];
                    v[(i, j)] += x;
                }
            }
        }
        for i in 0..n {
            v[(i, k)] = T::zero();
        }
        v[(k, k)] = T::one();
    }

    let pp = p - 1;
    let eps = T::epsilon();
    let tiny = T::min_positive_value() / eps;
    let cap = 75 * n;
    let mut iter = 0usize;
    while p > 0 {
        if iter > cap {
            return Err(BseError::NonConvergence {
                routine: "svd",
                iterations: iter,
            });
        }
        // kase 1: s[p-1] negligible; 2: s[k] negligible; 3: QR step; 4: e[p-2] negligible
        let mut k: isize = p as isize - 2;
        while k >= 0 {
            let ku = k as usize;
            if e[ku].abs() <= tiny + eps * (s[ku].abs() + s[ku + 1].abs()) {
                e[ku] = T::zero();
                break;
            }
            k -= 1;
        }
        let kase;
        if k == p as isize - 2 {
            kase = 4;
        } else {
            let mut ks: isize = p as isize - 1;
            while ks > k {
                let ksu = ks as usize;
                let t = (if ksu != p { e[ksu].abs() } else { T::zero() })
                    + (if ks != k + 1 { e[ksu - 1].abs() } else { T::zero() });
                if s[ksu].abs() <= tiny + eps * t {
                    s[ksu] = T::zero();
                    break;
                }
                ks -= 1;
            }
            if ks == k {
                kase = 3;
            } else if ks == p as isize - 1 {
                kase = 1;
            } else {
                kase = 2;
                k = ks;
            }
        }
        let k = (k + 1) as usize;

        match kase {
            1 => {
                let mut f = e[p - 2];
                e[p - 2] = T::zero();
                for j in (k..=p - 2).rev() {
                    let t = s[j].hypot(f);
                    let cs = s[j] / t;
                    let sn = f / t;
                    s[j] = t;
                    if j != k {
                        f = -sn * e[j - 1];
                        e[j - 1] = cs * e[j - 1];
                    }
                    rotate_cols(&mut v, j, p - 1, cs, sn);
                }
            }
            2 => {
                let mut f = e[k - 1];
                e[k - 1] = T::zero();
                for j in k..p {
                    let t = s[j].hypot(f);
                    let cs = s[j] / t;
                    let sn = f / t;
                    s[j] = t;
                    f = -sn * e[j];
                    e[j] = cs * e[j];
                    rotate_cols(&mut u, j, k - 1, cs, sn);
                }
            }
            3 => {
                let scale = s[p - 1]
                    .abs()
                    .max(s[p - 2].abs())
                    .max(e[p - 2].abs())
                    .max(s[k].abs())
                    .max(e[k].abs());
                let sp = s[p - 1] / scale;
                let spm1 = s[p - 2] / scale;
                let epm1 = e[p - 2] / scale;
                let sk = s[k] / scale;
                let ek = e[k] / scale;
                let b = ((spm1 + sp) * (spm1 - sp) + epm1 * epm1) / T::lit(2.0);
                let c = (sp * epm1) * (sp * epm1);
                let mut shift = T::zero();
                if b != T::zero() || c != T::zero() {
                    shift = (b * b + c).sqrt();
                    if b < T::zero() {
                        shift = -shift;
                    }
                    shift = c / (b + shift);
                }
                let mut f = (sk + sp) * (sk - sp) + shift;
                let mut g = sk * ek;
                for j in k..p - 1 {
                    let mut t = f.hypot(g);
                    let mut cs = f / t;
                    let mut sn = g / t;
                    if j != k {
                        e[j - 1] = t;
                    }
                    f = cs * s[j] + sn * e[j];
                    e[j] = cs * e[j] - sn * s[j];
                    g = sn * s[j + 1];
                    s[j + 1] = cs * s[j + 1];
                    rotate_cols(&mut v, j, j + 1, cs, sn);
                    t = f.hypot(g);
                    cs = f / t;
                    sn = g / t;
                    s[j] = t;
                    f = cs * e[j] + sn * s[j + 1];
                    s[j + 1] = -sn * e[j] + cs * s[j + 1];
                    g = sn * e[j + 1];
                    e[j + 1] = cs * e[j + 1];
                    if j < m - 1 {
                        rotate_cols(&mut u, j, j + 1, cs, sn);
                    }
                }
                e[p - 2] = f;
                iter += 1;
            }
            _ => {
                let mut k = k;
                if s[k] <= T::zero() {
                    s[k] = if s[k] < T::zero() { -s[k] } else { T::zero() };
                    for i in 0..=pp {
                        v[(i, k)] = -v[(i, k)];
                    }
                }
                while k < pp {
                    if s[k] >= s[k + 1] {
                        break;
                    }
                    s.swap(k, k + 1);
                    if k < n - 1 {
                        swap_cols(&mut v, k, k + 1);
                    }
                    if k < m - 1 {
                        swap_cols(&mut u, k, k + 1);
                    }
                    k += 1;
                }
                iter = 0;
                p -= 1;
            }
        }
    }
    s.truncate(n);
    Ok((s, u, v))
}

/// `(x_j, x_l) <- (cs x_j + sn x_l, -sn x_j + cs x_l)` on columns.
fn rotate_cols<T: Real>(x: &mut Mat<T>, j: usize, l: usize, cs: T, sn: T) {
    for i in 0..x.rows() {
        let t = cs * x[(i, j)] + sn * x[(i, l)];
        x[(i, l)] = -sn * x[(i, j)] + cs * x[(i, l)];
        x[(i, j)] = t;
    }
}

fn swap_cols<T: Real>(x: &mut Mat<T>, j: usize, l: usize) {
    for i in 0..x.rows() {
        let t = x[(i, j)];
        x[(i, j)] = x[(i, l)];
        x[(i, l)] = t;
    }
}
