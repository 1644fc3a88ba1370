use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::tridiag::{inverse_iteration, sturm_eigenvalues, SymTriMatrix};
use super::EigenResult;

pub const DENSE_CAP: usize = 4000;

/// Residual threshold, relative to max(1, |λ|), on the diagonally scaled pencil.
const CERTIFY: f64 = 1e-9;

/// Symmetric pencil (K, M) in row-major dense storage, M positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSymPair<T> {
    n: usize,
    k: Vec<T>,
    m: Vec<T>,
}

impl<T: Scalar> DenseSymPair<T> {
    pub fn new(n: usize, k: Vec<T>, m: Vec<T>) -> Result<Self> {
        if k.len() != n * n || m.len() != n * n {
            return Err(Error::Parameter(format!("dense pair of order {n} needs {} entries per matrix", n * n)));
        }
        for a in [&k, &m] {
            let big = a.iter().fold(T::zero(), |s, v| s.max(v.abs()));
            for i in 0..n {
                for j in 0..i {
                    let diff = (a[i * n + j] - a[j * n + i]).abs();
                    if !(diff <= T::of(1e-12) * big) {
                        return Err(Error::NotSymmetric { i, j, diff: diff.to_f64_lossy() });
                    }
                }
            }
        }
        Ok(Self { n, k, m })
    }

    pub fn from_fn(n: usize, k: impl Fn(usize, usize) -> T, m: impl Fn(usize, usize) -> T) -> Result<Self> {
        let kk = (0..n * n).map(|p| k(p / n, p % n)).collect();
        let mm = (0..n * n).map(|p| m(p / n, p % n)).collect();
        Self::new(n, kk, mm)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn k(&self, i: usize, j: usize) -> T {
        self.k[i * self.n + j]
    }

    pub fn m(&self, i: usize, j: usize) -> T {
        self.m[i * self.n + j]
    }

    pub fn stiffness(&self) -> &[T] {
        &self.k
    }

    pub fn mass(&self) -> &[T] {
        &self.m
    }

    /// Kv and Mv.
    pub fn apply(&self, v: &[T]) -> (Vec<T>, Vec<T>) {
        (matvec(&self.k, self.n, v), matvec(&self.m, self.n, v))
    }
}

fn matvec<T: Scalar>(a: &[T], n: usize, v: &[T]) -> Vec<T> {
    a.chunks_exact(n).map(|row| dot(row, v)).collect()
}

#[inline]
fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

#[inline]
fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// In-place lower Cholesky factor of a row-major SPD matrix.
fn cholesky<T: Scalar>(a: &mut [T], n: usize) -> Result<()> {
    for i in 0..n {
        for j in 0..=i {
            let (head, tail) = a.split_at_mut(i * n);
            let row_i = &tail[..n];
            let s = if j < i { dot(&row_i[..j], &head[j * n..j * n + j]) } else { dot(&row_i[..j], &row_i[..j]) };
            let v = row_i[j] - s;
            if j == i {
                if !(v > T::zero()) {
                    return Err(Error::NotPositiveDefinite { pivot: i, value: v.to_f64_lossy() });
                }
                tail[j] = v.sqrt();
            } else {
                tail[j] = v / head[j * n + j];
            }
        }
        for j in i + 1..n {
            a[i * n + j] = T::zero();
        }
    }
    Ok(())
}

/// B ← L⁻¹B for lower-triangular L, by row operations.
fn forward_solve_rows<T: Scalar>(l: &[T], b: &mut [T], n: usize) {
    for i in 0..n {
        let (done, rest) = b.split_at_mut(i * n);
        let row = &mut rest[..n];
        for k in 0..i {
            let lik = l[i * n + k];
            if lik != T::zero() {
                axpy(-lik, &done[k * n..(k + 1) * n], row);
            }
        }
        let d = T::one() / l[i * n + i];
        row.iter_mut().for_each(|v| *v *= d);
    }
}

fn transpose_in_place<T: Scalar>(a: &mut [T], n: usize) {
    for i in 0..n {
        for j in 0..i {
            a.swap(i * n + j, j * n + i);
        }
    }
}

/// Householder vector and its scale τ.
type Reflector<T> = (Vec<T>, T);

/// Householder reduction of a symmetric row-major matrix to tridiagonal form.
/// Returns (diag, offdiag, reflectors) with reflector j acting on indices j+1..n.
fn tridiagonalize<T: Scalar>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>, Vec<Reflector<T>>) {
    let mut diag = vec![T::zero(); n];
    let mut off = vec![T::zero(); n.saturating_sub(1)];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let mut p = vec![T::zero(); n];
    for j in 0..n.saturating_sub(1) {
        diag[j] = a[j * n + j];
        let m = n - j - 1;
        let mut v: Vec<T> = (j + 1..n).map(|i| a[i * n + j]).collect();
        let alpha = v.iter().fold(T::zero(), |s, &x| s.max(x.abs()));
        if m == 1 || alpha == T::zero() {
            off[j] = v[0];
            if m > 1 {
                reflectors.push((v, T::zero()));
            }
            continue;
        }
        let norm = v.iter().fold(T::zero(), |s, &x| s + (x / alpha).powi(2)).sqrt() * alpha;
        let beta_sign = if v[0] >= T::zero() { -norm } else { norm };
        // v ← x − βe₁, H = I − τ v vᵀ with τ = 2 / vᵀv.
        v[0] -= beta_sign;
        let vtv = dot(&v, &v);
        let tau = T::of(2.0) / vtv;
        off[j] = beta_sign;
        // p = τ A₂₂ v, w = p − (τ/2)(pᵀv) v, A₂₂ ← A₂₂ − v wᵀ − w vᵀ, touching only
        // the lower triangle: each pass streams half the block once.
        let p = &mut p[..m];
        p.iter_mut().for_each(|x| *x = T::zero());
        for r in 0..m {
            let base = (j + 1 + r) * n + j + 1;
            let row = &a[base..base + r];
            let vr = v[r];
            let mut acc = T::zero();
            for ((&x, &vc), pc) in row.iter().zip(&v[..r]).zip(p[..r].iter_mut()) {
                acc += x * vc;
                *pc += x * vr;
            }
            p[r] += acc + a[base + r] * vr;
        }
        p.iter_mut().for_each(|x| *x *= tau);
        let k = tau * dot(p, &v) / T::of(2.0);
        for (pr, &vr) in p.iter_mut().zip(&v) {
            *pr -= k * vr;
        }
        for r in 0..m {
            let base = (j + 1 + r) * n + j + 1;
            let row = &mut a[base..=base + r];
            let (vr, wr) = (v[r], p[r]);
            for ((x, &vc), &wc) in row.iter_mut().zip(&v[..=r]).zip(&p[..=r]) {
                *x -= vr * wc + wr * vc;
            }
        }
        reflectors.push((v, tau));
    }
    if n > 0 {
        diag[n - 1] = a[(n - 1) * n + n - 1];
    }
    (diag, off, reflectors)
}

/// k smallest eigenpairs of Kv = λMv: Jacobi scaling, Cholesky M = LLᵀ,
/// C = L⁻¹KL⁻ᵀ, Householder tridiagonalization, Sturm bisection with inverse
/// iteration, back-transformation. Vectors are M-normalized.
pub fn eigs_generalized_sym<T: Scalar>(pair: &DenseSymPair<T>, k: usize) -> Result<EigenResult<T>> {
    let n = pair.n;
    if k == 0 || k > n {
        return Err(Error::Size { k, n });
    }
    if n > DENSE_CAP {
        return Err(Error::SizeCap { n, cap: DENSE_CAP });
    }
    let mut s = vec![T::zero(); n];
    for i in 0..n {
        let mii = pair.m(i, i);
        if !(mii > T::zero()) {
            return Err(Error::NotPositiveDefinite { pivot: i, value: mii.to_f64_lossy() });
        }
        s[i] = T::one() / mii.sqrt();
    }
    let scaled = |a: &[T]| -> Vec<T> { (0..n * n).map(|p| a[p] * s[p / n] * s[p % n]).collect() };
    let ks = scaled(&pair.k);
    let ms = scaled(&pair.m);

    let mut l = ms.clone();
    cholesky(&mut l, n)?;
    let mut c = ks.clone();
    forward_solve_rows(&l, &mut c, n);
    transpose_in_place(&mut c, n);
    forward_solve_rows(&l, &mut c, n);
    // Symmetrize away rounding before the reduction.
    for i in 0..n {
        for j in 0..i {
            let v = (c[i * n + j] + c[j * n + i]) / T::of(2.0);
            c[i * n + j] = v;
            c[j * n + i] = v;
        }
    }
    let (diag, off, reflectors) = tridiagonalize(&mut c, n);
    let t = SymTriMatrix { diag, offdiag: off };
    let values = sturm_eigenvalues(&t, k)?;
    let z = inverse_iteration(&t, None, &values);

    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (idx, (mut y, &lambda)) in z.into_iter().zip(&values).enumerate() {
        for (j, (v, tau)) in reflectors.iter().enumerate().rev() {
            let seg = &mut y[j + 1..];
            let f = *tau * dot(v, seg);
            axpy(-f, v, seg);
        }
        // x = L⁻ᵀ y.
        for i in (0..n).rev() {
            let mut acc = y[i];
            for r in i + 1..n {
                acc -= l[r * n + i] * y[r];
            }
            y[i] = acc / l[i * n + i];
        }
        let kx = matvec(&ks, n, &y);
        let mx = matvec(&ms, n, &y);
        let num = kx.iter().zip(&mx).fold(T::zero(), |acc, (&a, &b)| acc + (a - lambda * b).powi(2)).sqrt();
        let res = num / dot(&mx, &mx).sqrt();
        if !(res <= T::of(CERTIFY) * lambda.abs().max(T::one())) {
            return Err(Error::Certification { index: idx, residual: res.to_f64_lossy() });
        }
        residuals.push(res);
        vectors.push(y.iter().zip(&s).map(|(&x, &si)| x * si).collect());
    }
    Ok(EigenResult { values, vectors: Some(vectors), residuals })
}
