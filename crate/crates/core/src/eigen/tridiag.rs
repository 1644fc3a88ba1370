use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::EigenResult;

/// Operators whose eigenvalues below a shift can be counted (Sylvester inertia).
pub trait SturmCount<T: Scalar> {
    fn dim(&self) -> usize;
    /// Number of eigenvalues strictly below `sigma`.
    fn count_below(&self, sigma: T) -> usize;
    /// An interval containing the whole spectrum.
    fn spectrum_bounds(&self) -> (T, T);
}

/// Symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTriMatrix<T> {
    pub diag: Vec<T>,
    pub offdiag: Vec<T>,
}

impl<T: Scalar> SymTriMatrix<T> {
    pub fn new(diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || offdiag.len() + 1 != n {
            return Err(Error::Parameter(format!(
                "tridiagonal matrix needs n >= 1 diagonal and n - 1 off-diagonal entries, got {} and {}",
                n,
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("tridiagonal matrix has non-finite entries".into()));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Infinity norm.
    pub fn norm(&self) -> T {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.offdiag[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.offdiag[i].abs();
                }
                s
            })
            .fold(T::zero(), T::max)
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * x[i + 1];
                }
                s
            })
            .collect()
    }
}

impl<T: Scalar> SturmCount<T> for SymTriMatrix<T> {
    fn dim(&self) -> usize {
        self.len()
    }

    fn count_below(&self, sigma: T) -> usize {
        // LDLᵀ pivots of T − σI; a zero pivot is nudged to −tiny·‖T‖ so the
        // count stays monotone in σ.
        let tiny = T::min_positive_value().sqrt() * (T::one() + self.norm());
        let mut count = 0;
        let mut d = self.diag[0] - sigma;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.offdiag[i - 1];
                d = self.diag[i] - sigma - e * e / d;
            }
            if d.abs() < tiny {
                d = -tiny;
            }
            if d < T::zero() {
                count += 1;
            }
        }
        count
    }

    fn spectrum_bounds(&self) -> (T, T) {
        gershgorin(&self.diag, &self.offdiag, None)
    }
}

/// The pencil (K, M) with K = graph Laplacian of a path (conductances `c`)
/// plus a nonnegative diagonal `e`, and M = diag(`m`) > 0.
///
/// Inertia is computed with the recurrence r_i = c_{i−1} r_{i−1}/(r_{i−1} + c_{i−1}) + e_i − σ m_i,
/// which never forms c_{i−1} + c_i − c_{i−1}: eigenvalues near zero (the
/// Neumann constant mode and its neighbours) keep full relative accuracy.
#[derive(Clone, Debug, PartialEq)]
pub struct PathPencil<T> {
    pub conductance: Vec<T>,
    pub potential: Vec<T>,
    pub mass: Vec<T>,
}

impl<T: Scalar> PathPencil<T> {
    pub fn new(conductance: Vec<T>, potential: Vec<T>, mass: Vec<T>) -> Result<Self> {
        let n = mass.len();
        if n == 0 || conductance.len() + 1 != n || potential.len() != n {
            return Err(Error::Parameter("path pencil needs n masses, n potentials and n - 1 conductances".into()));
        }
        if conductance.iter().chain(&potential).any(|v| !v.is_finite() || *v < T::zero())
            || mass.iter().any(|v| !v.is_finite() || *v <= T::zero())
        {
            return Err(Error::Parameter(
                "path pencil needs nonnegative conductances and potentials and positive masses".into(),
            ));
        }
        Ok(Self { conductance, potential, mass })
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// Stiffness as a tridiagonal matrix.
    pub fn stiffness(&self) -> SymTriMatrix<T> {
        let n = self.len();
        let c = &self.conductance;
        let diag = (0..n)
            .map(|i| {
                let left = if i > 0 { c[i - 1] } else { T::zero() };
                let right = if i + 1 < n { c[i] } else { T::zero() };
                left + right + self.potential[i]
            })
            .collect();
        SymTriMatrix { diag, offdiag: c.iter().map(|&v| -v).collect() }
    }

    /// ‖Kv − λMv‖ / ‖Mv‖.
    pub fn residual(&self, value: T, v: &[T]) -> T {
        let kv = self.stiffness().matvec(v);
        let (mut r, mut m) = (T::zero(), T::zero());
        for i in 0..v.len() {
            let mv = self.mass[i] * v[i];
            r += (kv[i] - value * mv).powi(2);
            m += mv * mv;
        }
        (r / m).sqrt()
    }
}

impl<T: Scalar> SturmCount<T> for PathPencil<T> {
    fn dim(&self) -> usize {
        self.len()
    }

    fn count_below(&self, sigma: T) -> usize {
        let n = self.len();
        let c = &self.conductance;
        let tiny = T::min_positive_value().sqrt();
        let mut count = 0;
        // carry = c_{i−1} r_{i−1} / (r_{i−1} + c_{i−1}), the Schur complement
        // contribution of the eliminated prefix.
        let mut carry = T::zero();
        for i in 0..n {
            let r = carry + self.potential[i] - sigma * self.mass[i];
            if i + 1 == n {
                let d = if r.abs() < tiny { -tiny } else { r };
                if d < T::zero() {
                    count += 1;
                }
                break;
            }
            let mut d = r + c[i];
            if d.abs() < tiny * (T::one() + c[i]) {
                d = -tiny * (T::one() + c[i]);
            }
            if d < T::zero() {
                count += 1;
            }
            carry = c[i] * r / d;
        }
        count
    }

    fn spectrum_bounds(&self) -> (T, T) {
        let k = self.stiffness();
        gershgorin(&k.diag, &k.offdiag, Some(&self.mass))
    }
}

fn gershgorin<T: Scalar>(diag: &[T], off: &[T], mass: Option<&[T]>) -> (T, T) {
    let n = diag.len();
    let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
    for i in 0..n {
        let mut rad = T::zero();
        if i > 0 {
            rad += off[i - 1].abs();
        }
        if i + 1 < n {
            rad += off[i].abs();
        }
        // Rows of M⁻¹K; its spectrum is that of the pencil.
        let m = mass.map_or(T::one(), |m| m[i]);
        lo = lo.min((diag[i] - rad) / m);
        hi = hi.max((diag[i] + rad) / m);
    }
    let pad = T::of(1e-3) * (hi - lo).max(T::one());
    (lo - pad, hi + pad)
}

/// Eigenvalue index `j` (0-based, ascending) by bisection on the inertia count,
/// run until the bracket cannot shrink further in floating point.
pub fn bisect_eigenvalue<T: Scalar, S: SturmCount<T> + ?Sized>(op: &S, j: usize, bounds: (T, T)) -> T {
    let (mut lo, mut hi) = bounds;
    let two = T::of(2.0);
    // Relative machine precision, with an absolute floor far below it so an
    // eigenvalue at exactly zero does not chase denormals.
    let floor = T::epsilon() * T::epsilon() * (bounds.1 - bounds.0);
    loop {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi || hi - lo <= floor {
            return mid;
        }
        if op.count_below(mid) > j {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// The k smallest eigenvalues of a Sturm-countable operator.
pub fn sturm_eigenvalues<T: Scalar, S: SturmCount<T> + ?Sized>(op: &S, k: usize) -> Result<Vec<T>> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::Size { k, n });
    }
    let bounds = op.spectrum_bounds();
    let mut values = Vec::with_capacity(k);
    let mut lo = bounds.0;
    for j in 0..k {
        // Eigenvalues are found in order, so the previous one is a lower bound.
        let v = bisect_eigenvalue(op, j, (lo, bounds.1));
        values.push(v);
        lo = v - (bounds.1 - bounds.0) * T::epsilon();
        lo = lo.max(bounds.0);
    }
    Ok(values)
}

/// Solve the symmetric tridiagonal system (diag, off) x = b in place by
/// elimination with partial pivoting; tiny pivots are perturbed, as inverse
/// iteration wants.
fn solve_tridiagonal<T: Scalar>(diag: &[T], off: &[T], b: &mut [T], scale: T) {
    let n = diag.len();
    let guard = T::epsilon() * scale;
    let fix = |v: T| if v.abs() < guard { guard } else { v };
    if n == 1 {
        b[0] /= fix(diag[0]);
        return;
    }
    let mut d = diag.to_vec();
    let mut dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![T::zero(); n.saturating_sub(2)];
    let mut pivoted = vec![false; n - 1];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            d[i] = fix(d[i]);
            let f = dl[i] / d[i];
            dl[i] = f;
            d[i + 1] -= f * du[i];
        } else {
            pivoted[i] = true;
            let f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            let t = du[i];
            du[i] = d[i + 1];
            d[i + 1] = t - f * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du[i + 1];
            }
        }
    }
    d[n - 1] = fix(d[n - 1]);
    for i in 0..n - 1 {
        if pivoted[i] {
            let t = b[i];
            b[i] = b[i + 1];
            b[i + 1] = t - dl[i] * b[i];
        } else {
            b[i + 1] -= dl[i] * b[i];
        }
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= du[i] * b[i + 1];
        }
        if i + 2 < n {
            s -= du2[i] * b[i + 2];
        }
        b[i] = s / d[i];
    }
}

/// Eigenvectors of the pencil (T, diag(mass)) for given eigenvalues by inverse
/// iteration, M-orthogonalized inside clusters of close eigenvalues.
pub fn inverse_iteration<T: Scalar>(t: &SymTriMatrix<T>, mass: Option<&[T]>, values: &[T]) -> Vec<Vec<T>> {
    let n = t.len();
    let scale = t.norm().max(T::min_positive_value());
    let mut vectors: Vec<Vec<T>> = Vec::with_capacity(values.len());
    let m = |i: usize| mass.map_or(T::one(), |m| m[i]);
    let mut cluster_start = 0;
    for (j, &lambda) in values.iter().enumerate() {
        if j > 0 && (lambda - values[j - 1]).abs() > T::of(1e-3) * scale {
            cluster_start = j;
        }
        let shifted: Vec<T> = (0..n).map(|i| t.diag[i] - lambda * m(i)).collect();
        // Deterministic, non-degenerate start vector.
        let mut x: Vec<T> = (0..n).map(|i| T::one() + T::of(((i * 7919 + j * 104729) % 1013) as f64 / 1013.0)).collect();
        for _ in 0..4 {
            let mut b: Vec<T> = (0..n).map(|i| m(i) * x[i]).collect();
            solve_tridiagonal(&shifted, &t.offdiag, &mut b, scale);
            x = b;
            for v in &vectors[cluster_start..j] {
                let dot = (0..n).fold(T::zero(), |s, i| s + v[i] * m(i) * x[i]);
                for i in 0..n {
                    x[i] -= dot * v[i];
                }
            }
            let norm = (0..n).fold(T::zero(), |s, i| s + x[i] * m(i) * x[i]).sqrt();
            for xi in &mut x {
                *xi /= norm;
            }
        }
        vectors.push(x);
    }
    vectors
}

/// k smallest eigenpairs of a symmetric tridiagonal matrix: bisection on the
/// Sturm count, then inverse iteration.
pub fn eigs_sym_tridiagonal<T: Scalar>(t: &SymTriMatrix<T>, k: usize) -> Result<EigenResult<T>> {
    let values = sturm_eigenvalues(t, k)?;
    let vectors = inverse_iteration(t, None, &values);
    let residuals = values
        .iter()
        .zip(&vectors)
        .map(|(&l, v)| {
            let tv = t.matvec(v);
            let r = tv.iter().zip(v).fold(T::zero(), |s, (&a, &b)| s + (a - l * b).powi(2));
            let nv = v.iter().fold(T::zero(), |s, &b| s + b * b);
            (r / nv).sqrt()
        })
        .collect();
    Ok(EigenResult { values, vectors: Some(vectors), residuals })
}

/// k smallest eigenpairs of a path pencil; vectors are M-normalized.
pub fn eigs_path_pencil<T: Scalar>(p: &PathPencil<T>, k: usize) -> Result<EigenResult<T>> {
    let values = sturm_eigenvalues(p, k)?;
    let vectors = inverse_iteration(&p.stiffness(), Some(&p.mass), &values);
    let residuals = values.iter().zip(&vectors).map(|(&l, v)| p.residual(l, v)).collect();
    Ok(EigenResult { values, vectors: Some(vectors), residuals })
}
