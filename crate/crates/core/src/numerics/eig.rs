//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, plus the
//! spectral functions built on it.

use num_complex::Complex;
use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest dimension accepted by [`hermitian_eig`] (a five-qubit register).
pub const MAX_DIM: usize = 32;

const MAX_SWEEPS: usize = 64;

/// Symmetry tolerance for eigensolver input.
const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues in descending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct Spectrum<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Spectrum<T> {
    /// `V f(Λ) V^dagger`.
    pub fn map(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let fv: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = Complex::zero();
            for (k, &w) in fv.iter().enumerate() {
                if w != T::zero() {
                    acc = acc + v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map(|l| l)
    }

    pub fn min(&self) -> T {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn max(&self) -> T {
        self.values[0]
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        (0..self.values.len()).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized before iterating, so entries that violate
/// Hermiticity by less than `1e-9` are averaged away.
pub fn hermitian_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<Spectrum<T>> {
    let n = m.dim();
    if n > MAX_DIM {
        return Err(Error::BadDim {
            expected: MAX_DIM,
            got: n,
        });
    }
    let herr = m.hermiticity_error();
    if herr > T::tol(HERMITIAN_TOL) {
        return Err(Error::NonHermitian(herr.as_f64()));
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let eps = T::epsilon();
    let skip = eps * scale / T::of((n * n) as f64);

    let mut converged = scale == T::zero();
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        if off_diagonal_norm(&a) <= eps * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, skip);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > eps * scale {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(Spectrum { values, vectors })
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi step annihilating `a[p][q]`: `a <- U^dagger a U`, `v <- v U`, with
/// `U = diag(1, e^{-iφ}) R(θ)` restricted to the `(p, q)` plane.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize, skip: T) {
    let n = a.dim();
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= skip {
        return;
    }
    let phase = (apq / mag).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::of(2.0) * mag);
    let t = if theta == T::zero() {
        T::one()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // columns: a <- a U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * phase * s;
        a[(k, q)] = akp * s + akq * phase * c;
    }
    // rows: a <- U^dagger a
    let pc = phase.conj();
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * pc * s;
        a[(q, k)] = apk * s + aqk * pc * c;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * phase * s;
        v[(k, q)] = vkp * s + vkq * phase * c;
    }
}

/// Eigenvalues only, descending.
pub fn eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    Ok(hermitian_eig(m)?.values)
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues down
/// to `-1e-8` are treated as zero.
pub fn psd_sqrt<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let spec = hermitian_eig(m)?;
    let min = spec.min();
    if min < -T::tol(1e-8) {
        return Err(Error::NotPsd(min.as_f64()));
    }
    Ok(spec.map(|l| l.max(T::zero()).sqrt()))
}

/// Frobenius-nearest positive semidefinite matrix: negative eigenvalues clipped to zero.
pub fn nearest_psd<T: Real>(h: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let spec = hermitian_eig(h)?;
    if spec.min() >= T::zero() {
        return Ok(h.hermitian_part());
    }
    Ok(spec.map(|l| l.max(T::zero())))
}
