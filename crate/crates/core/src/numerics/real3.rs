//! Small fixed-size real vectors and matrices for Bloch-space geometry.

use num_complex::Complex;

use super::{hermitian_eig, ComplexMatrix};
use crate::error::Result;
use crate::scalar::Real;

pub type Vec3<T> = [T; 3];
/// Row-major 3x3 matrix.
pub type Mat3<T> = [[T; 3]; 3];

pub fn zero3<T: Real>() -> Mat3<T> {
    [[T::zero(); 3]; 3]
}

pub fn eye3<T: Real>() -> Mat3<T> {
    diag3([T::one(); 3])
}

pub fn diag3<T: Real>(d: Vec3<T>) -> Mat3<T> {
    let mut m = zero3();
    for i in 0..3 {
        m[i][i] = d[i];
    }
    m
}

pub fn transpose3<T: Real>(m: &Mat3<T>) -> Mat3<T> {
    let mut t = zero3();
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn matmul3<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut c = zero3();
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn matvec3<T: Real>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    [0, 1, 2].map(|i| (0..3).map(|k| m[i][k] * v[k]).sum())
}

pub fn scale3<T: Real>(m: &Mat3<T>, s: T) -> Mat3<T> {
    m.map(|row| row.map(|x| x * s))
}

pub fn det3<T: Real>(m: &Mat3<T>) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn dot3<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3<T: Real>(v: &Vec3<T>) -> T {
    dot3(v, v).sqrt()
}

pub fn add3<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn max_abs_diff3<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> T {
    let mut d = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            d = d.max((a[i][j] - b[i][j]).abs());
        }
    }
    d
}

/// Eigendecomposition of a real symmetric 3x3 matrix: eigenvalues descending,
/// eigenvectors as the columns of the returned matrix.
pub fn sym3_eig<T: Real>(m: &Mat3<T>) -> Result<(Vec3<T>, Mat3<T>)> {
    let cm = ComplexMatrix::from_fn(3, |i, j| Complex::new(m[i][j], T::zero()));
    let spec = hermitian_eig(&cm)?;
    let mut vecs = zero3();
    for k in 0..3 {
        // a real symmetric input gives eigenvectors that are real up to a global phase
        let col = spec.vector(k);
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).expect("finite"))
            .expect("three entries");
        let phase = (pivot / pivot.norm()).conj();
        let mut real = [T::zero(); 3];
        for i in 0..3 {
            real[i] = (col[i] * phase).re;
        }
        let n = norm3(&real);
        for i in 0..3 {
            vecs[i][k] = real[i] / n;
        }
    }
    Ok(([spec.values[0], spec.values[1], spec.values[2]], vecs))
}

/// Applies `f` to the eigenvalues of a symmetric matrix.
pub fn sym3_map<T: Real>(m: &Mat3<T>, f: impl Fn(T) -> T) -> Result<Mat3<T>> {
    let (vals, vecs) = sym3_eig(m)?;
    let fd = diag3(vals.map(f));
    Ok(matmul3(&matmul3(&vecs, &fd), &transpose3(&vecs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_products() {
        let m: Mat3<f64> = [[2.0, 1.0, 0.0], [0.0, 3.0, 1.0], [1.0, 0.0, 1.0]];
        assert!((det3(&m) - 7.0).abs() < 1e-14);
        let i = eye3::<f64>();
        assert_eq!(matmul3(&m, &i), m);
        assert_eq!(matvec3(&m, &[1.0, 1.0, 1.0]), [3.0, 4.0, 2.0]);
    }

    #[test]
    fn symmetric_eigen_reconstructs() {
        let m: Mat3<f64> = [[2.0, 0.5, 0.1], [0.5, 1.0, -0.3], [0.1, -0.3, 0.5]];
        let back = sym3_map(&m, |x| x).unwrap();
        assert!(max_abs_diff3(&m, &back) < 1e-13);
        let (vals, _) = sym3_eig(&m).unwrap();
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
        let root = sym3_map(&m, |x| x.sqrt()).unwrap();
        assert!(max_abs_diff3(&matmul3(&root, &root), &m) < 1e-13);
    }
}
