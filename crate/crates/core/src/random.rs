//! Random matrices, states and channels for property tests and benchmarks.
//!
//! Everything here is driven by a caller-supplied RNG so results are
//! reproducible from a seed.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::KrausSet;
use crate::numerics::real3::Vec3;
use crate::numerics::ComplexMatrix;
use crate::scalar::Real;

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::of(re), T::of(im))
}

/// Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn ginibre<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(dim, |_, _| gaussian(rng))
}

pub fn hermitian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    ginibre(dim, rng).hermitian_part()
}

/// Full-rank density matrix `G G^dagger / Tr(G G^dagger)`.
pub fn density_matrix<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ginibre::<T, _>(dim, rng);
    let p = (&g * &g.adjoint()).hermitian_part();
    let tr = p.trace().re;
    p.scale(T::one() / tr)
}

/// Haar-random unitary from Gram-Schmidt on a Ginibre matrix.
pub fn unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ginibre::<T, _>(dim, rng);
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<Complex<T>> = (0..dim).map(|i| g[(i, j)]).collect();
        for u in &cols {
            let proj = u
                .iter()
                .zip(&v)
                .fold(Complex::zero(), |acc: Complex<T>, (a, b)| acc + a.conj() * b);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi = *vi - *ui * proj;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for vi in v.iter_mut() {
            *vi = *vi / n;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Kraus set of a random channel with `rank` operators (1..=4), cut from the
/// first two columns of a Haar unitary on `C^2 ⊗ C^rank`.
pub fn kraus_set_with_rank<T: Real, R: Rng + ?Sized>(rank: usize, rng: &mut R) -> KrausSet<T> {
    assert!((1..=4).contains(&rank), "Kraus rank must be in 1..=4");
    let u = unitary::<T, _>(2 * rank, rng);
    let ops = (0..rank)
        .map(|k| ComplexMatrix::from_fn(2, |i, j| u[(2 * k + i, j)]))
        .collect();
    KrausSet::new(ops).expect("isometry columns give a complete Kraus set")
}

/// Random channel with a uniformly chosen Kraus rank.
pub fn kraus_set<T: Real, R: Rng + ?Sized>(rng: &mut R) -> KrausSet<T> {
    let rank = rng.random_range(1..=4);
    kraus_set_with_rank(rank, rng)
}

/// Uniform point on the unit sphere.
pub fn unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Vec3<T> {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-9 {
            return v.map(|x| T::of(x / n));
        }
    }
}

/// Single-qubit density matrix with Bloch vector `r`.
pub fn bloch_state<T: Real>(r: &Vec3<T>) -> ComplexMatrix<T> {
    let half = T::of(0.5);
    let c = |re: T, im: T| Complex::new(re, im);
    ComplexMatrix::new(
        2,
        vec![
            c(half * (T::one() + r[2]), T::zero()),
            c(half * r[0], -half * r[1]),
            c(half * r[0], half * r[1]),
            c(half * (T::one() - r[2]), T::zero()),
        ],
    )
    .expect("2x2")
}
