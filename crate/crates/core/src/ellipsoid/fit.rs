//! Algebraic quadric fit `r^T S r + 2 b^T r + d = 0` with `tr S = 1`.
//!
//! Points are centered and scaled to unit RMS radius before fitting, which
//! keeps the nine-column design matrix well conditioned; the result is mapped
//! back afterwards.

use super::{BlochPoint, Chirality, Ellipsoid};
use crate::error::{Error, Result};
use crate::numerics::real3::{dot3, matvec3, sub3, sym3_eig, Mat3, Vec3};
use crate::scalar::Real;

/// Minimum number of points for a unique quadric with unit-trace `S`.
pub const MIN_POINTS: usize = 9;

// Exact mode refuses data whose algebraic residual exceeds this.
const EXACT_RESIDUAL: f64 = 1e-6;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FitMode {
    /// Noise-free points; weights ignored, residual must vanish.
    Exact,
    /// Weighted least squares for noisy points.
    LeastSquares,
}

#[derive(Copy, Clone, Debug)]
pub struct FitOptions<T> {
    pub mode: FitMode,
    /// Eigenvalues of `Q` below this are treated as zero (flat directions).
    pub degeneracy_tol: T,
}

impl<T: Real> Default for FitOptions<T> {
    fn default() -> Self {
        Self {
            mode: FitMode::LeastSquares,
            degeneracy_tol: T::of(1e-6),
        }
    }
}

impl<T: Real> FitOptions<T> {
    pub fn exact() -> Self {
        Self {
            mode: FitMode::Exact,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fit<T> {
    /// Chirality is always `Undetermined`.
    pub ellipsoid: Ellipsoid<T>,
    /// RMS algebraic residual in normalized coordinates.
    pub residual: T,
    /// At least one eigenvalue of `Q` fell below the degeneracy tolerance.
    pub degenerate: bool,
}

pub fn fit_ellipsoid<T: Real>(points: &[BlochPoint<T>], opts: &FitOptions<T>) -> Result<Fit<T>> {
    if points.len() < MIN_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_POINTS,
            got: points.len(),
        });
    }
    let n = T::of(points.len() as f64);
    let mean = points
        .iter()
        .fold([T::zero(); 3], |acc, p| [0, 1, 2].map(|k| acc[k] + p.r[k] / n));
    let spread = (points
        .iter()
        .map(|p| dot3(&sub3(&p.r, &mean), &sub3(&p.r, &mean)))
        .sum::<T>()
        / n)
        .sqrt();
    if spread <= T::tol(1e-12) {
        // every output coincides: the channel collapses the ball to a point
        let e = Ellipsoid::from_center_shape(mean, [[T::zero(); 3]; 3], Chirality::Undetermined)?;
        return Ok(Fit {
            ellipsoid: e,
            residual: T::zero(),
            degenerate: true,
        });
    }

    let local: Vec<Vec3<T>> = points.iter().map(|p| sub3(&p.r, &mean).map(|x| x / spread)).collect();
    let weights: Vec<T> = points
        .iter()
        .map(|p| match opts.mode {
            FitMode::Exact => T::one(),
            FitMode::LeastSquares => p.weight.unwrap_or(T::one()),
        })
        .collect();

    let rows: Vec<[T; 9]> = local.iter().map(design_row).collect();
    let rhs: Vec<T> = local.iter().map(|r| -r[2] * r[2]).collect();
    let sqrt_w: Vec<T> = weights.iter().map(|w| w.sqrt()).collect();
    let weighted: Vec<[T; 9]> = rows.iter().zip(&sqrt_w).map(|(row, w)| row.map(|x| x * *w)).collect();
    let weighted_rhs: Vec<T> = rhs.iter().zip(&sqrt_w).map(|(y, w)| *y * *w).collect();
    let coef = least_squares(&weighted, &weighted_rhs)?;

    let residual = (rows
        .iter()
        .zip(&rhs)
        .map(|(row, y)| {
            let e = row.iter().zip(&coef).map(|(a, c)| *a * *c).sum::<T>() - *y;
            e * e
        })
        .sum::<T>()
        / n)
        .sqrt();
    if opts.mode == FitMode::Exact && residual > T::of(EXACT_RESIDUAL) {
        return Err(Error::BadInput(format!(
            "exact fit requires noise-free points; algebraic residual {residual}"
        )));
    }

    let [s11, s22, s12, s13, s23, b1, b2, b3, d] = coef;
    let s: Mat3<T> = [[s11, s12, s13], [s12, s22, s23], [s13, s23, T::one() - s11 - s22]];
    let b = [b1, b2, b3];
    let (lambda, vecs) = sym3_eig(&s)?;
    if lambda.iter().any(|l| l.abs() <= T::tol(1e-12)) {
        return Err(Error::NotAnEllipsoid("quadric has no center".into()));
    }
    // center C = -S^{-1} b through the eigenbasis
    let vt_b = [0, 1, 2].map(|k| (0..3).map(|i| vecs[i][k] * b[i]).sum::<T>());
    let center_local = matvec3(&vecs, &[0, 1, 2].map(|k| -vt_b[k] / lambda[k]));
    let k = dot3(&center_local, &matvec3(&s, &center_local)) - d;
    if k.abs() <= T::tol(1e-14) {
        return Err(Error::NotAnEllipsoid("quadric degenerates to a cone".into()));
    }

    // Q = k S^{-1}, rescaled to the original coordinates
    let scale2 = spread * spread;
    let mut degenerate = false;
    let mut mu = [T::zero(); 3];
    for i in 0..3 {
        let m = k / lambda[i] * scale2;
        if m.abs() <= opts.degeneracy_tol {
            degenerate = true;
        } else if m < T::zero() {
            return Err(Error::NotAnEllipsoid(format!("shape eigenvalue {m} is negative")));
        } else {
            mu[i] = m;
        }
    }
    let mut shape = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            shape[i][j] = (0..3).map(|l| vecs[i][l] * mu[l] * vecs[j][l]).sum();
        }
    }
    let center = [0, 1, 2].map(|i| mean[i] + spread * center_local[i]);
    let ellipsoid = Ellipsoid::from_center_shape(center, shape, Chirality::Undetermined)?;
    Ok(Fit {
        ellipsoid,
        residual,
        degenerate,
    })
}

/// Coefficients of `(S11, S22, S12, S13, S23, b1, b2, b3, d)` with `-z²` on
/// the right-hand side.
fn design_row<T: Real>(r: &Vec3<T>) -> [T; 9] {
    let [x, y, z] = *r;
    let two = T::of(2.0);
    [
        x * x - z * z,
        y * y - z * z,
        two * x * y,
        two * x * z,
        two * y * z,
        two * x,
        two * y,
        two * z,
        T::one(),
    ]
}

/// Householder QR least squares; rank deficiency is reported as degenerate
/// data.
fn least_squares<T: Real, const N: usize>(rows: &[[T; N]], rhs: &[T]) -> Result<[T; N]> {
    let m = rows.len();
    let mut a: Vec<[T; N]> = rows.to_vec();
    let mut y: Vec<T> = rhs.to_vec();
    let col_scale = (0..N)
        .map(|j| (0..m).map(|i| a[i][j] * a[i][j]).sum::<T>().sqrt())
        .fold(T::zero(), T::max);
    if col_scale == T::zero() {
        return Err(Error::DegenerateData("design matrix is zero".into()));
    }
    for j in 0..N {
        let norm = (j..m).map(|i| a[i][j] * a[i][j]).sum::<T>().sqrt();
        if norm <= T::tol(1e-10) * col_scale {
            return Err(Error::DegenerateData(
                "points are coplanar or otherwise do not determine a quadric".into(),
            ));
        }
        let alpha = if a[j][j] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (j..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|x| *x * *x).sum();
        if vnorm2 > T::zero() {
            for c in j..N {
                let dotp: T = (j..m).map(|i| v[i - j] * a[i][c]).sum();
                let f = T::of(2.0) * dotp / vnorm2;
                for i in j..m {
                    a[i][c] -= f * v[i - j];
                }
            }
            let dotp: T = (j..m).map(|i| v[i - j] * y[i]).sum();
            let f = T::of(2.0) * dotp / vnorm2;
            for i in j..m {
                y[i] -= f * v[i - j];
            }
        }
    }
    let mut x = [T::zero(); N];
    for j in (0..N).rev() {
        let s: T = (j + 1..N).map(|c| a[j][c] * x[c]).sum();
        x[j] = (y[j] - s) / a[j][j];
    }
    Ok(x)
}
