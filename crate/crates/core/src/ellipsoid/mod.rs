//! Channel ellipsoids: the image of the Bloch ball under a qubit channel.
//!
//! An ellipsoid is stored as a center `C` and a shape matrix `Q` with
//! `(r - C)^T Q^{-1} (r - C) = 1` on the surface; semiaxes are `√λ(Q)`.

mod fit;
mod mesh;
mod points;
mod reconstruct;

pub use fit::{fit_ellipsoid, Fit, FitMode, FitOptions};
pub use mesh::{mesh, Mesh};
pub use points::{read_points, write_points};
pub use reconstruct::{reconstruct_choi_candidates, Candidate};

use crate::channel::{affine_map, require_null_a, ChoiState, PauliForm};
use crate::error::{Error, Result};
use crate::numerics::real3::{det3, matmul3, matvec3, norm3, sym3_eig, transpose3, Mat3, Vec3};
use crate::scalar::Real;

/// Orientation of the map from input to output Bloch vectors: `sign(det Θ)`.
/// The identity channel is `Negative` because of the transpose in the Choi
/// convention. Point sets alone cannot reveal it.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Chirality {
    Positive,
    Negative,
    Undetermined,
}

impl Chirality {
    pub fn from_sign<T: Real>(x: T) -> Self {
        if x > T::zero() {
            Chirality::Positive
        } else if x < T::zero() {
            Chirality::Negative
        } else {
            Chirality::Undetermined
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Chirality::Positive => 1,
            Chirality::Negative => -1,
            Chirality::Undetermined => 0,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Ellipsoid<T> {
    center: Vec3<T>,
    shape: Mat3<T>,
    semiaxes: Vec3<T>,
    axes: Mat3<T>,
    chirality: Chirality,
}

impl<T: Real> Ellipsoid<T> {
    /// Builds an ellipsoid from its center and PSD shape matrix. Eigenvalues
    /// of `shape` within rounding of zero are clipped; clearly negative ones
    /// are rejected.
    pub fn from_center_shape(center: Vec3<T>, shape: Mat3<T>, chirality: Chirality) -> Result<Self> {
        let mut sym = shape;
        for i in 0..3 {
            for j in 0..i {
                let avg = (shape[i][j] + shape[j][i]) * T::of(0.5);
                sym[i][j] = avg;
                sym[j][i] = avg;
            }
        }
        let (vals, mut axes) = sym3_eig(&sym)?;
        if det3(&axes) < T::zero() {
            for row in axes.iter_mut() {
                row[2] = -row[2];
            }
        }
        let scale = vals[0].abs().max(T::one());
        if vals[2] < -T::tol(1e-9) * scale {
            return Err(Error::BadInput(format!(
                "shape matrix has negative eigenvalue {}",
                vals[2]
            )));
        }
        let semiaxes = vals.map(|l| l.max(T::zero()).sqrt());
        Ok(Self {
            center,
            shape: sym,
            semiaxes,
            axes,
            chirality,
        })
    }

    pub fn center(&self) -> Vec3<T> {
        self.center
    }

    /// Shape matrix `Q`.
    pub fn shape(&self) -> Mat3<T> {
        self.shape
    }

    /// Semiaxis lengths, descending.
    pub fn semiaxes(&self) -> Vec3<T> {
        self.semiaxes
    }

    /// Orthonormal principal directions, one per column, matching `semiaxes`.
    pub fn axes(&self) -> Mat3<T> {
        self.axes
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn with_chirality(mut self, chirality: Chirality) -> Self {
        self.chirality = chirality;
        self
    }

    /// `C + axes · diag(l) · u`.
    pub fn surface_point(&self, u: &Vec3<T>) -> Vec3<T> {
        let scaled = [0, 1, 2].map(|k| self.semiaxes[k] * u[k]);
        let r = matvec3(&self.axes, &scaled);
        [0, 1, 2].map(|k| self.center[k] + r[k])
    }

    pub fn volume(&self) -> T {
        volume(self)
    }

    pub fn volume_bound(&self) -> T {
        volume_bound(self)
    }
}

/// `V = 4π/3 · |l1 l2 l3|`.
pub fn volume<T: Real>(e: &Ellipsoid<T>) -> T {
    let [a, b, c] = e.semiaxes;
    T::of(4.0) * T::PI() / T::of(3.0) * (a * b * c).abs()
}

/// `(3V/4π)^{1/4}`, the volume-estimated bound on memory robustness.
pub fn volume_bound<T: Real>(e: &Ellipsoid<T>) -> T {
    let [a, b, c] = e.semiaxes;
    (a * b * c).abs().powf(T::of(0.25))
}

/// Center `B`, shape `Θ^T Θ`, chirality `sign(det Θ)`.
pub fn ellipsoid_of_channel<T: Real>(p: &PauliForm<T>) -> Result<Ellipsoid<T>> {
    require_null_a(p)?;
    let q = matmul3(&transpose3(&p.theta), &p.theta);
    let det = det3(&p.theta);
    let chirality = if det.abs() <= T::tol(1e-12) {
        Chirality::Undetermined
    } else {
        Chirality::from_sign(det)
    };
    Ellipsoid::from_center_shape(p.b, q, chirality)
}

/// Hard ceiling on the norm of an ingested Bloch vector.
pub const BLOCH_NORM_CAP: f64 = 1.15;

/// An observed output Bloch vector.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochPoint<T> {
    pub r: Vec3<T>,
    pub input_id: Option<String>,
    /// Relative confidence, e.g. a shot count.
    pub weight: Option<T>,
}

impl<T: Real> BlochPoint<T> {
    /// Noise-free point; rejects anything outside the Bloch ball.
    pub fn exact(r: Vec3<T>) -> Result<Self> {
        Self::new(r, None, None, T::zero())
    }

    /// Accepts `‖r‖ ≤ 1 + 3·stat_tol`, never beyond [`BLOCH_NORM_CAP`].
    pub fn new(r: Vec3<T>, input_id: Option<String>, weight: Option<T>, stat_tol: T) -> Result<Self> {
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::BadInput("non-finite Bloch vector".into()));
        }
        let limit = (T::one() + T::of(3.0) * stat_tol.max(T::zero()) + T::tol(1e-12)).min(T::of(BLOCH_NORM_CAP));
        let n = norm3(&r);
        if n > limit {
            return Err(Error::BadInput(format!("Bloch vector norm {n} exceeds {limit}")));
        }
        if let Some(w) = weight {
            if !(w > T::zero() && w.is_finite()) {
                return Err(Error::BadInput(format!("weight must be positive, got {w}")));
            }
        }
        Ok(Self { r, input_id, weight })
    }
}

/// Exact output Bloch vectors for the given inputs (`‖r‖ ≤ 1`).
pub fn sample_outputs<T: Real>(c: &ChoiState<T>, inputs: &[Vec3<T>]) -> Result<Vec<BlochPoint<T>>> {
    let map = affine_map(&c.pauli_form())?;
    inputs
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let n = norm3(r);
            if !n.is_finite() || n > T::one() + T::tol(1e-12) {
                return Err(Error::BadInput(format!("input {i} has Bloch norm {n}")));
            }
            Ok(BlochPoint {
                r: map.apply(r),
                input_id: Some(i.to_string()),
                weight: None,
            })
        })
        .collect()
}

/// Six Pauli eigenstates, twelve edge midpoints and eight cube corners, all
/// pure.
pub fn default_input_grid<T: Real>() -> Vec<Vec3<T>> {
    let mut grid = Vec::with_capacity(26);
    for axis in 0..3 {
        for s in [1.0, -1.0] {
            let mut v = [0.0; 3];
            v[axis] = s;
            grid.push(v);
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let mut v = [0.0; 3];
            v[i] = si * h;
            v[j] = sj * h;
            grid.push(v);
        }
    }
    let c = 1.0 / 3f64.sqrt();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                grid.push([sx * c, sy * c, sz * c]);
            }
        }
    }
    grid.into_iter().map(|v| v.map(T::of)).collect()
}

#[cfg(test)]
mod tests;
