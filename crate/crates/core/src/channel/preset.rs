use num_complex::Complex;

use super::KrausSet;
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, pauli, validate_density, ComplexMatrix};
use crate::scalar::Real;

/// Named channels used throughout the toolkit.
#[derive(Clone, Debug, PartialEq)]
pub enum Preset<T> {
    Identity,
    Unitary(ComplexMatrix<T>),
    /// `ρ ↦ P ρ + (1 - P) I/2`, `P ∈ [0, 1]`.
    Depolarizing {
        p: T,
    },
    /// Kraus pair `E0 = diag(1, √(1-γ))`, `E1 = √γ |0><1|`.
    AmplitudeDamping {
        gamma: T,
    },
    /// Entanglement breaking: every input goes to the fixed state.
    Replacer(ComplexMatrix<T>),
    /// Entanglement breaking: measure σz and reprepare the outcome.
    ZMeasurePrepare,
}

fn unit_interval<T: Real>(name: &str, x: T) -> Result<()> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::BadParam(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

impl<T: Real> Preset<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Identity => "identity",
            Preset::Unitary(_) => "unitary",
            Preset::Depolarizing { .. } => "depolarizing",
            Preset::AmplitudeDamping { .. } => "amplitude_damping",
            Preset::Replacer(_) => "replacer",
            Preset::ZMeasurePrepare => "z_measure_prepare",
        }
    }

    pub fn kraus(&self) -> Result<KrausSet<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let re = |x: T| Complex::new(x, T::zero());
        let id = ComplexMatrix::identity(2);
        match self {
            Preset::Identity => KrausSet::new(vec![id]),
            Preset::Unitary(u) => {
                if u.dim() != 2 {
                    return Err(Error::BadParam(format!("unitary must be 2x2, got {0}x{0}", u.dim())));
                }
                let err = (&u.adjoint() * u).max_abs_diff(&id);
                if err > T::tol(1e-9) {
                    return Err(Error::BadParam(format!(
                        "matrix is not unitary (error {:e})",
                        err.as_f64()
                    )));
                }
                KrausSet::new(vec![u.clone()])
            }
            Preset::Depolarizing { p } => {
                unit_interval("P", *p)?;
                let w0 = ((T::one() + T::of(3.0) * *p) / T::of(4.0)).sqrt();
                let w = ((T::one() - *p) / T::of(4.0)).sqrt();
                let [x, y, z] = pauli::<T>();
                KrausSet::new(vec![id.scale(w0), x.scale(w), y.scale(w), z.scale(w)])
            }
            Preset::AmplitudeDamping { gamma } => {
                unit_interval("gamma", *gamma)?;
                let e0 = ComplexMatrix::new(2, vec![re(T::one()), zero, zero, re((T::one() - *gamma).sqrt())])?;
                let e1 = ComplexMatrix::new(2, vec![zero, re(gamma.sqrt()), zero, zero])?;
                KrausSet::new(vec![e0, e1])
            }
            Preset::Replacer(sigma) => {
                if sigma.dim() != 2 {
                    return Err(Error::BadParam("replacer state must be 2x2".into()));
                }
                validate_density(sigma, T::tol(1e-9)).map_err(|e| Error::BadParam(format!("replacer state: {e}")))?;
                // K_{k,i} = √p_k |ψ_k><i|
                let spec = hermitian_eig(sigma)?;
                let mut ops = Vec::new();
                for k in 0..2 {
                    let pk = spec.values[k];
                    if pk <= T::zero() {
                        continue;
                    }
                    let psi = spec.vector(k);
                    for i in 0..2 {
                        ops.push(ComplexMatrix::from_fn(2, |r, c| {
                            if c == i {
                                psi[r] * pk.sqrt()
                            } else {
                                zero
                            }
                        }));
                    }
                }
                KrausSet::new(ops)
            }
            Preset::ZMeasurePrepare => {
                let p0 = ComplexMatrix::diag(&[T::one(), T::zero()]);
                let p1 = ComplexMatrix::diag(&[T::zero(), T::one()]);
                KrausSet::new(vec![p0, p1])
            }
        }
    }
}
