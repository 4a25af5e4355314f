//! Dense linear-algebra substrate: complex matrices, Hermitian spectra, and
//! two-qubit partial operations.

mod eig;
mod matrix;
pub mod real3;
mod two_qubit;

pub use eig::{eigenvalues, hermitian_eig, nearest_psd, psd_sqrt, Spectrum, MAX_DIM};
pub use matrix::{pauli, ComplexMatrix};
pub use two_qubit::{partial_trace, partial_transpose, Subsystem};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Checks that `m` is Hermitian, positive semidefinite and of unit trace, all
/// within `tol`.
pub fn validate_density<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<()> {
    let herr = m.hermiticity_error();
    if herr > tol {
        return Err(Error::BadState(format!("not Hermitian (error {:e})", herr.as_f64())));
    }
    let tr = m.trace();
    if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
        return Err(Error::BadState(format!("trace {} differs from 1", tr.re)));
    }
    let min = hermitian_eig(m)?.min();
    if min < -tol {
        return Err(Error::BadState(format!("negative eigenvalue {:e}", min.as_f64())));
    }
    Ok(())
}
