//! Choi states consistent with an ellipsoid's center and shape.

use super::{Chirality, Ellipsoid};
use crate::channel::{choi_from_pauli, transpose_signs, ChoiState, PauliForm};
use crate::error::{Error, Result};
use crate::numerics::real3::{matmul3, scale3, sym3_map};
use crate::scalar::Real;

const CPTP_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate<T> {
    pub choi: ChoiState<T>,
    pub chirality: Chirality,
}

/// Candidates with `Θ = ±diag(1,-1,1)·√Q` and `B = C`, keeping those that are
/// CPTP. The `+` branch has the identity channel's chirality (`Negative`).
///
/// Center and shape fix the Bloch map only up to a rotation of the inputs,
/// so the candidates are the representatives with a symmetric map matrix.
pub fn reconstruct_choi_candidates<T: Real>(e: &Ellipsoid<T>) -> Result<Vec<Candidate<T>>> {
    let root = sym3_map(&e.shape(), |l| l.max(T::zero()).sqrt())?;
    let theta = matmul3(&transpose_signs(), &root);
    let branches = [
        (theta, Chirality::Negative),
        (scale3(&theta, -T::one()), Chirality::Positive),
    ];

    let mut out: Vec<Candidate<T>> = Vec::new();
    for (theta, chirality) in branches {
        let pauli = PauliForm {
            a: [T::zero(); 3],
            b: e.center(),
            theta,
        };
        let Ok(choi) = ChoiState::with_tolerance(choi_from_pauli(&pauli), T::tol(CPTP_TOL)) else {
            continue;
        };
        // a zero shape matrix makes both branches the same state
        if out
            .iter()
            .any(|c| c.choi.matrix().max_abs_diff(choi.matrix()) <= T::tol(1e-12))
        {
            continue;
        }
        out.push(Candidate { choi, chirality });
    }
    if out.is_empty() {
        return Err(Error::NoValidCandidate);
    }
    Ok(out)
}
