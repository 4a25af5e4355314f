//! Entanglement and quantum-memory measures on two-qubit (Choi) states.

mod robustness;

pub use robustness::{robustness, NoiseSet, Robustness, RobustnessOptions};

use crate::channel::ChoiState;
use crate::ellipsoid::ellipsoid_of_channel;
use crate::error::{Error, Result};
use num_complex::Complex;

use crate::numerics::{
    eigenvalues, hermitian_eig, partial_transpose, pauli, validate_density, ComplexMatrix, Subsystem,
};
use crate::scalar::Real;

/// PPT threshold for channels given exactly.
pub const EXACT_PPT_TOL: f64 = 1e-9;
/// PPT threshold for channels fitted from finite-shot data.
pub const FITTED_PPT_TOL: f64 = 1e-3;

fn require_density<T: Real>(rho: &ComplexMatrix<T>) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::BadDim {
            expected: 4,
            got: rho.dim(),
        });
    }
    validate_density(rho, T::tol(1e-8))
}

fn pt_spectrum<T: Real>(rho: &ComplexMatrix<T>) -> Result<Vec<T>> {
    eigenvalues(&partial_transpose(rho, Subsystem::Second)?)
}

/// Wootters concurrence `max(0, λ1 - λ2 - λ3 - λ4)`, where the `λ` are the
/// square roots of the spectrum of `ρ ρ̃`, `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
///
/// With `ρ = W W†` the `λ` are the singular values of `τ = W^T (σy⊗σy) W`.
/// They are read off the Hermitian embedding `[[0, τ], [τ†, 0]]`, which keeps
/// small values accurate instead of taking square roots of rounding noise.
pub fn concurrence<T: Real>(rho: &ComplexMatrix<T>) -> Result<T> {
    require_density(rho)?;
    let spec = hermitian_eig(rho)?;
    let w = ComplexMatrix::from_fn(4, |i, k| spec.vectors[(i, k)] * spec.values[k].max(T::zero()).sqrt());
    let y = &pauli::<T>()[1];
    let tau = &(&w.transpose() * &y.kron(y)) * &w;
    let tau_adj = tau.adjoint();
    let embed = ComplexMatrix::from_fn(8, |i, j| match (i < 4, j < 4) {
        (true, false) => tau[(i, j - 4)],
        (false, true) => tau_adj[(i - 4, j)],
        _ => Complex::new(T::zero(), T::zero()),
    });
    let l = eigenvalues(&embed)?;
    let c = l[0] - l[1] - l[2] - l[3];
    Ok(c.max(T::zero()).min(T::one()))
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^Γ`.
pub fn negativity<T: Real>(rho: &ComplexMatrix<T>) -> Result<T> {
    require_density(rho)?;
    Ok(pt_spectrum(rho)?
        .into_iter()
        .filter(|&l| l < T::zero())
        .map(|l| -l)
        .sum())
}

/// PPT test, exact for two qubits: entanglement breaking iff `λmin(ρ^Γ) ≥ -tol`.
pub fn is_eb<T: Real>(c: &ChoiState<T>, tol: T) -> bool {
    let spec = pt_spectrum(c.matrix()).expect("Choi states are 4x4 Hermitian");
    spec[3] >= -tol
}

fn robustness_opts<T: Real>(tol: T) -> Result<RobustnessOptions<T>> {
    if !(tol >= T::of(1e-6) && tol <= T::of(1e-2)) {
        return Err(Error::BadParam(format!(
            "robustness tolerance {tol} outside [1e-6, 1e-2]"
        )));
    }
    Ok(RobustnessOptions::with_tol(tol))
}

/// Smallest weight `t` of another channel that makes `(Λ + tΛ')/(1+t)`
/// entanglement breaking.
pub fn memory_robustness<T: Real>(c: &ChoiState<T>, tol: T) -> Result<Robustness<T>> {
    robustness(c.matrix(), NoiseSet::Channels, &robustness_opts(tol)?)
}

/// Generalized entanglement robustness: the noise may be any state.
pub fn state_robustness<T: Real>(rho: &ComplexMatrix<T>, tol: T) -> Result<Robustness<T>> {
    require_density(rho)?;
    robustness(rho, NoiseSet::States, &robustness_opts(tol)?)
}

#[derive(Copy, Clone, Debug)]
pub struct ReportOptions<T> {
    pub ppt_tol: T,
    /// Bisection width for the memory robustness.
    pub tol: T,
}

impl<T: Real> Default for ReportOptions<T> {
    fn default() -> Self {
        Self {
            ppt_tol: T::tol(EXACT_PPT_TOL),
            tol: T::of(1e-4),
        }
    }
}

impl<T: Real> ReportOptions<T> {
    pub fn fitted() -> Self {
        Self {
            ppt_tol: T::of(FITTED_PPT_TOL),
            ..Self::default()
        }
    }

    pub fn with_tol(self, tol: T) -> Self {
        Self { tol, ..self }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MemoryReport<T> {
    pub eb: bool,
    pub negativity: T,
    pub concurrence: T,
    pub memory_robustness: T,
    /// Certified bracket around `memory_robustness`.
    pub robustness_bracket: (T, T),
    pub volume_bound: T,
    /// `volume_bound - memory_robustness`.
    pub lemma_gap: T,
}

pub fn memory_report<T: Real>(c: &ChoiState<T>, opts: &ReportOptions<T>) -> Result<MemoryReport<T>> {
    let eb = is_eb(c, opts.ppt_tol);
    let volume_bound = ellipsoid_of_channel(&c.pauli_form())?.volume_bound();
    let ro = RobustnessOptions {
        ppt_tol: opts.ppt_tol,
        ..robustness_opts(opts.tol)?
    };
    let rob = robustness(c.matrix(), NoiseSet::Channels, &ro)?;
    let negativity = negativity(c.matrix())?;
    let concurrence = concurrence(c.matrix())?;
    Ok(MemoryReport {
        eb,
        negativity,
        concurrence,
        memory_robustness: rob.value,
        robustness_bracket: (rob.lower, rob.upper),
        volume_bound,
        lemma_gap: volume_bound - rob.value,
    })
}
