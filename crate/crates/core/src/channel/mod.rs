//! Single-qubit channel representations: Kraus sets, Choi states, the Pauli
//! form of a Choi state and the induced affine action on Bloch vectors.
//!
//! Conventions: the Choi state is `(id ⊗ Λ)(|Φ+><Φ+|)` with the input copy as
//! the first tensor factor, and a channel acts through
//! `Λ(ρ) = 2 Tr_in[(ρ^T ⊗ I) ρ^Λ]`.

mod preset;
mod spec;

pub use preset::Preset;
pub use spec::{matrix_from_json, matrix_to_json, ChannelSpec, JsonMatrix};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::real3::{add3, diag3, matmul3, matvec3, norm3, transpose3, Mat3, Vec3};
use crate::numerics::{hermitian_eig, partial_trace, pauli, validate_density, ComplexMatrix, Subsystem};
use crate::scalar::Real;

const COMPLETENESS_TOL: f64 = 1e-8;

/// Kraus operators of a qubit channel, 1 to 4 of them, satisfying
/// `Σ K^dagger K = I`.
#[derive(Clone, Debug)]
pub struct KrausSet<T> {
    ops: Vec<ComplexMatrix<T>>,
}

impl<T: Real> KrausSet<T> {
    pub fn new(ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        if ops.is_empty() || ops.len() > 4 {
            return Err(Error::BadParam(format!(
                "expected 1 to 4 Kraus operators, got {}",
                ops.len()
            )));
        }
        if let Some(k) = ops.iter().find(|k| k.dim() != 2) {
            return Err(Error::BadDim {
                expected: 2,
                got: k.dim(),
            });
        }
        let set = Self { ops };
        let err = set.completeness_error();
        if err > T::tol(COMPLETENESS_TOL) {
            return Err(Error::IncompleteKraus(err.as_f64()));
        }
        Ok(set)
    }

    pub fn ops(&self) -> &[ComplexMatrix<T>] {
        &self.ops
    }

    /// `max |Σ K^dagger K - I|`.
    pub fn completeness_error(&self) -> T {
        let mut sum = ComplexMatrix::zeros(2);
        for k in &self.ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }

    /// `Σ K ρ K^dagger`.
    pub fn apply(&self, rho: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let mut out = ComplexMatrix::zeros(rho.dim());
        for k in &self.ops {
            out = &out + &rho.conjugate_by(k);
        }
        out
    }

    /// The channel `ρ ↦ U Λ(ρ) U^dagger`.
    pub fn then_unitary(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(self.ops.iter().map(|k| u * k).collect())
    }

    /// The channel `ρ ↦ Λ(U ρ U^dagger)`.
    pub fn after_unitary(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(self.ops.iter().map(|k| k * u).collect())
    }

    pub fn choi(&self) -> ChoiState<T> {
        choi_from_kraus(self)
    }
}

/// Outcome of [`is_cptp`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CptpReport {
    pub psd: bool,
    pub marginal_ok: bool,
    pub trace_ok: bool,
}

impl CptpReport {
    pub fn is_valid(&self) -> bool {
        self.psd && self.marginal_ok && self.trace_ok
    }
}

/// Checks the Choi-state conditions of a 4x4 matrix: positivity, unit trace,
/// and a maximally mixed marginal on the input copy.
pub fn is_cptp<T: Real>(m: &ComplexMatrix<T>, tol: T) -> CptpReport {
    if m.dim() != 4 {
        return CptpReport {
            psd: false,
            marginal_ok: false,
            trace_ok: false,
        };
    }
    let psd = m.hermiticity_error() <= tol
        && hermitian_eig(&m.hermitian_part())
            .map(|s| s.min() >= -tol)
            .unwrap_or(false);
    let tr = m.trace();
    let trace_ok = (tr.re - T::one()).abs() <= tol && tr.im.abs() <= tol;
    let marginal = partial_trace(m, Subsystem::First).expect("4x4 input");
    let marginal_ok = marginal.max_abs_diff(&ComplexMatrix::identity(2).scale(T::of(0.5))) <= tol;
    CptpReport {
        psd,
        marginal_ok,
        trace_ok,
    }
}

/// Choi state of a qubit channel.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiState<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> ChoiState<T> {
    /// Validates `matrix` at the default tolerances (PSD and trace to `1e-9`,
    /// input marginal to `1e-8`).
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(Error::BadDim {
                expected: 4,
                got: matrix.dim(),
            });
        }
        let strict = is_cptp(&matrix, T::tol(1e-9));
        if !(strict.psd && strict.trace_ok) || !is_cptp(&matrix, T::tol(1e-8)).marginal_ok {
            return Err(Error::BadState(format!("not a valid Choi state ({strict:?})")));
        }
        Ok(Self { matrix })
    }

    /// Validates every Choi condition against a single tolerance.
    pub fn with_tolerance(matrix: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let report = is_cptp(&matrix, tol);
        if !report.is_valid() {
            return Err(Error::BadState(format!("not a valid Choi state ({report:?})")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn apply(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        apply_choi(self, rho)
    }

    pub fn pauli_form(&self) -> PauliForm<T> {
        pauli_form(self)
    }
}

/// `(id ⊗ Λ)(|Φ+><Φ+|)`.
pub fn choi_from_kraus<T: Real>(k: &KrausSet<T>) -> ChoiState<T> {
    // (I ⊗ K)|Φ+> has components K[b][a] / √2 at index 2a + b.
    let s = T::FRAC_1_SQRT_2();
    let mut m = ComplexMatrix::zeros(4);
    for op in k.ops() {
        let v: Vec<Complex<T>> = (0..4).map(|idx| op[(idx % 2, idx / 2)] * s).collect();
        m = &m + &ComplexMatrix::outer(&v);
    }
    ChoiState { matrix: m }
}

/// `Λ(ρ) = 2 Tr_in[(ρ^T ⊗ I) ρ^Λ]`.
pub fn apply_choi<T: Real>(c: &ChoiState<T>, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if rho.dim() != 2 {
        return Err(Error::BadState(format!(
            "expected a 2x2 density matrix, got {0}x{0}",
            rho.dim()
        )));
    }
    validate_density(rho, T::tol(1e-9))?;
    let lifted = rho.transpose().kron(&ComplexMatrix::identity(2));
    let out = partial_trace(&(&lifted * &c.matrix), Subsystem::Second)?;
    Ok(out.scale(T::of(2.0)).hermitian_part())
}

/// Pauli coefficients `(A, B, Θ)` of a two-qubit matrix:
/// `A_i = Tr[ρ(σi⊗I)]`, `B_j = Tr[ρ(I⊗σj)]`, `Θ_ij = Tr[ρ(σi⊗σj)]`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PauliForm<T> {
    pub a: Vec3<T>,
    pub b: Vec3<T>,
    pub theta: Mat3<T>,
}

impl<T: Real> PauliForm<T> {
    pub fn of_matrix(m: &ComplexMatrix<T>) -> Self {
        let p = pauli::<T>();
        let id = ComplexMatrix::identity(2);
        let mut a = [T::zero(); 3];
        let mut b = [T::zero(); 3];
        let mut theta = [[T::zero(); 3]; 3];
        for i in 0..3 {
            a[i] = m.trace_product(&p[i].kron(&id)).re;
            b[i] = m.trace_product(&id.kron(&p[i])).re;
            for j in 0..3 {
                theta[i][j] = m.trace_product(&p[i].kron(&p[j])).re;
            }
        }
        Self { a, b, theta }
    }

    /// `¼ [I⊗I + Σ A_i σi⊗I + Σ B_j I⊗σj + Σ Θ_ij σi⊗σj]`.
    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        choi_from_pauli(self)
    }
}

pub fn pauli_form<T: Real>(c: &ChoiState<T>) -> PauliForm<T> {
    PauliForm::of_matrix(&c.matrix)
}

pub fn choi_from_pauli<T: Real>(p: &PauliForm<T>) -> ComplexMatrix<T> {
    let s = pauli::<T>();
    let id = ComplexMatrix::identity(2);
    let mut m = ComplexMatrix::identity(4);
    for i in 0..3 {
        m = &m + &s[i].kron(&id).scale(p.a[i]);
        m = &m + &id.kron(&s[i]).scale(p.b[i]);
        for j in 0..3 {
            m = &m + &s[i].kron(&s[j]).scale(p.theta[i][j]);
        }
    }
    m.scale(T::of(0.25))
}

/// Affine action `r ↦ M r + c` of a channel on Bloch vectors.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AffineMap<T> {
    pub m: Mat3<T>,
    pub c: Vec3<T>,
}

impl<T: Real> AffineMap<T> {
    pub fn apply(&self, r: &Vec3<T>) -> Vec3<T> {
        add3(&matvec3(&self.m, r), &self.c)
    }
}

/// Sign pattern picked up by Bloch vectors under transposition.
pub(crate) fn transpose_signs<T: Real>() -> Mat3<T> {
    diag3([T::one(), -T::one(), T::one()])
}

pub(crate) fn require_null_a<T: Real>(p: &PauliForm<T>) -> Result<()> {
    let n = norm3(&p.a);
    if n > T::tol(1e-8) {
        return Err(Error::NonzeroA(n.as_f64()));
    }
    Ok(())
}

/// `M = Θ^T diag(1,-1,1)`, `c = B`.
pub fn affine_map<T: Real>(p: &PauliForm<T>) -> Result<AffineMap<T>> {
    require_null_a(p)?;
    Ok(AffineMap {
        m: matmul3(&transpose3(&p.theta), &transpose_signs()),
        c: p.b,
    })
}

/// Bloch vector `(Tr ρσx, Tr ρσy, Tr ρσz)` of a qubit state.
pub fn bloch_vector<T: Real>(rho: &ComplexMatrix<T>) -> Vec3<T> {
    let p = pauli::<T>();
    [0, 1, 2].map(|i| rho.trace_product(&p[i]).re)
}

pub fn preset<T: Real>(p: &Preset<T>) -> Result<KrausSet<T>> {
    p.kraus()
}
