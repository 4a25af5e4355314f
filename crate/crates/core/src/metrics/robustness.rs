//! Robustness by bisection over the mixing weight `t`, with feasibility at
//! fixed `t` decided by Dykstra's alternating projections.
//!
//! At fixed `t` we look for a noise matrix `X` in the intersection of
//!
//! * `S1`: the PSD cone,
//! * `S2`: the affine noise constraints (`Tr_out X = I/2` for channels,
//!   `Tr X = 1` for arbitrary states),
//! * `S3`: `{X : (ρ + tX)^Γ ⪰ 0}`, with `Γ` the partial transpose.
//!
//! All three sets are convex and their projections are closed form, so each
//! iteration costs two 4x4 Hermitian eigendecompositions.

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, partial_trace, partial_transpose, ComplexMatrix, Subsystem};
use crate::scalar::Real;

/// Which noise matrices the mixture may use.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NoiseSet {
    /// Choi states of channels: input marginal fixed to `I/2`.
    Channels,
    /// Any two-qubit density matrix.
    States,
}

#[derive(Copy, Clone, Debug)]
pub struct RobustnessOptions<T> {
    /// Bisection stops once the bracket is narrower than this.
    pub tol: T,
    /// Inputs whose partial transpose has no eigenvalue below `-ppt_tol` are
    /// treated as separable and short-circuit to zero.
    pub ppt_tol: T,
    /// An iterate within this distance of every set counts as feasible.
    pub feasible_tol: T,
    /// Residuals that stop improving above this level mark infeasibility.
    pub stall_tol: T,
    pub stall_window: usize,
    pub max_iter: usize,
}

impl<T: Real> Default for RobustnessOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::of(1e-4),
            ppt_tol: T::tol(1e-9),
            feasible_tol: T::tol(1e-8),
            stall_tol: T::tol(1e-6),
            stall_window: 500,
            max_iter: 50_000,
        }
    }
}

impl<T: Real> RobustnessOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Result of a robustness computation: the certified bracket and its midpoint.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Robustness<T> {
    pub value: T,
    pub lower: T,
    pub upper: T,
    /// Total projection iterations spent across all feasibility checks.
    pub iterations: usize,
}

impl<T: Real> Default for Robustness<T> {
    fn default() -> Self {
        Self {
            value: T::zero(),
            lower: T::zero(),
            upper: T::zero(),
            iterations: 0,
        }
    }
}

/// Outcome of one fixed-`t` feasibility run.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum Verdict {
    Feasible,
    Infeasible,
    /// Iteration cap reached with the residual still shrinking.
    Undecided,
}

#[derive(Clone, Debug)]
pub(crate) struct Feasibility<T> {
    pub verdict: Verdict,
    pub point: ComplexMatrix<T>,
    pub residual: T,
    pub iterations: usize,
}

// Residuals need an extra eigendecomposition, so they are sampled.
const CHECK_EVERY: usize = 4;

fn negative_part_norm<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    let spec = hermitian_eig(m)?;
    Ok(spec
        .values
        .iter()
        .filter(|&&l| l < T::zero())
        .map(|&l| l * l)
        .sum::<T>()
        .sqrt())
}

fn clip_negative<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let spec = hermitian_eig(m)?;
    if spec.min() >= T::zero() {
        return Ok(m.clone());
    }
    Ok(spec.map(|l| l.max(T::zero())))
}

pub(crate) fn gamma<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    partial_transpose(m, Subsystem::Second).expect("4x4")
}

/// Orthogonal projection onto the affine noise constraints.
pub(crate) fn project_affine<T: Real>(x: &ComplexMatrix<T>, set: NoiseSet) -> ComplexMatrix<T> {
    match set {
        NoiseSet::Channels => {
            // X - (Tr_out X - I/2) ⊗ I/2
            let half = ComplexMatrix::identity(2).scale(T::of(0.5));
            let marginal = partial_trace(x, Subsystem::First).expect("4x4");
            x - &(&marginal - &half).kron(&half)
        }
        NoiseSet::States => {
            let shift = (x.trace().re - T::one()) / T::of(4.0);
            x - &ComplexMatrix::identity(4).scale(shift)
        }
    }
}

fn affine_distance<T: Real>(x: &ComplexMatrix<T>, set: NoiseSet) -> T {
    (x - &project_affine(x, set)).frobenius_norm()
}

/// Projection onto `{X : X^Γ + shift ⪰ 0}` where `shift = ρ^Γ / t`.
fn project_ppt<T: Real>(x: &ComplexMatrix<T>, shift: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let w = &gamma(x) + shift;
    let clipped = clip_negative(&w)?;
    Ok(gamma(&(&clipped - shift)))
}

/// Dykstra's algorithm over (PSD, affine, PPT-shift) started from `start`.
pub(crate) fn feasible_at<T: Real>(
    rho: &ComplexMatrix<T>,
    t: T,
    set: NoiseSet,
    start: &ComplexMatrix<T>,
    opts: &RobustnessOptions<T>,
) -> Result<Feasibility<T>> {
    let shift = gamma(rho).scale(T::one() / t);
    let zero = ComplexMatrix::zeros(4);
    let (mut p1, mut p2, mut p3) = (zero.clone(), zero.clone(), zero);
    let mut x = start.clone();
    let mut best = T::infinity();
    let mut since_best = 0usize;
    let mut residual = T::infinity();
    let done = |verdict, point, residual, iterations| {
        Ok(Feasibility {
            verdict,
            point,
            residual,
            iterations,
        })
    };

    for iter in 1..=opts.max_iter {
        let y = &x + &p1;
        let next = clip_negative(&y)?;
        p1 = &y - &next;
        x = next;

        let y = &x + &p2;
        let next = project_affine(&y, set);
        p2 = &y - &next;
        x = next;

        let y = &x + &p3;
        let next = project_ppt(&y, &shift)?;
        p3 = &y - &next;
        x = next;

        if iter % CHECK_EVERY != 0 {
            continue;
        }
        // x lies in S3 exactly; measure how far it sits from S1 and S2.
        residual = negative_part_norm(&x)?.max(affine_distance(&x, set));
        if residual < opts.feasible_tol {
            return done(Verdict::Feasible, x, residual, iter);
        }
        if residual < best * (T::one() - T::of(1e-3)) {
            best = residual;
            since_best = 0;
        } else {
            since_best += CHECK_EVERY;
            if since_best >= opts.stall_window && best > opts.stall_tol {
                return done(Verdict::Infeasible, x, residual, iter);
            }
        }
    }
    done(Verdict::Undecided, x, residual, opts.max_iter)
}

/// Smallest `t` (to within `opts.tol`) such that `(ρ + tX)/(1+t)` has a
/// positive partial transpose for some admissible noise `X`.
///
/// The bracket is certified by the projection runs. If a run inside an
/// established bracket exhausts its iteration budget the midpoint is already
/// within the solver's resolution of the threshold, and the search stops
/// there with the bracket reported as is.
pub fn robustness<T: Real>(
    rho: &ComplexMatrix<T>,
    set: NoiseSet,
    opts: &RobustnessOptions<T>,
) -> Result<Robustness<T>> {
    if rho.dim() != 4 {
        return Err(Error::BadDim {
            expected: 4,
            got: rho.dim(),
        });
    }
    let min_pt = hermitian_eig(&gamma(rho))?.min();
    if min_pt >= -opts.ppt_tol {
        return Ok(Robustness::default());
    }

    let mut start = ComplexMatrix::identity(4).scale(T::of(0.25));
    let mut iterations = 0;
    let mut lo = T::zero();
    let mut hi = T::one();
    loop {
        let f = feasible_at(rho, hi, set, &start, opts)?;
        iterations += f.iterations;
        match f.verdict {
            Verdict::Feasible => {
                start = f.point;
                break;
            }
            Verdict::Infeasible if hi < T::of(1024.0) => {
                lo = hi;
                hi *= T::of(2.0);
            }
            _ => {
                return Err(Error::SolverNoConvergence {
                    t: hi.as_f64(),
                    residual: f.residual.as_f64(),
                })
            }
        }
    }
    let mut value = None;
    while hi - lo > opts.tol {
        let mid = (lo + hi) * T::of(0.5);
        let f = feasible_at(rho, mid, set, &start, opts)?;
        iterations += f.iterations;
        match f.verdict {
            Verdict::Feasible => {
                hi = mid;
                start = f.point;
            }
            Verdict::Infeasible => lo = mid,
            Verdict::Undecided => {
                value = Some(mid);
                break;
            }
        }
    }
    Ok(Robustness {
        value: value.unwrap_or((lo + hi) * T::of(0.5)),
        lower: lo,
        upper: hi,
        iterations,
    })
}
