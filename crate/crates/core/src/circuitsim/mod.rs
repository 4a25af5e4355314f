//! Density-matrix simulation of up to five qubits, with the two channel
//! circuits, Pauli tomography and parameter sweeps built on top.
//!
//! Qubit 0 is the most significant bit of a basis index.

mod sweep;
mod tomography;

pub use sweep::{sweep, write_sweep_csv, CircuitPreset, SweepResult, SweepRow, SWEEP_HEADER};
pub use tomography::{task_seed, tomography, Basis, ShotRecord};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{validate_density, ComplexMatrix};
use crate::scalar::Real;

pub const MAX_QUBITS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct QRegister<T> {
    n: usize,
    rho: ComplexMatrix<T>,
}

impl<T: Real> QRegister<T> {
    /// `|0...0>` on `n` qubits.
    pub fn new(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut diag = vec![T::zero(); 1 << n];
        diag[0] = T::one();
        Ok(Self {
            n,
            rho: ComplexMatrix::diag(&diag),
        })
    }

    pub fn from_density(rho: ComplexMatrix<T>) -> Result<Self> {
        let n = rho.dim().trailing_zeros() as usize;
        if !rho.dim().is_power_of_two() {
            return Err(Error::BadDim {
                expected: 1 << n,
                got: rho.dim(),
            });
        }
        check_size(n)?;
        validate_density(&rho, T::tol(1e-10))?;
        Ok(Self { n, rho })
    }

    /// Product state of single-qubit density matrices, first factor = qubit 0.
    pub fn product(states: &[ComplexMatrix<T>]) -> Result<Self> {
        let mut iter = states.iter();
        let first = iter.next().ok_or_else(|| Error::BadParam("empty register".into()))?;
        let rho = iter.fold(first.clone(), |acc, s| acc.kron(s));
        Self::from_density(rho)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn density(&self) -> &ComplexMatrix<T> {
        &self.rho
    }

    /// `ρ ↦ GρG†` with the gate acting on `targets` in the gate's own order.
    pub fn apply(&self, gate: &Gate<T>, targets: &[usize]) -> Result<Self> {
        let g = embed(&gate.matrix(), targets, self.n)?;
        Ok(Self {
            n: self.n,
            rho: self.rho.conjugate_by(&g).hermitian_part(),
        })
    }

    /// Reduced state of a single qubit.
    pub fn reduce(&self, qubit: usize) -> Result<QRegister<T>> {
        if qubit >= self.n {
            return Err(Error::BadTargets(format!(
                "qubit {qubit} outside a {}-qubit register",
                self.n
            )));
        }
        let shift = self.n - 1 - qubit;
        let dim = 1 << self.n;
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for i in 0..dim {
            for j in 0..dim {
                // rest-of-register bits must agree
                if (i ^ j) & !(1 << shift) != 0 {
                    continue;
                }
                let cell = &mut out[(i >> shift) & 1][(j >> shift) & 1];
                *cell = *cell + self.rho[(i, j)];
            }
        }
        let rho = ComplexMatrix::from_fn(2, |a, b| out[a][b]);
        Ok(QRegister { n: 1, rho })
    }
}

fn check_size(n: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(Error::BadParam(format!("register size {n} outside 1..={MAX_QUBITS}")));
    }
    Ok(())
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Gate<T> {
    H,
    X,
    Ry(T),
    /// `|0> ↦ cos(θ/2)|0> + e^{iψ} sin(θ/2)|1>`.
    U(T, T),
    /// Targets: control, target.
    Cnot,
    /// Targets: control, target.
    CRy(T),
    /// Targets: control, then the two swapped qubits.
    Fredkin,
}

impl<T: Real> Gate<T> {
    pub fn arity(&self) -> usize {
        match self {
            Gate::H | Gate::X | Gate::Ry(_) | Gate::U(..) => 1,
            Gate::Cnot | Gate::CRy(_) => 2,
            Gate::Fredkin => 3,
        }
    }

    pub fn matrix(&self) -> ComplexMatrix<T> {
        let r = |x: T| Complex::new(x, T::zero());
        let z = r(T::zero());
        let o = r(T::one());
        match *self {
            Gate::H => {
                let s = r(T::FRAC_1_SQRT_2());
                ComplexMatrix::from_fn(2, |i, j| if i == 1 && j == 1 { -s } else { s })
            }
            Gate::X => ComplexMatrix::from_fn(2, |i, j| if i != j { o } else { z }),
            Gate::Ry(t) => ry(t),
            Gate::U(t, p) => {
                let (c, s) = ((t / T::of(2.0)).cos(), (t / T::of(2.0)).sin());
                let e = Complex::from_polar(T::one(), p);
                let m = [[r(c), r(-s)], [e * s, e * c]];
                ComplexMatrix::from_fn(2, |i, j| m[i][j])
            }
            Gate::Cnot => controlled(&Gate::X.matrix()),
            Gate::CRy(t) => controlled(&ry(t)),
            Gate::Fredkin => ComplexMatrix::from_fn(8, |i, j| {
                let swapped = if i & 4 != 0 {
                    (i & 4) | ((i & 1) << 1) | ((i & 2) >> 1)
                } else {
                    i
                };
                if swapped == j {
                    o
                } else {
                    z
                }
            }),
        }
    }
}

fn ry<T: Real>(t: T) -> ComplexMatrix<T> {
    let (c, s) = ((t / T::of(2.0)).cos(), (t / T::of(2.0)).sin());
    ComplexMatrix::from_real(2, &[c, -s, s, c]).expect("2x2")
}

fn controlled<T: Real>(u: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(4, |i, j| match (i < 2, j < 2) {
        (true, true) if i == j => Complex::new(T::one(), T::zero()),
        (false, false) => u[(i - 2, j - 2)],
        _ => Complex::new(T::zero(), T::zero()),
    })
}

/// Lifts a `k`-qubit gate to `n` qubits; `targets[0]` is the gate's most
/// significant qubit.
pub fn embed<T: Real>(g: &ComplexMatrix<T>, targets: &[usize], n: usize) -> Result<ComplexMatrix<T>> {
    let k = targets.len();
    if g.dim() != 1 << k {
        return Err(Error::BadTargets(format!(
            "gate acts on {} qubits, {} targets given",
            g.dim().trailing_zeros(),
            k
        )));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::BadTargets(format!("qubit {t} outside a {n}-qubit register")));
        }
        if targets[..i].contains(&t) {
            return Err(Error::BadTargets(format!("qubit {t} repeated")));
        }
    }
    let mask: usize = targets.iter().map(|t| 1 << (n - 1 - t)).sum();
    let local = |idx: usize| targets.iter().fold(0, |acc, t| (acc << 1) | ((idx >> (n - 1 - t)) & 1));
    Ok(ComplexMatrix::from_fn(1 << n, |i, j| {
        if (i & !mask) != (j & !mask) {
            Complex::new(T::zero(), T::zero())
        } else {
            g[(local(i), local(j))]
        }
    }))
}

pub fn apply_gate<T: Real>(reg: &QRegister<T>, gate: &Gate<T>, targets: &[usize]) -> Result<QRegister<T>> {
    if targets.len() != gate.arity() {
        return Err(Error::BadTargets(format!(
            "gate takes {} targets, got {}",
            gate.arity(),
            targets.len()
        )));
    }
    reg.apply(gate, targets)
}

/// `U(θ, ψ)|0>`: Bloch vector `(sinθ cosψ, sinθ sinψ, cosθ)`.
pub fn input_prep<T: Real>(theta: T, psi: T) -> QRegister<T> {
    QRegister::new(1)
        .and_then(|r| r.apply(&Gate::U(theta, psi), &[0]))
        .expect("single-qubit preparation")
}

/// Input angles `(θ, ψ)` of a Bloch direction.
pub fn input_angles<T: Real>(r: &[T; 3]) -> (T, T) {
    let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if n == T::zero() {
        return (T::zero(), T::zero());
    }
    let theta = (r[2] / n).max(-T::one()).min(T::one()).acos();
    let mut psi = r[1].atan2(r[0]);
    if psi < T::zero() {
        psi += T::of(2.0) * T::PI();
    }
    (theta, psi)
}

/// Ancilla-assisted depolarizing channel with `P = 1 - sin²(circuit_theta/2)`:
/// a Bell pair supplies a maximally mixed qubit, and a second pair turns
/// `Ry(circuit_theta)` into a classical coin controlling a swap with it.
pub fn run_depolarizing_circuit<T: Real>(input: (T, T), circuit_theta: T) -> Result<QRegister<T>> {
    let zero = QRegister::<T>::new(1)?.rho;
    let q0 = input_prep(input.0, input.1).rho;
    let mut reg = QRegister::product(&[q0, zero.clone(), zero.clone(), zero.clone(), zero])?;
    reg = apply_gate(&reg, &Gate::H, &[1])?;
    reg = apply_gate(&reg, &Gate::Cnot, &[1, 2])?;
    reg = apply_gate(&reg, &Gate::Ry(circuit_theta), &[3])?;
    reg = apply_gate(&reg, &Gate::Cnot, &[3, 4])?;
    reg = apply_gate(&reg, &Gate::Fredkin, &[3, 0, 1])?;
    reg.reduce(0)
}

/// Amplitude damping with `γ = sin²(circuit_theta)`: a controlled rotation
/// by `2 arcsin √γ` moves the excitation to the ancilla, and a CNOT back
/// resets the input.
pub fn run_amplitude_damping_circuit<T: Real>(input: (T, T), circuit_theta: T) -> Result<QRegister<T>> {
    let zero = QRegister::<T>::new(1)?.rho;
    let q0 = input_prep(input.0, input.1).rho;
    let mut reg = QRegister::product(&[q0, zero])?;
    let angle = T::of(2.0) * circuit_theta.sin().abs().min(T::one()).asin();
    reg = apply_gate(&reg, &Gate::CRy(angle), &[0, 1])?;
    reg = apply_gate(&reg, &Gate::Cnot, &[1, 0])?;
    reg.reduce(0)
}
