//! Channel ellipsoids for single-qubit quantum memories.
//!
//! A qubit channel maps the Bloch ball onto an ellipsoid. This crate builds
//! that ellipsoid from a channel description or from measured output Bloch
//! vectors, rebuilds candidate Choi states from its center and shape matrix,
//! and quantifies how well the channel preserves entanglement: PPT test,
//! negativity, concurrence, memory robustness and the volume-based upper
//! bound `(3V/4π)^{1/4}`. A small density-matrix simulator reproduces the
//! depolarizing and amplitude-damping circuits used to exercise the pipeline.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

#![allow(clippy::needless_range_loop)]

pub mod channel;
pub mod circuitsim;
pub mod ellipsoid;
mod error;
pub mod metrics;
pub mod numerics;
pub mod random;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexMatrix64 = numerics::ComplexMatrix<f64>;
pub type Spectrum64 = numerics::Spectrum<f64>;
pub type KrausSet64 = channel::KrausSet<f64>;
pub type ChoiState64 = channel::ChoiState<f64>;
pub type PauliForm64 = channel::PauliForm<f64>;
pub type AffineMap64 = channel::AffineMap<f64>;
pub type Preset64 = channel::Preset<f64>;
pub type Ellipsoid64 = ellipsoid::Ellipsoid<f64>;
pub type BlochPoint64 = ellipsoid::BlochPoint<f64>;
pub type Mesh64 = ellipsoid::Mesh<f64>;
pub type MemoryReport64 = metrics::MemoryReport<f64>;
pub type QRegister64 = circuitsim::QRegister<f64>;
pub type SweepResult64 = circuitsim::SweepResult<f64>;

pub type ComplexMatrix32 = numerics::ComplexMatrix<f32>;
pub type ChoiState32 = channel::ChoiState<f32>;
pub type Ellipsoid32 = ellipsoid::Ellipsoid<f32>;
