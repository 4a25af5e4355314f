//! Single-qubit Pauli tomography with binomial shot noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::QRegister;
use crate::channel::bloch_vector;
use crate::ellipsoid::BlochPoint;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Y,
    Z,
}

/// Outcome counts of one measurement basis.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ShotRecord {
    pub basis: Basis,
    pub shots: u64,
    /// Number of `+1` outcomes.
    pub plus_count: u64,
}

impl ShotRecord {
    /// `2·plus_count/shots - 1`.
    pub fn estimate<T: Real>(&self) -> T {
        T::of(2.0 * self.plus_count as f64 / self.shots as f64 - 1.0)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent seed for one (theta, input) task of a sweep.
pub fn task_seed(base: u64, theta_index: usize, input_index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ theta_index as u64) ^ input_index as u64)
}

/// Estimates the Bloch vector of a one-qubit register. `shots = None`
/// returns the exact expectations and no records.
pub fn tomography<T: Real>(
    reg: &QRegister<T>,
    shots: Option<u64>,
    seed: u64,
) -> Result<(BlochPoint<T>, Vec<ShotRecord>)> {
    if reg.qubits() != 1 {
        return Err(Error::BadDim {
            expected: 2,
            got: reg.density().dim(),
        });
    }
    let exact = bloch_vector(reg.density());
    let Some(shots) = shots else {
        let point = BlochPoint {
            r: exact,
            input_id: None,
            weight: None,
        };
        return Ok((point, Vec::new()));
    };
    if shots == 0 {
        return Err(Error::BadShots);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(3);
    for (basis, expectation) in [Basis::X, Basis::Y, Basis::Z].into_iter().zip(exact) {
        let p = ((T::one() + expectation) / T::of(2.0)).as_f64().clamp(0.0, 1.0);
        let dist = Binomial::new(shots, p).expect("probability in [0, 1]");
        records.push(ShotRecord {
            basis,
            shots,
            plus_count: dist.sample(&mut rng),
        });
    }
    let point = BlochPoint {
        r: [0, 1, 2].map(|k| records[k].estimate()),
        input_id: None,
        weight: Some(T::of(shots as f64)),
    };
    Ok((point, records))
}
