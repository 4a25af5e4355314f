//! Partial transpose and partial trace on `2 ⊗ 2` matrices.
//!
//! Basis index of `|a b>` is `2a + b`; `a` belongs to the first subsystem.

use num_complex::Complex;
use num_traits::Zero;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

fn require_two_qubit<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if m.dim() != 4 {
        return Err(Error::BadDim {
            expected: 4,
            got: m.dim(),
        });
    }
    Ok(())
}

pub fn partial_transpose<T: Real>(rho: &ComplexMatrix<T>, subsystem: Subsystem) -> Result<ComplexMatrix<T>> {
    require_two_qubit(rho)?;
    Ok(ComplexMatrix::from_fn(4, |r, c| {
        let (a, b) = (r / 2, r % 2);
        let (x, y) = (c / 2, c % 2);
        match subsystem {
            Subsystem::First => rho[(2 * x + b, 2 * a + y)],
            Subsystem::Second => rho[(2 * a + y, 2 * x + b)],
        }
    }))
}

/// Reduced 2x2 matrix on the subsystem `keep`.
pub fn partial_trace<T: Real>(rho: &ComplexMatrix<T>, keep: Subsystem) -> Result<ComplexMatrix<T>> {
    require_two_qubit(rho)?;
    Ok(ComplexMatrix::from_fn(2, |i, j| {
        let mut acc = Complex::zero();
        for k in 0..2 {
            acc = acc
                + match keep {
                    Subsystem::First => rho[(2 * i + k, 2 * j + k)],
                    Subsystem::Second => rho[(2 * k + i, 2 * k + j)],
                };
        }
        acc
    }))
}
