//! JSON channel description consumed by the command-line tools.
//!
//! ```json
//! {"kind":"kraus","ops":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}
//! {"kind":"preset","name":"depolarizing","P":0.5}
//! {"name":"amplitude_damping","gamma":0.3}
//! ```
//!
//! Matrices are row-major nested arrays of `[re, im]` pairs.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{KrausSet, Preset};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::scalar::Real;

/// Row-major complex matrix as `[[[re, im], ...], ...]`.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ops: Option<Vec<JsonMatrix>>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<JsonMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<JsonMatrix>,
}

pub fn matrix_from_json<T: Real>(m: &JsonMatrix) -> Result<ComplexMatrix<T>> {
    let rows: Vec<Vec<Complex<T>>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|[re, im]| Complex::new(T::of(*re), T::of(*im)))
                .collect()
        })
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|_| Error::Parse("matrix must be square".into()))
}

pub fn matrix_to_json<T: Real>(m: &ComplexMatrix<T>) -> JsonMatrix {
    (0..m.dim())
        .map(|i| {
            (0..m.dim())
                .map(|j| [m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()])
                .collect()
        })
        .collect()
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn preset(name: &str) -> Self {
        Self {
            kind: Some("preset".into()),
            name: Some(name.into()),
            ..Self::default()
        }
    }

    fn require<V: Copy>(&self, v: Option<V>, field: &str) -> Result<V> {
        v.ok_or_else(|| Error::Parse(format!("preset {:?} needs field {field:?}", self.name)))
    }

    /// Resolves a preset description; `None` for explicit Kraus specs.
    pub fn to_preset<T: Real>(&self) -> Result<Option<Preset<T>>> {
        match self.kind.as_deref().unwrap_or("preset") {
            "kraus" => return Ok(None),
            "preset" => {}
            other => return Err(Error::Parse(format!("unknown channel kind {other:?}"))),
        }
        let name = self
            .name
            .as_deref()
            .ok_or_else(|| Error::Parse("preset needs a name".into()))?;
        let preset = match name {
            "identity" => Preset::Identity,
            "depolarizing" => Preset::Depolarizing {
                p: T::of(self.require(self.p, "P")?),
            },
            "amplitude_damping" => Preset::AmplitudeDamping {
                gamma: T::of(self.require(self.gamma, "gamma")?),
            },
            "unitary" => {
                let m = self
                    .matrix
                    .as_ref()
                    .ok_or_else(|| Error::Parse("unitary needs \"matrix\"".into()))?;
                Preset::Unitary(matrix_from_json(m)?)
            }
            "replacer" => {
                let m = self
                    .state
                    .as_ref()
                    .ok_or_else(|| Error::Parse("replacer needs \"state\"".into()))?;
                Preset::Replacer(matrix_from_json(m)?)
            }
            "z_measure_prepare" => Preset::ZMeasurePrepare,
            other => return Err(Error::Parse(format!("unknown preset {other:?}"))),
        };
        Ok(Some(preset))
    }

    pub fn to_kraus<T: Real>(&self) -> Result<KrausSet<T>> {
        match self.to_preset()? {
            Some(p) => p.kraus(),
            None => {
                let ops = self
                    .ops
                    .as_ref()
                    .ok_or_else(|| Error::Parse("kraus spec needs \"ops\"".into()))?;
                let ops = ops.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
                KrausSet::new(ops)
            }
        }
    }
}
