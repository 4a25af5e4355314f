//! Report JSON. Field order is fixed by declaration order.

use qmem::channel::{matrix_to_json, JsonMatrix};
use qmem::ellipsoid::{Chirality, Ellipsoid};
use qmem::{ChoiState64, Ellipsoid64, MemoryReport64};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub ellipsoid: EllipsoidJson,
    pub candidates: Vec<CandidateJson>,
    pub provenance: Provenance,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EllipsoidJson {
    pub center: [f64; 3],
    #[serde(rename = "Q")]
    pub q: [[f64; 3]; 3],
    pub semiaxes: [f64; 3],
    pub axes: [[f64; 3]; 3],
    pub chirality: String,
    pub volume: f64,
    pub volume_bound: f64,
    #[serde(default)]
    pub degenerate: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CandidateJson {
    pub chirality: String,
    pub choi: JsonMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MetricsJson {
    pub eb: bool,
    pub negativity: f64,
    pub concurrence: f64,
    pub memory_robustness: f64,
    pub robustness_bracket: [f64; 2],
    pub volume_bound: f64,
    pub lemma_gap: f64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_residual: Option<f64>,
}

pub fn chirality_name(c: Chirality) -> &'static str {
    match c {
        Chirality::Positive => "positive",
        Chirality::Negative => "negative",
        Chirality::Undetermined => "undetermined",
    }
}

pub fn chirality_from_name(s: &str) -> Result<Chirality, String> {
    match s {
        "positive" => Ok(Chirality::Positive),
        "negative" => Ok(Chirality::Negative),
        "undetermined" => Ok(Chirality::Undetermined),
        other => Err(format!("unknown chirality {other:?}")),
    }
}

impl EllipsoidJson {
    pub fn new(e: &Ellipsoid64, degenerate: bool) -> Self {
        Self {
            center: e.center(),
            q: e.shape(),
            semiaxes: e.semiaxes(),
            axes: e.axes(),
            chirality: chirality_name(e.chirality()).into(),
            volume: e.volume(),
            volume_bound: e.volume_bound(),
            degenerate,
        }
    }

    pub fn to_ellipsoid(&self) -> Result<Ellipsoid64, String> {
        let chirality = chirality_from_name(&self.chirality)?;
        Ellipsoid::from_center_shape(self.center, self.q, chirality).map_err(|e| e.to_string())
    }
}

impl CandidateJson {
    pub fn new(choi: &ChoiState64, chirality: Chirality, metrics: Option<&MemoryReport64>) -> Self {
        Self {
            chirality: chirality_name(chirality).into(),
            choi: matrix_to_json(choi.matrix()),
            metrics: metrics.map(|m| MetricsJson {
                eb: m.eb,
                negativity: m.negativity,
                concurrence: m.concurrence,
                memory_robustness: m.memory_robustness,
                robustness_bracket: [m.robustness_bracket.0, m.robustness_bracket.1],
                volume_bound: m.volume_bound,
                lemma_gap: m.lemma_gap,
            }),
        }
    }
}

impl Report {
    pub fn new(ellipsoid: EllipsoidJson, candidates: Vec<CandidateJson>, provenance: Provenance) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            ellipsoid,
            candidates,
            provenance,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
