//! Simulate → tomograph → fit → reconstruct → report, over a grid of circuit
//! angles.

use std::io::Write;

use rayon::prelude::*;

use super::{input_angles, run_amplitude_damping_circuit, run_depolarizing_circuit, task_seed, tomography, QRegister};
use crate::channel::Preset;
use crate::ellipsoid::{fit_ellipsoid, reconstruct_choi_candidates, BlochPoint, Chirality, FitOptions};
use crate::error::{Error, Result};
use crate::metrics::{memory_report, ReportOptions};
use crate::numerics::real3::Vec3;
use crate::scalar::Real;

pub const SWEEP_HEADER: [&str; 10] = [
    "theta",
    "param",
    "volume",
    "volume_bound",
    "negativity",
    "concurrence",
    "memory_robustness",
    "eb",
    "fit_residual",
    "flags",
];

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CircuitPreset {
    /// `P = 1 - sin²(θ/2)`.
    Depolarizing,
    /// `γ = sin²θ`.
    AmplitudeDamping,
}

impl CircuitPreset {
    pub fn name(self) -> &'static str {
        match self {
            CircuitPreset::Depolarizing => "depolarizing",
            CircuitPreset::AmplitudeDamping => "amplitude_damping",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "depolarizing" => Ok(CircuitPreset::Depolarizing),
            "amplitude_damping" => Ok(CircuitPreset::AmplitudeDamping),
            other => Err(Error::BadParam(format!("no circuit for preset {other:?}"))),
        }
    }

    /// Channel parameter realized at a circuit angle.
    pub fn param<T: Real>(self, theta: T) -> T {
        match self {
            CircuitPreset::Depolarizing => {
                let s = (theta / T::of(2.0)).sin();
                T::one() - s * s
            }
            CircuitPreset::AmplitudeDamping => {
                let s = theta.sin();
                s * s
            }
        }
    }

    pub fn analytic<T: Real>(self, theta: T) -> Preset<T> {
        let p = self.param(theta);
        match self {
            CircuitPreset::Depolarizing => Preset::Depolarizing { p },
            CircuitPreset::AmplitudeDamping => Preset::AmplitudeDamping { gamma: p },
        }
    }

    /// Closed-form ellipsoid volume at a circuit angle.
    pub fn volume<T: Real>(self, theta: T) -> T {
        let p = self.param(theta);
        let k = T::of(4.0) * T::PI() / T::of(3.0);
        match self {
            CircuitPreset::Depolarizing => k * p * p * p,
            CircuitPreset::AmplitudeDamping => k * (T::one() - p) * (T::one() - p),
        }
    }

    pub fn run<T: Real>(self, input: (T, T), theta: T) -> Result<QRegister<T>> {
        match self {
            CircuitPreset::Depolarizing => run_depolarizing_circuit(input, theta),
            CircuitPreset::AmplitudeDamping => run_amplitude_damping_circuit(input, theta),
        }
    }
}

/// One circuit angle. Numeric cells are `None` when the pipeline stopped
/// before producing them; `flags` says why.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow<T> {
    pub theta: T,
    pub param: T,
    pub volume: Option<T>,
    pub volume_bound: Option<T>,
    pub negativity: Option<T>,
    pub concurrence: Option<T>,
    pub memory_robustness: Option<T>,
    pub eb: Option<bool>,
    pub fit_residual: Option<T>,
    pub flags: Vec<&'static str>,
}

impl<T> SweepRow<T> {
    /// Whether the row reached a memory report.
    pub fn succeeded(&self) -> bool {
        self.memory_robustness.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult<T> {
    pub preset: CircuitPreset,
    pub shots: Option<u64>,
    pub seed: u64,
    /// Ascending in `theta`.
    pub rows: Vec<SweepRow<T>>,
    /// Human-readable remarks, e.g. where volumes grow with `theta`.
    pub notes: Vec<String>,
}

/// Runs the full pipeline for every angle, in parallel across angles. Per
/// input shot noise is seeded by [`task_seed`]`(seed, theta_index,
/// input_index)`, with `theta_index` the position in `thetas` as given.
pub fn sweep<T: Real>(
    preset: CircuitPreset,
    thetas: &[T],
    inputs: &[Vec3<T>],
    shots: Option<u64>,
    seed: u64,
    tol: T,
) -> Result<SweepResult<T>> {
    if thetas.is_empty() {
        return Err(Error::BadParam("no circuit angles given".into()));
    }
    if inputs.is_empty() {
        return Err(Error::BadParam("no input states given".into()));
    }
    if shots == Some(0) {
        return Err(Error::BadShots);
    }
    let mut rows = thetas
        .par_iter()
        .enumerate()
        .map(|(i, &theta)| row(preset, i, theta, inputs, shots, seed, tol))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.theta.partial_cmp(&b.theta).expect("finite angles"));

    let mut notes = Vec::new();
    for k in 1..rows.len() {
        let (prev, cur) = (preset.volume(rows[k - 1].theta), preset.volume(rows[k].theta));
        if cur > prev * (T::one() + T::tol(1e-12)) + T::tol(1e-15) {
            rows[k].flags.push("volume_increases");
            notes.push(format!(
                "{} volume rises from theta={} to theta={} (param {} -> {}); it is not monotone in theta here",
                preset.name(),
                rows[k - 1].theta,
                rows[k].theta,
                rows[k - 1].param,
                rows[k].param
            ));
        }
    }
    Ok(SweepResult {
        preset,
        shots,
        seed,
        rows,
        notes,
    })
}

fn row<T: Real>(
    preset: CircuitPreset,
    index: usize,
    theta: T,
    inputs: &[Vec3<T>],
    shots: Option<u64>,
    seed: u64,
    tol: T,
) -> Result<SweepRow<T>> {
    let mut out = SweepRow {
        theta,
        param: preset.param(theta),
        volume: None,
        volume_bound: None,
        negativity: None,
        concurrence: None,
        memory_robustness: None,
        eb: None,
        fit_residual: None,
        flags: Vec::new(),
    };
    let points = inputs
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let reg = preset.run(input_angles(r), theta)?;
            let (mut p, _) = tomography(&reg, shots, task_seed(seed, index, j))?;
            p.input_id = Some(j.to_string());
            Ok(p)
        })
        .collect::<Result<Vec<BlochPoint<T>>>>()?;

    let (fit_opts, report_opts) = match shots {
        None => (FitOptions::exact(), ReportOptions::default()),
        Some(_) => (FitOptions::default(), ReportOptions::fitted()),
    };
    let fit = match fit_ellipsoid(&points, &fit_opts) {
        Ok(f) => f,
        Err(Error::TooFewPoints { .. }) | Err(Error::DegenerateData(_)) => {
            out.flags.push("degenerate_data");
            return Ok(out);
        }
        Err(Error::NotAnEllipsoid(_)) | Err(Error::BadInput(_)) => {
            out.flags.push("fit_failed");
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.volume = Some(fit.ellipsoid.volume());
    out.volume_bound = Some(fit.ellipsoid.volume_bound());
    out.fit_residual = Some(fit.residual);
    if fit.degenerate {
        out.flags.push("degenerate");
    }

    let candidates = match reconstruct_choi_candidates(&fit.ellipsoid) {
        Ok(c) => c,
        Err(Error::NoValidCandidate) => {
            out.flags.push("no_valid_candidate");
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    if candidates.len() > 1 {
        out.flags.push("chirality_ambiguous");
    }
    // both circuits realize identity-like maps; prefer that branch
    let chosen = candidates
        .iter()
        .find(|c| c.chirality == Chirality::Negative)
        .unwrap_or(&candidates[0]);
    match memory_report(&chosen.choi, &report_opts.with_tol(tol)) {
        Ok(rep) => {
            out.negativity = Some(rep.negativity);
            out.concurrence = Some(rep.concurrence);
            out.memory_robustness = Some(rep.memory_robustness);
            out.eb = Some(rep.eb);
        }
        Err(Error::SolverNoConvergence { .. }) => out.flags.push("solver_failed"),
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// Writes the sweep CSV; missing cells are left empty and flags are joined
/// with `;`.
pub fn write_sweep_csv<T: Real, W: Write>(result: &SweepResult<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    let cell = |x: Option<T>| x.map(|v| v.as_f64().to_string()).unwrap_or_default();
    for r in &result.rows {
        w.write_record([
            r.theta.as_f64().to_string(),
            r.param.as_f64().to_string(),
            cell(r.volume),
            cell(r.volume_bound),
            cell(r.negativity),
            cell(r.concurrence),
            cell(r.memory_robustness),
            r.eb.map(|b| b.to_string()).unwrap_or_default(),
            cell(r.fit_residual),
            r.flags.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}
