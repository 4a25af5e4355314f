//! `qmem`: analyze channels, fit measured Bloch points, simulate the
//! memory circuits and render ellipsoid meshes.

mod angle;
mod output;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qmem::channel::ChannelSpec;
use qmem::circuitsim::{input_angles, sweep, task_seed, tomography, write_sweep_csv, CircuitPreset};
use qmem::ellipsoid::{
    default_input_grid, ellipsoid_of_channel, fit_ellipsoid, mesh, read_points, reconstruct_choi_candidates,
    write_points, FitOptions,
};
use qmem::metrics::{memory_report, ReportOptions};
use qmem::{Ellipsoid64, Error};

use output::{warn, write_atomic, Failure};
use report::{CandidateJson, EllipsoidJson, Provenance, Report};

/// Largest statistical slack granted to point files: `1 + 3·STAT_TOL` sits
/// at the hard norm cap.
const STAT_TOL: f64 = 0.05;
/// Below this residual a point file is treated as noise-free.
const EXACT_RESIDUAL: f64 = 1e-9;
const DEFAULT_RESOLUTION: usize = 32;
/// Semiaxes shorter than this make the mesh degenerate.
const FLAT: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "qmem",
    version,
    about = "Channel ellipsoids and quantum-memory certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report geometry and memory metrics for a channel spec (JSON).
    Analyze {
        spec: PathBuf,
        /// Bisection width for the memory robustness.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit an ellipsoid to measured output Bloch vectors (CSV) and report
    /// every consistent Choi state.
    Fit {
        points: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        degeneracy_tol: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the fitted ellipsoid as an OBJ or JSON mesh.
        #[arg(long)]
        mesh: Option<PathBuf>,
    },
    /// Run a memory circuit and tomograph its output qubit.
    Simulate {
        #[arg(long)]
        preset: String,
        /// Circuit angle, e.g. `pi/2` or `0.609pi`.
        #[arg(long, value_parser = angle::parse_angle, allow_hyphen_values = true)]
        theta: f64,
        /// Single input `theta,psi`; the 26-point grid when absent.
        #[arg(long, value_parser = angle::parse_input, allow_hyphen_values = true)]
        input: Option<(f64, f64)>,
        /// Shots per Pauli basis; exact expectation values when absent.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate, fit and report over a list of circuit angles (CSV).
    Sweep {
        #[arg(long)]
        preset: String,
        /// Comma-separated circuit angles.
        #[arg(long, allow_hyphen_values = true)]
        thetas: String,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Triangulate the ellipsoid of a report or channel spec.
    Mesh {
        source: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// `.json` for the JSON mesh, anything else for OBJ.
        #[arg(long)]
        out: PathBuf,
        /// Add the unit Bloch sphere as a second object.
        #[arg(long)]
        with_sphere: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { spec, tol, out } => analyze(&spec, tol, &out),
        Command::Fit {
            points,
            degeneracy_tol,
            tol,
            out,
            mesh,
        } => fit(&points, degeneracy_tol, tol, &out, mesh.as_deref()),
        Command::Simulate {
            preset,
            theta,
            input,
            shots,
            seed,
            out,
        } => simulate(&preset, theta, input, shots, seed, &out),
        Command::Sweep {
            preset,
            thetas,
            shots,
            seed,
            tol,
            out,
        } => run_sweep(&preset, &thetas, shots, seed, tol, &out),
        Command::Mesh {
            source,
            resolution,
            out,
            with_sphere,
        } => write_mesh(&source, resolution, &out, with_sphere),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            f.report();
            ExitCode::from(f.code)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn analyze(spec_path: &Path, tol: f64, out: &Path) -> Result<(), Failure> {
    let spec = ChannelSpec::from_json(&read_text(spec_path)?).map_err(Failure::input)?;
    let choi = spec.to_kraus::<f64>().map_err(Failure::input)?.choi();
    let e = ellipsoid_of_channel(&choi.pauli_form())?;
    let metrics = memory_report(&choi, &ReportOptions::default().with_tol(tol))?;
    let report = Report::new(
        EllipsoidJson::new(&e, is_flat(&e)),
        vec![CandidateJson::new(&choi, e.chirality(), Some(&metrics))],
        Provenance {
            mode: "analytic".into(),
            preset: spec.name.clone(),
            ..Provenance::default()
        },
    );
    write_atomic(out, |w| Ok(w.write_all(report.to_json().as_bytes())?))
}

fn fit(points_path: &Path, degeneracy_tol: f64, tol: f64, out: &Path, mesh_out: Option<&Path>) -> Result<(), Failure> {
    let file = fs::File::open(points_path).map_err(|e| Failure::usage(format!("{}: {e}", points_path.display())))?;
    let points = read_points::<f64, _>(file, STAT_TOL).map_err(Failure::input)?;
    let opts = FitOptions {
        degeneracy_tol,
        ..FitOptions::default()
    };
    let fit = fit_ellipsoid(&points, &opts)?;
    let e = fit.ellipsoid;
    if fit.degenerate {
        warn("fitted ellipsoid is degenerate (a semiaxis collapsed to zero)");
    }
    if let Some(path) = mesh_out {
        emit_mesh(&e, DEFAULT_RESOLUTION, path, false)?;
    }
    let noise_free = fit.residual <= EXACT_RESIDUAL && points.iter().all(|p| p.weight.is_none());
    let report_opts = if noise_free {
        ReportOptions::default()
    } else {
        ReportOptions::fitted()
    }
    .with_tol(tol);
    let provenance = Provenance {
        mode: "fitted".into(),
        fit_residual: Some(fit.residual),
        ..Provenance::default()
    };
    let geometry = EllipsoidJson::new(&e, fit.degenerate);

    let candidates = match reconstruct_choi_candidates(&e) {
        Ok(c) => c,
        Err(Error::NoValidCandidate) => {
            let report = Report::new(geometry, Vec::new(), provenance);
            write_atomic(out, |w| Ok(w.write_all(report.to_json().as_bytes())?))?;
            return Err(Failure::from(Error::NoValidCandidate));
        }
        Err(err) => return Err(err.into()),
    };
    if candidates.len() > 1 {
        warn("chirality is ambiguous; both candidates are reported");
    }
    let entries = candidates
        .iter()
        .map(|c| {
            let m = memory_report(&c.choi, &report_opts)?;
            Ok(CandidateJson::new(&c.choi, c.chirality, Some(&m)))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let report = Report::new(geometry, entries, provenance);
    write_atomic(out, |w| Ok(w.write_all(report.to_json().as_bytes())?))
}

fn simulate(
    preset: &str,
    theta: f64,
    input: Option<(f64, f64)>,
    shots: Option<u64>,
    seed: u64,
    out: &Path,
) -> Result<(), Failure> {
    let preset = CircuitPreset::from_name(preset).map_err(Failure::input)?;
    let inputs: Vec<(f64, f64)> = match input {
        Some(a) => vec![a],
        None => default_input_grid::<f64>().iter().map(input_angles).collect(),
    };
    let points = inputs
        .iter()
        .enumerate()
        .map(|(j, &angles)| {
            let reg = preset.run(angles, theta)?;
            let (mut p, _) = tomography(&reg, shots, task_seed(seed, 0, j))?;
            p.input_id = Some(j.to_string());
            Ok(p)
        })
        .collect::<qmem::Result<Vec<_>>>()
        .map_err(Failure::input)?;
    write_atomic(out, |w| write_points(&points, w))
}

fn run_sweep(preset: &str, thetas: &str, shots: Option<u64>, seed: u64, tol: f64, out: &Path) -> Result<(), Failure> {
    let preset = CircuitPreset::from_name(preset).map_err(Failure::input)?;
    let thetas = angle::parse_angle_list(thetas).map_err(Failure::usage)?;
    let grid = default_input_grid::<f64>();
    let result = sweep(preset, &thetas, &grid, shots, seed, tol).map_err(Failure::input)?;
    for note in &result.notes {
        warn(note);
    }
    for row in result.rows.iter().filter(|r| !r.flags.is_empty()) {
        warn(&format!("theta={}: {}", row.theta, row.flags.join(";")));
    }
    let any_ok = result.rows.iter().any(|r| r.succeeded());
    write_atomic(out, |w| write_sweep_csv(&result, w))?;
    if any_ok {
        Ok(())
    } else {
        Err(Failure::new(6, "no sweep row succeeded"))
    }
}

fn write_mesh(source: &Path, resolution: usize, out: &Path, with_sphere: bool) -> Result<(), Failure> {
    let text = read_text(source)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", source.display())))?;
    let e = if value.get("ellipsoid").is_some() {
        let report: Report = serde_json::from_value(value).map_err(|e| Failure::usage(format!("bad report: {e}")))?;
        report.ellipsoid.to_ellipsoid().map_err(Failure::usage)?
    } else {
        let spec = ChannelSpec::from_json(&text).map_err(Failure::input)?;
        let choi = spec.to_kraus::<f64>().map_err(Failure::input)?.choi();
        ellipsoid_of_channel(&choi.pauli_form()).map_err(Failure::input)?
    };
    if is_flat(&e) {
        warn("ellipsoid is degenerate; the mesh collapses onto a lower-dimensional set");
    }
    emit_mesh(&e, resolution, out, with_sphere)
}

fn is_flat(e: &Ellipsoid64) -> bool {
    e.semiaxes().iter().any(|&l| l < FLAT)
}

fn emit_mesh(e: &Ellipsoid64, resolution: usize, out: &Path, with_sphere: bool) -> Result<(), Failure> {
    let m = mesh(e, resolution).map_err(Failure::input)?;
    let sphere = if with_sphere {
        let unit = Ellipsoid64::from_center_shape([0.0; 3], qmem::numerics::real3::eye3(), e.chirality())?;
        Some(mesh(&unit, resolution)?)
    } else {
        None
    };
    let as_json = out.extension().is_some_and(|x| x.eq_ignore_ascii_case("json"));
    write_atomic(out, |w| {
        if as_json {
            let mut s = serde_json::to_string(&m.to_json(sphere.as_ref()))?;
            s.push('\n');
            Ok(w.write_all(s.as_bytes())?)
        } else {
            m.write_obj(sphere.as_ref(), &mut &mut *w)
        }
    })
}
