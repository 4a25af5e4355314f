//! Diagnostics, exit codes and atomic file output.

use std::io::{BufWriter, IsTerminal, Write};
use std::path::Path;

use qmem::Error;

pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn new(code: u8, msg: impl Into<String>) -> Self {
        Self { code, msg: msg.into() }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Self::new(2, msg)
    }

    /// Any library error raised while reading user input counts as bad input.
    pub fn input(e: Error) -> Self {
        Self::usage(e.to_string())
    }

    pub fn report(&self) {
        diag("error", 31, &self.msg);
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SolverNoConvergence { .. } => 3,
            Error::TooFewPoints { .. } | Error::DegenerateData(_) | Error::NotAnEllipsoid(_) => 4,
            Error::NoValidCandidate => 5,
            _ => 2,
        };
        Self::new(code, e.to_string())
    }
}

fn colored() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stderr().is_terminal()
}

fn diag(level: &str, color: u8, msg: &str) {
    if colored() {
        eprintln!("\x1b[1;{color}m{level}\x1b[0m: {msg}");
    } else {
        eprintln!("{level}: {msg}");
    }
}

pub fn warn(msg: &str) {
    diag("warning", 33, msg);
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed command leaves no partial output behind.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> qmem::Result<()>,
{
    let io_fail = |e: std::io::Error| Failure::usage(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_fail)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w).map_err(Failure::input)?;
        w.flush().map_err(io_fail)?;
    }
    tmp.persist(path).map_err(|e| io_fail(e.error))?;
    Ok(())
}
