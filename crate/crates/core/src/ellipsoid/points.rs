//! `input_id,x,y,z[,weight]` point files.

use std::io::{Read, Write};

use super::BlochPoint;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reads points, accepting norms up to `1 + 3·stat_tol`.
pub fn read_points<T: Real, R: Read>(input: R, stat_tol: T) -> Result<Vec<BlochPoint<T>>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let has_weight = match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["input_id", "x", "y", "z"] => false,
        ["input_id", "x", "y", "z", "weight"] => true,
        _ => {
            return Err(Error::Parse(format!(
                "expected header input_id,x,y,z[,weight], got {}",
                header.join(",")
            )))
        }
    };
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = line + 2;
        let num = |i: usize| -> Result<T> {
            let field = record.get(i).unwrap_or("");
            field
                .parse::<f64>()
                .map(T::of)
                .map_err(|_| Error::Parse(format!("row {row}: bad number {field:?}")))
        };
        let id = record.get(0).filter(|s| !s.is_empty()).map(str::to_owned);
        let weight = match record.get(4) {
            Some(s) if has_weight && !s.is_empty() => Some(num(4)?),
            _ => None,
        };
        let r = [num(1)?, num(2)?, num(3)?];
        let p = BlochPoint::new(r, id, weight, stat_tol).map_err(|e| Error::BadInput(format!("row {row}: {e}")))?;
        points.push(p);
    }
    Ok(points)
}

/// Writes the weight column only when some point carries a weight.
pub fn write_points<T: Real, W: Write>(points: &[BlochPoint<T>], out: W) -> Result<()> {
    let with_weight = points.iter().any(|p| p.weight.is_some());
    let mut w = csv::Writer::from_writer(out);
    if with_weight {
        w.write_record(["input_id", "x", "y", "z", "weight"])?;
    } else {
        w.write_record(["input_id", "x", "y", "z"])?;
    }
    for p in points {
        let mut rec = vec![p.input_id.clone().unwrap_or_default()];
        rec.extend(p.r.iter().map(|x| x.as_f64().to_string()));
        if with_weight {
            rec.push(p.weight.map(|x| x.as_f64().to_string()).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
