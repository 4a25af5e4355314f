//! Angle literals: `0.5`, `pi`, `-pi/2`, `3pi/4`, `0.609pi`, `3*pi/4`.

use std::f64::consts::PI;

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let text: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let bad = || format!("cannot read angle {s:?}");
    if text.is_empty() {
        return Err(bad());
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d.parse::<f64>().map_err(|_| bad())?)),
        None => (text.as_str(), None),
    };
    let value = match num.strip_suffix("pi").or_else(|| num.strip_suffix('π')) {
        Some(coef) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let k = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            k * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let value = match den {
        Some(0.0) => return Err(bad()),
        Some(d) => value / d,
        None => value,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Comma-separated angles; an empty list is an error.
pub fn parse_angle_list(s: &str) -> Result<Vec<f64>, String> {
    let items: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if items.is_empty() {
        return Err("empty angle list".into());
    }
    items.into_iter().map(parse_angle).collect()
}

/// `"θ,ψ"` input angles.
pub fn parse_input(s: &str) -> Result<(f64, f64), String> {
    match parse_angle_list(s)?[..] {
        [t, p] => Ok((t, p)),
        _ => Err(format!("input must be \"theta,psi\", got {s:?}")),
    }
}
