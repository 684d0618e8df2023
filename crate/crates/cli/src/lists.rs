//! Parsers for comma lists and `start..end[:step]` ranges given on the command line.

use lorenz_el::{Population, VariantKind};

/// Rounds grid points so that `0.1 + 2 * 0.1` prints as `0.3`.
fn tidy(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

fn number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("'{}' is not a number", s.trim()))
}

/// `0.1,0.5,0.9` or `0.1..0.9` (step 0.1) or `0.05..0.95:0.05`.
pub fn parse_t_list(s: &str) -> Result<Vec<f64>, String> {
    let values = match s.split_once("..") {
        Some((start, rest)) => {
            let (end, step) = match rest.split_once(':') {
                Some((end, step)) => (end, number(step)?),
                None => (rest, 0.1),
            };
            let (start, end) = (number(start)?, number(end)?);
            if !(step > 0.0) || end < start {
                return Err(format!("empty range '{s}'"));
            }
            let count = ((end - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| tidy(start + i as f64 * step)).collect()
        }
        None => s.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
    };
    if let Some(t) = values.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(format!("t = {t} is outside (0, 1)"));
    }
    Ok(values)
}

pub fn parse_methods(s: &str) -> Result<Vec<VariantKind>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let kind = part
            .parse::<VariantKind>()
            .map_err(|_| format!("unknown method '{}' (expected el, ael, tel or tael)", part.trim()))?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    Ok(out)
}

pub fn parse_sizes(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("'{}' is not a sample size", p.trim()))
        })
        .collect()
}

pub fn parse_population(s: &str) -> Result<Population, String> {
    s.parse::<Population>().map_err(|e| e.to_string())
}
