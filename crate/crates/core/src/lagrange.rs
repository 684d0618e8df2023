//! Lagrange multiplier of the empirical-likelihood mean constraint.
//!
//! For deviations `w_1..w_n` the multiplier solves
//! `g(lambda) = (1/n) sum w_i / (1 + lambda w_i) = 0` on the open interval
//! `(-1/max w, -1/min w)`, where every `1 + lambda w_i` is positive. `g` is
//! strictly decreasing there and runs from `+inf` to `-inf`, so the root is
//! unique and a bracket is always available. The solver works on deviations
//! divided by `max |w_i|`, which makes it exactly equivariant under
//! power-of-two rescaling.

use crate::error::{Error, Result};

const MAX_ITER: usize = 400;
const RESIDUAL_TOL: f64 = 1e-13;

/// Multiplier, implied weights and the residual of the estimating equation.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeSolution {
    pub lambda: f64,
    pub weights: Vec<f64>,
    /// `(1/n) sum w_i / (1 + lambda w_i)` at `lambda`.
    pub residual: f64,
}

/// Root of the grouped problem: deviation `w` repeated `count` times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Root {
    pub lambda: f64,
    pub residual: f64,
    /// `2 sum count * log(1 + lambda w)`.
    pub log_ratio: f64,
}

pub(crate) fn solve_grouped(points: &[(f64, f64)]) -> Result<Root> {
    let scale = points.iter().fold(0.0_f64, |m, &(w, _)| m.max(w.abs()));
    if !scale.is_finite() {
        return Err(Error::NonFinite("estimating values"));
    }
    if scale == 0.0 {
        // All deviations vanish: uniform weights already satisfy the constraint.
        return Ok(Root {
            lambda: 0.0,
            residual: 0.0,
            log_ratio: 0.0,
        });
    }

    let total: f64 = points.iter().map(|&(_, c)| c).sum();
    let unit: Vec<(f64, f64)> = points.iter().map(|&(w, c)| (w / scale, c)).collect();
    let (umin, umax) = unit
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(u, _)| {
            (lo.min(u), hi.max(u))
        });
    if !(umin < 0.0 && umax > 0.0) {
        return Err(Error::ConvexHullViolation);
    }

    let eval = |mu: f64| {
        let (mut g, mut dg, mut mag) = (0.0, 0.0, 0.0);
        for &(u, c) in &unit {
            let r = u / (1.0 + mu * u);
            g += c * r;
            dg -= c * r * r;
            mag += c * r.abs();
        }
        (g / total, dg / total, mag / total)
    };

    let (mut lo, mut hi) = (-1.0 / umax, -1.0 / umin);
    let mut mu = 0.0;
    let mut g;
    let mut iter = 0;
    loop {
        let (gv, dg, mag) = eval(mu);
        g = gv;
        if !g.is_finite() {
            return Err(Error::NonFinite("Lagrange multiplier"));
        }
        if g == 0.0 || g.abs() <= RESIDUAL_TOL * mag.max(1.0) {
            break;
        }
        if g > 0.0 {
            lo = mu;
        } else {
            hi = mu;
        }
        iter += 1;
        if iter >= MAX_ITER || hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
        let newton = mu - g / dg;
        mu = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }

    let mut log_ratio = 0.0;
    for &(u, c) in &unit {
        let z = mu * u;
        if !(z > -1.0) {
            return Err(Error::NonFinite("Lagrange multiplier"));
        }
        log_ratio += c * z.ln_1p();
    }
    Ok(Root {
        lambda: mu / scale,
        residual: g * scale,
        log_ratio: 2.0 * log_ratio,
    })
}

/// Solves for the multiplier given one deviation per observation.
///
/// Fails with [`Error::ConvexHullViolation`] unless the deviations contain
/// both a strictly positive and a strictly negative entry. An all-zero
/// vector is the degenerate case and yields `lambda = 0` with uniform weights.
pub fn solve_lambda(deviations: &[f64]) -> Result<LagrangeSolution> {
    if deviations.is_empty() {
        return Err(Error::ConvexHullViolation);
    }
    let points: Vec<(f64, f64)> = deviations.iter().map(|&w| (w, 1.0)).collect();
    let root = solve_grouped(&points)?;
    let n = deviations.len() as f64;
    let weights = deviations
        .iter()
        .map(|&w| 1.0 / (n * (1.0 + root.lambda * w)))
        .collect();
    Ok(LagrangeSolution {
        lambda: root.lambda,
        weights,
        residual: root.residual,
    })
}

/// `2 sum log(1 + lambda w_i)` at the multiplier solving the constraint.
pub fn log_ratio_from_deviations(deviations: &[f64]) -> Result<f64> {
    let points: Vec<(f64, f64)> = deviations.iter().map(|&w| (w, 1.0)).collect();
    Ok(solve_grouped(&points)?.log_ratio)
}
