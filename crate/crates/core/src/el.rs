//! Profile empirical log-likelihood ratio for a generalized Lorenz ordinate.

use crate::error::{Error, Result};
use crate::lagrange::{solve_grouped, Root};
use crate::sample::{order_rank, OrdinateQuery, Sample};
use crate::variants::{AdjustmentFactor, LogRatioValue, TelParameter, VariantKind};

/// Everything about `(sample, t)` that does not depend on the candidate ordinate.
///
/// Truncated values are `X_(1..=kept)` followed by `n - kept` zeros, so each
/// ratio evaluation only touches `kept + 1` distinct deviations.
#[derive(Debug, Clone)]
pub struct OrdinateProfile<'a> {
    sample: &'a Sample,
    t: f64,
    quantile: f64,
    kept: usize,
    estimate: f64,
    hull: (f64, f64),
}

impl<'a> OrdinateProfile<'a> {
    pub fn new(sample: &'a Sample, query: OrdinateQuery) -> Self {
        let values = sample.values();
        let n = values.len();
        let quantile = values[order_rank(n, query.t()) - 1];
        let kept = sample.count_le(quantile);
        let estimate = values[..kept].iter().sum::<f64>() / n as f64;
        let mut hull = (values[0], values[kept - 1]);
        if kept < n {
            hull = (hull.0.min(0.0), hull.1.max(0.0));
        }
        Self {
            sample,
            t: query.t(),
            quantile,
            kept,
            estimate,
            hull,
        }
    }

    pub fn sample(&self) -> &'a Sample {
        self.sample
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n(&self) -> usize {
        self.sample.len()
    }

    pub fn quantile(&self) -> f64 {
        self.quantile
    }

    /// Number of observations at or below the quantile.
    pub fn kept(&self) -> usize {
        self.kept
    }

    /// The point estimate of the ordinate.
    pub fn estimate(&self) -> f64 {
        self.estimate
    }

    /// `(min V, max V)` over the truncated values.
    pub fn hull(&self) -> (f64, f64) {
        self.hull
    }

    pub(crate) fn kept_values(&self) -> &'a [f64] {
        &self.sample.values()[..self.kept]
    }

    fn deviations(&self, theta: f64, pseudo: Option<f64>) -> Vec<(f64, f64)> {
        let n = self.n();
        let mut points = Vec::with_capacity(self.kept + 2);
        points.extend(self.kept_values().iter().map(|&x| (x - theta, 1.0)));
        if self.kept < n {
            points.push((-theta, (n - self.kept) as f64));
        }
        if let Some(w) = pseudo {
            points.push((w, 1.0));
        }
        points
    }

    fn check_theta(theta: f64) -> Result<()> {
        if theta.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite("candidate ordinate"))
        }
    }

    /// `2 sum log(1 + lambda W_i)` over the n original deviations.
    pub fn log_el_ratio(&self, theta: f64) -> Result<LogRatioValue> {
        Self::check_theta(theta)?;
        let root = if theta == self.estimate {
            Root {
                lambda: 0.0,
                residual: 0.0,
                log_ratio: 0.0,
            }
        } else {
            solve_grouped(&self.deviations(theta, None))?
        };
        Ok(LogRatioValue::new(root.log_ratio.max(0.0), VariantKind::El, root.lambda))
    }

    /// Adjusted ratio over the n deviations plus the pseudo value `-a_n * mean(W)`.
    pub fn log_ael_ratio(&self, theta: f64) -> Result<LogRatioValue> {
        Self::check_theta(theta)?;
        if theta == self.estimate {
            return Ok(LogRatioValue::new(0.0, VariantKind::Ael, 0.0));
        }
        let a = AdjustmentFactor::for_size(self.n());
        let mean = self.estimate - theta;
        let root = solve_grouped(&self.deviations(theta, Some(-a.value() * mean)))?;
        Ok(LogRatioValue::new(root.log_ratio.max(0.0), VariantKind::Ael, root.lambda))
    }

    pub fn log_ratio(&self, kind: VariantKind, theta: f64) -> Result<LogRatioValue> {
        self.log_ratio_with(kind, theta, TelParameter::default())
    }

    /// As [`log_ratio`](Self::log_ratio) with an explicit transform parameter.
    pub fn log_ratio_with(
        &self,
        kind: VariantKind,
        theta: f64,
        gamma: TelParameter,
    ) -> Result<LogRatioValue> {
        let n = self.n();
        match kind {
            VariantKind::El => self.log_el_ratio(theta),
            VariantKind::Ael => self.log_ael_ratio(theta),
            VariantKind::Tel => {
                let base = self.log_el_ratio(theta)?;
                Ok(base.transformed(VariantKind::Tel, n, gamma))
            }
            VariantKind::Tael => {
                let base = self.log_ael_ratio(theta)?;
                Ok(base.transformed(VariantKind::Tael, n, gamma))
            }
        }
    }
}

/// Profile empirical log-likelihood ratio at `theta`.
///
/// Fails with [`Error::ConvexHullViolation`] unless `theta` lies strictly
/// between the smallest and largest truncated values.
pub fn log_el_ratio(sample: &Sample, query: OrdinateQuery, theta: f64) -> Result<LogRatioValue> {
    OrdinateProfile::new(sample, query).log_el_ratio(theta)
}
