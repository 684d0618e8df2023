//! Observations, sample quantiles and the empirical generalized Lorenz ordinate.

use crate::error::{Error, Result};

/// An immutable, sorted set of at least two finite observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewObservations(values.len()));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteObservation { index, value });
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    /// Observations in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.len() - 1]
    }

    /// Every observation multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Sample::new(self.values.iter().map(|v| v * factor).collect())
    }

    /// Number of observations `<= bound`.
    pub(crate) fn count_le(&self, bound: f64) -> usize {
        self.values.partition_point(|&v| v <= bound)
    }
}

/// A probability level `t` in the open unit interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct OrdinateQuery(f64);

impl OrdinateQuery {
    pub fn new(t: f64) -> Result<Self> {
        if t > 0.0 && t < 1.0 {
            Ok(Self(t))
        } else {
            Err(Error::InvalidOrdinate(t))
        }
    }

    pub fn t(self) -> f64 {
        self.0
    }
}

/// One-based rank `ceil(n t)`, clamped to `[1, n]`.
///
/// Products that land within a few ulps of an integer are treated as that
/// integer, so `t = 0.7, n = 10` selects the 7th order statistic.
pub(crate) fn order_rank(n: usize, t: f64) -> usize {
    let x = n as f64 * t;
    let nearest = x.round();
    let k = if (x - nearest).abs() <= 8.0 * f64::EPSILON * nearest.max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    (k as usize).clamp(1, n)
}

/// The left-continuous inverse of the empirical CDF: `X_(ceil(n t))`.
pub fn sample_quantile(sample: &Sample, query: OrdinateQuery) -> f64 {
    sample.values[order_rank(sample.len(), query.t()) - 1]
}

/// Empirical generalized Lorenz ordinate `(1/n) sum X_i 1(X_i <= psi_t)`.
pub fn point_estimate(sample: &Sample, query: OrdinateQuery) -> f64 {
    let psi = sample_quantile(sample, query);
    let kept = sample.count_le(psi);
    sample.values[..kept].iter().sum::<f64>() / sample.len() as f64
}

/// Truncated values and their deviations from a candidate ordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatingValues {
    pub quantile: f64,
    /// `X_i` when `X_i <= quantile`, otherwise 0, in sample order.
    pub truncated: Vec<f64>,
    pub theta: f64,
    /// `truncated[i] - theta`.
    pub deviations: Vec<f64>,
}

pub fn estimating_values(sample: &Sample, query: OrdinateQuery, theta: f64) -> EstimatingValues {
    let quantile = sample_quantile(sample, query);
    let truncated: Vec<f64> = sample
        .values
        .iter()
        .map(|&x| if x <= quantile { x } else { 0.0 })
        .collect();
    let deviations = truncated.iter().map(|v| v - theta).collect();
    EstimatingValues {
        quantile,
        truncated,
        theta,
        deviations,
    }
}
