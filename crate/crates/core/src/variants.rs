//! Adjusted, transformed, and transformed-adjusted log-likelihood ratios.

use std::fmt;
use std::str::FromStr;

use crate::el::OrdinateProfile;
use crate::error::{Error, Result};
use crate::sample::{OrdinateQuery, Sample};

/// The four calibrations of the log-likelihood ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariantKind {
    El,
    Ael,
    Tel,
    Tael,
}

impl VariantKind {
    pub const ALL: [VariantKind; 4] = [
        VariantKind::El,
        VariantKind::Ael,
        VariantKind::Tel,
        VariantKind::Tael,
    ];

    /// Adjusted variants carry the pseudo-observation and are finite off the hull.
    pub fn is_adjusted(self) -> bool {
        matches!(self, VariantKind::Ael | VariantKind::Tael)
    }

    pub fn name(self) -> &'static str {
        match self {
            VariantKind::El => "EL",
            VariantKind::Ael => "AEL",
            VariantKind::Tel => "TEL",
            VariantKind::Tael => "TAEL",
        }
    }
}

impl fmt::Display for VariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "el" => Ok(VariantKind::El),
            "ael" => Ok(VariantKind::Ael),
            "tel" => Ok(VariantKind::Tel),
            "tael" => Ok(VariantKind::Tael),
            other => Err(Error::InvalidParameter(format!(
                "unknown method '{other}' (expected el, ael, tel or tael)"
            ))),
        }
    }
}

/// A nonnegative log-likelihood ratio and the calibration that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRatioValue {
    pub value: f64,
    pub kind: VariantKind,
    /// Multiplier of the underlying (possibly adjusted) EL problem.
    pub lambda: f64,
}

impl LogRatioValue {
    pub(crate) fn new(value: f64, kind: VariantKind, lambda: f64) -> Self {
        Self {
            value,
            kind,
            lambda,
        }
    }

    pub(crate) fn transformed(self, kind: VariantKind, n: usize, gamma: TelParameter) -> Self {
        Self {
            value: tel_transform(self.value, n, gamma),
            kind,
            lambda: self.lambda,
        }
    }
}

/// `a_n = max(1, ln(n) / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustmentFactor(f64);

impl AdjustmentFactor {
    pub fn for_size(n: usize) -> Self {
        Self((0.5 * (n as f64).ln()).max(1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Transform parameter `gamma` in `[0, 1]`; one half by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelParameter(f64);

impl TelParameter {
    pub fn new(gamma: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&gamma) {
            Ok(Self(gamma))
        } else {
            Err(Error::Domain {
                what: "transform parameter gamma",
                value: gamma,
            })
        }
    }

    pub fn gamma(self) -> f64 {
        self.0
    }
}

impl Default for TelParameter {
    fn default() -> Self {
        Self(0.5)
    }
}

/// Appends the pseudo value `-a * mean(w)`.
pub fn ael_augment(deviations: &[f64], a: AdjustmentFactor) -> Vec<f64> {
    let mean = deviations.iter().sum::<f64>() / deviations.len() as f64;
    let mut out = Vec::with_capacity(deviations.len() + 1);
    out.extend_from_slice(deviations);
    out.push(-a.value() * mean);
    out
}

/// `l * max(1 - l/n, 1 - gamma)`.
pub fn tel_transform(l: f64, n: usize, gamma: TelParameter) -> f64 {
    if l == 0.0 {
        return 0.0;
    }
    l * (1.0 - l / n as f64).max(1.0 - gamma.gamma())
}

/// Adjusted log-likelihood ratio; defined for every `theta` with a nonzero mean deviation.
pub fn log_ael_ratio(sample: &Sample, query: OrdinateQuery, theta: f64) -> Result<LogRatioValue> {
    OrdinateProfile::new(sample, query).log_ael_ratio(theta)
}

/// The transform applied to the adjusted ratio, dividing by the original `n`.
pub fn log_tael_ratio(sample: &Sample, query: OrdinateQuery, theta: f64) -> Result<LogRatioValue> {
    OrdinateProfile::new(sample, query).log_ratio(VariantKind::Tael, theta)
}

pub fn log_ratio(
    kind: VariantKind,
    sample: &Sample,
    query: OrdinateQuery,
    theta: f64,
) -> Result<LogRatioValue> {
    OrdinateProfile::new(sample, query).log_ratio(kind, theta)
}
