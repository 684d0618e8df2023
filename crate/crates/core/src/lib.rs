//! Empirical-likelihood confidence intervals for generalized Lorenz ordinates.
//!
//! The generalized Lorenz ordinate at `t` is `theta(t) = E[X 1(X <= psi_t)]`,
//! the mean of incomes truncated at the `t`-quantile. This crate computes its
//! point estimate and confidence intervals from four calibrations of the
//! empirical log-likelihood ratio:
//!
//! * `EL`: the profile empirical log-likelihood ratio;
//! * `AEL`: the adjusted ratio with one pseudo-observation, defined for every `theta`;
//! * `TEL`: the transformed ratio `l * max(1 - l/n, 1/2)`;
//! * `TAEL`: the transform applied to the adjusted ratio.
//!
//! Each ratio is multiplied by a plug-in scale factor and compared with the
//! chi-square(1) critical value. The crate also carries the Monte-Carlo harness
//! and the income-data pipeline used to study the methods.
//!
//! ```
//! use lorenz_el::{invert, OrdinateQuery, Sample, SignificanceLevel, VariantKind};
//!
//! let incomes = Sample::new(vec![12.0, 30.5, 18.2, 44.0, 25.1, 9.9, 61.3, 27.7]).unwrap();
//! let t = OrdinateQuery::new(0.5).unwrap();
//! let level = SignificanceLevel::new(0.05).unwrap();
//! let ci = invert(VariantKind::Tael, &incomes, t, level).unwrap();
//! assert!(ci.lower <= ci.estimate && ci.estimate <= ci.upper);
//! ```

pub mod calibration;
pub mod ci;
pub mod data;
pub mod distributions;
pub mod el;
pub mod error;
pub mod lagrange;
mod quadrature;
pub mod sample;
pub mod sim;
pub mod variants;

pub use calibration::{chi2_crit, scale_factor, scaled_statistic, ScaleFactor, SignificanceLevel};
pub use ci::{interval_length, invert, ConfidenceInterval, IntervalProblem, InversionOptions};
pub use data::{curve, load_csv, CurvePoints, IncomeTable};
pub use distributions::{sample as draw_sample, true_ordinate, Population, SeedSpec};
pub use el::{log_el_ratio, OrdinateProfile};
pub use error::{Error, ErrorClass, Result, Side};
pub use lagrange::{solve_lambda, LagrangeSolution};
pub use sample::{estimating_values, point_estimate, sample_quantile, EstimatingValues, OrdinateQuery, Sample};
pub use sim::{run_cell, run_experiment, CellResult, ExperimentConfig};
pub use variants::{
    ael_augment, log_ael_ratio, log_ratio, log_tael_ratio, tel_transform, AdjustmentFactor,
    LogRatioValue, TelParameter, VariantKind,
};
