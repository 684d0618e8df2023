//! Confidence intervals by inverting the scaled log-likelihood ratio.
//!
//! The interval is the sub-level set `{theta : scaled ratio <= chi2_crit}`.
//! Each endpoint is found by bisection between the point estimate (where the
//! statistic is zero) and an outer search boundary. The statistic is assumed
//! nondecreasing away from the estimate; every bisection step checks that the
//! new value sits between the values at the current bracket ends, and a
//! violation switches that side to a grid scan followed by local bisection.

use crate::calibration::{ScaleFactor, SignificanceLevel};
use crate::el::OrdinateProfile;
use crate::error::{Error, Result, Side};
use crate::sample::{OrdinateQuery, Sample};
use crate::variants::{TelParameter, VariantKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub estimate: f64,
    /// Nominal coverage `1 - alpha`.
    pub level: f64,
    pub kind: VariantKind,
    /// Statistic evaluations spent on both endpoints.
    pub iterations: usize,
    pub lower_bracketed: bool,
    pub upper_bracketed: bool,
}

impl ConfidenceInterval {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.lower <= theta && theta <= self.upper
    }

    pub fn is_bracketed(&self) -> bool {
        self.lower_bracketed && self.upper_bracketed
    }

    /// Turns an endpoint left at the search boundary into [`Error::BracketFailure`].
    pub fn ensure_bracketed(self) -> Result<Self> {
        if !self.lower_bracketed {
            return Err(Error::BracketFailure {
                kind: self.kind,
                side: Side::Lower,
                boundary: self.lower,
            });
        }
        if !self.upper_bracketed {
            return Err(Error::BracketFailure {
                kind: self.kind,
                side: Side::Upper,
                boundary: self.upper,
            });
        }
        Ok(self)
    }
}

pub fn interval_length(ci: &ConfidenceInterval) -> f64 {
    ci.length()
}

/// Search settings for [`IntervalProblem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionOptions {
    /// Bisection stops once the bracket is narrower than
    /// `rel_tol * max(|estimate|, hull width)`.
    pub rel_tol: f64,
    /// Points in the fallback grid scan.
    pub grid_points: usize,
    /// Adjusted variants search at most `cap * hull width` from the estimate.
    pub adjusted_cap: f64,
    /// EL/TEL endpoints stay `hull_margin * hull width` inside the hull.
    pub hull_margin: f64,
    pub gamma: TelParameter,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            grid_points: 2048,
            adjusted_cap: 10.0,
            hull_margin: 1e-12,
            gamma: TelParameter::default(),
        }
    }
}

/// A `(sample, t, alpha)` triple with its scale factor, ready to invert for any variant.
#[derive(Debug, Clone)]
pub struct IntervalProblem<'a> {
    profile: OrdinateProfile<'a>,
    scale: ScaleFactor,
    level: SignificanceLevel,
    options: InversionOptions,
}

struct SideResult {
    endpoint: f64,
    bracketed: bool,
    evals: usize,
}

impl<'a> IntervalProblem<'a> {
    pub fn new(sample: &'a Sample, query: OrdinateQuery, level: SignificanceLevel) -> Result<Self> {
        let profile = OrdinateProfile::new(sample, query);
        let scale = ScaleFactor::from_profile(&profile)?;
        Ok(Self {
            profile,
            scale,
            level,
            options: InversionOptions::default(),
        })
    }

    pub fn with_options(mut self, options: InversionOptions) -> Self {
        self.options = options;
        self
    }

    pub fn profile(&self) -> &OrdinateProfile<'a> {
        &self.profile
    }

    pub fn scale(&self) -> ScaleFactor {
        self.scale
    }

    pub fn level(&self) -> SignificanceLevel {
        self.level
    }

    pub fn options(&self) -> InversionOptions {
        self.options
    }

    /// Scaled statistic, `+inf` where the unadjusted ratio does not exist.
    pub fn statistic(&self, kind: VariantKind, theta: f64) -> Result<f64> {
        match self.profile.log_ratio_with(kind, theta, self.options.gamma) {
            Ok(l) if l.value.is_infinite() => Ok(f64::INFINITY),
            Ok(l) => Ok(self.scale.ratio * l.value),
            Err(Error::ConvexHullViolation) if !kind.is_adjusted() => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    }

    /// Whether `theta` belongs to the confidence set by definition.
    pub fn covers(&self, kind: VariantKind, theta: f64) -> Result<bool> {
        Ok(self.statistic(kind, theta)? <= self.level.chi2_crit)
    }

    /// `[inner, outer]` search segment for one side.
    pub fn search_boundary(&self, kind: VariantKind, side: Side) -> f64 {
        let est = self.profile.estimate();
        let (lo, hi) = self.profile.hull();
        let width = hi - lo;
        match (kind.is_adjusted(), side) {
            (true, Side::Lower) => est - self.options.adjusted_cap * width,
            (true, Side::Upper) => est + self.options.adjusted_cap * width,
            (false, Side::Lower) => lo + self.options.hull_margin * width,
            (false, Side::Upper) => hi - self.options.hull_margin * width,
        }
    }

    fn tolerance(&self) -> f64 {
        let (lo, hi) = self.profile.hull();
        let scale = self.profile.estimate().abs().max(hi - lo);
        self.options.rel_tol * if scale > 0.0 { scale } else { 1.0 }
    }

    fn excess(&self, kind: VariantKind, theta: f64) -> Result<f64> {
        Ok(self.statistic(kind, theta)? - self.level.chi2_crit)
    }

    fn search_side(&self, kind: VariantKind, side: Side) -> Result<SideResult> {
        let est = self.profile.estimate();
        let outer = self.search_boundary(kind, side);
        let mut evals = 1;
        let f_outer = self.excess(kind, outer)?;
        if f_outer <= 0.0 {
            return Ok(SideResult {
                endpoint: outer,
                bracketed: false,
                evals,
            });
        }
        let tol = self.tolerance();
        let (mut a, mut fa) = (est, -self.level.chi2_crit);
        let (mut b, mut fb) = (outer, f_outer);
        while (b - a).abs() > tol {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            let fm = self.excess(kind, m)?;
            evals += 1;
            let slack = 1e-9 * (1.0 + fm.abs());
            if fm < fa - slack || fm > fb + slack {
                let mut res = self.grid_side(kind, est, outer, tol)?;
                res.evals += evals;
                return Ok(res);
            }
            if fm <= 0.0 {
                (a, fa) = (m, fm);
            } else {
                (b, fb) = (m, fm);
            }
        }
        Ok(SideResult {
            endpoint: 0.5 * (a + b),
            bracketed: true,
            evals,
        })
    }

    /// Outermost grid point of the sub-level set, then plain bisection to the next point.
    fn grid_side(&self, kind: VariantKind, inner: f64, outer: f64, tol: f64) -> Result<SideResult> {
        let g = self.options.grid_points.max(2);
        let at = |i: usize| inner + (outer - inner) * i as f64 / g as f64;
        let mut last_in = 0;
        for i in 1..=g {
            if self.excess(kind, at(i))? <= 0.0 {
                last_in = i;
            }
        }
        let mut evals = g;
        if last_in == g {
            return Ok(SideResult {
                endpoint: outer,
                bracketed: false,
                evals,
            });
        }
        let (mut a, mut b) = (at(last_in), at(last_in + 1));
        while (b - a).abs() > tol {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            evals += 1;
            if self.excess(kind, m)? <= 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        Ok(SideResult {
            endpoint: 0.5 * (a + b),
            bracketed: true,
            evals,
        })
    }

    /// Both endpoints. Unbracketed endpoints are reported at the search
    /// boundary with their flag cleared; see [`ConfidenceInterval::ensure_bracketed`].
    pub fn interval(&self, kind: VariantKind) -> Result<ConfidenceInterval> {
        let lower = self.search_side(kind, Side::Lower)?;
        let upper = self.search_side(kind, Side::Upper)?;
        Ok(ConfidenceInterval {
            lower: lower.endpoint,
            upper: upper.endpoint,
            estimate: self.profile.estimate(),
            level: self.level.level(),
            kind,
            iterations: lower.evals + upper.evals,
            lower_bracketed: lower.bracketed,
            upper_bracketed: upper.bracketed,
        })
    }
}

/// Confidence interval for the generalized Lorenz ordinate at `query.t()`.
pub fn invert(
    kind: VariantKind,
    sample: &Sample,
    query: OrdinateQuery,
    level: SignificanceLevel,
) -> Result<ConfidenceInterval> {
    IntervalProblem::new(sample, query, level)?.interval(kind)
}
