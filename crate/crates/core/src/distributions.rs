//! Simulation populations: samplers, distribution functions and exact ordinates.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use statrs::function::gamma::{gamma, gamma_lr, ln_gamma};

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::sample::Sample;

/// Standardised lower cut-off used in place of `-inf` for the skew-normal.
const SKEW_NORMAL_LOWER_Z: f64 = -40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Population {
    Weibull { shape: f64, scale: f64 },
    ChiSquare { df: f64 },
    SkewNormal { location: f64, scale: f64, shape: f64 },
}

pub(crate) fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Owen's T function `T(h, a)` by quadrature of its defining integral.
fn owens_t(h: f64, a: f64) -> Result<f64> {
    let hh = 0.5 * h * h;
    let v = integrate(
        |x| (-hh * (1.0 + x * x)).exp() / (1.0 + x * x),
        0.0,
        a,
        1e-17,
        1e-14,
    )?;
    Ok(v / (2.0 * PI))
}

impl Population {
    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        let p = Population::Weibull { shape, scale };
        p.validate()?;
        Ok(p)
    }

    pub fn chi_square(df: f64) -> Result<Self> {
        let p = Population::ChiSquare { df };
        p.validate()?;
        Ok(p)
    }

    pub fn skew_normal(location: f64, scale: f64, shape: f64) -> Result<Self> {
        let p = Population::SkewNormal {
            location,
            scale,
            shape,
        };
        p.validate()?;
        Ok(p)
    }

    /// The three populations of the simulation study.
    pub fn study_defaults() -> [Population; 3] {
        [
            Population::Weibull {
                shape: 1.0,
                scale: 2.0,
            },
            Population::ChiSquare { df: 3.0 },
            Population::SkewNormal {
                location: 1.0,
                scale: 3.0,
                shape: 5.0,
            },
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Population::Weibull { shape, scale } => shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite(),
            Population::ChiSquare { df } => df > 0.0 && df.is_finite(),
            Population::SkewNormal {
                location,
                scale,
                shape,
            } => scale > 0.0 && scale.is_finite() && location.is_finite() && shape.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid population parameters: {self}")))
        }
    }

    fn delta(shape: f64) -> f64 {
        shape / (1.0 + shape * shape).sqrt()
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Population::Weibull { shape, scale } => scale * gamma(1.0 + 1.0 / shape),
            Population::ChiSquare { df } => df,
            Population::SkewNormal {
                location,
                scale,
                shape,
            } => location + scale * Self::delta(shape) * (2.0 / PI).sqrt(),
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Population::Weibull { shape, scale } => {
                let g1 = gamma(1.0 + 1.0 / shape);
                scale * scale * (gamma(1.0 + 2.0 / shape) - g1 * g1)
            }
            Population::ChiSquare { df } => 2.0 * df,
            Population::SkewNormal { scale, shape, .. } => {
                let d = Self::delta(shape);
                scale * scale * (1.0 - 2.0 * d * d / PI)
            }
        }
    }

    /// Lower end of the integration range for the ordinate.
    pub fn support_lower(&self) -> f64 {
        match *self {
            Population::Weibull { .. } | Population::ChiSquare { .. } => 0.0,
            Population::SkewNormal {
                location, scale, ..
            } => location + SKEW_NORMAL_LOWER_Z * scale,
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Population::Weibull { shape, scale } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let z = x / scale;
                (shape / scale) * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
            }
            Population::ChiSquare { df } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let k = 0.5 * df;
                ((k - 1.0) * x.ln() - 0.5 * x - k * 2f64.ln() - ln_gamma(k)).exp()
            }
            Population::SkewNormal {
                location,
                scale,
                shape,
            } => {
                let z = (x - location) / scale;
                2.0 / scale * std_normal_pdf(z) * std_normal_cdf(shape * z)
            }
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(match *self {
            Population::Weibull { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x / scale).powf(shape)).exp_m1()
                }
            }
            Population::ChiSquare { df } => {
                if x <= 0.0 {
                    0.0
                } else {
                    gamma_lr(0.5 * df, 0.5 * x)
                }
            }
            Population::SkewNormal {
                location,
                scale,
                shape,
            } => {
                let z = (x - location) / scale;
                (std_normal_cdf(z) - 2.0 * owens_t(z, shape)?).clamp(0.0, 1.0)
            }
        })
    }

    /// `inf { x : F(x) >= p }`; closed form for Weibull, CDF bisection otherwise.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain {
                what: "probability",
                value: p,
            });
        }
        let (mut lo, mut hi) = match *self {
            Population::Weibull { shape, scale } => {
                return Ok(scale * (-(-p).ln_1p()).powf(1.0 / shape));
            }
            Population::ChiSquare { df } => {
                let mut hi = df + 10.0 * (2.0 * df).sqrt() + 10.0;
                while self.cdf(hi)? < p {
                    hi *= 2.0;
                }
                (0.0, hi)
            }
            Population::SkewNormal {
                location, scale, ..
            } => (
                location + SKEW_NORMAL_LOWER_Z * scale,
                location - SKEW_NORMAL_LOWER_Z * scale,
            ),
        };
        while hi - lo > 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid)? >= p {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// One draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Population::Weibull { shape, scale } => {
                // u in [0, 1) so 1 - u in (0, 1]
                let u: f64 = rng.random();
                scale * (-(-u).ln_1p()).powf(1.0 / shape)
            }
            Population::ChiSquare { df } => ChiSquared::new(df)
                .expect("validated degrees of freedom")
                .sample(rng),
            Population::SkewNormal {
                location,
                scale,
                shape,
            } => {
                let d = Self::delta(shape);
                let z0: f64 = rng.sample(StandardNormal);
                let z1: f64 = rng.sample(StandardNormal);
                location + scale * (d * z0.abs() + (1.0 - d * d).sqrt() * z1)
            }
        }
    }
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Population::Weibull { shape, scale } => write!(f, "Weibull({shape},{scale})"),
            Population::ChiSquare { df } => write!(f, "ChiSquare({df})"),
            Population::SkewNormal {
                location,
                scale,
                shape,
            } => write!(f, "SN({location},{scale},{shape})"),
        }
    }
}

/// Parses `weibull:a,b`, `chisq:k` or `skewnormal:mu,sigma,lambda`.
/// A bare family name selects the simulation-study parameters.
impl FromStr for Population {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, params) = match s.split_once(':') {
            Some((f, p)) => (f.trim().to_ascii_lowercase(), Some(p)),
            None => (s.trim().to_ascii_lowercase(), None),
        };
        let nums: Vec<f64> = match params {
            Some(p) => p
                .split(',')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|_| {
                        Error::InvalidParameter(format!("bad population parameter '{v}' in '{s}'"))
                    })
                })
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let [weibull, chi, sn] = Population::study_defaults();
        let arity = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "population '{family}' takes {k} parameter(s), got {}",
                    nums.len()
                )))
            }
        };
        match family.as_str() {
            "weibull" if params.is_none() => Ok(weibull),
            "weibull" => arity(2).and_then(|_| Population::weibull(nums[0], nums[1])),
            "chisq" | "chi2" | "chisquare" if params.is_none() => Ok(chi),
            "chisq" | "chi2" | "chisquare" => arity(1).and_then(|_| Population::chi_square(nums[0])),
            "skewnormal" | "sn" if params.is_none() => Ok(sn),
            "skewnormal" | "sn" => {
                arity(3).and_then(|_| Population::skew_normal(nums[0], nums[1], nums[2]))
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown population '{other}' (expected weibull, chisq or skewnormal)"
            ))),
        }
    }
}

/// Seed of one random stream.
///
/// The generator is ChaCha8 keyed by `master_seed`, with `stream_id`
/// selecting one of its 2^64 independent streams. Replication `r` of a
/// simulation uses stream `r`, so draws never depend on thread scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64) -> Self {
        Self {
            master_seed,
            stream_id: 0,
        }
    }

    pub fn stream(self, stream_id: u64) -> Self {
        Self { stream_id, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// `n` i.i.d. draws from `population` on the stream named by `seed`.
pub fn sample(population: &Population, n: usize, seed: SeedSpec) -> Result<Sample> {
    let mut rng = seed.rng();
    Sample::new((0..n).map(|_| population.draw(&mut rng)).collect())
}

/// Exact generalized Lorenz ordinate `E[X 1(X <= psi_t)]`.
pub fn true_ordinate(population: &Population, t: f64) -> Result<f64> {
    let psi = population.quantile(t)?;
    let lower = population.support_lower();
    integrate(|x| x * population.pdf(x), lower, psi, 1e-15, 1e-13)
}
