//! Plug-in scale factor and the chi-square(1) reference quantile.
//!
//! The log-likelihood ratio converges to `(sigma_v^2 / sigma_p^2) * chi2_1`,
//! where `sigma_p^2 = Var(X 1(X <= psi_t))` and
//! `sigma_v^2 = Var((X - psi_t) 1(X <= psi_t))`. Both are estimated with
//! divisor n from the original observations only.

use crate::el::OrdinateProfile;
use crate::error::{Error, Result};
use crate::sample::{OrdinateQuery, Sample};
use crate::variants::VariantKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFactor {
    pub sigma_p_sq: f64,
    pub sigma_v_sq: f64,
    /// `sigma_p_sq / sigma_v_sq`.
    pub ratio: f64,
}

impl ScaleFactor {
    pub fn from_profile(profile: &OrdinateProfile<'_>) -> Result<Self> {
        let n = profile.n() as f64;
        let dropped = (profile.n() - profile.kept()) as f64;
        let kept = profile.kept_values();
        let psi = profile.quantile();

        // Values outside the kept set contribute exact zeros to both sums.
        let variance = |shift: f64| {
            let mean = kept.iter().map(|x| x - shift).sum::<f64>() / n;
            let ss: f64 = kept.iter().map(|x| (x - shift - mean).powi(2)).sum();
            (ss + dropped * mean * mean) / n
        };
        let sigma_p_sq = variance(0.0);
        let sigma_v_sq = variance(psi);
        if !(sigma_p_sq.is_finite() && sigma_v_sq.is_finite()) {
            return Err(Error::NonFinite("scale factor"));
        }
        if sigma_v_sq <= 0.0 {
            return Err(Error::DegenerateVariance);
        }
        Ok(Self {
            sigma_p_sq,
            sigma_v_sq,
            ratio: sigma_p_sq / sigma_v_sq,
        })
    }
}

pub fn scale_factor(sample: &Sample, query: OrdinateQuery) -> Result<ScaleFactor> {
    ScaleFactor::from_profile(&OrdinateProfile::new(sample, query))
}

/// A significance level with its chi-square(1) critical value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificanceLevel {
    pub alpha: f64,
    pub chi2_crit: f64,
}

impl SignificanceLevel {
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(Self {
            alpha,
            chi2_crit: chi2_crit(alpha)?,
        })
    }

    /// Nominal coverage `1 - alpha`.
    pub fn level(&self) -> f64 {
        1.0 - self.alpha
    }
}

/// Upper-`alpha` quantile of chi-square with one degree of freedom.
pub fn chi2_crit(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain {
            what: "significance level alpha",
            value: alpha,
        });
    }
    let z = normal_quantile(0.5 * alpha);
    Ok(z * z)
}

/// Standard normal quantile (Wichura's AS 241, about 1e-16 relative accuracy).
pub fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 8] = [
        3.387_132_872_796_366_608e0,
        1.331_416_678_917_843_774_5e2,
        1.971_590_950_306_551_442_7e3,
        1.373_169_376_550_946_112_5e4,
        4.592_195_393_154_987_145_7e4,
        6.726_577_092_700_870_085_3e4,
        3.343_057_558_358_812_810_5e4,
        2.509_080_928_730_122_672_7e3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.231_333_070_160_091_125_2e1,
        6.871_870_074_920_579_083e2,
        5.394_196_021_424_751_107_7e3,
        2.121_379_430_158_659_586_7e4,
        3.930_789_580_009_271_061e4,
        2.872_908_573_572_194_267_4e4,
        5.226_495_278_852_854_561e3,
    ];
    const C: [f64; 8] = [
        1.423_437_110_749_683_577_34e0,
        4.630_337_846_156_545_295_9e0,
        5.769_497_221_460_691_405_5e0,
        3.647_848_324_763_204_605_04e0,
        1.270_458_252_452_368_382_58e0,
        2.417_807_251_774_506_117_7e-1,
        2.272_384_498_926_918_458_33e-2,
        7.745_450_142_783_414_076_4e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.053_191_626_637_758_821_87e0,
        1.676_384_830_183_803_849_4e0,
        6.897_673_349_851_000_045_5e-1,
        1.481_039_764_274_800_745_9e-1,
        1.519_866_656_361_645_719_66e-2,
        5.475_938_084_995_344_946e-4,
        1.050_750_071_644_416_843_24e-9,
    ];
    const E: [f64; 8] = [
        6.657_904_643_501_103_777_2e0,
        5.463_784_911_164_114_369_9e0,
        1.784_826_539_917_291_335_8e0,
        2.965_605_718_285_048_912_3e-1,
        2.653_218_952_657_612_309_3e-2,
        1.242_660_947_388_078_438_6e-3,
        2.711_555_568_743_487_578_15e-5,
        2.010_334_399_292_288_132_65e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.998_322_065_558_879_376_9e-1,
        1.369_298_809_227_358_053_1e-1,
        1.487_536_129_085_061_485_25e-2,
        7.868_691_311_456_132_591e-4,
        1.846_318_317_510_054_681_8e-5,
        1.421_511_758_316_445_888_7e-7,
        2.044_263_103_389_939_785_64e-15,
    ];

    fn poly(c: &[f64; 8], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
    }

    if p.is_nan() || p <= 0.0 || p >= 1.0 {
        return match p {
            p if p == 0.0 => f64::NEG_INFINITY,
            p if p == 1.0 => f64::INFINITY,
            _ => f64::NAN,
        };
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let x = if r <= 5.0 {
        let r = r - 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        let r = r - 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

/// `(sigma_p^2 / sigma_v^2) * l_kind(theta)`.
pub fn scaled_statistic(
    kind: VariantKind,
    sample: &Sample,
    query: OrdinateQuery,
    theta: f64,
) -> Result<f64> {
    let profile = OrdinateProfile::new(sample, query);
    let scale = ScaleFactor::from_profile(&profile)?;
    Ok(scale.ratio * profile.log_ratio(kind, theta)?.value)
}
