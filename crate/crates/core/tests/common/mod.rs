//! Reference computations that share no code with the library: the log ratio
//! comes from maximising the concave dual `2 * sum ln(1 + lambda w)` by golden
//! section, and the scale factor, adjustment and transform are written out
//! directly from their definitions.

#![allow(dead_code)]

use lorenz_el::VariantKind;

pub struct Truncated {
    /// `x_i 1(x_i <= psi)` for every observation.
    pub z: Vec<f64>,
    pub psi: f64,
    pub estimate: f64,
    pub scale: f64,
}

pub fn truncate(data: &[f64], t: f64) -> Truncated {
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let r = n as f64 * t;
    let m = if (r - r.round()).abs() < 1e-9 { r.round() } else { r.ceil() } as usize;
    let psi = sorted[m.clamp(1, n) - 1];
    let z: Vec<f64> = data.iter().map(|&x| if x <= psi { x } else { 0.0 }).collect();
    let estimate = z.iter().sum::<f64>() / n as f64;
    let var = |v: &[f64]| {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64
    };
    let shifted: Vec<f64> = data.iter().map(|&x| if x <= psi { x - psi } else { 0.0 }).collect();
    Truncated {
        psi,
        estimate,
        scale: var(&z) / var(&shifted),
        z,
    }
}

/// `2 max_lambda sum ln(1 + lambda w)`, infinite when zero is not inside the hull.
pub fn dual_log_ratio(w: &[f64]) -> f64 {
    let max = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = w.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0 && min < 0.0) {
        return f64::INFINITY;
    }
    let f = |l: f64| {
        let mut s = 0.0;
        for &wi in w {
            let a = 1.0 + l * wi;
            if a <= 0.0 {
                return f64::NEG_INFINITY;
            }
            s += a.ln();
        }
        s
    };
    let (mut a, mut b) = (-1.0 / max, -1.0 / min);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..120 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    2.0 * fc.max(fd).max(f(0.0))
}

fn transform(l: f64, n: usize) -> f64 {
    l * (1.0 - l / n as f64).max(0.5)
}

/// Scaled statistic of `kind` at `theta`.
pub fn statistic(tr: &Truncated, kind: VariantKind, theta: f64) -> f64 {
    let n = tr.z.len();
    let mut w: Vec<f64> = tr.z.iter().map(|z| z - theta).collect();
    if matches!(kind, VariantKind::Ael | VariantKind::Tael) {
        let a = (0.5 * (n as f64).ln()).max(1.0);
        w.push(-a * (tr.estimate - theta));
        if tr.estimate == theta {
            return 0.0;
        }
    }
    let l = dual_log_ratio(&w);
    let l = match kind {
        VariantKind::Tel | VariantKind::Tael => transform(l, n),
        _ => l,
    };
    tr.scale * l
}

pub struct OracleInterval {
    pub lower: f64,
    pub upper: f64,
    /// The sub-level set reached the end of the scanned range on that side.
    pub lower_open: bool,
    pub upper_open: bool,
}

/// Dense grid over `[lo, hi]`, extreme members refined by bisection.
pub fn grid_interval(
    tr: &Truncated,
    kind: VariantKind,
    crit: f64,
    lo: f64,
    hi: f64,
    points: usize,
) -> OracleInterval {
    let inside = |theta: f64| statistic(tr, kind, theta) <= crit;
    let at = |i: usize| lo + (hi - lo) * i as f64 / points as f64;
    let members: Vec<usize> = (0..=points).filter(|&i| inside(at(i))).collect();
    let (first, last) = match (members.first(), members.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => {
            return OracleInterval {
                lower: tr.estimate,
                upper: tr.estimate,
                lower_open: false,
                upper_open: false,
            }
        }
    };
    let refine = |mut a: f64, mut b: f64| {
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            if inside(m) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    OracleInterval {
        lower: if first == 0 { lo } else { refine(at(first), at(first - 1)) },
        upper: if last == points { hi } else { refine(at(last), at(last + 1)) },
        lower_open: first == 0,
        upper_open: last == points,
    }
}

/// Search range matching the library's: the open hull for unadjusted
/// variants, ten hull widths either side of the estimate otherwise.
pub fn search_range(tr: &Truncated, kind: VariantKind) -> (f64, f64) {
    let lo = tr.z.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tr.z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = hi - lo;
    match kind {
        VariantKind::El | VariantKind::Tel => (lo + 1e-9 * width, hi - 1e-9 * width),
        _ => (tr.estimate - 10.0 * width, tr.estimate + 10.0 * width),
    }
}
