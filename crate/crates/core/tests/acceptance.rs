//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.
//!
//! Criterion 9 needs the county income file: set `LORENZ_INCOME_CSV` to its
//! path and, if the column differs, `LORENZ_INCOME_COLUMN`.

mod common;

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use lorenz_el::sim::run_cell_methods;
use lorenz_el::{
    draw_sample, load_csv, run_cell, solve_lambda, true_ordinate, Error, ExperimentConfig,
    IntervalProblem, OrdinateQuery, Population, Sample, SeedSpec, SignificanceLevel, VariantKind,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Option<Verdict> {
    Some(Verdict { pass, detail })
}

fn weibull() -> Population {
    Population::study_defaults()[0]
}

fn bias_mse(population: Population, n: usize, t: f64, bias: (f64, f64), mse: f64) -> Option<Verdict> {
    let cfg = ExperimentConfig {
        population,
        reps: 10_000,
        seed: SeedSpec::new(2023),
        ..Default::default()
    };
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let cell = pool.install(|| run_cell(&cfg, n, t, VariantKind::El)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok_bias = (cell.bias - bias.0).abs() <= bias.1;
    let ok_mse = (cell.mse - mse).abs() <= 0.2 * mse;
    verdict(
        ok_bias && ok_mse,
        format!(
            "{population} n={n} t={t}: bias {:.5} (target {} +/- {}), mse {:.5} (target {mse} +/- 20%), {secs:.1}s on one thread",
            cell.bias, bias.0, bias.1, cell.mse
        ),
    )
}

fn criterion_1() -> Option<Verdict> {
    bias_mse(weibull(), 50, 0.5, (0.0109, 0.003), 0.0050)
}

fn criterion_2() -> Option<Verdict> {
    bias_mse(Population::study_defaults()[1], 500, 0.9, (0.0024, 0.002), 0.0072)
}

fn chi2_1_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else {
        libm::erf((0.5 * x).sqrt())
    }
}

fn criterion_3() -> Option<Verdict> {
    let (n, t, reps) = (500, 0.5, 5000);
    let pop = weibull();
    let truth = true_ordinate(&pop, t).unwrap();
    let q = OrdinateQuery::new(t).unwrap();
    let level = SignificanceLevel::new(0.05).unwrap();
    let seed = SeedSpec::new(31);
    let mut stats: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let s = draw_sample(&pop, n, seed.stream(r as u64)).unwrap();
            IntervalProblem::new(&s, q, level)
                .unwrap()
                .statistic(VariantKind::El, truth)
                .unwrap()
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    let p95 = stats[(0.95 * reps as f64).ceil() as usize - 1];
    let m = reps as f64;
    let ks = stats
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = chi2_1_cdf(x);
            (f - i as f64 / m).abs().max((f - (i + 1) as f64 / m).abs())
        })
        .fold(0.0, f64::max);
    verdict(
        (p95 - 3.84).abs() <= 0.25 && ks < 0.03,
        format!("95th percentile {p95:.4} (target 3.84 +/- 0.25), KS distance {ks:.4} (< 0.03)"),
    )
}

fn criterion_4() -> Option<Verdict> {
    let mut worst = Vec::new();
    let mut pass = true;
    for pop in Population::study_defaults() {
        let cfg = ExperimentConfig {
            population: pop,
            reps: 2000,
            seed: SeedSpec::new(4),
            ..Default::default()
        };
        let cells = run_cell_methods(&cfg, 300, 0.5).unwrap();
        for c in cells {
            let ok = (0.93..=0.975).contains(&c.coverage);
            pass &= ok;
            worst.push(format!("{pop} {} {:.4}{}", c.method, c.coverage, if ok { "" } else { " OUT" }));
        }
    }
    verdict(pass, format!("coverage at n=300, t=0.5: {}", worst.join(", ")))
}

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, stream: u64) -> (Sample, f64) {
    let pops = Population::study_defaults();
    let pop = pops[rng.random_range(0..pops.len())];
    let t = rng.random_range(0.05..0.95);
    (draw_sample(&pop, n, SeedSpec::new(55).stream(stream)).unwrap(), t)
}

fn criterion_5() -> Option<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let level = SignificanceLevel::new(0.05).unwrap();
    let (mut checked, mut degenerate, mut violations) = (0, 0, Vec::new());
    let mut stream = 0;
    while checked < 500 {
        let n = if checked % 2 == 0 { 25 } else { 100 };
        let (s, t) = random_dataset(&mut rng, n, stream);
        stream += 1;
        let problem = match IntervalProblem::new(&s, OrdinateQuery::new(t).unwrap(), level) {
            Ok(p) => p,
            Err(Error::DegenerateVariance) => {
                degenerate += 1;
                continue;
            }
            Err(e) => panic!("{e}"),
        };
        let (lo, hi) = problem.profile().hull();
        let tol = 2.0 * problem.options().rel_tol * problem.profile().estimate().abs().max(hi - lo);
        let ci = |k| problem.interval(k).unwrap();
        for (outer, inner) in [(VariantKind::Tel, VariantKind::El), (VariantKind::Tael, VariantKind::Ael)] {
            let (a, b) = (ci(outer), ci(inner));
            if a.lower > b.lower + tol || a.upper < b.upper - tol {
                violations.push(format!("n={n} t={t:.3} {outer}[{}, {}] vs {inner}[{}, {}]", a.lower, a.upper, b.lower, b.upper));
            }
        }
        checked += 1;
    }

    // coverage nesting over a spread of simulated cells
    let mut cells = 0;
    for pop in Population::study_defaults() {
        let cfg = ExperimentConfig {
            population: pop,
            n_grid: vec![25, 100],
            t_grid: vec![0.1, 0.5, 0.9],
            reps: 1000,
            seed: SeedSpec::new(6),
            ..Default::default()
        };
        let out = lorenz_el::run_experiment(&cfg).unwrap();
        for group in out.chunks(4) {
            let cov = |k: VariantKind| group.iter().find(|c| c.method == k).unwrap().coverage;
            cells += 1;
            if cov(VariantKind::Tael) < cov(VariantKind::Ael) || cov(VariantKind::Tel) < cov(VariantKind::El) {
                violations.push(format!("{pop} n={} t={} coverage not nested", group[0].n, group[0].t));
            }
        }
    }
    verdict(
        violations.is_empty(),
        format!(
            "{checked} datasets ({degenerate} degenerate redrawn), {cells} simulated cells, {} violations{}",
            violations.len(),
            violations.first().map(|v| format!(": {v}")).unwrap_or_default()
        ),
    )
}

fn criterion_6() -> Option<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut jobs = Vec::new();
    let mut stream = 0;
    while jobs.len() < 100 {
        let n = rng.random_range(10..=50);
        let alpha = [0.01, 0.05, 0.1][rng.random_range(0..3)];
        let (s, t) = random_dataset(&mut rng, n, 10_000 + stream);
        stream += 1;
        let q = OrdinateQuery::new(t).unwrap();
        if IntervalProblem::new(&s, q, SignificanceLevel::new(alpha).unwrap()).is_ok() {
            jobs.push((s, t, alpha));
        }
    }
    let failures: Vec<String> = jobs
        .par_iter()
        .flat_map_iter(|(s, t, alpha)| {
            let level = SignificanceLevel::new(*alpha).unwrap();
            let problem = IntervalProblem::new(s, OrdinateQuery::new(*t).unwrap(), level).unwrap();
            let tr = common::truncate(s.values(), *t);
            VariantKind::ALL.into_iter().filter_map(move |kind| {
                let ci = problem.interval(kind).unwrap();
                let (lo, hi) = common::search_range(&tr, kind);
                let o = common::grid_interval(&tr, kind, level.chi2_crit, lo, hi, 2000);
                let close = |a: f64, b: f64| (a - b).abs() <= 1e-4 * b.abs().max(o.upper - o.lower);
                let lower_ok = if o.lower_open { !ci.lower_bracketed } else { ci.lower_bracketed && close(ci.lower, o.lower) };
                let upper_ok = if o.upper_open { !ci.upper_bracketed } else { ci.upper_bracketed && close(ci.upper, o.upper) };
                (!(lower_ok && upper_ok)).then(|| {
                    format!(
                        "n={} t={t:.3} alpha={alpha} {kind}: [{}, {}] vs oracle [{}, {}]",
                        s.len(), ci.lower, ci.upper, o.lower, o.upper
                    )
                })
            })
        })
        .collect();
    verdict(
        failures.is_empty(),
        format!(
            "400 intervals on 100 datasets, {} mismatches beyond 1e-4 relative{}",
            failures.len(),
            failures.first().map(|v| format!(": {v}")).unwrap_or_default()
        ),
    )
}

fn random_vector(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.random_range(2..=200);
    let scale = 10f64.powi(rng.random_range(-6..=6));
    let heavy = rng.random_bool(0.3);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(-1.0..1.0);
            let v = if heavy { u / (1.0 - u.abs()).max(1e-6) } else { u };
            scale * v
        })
        .collect()
}

fn criterion_7() -> Option<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut solved, mut worst_ratio, mut problems) = (0, 0.0f64, Vec::new());
    while solved < 10_000 {
        let mut w = random_vector(&mut rng);
        // a few vectors with one dominant outlier or a lone sign
        match solved % 10 {
            0 => w[0] = -w[0].abs() * 1e3,
            1 => {
                for x in w.iter_mut() {
                    *x = x.abs();
                }
                w[0] = -w[0].max(1e-12);
            }
            _ => {}
        }
        let (min, max) = w.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        if !(min < 0.0 && max > 0.0) {
            continue;
        }
        solved += 1;
        let sol = match solve_lambda(&w) {
            Ok(s) => s,
            Err(e) => {
                problems.push(format!("error {e} on vector of length {}", w.len()));
                continue;
            }
        };
        let g: f64 = w.iter().map(|x| x / (1.0 + sol.lambda * x)).sum();
        let bound = 1e-10 * (1.0 + w.iter().fold(0.0f64, |m, x| m.max(x.abs())));
        worst_ratio = worst_ratio.max(g.abs() / bound);
        if g.abs() > bound || w.iter().any(|x| 1.0 + sol.lambda * x <= 0.0) {
            problems.push(format!("residual {g:e} (bound {bound:e}) at length {}", w.len()));
        }
    }
    let mut one_signed = 0;
    for i in 0..2000 {
        let mut w = random_vector(&mut rng);
        for x in w.iter_mut() {
            *x = if i % 2 == 0 { x.abs() } else { -x.abs() };
        }
        if i % 3 == 0 {
            w[0] = 0.0;
        }
        one_signed += 1;
        if !matches!(solve_lambda(&w), Err(Error::ConvexHullViolation)) {
            problems.push("one-signed vector accepted".into());
        }
    }
    verdict(
        problems.is_empty(),
        format!(
            "{solved} hull vectors, worst |g|/bound {worst_ratio:.2e}; {one_signed} one-signed vectors rejected; {} problems{}",
            problems.len(),
            problems.first().map(|v| format!(": {v}")).unwrap_or_default()
        ),
    )
}

fn criterion_8() -> Option<Verdict> {
    let mut worst = 0.0f64;
    for i in 1..=9 {
        let t = i as f64 / 10.0;
        let exact = 2.0 - 2.0 * (1.0 - t) * (1.0 - (1.0 - t).ln());
        worst = worst.max((true_ordinate(&weibull(), t).unwrap() - exact).abs());
    }
    verdict(worst <= 1e-8, format!("max |error| over t=0.1..0.9 is {worst:.2e} (<= 1e-8)"))
}

fn criterion_9() -> Option<Verdict> {
    let path = std::env::var("LORENZ_INCOME_CSV").ok()?;
    let column = std::env::var("LORENZ_INCOME_COLUMN").unwrap_or_else(|_| "Median_Household_Income_2020".into());
    let sample = match load_csv(Path::new(&path), &column, None).and_then(|t| t.sample(None)) {
        Ok(s) => s,
        Err(e) => return verdict(false, format!("cannot load {path}: {e}")),
    };
    let level = SignificanceLevel::new(0.05).unwrap();
    let problem = IntervalProblem::new(&sample, OrdinateQuery::new(0.5).unwrap(), level).unwrap();
    let el = problem.interval(VariantKind::El).unwrap();
    let tael = problem.interval(VariantKind::Tael).unwrap();
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-3 * b.abs();
    let estimate = format!("{:.3}", el.estimate);
    let pass = estimate == "23514.140"
        && near(el.lower, 23312.6016)
        && near(el.upper, 23715.7678)
        && near(tael.length(), 1100.1697);
    verdict(
        pass,
        format!(
            "n={} estimate {estimate}, EL [{:.4}, {:.4}], TAEL length {:.4}",
            sample.len(),
            el.lower,
            el.upper,
            tael.length()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Option<Verdict>); 9] = [
        ("bias and MSE, Weibull", criterion_1),
        ("bias and MSE, chi-square(3)", criterion_2),
        ("scaled EL statistic is chi-square(1)", criterion_3),
        ("coverage bands", criterion_4),
        ("interval and coverage nesting", criterion_5),
        ("bisection matches grid oracle", criterion_6),
        ("multiplier solver contract", criterion_7),
        ("closed-form Weibull ordinate", criterion_8),
        ("income data reproduction", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Some(v) => {
                failed += !v.pass as usize;
                println!(
                    "criterion {}: {} {name}: {} [{:.1}s]",
                    i + 1,
                    if v.pass { "PASS" } else { "FAIL" },
                    v.detail,
                    start.elapsed().as_secs_f64()
                );
            }
            None => println!("criterion {}: SKIP {name}: LORENZ_INCOME_CSV not set", i + 1),
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
