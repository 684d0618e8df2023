//! Monte-Carlo study of the point estimator and the four interval methods.
//!
//! Replication `r` of every cell draws its sample from stream `r` of the
//! configured seed, so all methods in a cell see identical data and results
//! do not depend on how rayon schedules the replications. Per-replication
//! outcomes are collected in index order and reduced sequentially.

use std::io::Write;

use rayon::prelude::*;

use crate::calibration::SignificanceLevel;
use crate::ci::IntervalProblem;
use crate::distributions::{sample, true_ordinate, Population, SeedSpec};
use crate::error::{Error, Result};
use crate::sample::{point_estimate, OrdinateQuery};
use crate::variants::VariantKind;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub population: Population,
    pub n_grid: Vec<usize>,
    pub t_grid: Vec<f64>,
    pub reps: usize,
    pub alpha: f64,
    pub methods: Vec<VariantKind>,
    pub seed: SeedSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            population: Population::study_defaults()[0],
            n_grid: vec![25, 50, 100, 150, 300, 500],
            t_grid: (1..=9).map(|i| i as f64 / 10.0).collect(),
            reps: 10_000,
            alpha: 0.05,
            methods: VariantKind::ALL.to_vec(),
            seed: SeedSpec::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.population.validate()?;
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        if self.n_grid.is_empty() || self.t_grid.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidParameter(
                "sample-size, t and method lists must be nonempty".into(),
            ));
        }
        if let Some(&n) = self.n_grid.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidParameter(format!("sample size {n} is below 2")));
        }
        for &t in &self.t_grid {
            OrdinateQuery::new(t)?;
        }
        SignificanceLevel::new(self.alpha)?;
        Ok(())
    }
}

/// Aggregates for one `(n, t, method)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub population: Population,
    pub n: usize,
    pub t: f64,
    pub method: VariantKind,
    pub reps: usize,
    /// Mean of `estimate - true ordinate`.
    pub bias: f64,
    pub mse: f64,
    /// `covered / (reps - failures)`.
    pub coverage: f64,
    pub mean_length: f64,
    /// Replications where no bracketed interval could be built.
    pub failures: usize,
}

#[derive(Debug, Clone, Copy)]
enum MethodOutcome {
    Interval { covered: bool, length: f64 },
    Failed,
}

struct Replication {
    estimate: f64,
    outcomes: Vec<MethodOutcome>,
}

fn replicate(
    cfg: &ExperimentConfig,
    n: usize,
    query: OrdinateQuery,
    level: SignificanceLevel,
    truth: f64,
    methods: &[VariantKind],
    rep: usize,
) -> Result<Replication> {
    let data = sample(&cfg.population, n, cfg.seed.stream(rep as u64))?;
    let estimate = point_estimate(&data, query);
    let outcomes = match IntervalProblem::new(&data, query, level) {
        Ok(problem) => methods
            .iter()
            .map(|&kind| {
                let built = problem
                    .interval(kind)
                    .and_then(|ci| ci.ensure_bracketed())
                    .and_then(|ci| Ok((ci, problem.covers(kind, truth)?)));
                match built {
                    Ok((ci, covered)) => MethodOutcome::Interval {
                        covered,
                        length: ci.length(),
                    },
                    Err(_) => MethodOutcome::Failed,
                }
            })
            .collect(),
        Err(_) => vec![MethodOutcome::Failed; methods.len()],
    };
    Ok(Replication { estimate, outcomes })
}

fn run_cell_with_truth(
    cfg: &ExperimentConfig,
    n: usize,
    t: f64,
    truth: f64,
    methods: &[VariantKind],
) -> Result<Vec<CellResult>> {
    let query = OrdinateQuery::new(t)?;
    let level = SignificanceLevel::new(cfg.alpha)?;
    let reps: Vec<Replication> = (0..cfg.reps)
        .into_par_iter()
        .map(|r| replicate(cfg, n, query, level, truth, methods, r))
        .collect::<Result<_>>()?;

    let total = cfg.reps as f64;
    let bias = reps.iter().map(|r| r.estimate - truth).sum::<f64>() / total;
    let mse = reps.iter().map(|r| (r.estimate - truth).powi(2)).sum::<f64>() / total;

    Ok(methods
        .iter()
        .enumerate()
        .map(|(m, &method)| {
            let (mut covered, mut length, mut ok, mut failures) = (0usize, 0.0, 0usize, 0usize);
            for rep in &reps {
                match rep.outcomes[m] {
                    MethodOutcome::Interval { covered: c, length: l } => {
                        ok += 1;
                        covered += c as usize;
                        length += l;
                    }
                    MethodOutcome::Failed => failures += 1,
                }
            }
            CellResult {
                population: cfg.population,
                n,
                t,
                method,
                reps: cfg.reps,
                bias,
                mse,
                coverage: covered as f64 / ok as f64,
                mean_length: length / ok as f64,
                failures,
            }
        })
        .collect())
}

/// All configured methods for one `(n, t)` cell, sharing the same draws.
pub fn run_cell_methods(cfg: &ExperimentConfig, n: usize, t: f64) -> Result<Vec<CellResult>> {
    cfg.validate()?;
    let truth = true_ordinate(&cfg.population, t)?;
    run_cell_with_truth(cfg, n, t, truth, &cfg.methods)
}

pub fn run_cell(cfg: &ExperimentConfig, n: usize, t: f64, method: VariantKind) -> Result<CellResult> {
    cfg.validate()?;
    let truth = true_ordinate(&cfg.population, t)?;
    Ok(run_cell_with_truth(cfg, n, t, truth, &[method])?.remove(0))
}

/// Every `(n, t, method)` combination, ordered by n, then t, then method.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<CellResult>> {
    run_experiment_with(cfg, |_, _| {})
}

/// As [`run_experiment`], calling `progress(done, total)` after each `(n, t)` cell.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    mut progress: impl FnMut(usize, usize),
) -> Result<Vec<CellResult>> {
    cfg.validate()?;
    let truths = cfg
        .t_grid
        .iter()
        .map(|&t| true_ordinate(&cfg.population, t))
        .collect::<Result<Vec<_>>>()?;
    let total = cfg.n_grid.len() * cfg.t_grid.len();
    let mut out = Vec::with_capacity(total * cfg.methods.len());
    let mut done = 0;
    for &n in &cfg.n_grid {
        for (&t, &truth) in cfg.t_grid.iter().zip(&truths) {
            out.extend(run_cell_with_truth(cfg, n, t, truth, &cfg.methods)?);
            done += 1;
            progress(done, total);
        }
    }
    Ok(out)
}

pub const CELL_CSV_HEADER: [&str; 9] = [
    "population",
    "n",
    "t",
    "method",
    "bias",
    "mse",
    "coverage",
    "mean_length",
    "failures",
];

/// Writes one row per cell; `raw` keeps full precision, otherwise 6 decimals.
pub fn write_cells_csv<W: Write>(cells: &[CellResult], writer: W, raw: bool) -> Result<()> {
    let io = |e: csv::Error| Error::File {
        path: "<output>".into(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CELL_CSV_HEADER).map_err(io)?;
    let num = |v: f64| if raw { format!("{v}") } else { format!("{v:.6}") };
    for c in cells {
        w.write_record([
            c.population.to_string(),
            c.n.to_string(),
            format!("{}", c.t),
            c.method.to_string(),
            num(c.bias),
            num(c.mse),
            num(c.coverage),
            num(c.mean_length),
            c.failures.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::File {
        path: "<output>".into(),
        message: e.to_string(),
    })?;
    Ok(())
}
