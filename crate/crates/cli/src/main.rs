use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lorenz_el::data::{write_curve_csv, ALL_GROUPS};
use lorenz_el::sim::{run_experiment_with, write_cells_csv};
use lorenz_el::{
    curve, load_csv, Error, ErrorClass, ExperimentConfig, IntervalProblem, OrdinateQuery,
    Population, SeedSpec, SignificanceLevel, VariantKind,
};

mod lists;

use lists::{parse_methods, parse_population, parse_sizes, parse_t_list};

#[derive(Parser, Debug)]
#[command(name = "lorenz-el", version, about = "Empirical-likelihood intervals for generalized Lorenz ordinates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Point estimates and confidence intervals for one income column.
    Ci(CiArgs),
    /// Monte-Carlo bias, MSE, coverage and mean length over a grid of (n, t).
    Simulate(SimulateArgs),
    /// Empirical Lorenz and generalized Lorenz curves, one CSV per group.
    Curve(CurveArgs),
}

#[derive(Args, Debug)]
struct CiArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    value_column: String,
    /// Comma list or `start..end[:step]`.
    #[arg(long, value_parser = parse_t_list, default_value = "0.1..0.9")]
    t: ::std::vec::Vec<f64>,
    #[arg(long, value_parser = parse_methods, default_value = "el,ael,tel,tael")]
    methods: ::std::vec::Vec<VariantKind>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Full precision instead of 4 decimals.
    #[arg(long)]
    raw: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// `weibull[:shape,scale]`, `chisq[:k]` or `skewnormal[:mu,sigma,lambda]`.
    #[arg(long, value_parser = parse_population, default_value = "weibull")]
    population: Population,
    #[arg(long, value_parser = parse_sizes, default_value = "25,50,100,150,300,500")]
    n: ::std::vec::Vec<usize>,
    #[arg(long, value_parser = parse_t_list, default_value = "0.1..0.9")]
    t: ::std::vec::Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, value_parser = parse_methods, default_value = "el,ael,tel,tael")]
    methods: ::std::vec::Vec<VariantKind>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    raw: bool,
    /// No progress lines on standard error.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    value_column: String,
    #[arg(long)]
    group_column: Option<String>,
    /// Comma list of group keys; `ALL` uses every row.
    #[arg(long, value_delimiter = ',', default_value = ALL_GROUPS)]
    groups: Vec<String>,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Directory receiving `lorenz_<group>.csv` files.
    #[arg(long)]
    output_dir: PathBuf,
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    let io = |path: &Path, e: std::io::Error| Error::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    match output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| io(path, e)),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| io(Path::new("<stdout>"), e)),
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::File {
        path: "<output>".into(),
        message: e.to_string(),
    }
}

fn run_ci(args: CiArgs) -> Result<(), Error> {
    let level = SignificanceLevel::new(args.alpha)?;
    let queries = args
        .t
        .iter()
        .map(|&t| OrdinateQuery::new(t))
        .collect::<Result<Vec<_>, _>>()?;
    let sample = load_csv(&args.input, &args.value_column, None)?.sample(None)?;

    let num = |v: f64| if args.raw { format!("{v}") } else { format!("{v:.4}") };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "estimate", "method", "lower", "upper", "length"])
        .map_err(csv_error)?;
    for q in queries {
        let problem = IntervalProblem::new(&sample, q, level)?;
        for &kind in &args.methods {
            let ci = problem.interval(kind)?.ensure_bracketed()?;
            w.write_record([
                format!("{}", q.t()),
                num(ci.estimate),
                kind.to_string(),
                num(ci.lower),
                num(ci.upper),
                num(ci.length()),
            ])
            .map_err(csv_error)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| csv_error(e.into_error().into()))?;
    emit(args.output.as_deref(), &bytes)
}

fn run_simulate(args: SimulateArgs) -> Result<(), Error> {
    let cfg = ExperimentConfig {
        population: args.population,
        n_grid: args.n,
        t_grid: args.t,
        reps: args.reps,
        alpha: args.alpha,
        methods: args.methods,
        seed: SeedSpec::new(args.seed),
    };
    let quiet = args.quiet;
    let cells = run_experiment_with(&cfg, |done, total| {
        if !quiet {
            eprintln!("{}: cell {done}/{total}", cfg.population);
        }
    })?;
    let mut bytes = Vec::new();
    write_cells_csv(&cells, &mut bytes, args.raw)?;
    emit(args.output.as_deref(), &bytes)
}

/// Keeps file names portable whatever the group keys contain.
fn file_stem(group: &str) -> String {
    group
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

fn run_curve(args: CurveArgs) -> Result<(), Error> {
    if !(args.step > 0.0 && args.step < 1.0) {
        return Err(Error::InvalidParameter(format!("step must lie in (0, 1), got {}", args.step)));
    }
    let count = (1.0 / args.step - 1e-9).ceil() as usize;
    let grid: Vec<f64> = (1..count)
        .map(|i| (i as f64 * args.step * 1e12).round() / 1e12)
        .collect();
    if grid.is_empty() {
        return Err(Error::InvalidParameter(format!("step {} leaves no grid points", args.step)));
    }
    let table = load_csv(&args.input, &args.value_column, args.group_column.as_deref())?;
    if table.dropped > 0 {
        eprintln!("warning: dropped {} rows with missing or non-numeric values", table.dropped);
    }
    let dir_error = |e: std::io::Error| Error::File {
        path: args.output_dir.clone(),
        message: e.to_string(),
    };
    std::fs::create_dir_all(&args.output_dir).map_err(dir_error)?;
    for group in &args.groups {
        let group = group.trim();
        let selected = if group == ALL_GROUPS { None } else { Some(group) };
        if selected.is_some() && args.group_column.is_none() {
            return Err(Error::InvalidParameter(format!(
                "group '{group}' requested without --group-column"
            )));
        }
        let points = curve(&table.sample(selected)?, &grid)?;
        let mut bytes = Vec::new();
        write_curve_csv(&points, &mut bytes)?;
        let path = args.output_dir.join(format!("lorenz_{}.csv", file_stem(group)));
        emit(Some(&path), &bytes)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ci(args) => run_ci(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Curve(args) => run_curve(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (label, code) = match e.class() {
                ErrorClass::Usage => ("usage error", 2),
                ErrorClass::Data => ("data error", 3),
                ErrorClass::Numerical => ("numerical error", 4),
            };
            eprintln!("lorenz-el: {label}: {e}");
            ExitCode::from(code)
        }
    }
}
