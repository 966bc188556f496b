//! `sparse-refine`: grids, ranking, the advise/ingest loop and benchmark
//! experiments from the command line.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 incomplete data, 4 I/O or
//! parse failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sparse_refine::benchmarks::{BenchmarkName, Objective};
use sparse_refine::grid::Dataset;
use sparse_refine::harness::io::{load_model, open_path, read_points_csv, write_path, write_ranked_csv};
use sparse_refine::harness::{
    advise, convergence_sweep, ingest_and_build, run_benchmark_experiment, write_base_grid, write_convergence_csv,
    ExperimentConfig, RefinementPlan,
};
use sparse_refine::refinement::Strategy;
use sparse_refine::{Error, Result};

#[derive(Parser)]
#[command(name = "sparse-refine", version, about = "Surrogate-informed sparse grid refinement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the level-w grid points as CSV.
    Grid(Common),
    /// Rank the level-(w+1) candidates of a benchmark or dataset.
    Rank(Common),
    /// Rank and select candidates of an external dataset; writes ranked.csv
    /// and selected.csv to --out.
    Advise(Common),
    /// Build the informed model from values at the selected points.
    Ingest {
        #[command(flatten)]
        common: Common,
        /// CSV with `point_id` and `value` columns.
        #[arg(long)]
        values: PathBuf,
    },
    /// Run a full analytic experiment.
    Benchmark(Common),
    /// Convergence sweep over growing prefixes of the ranking.
    Converge(Common),
    /// Evaluate a persisted model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// CSV with `x1..xd` columns.
        #[arg(long, conflicts_with = "point")]
        points: Option<PathBuf>,
        /// A single point `x1,...,xd`; repeatable.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        point: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Budget,
    Threshold,
    Elbow,
}

#[derive(Args)]
struct Common {
    /// JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    benchmark: Option<String>,
    /// Level-w dataset CSV (`point_id`, `value` columns).
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    level: Option<usize>,
    /// Box bounds `a1,b1,a2,b2,...`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    domain: Option<Vec<f64>>,
    /// Benchmark coefficient overrides.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coefficients: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    test_points: Option<usize>,
    #[arg(long)]
    sweep_stride: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(name) = &self.benchmark {
            c.benchmark = Some(name.parse::<BenchmarkName>()?);
        }
        if self.dataset.is_some() {
            c.dataset = self.dataset.clone();
        }
        if self.dim.is_some() {
            c.dimension = self.dim;
        }
        if let Some(level) = self.level {
            c.level = level;
        }
        if let Some(bounds) = &self.domain {
            if bounds.len() % 2 != 0 || bounds.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "--domain needs pairs a1,b1,...; got {} numbers",
                    bounds.len()
                )));
            }
            c.domain = Some(bounds.chunks(2).map(|p| (p[0], p[1])).collect());
        }
        if self.coefficients.is_some() {
            c.coefficients = self.coefficients.clone();
        }
        c.selection = self.strategy(c.selection)?;
        if let Some(e) = self.epsilon {
            c.epsilon = e;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(n) = self.test_points {
            c.test_points = n;
        }
        if let Some(s) = self.sweep_stride {
            c.sweep_stride = s;
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        c.validate()?;
        Ok(c)
    }

    fn strategy(&self, current: Strategy) -> Result<Strategy> {
        let kind = match (self.strategy, self.budget, self.tau) {
            (Some(kind), _, _) => kind,
            (None, Some(_), None) => StrategyArg::Budget,
            (None, None, Some(_)) => StrategyArg::Threshold,
            (None, None, None) => return Ok(current),
            (None, Some(_), Some(_)) => {
                return Err(Error::InvalidArgument("--budget and --tau need an explicit --strategy".into()))
            }
        };
        Ok(match kind {
            StrategyArg::Budget => match (self.budget, current) {
                (Some(budget), _) => Strategy::Budget { budget },
                (None, Strategy::Budget { budget }) => Strategy::Budget { budget },
                (None, _) => return Err(Error::InvalidArgument("--strategy budget needs --budget".into())),
            },
            StrategyArg::Threshold => match (self.tau, current) {
                (Some(tau), _) => Strategy::Threshold { tau },
                (None, Strategy::Threshold { tau }) => Strategy::Threshold { tau },
                (None, _) => Strategy::Threshold {
                    tau: sparse_refine::harness::DEFAULT_TAU,
                },
            },
            StrategyArg::Elbow => Strategy::Elbow,
        })
    }
}

fn stdout_error(e: std::io::Error) -> Error {
    Error::Io {
        path: "stdout".into(),
        source: e,
    }
}

/// Writes to `<out>/<name>` when `--out` is set, otherwise to stdout.
fn emit(out: Option<&Path>, name: &str, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(dir) => write_path(&dir.join(name), |w| write(w)),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush().map_err(stdout_error)
        }
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serialisable");
    writeln!(std::io::stdout(), "{text}").map_err(stdout_error)
}

fn base_dataset(config: &ExperimentConfig) -> Result<Dataset<f64>> {
    match (&config.dataset, config.benchmark) {
        (Some(_), _) => config.load_dataset(),
        (None, Some(_)) => {
            let spec = config.benchmark_spec()?;
            Ok(Dataset::sample(&config.base_grid()?, |x| spec.evaluate(x)))
        }
        (None, None) => Err(Error::InvalidArgument("need --dataset or --benchmark".into())),
    }
}

fn summary(plan: &RefinementPlan) {
    eprintln!(
        "{} candidates, {} selected ({})",
        plan.candidates(),
        plan.selection.len(),
        plan.selection.strategy
    );
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Grid(common) => {
            let c = common.config()?;
            emit(c.out.as_deref(), "grid.csv", |w| write_base_grid(w, &c))
        }
        Command::Rank(common) => {
            let c = common.config()?;
            let plan = RefinementPlan::new(c.base_grid()?, &base_dataset(&c)?, c.epsilon, c.selection)?;
            summary(&plan);
            emit(c.out.as_deref(), "ranked.csv", |w| {
                write_ranked_csv(w, &plan.ranked, plan.selection.len())
            })
        }
        Command::Advise(common) => {
            let c = common.config()?;
            let data = c.load_dataset()?;
            let plan = advise(&c, &data)?;
            summary(&plan);
            if c.out.is_none() {
                emit(None, "", |w| write_ranked_csv(w, &plan.ranked, plan.selection.len()))?;
            }
            Ok(())
        }
        Command::Ingest { common, values } => {
            let c = common.config()?;
            if c.out.is_none() {
                return Err(Error::InvalidArgument("ingest needs --out for model.json".into()));
            }
            let data = c.load_dataset()?;
            let ingested = ingest_and_build(&c, &data, &values)?;
            print_json(&ingested.report)
        }
        Command::Benchmark(common) => {
            let c = common.config()?;
            let report = run_benchmark_experiment(&c)?;
            print_json(&report)
        }
        Command::Converge(common) => {
            let c = common.config()?;
            let rows = convergence_sweep(&c)?;
            emit(c.out.as_deref(), "convergence.csv", |w| write_convergence_csv(w, &rows))
        }
        Command::Eval {
            model,
            points,
            point,
            out,
        } => {
            let model = load_model(&model)?;
            let d = model.dimension();
            let xs: Vec<Vec<f64>> = match points {
                Some(path) => read_points_csv(open_path(&path)?, d)?,
                None => {
                    let flat = point
                        .iter()
                        .map(|v| {
                            v.trim()
                                .parse::<f64>()
                                .map_err(|e| Error::InvalidArgument(format!("--point value {v:?}: {e}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if flat.is_empty() || flat.len() % d != 0 {
                        return Err(Error::InvalidArgument(format!(
                            "--point needs {d} coordinates per point, got {}",
                            flat.len()
                        )));
                    }
                    flat.chunks(d).map(<[f64]>::to_vec).collect()
                }
            };
            let values = model.evaluate_many(&xs)?;
            emit(out.as_deref(), "eval.csv", |w| {
                let header: Vec<String> = (1..=d).map(|k| format!("x{k}")).chain(["value".into()]).collect();
                writeln!(w, "{}", header.join(",")).map_err(stdout_error)?;
                for (x, v) in xs.iter().zip(values) {
                    let row: Vec<String> = x.iter().map(f64::to_string).chain([v.to_string()]).collect();
                    writeln!(w, "{}", row.join(",")).map_err(stdout_error)?;
                }
                Ok(())
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
