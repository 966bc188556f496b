use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::io::{
    coordinate_header, open_path, read_dataset_csv, save_model, write_grid_csv, write_hybrid_csv, write_path,
    write_ranked_csv,
};
use super::metrics::{error_metrics, histogram, percentage_error, ErrorMetrics, Histogram, HISTOGRAM_BINS};
use super::rng::{sample_test_points, DEFAULT_SEED};
use crate::benchmarks::{BenchmarkName, BenchmarkSpec, Counted, Objective};
use crate::error::{Error, Result};
use crate::grid::{Dataset, Domain, Interpolant, SparseGrid};
use crate::refinement::{candidate_set, indicator_pair, rank_candidates, RankedCandidate, SelectionResult, Strategy, DEFAULT_EPSILON};
use crate::surrogate::{build_informed, hybrid_values, true_values_at, HybridDataset, Provenance};

pub const DEFAULT_LEVEL: usize = 2;
pub const DEFAULT_TEST_POINTS: usize = 200;
pub const DEFAULT_TAU: f64 = 0.2;
const SLICE_RESOLUTION_1D: usize = 101;
const SLICE_RESOLUTION_2D: usize = 41;

/// A response-surface cut: one or two free axes (1-based), every other
/// coordinate held at `fixed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSpec {
    pub axes: Vec<usize>,
    /// Full point supplying the held coordinates; the domain centre when absent.
    #[serde(default)]
    pub fixed: Option<Vec<f64>>,
    #[serde(default)]
    pub resolution: Option<usize>,
}

/// Everything needed to run an experiment. The JSON config file has exactly
/// these fields; every field is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub benchmark: Option<BenchmarkName>,
    /// Level-`w` dataset CSV, for external data.
    pub dataset: Option<PathBuf>,
    pub dimension: Option<usize>,
    pub domain: Option<Vec<(f64, f64)>>,
    pub coefficients: Option<Vec<f64>>,
    /// Base level `w`; the target is `w + 1`.
    pub level: usize,
    pub selection: Strategy,
    pub epsilon: f64,
    pub test_points: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Build every `sweep_stride`-th informed model in the convergence sweep.
    pub sweep_stride: usize,
    pub slices: Vec<SliceSpec>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            benchmark: None,
            dataset: None,
            dimension: None,
            domain: None,
            coefficients: None,
            level: DEFAULT_LEVEL,
            selection: Strategy::Threshold { tau: DEFAULT_TAU },
            epsilon: DEFAULT_EPSILON,
            test_points: DEFAULT_TEST_POINTS,
            seed: DEFAULT_SEED,
            out: None,
            sweep_stride: 1,
            slices: Vec::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn for_benchmark(name: BenchmarkName, selection: Strategy) -> Self {
        Self {
            benchmark: Some(name),
            selection,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("config json", e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.level == 0 {
            return Err(Error::invalid(
                "base level must be >= 1 so that the level w-1 interpolant exists",
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        if self.test_points == 0 {
            return Err(Error::invalid("test_points must be >= 1"));
        }
        if self.sweep_stride == 0 {
            return Err(Error::invalid("sweep_stride must be >= 1"));
        }
        if let Strategy::Threshold { tau } = self.selection {
            if !(0.0..=1.0).contains(&tau) {
                return Err(Error::invalid(format!("tau must lie in [0, 1], got {tau}")));
            }
        }
        Ok(())
    }

    /// The configured benchmark with coefficient and domain overrides applied.
    pub fn benchmark_spec(&self) -> Result<BenchmarkSpec<f64>> {
        let name = self
            .benchmark
            .ok_or_else(|| Error::invalid("no benchmark configured"))?;
        let dimension = self.dimension.or(self.domain.as_ref().map(Vec::len));
        let mut spec = BenchmarkSpec::by_name(name, dimension)?;
        if let Some(c) = &self.coefficients {
            spec = spec.with_coefficients(c.clone())?;
        }
        if let Some(d) = &self.domain {
            spec = spec.with_domain(Domain::new(d.clone())?)?;
        }
        Ok(spec)
    }

    /// Explicit domain, else the benchmark's, else the unit cube of the
    /// configured dimension.
    pub fn resolved_domain(&self) -> Result<Domain<f64>> {
        let domain = match (&self.domain, self.benchmark, self.dimension) {
            (Some(d), _, _) => Domain::new(d.clone())?,
            (None, Some(_), _) => self.benchmark_spec()?.domain().clone(),
            (None, None, Some(d)) => Domain::cube(0.0, 1.0, d)?,
            (None, None, None) => {
                return Err(Error::invalid("a domain, benchmark or dimension is required"))
            }
        };
        match self.dimension {
            Some(d) if d != domain.dimension() => Err(Error::invalid(format!(
                "dimension {d} does not match the {}-dimensional domain",
                domain.dimension()
            ))),
            _ => Ok(domain),
        }
    }

    pub fn base_grid(&self) -> Result<SparseGrid<f64>> {
        self.validate()?;
        let domain = self.resolved_domain()?;
        SparseGrid::build(domain.dimension(), self.level, domain)
    }

    pub fn load_dataset(&self) -> Result<Dataset<f64>> {
        let path = self
            .dataset
            .as_ref()
            .ok_or_else(|| Error::invalid("no dataset configured"))?;
        read_dataset_csv(open_path(path)?, &path.display().to_string())
    }

    /// Configured slices, or by default: a line along every axis through
    /// the centre and the `(x1, x2)` plane with the other coordinates at
    /// their lower bounds. Ishigami holds `x3` at its upper bound `π` in both.
    fn resolved_slices(&self, domain: &Domain<f64>) -> Vec<SliceSpec> {
        if !self.slices.is_empty() {
            return self.slices.clone();
        }
        let mut line: Vec<f64> = domain.intervals().iter().map(|(a, b)| 0.5 * (a + b)).collect();
        let mut plane: Vec<f64> = domain.intervals().iter().map(|(a, _)| *a).collect();
        if self.benchmark == Some(BenchmarkName::Ishigami) && line.len() == 3 {
            line[2] = domain.intervals()[2].1;
            plane = line.clone();
        }
        let mut slices: Vec<SliceSpec> = (1..=domain.dimension())
            .map(|k| SliceSpec {
                axes: vec![k],
                fixed: Some(line.clone()),
                resolution: None,
            })
            .collect();
        if domain.dimension() >= 2 {
            slices.push(SliceSpec {
                axes: vec![1, 2],
                fixed: Some(plane),
                resolution: None,
            });
        }
        slices
    }
}

/// Baseline, ranking and selection for one base dataset. Building a plan
/// never calls the underlying function.
#[derive(Clone, Debug)]
pub struct RefinementPlan {
    pub baseline: Interpolant<f64>,
    pub coarse: Interpolant<f64>,
    pub target_grid: SparseGrid<f64>,
    pub ranked: Vec<RankedCandidate<f64>>,
    pub selection: SelectionResult<f64>,
}

impl RefinementPlan {
    /// `data_w` must cover `grid_w` exactly; a value for a point outside
    /// the grid is an [`Error::UnknownPoint`].
    pub fn new(grid_w: SparseGrid<f64>, data_w: &Dataset<f64>, epsilon: f64, strategy: Strategy) -> Result<Self> {
        if let Some((id, _)) = data_w.iter().find(|(id, _)| !grid_w.contains(id)) {
            return Err(Error::UnknownPoint(id.to_string()));
        }
        let target_grid = grid_w.finer()?;
        let base = Interpolant::new(grid_w, data_w)?;
        let (baseline, coarse) = indicator_pair(&base)?;
        let candidates = candidate_set(baseline.grid(), &target_grid)?;
        if candidates.is_empty() {
            return Err(Error::invalid("the target grid adds no candidate points"));
        }
        let ranked = rank_candidates(&candidates, &baseline, &coarse, epsilon)?;
        let selection = strategy.select(&ranked)?;
        Ok(Self {
            baseline,
            coarse,
            target_grid,
            ranked,
            selection,
        })
    }

    pub fn candidates(&self) -> usize {
        self.ranked.len()
    }

    /// Hybrid dataset and informed model from true values at the selected
    /// points.
    pub fn informed(&self, true_values: &Dataset<f64>) -> Result<(HybridDataset<f64>, Interpolant<f64>)> {
        let hybrid = hybrid_values(&self.target_grid, &self.selection.selected, true_values, &self.baseline)?;
        let model = build_informed(&hybrid, &self.target_grid)?;
        Ok((hybrid, model))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_refined: usize,
    pub max_abs_error: f64,
    pub rmse: f64,
    pub true_calls_cumulative: u64,
}

/// Informed models over growing prefixes of the ranking.
///
/// Row 0 is the baseline itself. Row `n` uses the top `n` candidates; the
/// last row uses all of them and so carries exactly the target data. Only
/// rows with `n` a multiple of `stride`, plus the last, are emitted.
pub fn sweep(
    plan: &RefinementPlan,
    f: impl Fn(&[f64]) -> f64,
    points: &[Vec<f64>],
    truths: &[f64],
    stride: usize,
) -> Result<Vec<ConvergenceRow>> {
    if stride == 0 {
        return Err(Error::invalid("sweep stride must be >= 1"));
    }
    let base_calls = plan.baseline.grid().len() as u64;
    let row = |n: usize, model: &Interpolant<f64>| -> Result<ConvergenceRow> {
        let m = error_metrics(&model.evaluate_many(points)?, truths)?;
        Ok(ConvergenceRow {
            n_refined: n,
            max_abs_error: m.max_abs,
            rmse: m.rmse,
            true_calls_cumulative: base_calls + n as u64,
        })
    };
    let mut rows = vec![row(0, &plan.baseline)?];
    let mut hybrid = hybrid_values(&plan.target_grid, &[], &Dataset::new(), &plan.baseline)?;
    let total = plan.ranked.len();
    for (i, c) in plan.ranked.iter().enumerate() {
        hybrid.set_true(&c.point.id, f(&c.point.coords))?;
        let n = i + 1;
        if n % stride == 0 || n == total {
            rows.push(row(n, &build_informed(&hybrid, &plan.target_grid)?)?);
        }
    }
    Ok(rows)
}

/// Per-model error summary on the test set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelSummary {
    pub max_abs_error: f64,
    pub rmse: f64,
    pub max_percentage_error: f64,
    pub true_calls: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestRecord {
    pub coords: Vec<f64>,
    pub truth: f64,
    pub baseline: f64,
    pub informed: f64,
    pub target: f64,
    pub pct_baseline: f64,
    pub pct_informed: f64,
    pub pct_target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub benchmark: BenchmarkName,
    pub dimension: usize,
    pub level: usize,
    pub strategy: Strategy,
    pub epsilon: f64,
    pub seed: u64,
    pub test_points: usize,
    pub candidates: usize,
    pub selected: usize,
    pub baseline: ModelSummary,
    pub informed: ModelSummary,
    pub target: ModelSummary,
    pub informed_rmse_not_worse: bool,
    #[serde(skip)]
    pub records: Vec<TestRecord>,
    #[serde(skip)]
    pub histograms: Vec<(&'static str, Histogram)>,
    #[serde(skip)]
    pub convergence: Vec<ConvergenceRow>,
}

/// Models of a benchmark experiment with their true-call counts.
pub struct BenchmarkModels {
    pub spec: BenchmarkSpec<f64>,
    pub plan: RefinementPlan,
    pub hybrid: HybridDataset<f64>,
    pub informed: Interpolant<f64>,
    pub target: Interpolant<f64>,
    pub baseline_calls: u64,
    pub informed_calls: u64,
    pub target_calls: u64,
}

/// Builds baseline, informed and target models for the configured
/// benchmark, counting true evaluations per model.
pub fn build_benchmark_models(config: &ExperimentConfig) -> Result<BenchmarkModels> {
    let spec = config.benchmark_spec()?;
    let grid_w = config.base_grid()?;

    let base_counter = Counted::new(spec.clone());
    let data_w = Dataset::sample(&grid_w, |x| base_counter.call(x));
    let baseline_calls = base_counter.calls();
    let plan = RefinementPlan::new(grid_w, &data_w, config.epsilon, config.selection)?;
    debug_assert_eq!(base_counter.calls(), baseline_calls);

    let new_counter = Counted::new(spec.clone());
    let true_values = true_values_at(&plan.selection.selected, &plan.baseline, |x| new_counter.call(x));
    let (hybrid, informed) = plan.informed(&true_values)?;

    let target_counter = Counted::new(spec.clone());
    let target = Interpolant::from_fn(plan.target_grid.clone(), |x| target_counter.call(x))?;

    Ok(BenchmarkModels {
        baseline_calls,
        informed_calls: baseline_calls + new_counter.calls(),
        target_calls: target_counter.calls(),
        spec,
        plan,
        hybrid,
        informed,
        target,
    })
}

fn test_set(config: &ExperimentConfig, spec: &BenchmarkSpec<f64>) -> (Vec<Vec<f64>>, Vec<f64>) {
    let points = sample_test_points(spec.domain(), config.test_points, config.seed);
    let truths = points.iter().map(|x| spec.evaluate(x)).collect();
    (points, truths)
}

/// The convergence sweep for the configured benchmark.
pub fn convergence_sweep(config: &ExperimentConfig) -> Result<Vec<ConvergenceRow>> {
    let spec = config.benchmark_spec()?;
    let grid_w = config.base_grid()?;
    let data_w = Dataset::sample(&grid_w, |x| spec.evaluate(x));
    let plan = RefinementPlan::new(grid_w, &data_w, config.epsilon, config.selection)?;
    let (points, truths) = test_set(config, &spec);
    sweep(&plan, |x| spec.evaluate(x), &points, &truths, config.sweep_stride)
}

fn summarise(preds: &[f64], truths: &[f64], epsilon: f64, calls: u64) -> Result<(ModelSummary, Vec<f64>)> {
    let ErrorMetrics { max_abs, rmse } = error_metrics(preds, truths)?;
    let pct: Vec<f64> = preds
        .iter()
        .zip(truths)
        .map(|(p, t)| percentage_error(*p, *t, epsilon))
        .collect();
    let summary = ModelSummary {
        max_abs_error: max_abs,
        rmse,
        max_percentage_error: pct.iter().copied().fold(0.0, f64::max),
        true_calls: calls,
    };
    Ok((summary, pct))
}

/// Full analytic experiment. Writes artifacts to `config.out` when set.
pub fn run_benchmark_experiment(config: &ExperimentConfig) -> Result<ErrorReport> {
    let models = build_benchmark_models(config)?;
    let spec = &models.spec;
    let (points, truths) = test_set(config, spec);

    let baseline_pred = models.plan.baseline.evaluate_many(&points)?;
    let informed_pred = models.informed.evaluate_many(&points)?;
    let target_pred = models.target.evaluate_many(&points)?;
    let (baseline, pct_b) = summarise(&baseline_pred, &truths, config.epsilon, models.baseline_calls)?;
    let (informed, pct_i) = summarise(&informed_pred, &truths, config.epsilon, models.informed_calls)?;
    let (target, pct_t) = summarise(&target_pred, &truths, config.epsilon, models.target_calls)?;

    let records = (0..points.len())
        .map(|i| TestRecord {
            coords: points[i].clone(),
            truth: truths[i],
            baseline: baseline_pred[i],
            informed: informed_pred[i],
            target: target_pred[i],
            pct_baseline: pct_b[i],
            pct_informed: pct_i[i],
            pct_target: pct_t[i],
        })
        .collect();
    let histograms = vec![
        ("baseline", histogram(&pct_b, HISTOGRAM_BINS)?),
        ("informed", histogram(&pct_i, HISTOGRAM_BINS)?),
        ("target", histogram(&pct_t, HISTOGRAM_BINS)?),
    ];
    let convergence = sweep(&models.plan, |x| spec.evaluate(x), &points, &truths, config.sweep_stride)?;

    let report = ErrorReport {
        benchmark: spec.name(),
        dimension: spec.dimension(),
        level: config.level,
        strategy: config.selection,
        epsilon: config.epsilon,
        seed: config.seed,
        test_points: config.test_points,
        candidates: models.plan.candidates(),
        selected: models.plan.selection.len(),
        informed_rmse_not_worse: informed.rmse <= baseline.rmse,
        baseline,
        informed,
        target,
        records,
        histograms,
        convergence,
    };
    if let Some(out) = &config.out {
        write_experiment_artifacts(out, config, &report, &models)?;
    }
    Ok(report)
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::Writer::from_writer(out)
}

fn write_rows<W: Write>(out: W, header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(&header).map_err(|e| Error::parse("csv output", e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| Error::parse("csv output", e))?;
    }
    w.flush().map_err(|e| Error::io("csv output", e))
}

fn strings(values: &[f64]) -> impl Iterator<Item = String> + '_ {
    values.iter().map(|v| v.to_string())
}

pub fn write_errors_csv<W: Write>(out: W, report: &ErrorReport) -> Result<()> {
    let mut header = vec!["index".to_string()];
    header.extend(coordinate_header(report.dimension));
    header.extend(
        ["truth", "baseline", "informed", "target", "pct_baseline", "pct_informed", "pct_target"].map(String::from),
    );
    let rows = report.records.iter().enumerate().map(|(i, r)| {
        let mut row = vec![i.to_string()];
        row.extend(strings(&r.coords));
        row.extend(strings(&[
            r.truth,
            r.baseline,
            r.informed,
            r.target,
            r.pct_baseline,
            r.pct_informed,
            r.pct_target,
        ]));
        row
    });
    write_rows(out, header, rows)
}

/// `model,bin,lower,upper,count,density,fraction`; each model is binned
/// over its own `[0, max]`.
pub fn write_histogram_csv<W: Write>(out: W, histograms: &[(&str, Histogram)]) -> Result<()> {
    let header = ["model", "bin", "lower", "upper", "count", "density", "fraction"].map(String::from).to_vec();
    let rows = histograms.iter().flat_map(|(model, h)| {
        (0..h.counts.len()).map(move |b| {
            vec![
                model.to_string(),
                b.to_string(),
                h.edges[b].to_string(),
                h.edges[b + 1].to_string(),
                h.counts[b].to_string(),
                h.density[b].to_string(),
                h.fraction[b].to_string(),
            ]
        })
    });
    write_rows(out, header, rows)
}

pub fn write_convergence_csv<W: Write>(out: W, rows: &[ConvergenceRow]) -> Result<()> {
    let header = ["n_refined", "max_abs_error", "rmse", "true_calls_cumulative"].map(String::from).to_vec();
    let rows = rows.iter().map(|r| {
        vec![
            r.n_refined.to_string(),
            r.max_abs_error.to_string(),
            r.rmse.to_string(),
            r.true_calls_cumulative.to_string(),
        ]
    });
    write_rows(out, header, rows)
}

fn slice_points(domain: &Domain<f64>, slice: &SliceSpec) -> Result<Vec<Vec<f64>>> {
    let d = domain.dimension();
    if slice.axes.is_empty() || slice.axes.len() > 2 || slice.axes.iter().any(|&a| a == 0 || a > d) {
        return Err(Error::invalid(format!("slice axes {:?} must be one or two of 1..={d}", slice.axes)));
    }
    if slice.axes.len() == 2 && slice.axes[0] == slice.axes[1] {
        return Err(Error::invalid("slice axes must differ"));
    }
    let fixed = match &slice.fixed {
        Some(p) => {
            domain.check(p)?;
            p.clone()
        }
        None => domain.intervals().iter().map(|(a, b)| 0.5 * (a + b)).collect(),
    };
    let default = if slice.axes.len() == 1 { SLICE_RESOLUTION_1D } else { SLICE_RESOLUTION_2D };
    let r = slice.resolution.unwrap_or(default);
    if r < 2 {
        return Err(Error::invalid("slice resolution must be >= 2"));
    }
    let ticks = |axis: usize| -> Vec<f64> {
        let (lo, hi) = domain.intervals()[axis];
        (0..r)
            .map(|i| if i + 1 == r { hi } else { lo + (hi - lo) * i as f64 / (r - 1) as f64 })
            .collect()
    };
    let a = slice.axes[0] - 1;
    let mut points = Vec::new();
    match slice.axes.get(1) {
        None => {
            for t in ticks(a) {
                let mut p = fixed.clone();
                p[a] = t;
                points.push(p);
            }
        }
        Some(&b) => {
            let b = b - 1;
            for ta in ticks(a) {
                for tb in ticks(b) {
                    let mut p = fixed.clone();
                    p[a] = ta;
                    p[b] = tb;
                    points.push(p);
                }
            }
        }
    }
    Ok(points)
}

fn write_experiment_artifacts(
    out: &Path,
    config: &ExperimentConfig,
    report: &ErrorReport,
    models: &BenchmarkModels,
) -> Result<()> {
    write_path(&out.join("errors.csv"), |w| write_errors_csv(w, report))?;
    write_path(&out.join("histogram.csv"), |w| write_histogram_csv(w, &report.histograms))?;
    write_path(&out.join("convergence.csv"), |w| write_convergence_csv(w, &report.convergence))?;
    write_path(&out.join("ranked.csv"), |w| {
        write_ranked_csv(w, &models.plan.ranked, models.plan.selection.len())
    })?;
    write_path(&out.join("hybrid.csv"), |w| write_hybrid_csv(w, &models.plan.target_grid, &models.hybrid))?;
    save_model(&out.join("model.json"), &models.informed)?;

    let spec = &models.spec;
    for slice in config.resolved_slices(spec.domain()) {
        let points = slice_points(spec.domain(), &slice)?;
        let name = format!(
            "slice_{}.csv",
            slice.axes.iter().map(|a| format!("x{a}")).collect::<Vec<_>>().join("_")
        );
        let mut header = coordinate_header(spec.dimension());
        header.extend(["truth", "baseline", "informed", "target"].map(String::from));
        let rows = points
            .iter()
            .map(|p| {
                let mut row: Vec<String> = strings(p).collect();
                row.extend(strings(&[
                    spec.evaluate(p),
                    models.plan.baseline.evaluate(p)?,
                    models.informed.evaluate(p)?,
                    models.target.evaluate(p)?,
                ]));
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        write_path(&out.join(name), |w| write_rows(w, header, rows.into_iter()))?;
    }

    let summary = serde_json::to_string_pretty(report).expect("report serialises");
    write_path(&out.join("summary.json"), |w| {
        writeln!(w, "{summary}").map_err(|e| Error::io(out.join("summary.json"), e))
    })
}

/// Ranks the candidates of an external level-`w` dataset and, when
/// `config.out` is set, writes `ranked.csv` and `selected.csv` (the grid
/// format, listing the points to evaluate). No function is called.
pub fn advise(config: &ExperimentConfig, dataset_w: &Dataset<f64>) -> Result<RefinementPlan> {
    let plan = RefinementPlan::new(config.base_grid()?, dataset_w, config.epsilon, config.selection)?;
    if let Some(out) = &config.out {
        write_path(&out.join("ranked.csv"), |w| write_ranked_csv(w, &plan.ranked, plan.selection.len()))?;
        write_path(&out.join("selected.csv"), |w| write_selected_csv(w, &plan))?;
    }
    Ok(plan)
}

/// `point_id,x1..xd` for the selected candidates, in rank order.
pub fn write_selected_csv<W: Write>(out: W, plan: &RefinementPlan) -> Result<()> {
    let mut header = vec!["point_id".to_string()];
    header.extend(coordinate_header(plan.baseline.dimension()));
    let rows = plan.selection.selected.iter().map(|p| {
        let mut row = vec![p.id.to_string()];
        row.extend(strings(&p.coords));
        row
    });
    write_rows(out, header, rows)
}

/// Provenance counts of an ingested model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IngestReport {
    pub candidates: usize,
    pub selected: usize,
    /// Over the whole target grid.
    pub true_eval: usize,
    pub surrogate_fill: usize,
    /// Over the candidate points only.
    pub candidate_true_eval: usize,
    pub candidate_surrogate_fill: usize,
}

pub struct Ingested {
    pub plan: RefinementPlan,
    pub hybrid: HybridDataset<f64>,
    pub model: Interpolant<f64>,
    pub report: IngestReport,
}

/// Builds the informed model from externally computed values at the
/// selected points. The selection is recomputed from `dataset_w`, so the
/// configuration must match the one used to advise.
///
/// When `config.out` is set, writes `model.json` and `hybrid.csv`.
pub fn ingest_and_build(config: &ExperimentConfig, dataset_w: &Dataset<f64>, values_file: &Path) -> Result<Ingested> {
    let values = read_dataset_csv(open_path(values_file)?, &values_file.display().to_string())?;
    ingest_values(config, dataset_w, &values)
}

pub fn ingest_values(config: &ExperimentConfig, dataset_w: &Dataset<f64>, values: &Dataset<f64>) -> Result<Ingested> {
    let plan = RefinementPlan::new(config.base_grid()?, dataset_w, config.epsilon, config.selection)?;
    let (hybrid, model) = plan.informed(values)?;
    let (true_eval, surrogate_fill) = hybrid.counts();
    let candidate_true_eval = plan
        .ranked
        .iter()
        .filter(|c| hybrid.provenance(&c.point.id) == Some(Provenance::TrueEval))
        .count();
    let report = IngestReport {
        candidates: plan.candidates(),
        selected: plan.selection.len(),
        true_eval,
        surrogate_fill,
        candidate_true_eval,
        candidate_surrogate_fill: plan.candidates() - candidate_true_eval,
    };
    if let Some(out) = &config.out {
        save_model(&out.join("model.json"), &model)?;
        write_path(&out.join("hybrid.csv"), |w| write_hybrid_csv(w, &plan.target_grid, &hybrid))?;
    }
    Ok(Ingested {
        plan,
        hybrid,
        model,
        report,
    })
}

/// The grid CSV of the configured base level.
pub fn write_base_grid<W: Write>(out: W, config: &ExperimentConfig) -> Result<()> {
    write_grid_csv(out, &config.base_grid()?)
}
