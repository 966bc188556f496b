//! Experiment orchestration over `f64`: seeded test points, error metrics,
//! convergence sweeps, CSV/JSON artifacts and the advise/ingest loop for
//! externally evaluated data.

mod experiment;
pub mod io;
mod metrics;
mod rng;

pub use experiment::{
    advise, build_benchmark_models, convergence_sweep, ingest_and_build, ingest_values, run_benchmark_experiment,
    sweep, write_base_grid, write_convergence_csv, write_errors_csv, write_histogram_csv, write_selected_csv,
    BenchmarkModels, ConvergenceRow, ErrorReport, ExperimentConfig, IngestReport, Ingested, ModelSummary,
    RefinementPlan, SliceSpec, TestRecord, DEFAULT_LEVEL, DEFAULT_TAU, DEFAULT_TEST_POINTS,
};
pub use metrics::{error_metrics, histogram, percentage_error, ErrorMetrics, Histogram, HISTOGRAM_BINS};
pub use rng::{sample_test_points, unit_draw, DEFAULT_SEED};
