use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use sparse_refine::benchmarks::{BenchmarkName, BenchmarkSpec, Objective};
use sparse_refine::grid::{Dataset, PointId};
use sparse_refine::harness::io::{load_model, read_dataset_csv, write_dataset_csv};
use sparse_refine::harness::{
    advise, build_benchmark_models, convergence_sweep, ingest_and_build, run_benchmark_experiment,
    sample_test_points, ExperimentConfig,
};
use sparse_refine::refinement::Strategy;
use sparse_refine::Error;

fn config(name: BenchmarkName, selection: Strategy) -> ExperimentConfig {
    ExperimentConfig {
        test_points: 50,
        ..ExperimentConfig::for_benchmark(name, selection)
    }
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn budget_accounting_is_exact() {
    for name in BenchmarkName::ALL {
        for selection in [Strategy::Threshold { tau: 0.2 }, Strategy::Elbow, Strategy::Budget { budget: 7 }] {
            let m = build_benchmark_models(&config(name, selection)).unwrap();
            let base = m.plan.baseline.grid();
            let outside = m.plan.selection.selected.iter().filter(|p| !base.contains(&p.id)).count() as u64;
            assert_eq!(m.baseline_calls, base.len() as u64);
            assert_eq!(m.informed_calls, base.len() as u64 + outside);
            assert_eq!(m.target_calls, m.plan.target_grid.len() as u64);
        }
    }
}

#[test]
fn artifacts_are_byte_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let mut c = config(BenchmarkName::Ishigami, Strategy::Threshold { tau: 0.2 });
        c.out = Some(dir.path().to_path_buf());
        run_benchmark_experiment(&c).unwrap();
    }
    let (fa, fb) = (read_dir(a.path()), read_dir(b.path()));
    for name in [
        "errors.csv",
        "histogram.csv",
        "convergence.csv",
        "ranked.csv",
        "hybrid.csv",
        "model.json",
        "summary.json",
        "slice_x1.csv",
        "slice_x1_x2.csv",
    ] {
        assert!(fa.contains_key(name), "missing {name}");
    }
    assert_eq!(fa, fb);
}

#[test]
fn histogram_csv_has_twenty_bins_per_model() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(BenchmarkName::Oscillatory, Strategy::Threshold { tau: 0.05 });
    c.out = Some(dir.path().to_path_buf());
    run_benchmark_experiment(&c).unwrap();
    let text = fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("model,bin,lower,upper,count,density,fraction"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 60);
    let informed_count: usize = rows
        .iter()
        .filter(|r| r.starts_with("informed,"))
        .map(|r| r.split(',').nth(4).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(informed_count, 50);
}

#[test]
fn convergence_endpoints_are_identities() {
    for name in BenchmarkName::ALL {
        let c = config(name, Strategy::Elbow);
        let report = run_benchmark_experiment(&c).unwrap();
        let rows = &report.convergence;
        assert_eq!(rows.len(), report.candidates + 1);
        let first = rows.first().unwrap();
        let last = rows.last().unwrap();
        assert_eq!((first.max_abs_error, first.rmse), (report.baseline.max_abs_error, report.baseline.rmse));
        assert_eq!((last.max_abs_error, last.rmse), (report.target.max_abs_error, report.target.rmse));
        assert_eq!(first.true_calls_cumulative, report.baseline.true_calls);
        assert_eq!(last.true_calls_cumulative, report.target.true_calls);
        assert_eq!(convergence_sweep(&c).unwrap(), report.convergence);
    }
}

#[test]
fn sweep_stride_keeps_the_endpoints() {
    let mut c = config(BenchmarkName::SobolG, Strategy::Elbow);
    c.sweep_stride = 10;
    let rows = convergence_sweep(&c).unwrap();
    let n: Vec<usize> = rows.iter().map(|r| r.n_refined).collect();
    assert_eq!(n, vec![0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 96]);
}

#[test]
fn persisted_model_evaluates_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(BenchmarkName::SobolG, Strategy::Threshold { tau: 0.2 });
    c.out = Some(dir.path().to_path_buf());
    run_benchmark_experiment(&c).unwrap();
    let in_process = build_benchmark_models(&c).unwrap().informed;
    let loaded = load_model(&dir.path().join("model.json")).unwrap();
    for x in sample_test_points(in_process.grid().domain(), 100, 3) {
        assert_eq!(in_process.evaluate(&x).unwrap().to_bits(), loaded.evaluate(&x).unwrap().to_bits());
    }
}

/// A level-2 Sobol' G dataset written to disk as an external simulator would.
fn external_setup(dir: &Path, selection: Strategy) -> (ExperimentConfig, Dataset<f64>, BenchmarkSpec<f64>) {
    let spec = BenchmarkSpec::<f64>::sobol_g(4).unwrap();
    let mut c = ExperimentConfig {
        domain: Some(spec.domain().intervals().to_vec()),
        selection,
        out: Some(dir.join("out")),
        dataset: Some(dir.join("dataset.csv")),
        ..ExperimentConfig::default()
    };
    let grid = c.base_grid().unwrap();
    let data = Dataset::sample(&grid, |x| spec.evaluate(x));
    let mut file = fs::File::create(dir.join("dataset.csv")).unwrap();
    write_dataset_csv(&mut file, &grid, &data).unwrap();
    c.dataset = Some(dir.join("dataset.csv"));
    (c.clone(), c.load_dataset().unwrap(), spec)
}

fn selected_rows(dir: &Path) -> Vec<(String, Vec<f64>)> {
    let text = fs::read_to_string(dir.join("out/selected.csv")).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let mut fields = l.split(',');
            let id = fields.next().unwrap().to_string();
            (id, fields.map(|v| v.parse().unwrap()).collect())
        })
        .collect()
}

fn write_values(path: &Path, rows: &[(String, f64)]) {
    let mut text = String::from("point_id,value\n");
    for (id, v) in rows {
        text.push_str(&format!("{id},{v}\n"));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn advise_flags_exactly_the_budget() {
    let dir = tempfile::tempdir().unwrap();
    let (c, data, _) = external_setup(dir.path(), Strategy::Budget { budget: 33 });
    let plan = advise(&c, &data).unwrap();
    assert_eq!(plan.candidates(), 96);
    let ranked = fs::read_to_string(dir.path().join("out/ranked.csv")).unwrap();
    let mut lines = ranked.lines();
    assert_eq!(lines.next(), Some("rank,point_id,x1,x2,x3,x4,delta,eta,selected"));
    let flags: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(flags.len(), 96);
    assert_eq!(flags.iter().filter(|f| **f == "1").count(), 33);
    assert!(flags[..33].iter().all(|f| *f == "1"));
    assert_eq!(selected_rows(dir.path()).len(), 33);
}

#[test]
fn advise_with_full_threshold_keeps_only_the_maximum() {
    let dir = tempfile::tempdir().unwrap();
    let (c, data, _) = external_setup(dir.path(), Strategy::Threshold { tau: 1.0 });
    let plan = advise(&c, &data).unwrap();
    let eta_max = plan.ranked[0].eta;
    assert!(!plan.selection.is_empty());
    assert!(plan.ranked[..plan.selection.len()].iter().all(|r| r.eta == eta_max));
    assert!(plan.ranked[plan.selection.len()..].iter().all(|r| r.eta < eta_max));
}

#[test]
fn advise_rejects_incomplete_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let (c, data, _) = external_setup(dir.path(), Strategy::Elbow);
    let partial: Dataset<f64> = data.iter().skip(3).map(|(id, v)| (id.clone(), v)).collect();
    assert!(matches!(advise(&c, &partial), Err(Error::IncompleteDataset(_))));
}

#[test]
fn ingest_round_trip_matches_in_process_model() {
    let dir = tempfile::tempdir().unwrap();
    let (c, data, spec) = external_setup(dir.path(), Strategy::Budget { budget: 33 });
    advise(&c, &data).unwrap();
    let values: Vec<(String, f64)> = selected_rows(dir.path())
        .into_iter()
        .map(|(id, x)| (id, spec.evaluate(&x)))
        .collect();
    write_values(&dir.path().join("values.csv"), &values);
    let ingested = ingest_and_build(&c, &data, &dir.path().join("values.csv")).unwrap();
    assert_eq!(ingested.report.candidate_true_eval, 33);
    assert_eq!(ingested.report.candidate_surrogate_fill, 96 - 33);
    assert_eq!(ingested.report.true_eval, 33);

    let reference = build_benchmark_models(&ExperimentConfig {
        benchmark: Some(BenchmarkName::SobolG),
        selection: Strategy::Budget { budget: 33 },
        ..ExperimentConfig::default()
    })
    .unwrap()
    .informed;
    let persisted = load_model(&dir.path().join("out/model.json")).unwrap();
    for x in sample_test_points(spec.domain(), 200, 11) {
        let expected = reference.evaluate(&x).unwrap().to_bits();
        assert_eq!(ingested.model.evaluate(&x).unwrap().to_bits(), expected);
        assert_eq!(persisted.evaluate(&x).unwrap().to_bits(), expected);
    }
    let hybrid = read_dataset_csv(fs::File::open(dir.path().join("out/hybrid.csv")).unwrap(), "hybrid").unwrap();
    assert_eq!(hybrid.len(), 137);
}

#[test]
fn ingest_names_a_mutated_id() {
    let dir = tempfile::tempdir().unwrap();
    let (c, data, spec) = external_setup(dir.path(), Strategy::Budget { budget: 33 });
    let plan = advise(&c, &data).unwrap();
    let mut values: Vec<(String, f64)> = selected_rows(dir.path())
        .into_iter()
        .map(|(id, x)| (id, spec.evaluate(&x)))
        .collect();
    let foreign = plan.ranked[40].point.id.to_string();
    values[5].0 = foreign.clone();
    write_values(&dir.path().join("values.csv"), &values);
    match ingest_and_build(&c, &data, &dir.path().join("values.csv")) {
        Err(Error::UnknownPoint(id)) => assert_eq!(id, foreign),
        other => panic!("expected unknown point, got {:?}", other.map(|i| i.report)),
    }
    let outside: PointId = "1/16;1/2;1/2;1/2".parse().unwrap();
    values[5].0 = outside.to_string();
    write_values(&dir.path().join("values.csv"), &values);
    assert!(matches!(
        ingest_and_build(&c, &data, &dir.path().join("values.csv")),
        Err(Error::UnknownPoint(id)) if id == outside.to_string()
    ));
}

#[test]
fn ingest_requires_every_selected_value() {
    let dir = tempfile::tempdir().unwrap();
    let (c, data, spec) = external_setup(dir.path(), Strategy::Budget { budget: 33 });
    advise(&c, &data).unwrap();
    let values: Vec<(String, f64)> = selected_rows(dir.path())
        .into_iter()
        .skip(1)
        .map(|(id, x)| (id, spec.evaluate(&x)))
        .collect();
    write_values(&dir.path().join("values.csv"), &values);
    let err = ingest_and_build(&c, &data, &dir.path().join("values.csv")).err().unwrap();
    assert!(matches!(err, Error::IncompleteSelection(_)));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn informed_rmse_never_exceeds_baseline() {
    for (name, selection) in [
        (BenchmarkName::Ishigami, Strategy::Threshold { tau: 0.2 }),
        (BenchmarkName::SobolG, Strategy::Threshold { tau: 0.2 }),
        (BenchmarkName::SobolG, Strategy::Elbow),
        (BenchmarkName::Oscillatory, Strategy::Threshold { tau: 0.05 }),
    ] {
        let report = run_benchmark_experiment(&ExperimentConfig::for_benchmark(name, selection)).unwrap();
        assert!(report.informed_rmse_not_worse, "{name} {selection}");
    }
}
