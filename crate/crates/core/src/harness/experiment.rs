use std::time::Instant;

use rayon::prelude::*;

use crate::cluster::{kmeans, Init};
use crate::error::{Error, Result};
use crate::frechet::{medoid, Sample};
use crate::harness::config::{AlgorithmSpec, ExperimentConfig, ExperimentKind};
use crate::harness::dataset::{load_merged, Dataset};
use crate::harness::report::{ExperimentReport, Failure, MetricTables, Reference, Row};

fn validate(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.algorithms.is_empty() {
        return Err(Error::invalid("experiment lists no algorithms"));
    }
    if cfg.seeds.is_empty() {
        return Err(Error::invalid("experiment lists no seeds"));
    }
    Ok(())
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

fn load_all(cfg: &ExperimentConfig) -> (Vec<Dataset>, Vec<Failure>) {
    let mut loaded = Vec::new();
    let mut failures = Vec::new();
    for spec in &cfg.datasets {
        match load_merged(&spec.files, cfg.delimiter) {
            Ok(d) => loaded.push(if cfg.znormalize { d.z_normalized() } else { d }),
            Err(e) => failures.push(Failure {
                dataset: spec
                    .files
                    .iter()
                    .map(|p| p.display().to_string())
                    .collect::<Vec<_>>()
                    .join("+"),
                message: e.to_string(),
            }),
        }
    }
    (loaded, failures)
}

fn capped(sample: Sample, cap: Option<usize>) -> Sample {
    match cap {
        Some(n) if n > 0 && n < sample.len() => {
            Sample::new(sample.members()[..n].to_vec()).expect("n > 0")
        }
        _ => sample,
    }
}

fn names(cfg: &ExperimentConfig) -> Vec<String> {
    cfg.algorithms.iter().map(|a| a.name.clone()).collect()
}

fn average_rows(
    dataset: &str,
    class: &str,
    sample: &Sample,
    algos: &[AlgorithmSpec],
    seeds: &[u64],
) -> Result<Vec<Row>> {
    let (_, init) = medoid(sample);
    let mut rows = Vec::with_capacity(algos.len() * seeds.len());
    for spec in algos {
        for &seed in seeds {
            let averager = spec.method.build(spec.config.clone().with_seed(seed))?;
            let start = Instant::now();
            let r = averager.average(sample, &init);
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            rows.push(Row {
                dataset: dataset.to_string(),
                class: class.to_string(),
                algorithm: spec.name.clone(),
                seed,
                frechet_variation: r.variation,
                length: r.mean.len(),
                epochs: r.epochs,
                runtime_ms,
                trace: r.trace,
            });
        }
    }
    Ok(rows)
}

/// Averages every class of every dataset with every configured algorithm,
/// starting each run from the class medoid. Percentage deviation and space
/// saving are measured against `cfg.reference`.
pub fn run_mean_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    validate(cfg)?;
    let (datasets, failures) = load_all(cfg);
    let jobs: Vec<(String, String, Sample)> = datasets
        .iter()
        .flat_map(|d| {
            d.classes()
                .into_iter()
                .map(|(label, s)| (d.name.clone(), label, capped(s, cfg.max_per_class)))
        })
        .collect();

    let results = with_pool(cfg.threads, || {
        jobs.par_iter()
            .map(|(d, c, s)| average_rows(d, c, s, &cfg.algorithms, &cfg.seeds))
            .collect::<Vec<_>>()
    })?;
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }

    let algorithms = names(cfg);
    let reference = Reference::Algorithm(cfg.reference.clone());
    let tables = MetricTables::compute(&rows, &algorithms, &reference)?;
    Ok(ExperimentReport {
        name: cfg.name.clone(),
        kind: ExperimentKind::Mean,
        algorithms,
        rows,
        tables,
        failures,
    })
}

fn kmeans_rows(d: &Dataset, cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let mut series = Vec::new();
    let mut labels = Vec::new();
    for (label, sample) in d.classes() {
        let sample = capped(sample, cfg.max_per_class);
        labels.extend(std::iter::repeat_n(label, sample.len()));
        series.extend(sample.members().iter().cloned());
    }
    let k = crate::cluster::class_order(&labels).len();
    let mut rows = Vec::new();
    for spec in &cfg.algorithms {
        for &seed in &cfg.seeds {
            let averager = spec.method.build(spec.config.clone().with_seed(seed))?;
            let start = Instant::now();
            let c = kmeans(
                &series,
                k,
                &averager,
                Init::ClassMedoids(&labels),
                cfg.kmeans_max_iters,
            )?;
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            rows.push(Row {
                dataset: d.name.clone(),
                class: format!("k={k}"),
                algorithm: spec.name.clone(),
                seed,
                frechet_variation: c.error,
                length: c.centroids.iter().map(|z| z.len()).sum(),
                epochs: c.iterations,
                runtime_ms,
                trace: Vec::new(),
            });
        }
    }
    Ok(rows)
}

/// k-means on every dataset (train and test merged when a dataset entry
/// lists both) with `k` = number of classes and class-medoid seeding.
/// Percentage deviations are taken against the best error of the run.
pub fn run_kmeans_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    validate(cfg)?;
    let (datasets, failures) = load_all(cfg);
    let results = with_pool(cfg.threads, || {
        datasets
            .par_iter()
            .map(|d| kmeans_rows(d, cfg))
            .collect::<Vec<_>>()
    })?;
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    let algorithms = names(cfg);
    let tables = MetricTables::compute(&rows, &algorithms, &Reference::BestOfRun)?;
    Ok(ExperimentReport {
        name: cfg.name.clone(),
        kind: ExperimentKind::Kmeans,
        algorithms,
        rows,
        tables,
        failures,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.kind {
        ExperimentKind::Mean => run_mean_experiment(cfg),
        ExperimentKind::Kmeans => run_kmeans_experiment(cfg),
    }
}
