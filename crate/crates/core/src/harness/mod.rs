//! Dataset ingestion, experiment orchestration, comparison metrics and
//! report emission.

pub mod config;
pub mod dataset;
pub mod experiment;
pub mod metrics;
pub mod report;
pub mod synthetic;

pub use config::{AlgorithmSpec, DatasetSpec, ExperimentConfig, ExperimentKind};
pub use dataset::{load_dataset, load_merged, Dataset, Delimiter, Record};
pub use experiment::{run_experiment, run_kmeans_experiment, run_mean_experiment};
pub use metrics::{pdev, ranking_distribution, ranks, space_saving, RankingTable, Summary};
pub use report::{ExperimentReport, MetricTables, Reference, Row, CSV_HEADER};
