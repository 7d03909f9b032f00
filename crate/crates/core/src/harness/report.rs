//! Experiment reports: raw per-run rows plus the comparison tables derived
//! from them. CSV carries the rows only; JSON carries everything.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::average::TraceRecord;
use crate::error::{Error, Result};
use crate::harness::config::ExperimentKind;
use crate::harness::metrics::{pdev, ranking_distribution, space_saving, RankingTable, Summary};

pub const CSV_HEADER: &str =
    "dataset,class,algorithm,seed,frechet_variation,length,epochs,runtime_ms";

/// One averaging (or k-means) run. For k-means rows `class` is `k=<k>`,
/// `frechet_variation` holds the k-means error, `length` the summed
/// centroid length and `epochs` the k-means iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub dataset: String,
    pub class: String,
    pub algorithm: String,
    pub seed: u64,
    pub frechet_variation: f64,
    pub length: usize,
    pub epochs: usize,
    pub runtime_ms: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    dataset: String,
    class: String,
    algorithm: String,
    seed: u64,
    frechet_variation: f64,
    length: usize,
    epochs: usize,
    runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    Algorithm(String),
    /// The lowest score among all algorithms on the same sample.
    BestOfRun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricTables {
    pub reference: Reference,
    pub pdev: Vec<AlgorithmSummary>,
    /// Samples left out of `pdev` because the reference score was zero.
    pub pdev_skipped: usize,
    pub space_saving: Vec<AlgorithmSummary>,
    pub ranking: RankingTable,
}

type SampleKey = (String, String, u64);

impl MetricTables {
    /// Recomputes every table from the rows. A sample is one
    /// `(dataset, class, seed)` triple.
    pub fn compute(rows: &[Row], algorithms: &[String], reference: &Reference) -> Result<Self> {
        let mut samples: BTreeMap<SampleKey, BTreeMap<String, (f64, usize)>> = BTreeMap::new();
        for r in rows {
            samples
                .entry((r.dataset.clone(), r.class.clone(), r.seed))
                .or_default()
                .insert(r.algorithm.clone(), (r.frechet_variation, r.length));
        }
        let scores: Vec<BTreeMap<String, f64>> = samples
            .values()
            .map(|m| m.iter().map(|(k, &(f, _))| (k.clone(), f)).collect())
            .collect();
        let ranking = ranking_distribution(algorithms, &scores)?;

        let ref_name = match reference {
            Reference::Algorithm(name) if algorithms.contains(name) => Some(name.as_str()),
            Reference::Algorithm(_) => None,
            Reference::BestOfRun => None,
        };
        let mut pdevs: Vec<Vec<f64>> = vec![Vec::new(); algorithms.len()];
        let mut savings: Vec<Vec<f64>> = vec![Vec::new(); algorithms.len()];
        let mut skipped = 0;
        let has_reference = ref_name.is_some() || *reference == Reference::BestOfRun;
        if has_reference {
            for sample in samples.values() {
                let (f_ref, len_ref) = match ref_name {
                    Some(name) => sample[name],
                    None => (
                        sample
                            .values()
                            .map(|&(f, _)| f)
                            .fold(f64::INFINITY, f64::min),
                        0,
                    ),
                };
                let usable = f_ref > 0.0;
                if !usable {
                    skipped += 1;
                }
                for (i, a) in algorithms.iter().enumerate() {
                    let (f, len) = sample[a];
                    if usable {
                        pdevs[i].push(pdev(f, f_ref)?);
                    }
                    if ref_name.is_some() {
                        savings[i].push(space_saving(len, len_ref)?);
                    }
                }
            }
        }
        let summarize = |vals: &[Vec<f64>]| -> Vec<AlgorithmSummary> {
            if !has_reference {
                return Vec::new();
            }
            algorithms
                .iter()
                .zip(vals)
                .map(|(a, v)| AlgorithmSummary {
                    algorithm: a.clone(),
                    summary: Summary::of(v),
                })
                .collect()
        };
        let space_saving = if ref_name.is_some() {
            summarize(&savings)
        } else {
            Vec::new()
        };
        Ok(MetricTables {
            reference: reference.clone(),
            pdev: summarize(&pdevs),
            pdev_skipped: skipped,
            space_saving,
            ranking,
        })
    }

    pub fn pdev_of(&self, algorithm: &str) -> Option<&Summary> {
        self.pdev
            .iter()
            .find(|s| s.algorithm == algorithm)
            .map(|s| &s.summary)
    }

    pub fn space_saving_of(&self, algorithm: &str) -> Option<&Summary> {
        self.space_saving
            .iter()
            .find(|s| s.algorithm == algorithm)
            .map(|s| &s.summary)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub dataset: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub kind: ExperimentKind,
    pub algorithms: Vec<String>,
    pub rows: Vec<Row>,
    pub tables: MetricTables,
    pub failures: Vec<Failure>,
}

impl ExperimentReport {
    /// Rows as CSV under [`CSV_HEADER`]. Without runtimes the last column
    /// is left empty, which makes reports from identical configs diffable.
    pub fn to_csv(&self, include_runtime: bool) -> Result<String> {
        rows_to_csv(&self.rows, include_runtime)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Runtime-free copy, for comparing reports of repeated runs.
    pub fn without_runtimes(&self) -> Self {
        let mut copy = self.clone();
        copy.rows.iter_mut().for_each(|r| r.runtime_ms = 0.0);
        copy
    }

    pub fn rows_of(&self, algorithm: &str) -> impl Iterator<Item = &Row> + '_ {
        let algorithm = algorithm.to_string();
        self.rows.iter().filter(move |r| r.algorithm == algorithm)
    }
}

pub fn rows_to_csv(rows: &[Row], include_runtime: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(CsvRow {
            dataset: r.dataset.clone(),
            class: r.class.clone(),
            algorithm: r.algorithm.clone(),
            seed: r.seed,
            frechet_variation: r.frechet_variation,
            length: r.length,
            epochs: r.epochs,
            runtime_ms: include_runtime.then_some(r.runtime_ms),
        })
        .map_err(csv_err)?;
    }
    if rows.is_empty() {
        return Ok(format!("{CSV_HEADER}\n"));
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<Row>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::invalid(format!(
            "unexpected report header `{}`",
            header.join(",")
        )));
    }
    rdr.deserialize::<CsvRow>()
        .map(|rec| {
            let r = rec.map_err(csv_err)?;
            Ok(Row {
                dataset: r.dataset,
                class: r.class,
                algorithm: r.algorithm,
                seed: r.seed,
                frechet_variation: r.frechet_variation,
                length: r.length,
                epochs: r.epochs,
                runtime_ms: r.runtime_ms.unwrap_or(0.0),
                trace: Vec::new(),
            })
        })
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::invalid(format!("csv: {e}"))
}
