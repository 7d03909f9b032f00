//! Experiment configuration in a plain `key = value` text format.
//!
//! ```text
//! # lines starting with '#' are comments
//! experiment = mean            # or kmeans
//! name = desk
//! dataset = data/CBF_TRAIN.tsv
//! dataset = data/Trace_TRAIN.tsv + data/Trace_TEST.tsv
//! algorithms = dba, dba-mse
//! algorithm = ssg-auto-mse patience=20 name=ssg-mse
//! seeds = 0, 1
//! reference = dba
//! max_epochs = 50
//! ```
//!
//! `dataset` and `algorithm` may repeat. Averager parameters given at top
//! level apply to every algorithm; `key=value` tokens after an algorithm
//! name override them for that algorithm only. Relative dataset paths are
//! resolved against the config file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::average::{AveragerConfig, ChainSparsity, Method};
use crate::cluster::DEFAULT_MAX_ITERS;
use crate::error::{Error, Result};
use crate::harness::dataset::Delimiter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Mean,
    Kmeans,
}

/// One dataset entry; several files are merged into one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    /// Column label in reports; unique within a config.
    pub name: String,
    pub method: Method,
    pub config: AveragerConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub name: String,
    pub datasets: Vec<DatasetSpec>,
    pub algorithms: Vec<AlgorithmSpec>,
    pub seeds: Vec<u64>,
    /// Reference algorithm for percentage deviation and space saving in
    /// mean experiments. k-means experiments compare against the best run.
    pub reference: String,
    pub threads: Option<usize>,
    pub znormalize: bool,
    /// Keep only the first `n` members of every class.
    pub max_per_class: Option<usize>,
    pub delimiter: Delimiter,
    pub kmeans_max_iters: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::Mean,
            name: "experiment".into(),
            datasets: Vec::new(),
            algorithms: Vec::new(),
            seeds: vec![0],
            reference: "dba".into(),
            threads: None,
            znormalize: false,
            max_per_class: None,
            delimiter: Delimiter::Auto,
            kmeans_max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!(
            "`{key}`: expected a boolean, got `{value}`"
        ))),
    }
}

/// Applies one averager parameter. Returns `false` if `key` is not one.
pub fn apply_averager_key(cfg: &mut AveragerConfig, key: &str, value: &str) -> Result<bool> {
    match key {
        "max_epochs" => cfg.max_epochs = parse_num(key, value)?,
        "ssg_max_epochs" => cfg.ssg_max_epochs = Some(parse_num(key, value)?),
        "patience" => cfg.patience = parse_num(key, value)?,
        "learning_rate" | "lr" => cfg.learning_rate = parse_num(key, value)?,
        "beta1" => cfg.beta1 = parse_num(key, value)?,
        "beta2" => cfg.beta2 = parse_num(key, value)?,
        "epsilon" => cfg.epsilon = parse_num(key, value)?,
        "tolerance" => cfg.tolerance = parse_num(key, value)?,
        "vanilla" => cfg.vanilla = parse_bool(key, value)?,
        "shuffle" => cfg.shuffle = parse_bool(key, value)?,
        "ac_max_iterations" => cfg.ac_max_iterations = Some(parse_num(key, value)?),
        "min_learning_rate" => cfg.min_learning_rate = parse_num(key, value)?,
        "lr_patience" => cfg.lr_patience = parse_num(key, value)?,
        "stride" => {
            let k: usize = parse_num(key, value)?;
            cfg.sparsity = if k <= 1 {
                ChainSparsity::Full
            } else {
                ChainSparsity::Stride(k)
            };
        }
        _ => return Ok(false),
    }
    Ok(true)
}

struct PendingAlgorithm {
    method: Method,
    name: Option<String>,
    overrides: Vec<(String, String)>,
}

fn parse_algorithm(text: &str) -> Result<PendingAlgorithm> {
    let mut tokens = text.split_whitespace();
    let method: Method = tokens
        .next()
        .ok_or_else(|| Error::Config("empty algorithm entry".into()))?
        .parse()?;
    let mut name = None;
    let mut overrides = Vec::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got `{tok}`")))?;
        if k == "name" {
            name = Some(v.to_string());
        } else {
            overrides.push((k.to_string(), v.to_string()));
        }
    }
    Ok(PendingAlgorithm {
        method,
        name,
        overrides,
    })
}

impl ExperimentConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut averager = AveragerConfig::default();
        let mut pending = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", idx + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let at = |e: Error| Error::Config(format!("line {}: {e}", idx + 1));
            match key {
                "experiment" => {
                    cfg.kind = match value.to_ascii_lowercase().as_str() {
                        "mean" => ExperimentKind::Mean,
                        "kmeans" | "k-means" => ExperimentKind::Kmeans,
                        _ => {
                            return Err(at(Error::Config(format!("unknown experiment `{value}`"))))
                        }
                    }
                }
                "name" => cfg.name = value.to_string(),
                "dataset" => {
                    let files = value.split('+').map(|p| base_dir.join(p.trim())).collect();
                    cfg.datasets.push(DatasetSpec { files });
                }
                "algorithms" => {
                    for item in value.split(',').filter(|s| !s.trim().is_empty()) {
                        pending.push(parse_algorithm(item).map_err(at)?);
                    }
                }
                "algorithm" => pending.push(parse_algorithm(value).map_err(at)?),
                "seeds" | "seed" => {
                    cfg.seeds = value
                        .split(',')
                        .map(|s| parse_num::<u64>(key, s))
                        .collect::<Result<_>>()
                        .map_err(at)?;
                }
                "reference" => cfg.reference = value.to_string(),
                "threads" => cfg.threads = Some(parse_num(key, value).map_err(at)?),
                "znormalize" => cfg.znormalize = parse_bool(key, value).map_err(at)?,
                "max_per_class" => cfg.max_per_class = Some(parse_num(key, value).map_err(at)?),
                "delimiter" => cfg.delimiter = value.parse().map_err(at)?,
                "kmeans_max_iters" => cfg.kmeans_max_iters = parse_num(key, value).map_err(at)?,
                _ => {
                    if !apply_averager_key(&mut averager, key, value).map_err(at)? {
                        return Err(at(Error::Config(format!("unknown key `{key}`"))));
                    }
                }
            }
        }

        for p in pending {
            let mut config = averager.clone();
            for (k, v) in &p.overrides {
                if !apply_averager_key(&mut config, k, v)? {
                    return Err(Error::Config(format!("unknown algorithm parameter `{k}`")));
                }
            }
            config.validate()?;
            let base = p.name.unwrap_or_else(|| p.method.to_string());
            let mut name = base.clone();
            let mut dup = 1;
            while cfg.algorithms.iter().any(|a| a.name == name) {
                dup += 1;
                name = format!("{base}#{dup}");
            }
            cfg.algorithms.push(AlgorithmSpec {
                name,
                method: p.method,
                config,
            });
        }
        if cfg.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        ExperimentConfig::parse(&text, dir)
    }
}
