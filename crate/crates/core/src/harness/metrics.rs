//! Comparison metrics between averaging algorithms: percentage deviation,
//! space-saving ratio and ranking distribution.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack under which two scores share a rank.
const RANK_TIE: f64 = 1e-12;

/// `100 (f - f_ref) / f_ref`; negative means better than the reference.
pub fn pdev(f: f64, f_ref: f64) -> Result<f64> {
    if f_ref.is_nan() || f_ref <= 0.0 {
        return Err(Error::invalid(format!(
            "percentage deviation needs a positive reference variation, got {f_ref}"
        )));
    }
    Ok(100.0 * (f - f_ref) / f_ref)
}

/// `1 - len / len_ref`; positive means shorter than the reference.
pub fn space_saving(len: usize, len_ref: usize) -> Result<f64> {
    if len_ref == 0 {
        return Err(Error::invalid("reference length must be at least 1"));
    }
    Ok(1.0 - len as f64 / len_ref as f64)
}

/// Rank 1 for the smallest score; tied scores share the smallest rank.
pub fn ranks(scores: &[f64]) -> Vec<usize> {
    scores
        .iter()
        .map(|&s| {
            let slack = RANK_TIE * s.abs().max(1.0);
            1 + scores.iter().filter(|&&o| o < s - slack).count()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub avg: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    /// Population statistics; all zero for an empty input.
    pub fn of(values: &[f64]) -> Summary {
        if values.is_empty() {
            return Summary {
                count: 0,
                avg: 0.0,
                std: 0.0,
                min: 0.0,
                max: 0.0,
            };
        }
        let n = values.len() as f64;
        let avg = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - avg).powi(2)).sum::<f64>() / n;
        Summary {
            count: values.len(),
            avg,
            std: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingTable {
    pub algorithms: Vec<String>,
    /// `percent[a][r]`: share of samples (in %) where algorithm `a` got rank `r + 1`.
    pub percent: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub samples: usize,
}

/// Ranks every algorithm on every sample by ascending score.
pub fn ranking_distribution(
    algorithms: &[String],
    samples: &[BTreeMap<String, f64>],
) -> Result<RankingTable> {
    let a = algorithms.len();
    if a == 0 {
        return Err(Error::invalid("ranking needs at least one algorithm"));
    }
    let mut per_algo: Vec<Vec<f64>> = vec![Vec::with_capacity(samples.len()); a];
    for (k, sample) in samples.iter().enumerate() {
        let scores = algorithms
            .iter()
            .map(|name| {
                sample.get(name).copied().ok_or_else(|| {
                    Error::invalid(format!("algorithm `{name}` missing on sample {k}"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        for (i, r) in ranks(&scores).into_iter().enumerate() {
            per_algo[i].push(r as f64);
        }
    }
    let n = samples.len();
    let percent = per_algo
        .iter()
        .map(|rs| {
            (1..=a)
                .map(|rank| {
                    if n == 0 {
                        0.0
                    } else {
                        100.0 * rs.iter().filter(|&&r| r == rank as f64).count() as f64 / n as f64
                    }
                })
                .collect()
        })
        .collect();
    let stats: Vec<Summary> = per_algo.iter().map(|rs| Summary::of(rs)).collect();
    Ok(RankingTable {
        algorithms: algorithms.to_vec(),
        percent,
        mean: stats.iter().map(|s| s.avg).collect(),
        std: stats.iter().map(|s| s.std).collect(),
        samples: n,
    })
}
