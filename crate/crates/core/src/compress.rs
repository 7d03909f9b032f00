//! Compression chains: greedy adaptive scaling (ADA) and exact minimum
//! squared-DTW-error (MSE) segmentation.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::warp::dtw_sq;

/// One compression in a chain. The cost is the squared DTW distance to the
/// source series; MSE chains fill it eagerly, ADA chains on first access.
#[derive(Debug, Clone)]
pub struct ChainEntry {
    pub series: TimeSeries,
    cost: OnceLock<f64>,
}

impl ChainEntry {
    fn eager(series: TimeSeries, cost: f64) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(cost);
        ChainEntry { series, cost: cell }
    }

    fn lazy(series: TimeSeries) -> Self {
        ChainEntry {
            series,
            cost: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Compressions of one series ordered by strictly increasing length.
#[derive(Debug, Clone)]
pub struct CompressionChain {
    source: TimeSeries,
    entries: Vec<ChainEntry>,
}

impl CompressionChain {
    pub fn source(&self) -> &TimeSeries {
        &self.source
    }

    pub fn entries(&self) -> &[ChainEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Squared DTW error of entry `index` against the source.
    pub fn cost(&self, index: usize) -> f64 {
        let entry = &self.entries[index];
        *entry
            .cost
            .get_or_init(|| dtw_sq(&self.source, &entry.series))
    }

    /// The entry of length `len`, if the chain has one.
    pub fn by_length(&self, len: usize) -> Option<(&TimeSeries, f64)> {
        let idx = self.entries.iter().position(|e| e.len() == len)?;
        Some((&self.entries[idx].series, self.cost(idx)))
    }

    /// `(series, cost)` pairs in increasing length.
    pub fn iter(&self) -> impl Iterator<Item = (&TimeSeries, f64)> + '_ {
        (0..self.entries.len()).map(|i| (&self.entries[i].series, self.cost(i)))
    }

    /// The chain consisting only of the source series.
    pub fn trivial(x: &TimeSeries) -> CompressionChain {
        CompressionChain {
            source: x.clone(),
            entries: vec![ChainEntry::eager(x.clone(), 0.0)],
        }
    }
}

/// Replaces elements `i` and `i + 1` (zero-based) by their mean.
pub fn ada_merge(x: &TimeSeries, i: usize) -> Result<TimeSeries> {
    if i + 1 >= x.len() {
        return Err(Error::invalid(format!(
            "merge index {i} out of range for a series of length {}",
            x.len()
        )));
    }
    let mut values = x.values().to_vec();
    values[i] = (values[i] + values[i + 1]) / 2.0;
    values.remove(i + 1);
    Ok(TimeSeries::from_vec_unchecked(values))
}

/// ADA chain: repeatedly merge the adjacent pair with the smallest absolute
/// difference (first such pair on ties) down to length 1.
pub fn ada_chain(x: &TimeSeries) -> CompressionChain {
    let mut entries = vec![ChainEntry::eager(x.clone(), 0.0)];
    let mut current = x.clone();
    while current.len() > 1 {
        let mut best = 0;
        let mut best_gap = f64::INFINITY;
        for j in 0..current.len() - 1 {
            let gap = (current[j] - current[j + 1]).abs();
            if gap < best_gap {
                best_gap = gap;
                best = j;
            }
        }
        current = ada_merge(&current, best).expect("index below len - 1");
        entries.push(ChainEntry::lazy(current.clone()));
    }
    entries.reverse();
    CompressionChain {
        source: x.clone(),
        entries,
    }
}

/// Segment cost table backed by prefix sums of the centered values.
struct SegmentCosts {
    shift: f64,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl SegmentCosts {
    fn new(x: &[f64]) -> Self {
        let shift = x.iter().sum::<f64>() / x.len() as f64;
        let mut sum = Vec::with_capacity(x.len() + 1);
        let mut sum_sq = Vec::with_capacity(x.len() + 1);
        sum.push(0.0);
        sum_sq.push(0.0);
        for &v in x {
            let c = v - shift;
            sum.push(sum.last().unwrap() + c);
            sum_sq.push(sum_sq.last().unwrap() + c * c);
        }
        SegmentCosts { shift, sum, sum_sq }
    }

    /// Squared deviation of `x[start..end]` from its mean.
    fn cost(&self, start: usize, end: usize) -> f64 {
        let len = (end - start) as f64;
        let s = self.sum[end] - self.sum[start];
        (self.sum_sq[end] - self.sum_sq[start] - s * s / len).max(0.0)
    }

    fn mean(&self, start: usize, end: usize) -> f64 {
        (self.sum[end] - self.sum[start]) / (end - start) as f64 + self.shift
    }
}

/// MSE chain: for every length `m` an optimal segmentation of `x` into `m`
/// consecutive segments, each replaced by its mean. One dynamic program
/// over all `(prefix, segments)` pairs gives the full chain in `O(n^3)`.
///
/// Among equal-cost segmentations the one with the shortest last segment
/// is kept.
pub fn mse_chain(x: &TimeSeries) -> CompressionChain {
    let n = x.len();
    let seg = SegmentCosts::new(x);
    // cost[k][i]: best cost of splitting x[..i] into k segments
    // split[k][i]: start of the last segment in that optimum
    let mut cost = vec![vec![f64::INFINITY; n + 1]; n + 1];
    let mut split = vec![vec![0usize; n + 1]; n + 1];
    cost[0][0] = 0.0;
    for k in 1..=n {
        for i in k..=n {
            let mut best = f64::INFINITY;
            let mut arg = k - 1;
            for j in (k - 1..i).rev() {
                let c = cost[k - 1][j] + seg.cost(j, i);
                if c < best {
                    best = c;
                    arg = j;
                }
            }
            cost[k][i] = best;
            split[k][i] = arg;
        }
    }

    let entries = (1..=n)
        .map(|m| {
            if m == n {
                return ChainEntry::eager(x.clone(), 0.0);
            }
            let mut values = vec![0.0; m];
            let mut end = n;
            for k in (1..=m).rev() {
                let start = split[k][end];
                values[k - 1] = seg.mean(start, end);
                end = start;
            }
            ChainEntry::eager(TimeSeries::from_vec_unchecked(values), cost[m][n])
        })
        .collect();
    CompressionChain {
        source: x.clone(),
        entries,
    }
}

/// The length-`m` entry of the MSE chain.
pub fn mse_compress(x: &TimeSeries, m: usize) -> Result<(TimeSeries, f64)> {
    if m == 0 || m > x.len() {
        return Err(Error::invalid(format!(
            "compression length {m} outside 1..={}",
            x.len()
        )));
    }
    let chain = mse_chain(x);
    let (series, cost) = chain.by_length(m).expect("chain covers every length");
    Ok((series.clone(), cost))
}

/// Compression method used by the C-step of average-compress.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Compressor {
    Ada,
    Mse,
    /// The chain holding only the input itself.
    Identity,
}

impl Compressor {
    pub fn chain(self, x: &TimeSeries) -> CompressionChain {
        match self {
            Compressor::Ada => ada_chain(x),
            Compressor::Mse => mse_chain(x),
            Compressor::Identity => CompressionChain::trivial(x),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Compressor::Ada => "ada",
            Compressor::Mse => "mse",
            Compressor::Identity => "identity",
        }
    }
}

impl std::str::FromStr for Compressor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ada" => Ok(Compressor::Ada),
            "mse" => Ok(Compressor::Mse),
            "identity" | "none" => Ok(Compressor::Identity),
            other => Err(Error::invalid(format!("unknown compressor `{other}`"))),
        }
    }
}
