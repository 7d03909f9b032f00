use rayon::prelude::*;

use super::{Averager, AveragerConfig, AveragingResult, TraceRecord};
use crate::frechet::Sample;
use crate::series::TimeSeries;
use crate::warp::{align_slices, WarpingPath};

/// Majorize step: optimal paths from `z` to every member and the resulting
/// Fréchet variation.
pub(crate) fn majorize(z: &[f64], sample: &Sample) -> (Vec<WarpingPath>, f64) {
    let alignments: Vec<_> = sample
        .members()
        .par_iter()
        .map(|x| align_slices(z, x))
        .collect();
    let total: f64 = alignments.iter().map(|a| a.cost).sum();
    let paths = alignments.into_iter().map(|a| a.path).collect();
    (paths, total / sample.len() as f64)
}

/// Minimize step: every mean element becomes the average of the sample
/// elements aligned to it, `(sum V_i)^-1 (sum W_i x_i)`.
pub(crate) fn minimize(len: usize, paths: &[WarpingPath], sample: &Sample) -> Vec<f64> {
    let mut sums = vec![0.0; len];
    let mut counts = vec![0usize; len];
    for (path, x) in paths.iter().zip(sample.iter()) {
        for &(i, j) in path.points() {
            sums[i] += x[j];
            counts[i] += 1;
        }
    }
    sums.iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect()
}

/// DTW barycenter averaging from `init`. Stops when the relative decrease
/// of the variation falls below `cfg.tolerance`, when the optimal paths
/// repeat, or after `cfg.max_epochs` updates. The mean keeps the length of
/// `init`.
pub fn dba(sample: &Sample, init: &TimeSeries, cfg: &AveragerConfig) -> AveragingResult {
    let len = init.len();
    let (mut paths, mut f) = majorize(init, sample);
    let mut trace = vec![TraceRecord {
        epoch: 0,
        variation: f,
        length: len,
    }];
    let mut best = (f, init.values().to_vec());
    let mut epochs = 0;

    while epochs < cfg.max_epochs {
        let next = minimize(len, &paths, sample);
        let (next_paths, next_f) = majorize(&next, sample);
        epochs += 1;
        trace.push(TraceRecord {
            epoch: epochs,
            variation: next_f,
            length: len,
        });
        if next_f < best.0 {
            best = (next_f, next);
        }
        let converged = next_paths == paths || f - next_f <= cfg.tolerance * f;
        paths = next_paths;
        f = next_f;
        if converged {
            break;
        }
    }

    AveragingResult {
        mean: TimeSeries::from_vec_unchecked(best.1),
        variation: best.0,
        trace,
        epochs,
        seed: cfg.seed,
        method: "dba".into(),
        config: cfg.clone(),
    }
}

#[derive(Debug, Clone, Default)]
pub struct Dba {
    pub config: AveragerConfig,
}

impl Dba {
    pub fn new(config: AveragerConfig) -> Self {
        Dba { config }
    }
}

impl Averager for Dba {
    fn name(&self) -> String {
        "dba".into()
    }

    fn config(&self) -> &AveragerConfig {
        &self.config
    }

    fn average(&self, sample: &Sample, init: &TimeSeries) -> AveragingResult {
        dba(sample, init, &self.config)
    }
}
