use rayon::prelude::*;

use super::{Averager, AveragerConfig, AveragingResult, TraceRecord};
use crate::compress::Compressor;
use crate::frechet::{variation_of, Sample};
use crate::series::TimeSeries;

/// Relative slack under which two variations count as equal.
const TIE_EPS: f64 = 1e-12;

fn tolerance(f: f64) -> f64 {
    TIE_EPS * f.abs().max(1.0)
}

/// Average-compress: alternate an averager (A-step) with a compression
/// chain of its output (C-step), moving to the chain entry with the lowest
/// variation (shortest on ties). A candidate is accepted when its variation
/// strictly improves on the best so far, or ties it at a shorter length;
/// the loop ends at the first iteration that does neither.
pub fn ac<A: Averager + ?Sized>(
    sample: &Sample,
    init: &TimeSeries,
    averager: &A,
    compressor: Compressor,
    cfg: &AveragerConfig,
) -> AveragingResult {
    if compressor == Compressor::Identity {
        // the trivial chain can neither move nor shorten z
        let mut r = averager.average(sample, init);
        r.method = format!("{}-{}", averager.name(), compressor.name());
        return r;
    }
    let mut best = init.clone();
    let mut best_f = variation_of(init, sample);
    let mut trace = vec![TraceRecord {
        epoch: 0,
        variation: best_f,
        length: best.len(),
    }];
    let mut z = init.clone();
    let mut epochs = 0;
    let mut iterations = 0;

    loop {
        if cfg.ac_max_iterations.is_some_and(|cap| iterations >= cap) {
            break;
        }
        iterations += 1;

        let averaged = averager.average(sample, &z);
        epochs += averaged.epochs;
        let full_len = averaged.mean.len();

        let chain = compressor.chain(&averaged.mean);
        let mut candidates: Vec<&TimeSeries> = chain
            .entries()
            .iter()
            .map(|e| &e.series)
            .filter(|s| cfg.sparsity.keeps(full_len, s.len()))
            .collect();
        if candidates.last().is_none_or(|s| s.len() != full_len) {
            candidates.push(&averaged.mean);
        }
        let scores: Vec<f64> = candidates
            .par_iter()
            .map(|c| {
                if c.len() == full_len && **c == averaged.mean {
                    averaged.variation
                } else {
                    variation_of(c, sample)
                }
            })
            .collect();

        // increasing length, so the first of a tied group is the shortest
        let mut pick = 0;
        for (k, &f) in scores.iter().enumerate() {
            if f < scores[pick] - tolerance(scores[pick]) {
                pick = k;
            }
        }
        let (cand, cand_f) = (candidates[pick].clone(), scores[pick]);

        let improves = cand_f < best_f - tolerance(best_f);
        let shortens = !improves && cand_f <= best_f + tolerance(best_f) && cand.len() < best.len();
        trace.push(TraceRecord {
            epoch: iterations,
            variation: if improves || shortens { cand_f } else { best_f },
            length: if improves || shortens {
                cand.len()
            } else {
                best.len()
            },
        });
        if !(improves || shortens) {
            break;
        }
        best = cand.clone();
        best_f = cand_f;
        z = cand;
    }

    AveragingResult {
        mean: best,
        variation: best_f,
        trace,
        epochs,
        seed: cfg.seed,
        method: format!("{}-{}", averager.name(), compressor.name()),
        config: cfg.clone(),
    }
}

/// [`ac`] packaged as an [`Averager`], so it can drive k-means or the
/// experiment harness like any base method.
pub struct AverageCompress {
    pub base: Box<dyn Averager>,
    pub compressor: Compressor,
    pub config: AveragerConfig,
}

impl Averager for AverageCompress {
    fn name(&self) -> String {
        let mut name = format!("{}-{}", self.base.name(), self.compressor.name());
        if let Some(cap) = self.config.ac_max_iterations {
            name.push_str(&cap.to_string());
        }
        name
    }

    fn config(&self) -> &AveragerConfig {
        &self.config
    }

    fn average(&self, sample: &Sample, init: &TimeSeries) -> AveragingResult {
        let mut r = ac(sample, init, &self.base, self.compressor, &self.config);
        r.method = self.name();
        r
    }
}
