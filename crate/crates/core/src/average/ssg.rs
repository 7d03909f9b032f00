use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Averager, AveragerConfig, AveragingResult, TraceRecord};
use crate::frechet::{variation_of, Sample};
use crate::series::TimeSeries;
use crate::warp::{align_slices, WarpingPath};

/// Subgradient `2 (V z - W x)` of `dtw(z, x)^2` along `path`.
pub fn subgradient(z: &[f64], x: &[f64], path: &WarpingPath) -> Vec<f64> {
    let mut g = vec![0.0; z.len()];
    for &(i, j) in path.points() {
        g[i] += 2.0 * (z[i] - x[j]);
    }
    g
}

/// Update rule applied to each stochastic subgradient.
#[derive(Debug, Clone)]
pub enum Optimizer {
    Vanilla,
    Adam {
        beta1: f64,
        beta2: f64,
        epsilon: f64,
        step: i32,
        first: Vec<f64>,
        second: Vec<f64>,
    },
}

impl Optimizer {
    pub fn adam(len: usize, beta1: f64, beta2: f64, epsilon: f64) -> Self {
        Optimizer::Adam {
            beta1,
            beta2,
            epsilon,
            step: 0,
            first: vec![0.0; len],
            second: vec![0.0; len],
        }
    }

    fn for_config(len: usize, cfg: &AveragerConfig) -> Self {
        if cfg.vanilla {
            Optimizer::Vanilla
        } else {
            Optimizer::adam(len, cfg.beta1, cfg.beta2, cfg.epsilon)
        }
    }

    pub fn step(&mut self, z: &mut [f64], grad: &[f64], rate: f64) {
        match self {
            Optimizer::Vanilla => {
                for (zi, gi) in z.iter_mut().zip(grad) {
                    *zi -= rate * gi;
                }
            }
            Optimizer::Adam {
                beta1,
                beta2,
                epsilon,
                step,
                first,
                second,
            } => {
                *step += 1;
                let c1 = 1.0 - beta1.powi(*step);
                let c2 = 1.0 - beta2.powi(*step);
                for k in 0..z.len() {
                    first[k] = *beta1 * first[k] + (1.0 - *beta1) * grad[k];
                    second[k] = *beta2 * second[k] + (1.0 - *beta2) * grad[k] * grad[k];
                    let m_hat = first[k] / c1;
                    let v_hat = second[k] / c2;
                    z[k] -= rate * m_hat / (v_hat.sqrt() + *epsilon);
                }
            }
        }
    }
}

fn ssg_with_rate(
    sample: &Sample,
    init: &TimeSeries,
    cfg: &AveragerConfig,
    rate: f64,
) -> AveragingResult {
    let len = init.len();
    let limit = cfg.ssg_epoch_limit(sample.len());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut optimizer = Optimizer::for_config(len, cfg);
    let mut order: Vec<usize> = (0..sample.len()).collect();

    let mut z = init.values().to_vec();
    let mut best_f = variation_of(&z, sample);
    let mut best = z.clone();
    let mut trace = vec![TraceRecord {
        epoch: 0,
        variation: best_f,
        length: len,
    }];
    let mut stale = 0;
    let mut epochs = 0;

    while epochs < limit {
        if cfg.shuffle {
            order.shuffle(&mut rng);
        }
        for &i in &order {
            let x = &sample.members()[i];
            let path = align_slices(&z, x).path;
            let grad = subgradient(&z, x, &path);
            optimizer.step(&mut z, &grad, rate);
        }
        epochs += 1;

        let f = variation_of(&z, sample);
        trace.push(TraceRecord {
            epoch: epochs,
            variation: f,
            length: len,
        });
        if !f.is_finite() {
            break;
        }
        if f < best_f {
            best_f = f;
            best.copy_from_slice(&z);
            stale = 0;
        } else {
            stale += 1;
            if stale >= cfg.patience {
                break;
            }
        }
    }

    AveragingResult {
        mean: TimeSeries::from_vec_unchecked(best),
        variation: best_f,
        trace,
        epochs,
        seed: cfg.seed,
        method: "ssg".into(),
        config: cfg.clone(),
    }
}

/// Stochastic subgradient averaging at the fixed rate `cfg.learning_rate`.
/// Returns the best iterate by Fréchet variation, checked once per epoch.
pub fn ssg(sample: &Sample, init: &TimeSeries, cfg: &AveragerConfig) -> AveragingResult {
    ssg_with_rate(sample, init, cfg, cfg.learning_rate)
}

/// Rates `sqrt(n) / 2^i` for `i = 1, 2, ...` while above `floor`.
pub fn learning_rate_schedule(sample_size: usize, floor: f64) -> impl Iterator<Item = f64> {
    let top = (sample_size as f64).sqrt();
    (1..)
        .map(move |i| top / 2f64.powi(i))
        .take_while(move |&rate| rate > floor)
}

/// SSG restarted from `init` for each rate of [`learning_rate_schedule`],
/// keeping the best solution. Stops after `cfg.lr_patience` consecutive
/// rates without improvement.
pub fn ssg_auto_lr(sample: &Sample, init: &TimeSeries, cfg: &AveragerConfig) -> AveragingResult {
    let mut best: Option<AveragingResult> = None;
    let mut trace = Vec::new();
    let mut epochs = 0;
    let mut stale = 0;

    for (i, rate) in learning_rate_schedule(sample.len(), cfg.min_learning_rate).enumerate() {
        let run = ssg_with_rate(sample, init, cfg, rate);
        epochs += run.epochs;
        let improved = best.as_ref().is_none_or(|b| run.variation < b.variation);
        if improved {
            best = Some(run);
            stale = 0;
        } else {
            stale += 1;
        }
        let b = best.as_ref().unwrap();
        trace.push(TraceRecord {
            epoch: i + 1,
            variation: b.variation,
            length: b.mean.len(),
        });
        if stale >= cfg.lr_patience {
            break;
        }
    }

    let best = best.unwrap_or_else(|| {
        // no rate above the floor: report the initial guess
        let f = variation_of(init, sample);
        AveragingResult {
            mean: init.clone(),
            variation: f,
            trace: Vec::new(),
            epochs: 0,
            seed: cfg.seed,
            method: String::new(),
            config: cfg.clone(),
        }
    });
    AveragingResult {
        trace,
        epochs,
        method: "ssg-auto".into(),
        ..best
    }
}

#[derive(Debug, Clone, Default)]
pub struct Ssg {
    pub config: AveragerConfig,
}

impl Averager for Ssg {
    fn name(&self) -> String {
        "ssg".into()
    }

    fn config(&self) -> &AveragerConfig {
        &self.config
    }

    fn average(&self, sample: &Sample, init: &TimeSeries) -> AveragingResult {
        ssg(sample, init, &self.config)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SsgAuto {
    pub config: AveragerConfig,
}

impl Averager for SsgAuto {
    fn name(&self) -> String {
        "ssg-auto".into()
    }

    fn config(&self) -> &AveragerConfig {
        &self.config
    }

    fn average(&self, sample: &Sample, init: &TimeSeries) -> AveragingResult {
        ssg_auto_lr(sample, init, &self.config)
    }
}
