//! Averaging algorithms for samples of time series: DBA, stochastic
//! subgradient descent (with Adam and an automatic learning-rate search),
//! and the generic average-compress scheme that wraps any of them.

mod ac;
mod config;
mod dba;
mod method;
mod ssg;

use serde::{Deserialize, Serialize};

use crate::frechet::Sample;
use crate::series::TimeSeries;

pub use ac::{ac, AverageCompress};
pub use config::{AveragerConfig, ChainSparsity};
pub use dba::{dba, Dba};
pub use method::{BaseMethod, Method};
pub use ssg::{learning_rate_schedule, ssg, ssg_auto_lr, subgradient, Optimizer, Ssg, SsgAuto};

/// One step of an averaging run. `epoch` counts epochs for DBA and SSG,
/// learning rates for the rate search, and outer iterations for
/// average-compress.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub epoch: usize,
    pub variation: f64,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragingResult {
    pub mean: TimeSeries,
    /// Fréchet variation of `mean`.
    pub variation: f64,
    pub trace: Vec<TraceRecord>,
    /// Total optimization epochs, summed over nested runs.
    pub epochs: usize,
    pub seed: u64,
    pub method: String,
    pub config: AveragerConfig,
}

/// Anything that turns a sample and an initial guess into a mean.
pub trait Averager: Send + Sync {
    fn name(&self) -> String;

    fn config(&self) -> &AveragerConfig;

    fn average(&self, sample: &Sample, init: &TimeSeries) -> AveragingResult;
}

impl<A: Averager + ?Sized> Averager for Box<A> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn config(&self) -> &AveragerConfig {
        (**self).config()
    }

    fn average(&self, sample: &Sample, init: &TimeSeries) -> AveragingResult {
        (**self).average(sample, init)
    }
}
