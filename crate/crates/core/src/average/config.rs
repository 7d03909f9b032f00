use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which chain lengths the C-step evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainSparsity {
    Full,
    /// Only lengths `|z|, |z| - k, |z| - 2k, ...`.
    Stride(usize),
}

impl ChainSparsity {
    pub(crate) fn keeps(self, full_len: usize, len: usize) -> bool {
        match self {
            ChainSparsity::Full => true,
            ChainSparsity::Stride(k) => (full_len - len).is_multiple_of(k),
        }
    }
}

/// Hyperparameters shared by all averagers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AveragerConfig {
    /// DBA epoch limit.
    pub max_epochs: usize,
    /// SSG epoch limit; `None` means `max(50, ceil(5000 / N))`.
    pub ssg_max_epochs: Option<usize>,
    /// SSG epochs without improvement before stopping.
    pub patience: usize,
    /// Fixed SSG learning rate.
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Relative decrease of the Fréchet variation below which DBA stops.
    pub tolerance: f64,
    pub seed: u64,
    pub sparsity: ChainSparsity,
    /// Plain `z -= eta * g` updates instead of Adam.
    pub vanilla: bool,
    /// Reshuffle the sample every SSG epoch.
    pub shuffle: bool,
    /// Cap on average-compress iterations (`None` runs to convergence).
    pub ac_max_iterations: Option<usize>,
    /// Learning-rate search stops once the rate drops to this value.
    pub min_learning_rate: f64,
    /// Learning-rate search stops after this many non-improving rates.
    pub lr_patience: usize,
}

impl Default for AveragerConfig {
    fn default() -> Self {
        AveragerConfig {
            max_epochs: 50,
            ssg_max_epochs: None,
            patience: 50,
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            tolerance: 1e-10,
            seed: 0,
            sparsity: ChainSparsity::Full,
            vanilla: false,
            shuffle: true,
            ac_max_iterations: None,
            min_learning_rate: 1e-6,
            lr_patience: 2,
        }
    }
}

impl AveragerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tolerance", self.tolerance),
            ("epsilon", self.epsilon),
            ("min_learning_rate", self.min_learning_rate),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::invalid(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid("learning_rate must be non-negative"));
        }
        for (name, beta) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&beta) {
                return Err(Error::invalid(format!(
                    "{name} must lie in [0, 1), got {beta}"
                )));
            }
        }
        if self.patience == 0 || self.lr_patience == 0 {
            return Err(Error::invalid("patience must be at least 1"));
        }
        if self.max_epochs == 0 {
            return Err(Error::invalid("max_epochs must be at least 1"));
        }
        if self.ssg_max_epochs == Some(0) {
            return Err(Error::invalid("ssg_max_epochs must be at least 1"));
        }
        if let ChainSparsity::Stride(0) = self.sparsity {
            return Err(Error::invalid("chain stride must be at least 1"));
        }
        Ok(())
    }

    pub(crate) fn ssg_epoch_limit(&self, sample_size: usize) -> usize {
        self.ssg_max_epochs
            .unwrap_or_else(|| 50.max(5000usize.div_ceil(sample_size)))
    }
}
