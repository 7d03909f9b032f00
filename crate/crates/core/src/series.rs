use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-empty sequence of finite real samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeSeries(Vec<f64>);

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid(
                "time series must contain at least one value",
            ));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "time series value at index {pos} is not finite ({})",
                values[pos]
            )));
        }
        Ok(TimeSeries(values))
    }

    /// Builds a series from values already known to be finite and non-empty.
    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        debug_assert!(values.iter().all(|v| v.is_finite()));
        TimeSeries(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    /// Z-normalizes the series. A constant series maps to all zeros.
    pub fn z_normalized(&self) -> TimeSeries {
        let n = self.0.len() as f64;
        let mean = self.0.iter().sum::<f64>() / n;
        let var = self.0.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        if sd <= f64::EPSILON * mean.abs().max(1.0) {
            return TimeSeries(vec![0.0; self.0.len()]);
        }
        TimeSeries(self.0.iter().map(|v| (v - mean) / sd).collect())
    }

    /// Resamples to `len` points by nearest-index lookup.
    pub fn resampled(&self, len: usize) -> Result<TimeSeries> {
        if len == 0 {
            return Err(Error::invalid("resample length must be positive"));
        }
        let n = self.0.len();
        let values = (0..len)
            .map(|k| {
                let src = if len == 1 {
                    0
                } else {
                    ((k as f64) * ((n - 1) as f64) / ((len - 1) as f64)).round() as usize
                };
                self.0[src.min(n - 1)]
            })
            .collect();
        Ok(TimeSeries(values))
    }
}

impl Deref for TimeSeries {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        TimeSeries::new(values)
    }
}

impl From<TimeSeries> for Vec<f64> {
    fn from(series: TimeSeries) -> Vec<f64> {
        series.0
    }
}
