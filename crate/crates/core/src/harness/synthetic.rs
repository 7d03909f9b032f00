//! Seeded generators for small labeled datasets in the style of the UCR
//! archive, used where real archive files are not at hand.

use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::harness::dataset::{Dataset, Delimiter, Provenance, Record};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// Cylinder, bell and funnel shapes on a noisy baseline.
    Cbf,
    /// Gaussian bumps at class-specific positions under random time warps.
    WarpedBumps,
    /// Level shifts with class-specific direction and random onset.
    Steps,
}

impl SyntheticKind {
    pub const ALL: [SyntheticKind; 3] = [
        SyntheticKind::Cbf,
        SyntheticKind::WarpedBumps,
        SyntheticKind::Steps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::Cbf => "cbf",
            SyntheticKind::WarpedBumps => "bumps",
            SyntheticKind::Steps => "steps",
        }
    }

    fn classes(self) -> usize {
        match self {
            SyntheticKind::Cbf => 3,
            SyntheticKind::WarpedBumps => 3,
            SyntheticKind::Steps => 2,
        }
    }
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cbf" => Ok(SyntheticKind::Cbf),
            "bumps" => Ok(SyntheticKind::WarpedBumps),
            "steps" => Ok(SyntheticKind::Steps),
            other => Err(Error::invalid(format!(
                "unknown synthetic dataset `{other}`"
            ))),
        }
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn cbf(class: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let scale = len as f64 / 128.0;
    let a = rng.random_range(16.0..=32.0) * scale;
    let b = a + rng.random_range(32.0..=96.0) * scale;
    let amp = 6.0 + normal(rng);
    (0..len)
        .map(|t| {
            let t = t as f64;
            let inside = t >= a && t <= b;
            let shape = match (class, inside) {
                (_, false) => 0.0,
                (0, true) => 1.0,
                (1, true) => (t - a) / (b - a),
                _ => (b - t) / (b - a),
            };
            amp * shape + normal(rng)
        })
        .collect()
}

/// Monotone map of [0, 1] onto itself with a random mid-point shift.
fn warp(u: f64, pivot: f64) -> f64 {
    if u < 0.5 {
        u / 0.5 * pivot
    } else {
        pivot + (u - 0.5) / 0.5 * (1.0 - pivot)
    }
}

fn bumps(class: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let centers: &[f64] = match class {
        0 => &[0.3],
        1 => &[0.3, 0.7],
        _ => &[0.5],
    };
    let pivot = 0.5 + rng.random_range(-0.12..0.12);
    let width = 0.05 + rng.random_range(0.0..0.03);
    let amp = 3.0 + 0.4 * normal(rng);
    let sign = if class == 2 { -1.0 } else { 1.0 };
    (0..len)
        .map(|t| {
            let u = warp(t as f64 / (len - 1) as f64, pivot);
            let signal: f64 = centers
                .iter()
                .map(|c| (-(u - c).powi(2) / (2.0 * width * width)).exp())
                .sum();
            sign * amp * signal + 0.3 * normal(rng)
        })
        .collect()
}

fn steps(class: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let onset = rng.random_range(0.25..0.6) * len as f64;
    let ramp = rng.random_range(1.0..6.0);
    let level = 2.0 + 0.3 * normal(rng);
    let sign = if class == 0 { 1.0 } else { -1.0 };
    (0..len)
        .map(|t| {
            let s = ((t as f64 - onset) / ramp).clamp(0.0, 1.0);
            sign * level * s + 0.25 * normal(rng)
        })
        .collect()
}

/// `per_class` series of length `len` for every class of `kind`, classes
/// interleaved in record order.
pub fn generate(kind: SyntheticKind, per_class: usize, len: usize, seed: u64) -> Result<Dataset> {
    if per_class == 0 || len < 2 {
        return Err(Error::invalid(
            "need at least one series per class and length >= 2",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(per_class * kind.classes());
    for _ in 0..per_class {
        for class in 0..kind.classes() {
            let values = match kind {
                SyntheticKind::Cbf => cbf(class, len, &mut rng),
                SyntheticKind::WarpedBumps => bumps(class, len, &mut rng),
                SyntheticKind::Steps => steps(class, len, &mut rng),
            };
            records.push(Record {
                label: (class + 1).to_string(),
                series: TimeSeries::new(values)?,
            });
        }
    }
    Ok(Dataset {
        name: kind.name().to_string(),
        records,
        provenance: Provenance {
            paths: vec![PathBuf::from(format!("synthetic:{}", kind.name()))],
            delimiter: Delimiter::Tab,
        },
    })
}
