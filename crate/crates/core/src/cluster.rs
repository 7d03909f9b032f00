//! k-means in DTW space with a pluggable averager as centroid update.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::average::Averager;
use crate::error::{Error, Result};
use crate::frechet::{medoid, Sample};
use crate::series::TimeSeries;
use crate::warp::dtw_sq;

pub const DEFAULT_MAX_ITERS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub centroids: Vec<TimeSeries>,
    pub assignments: Vec<usize>,
    /// k-means error of `centroids`.
    pub error: f64,
    /// Completed update steps.
    pub iterations: usize,
    /// Error after initialization and after every update step.
    pub trace: Vec<f64>,
}

/// How the initial centroids are chosen.
#[derive(Debug, Clone)]
pub enum Init<'a> {
    /// One centroid per distinct label: the medoid of that class. Classes
    /// are ordered by first appearance.
    ClassMedoids(&'a [String]),
    /// A seeded random first series, then repeatedly the series farthest
    /// (by squared DTW) from the chosen ones.
    FarthestFirst {
        seed: u64,
    },
    Explicit(Vec<TimeSeries>),
}

/// Mean squared DTW distance from every series to its nearest centroid.
pub fn kmeans_error(series: &[TimeSeries], centroids: &[TimeSeries]) -> Result<f64> {
    if series.is_empty() || centroids.is_empty() {
        return Err(Error::invalid("k-means error needs series and centroids"));
    }
    Ok(assign(series, centroids).1)
}

/// Nearest centroid per series (smallest index on ties) and the error.
fn assign(series: &[TimeSeries], centroids: &[TimeSeries]) -> (Vec<usize>, f64) {
    let nearest: Vec<(usize, f64)> = series
        .par_iter()
        .map(|x| {
            let mut best = (0, f64::INFINITY);
            for (c, z) in centroids.iter().enumerate() {
                let d = dtw_sq(x, z);
                if d < best.1 {
                    best = (c, d);
                }
            }
            best
        })
        .collect();
    let total: f64 = nearest.iter().map(|&(_, d)| d).sum();
    (
        nearest.into_iter().map(|(c, _)| c).collect(),
        total / series.len() as f64,
    )
}

/// Distinct labels in order of first appearance.
pub fn class_order(labels: &[String]) -> Vec<String> {
    let mut order: Vec<String> = Vec::new();
    for l in labels {
        if !order.contains(l) {
            order.push(l.clone());
        }
    }
    order
}

fn initial_centroids(series: &[TimeSeries], k: usize, init: Init<'_>) -> Result<Vec<TimeSeries>> {
    match init {
        Init::Explicit(cs) => {
            if cs.len() != k {
                return Err(Error::invalid(format!(
                    "expected {k} initial centroids, got {}",
                    cs.len()
                )));
            }
            Ok(cs)
        }
        Init::ClassMedoids(labels) => {
            if labels.len() != series.len() {
                return Err(Error::invalid("one label per series is required"));
            }
            let classes = class_order(labels);
            if classes.len() != k {
                return Err(Error::invalid(format!(
                    "{} classes present but k = {k}",
                    classes.len()
                )));
            }
            Ok(classes
                .iter()
                .map(|c| {
                    let members: Vec<TimeSeries> = series
                        .iter()
                        .zip(labels)
                        .filter(|(_, l)| *l == c)
                        .map(|(x, _)| x.clone())
                        .collect();
                    medoid(&Sample::new(members).expect("class is non-empty")).1
                })
                .collect())
        }
        Init::FarthestFirst { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut chosen = vec![rng.random_range(0..series.len())];
            let mut nearest: Vec<f64> = series
                .par_iter()
                .map(|x| dtw_sq(x, &series[chosen[0]]))
                .collect();
            while chosen.len() < k {
                let mut far = None;
                for (i, &d) in nearest.iter().enumerate() {
                    if chosen.contains(&i) {
                        continue;
                    }
                    if far.is_none_or(|(_, best)| d > best) {
                        far = Some((i, d));
                    }
                }
                let (next, _) = far.expect("k <= n leaves a candidate");
                chosen.push(next);
                let fresh: Vec<f64> = series
                    .par_iter()
                    .map(|x| dtw_sq(x, &series[next]))
                    .collect();
                for (n, f) in nearest.iter_mut().zip(fresh) {
                    *n = n.min(f);
                }
            }
            Ok(chosen.into_iter().map(|i| series[i].clone()).collect())
        }
    }
}

/// Lloyd-style k-means: assign every series to its nearest centroid, then
/// re-average each cluster starting from its current centroid, until the
/// assignments stop changing or `max_iters` updates have run. An empty
/// cluster keeps its previous centroid. The best-error iterate is returned.
pub fn kmeans<A: Averager + ?Sized>(
    series: &[TimeSeries],
    k: usize,
    averager: &A,
    init: Init<'_>,
    max_iters: usize,
) -> Result<Clustering> {
    if k == 0 || k > series.len() {
        return Err(Error::invalid(format!(
            "k = {k} must lie in 1..={}",
            series.len()
        )));
    }
    let mut centroids = initial_centroids(series, k, init)?;
    let (mut assignments, error) = assign(series, &centroids);
    let mut trace = vec![error];
    let mut best = (error, centroids.clone(), assignments.clone(), 0);
    let mut iterations = 0;

    while iterations < max_iters {
        centroids = (0..k)
            .into_par_iter()
            .map(|c| {
                let members: Vec<TimeSeries> = series
                    .iter()
                    .zip(&assignments)
                    .filter(|(_, &a)| a == c)
                    .map(|(x, _)| x.clone())
                    .collect();
                match Sample::new(members) {
                    Ok(sample) => averager.average(&sample, &centroids[c]).mean,
                    Err(_) => centroids[c].clone(),
                }
            })
            .collect();
        iterations += 1;

        let (next, next_error) = assign(series, &centroids);
        trace.push(next_error);
        if next_error < best.0 {
            best = (next_error, centroids.clone(), next.clone(), iterations);
        }
        let stable = next == assignments;
        assignments = next;
        if stable {
            break;
        }
    }
    let (error, centroids, assignments, _) = best;
    Ok(Clustering {
        centroids,
        assignments,
        error,
        iterations,
        trace,
    })
}
