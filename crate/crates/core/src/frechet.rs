//! The Fréchet function of a sample, medoids, the length bound for
//! unconstrained means, and an exhaustive exact-mean search for tiny samples.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::warp::{all_paths, count_warping_paths, dtw_sq};

/// Largest number of path tuples [`exact_mean_oracle`] will visit.
pub const ORACLE_LIMIT: u128 = 1_000_000;

/// A non-empty multiset of time series with a fixed member order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TimeSeries>", into = "Vec<TimeSeries>")]
pub struct Sample(Vec<TimeSeries>);

impl Sample {
    pub fn new(members: Vec<TimeSeries>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("a sample needs at least one time series"));
        }
        Ok(Sample(members))
    }

    pub fn members(&self) -> &[TimeSeries] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TimeSeries> {
        self.0.iter()
    }
}

impl TryFrom<Vec<TimeSeries>> for Sample {
    type Error = Error;

    fn try_from(members: Vec<TimeSeries>) -> Result<Self> {
        Sample::new(members)
    }
}

impl From<Sample> for Vec<TimeSeries> {
    fn from(sample: Sample) -> Self {
        sample.0
    }
}

/// Mean squared DTW distance from `z` to the sample members.
pub fn frechet_variation(z: &TimeSeries, sample: &Sample) -> f64 {
    variation_of(z, sample)
}

pub(crate) fn variation_of(z: &[f64], sample: &Sample) -> f64 {
    let dists: Vec<f64> = sample.0.par_iter().map(|x| dtw_sq(z, x)).collect();
    dists.iter().sum::<f64>() / sample.len() as f64
}

/// The member minimizing the summed squared DTW distance to all members.
/// Ties go to the smallest index.
pub fn medoid(sample: &Sample) -> (usize, TimeSeries) {
    let n = sample.len();
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let dists: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| dtw_sq(&sample.0[i], &sample.0[j]))
        .collect();
    let mut totals = vec![0.0; n];
    for (&(i, j), d) in pairs.iter().zip(&dists) {
        totals[i] += d;
        totals[j] += d;
    }
    let mut best = 0;
    for (i, &t) in totals.iter().enumerate() {
        if t < totals[best] {
            best = i;
        }
    }
    (best, sample.0[best].clone())
}

/// `sum |x| - 2 (N - 1)`, floored at 1 (all-singleton samples would
/// otherwise go non-positive).
///
/// Not a safe search limit on its own: `{(0, -1), (0)}` has bound 1, yet
/// `(0, -0.5)` beats every length-1 candidate. See [`search_length`].
pub fn reduction_bound(sample: &Sample) -> usize {
    let total: usize = sample.iter().map(|x| x.len()).sum();
    total.saturating_sub(2 * (sample.len() - 1)).max(1)
}

/// Longest mean length worth searching exhaustively: the larger of
/// [`reduction_bound`] and the longest member.
pub fn search_length(sample: &Sample) -> usize {
    let longest = sample.iter().map(|x| x.len()).max().unwrap_or(1);
    reduction_bound(sample).max(longest)
}

/// Result of the exhaustive mean search.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMean {
    pub mean: TimeSeries,
    pub variation: f64,
    /// Number of path tuples evaluated.
    pub tuples: u128,
}

/// Tuples the oracle would visit for lengths `1..=max_len`.
pub fn oracle_workload(sample: &Sample, max_len: usize) -> u128 {
    (1..=max_len)
        .map(|m| {
            sample
                .iter()
                .map(|x| count_warping_paths(m, x.len()))
                .fold(1u128, |acc, c| acc.saturating_mul(c))
        })
        .fold(0u128, |acc, c| acc.saturating_add(c))
}

/// Exact sample mean over all series of length at most `max_len`.
///
/// For every length `m` and every tuple of warping paths (one per member),
/// each mean element is set to the average of the sample elements aligned
/// to it, which minimizes the induced cost for that tuple. The global
/// minimum over tuples is the minimum of the Fréchet function. Among equal
/// optima the shortest mean wins, then the first tuple in enumeration order.
pub fn exact_mean_oracle(sample: &Sample, max_len: usize) -> Result<OracleMean> {
    if max_len == 0 {
        return Err(Error::invalid("maximum mean length must be positive"));
    }
    let workload = oracle_workload(sample, max_len);
    if workload > ORACLE_LIMIT {
        return Err(Error::Capacity(format!(
            "exact mean search needs {workload} path tuples (limit {ORACLE_LIMIT})"
        )));
    }

    let n = sample.len() as f64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for m in 1..=max_len {
        let path_sets: Vec<_> = sample.iter().map(|x| all_paths(m, x.len())).collect();
        let mut sums = vec![0.0; m];
        let mut counts = vec![0usize; m];
        for tuple in path_sets
            .iter()
            .map(|ps| ps.iter())
            .multi_cartesian_product()
        {
            sums.iter_mut().for_each(|s| *s = 0.0);
            counts.iter_mut().for_each(|c| *c = 0);
            for (path, x) in tuple.iter().zip(sample.iter()) {
                for &(i, j) in path.points() {
                    sums[i] += x[j];
                    counts[i] += 1;
                }
            }
            let z: Vec<f64> = sums
                .iter()
                .zip(&counts)
                .map(|(s, &c)| s / c as f64)
                .collect();
            let cost: f64 = tuple
                .iter()
                .zip(sample.iter())
                .map(|(path, x)| {
                    path.points()
                        .iter()
                        .map(|&(i, j)| (z[i] - x[j]).powi(2))
                        .sum::<f64>()
                })
                .sum::<f64>()
                / n;
            let improves = match &best {
                None => true,
                Some((b, _)) => cost < *b - 1e-12 * b.abs().max(1.0),
            };
            if improves {
                best = Some((cost, z));
            }
        }
    }

    let (_, z) = best.expect("at least one length is searched");
    let mean = TimeSeries::from_vec_unchecked(z);
    let variation = frechet_variation(&mean, sample);
    Ok(OracleMean {
        mean,
        variation,
        tuples: workload,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    fn sample(xs: &[&[f64]]) -> Sample {
        Sample::new(xs.iter().map(|x| ts(x)).collect()).unwrap()
    }

    #[test]
    fn variation_examples() {
        let x = ts(&[1.0, 4.0, 2.0]);
        assert_eq!(
            frechet_variation(&x, &Sample::new(vec![x.clone()]).unwrap()),
            0.0
        );
        assert_eq!(
            frechet_variation(&ts(&[1.0]), &sample(&[&[0.0], &[2.0]])),
            1.0
        );
        // (2a^2 + (a-2)^2) / 2 at a = 2/3
        let f = frechet_variation(&ts(&[2.0 / 3.0]), &sample(&[&[0.0, 0.0], &[2.0]]));
        assert!((f - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_sample_rejected() {
        assert!(Sample::new(vec![]).is_err());
    }

    #[test]
    fn medoid_examples() {
        let x = ts(&[3.0, 1.0]);
        assert_eq!(medoid(&Sample::new(vec![x.clone()]).unwrap()), (0, x));
        assert_eq!(medoid(&sample(&[&[0.0], &[0.0], &[4.0]])), (0, ts(&[0.0])));
        assert_eq!(
            medoid(&sample(&[&[1.0, 2.0], &[1.0, 2.0], &[9.0, 9.0]])),
            (0, ts(&[1.0, 2.0]))
        );
        assert_eq!(medoid(&sample(&[&[9.0], &[0.0], &[1.0]])), (2, ts(&[1.0])));
    }

    #[test]
    fn reduction_bound_examples() {
        let x = ts(&[0.0; 24]);
        assert_eq!(
            reduction_bound(&Sample::new(vec![x.clone(), x]).unwrap()),
            46
        );
        assert_eq!(reduction_bound(&sample(&[&[1.0, 2.0, 3.0, 4.0, 5.0]])), 5);
        assert_eq!(
            reduction_bound(&sample(&[&[0.0; 3], &[0.0; 4], &[0.0; 5]])),
            8
        );
        assert_eq!(reduction_bound(&sample(&[&[1.0], &[2.0], &[3.0]])), 1);
    }

    #[test]
    fn oracle_examples() {
        let r = exact_mean_oracle(&sample(&[&[0.0], &[2.0]]), 1).unwrap();
        assert_eq!(r.mean.values(), &[1.0]);
        assert_eq!(r.variation, 1.0);

        // m = 1 optimum 4/3 beats the m = 2 optimum 2
        let r = exact_mean_oracle(&sample(&[&[0.0, 0.0], &[2.0]]), 2).unwrap();
        assert_eq!(r.mean.len(), 1);
        assert!((r.mean[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((r.variation - 4.0 / 3.0).abs() < 1e-12);

        let x: &[f64] = &[1.0, -2.0, 0.5];
        let r = exact_mean_oracle(&sample(&[x, x]), 3).unwrap();
        assert_eq!(r.mean.values(), x);
        assert_eq!(r.variation, 0.0);
    }

    #[test]
    fn oracle_guard() {
        let long = [0.0; 12];
        let s = sample(&[&long, &long, &long]);
        assert!(matches!(exact_mean_oracle(&s, 12), Err(Error::Capacity(_))));
        assert!(exact_mean_oracle(&s, 0).is_err());
    }
}
