//! Dynamic time warping: distances, optimal warping paths, expansions and the
//! warping/valence matrices derived from a path.
//!
//! Grid coordinates are zero-based: a path of order `(m, n)` runs from
//! `(0, 0)` to `(m - 1, n - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Largest `m + n` accepted by [`enumerate_warping_paths`].
pub const ENUMERATION_LIMIT: usize = 16;

/// A monotone lattice path through an `m x n` grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WarpingPath {
    rows: usize,
    cols: usize,
    points: Vec<(usize, usize)>,
}

impl WarpingPath {
    /// Validates boundary and step conditions.
    pub fn new(order: (usize, usize), points: Vec<(usize, usize)>) -> Result<Self> {
        let (rows, cols) = order;
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(format!(
                "path order {rows}x{cols} must be positive"
            )));
        }
        if points.first() != Some(&(0, 0)) || points.last() != Some(&(rows - 1, cols - 1)) {
            return Err(Error::invalid(format!(
                "path must start at (0,0) and end at ({},{})",
                rows - 1,
                cols - 1
            )));
        }
        for w in points.windows(2) {
            let (di, dj) = (w[1].0.wrapping_sub(w[0].0), w[1].1.wrapping_sub(w[0].1));
            if !matches!((di, dj), (1, 0) | (0, 1) | (1, 1)) {
                return Err(Error::invalid(format!(
                    "illegal step {:?} -> {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(WarpingPath { rows, cols, points })
    }

    pub(crate) fn from_points_unchecked(
        rows: usize,
        cols: usize,
        points: Vec<(usize, usize)>,
    ) -> Self {
        WarpingPath { rows, cols, points }
    }

    /// The main diagonal of an `n x n` grid.
    pub fn diagonal(n: usize) -> Result<Self> {
        WarpingPath::new((n, n), (0..n).map(|i| (i, i)).collect())
    }

    pub fn order(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn check_order(&self, x: &[f64], y: &[f64]) -> Result<()> {
        if (self.rows, self.cols) != (x.len(), y.len()) {
            return Err(Error::invalid(format!(
                "path of order {}x{} does not match series lengths {}x{}",
                self.rows,
                self.cols,
                x.len(),
                y.len()
            )));
        }
        Ok(())
    }
}

/// Valence and warping matrices of a path. The warping matrix is stored as
/// its nonzero coordinates, which are exactly the path points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMatrices {
    pub valence: Vec<usize>,
    pub warping: Vec<(usize, usize)>,
    pub cols: usize,
}

impl PathMatrices {
    pub fn rows(&self) -> usize {
        self.valence.len()
    }

    /// `W x`: for every row, the sum of the `x` values warped onto it.
    pub fn warp_sum(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows()];
        for &(i, j) in &self.warping {
            out[i] += x[j];
        }
        out
    }
}

/// An optimal warping path together with its cost (the squared DTW distance).
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub path: WarpingPath,
    pub cost: f64,
}

#[inline]
fn sq(a: f64, b: f64) -> f64 {
    let d = a - b;
    d * d
}

/// Squared DTW distance over raw slices; both must be non-empty.
pub(crate) fn dtw_sq(x: &[f64], y: &[f64]) -> f64 {
    debug_assert!(!x.is_empty() && !y.is_empty());
    let n = y.len();
    let mut prev = vec![f64::INFINITY; n + 1];
    let mut curr = vec![f64::INFINITY; n + 1];
    prev[0] = 0.0;
    for &xi in x {
        curr[0] = f64::INFINITY;
        for j in 1..=n {
            let best = prev[j - 1].min(prev[j]).min(curr[j - 1]);
            curr[j] = sq(xi, y[j - 1]) + best;
        }
        std::mem::swap(&mut prev, &mut curr);
        prev[0] = f64::INFINITY;
    }
    prev[n]
}

/// Optimal alignment over raw slices. Backtracking prefers the diagonal
/// predecessor, then `(i-1, j)`, then `(i, j-1)`.
pub(crate) fn align_slices(x: &[f64], y: &[f64]) -> Alignment {
    debug_assert!(!x.is_empty() && !y.is_empty());
    let (m, n) = (x.len(), y.len());
    let w = n + 1;
    let mut acc = vec![f64::INFINITY; (m + 1) * w];
    acc[0] = 0.0;
    for i in 1..=m {
        for j in 1..=n {
            let best = acc[(i - 1) * w + j - 1]
                .min(acc[(i - 1) * w + j])
                .min(acc[i * w + j - 1]);
            acc[i * w + j] = sq(x[i - 1], y[j - 1]) + best;
        }
    }

    let mut points = Vec::with_capacity(m + n - 1);
    let (mut i, mut j) = (m, n);
    loop {
        points.push((i - 1, j - 1));
        if i == 1 && j == 1 {
            break;
        }
        let diag = acc[(i - 1) * w + j - 1];
        let vert = acc[(i - 1) * w + j];
        let horiz = acc[i * w + j - 1];
        if diag <= vert && diag <= horiz {
            i -= 1;
            j -= 1;
        } else if vert <= horiz {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    points.reverse();
    Alignment {
        path: WarpingPath::from_points_unchecked(m, n, points),
        cost: acc[m * w + n],
    }
}

pub fn dtw_distance(x: &TimeSeries, y: &TimeSeries) -> f64 {
    dtw_sq(x, y).sqrt()
}

/// Squared DTW distance, the quantity every averaging objective is built on.
pub fn dtw_distance_squared(x: &TimeSeries, y: &TimeSeries) -> f64 {
    dtw_sq(x, y)
}

pub fn optimal_warping_path(x: &TimeSeries, y: &TimeSeries) -> WarpingPath {
    align_slices(x, y).path
}

pub fn align(x: &TimeSeries, y: &TimeSeries) -> Alignment {
    align_slices(x, y)
}

pub fn warping_cost(x: &TimeSeries, y: &TimeSeries, path: &WarpingPath) -> Result<f64> {
    path.check_order(x, y)?;
    Ok(path.points.iter().map(|&(i, j)| sq(x[i], y[j])).sum())
}

/// The expansions of `x` and `y` along `path`, each of length `path.len()`.
pub fn expansions(
    path: &WarpingPath,
    x: &TimeSeries,
    y: &TimeSeries,
) -> Result<(TimeSeries, TimeSeries)> {
    path.check_order(x, y)?;
    let ex = path.points.iter().map(|&(i, _)| x[i]).collect();
    let ey = path.points.iter().map(|&(_, j)| y[j]).collect();
    Ok((
        TimeSeries::from_vec_unchecked(ex),
        TimeSeries::from_vec_unchecked(ey),
    ))
}

pub fn path_matrices(path: &WarpingPath) -> PathMatrices {
    let mut valence = vec![0usize; path.rows];
    for &(i, _) in &path.points {
        valence[i] += 1;
    }
    PathMatrices {
        valence,
        warping: path.points.clone(),
        cols: path.cols,
    }
}

/// Number of warping paths of order `(m, n)`: the Delannoy number
/// `D(m-1, n-1)`, saturating at `u128::MAX`.
pub fn count_warping_paths(m: usize, n: usize) -> u128 {
    if m == 0 || n == 0 {
        return 0;
    }
    let (a, b) = (m - 1, n - 1);
    let mut row = vec![1u128; b + 1];
    for _ in 0..a {
        let mut next = vec![1u128; b + 1];
        for j in 1..=b {
            next[j] = next[j - 1]
                .saturating_add(row[j])
                .saturating_add(row[j - 1]);
        }
        row = next;
    }
    row[b]
}

/// Every warping path of order `(m, n)`, exactly once. Guarded by
/// `m + n <= ENUMERATION_LIMIT`.
pub fn enumerate_warping_paths(m: usize, n: usize) -> Result<Vec<WarpingPath>> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("path order must be positive"));
    }
    if m + n > ENUMERATION_LIMIT {
        return Err(Error::Capacity(format!(
            "enumerating {m}x{n} warping paths exceeds m + n <= {ENUMERATION_LIMIT}"
        )));
    }
    Ok(all_paths(m, n))
}

pub(crate) fn all_paths(m: usize, n: usize) -> Vec<WarpingPath> {
    fn walk(m: usize, n: usize, current: &mut Vec<(usize, usize)>, out: &mut Vec<WarpingPath>) {
        let (i, j) = *current.last().unwrap();
        if (i, j) == (m - 1, n - 1) {
            out.push(WarpingPath::from_points_unchecked(m, n, current.clone()));
            return;
        }
        for (di, dj) in [(1, 1), (1, 0), (0, 1)] {
            let (ni, nj) = (i + di, j + dj);
            if ni < m && nj < n {
                current.push((ni, nj));
                walk(m, n, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(m, n, &mut vec![(0, 0)], &mut out);
    out
}
