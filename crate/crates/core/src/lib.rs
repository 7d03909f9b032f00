//! Sample means of time series under dynamic time warping.
//!
//! The crate is layered bottom-up:
//!
//! - [`warp`]: DTW distance, optimal warping paths, expansions and
//!   valence/warping matrices.
//! - [`frechet`]: the Fréchet function, medoids, the length bound for
//!   unconstrained means, and an exhaustive exact mean for tiny samples.
//! - [`compress`]: compression chains (greedy ADA and exact MSE).
//! - [`average`]: DBA, stochastic subgradient averaging with Adam, and the
//!   average-compress scheme over any averager/compressor pair.
//! - [`cluster`]: k-means in DTW space.
//! - [`harness`]: datasets, experiments, metrics and reports.

pub mod average;
pub mod cluster;
pub mod compress;
mod error;
pub mod frechet;
pub mod harness;
mod series;
pub mod warp;

pub use average::{ac, dba, ssg, ssg_auto_lr, Averager, AveragerConfig, AveragingResult, Method};
pub use cluster::{kmeans, kmeans_error, Clustering, Init};
pub use compress::{ada_chain, ada_merge, mse_chain, mse_compress, CompressionChain, Compressor};
pub use error::{Error, Result};
pub use frechet::{
    exact_mean_oracle, frechet_variation, medoid, reduction_bound, search_length, Sample,
};
pub use series::TimeSeries;
pub use warp::{
    dtw_distance, dtw_distance_squared, enumerate_warping_paths, expansions, optimal_warping_path,
    path_matrices, warping_cost, PathMatrices, WarpingPath,
};
