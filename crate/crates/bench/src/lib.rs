//! Criterion benchmarks for the `acmean` crate live under `benches/`.
