//! Independent oracles and the invariant suite shared by the property
//! tests and the acceptance run.

#![allow(dead_code)]

use std::fmt::Debug;

use acmean::average::{dba, ssg, AverageCompress, Dba};
use acmean::cluster::{kmeans, kmeans_error, Init};
use acmean::harness::report::{rows_from_csv, rows_to_csv};
use acmean::harness::{pdev, ExperimentKind, ExperimentReport, MetricTables, Reference, Row};
use acmean::warp::count_warping_paths;
use acmean::{
    ada_chain, ada_merge, dtw_distance, dtw_distance_squared, enumerate_warping_paths,
    exact_mean_oracle, frechet_variation, medoid, mse_chain, optimal_warping_path, path_matrices,
    warping_cost, Averager, AveragerConfig, Compressor, Method, Sample, TimeSeries, WarpingPath,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub fn ts(v: &[f64]) -> TimeSeries {
    TimeSeries::new(v.to_vec()).unwrap()
}

pub fn sample_of(xs: &[Vec<f64>]) -> Sample {
    Sample::new(xs.iter().map(|x| ts(x)).collect()).unwrap()
}

// ---------------------------------------------------------------- oracles

/// Every warping path of order (m, n), by depth-first search over steps.
pub fn all_paths(m: usize, n: usize) -> Vec<Vec<(usize, usize)>> {
    fn walk(m: usize, n: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let (i, j) = *cur.last().unwrap();
        if (i, j) == (m - 1, n - 1) {
            out.push(cur.clone());
            return;
        }
        for (di, dj) in [(1, 1), (1, 0), (0, 1)] {
            if i + di < m && j + dj < n {
                cur.push((i + di, j + dj));
                walk(m, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(m, n, &mut vec![(0, 0)], &mut out);
    out
}

/// Squared DTW distance as the minimum over exhaustively enumerated paths.
pub fn brute_dtw_sq(x: &[f64], y: &[f64]) -> f64 {
    all_paths(x.len(), y.len())
        .iter()
        .map(|p| p.iter().map(|&(i, j)| (x[i] - y[j]).powi(2)).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

fn sq_dev(seg: &[f64]) -> f64 {
    let mean = seg.iter().sum::<f64>() / seg.len() as f64;
    seg.iter().map(|v| (v - mean).powi(2)).sum()
}

/// Cheapest split of `x` into `m` consecutive segments, each replaced by
/// its mean, by trying every set of cut points.
pub fn brute_segmentation(x: &[f64], m: usize) -> f64 {
    if m == 1 {
        return sq_dev(x);
    }
    (1..=x.len() - (m - 1))
        .map(|cut| sq_dev(&x[..cut]) + brute_segmentation(&x[cut..], m - 1))
        .fold(f64::INFINITY, f64::min)
}

/// Whether `z` is `x` cut into consecutive blocks, each replaced by its mean.
pub fn is_block_means(x: &[f64], z: &[f64]) -> bool {
    if z.is_empty() {
        return x.is_empty();
    }
    if x.len() < z.len() {
        return false;
    }
    (1..=x.len() - (z.len() - 1)).any(|cut| {
        let mean = x[..cut].iter().sum::<f64>() / cut as f64;
        (mean - z[0]).abs() <= 1e-9 * mean.abs().max(1.0) && is_block_means(&x[cut..], &z[1..])
    })
}

// ------------------------------------------------------------- strategies

pub fn int_series(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-5i32..=5).prop_map(f64::from), 1..=max_len)
}

pub fn real_series(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 1..=max_len)
}

pub fn real_sample(max_n: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(real_series(max_len), 1..=max_n)
}

fn small_sample() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop_oneof![
        prop::collection::vec(int_series(3), 2..=2),
        prop::collection::vec(int_series(2), 3..=3),
        prop::collection::vec(int_series(4), 1..=1),
    ]
}

fn cfg() -> AveragerConfig {
    AveragerConfig::default()
}

// ---------------------------------------------------------------- runner

pub struct Invariant {
    pub module: &'static str,
    pub name: &'static str,
    pub cases: u32,
    pub check: fn(u32) -> Result<(), String>,
}

fn run<S, F>(cases: u32, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let config = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: 10 * cases,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn find(name: &str) -> Invariant {
    all()
        .into_iter()
        .find(|i| i.name == name)
        .unwrap_or_else(|| panic!("no invariant `{name}`"))
}

/// Runs one invariant with its configured case count, panicking on failure.
pub fn check(name: &str) {
    let inv = find(name);
    if let Err(e) = (inv.check)(inv.cases) {
        panic!("{}::{} failed: {e}", inv.module, inv.name);
    }
}

macro_rules! invariants {
    ($($module:literal $name:ident $cases:literal;)*) => {
        pub fn all() -> Vec<Invariant> {
            vec![$(Invariant { module: $module, name: stringify!($name), cases: $cases, check: $name },)*]
        }
    };
}

invariants! {
    "warp" dtw_matches_exhaustive 256;
    "warp" dtw_symmetric_identity_nonnegative 256;
    "warp" optimal_path_is_valid_and_exact 256;
    "warp" path_matrices_cover_rows_and_columns 128;
    "warp" path_count_is_delannoy 48;
    "frechet" single_member_variation_is_dtw 128;
    "frechet" medoid_is_best_member 64;
    "frechet" oracle_bounds_heuristics 48;
    "compress" mse_matches_exhaustive 128;
    "compress" mse_cost_is_dtw 128;
    "compress" mse_monotone_with_fixed_ends 128;
    "compress" mse_values_are_segment_means 64;
    "compress" ada_steps_are_single_merges 128;
    "compress" ada_cost_at_least_mse 128;
    "average" dba_trace_monotone 100;
    "average" ac_dominates_first_step 64;
    "average" ac_iterations_bounded 64;
    "average" ac_identity_is_bare_averager 32;
    "average" ssg_is_deterministic 24;
    "average" reported_variation_is_exact 48;
    "cluster" kmeans_dba_error_monotone 24;
    "cluster" assignment_is_optimal 48;
    "cluster" kmeans_ssg_returns_best 12;
    "cluster" kmeans_deterministic 12;
    "harness" report_round_trip 48;
    "harness" pdev_recomputable_from_rows 48;
    "harness" experiment_deterministic 3;
}

// ------------------------------------------------------------------- warp

fn dtw_matches_exhaustive(cases: u32) -> Result<(), String> {
    run(cases, (int_series(6), int_series(6)), |(x, y)| {
        let d2 = dtw_distance(&ts(&x), &ts(&y)).powi(2);
        let brute = brute_dtw_sq(&x, &y);
        prop_assert!(
            (d2 - brute).abs() <= 1e-9,
            "dtw² {d2} vs exhaustive {brute}"
        );
        let enumerated = enumerate_warping_paths(x.len(), y.len())
            .unwrap()
            .iter()
            .map(|p| warping_cost(&ts(&x), &ts(&y), p).unwrap())
            .fold(f64::INFINITY, f64::min);
        prop_assert!((enumerated - brute).abs() <= 1e-9);
        Ok(())
    })
}

fn dtw_symmetric_identity_nonnegative(cases: u32) -> Result<(), String> {
    run(cases, (real_series(20), real_series(20)), |(x, y)| {
        let (x, y) = (ts(&x), ts(&y));
        let d = dtw_distance(&x, &y);
        prop_assert!(d >= 0.0);
        prop_assert!((d - dtw_distance(&y, &x)).abs() <= 1e-9 * d.max(1.0));
        prop_assert_eq!(dtw_distance(&x, &x), 0.0);
        Ok(())
    })
}

fn optimal_path_is_valid_and_exact(cases: u32) -> Result<(), String> {
    run(cases, (real_series(25), real_series(25)), |(x, y)| {
        let (x, y) = (ts(&x), ts(&y));
        let p = optimal_warping_path(&x, &y);
        let rebuilt = WarpingPath::new(p.order(), p.points().to_vec());
        prop_assert!(rebuilt.is_ok());
        prop_assert_eq!(p.order(), (x.len(), y.len()));
        let cost = warping_cost(&x, &y, &p).unwrap();
        let d2 = dtw_distance_squared(&x, &y);
        prop_assert!((cost - d2).abs() <= 1e-9 * d2.max(1.0));
        Ok(())
    })
}

fn path_matrices_cover_rows_and_columns(cases: u32) -> Result<(), String> {
    run(
        cases,
        (1usize..=5, 1usize..=5, any::<prop::sample::Index>()),
        |(m, n, pick)| {
            let paths = enumerate_warping_paths(m, n).unwrap();
            let p = &paths[pick.index(paths.len())];
            let pm = path_matrices(p);
            prop_assert_eq!(pm.valence.iter().sum::<usize>(), p.len());
            prop_assert!(pm.valence.iter().all(|&v| v > 0));
            let mut col_hits = vec![0; n];
            for &(_, j) in &pm.warping {
                col_hits[j] += 1;
            }
            prop_assert!(col_hits.iter().all(|&c| c > 0));
            let x: Vec<f64> = (0..n).map(|j| j as f64 + 1.0).collect();
            let ws: f64 = pm.warp_sum(&x).iter().sum();
            let direct: f64 = p.points().iter().map(|&(_, j)| x[j]).sum();
            prop_assert!((ws - direct).abs() < 1e-12);
            Ok(())
        },
    )
}

fn path_count_is_delannoy(cases: u32) -> Result<(), String> {
    run(cases, (1usize..=6, 1usize..=6), |(m, n)| {
        let dfs = all_paths(m, n).len();
        prop_assert_eq!(count_warping_paths(m, n), dfs as u128);
        prop_assert_eq!(enumerate_warping_paths(m, n).unwrap().len(), dfs);
        Ok(())
    })
}

// ---------------------------------------------------------------- frechet

fn single_member_variation_is_dtw(cases: u32) -> Result<(), String> {
    run(cases, (real_series(15), real_series(15)), |(z, x)| {
        let f = frechet_variation(&ts(&z), &sample_of(std::slice::from_ref(&x)));
        let d2 = dtw_distance(&ts(&z), &ts(&x)).powi(2);
        prop_assert!((f - d2).abs() <= 1e-9 * d2.max(1.0));
        Ok(())
    })
}

fn medoid_is_best_member(cases: u32) -> Result<(), String> {
    run(cases, real_sample(6, 10), |xs| {
        let s = sample_of(&xs);
        let (idx, m) = medoid(&s);
        prop_assert_eq!(m.values(), xs[idx].as_slice());
        let fm = frechet_variation(&m, &s);
        for (k, x) in xs.iter().enumerate() {
            let f = frechet_variation(&ts(x), &s);
            prop_assert!(fm <= f + 1e-9);
            if k < idx {
                prop_assert!(f > fm, "tie should go to the smaller index");
            }
        }
        Ok(())
    })
}

fn oracle_bounds_heuristics(cases: u32) -> Result<(), String> {
    run(cases, small_sample(), |xs| {
        let s = sample_of(&xs);
        // heuristics started from the medoid never grow past it
        let bound = acmean::search_length(&s);
        let exact = exact_mean_oracle(&s, bound).unwrap();
        let (_, init) = medoid(&s);
        let c = cfg();
        let heuristics = [
            dba(&s, &init, &c).variation,
            ssg(&s, &init, &c).variation,
            acmean::ac(&s, &init, &Dba::new(c.clone()), Compressor::Mse, &c).variation,
            acmean::ac(&s, &init, &Dba::new(c.clone()), Compressor::Ada, &c).variation,
        ];
        for h in heuristics {
            prop_assert!(
                h >= exact.variation - 1e-9,
                "heuristic {h} below exact {}",
                exact.variation
            );
        }
        Ok(())
    })
}

// --------------------------------------------------------------- compress

fn mse_matches_exhaustive(cases: u32) -> Result<(), String> {
    run(cases, real_series(10), |x| {
        let chain = mse_chain(&ts(&x));
        prop_assert_eq!(chain.len(), x.len());
        for (m, (z, cost)) in (1..).zip(chain.iter()) {
            prop_assert_eq!(z.len(), m);
            let brute = brute_segmentation(&x, m);
            prop_assert!(
                (cost - brute).abs() <= 1e-9 * brute.max(1.0),
                "m={m}: {cost} vs {brute}"
            );
        }
        Ok(())
    })
}

fn mse_cost_is_dtw(cases: u32) -> Result<(), String> {
    run(cases, real_series(12), |x| {
        let x = ts(&x);
        for (z, cost) in mse_chain(&x).iter() {
            let d2 = dtw_distance_squared(&x, z);
            prop_assert!((d2 - cost).abs() <= 1e-6 * cost.max(1e-3), "{d2} vs {cost}");
        }
        Ok(())
    })
}

fn mse_monotone_with_fixed_ends(cases: u32) -> Result<(), String> {
    run(cases, real_series(16), |x| {
        let chain = mse_chain(&ts(&x));
        let costs: Vec<f64> = chain.iter().map(|(_, c)| c).collect();
        for w in costs.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
        prop_assert!(costs[x.len() - 1].abs() <= 1e-9);
        prop_assert!((costs[0] - sq_dev(&x)).abs() <= 1e-9 * sq_dev(&x).max(1.0));
        Ok(())
    })
}

fn mse_values_are_segment_means(cases: u32) -> Result<(), String> {
    run(cases, int_series(9), |x| {
        for (z, _) in mse_chain(&ts(&x)).iter() {
            prop_assert!(
                is_block_means(&x, z.values()),
                "{:?} is not block means of {x:?}",
                z.values()
            );
        }
        Ok(())
    })
}

fn ada_steps_are_single_merges(cases: u32) -> Result<(), String> {
    run(cases, real_series(12), |x| {
        let chain = ada_chain(&ts(&x));
        let entries: Vec<&TimeSeries> = chain.iter().map(|(z, _)| z).collect();
        prop_assert_eq!(entries.len(), x.len());
        for k in 1..entries.len() {
            let (shorter, longer) = (entries[k - 1], entries[k]);
            prop_assert_eq!(shorter.len() + 1, longer.len());
            let found = (0..longer.len() - 1).any(|i| ada_merge(longer, i).unwrap() == *shorter);
            prop_assert!(
                found,
                "no single merge of {:?} gives {:?}",
                longer.values(),
                shorter.values()
            );
        }
        Ok(())
    })
}

fn ada_cost_at_least_mse(cases: u32) -> Result<(), String> {
    run(cases, real_series(14), |x| {
        let x = ts(&x);
        let ada = ada_chain(&x);
        let mse = mse_chain(&x);
        for ((_, a), (_, m)) in ada.iter().zip(mse.iter()) {
            prop_assert!(a >= m - 1e-9 * m.max(1.0), "ada {a} < mse {m}");
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- average

fn dba_trace_monotone(cases: u32) -> Result<(), String> {
    run(cases, real_sample(5, 20), |xs| {
        let s = sample_of(&xs);
        let (_, init) = medoid(&s);
        let r = dba(&s, &init, &cfg());
        for w in r.trace.windows(2) {
            prop_assert!(w[1].variation <= w[0].variation + 1e-9);
        }
        Ok(())
    })
}

fn ac_dominates_first_step(cases: u32) -> Result<(), String> {
    run(cases, real_sample(5, 15), |xs| {
        let s = sample_of(&xs);
        let (_, init) = medoid(&s);
        let c = cfg();
        let first = dba(&s, &init, &c).variation;
        for comp in [Compressor::Mse, Compressor::Ada] {
            let r = acmean::ac(&s, &init, &Dba::new(c.clone()), comp, &c);
            prop_assert!(
                r.variation <= first + 1e-9,
                "{comp:?}: {} > {first}",
                r.variation
            );
            prop_assert!(r.mean.len() <= init.len());
        }
        Ok(())
    })
}

fn ac_iterations_bounded(cases: u32) -> Result<(), String> {
    run(cases, real_sample(4, 15), |xs| {
        let s = sample_of(&xs);
        let (_, init) = medoid(&s);
        let c = cfg();
        for comp in [Compressor::Mse, Compressor::Ada] {
            let r = acmean::ac(&s, &init, &Dba::new(c.clone()), comp, &c);
            // the last record repeats the best solution of a rejected step
            let accepted = &r.trace[..r.trace.len() - 1];
            let mut improvements = 0;
            for w in accepted.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                let better = b.variation < a.variation;
                prop_assert!(better || (b.variation <= a.variation + 1e-9 && b.length < a.length));
                improvements += usize::from(better);
            }
            let iterations = r.trace.len() - 1;
            prop_assert!(iterations <= improvements + init.len());
        }
        Ok(())
    })
}

fn ac_identity_is_bare_averager(cases: u32) -> Result<(), String> {
    run(cases, (real_sample(4, 12), any::<u64>()), |(xs, seed)| {
        let s = sample_of(&xs);
        let (_, init) = medoid(&s);
        let c = cfg().with_seed(seed);
        for base in ["dba", "ssg"] {
            let averager = base.parse::<Method>().unwrap().build(c.clone()).unwrap();
            let bare = averager.average(&s, &init);
            let wrapped = acmean::ac(&s, &init, &averager, Compressor::Identity, &c);
            prop_assert_eq!(&bare.mean, &wrapped.mean);
            prop_assert_eq!(bare.variation, wrapped.variation);
        }
        Ok(())
    })
}

fn ssg_is_deterministic(cases: u32) -> Result<(), String> {
    run(cases, (real_sample(4, 10), any::<u64>()), |(xs, seed)| {
        let s = sample_of(&xs);
        let (_, init) = medoid(&s);
        let c = AveragerConfig {
            patience: 10,
            ..cfg().with_seed(seed)
        };
        for name in ["ssg", "ssg-mse"] {
            let a = name.parse::<Method>().unwrap().build(c.clone()).unwrap();
            prop_assert_eq!(a.average(&s, &init), a.average(&s, &init));
        }
        Ok(())
    })
}

fn reported_variation_is_exact(cases: u32) -> Result<(), String> {
    run(cases, real_sample(4, 12), |xs| {
        let s = sample_of(&xs);
        let (_, init) = medoid(&s);
        let c = AveragerConfig {
            patience: 10,
            ..cfg()
        };
        for name in ["dba", "ssg", "dba-mse", "dba-ada", "ssg-mse"] {
            let r = name
                .parse::<Method>()
                .unwrap()
                .build(c.clone())
                .unwrap()
                .average(&s, &init);
            let f = frechet_variation(&r.mean, &s);
            prop_assert!((r.variation - f).abs() <= 1e-9 * f.max(1.0), "{name}");
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- cluster

fn cluster_input() -> impl Strategy<Value = (Vec<Vec<f64>>, usize, u64)> {
    (
        prop::collection::vec(real_series(10), 4..=9),
        1usize..=3,
        any::<u64>(),
    )
}

fn kmeans_dba_error_monotone(cases: u32) -> Result<(), String> {
    run(cases, cluster_input(), |(xs, k, seed)| {
        let series: Vec<TimeSeries> = xs.iter().map(|x| ts(x)).collect();
        for name in ["dba", "dba-mse"] {
            let a = name.parse::<Method>().unwrap().build(cfg()).unwrap();
            let c = kmeans(&series, k, &a, Init::FarthestFirst { seed }, 20).unwrap();
            for w in c.trace.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-9, "{name}: {:?}", c.trace);
            }
            let j = kmeans_error(&series, &c.centroids).unwrap();
            prop_assert!((j - c.error).abs() <= 1e-9 * j.max(1.0));
        }
        Ok(())
    })
}

fn assignment_is_optimal(cases: u32) -> Result<(), String> {
    let input = (
        prop::collection::vec(real_series(8), 2..=8),
        prop::collection::vec(real_series(8), 1..=3),
        prop::collection::vec(any::<prop::sample::Index>(), 8),
    );
    run(cases, input, |(xs, cs, other)| {
        let series: Vec<TimeSeries> = xs.iter().map(|x| ts(x)).collect();
        let centroids: Vec<TimeSeries> = cs.iter().map(|x| ts(x)).collect();
        let j = kmeans_error(&series, &centroids).unwrap();
        let arbitrary: f64 = series
            .iter()
            .zip(&other)
            .map(|(x, pick)| dtw_distance_squared(x, &centroids[pick.index(centroids.len())]))
            .sum::<f64>()
            / series.len() as f64;
        prop_assert!(j <= arbitrary + 1e-9);
        Ok(())
    })
}

fn kmeans_ssg_returns_best(cases: u32) -> Result<(), String> {
    run(cases, cluster_input(), |(xs, k, seed)| {
        let series: Vec<TimeSeries> = xs.iter().map(|x| ts(x)).collect();
        let c = AveragerConfig {
            patience: 5,
            ..cfg().with_seed(seed)
        };
        let a = "ssg".parse::<Method>().unwrap().build(c).unwrap();
        let r = kmeans(&series, k, &a, Init::FarthestFirst { seed }, 10).unwrap();
        let min = r.trace.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(r.error, min);
        Ok(())
    })
}

fn kmeans_deterministic(cases: u32) -> Result<(), String> {
    run(cases, cluster_input(), |(xs, k, seed)| {
        let series: Vec<TimeSeries> = xs.iter().map(|x| ts(x)).collect();
        let c = AveragerConfig {
            patience: 5,
            ..cfg().with_seed(seed)
        };
        let a = AverageCompress {
            base: "ssg".parse::<Method>().unwrap().build(c.clone()).unwrap(),
            compressor: Compressor::Mse,
            config: c,
        };
        let first = kmeans(&series, k, &a, Init::FarthestFirst { seed }, 5).unwrap();
        let second = kmeans(&series, k, &a, Init::FarthestFirst { seed }, 5).unwrap();
        prop_assert_eq!(first, second);
        Ok(())
    })
}

// ---------------------------------------------------------------- harness

const ALGOS: [&str; 3] = ["dba", "dba-mse", "ssg"];

fn rows_strategy() -> impl Strategy<Value = Vec<Row>> {
    let cell = (0.01f64..100.0, 1usize..50, 0usize..60);
    prop::collection::vec(prop::collection::vec(cell, 3), 1..6).prop_map(|samples| {
        let mut rows = Vec::new();
        for (s, cells) in samples.into_iter().enumerate() {
            for (a, (f, len, epochs)) in ALGOS.iter().zip(cells) {
                rows.push(Row {
                    dataset: format!("d{}", s % 2),
                    class: (s / 2).to_string(),
                    algorithm: a.to_string(),
                    seed: 0,
                    frechet_variation: f,
                    length: len,
                    epochs,
                    runtime_ms: 0.0,
                    trace: Vec::new(),
                });
            }
        }
        rows
    })
}

fn algos() -> Vec<String> {
    ALGOS.iter().map(|s| s.to_string()).collect()
}

fn report_round_trip(cases: u32) -> Result<(), String> {
    run(cases, rows_strategy(), |rows| {
        let reference = Reference::Algorithm("dba".into());
        let tables = MetricTables::compute(&rows, &algos(), &reference).unwrap();
        let report = ExperimentReport {
            name: "prop".into(),
            kind: ExperimentKind::Mean,
            algorithms: algos(),
            rows: rows.clone(),
            tables: tables.clone(),
            failures: Vec::new(),
        };
        let back = ExperimentReport::from_json(&report.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &report);

        let parsed = rows_from_csv(&rows_to_csv(&rows, true).unwrap()).unwrap();
        let again = MetricTables::compute(&parsed, &algos(), &reference).unwrap();
        prop_assert_eq!(again, tables);
        Ok(())
    })
}

fn pdev_recomputable_from_rows(cases: u32) -> Result<(), String> {
    run(cases, rows_strategy(), |rows| {
        let tables =
            MetricTables::compute(&rows, &algos(), &Reference::Algorithm("dba".into())).unwrap();
        for algo in ALGOS {
            let mut vals = Vec::new();
            let mut saves = Vec::new();
            for r in rows.iter().filter(|r| r.algorithm == algo) {
                let reference = rows
                    .iter()
                    .find(|o| o.algorithm == "dba" && o.dataset == r.dataset && o.class == r.class)
                    .unwrap();
                vals.push(pdev(r.frechet_variation, reference.frechet_variation).unwrap());
                saves.push(1.0 - r.length as f64 / reference.length as f64);
            }
            let avg = vals.iter().sum::<f64>() / vals.len() as f64;
            let save = saves.iter().sum::<f64>() / saves.len() as f64;
            prop_assert!(
                (tables.pdev_of(algo).unwrap().avg - avg).abs() <= 1e-9 * avg.abs().max(1.0)
            );
            prop_assert!((tables.space_saving_of(algo).unwrap().avg - save).abs() <= 1e-12);
        }
        Ok(())
    })
}

fn experiment_deterministic(cases: u32) -> Result<(), String> {
    run(cases, any::<u64>(), |seed| {
        let dir = tempfile::tempdir().unwrap();
        let data = acmean::harness::synthetic::generate(
            acmean::harness::synthetic::SyntheticKind::Steps,
            3,
            24,
            seed,
        )
        .unwrap();
        data.write_ucr(&dir.path().join("steps_TRAIN.tsv")).unwrap();
        let text = format!(
            "dataset = steps_TRAIN.tsv\nalgorithms = dba, dba-mse, ssg-mse\nseeds = {seed}, 1\npatience = 5\n"
        );
        let cfg = acmean::harness::ExperimentConfig::parse(&text, dir.path()).unwrap();
        let a = acmean::harness::run_experiment(&cfg).unwrap();
        let b = acmean::harness::run_experiment(&cfg).unwrap();
        prop_assert_eq!(a.to_csv(false).unwrap(), b.to_csv(false).unwrap());
        prop_assert_eq!(a.without_runtimes(), b.without_runtimes());
        Ok(())
    })
}
