use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acmean::average::AveragingResult;
use acmean::cluster::{kmeans, Init, DEFAULT_MAX_ITERS};
use acmean::harness::config::apply_averager_key;
use acmean::harness::dataset::{load_merged, parse_dataset, Dataset, Delimiter};
use acmean::harness::synthetic::{generate, SyntheticKind};
use acmean::harness::{run_experiment, ExperimentConfig, ExperimentReport};
use acmean::{
    exact_mean_oracle, medoid, search_length, AveragerConfig, Compressor, Method, Sample,
    TimeSeries,
};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "acmean",
    version,
    about = "Time series averaging under dynamic time warping"
)]
struct Cli {
    /// Seed for stochastic averagers and random initialization.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct InputArgs {
    /// UCR-style file(s); several files are merged.
    #[arg(long = "input", short, num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Inline series, comma separated; repeat for a sample.
    #[arg(long = "series", allow_hyphen_values = true)]
    series: Vec<String>,
    #[arg(long, default_value = "auto")]
    delimiter: String,
    /// Z-normalize every series before use.
    #[arg(long)]
    znormalize: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Average a sample (one class, or each class in turn).
    Mean {
        #[command(flatten)]
        input: InputArgs,
        /// Only average this class.
        #[arg(long)]
        class: Option<String>,
        #[arg(long, short, default_value = "dba-mse")]
        algorithm: String,
        /// Start from a random member resampled to this length instead of the medoid.
        #[arg(long)]
        init_length: Option<usize>,
        /// Averager parameter overrides, e.g. `--param patience=20`.
        #[arg(long = "param")]
        params: Vec<String>,
    },
    /// Dump the compression chain of one series.
    Compress {
        #[command(flatten)]
        input: InputArgs,
        /// Zero-based record to compress when reading a file.
        #[arg(long, default_value_t = 0)]
        row: usize,
        #[arg(long, default_value = "mse")]
        method: String,
    },
    /// k-means clustering with a configurable centroid averager.
    Kmeans {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, short, default_value = "dba")]
        algorithm: String,
        /// Number of clusters; defaults to the number of classes.
        #[arg(long)]
        k: Option<usize>,
        /// Seed centroids farthest-first instead of by class medoids.
        #[arg(long)]
        farthest_first: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
        #[arg(long = "param")]
        params: Vec<String>,
    },
    /// Run a full experiment described by a config file.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Leave the runtime column empty (for diffing repeated runs).
        #[arg(long)]
        no_runtime: bool,
    },
    /// Exact mean of a tiny sample by exhaustive search.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// Longest mean considered; defaults to the larger of the reduction
        /// bound and the longest member.
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        class: Option<String>,
    },
    /// Write a seeded synthetic dataset in UCR layout.
    Synth {
        #[arg(long, default_value = "cbf")]
        kind: String,
        #[arg(long, default_value_t = 10)]
        per_class: usize,
        #[arg(long, default_value_t = 128)]
        length: usize,
    },
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let output = run(&cli)?;
    match &cli.out {
        Some(path) => {
            fs::write(path, output).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().write_all(output.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Mean {
            input,
            class,
            algorithm,
            init_length,
            params,
        } => {
            let data = read_input(input)?;
            let method: Method = algorithm.parse()?;
            let averager = method.build(averager_config(cli.seed, params)?)?;
            let mut results = Vec::new();
            for (label, sample) in data.classes() {
                if class.as_ref().is_some_and(|c| *c != label) {
                    continue;
                }
                let init = match init_length {
                    Some(len) => random_member_init(&sample, *len, cli.seed)?,
                    None => medoid(&sample).1,
                };
                results.push((label, averager.average(&sample, &init)));
            }
            if results.is_empty() {
                bail!("no class matched");
            }
            format_means(cli.format, &results)
        }
        Command::Compress { input, row, method } => {
            let data = read_input(input)?;
            let record = data.records.get(*row).with_context(|| {
                format!("row {row} out of range ({} records)", data.records.len())
            })?;
            let compressor: Compressor = method.parse()?;
            let chain = compressor.chain(&record.series);
            let entries: Vec<(usize, f64, Vec<f64>)> = chain
                .iter()
                .map(|(s, cost)| (s.len(), cost, s.values().to_vec()))
                .collect();
            match cli.format {
                Format::Json => Ok(json_lines(&entries)?),
                Format::Csv => {
                    let mut out = String::from("length,cost,values\n");
                    for (len, cost, values) in &entries {
                        writeln!(out, "{len},{cost},{}", join(values))?;
                    }
                    Ok(out)
                }
            }
        }
        Command::Kmeans {
            input,
            algorithm,
            k,
            farthest_first,
            max_iters,
            params,
        } => {
            let data = read_input(input)?;
            let series = data.series();
            let labels = data.labels();
            let classes = acmean::cluster::class_order(&labels).len();
            let k = k.unwrap_or(classes);
            let init = if *farthest_first {
                Init::FarthestFirst { seed: cli.seed }
            } else {
                if k != classes {
                    bail!("class-medoid seeding needs k = {classes}; pass --farthest-first for other k");
                }
                Init::ClassMedoids(&labels)
            };
            let method: Method = algorithm.parse()?;
            let averager = method.build(averager_config(cli.seed, params)?)?;
            let c = kmeans(&series, k, &averager, init, *max_iters)?;
            eprintln!(
                "k-means error {} after {} iterations",
                c.error, c.iterations
            );
            match cli.format {
                Format::Json => Ok(serde_json_pretty(&c)?),
                Format::Csv => {
                    let mut out = String::from("series,label,cluster\n");
                    for (i, (l, a)) in labels.iter().zip(&c.assignments).enumerate() {
                        writeln!(out, "{i},{l},{a}")?;
                    }
                    Ok(out)
                }
            }
        }
        Command::Bench { config, no_runtime } => {
            let mut cfg = ExperimentConfig::load(config)
                .with_context(|| format!("loading {}", config.display()))?;
            if cli.threads.is_some() {
                cfg.threads = None; // the global pool already has the requested size
            }
            let report = run_experiment(&cfg)?;
            for f in &report.failures {
                eprintln!("warning: {}: {}", f.dataset, f.message);
            }
            if report.rows.is_empty() && !report.failures.is_empty() {
                bail!("every dataset failed to load");
            }
            eprint!("{}", summary_table(&report));
            match cli.format {
                Format::Csv => Ok(report.to_csv(!no_runtime)?),
                Format::Json => {
                    let r = if *no_runtime {
                        report.without_runtimes()
                    } else {
                        report
                    };
                    Ok(r.to_json()?)
                }
            }
        }
        Command::Oracle {
            input,
            max_len,
            class,
        } => {
            let data = read_input(input)?;
            let classes = data.classes();
            let (label, sample) = match class {
                Some(c) => classes
                    .into_iter()
                    .find(|(l, _)| l == c)
                    .with_context(|| format!("class {c} not found"))?,
                None => {
                    if classes.len() > 1 && input.series.is_empty() {
                        bail!("input has several classes; choose one with --class");
                    }
                    Sample::new(data.series()).map(|s| ("all".to_string(), s))?
                }
            };
            let bound = max_len.unwrap_or_else(|| search_length(&sample));
            let r = exact_mean_oracle(&sample, bound)?;
            match cli.format {
                Format::Json => Ok(serde_json_pretty(&serde_json::json!({
                    "class": label,
                    "max_len": bound,
                    "mean": r.mean,
                    "frechet_variation": r.variation,
                    "tuples": r.tuples.to_string(),
                }))?),
                Format::Csv => Ok(format!(
                    "class,length,frechet_variation,values\n{label},{},{},{}\n",
                    r.mean.len(),
                    r.variation,
                    join(r.mean.values())
                )),
            }
        }
        Command::Synth {
            kind,
            per_class,
            length,
        } => {
            let kind: SyntheticKind = kind.parse()?;
            let d = generate(kind, *per_class, *length, cli.seed)?;
            Ok(d.to_ucr())
        }
    }
}

fn read_input(args: &InputArgs) -> Result<Dataset> {
    let delimiter: Delimiter = args.delimiter.parse()?;
    let data = match (args.inputs.is_empty(), args.series.is_empty()) {
        (false, true) => load_merged(&args.inputs, delimiter)?,
        (true, false) => {
            let text: String = args.series.iter().map(|s| format!("0,{s}\n")).collect();
            parse_dataset(&text, Path::new("inline"), Delimiter::Comma)?
        }
        (false, false) => bail!("give either --input or --series, not both"),
        (true, true) => bail!("no input: pass --input FILE or --series VALUES"),
    };
    Ok(if args.znormalize {
        data.z_normalized()
    } else {
        data
    })
}

fn averager_config(seed: u64, params: &[String]) -> Result<AveragerConfig> {
    let mut cfg = AveragerConfig::default().with_seed(seed);
    for p in params {
        let (k, v) = p
            .split_once('=')
            .with_context(|| format!("expected key=value, got `{p}`"))?;
        if !apply_averager_key(&mut cfg, k.trim(), v.trim())? {
            bail!("unknown averager parameter `{k}`");
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// A seeded random member, resampled to `len` points.
fn random_member_init(sample: &Sample, len: usize, seed: u64) -> Result<TimeSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = rng.random_range(0..sample.len());
    Ok(sample.members()[pick].resampled(len)?)
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn serde_json_pretty<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn json_lines<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json_pretty(value)
}

fn format_means(format: Format, results: &[(String, AveragingResult)]) -> Result<String> {
    match format {
        Format::Json => {
            let items: Vec<_> = results
                .iter()
                .map(|(class, r)| serde_json::json!({ "class": class, "result": r }))
                .collect();
            serde_json_pretty(&items)
        }
        Format::Csv => {
            let mut out =
                String::from("class,algorithm,seed,frechet_variation,length,epochs,values\n");
            for (class, r) in results {
                writeln!(
                    out,
                    "{class},{},{},{},{},{},{}",
                    r.method,
                    r.seed,
                    r.variation,
                    r.mean.len(),
                    r.epochs,
                    join(r.mean.values())
                )?;
            }
            Ok(out)
        }
    }
}

fn summary_table(report: &ExperimentReport) -> String {
    let t = &report.tables;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<20} {:>10} {:>10} {:>10}",
        "algorithm", "pdev avg", "space avg", "mean rank"
    );
    for (i, a) in report.algorithms.iter().enumerate() {
        let pdev = t
            .pdev_of(a)
            .map(|s| format!("{:.2}", s.avg))
            .unwrap_or_else(|| "-".into());
        let space = t
            .space_saving_of(a)
            .map(|s| format!("{:.3}", s.avg))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{a:<20} {pdev:>10} {space:>10} {:>10.2}",
            t.ranking.mean[i]
        );
    }
    out
}
