//! UCR-style delimited text: one series per line, class label first.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frechet::Sample;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delimiter {
    /// Tab if the first record contains one, else comma, else whitespace.
    #[default]
    Auto,
    Comma,
    Tab,
    Whitespace,
}

impl Delimiter {
    fn detect(line: &str) -> Delimiter {
        if line.contains('\t') {
            Delimiter::Tab
        } else if line.contains(',') {
            Delimiter::Comma
        } else {
            Delimiter::Whitespace
        }
    }

    fn split<'a>(self, line: &'a str) -> Box<dyn Iterator<Item = &'a str> + 'a> {
        match self {
            Delimiter::Comma => Box::new(line.split(',').map(str::trim)),
            Delimiter::Tab => Box::new(line.split('\t').map(str::trim)),
            Delimiter::Whitespace | Delimiter::Auto => Box::new(line.split_whitespace()),
        }
    }
}

impl FromStr for Delimiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(Delimiter::Auto),
            "comma" | "," | "csv" => Ok(Delimiter::Comma),
            "tab" | "\\t" | "tsv" => Ok(Delimiter::Tab),
            "whitespace" | "space" => Ok(Delimiter::Whitespace),
            other => Err(Error::invalid(format!("unknown delimiter `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub label: String,
    pub series: TimeSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub paths: Vec<PathBuf>,
    pub delimiter: Delimiter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub records: Vec<Record>,
    pub provenance: Provenance,
}

/// Labels like `1`, `1.0` and `1.0000000e+00` all normalize to `1`.
fn normalize_label(raw: &str) -> String {
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() && v.fract() == 0.0 && v.abs() < 1e15 => format!("{}", v as i64),
        _ => raw.to_string(),
    }
}

/// Orders labels numerically when both are numbers, else lexically.
pub fn compare_labels(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x.total_cmp(&y),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Name of a dataset file: the stem with a trailing `_TRAIN`/`_TEST` removed.
pub fn dataset_name(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    for suffix in ["_TRAIN", "_TEST"] {
        if let Some(base) = stem.strip_suffix(suffix) {
            return base.to_string();
        }
    }
    stem
}

pub fn parse_dataset(text: &str, path: &Path, hint: Delimiter) -> Result<Dataset> {
    let fail = |line: usize, message: String| Error::Format {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut delimiter = hint;
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if delimiter == Delimiter::Auto {
            delimiter = Delimiter::detect(line);
        }
        let mut fields = delimiter.split(line);
        let label = fields.next().unwrap_or_default();
        if label.is_empty() {
            return Err(fail(lineno, "missing class label".into()));
        }
        let mut values = Vec::new();
        for (col, field) in fields.enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                fail(
                    lineno,
                    format!("field {} `{field}` is not a number", col + 2),
                )
            })?;
            values.push(v);
        }
        // variable-length archives pad with trailing NaN
        while values.last().is_some_and(|v| v.is_nan()) {
            values.pop();
        }
        if values.is_empty() {
            return Err(fail(lineno, "record has a label but no values".into()));
        }
        let series = TimeSeries::new(values).map_err(|e| fail(lineno, e.to_string()))?;
        records.push(Record {
            label: normalize_label(label),
            series,
        });
    }
    if records.is_empty() {
        return Err(fail(0, "no records".into()));
    }
    Ok(Dataset {
        name: dataset_name(path),
        records,
        provenance: Provenance {
            paths: vec![path.to_path_buf()],
            delimiter,
        },
    })
}

pub fn load_dataset(path: &Path, hint: Delimiter) -> Result<Dataset> {
    let text = fs::read_to_string(path)?;
    parse_dataset(&text, path, hint)
}

/// Loads several files (e.g. a train and a test split) as one dataset.
pub fn load_merged(paths: &[PathBuf], hint: Delimiter) -> Result<Dataset> {
    let (first, rest) = paths
        .split_first()
        .ok_or_else(|| Error::invalid("no dataset files given"))?;
    let mut merged = load_dataset(first, hint)?;
    for p in rest {
        let more = load_dataset(p, hint)?;
        merged.records.extend(more.records);
        merged.provenance.paths.push(p.clone());
    }
    Ok(merged)
}

impl Dataset {
    pub fn labels(&self) -> Vec<String> {
        self.records.iter().map(|r| r.label.clone()).collect()
    }

    pub fn series(&self) -> Vec<TimeSeries> {
        self.records.iter().map(|r| r.series.clone()).collect()
    }

    /// Per-class samples, classes in label order, members in file order.
    pub fn classes(&self) -> Vec<(String, Sample)> {
        let mut labels: Vec<&str> = self.records.iter().map(|r| r.label.as_str()).collect();
        labels.sort_by(|a, b| compare_labels(a, b));
        labels.dedup();
        labels
            .into_iter()
            .map(|l| {
                let members = self
                    .records
                    .iter()
                    .filter(|r| r.label == l)
                    .map(|r| r.series.clone())
                    .collect();
                (
                    l.to_string(),
                    Sample::new(members).expect("label came from a record"),
                )
            })
            .collect()
    }

    pub fn z_normalized(&self) -> Dataset {
        Dataset {
            records: self
                .records
                .iter()
                .map(|r| Record {
                    label: r.label.clone(),
                    series: r.series.z_normalized(),
                })
                .collect(),
            ..self.clone()
        }
    }

    /// Writes the dataset in tab-separated UCR layout.
    pub fn to_ucr(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.label);
            for v in r.series.iter() {
                let _ = write!(out, "\t{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write_ucr(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_ucr())?;
        Ok(())
    }
}
