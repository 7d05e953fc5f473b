//! Delimited numeric data ingestion and cleaning.
//!
//! Cleaning follows three rules, applied in order:
//!
//! 1. columns whose non-missing cells look like dates or times are dropped,
//! 2. columns with any non-missing cell that is not a finite number are dropped,
//! 3. rows with a missing cell in any surviving column are dropped.
//!
//! Survivors keep their original order.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use regex::RegexSet;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Cleaned numeric matrix: `n` objects (rows) by `m` attributes (columns).
///
/// Values are stored column-major because every consumer works one
/// attribute at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    n: usize,
}

impl Dataset {
    /// Builds a dataset from row-major values.
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = names.len();
        if m < 2 {
            return Err(Error::TooFewAttributes { found: m });
        }
        if rows.len() < 2 {
            return Err(Error::TooFewObjects { found: rows.len() });
        }
        let mut columns = vec![Vec::with_capacity(rows.len()); m];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidDataset(format!(
                    "row {r} has {} values, expected {m}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidDataset(format!(
                        "row {r}, column `{}` is not finite",
                        names[c]
                    )));
                }
                columns[c].push(v);
            }
        }
        Ok(Self {
            names,
            columns,
            n: rows.len(),
        })
    }

    /// Object count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Attribute count.
    pub fn m(&self) -> usize {
        self.columns.len()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, attribute: usize) -> &[f64] {
        &self.columns[attribute]
    }

    pub fn value(&self, object: usize, attribute: usize) -> f64 {
        self.columns[attribute][object]
    }

    pub fn row(&self, object: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[object]).collect()
    }

    /// Writes the dataset as delimited text with a header row.
    ///
    /// Values use Rust's shortest round-trip float formatting, so reloading
    /// the output reproduces the dataset bit for bit.
    pub fn write_delimited<W: Write>(&self, writer: W, delimiter: u8) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .from_writer(writer);
        w.write_record(&self.names)?;
        for o in 0..self.n {
            w.write_record(self.columns.iter().map(|c| c[o].to_string()))?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Number of unordered object pairs, `n(n-1)/2`.
pub fn object_pair_count(d: &Dataset) -> u64 {
    let n = d.n() as u64;
    n * (n - 1) / 2
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct CleaningOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// Cell contents (after trimming) treated as missing, compared case-sensitively.
    /// The empty cell is always missing.
    pub missing_tokens: Vec<String>,
    /// Fraction of non-missing cells that must look like a date or time for
    /// the column to be dropped as a timestamp column.
    pub timestamp_threshold: f64,
}

impl Default for CleaningOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            missing_tokens: ["NaN", "nan", "?", "NA"].map(String::from).to_vec(),
            timestamp_threshold: 0.9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    Timestamp,
    NonNumeric,
}

/// What cleaning removed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub dropped_columns: Vec<(String, DropReason)>,
    pub dropped_rows: usize,
}

/// Untyped table as read from a delimited file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn read<R: Read>(reader: R, delimiter: u8, has_header: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);
        let mut records = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            records.push(rec.iter().map(str::to_owned).collect::<Vec<_>>());
        }
        let mut headers = if has_header && !records.is_empty() {
            records.remove(0)
        } else {
            Vec::new()
        };
        let width = records
            .iter()
            .map(Vec::len)
            .chain(std::iter::once(headers.len()))
            .max()
            .unwrap_or(0);
        for i in headers.len()..width {
            headers.push(format!("col{}", i + 1));
        }
        for row in &mut records {
            row.resize(width, String::new());
        }
        Ok(Self {
            headers: headers.into_iter().map(|h| h.trim().to_owned()).collect(),
            rows: records,
        })
    }
}

fn timestamp_patterns() -> &'static RegexSet {
    static SET: OnceLock<RegexSet> = OnceLock::new();
    SET.get_or_init(|| {
        RegexSet::new([
            // ISO-8601 date, optionally with a time and zone
            r"^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?$",
            r"^\d{4}/\d{2}/\d{2}( \d{1,2}:\d{2}(:\d{2})?)?$",
            // dd/mm/yyyy and friends
            r"^\d{1,2}[/.-]\d{1,2}[/.-]\d{4}([T ]\d{1,2}:\d{2}(:\d{2}(\.\d+)?)?)?$",
            // bare clock time
            r"^\d{1,2}:\d{2}(:\d{2}(\.\d+)?)?$",
        ])
        .expect("timestamp patterns compile")
    })
}

/// Parses a finite number with `.` as decimal separator.
pub fn parse_number(cell: &str) -> Option<f64> {
    let cell = cell.trim();
    if cell.contains(',') {
        return None;
    }
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Applies the cleaning rules to a raw table.
pub fn clean(raw: &RawTable, opts: &CleaningOptions) -> Result<(Dataset, CleaningReport)> {
    let is_missing = |cell: &str| {
        let t = cell.trim();
        t.is_empty() || opts.missing_tokens.iter().any(|tok| tok == t)
    };
    let ts = timestamp_patterns();

    let mut report = CleaningReport::default();
    let mut kept = Vec::new();
    for (c, name) in raw.headers.iter().enumerate() {
        let present: Vec<&str> = raw
            .rows
            .iter()
            .map(|r| r[c].as_str())
            .filter(|cell| !is_missing(cell))
            .collect();
        if present.is_empty() {
            report
                .dropped_columns
                .push((name.clone(), DropReason::NonNumeric));
            continue;
        }
        let stamps = present.iter().filter(|v| ts.is_match(v.trim())).count();
        if stamps as f64 >= opts.timestamp_threshold * present.len() as f64 {
            report
                .dropped_columns
                .push((name.clone(), DropReason::Timestamp));
        } else if present.iter().all(|v| parse_number(v).is_some()) {
            kept.push(c);
        } else {
            report
                .dropped_columns
                .push((name.clone(), DropReason::NonNumeric));
        }
    }
    if kept.len() < 2 {
        return Err(Error::TooFewAttributes { found: kept.len() });
    }

    let mut rows = Vec::with_capacity(raw.rows.len());
    for row in &raw.rows {
        if kept.iter().any(|&c| is_missing(&row[c])) {
            report.dropped_rows += 1;
            continue;
        }
        rows.push(
            kept.iter()
                .map(|&c| parse_number(&row[c]).expect("column classified numeric"))
                .collect(),
        );
    }
    if rows.len() < 2 {
        return Err(Error::TooFewObjects { found: rows.len() });
    }
    let names = kept.iter().map(|&c| raw.headers[c].clone()).collect();
    Ok((Dataset::new(names, rows)?, report))
}

/// Loads and cleans a delimited file using the default missing-value tokens
/// and timestamp threshold.
pub fn load_dataset(path: impl AsRef<Path>, delimiter: u8, has_header: bool) -> Result<Dataset> {
    let opts = CleaningOptions {
        delimiter,
        has_header,
        ..CleaningOptions::default()
    };
    load_dataset_with(path, &opts).map(|(d, _)| d)
}

pub fn load_dataset_with(
    path: impl AsRef<Path>,
    opts: &CleaningOptions,
) -> Result<(Dataset, CleaningReport)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let raw = RawTable::read(file, opts.delimiter, opts.has_header)?;
    if raw.rows.is_empty() {
        return Err(Error::TooFewObjects { found: 0 });
    }
    clean(&raw, opts)
}
