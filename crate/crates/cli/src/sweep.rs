//! Grid sweeps and their CSV form.

use std::io::Write;
use std::path::Path;

use bpmr_channel::bounds::gap_old;
use bpmr_channel::estimator::estimate_rate;
use bpmr_channel::exact::exact_rate;
use bpmr_channel::{BoundSet, ChannelParams, InputKind, InputProcess, Probability};
use rayon::prelude::*;

use crate::config::{Output, SweepConfig};
use crate::error::{CliError, Result};

pub const CSV_HEADER: [&str; 12] = [
    "p", "alpha", "beta", "l0", "l1", "u0", "u1", "gap_new", "gap_old", "est_rate", "est_stderr", "exact_rate",
];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepRow {
    pub p: f64,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub l0: Option<f64>,
    pub l1: Option<f64>,
    pub u0: Option<f64>,
    pub u1: Option<f64>,
    pub gap_new: Option<f64>,
    pub gap_old: Option<f64>,
    pub est_rate: Option<f64>,
    pub est_stderr: Option<f64>,
    pub exact_rate: Option<f64>,
}

impl SweepRow {
    /// Value columns in header order, after `p`, `alpha`, `beta`.
    pub fn values(&self) -> [Option<f64>; 9] {
        [
            self.l0,
            self.l1,
            self.u0,
            self.u1,
            self.gap_new,
            self.gap_old,
            self.est_rate,
            self.est_stderr,
            self.exact_rate,
        ]
    }

    pub fn column(&self, name: &str) -> Option<f64> {
        match name {
            "p" => Some(self.p),
            "alpha" => Some(self.alpha),
            "beta" => self.beta,
            _ => CSV_HEADER[3..]
                .iter()
                .position(|&h| h == name)
                .and_then(|i| self.values()[i]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

fn grid_points(config: &SweepConfig) -> Vec<(f64, f64, Option<f64>)> {
    let betas: Vec<Option<f64>> = match (config.process, &config.beta_grid) {
        (InputKind::Markov1, Some(b)) => b.iter().copied().map(Some).collect(),
        _ => vec![None],
    };
    let mut points = Vec::new();
    for &p in &config.p_grid {
        for &alpha in &config.alpha_grid {
            for &beta in &betas {
                points.push((p, alpha, beta));
            }
        }
    }
    points
}

fn evaluate_point(config: &SweepConfig, p: f64, alpha: f64, beta: Option<f64>) -> bpmr_channel::Result<SweepRow> {
    let params = ChannelParams::new(p, alpha)?;
    let process = match beta {
        Some(b) => InputProcess::markov1(b)?,
        None => InputProcess::Iud,
    };
    let mut row = SweepRow {
        p,
        alpha,
        beta,
        ..Default::default()
    };
    let outputs = &config.outputs;
    if outputs.contains(&Output::Bounds) || outputs.contains(&Output::Gap) {
        let set = BoundSet::compute(&params, &process);
        if outputs.contains(&Output::Bounds) {
            row.l0 = Some(set.l0);
            row.l1 = Some(set.l1);
            row.u0 = Some(set.u0);
            row.u1 = Some(set.u1);
        }
        if outputs.contains(&Output::Gap) {
            row.gap_new = Some(set.gap);
            row.gap_old = Some(match process {
                InputProcess::Iud => gap_old(Probability::new(p)?),
                InputProcess::Markov1 { .. } => BoundSet::compute(&params.noiseless(), &process).gap,
            });
        }
    }
    if outputs.contains(&Output::Estimate) {
        let est = estimate_rate(&params, &process, config.n, config.replicates, config.master_seed)?;
        row.est_rate = Some(est.rate);
        row.est_stderr = Some(est.std_err);
    }
    if outputs.contains(&Output::Exact) {
        row.exact_rate = Some(exact_rate(&params, &process, config.n)?);
    }
    Ok(row)
}

/// Evaluates every grid point (in parallel) and returns rows in p-major,
/// then alpha, then beta order. Any failing point aborts the whole sweep.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    if config.outputs.is_empty() {
        return Ok(SweepResult::default());
    }
    let rows = grid_points(config)
        .into_par_iter()
        .map(|(p, alpha, beta)| {
            evaluate_point(config, p, alpha, beta).map_err(|source| CliError::Point {
                p,
                alpha,
                beta: beta.map(|b| format!(" beta={b}")).unwrap_or_default(),
                source,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_number(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        rounded.to_string()
    }
}

fn format_cell(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub fn to_csv_string(result: &SweepResult) -> String {
    let mut buf = Vec::new();
    write_csv_to(result, &mut buf).expect("writing to memory succeeds");
    String::from_utf8(buf).expect("csv is utf-8")
}

pub fn write_csv_to<W: Write>(result: &SweepResult, out: W) -> std::result::Result<(), csv::Error> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in &result.rows {
        let mut record = vec![format_number(row.p), format_number(row.alpha), format_cell(row.beta)];
        record.extend(row.values().iter().map(|&v| format_cell(v)));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes the CSV next to `path` and renames it into place, so a failed
/// write never leaves a partial file.
pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_atomically(path, to_csv_string(result).as_bytes())
}

pub(crate) fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp_name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    tmp_name.push(".partial");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

pub fn read_csv(path: &Path) -> Result<SweepResult> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<SweepResult> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| CliError::Csv(e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(CliError::Csv(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Csv(e.to_string()))?;
        let cell = |k: usize| -> Result<Option<f64>> {
            let s = record.get(k).unwrap_or("");
            if s.is_empty() {
                return Ok(None);
            }
            s.parse()
                .map(Some)
                .map_err(|_| CliError::Csv(format!("row {}: {} = {s:?} is not a number", i + 1, CSV_HEADER[k])))
        };
        let required = |k: usize| cell(k)?.ok_or_else(|| CliError::Csv(format!("row {}: {} missing", i + 1, CSV_HEADER[k])));
        rows.push(SweepRow {
            p: required(0)?,
            alpha: required(1)?,
            beta: cell(2)?,
            l0: cell(3)?,
            l1: cell(4)?,
            u0: cell(5)?,
            u1: cell(6)?,
            gap_new: cell(7)?,
            gap_old: cell(8)?,
            est_rate: cell(9)?,
            est_stderr: cell(10)?,
            exact_rate: cell(11)?,
        });
    }
    Ok(SweepResult { rows })
}
