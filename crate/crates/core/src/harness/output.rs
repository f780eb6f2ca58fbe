use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::campaign::{BenchmarkReport, TrialOutcome};
use super::reference::ComparisonRow;
use crate::error::{Error, Result};
use crate::timetable::SessionRow;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SNSGA_OUT_DIR";

pub fn default_output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("snsga-out"))
}

/// One JSON object per line.
pub fn write_trials_jsonl(path: &Path, trials: &[TrialOutcome]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for t in trials {
        serde_json::to_writer(&mut out, t)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_trials_jsonl(path: &Path) -> Result<Vec<TrialOutcome>> {
    let reader = BufReader::new(File::open(path)?);
    let mut trials = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let t = serde_json::from_str(&line).map_err(|e| Error::Parse {
            source_name: path.display().to_string(),
            message: format!("line {}: {e}", i + 1),
        })?;
        trials.push(t);
    }
    Ok(trials)
}

pub fn write_reports_csv(path: &Path, reports: &[BenchmarkReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in reports {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_comparison_csv(path: &Path, rows: &[ComparisonRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["benchmark", "algorithm", "source", "evaluations"])?;
    for r in rows {
        let source = match r.source {
            super::RowSource::Published => "published",
            super::RowSource::Claimed => "claimed",
            super::RowSource::Measured => "measured",
        };
        w.write_record([
            r.benchmark.as_str(),
            r.algorithm.as_str(),
            source,
            r.evaluations.as_deref().unwrap_or("-"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Two-column series with the given header names.
pub fn write_series_csv(path: &Path, header: [&str; 2], series: &[(usize, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for (i, v) in series {
        w.write_record([i.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_schedule_csv(path: &Path, rows: &[SessionRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
