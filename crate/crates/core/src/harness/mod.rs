//! Batch experiments: seeded trial campaigns over the benchmark registry,
//! success classification, summary statistics, comparison against published
//! evaluation counts, and the file formats the CLI writes.

mod campaign;
mod output;
mod reference;

pub use campaign::{
    convergence_trace, report_from_trials, run_campaign, run_trial, solve_timetable, BenchmarkReport,
    CampaignOptions, CampaignResult, TimetableSolution, TrialOutcome,
};
pub use output::{
    default_output_dir, read_trials_jsonl, write_comparison_csv, write_reports_csv, write_schedule_csv,
    write_series_csv, write_trials_jsonl, OUTPUT_DIR_ENV,
};
pub use reference::{compare_reference, ComparisonRow, PublishedResult, ReferenceTable, RowSource};

use std::path::Path;

use crate::driver::SnsgaConfig;
use crate::error::{Error, Result};

/// A run counts as successful when
/// `|fobj_alg - fobj_anal| < 1e-4 * |fobj_init| + 1e-6`.
pub fn is_success(fobj_alg: f64, fobj_anal: f64, fobj_init: f64) -> bool {
    (fobj_alg - fobj_anal).abs() < 1e-4 * fobj_init.abs() + 1e-6
}

/// Rescales a trace to `[0, 1]` by its own minimum and maximum.
/// A constant trace maps to zeros.
pub fn normalize_trace(trace: &[f64]) -> Vec<f64> {
    let min = trace.iter().copied().fold(f64::INFINITY, f64::min);
    let max = trace.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    if !(span > 0.0) || !span.is_finite() {
        return vec![0.0; trace.len()];
    }
    trace.iter().map(|v| ((v - min) / span).clamp(0.0, 1.0)).collect()
}

/// Parses a TOML run configuration. Missing keys keep their defaults.
pub fn parse_config(text: &str, source_name: &str) -> Result<SnsgaConfig> {
    let config: SnsgaConfig = toml::from_str(text).map_err(|e| Error::Parse {
        source_name: source_name.to_string(),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<SnsgaConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text, &path.display().to_string())
}
