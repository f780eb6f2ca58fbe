use serde::{Deserialize, Serialize};

use super::campaign::BenchmarkReport;
use crate::benchmarks;
use crate::error::{Error, Result};

/// Published average evaluation counts of competing methods, one column per
/// benchmark. `-` marks a benchmark the method was not run on.
const EVALUATION_COUNTS: &str = "\
Algorithm,RC,GP,B_2,SH,R_2,Z_2,\"H_{3,4}\",\"S_{4,5}\"
CHA,295,259,132,345,459,215,492,598
ECTS,245,231,210,370,480,195,548,825
CGA,620,410,320,575,960,620,582,610
ESA,-,783,-,-,796,15820,698,1137
CRTS min,41,171,-,-,-,-,609,664
CRTS ave,38,248,-,-,-,-,513,812
TS,492,486,-,727,-,-,508,-
INTEROPT,4172,6375,-,-,-,-,1113,3700
NM-GA,356,422,529,1009,738,339,688,2366
NM-PSO,230,304,325,753,440,186,436,850
SNSGA,109,124,94,206,189,227,185,345
";

/// Published SNSGA results per benchmark: success rate (%), average
/// evaluations and average gap over successful runs.
const SNSGA_RESULTS: &str = "\
Test Function,Rate of successful minimization,Average of objective function numbers,Average gap
RC,100,109,1e-6
GP,100,124,8e-5
B2,100,94,1e-6
SH,100,206,5.5e-5
R_2,100,189,4e-6
Z_2,100,227,5e-6
\"H_{3,4}\",100,185,1.35e-4
\"S_{4,5}\",98,345,7e-5
R_5,100,105,3e-5
R_{10},100,148,9e-5
";

/// Registry names of the evaluation-count columns, in column order.
const COUNT_COLUMNS: [&str; 8] = ["RC", "GP", "B2", "SH", "R2", "Z2", "H34", "S45"];
/// Registry names of the SNSGA result rows, in row order.
const RESULT_ROWS: [&str; 10] = ["RC", "GP", "B2", "SH", "R2", "Z2", "H34", "S45", "R5", "R10"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedResult {
    pub label: String,
    pub success_rate: String,
    pub evaluations: String,
    pub gap: String,
}

/// Published numbers kept as the exact strings that were printed.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    /// Column labels as printed, aligned with `COUNT_COLUMNS`.
    pub column_labels: Vec<String>,
    /// (algorithm, per-column value or `None` where not reported)
    pub rows: Vec<(String, Vec<Option<String>>)>,
    /// SNSGA results aligned with `RESULT_ROWS`.
    pub results: Vec<PublishedResult>,
}

fn records(text: &str) -> Vec<csv::StringRecord> {
    csv::ReaderBuilder::new()
        .from_reader(text.as_bytes())
        .records()
        .collect::<std::result::Result<_, _>>()
        .expect("embedded reference data is well-formed")
}

impl ReferenceTable {
    pub fn published() -> Self {
        let header = csv::ReaderBuilder::new()
            .from_reader(EVALUATION_COUNTS.as_bytes())
            .headers()
            .expect("embedded reference data has a header")
            .clone();
        let column_labels = header.iter().skip(1).map(str::to_string).collect();
        let rows = records(EVALUATION_COUNTS)
            .into_iter()
            .map(|r| {
                let values = r.iter().skip(1).map(|v| (v != "-").then(|| v.to_string())).collect();
                (r[0].to_string(), values)
            })
            .collect();
        let results = records(SNSGA_RESULTS)
            .into_iter()
            .map(|r| PublishedResult {
                label: r[0].to_string(),
                success_rate: r[1].to_string(),
                evaluations: r[2].to_string(),
                gap: r[3].to_string(),
            })
            .collect();
        Self { column_labels, rows, results }
    }

    fn column(&self, name: &str) -> Option<usize> {
        COUNT_COLUMNS.iter().position(|c| c.eq_ignore_ascii_case(name))
    }

    /// Published count for one algorithm and benchmark registry name.
    pub fn count(&self, algorithm: &str, benchmark: &str) -> Option<&str> {
        let col = self.column(benchmark)?;
        self.rows
            .iter()
            .find(|(a, _)| a == algorithm)
            .and_then(|(_, v)| v[col].as_deref())
    }

    /// Published SNSGA result for a benchmark registry name.
    pub fn result(&self, benchmark: &str) -> Option<&PublishedResult> {
        RESULT_ROWS
            .iter()
            .position(|r| r.eq_ignore_ascii_case(benchmark))
            .map(|i| &self.results[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSource {
    /// Another method's published count.
    Published,
    /// The count published for SNSGA itself.
    Claimed,
    /// Our own mean over successful trials.
    Measured,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub benchmark: String,
    pub algorithm: String,
    pub source: RowSource,
    /// Average evaluations as text; `None` where nothing was reported.
    pub evaluations: Option<String>,
}

/// Lines up our measured mean evaluations with every published count for the
/// same benchmark. Reporting only; nothing is judged.
pub fn compare_reference(report: &BenchmarkReport, table: &ReferenceTable) -> Result<Vec<ComparisonRow>> {
    let name = benchmarks::lookup(&report.benchmark)
        .map(|s| s.name.to_string())
        .unwrap_or_else(|_| report.benchmark.clone());
    let claim = table.result(&name);
    let in_counts = table.column(&name).is_some();
    if claim.is_none() && !in_counts {
        return Err(Error::UnknownBenchmark(report.benchmark.clone()));
    }
    let row = |algorithm: &str, source, evaluations: Option<String>| ComparisonRow {
        benchmark: name.clone(),
        algorithm: algorithm.to_string(),
        source,
        evaluations,
    };
    let mut rows = Vec::new();
    if let Some(col) = table.column(&name) {
        for (algorithm, values) in table.rows.iter().filter(|(a, _)| a != "SNSGA") {
            rows.push(row(algorithm, RowSource::Published, values[col].clone()));
        }
    }
    let claimed = claim
        .map(|c| c.evaluations.clone())
        .or_else(|| table.count("SNSGA", &name).map(str::to_string));
    rows.push(row("SNSGA", RowSource::Claimed, claimed));
    rows.push(row(
        "SNSGA",
        RowSource::Measured,
        report.mean_evaluations_successful.map(|m| format!("{m:.1}")),
    ));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(name: &str) -> BenchmarkReport {
        BenchmarkReport {
            benchmark: name.into(),
            trials: 4,
            successes: 4,
            success_rate: 100.0,
            mean_evaluations_successful: Some(321.25),
            mean_gap_successful: Some(1e-7),
            mean_full_run_evaluations: None,
        }
    }

    fn evals<'a>(rows: &'a [ComparisonRow], algorithm: &str, source: RowSource) -> Option<&'a str> {
        rows.iter()
            .find(|r| r.algorithm == algorithm && r.source == source)
            .and_then(|r| r.evaluations.as_deref())
    }

    #[test]
    fn table_shape() {
        let t = ReferenceTable::published();
        assert_eq!(t.column_labels.len(), 8);
        assert_eq!(t.column_labels[6], "H_{3,4}");
        assert_eq!(t.rows.len(), 11);
        assert!(t.rows.iter().all(|(_, v)| v.len() == 8));
        assert_eq!(t.results.len(), 10);
        assert_eq!(t.results[9].label, "R_{10}");
        // Each SNSGA count row agrees with the SNSGA results table.
        for name in COUNT_COLUMNS {
            assert_eq!(t.count("SNSGA", name), Some(t.result(name).unwrap().evaluations.as_str()));
        }
    }

    #[test]
    fn branin_row() {
        let rows = compare_reference(&report("RC"), &ReferenceTable::published()).unwrap();
        assert_eq!(evals(&rows, "CHA", RowSource::Published), Some("295"));
        assert_eq!(evals(&rows, "ECTS", RowSource::Published), Some("245"));
        assert_eq!(evals(&rows, "CGA", RowSource::Published), Some("620"));
        assert_eq!(evals(&rows, "ESA", RowSource::Published), None);
        assert_eq!(evals(&rows, "SNSGA", RowSource::Claimed), Some("109"));
        assert_eq!(evals(&rows, "SNSGA", RowSource::Measured), Some("321.2"));
        assert_eq!(rows.len(), 12);
    }

    #[test]
    fn shekel_row() {
        let rows = compare_reference(&report("S45"), &ReferenceTable::published()).unwrap();
        assert_eq!(evals(&rows, "SNSGA", RowSource::Claimed), Some("345"));
        assert_eq!(evals(&rows, "NM-PSO", RowSource::Published), Some("850"));
        assert_eq!(evals(&rows, "TS", RowSource::Published), None);
    }

    #[test]
    fn rosenbrock_five_has_only_claim_and_measurement() {
        let rows = compare_reference(&report("R_5"), &ReferenceTable::published()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(evals(&rows, "SNSGA", RowSource::Claimed), Some("105"));
        assert_eq!(rows[1].source, RowSource::Measured);
    }

    #[test]
    fn absent_benchmark_is_a_lookup_error() {
        let err = compare_reference(&report("sphere"), &ReferenceTable::published()).unwrap_err();
        assert_eq!(err, Error::UnknownBenchmark("sphere".into()));
    }
}
