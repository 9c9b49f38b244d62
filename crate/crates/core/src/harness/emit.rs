//! Writes sweep results as plot-ready CSV or JSON plus a run-metadata file.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sweep::SweepResult;
use crate::error::{Error, Result};

pub const RESULTS_HEADER: [&str; 6] = ["config", "gui_type", "metric", "mean", "sd", "n"];
const TESTS_HEADER: [&str; 10] = [
    "config_a",
    "config_b",
    "metric",
    "t_statistic",
    "df",
    "p_value",
    "cohens_d",
    "mean_difference",
    "n_pairs",
    "note",
];
const DIAGNOSTICS_HEADER: [&str; 8] = [
    "config",
    "image_id",
    "gui_type",
    "status",
    "viewers",
    "clamped",
    "fallback_steps",
    "message",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::UnknownVariant {
                kind: "output format",
                value: s.to_string(),
            }),
        }
    }
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// `config,gui_type,metric,mean,sd,n`, one row per aggregate.
pub fn results_csv(result: &SweepResult) -> String {
    table(
        &RESULTS_HEADER,
        result.rows.iter().map(|r| {
            vec![
                r.config.clone(),
                r.gui_type.to_string(),
                r.metric.to_string(),
                r.mean.to_string(),
                r.sd.to_string(),
                r.n.to_string(),
            ]
        }),
    )
}

pub fn tests_csv(result: &SweepResult) -> String {
    table(
        &TESTS_HEADER,
        result.tests.iter().map(|t| {
            let r = t.result.as_ref();
            vec![
                t.config_a.clone(),
                t.config_b.clone(),
                t.metric.to_string(),
                opt(r.map(|r| r.t_statistic)),
                opt(r.map(|r| r.degrees_of_freedom)),
                opt(r.map(|r| r.p_value)),
                opt(r.map(|r| r.cohens_d)),
                opt(r.map(|r| r.mean_difference)),
                opt(r.map(|r| r.n_pairs)),
                t.note.clone(),
            ]
        }),
    )
}

pub fn diagnostics_csv(result: &SweepResult) -> String {
    table(
        &DIAGNOSTICS_HEADER,
        result.diagnostics.iter().map(|d| {
            vec![
                d.config.clone(),
                d.image_id.clone(),
                d.gui_type.to_string(),
                d.status.as_str().to_string(),
                d.viewers.to_string(),
                d.clamped.to_string(),
                d.fallback_steps.to_string(),
                d.message.clone(),
            ]
        }),
    )
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn to_json<T: Serialize>(v: &T, path: &Path) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
}

/// Writes `result` into `out_dir` (created if needed) and returns the
/// written paths. CSV output is `results.csv`, `tests.csv` and
/// `diagnostics.csv`; JSON output is `results.json`. Both also write
/// `run_metadata.json`.
pub fn emit(result: &SweepResult, format: OutputFormat, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    match format {
        OutputFormat::Csv => {
            written.push(write(dir.join("results.csv"), &results_csv(result))?);
            written.push(write(dir.join("tests.csv"), &tests_csv(result))?);
            written.push(write(dir.join("diagnostics.csv"), &diagnostics_csv(result))?);
        }
        OutputFormat::Json => {
            let path = dir.join("results.json");
            let text = to_json(result, &path)?;
            written.push(write(path, &text)?);
        }
    }
    let path = dir.join("run_metadata.json");
    let text = to_json(&result.metadata, &path)?;
    written.push(write(path, &text)?);
    Ok(written)
}

pub fn load_result_json(path: impl AsRef<Path>) -> Result<SweepResult> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{GuiGroup, PairedTestResult};
    use crate::harness::sweep::{ImageDiagnostic, ImageStatus, ResultRow, TestRecord};
    use crate::metrics::Metric;
    use crate::types::GuiType;

    fn sample() -> SweepResult {
        SweepResult {
            rows: vec![ResultRow {
                config: "gamma=0.1".into(),
                gui_type: GuiGroup::Type(GuiType::Web),
                metric: Metric::Dtw,
                mean: 0.1 + 0.2,
                sd: 1.0 / 3.0,
                n: 3,
            }],
            tests: vec![TestRecord {
                config_a: "decay=linear".into(),
                config_b: "decay=gamma".into(),
                metric: Metric::Laminarity,
                result: Some(PairedTestResult {
                    t_statistic: -2.5,
                    degrees_of_freedom: 11,
                    p_value: 0.029_5,
                    cohens_d: -0.72,
                    n_pairs: 12,
                    mean_difference: -1.0e-3,
                }),
                note: String::new(),
            }],
            diagnostics: vec![ImageDiagnostic {
                config: "gamma=0.1".into(),
                image_id: "a, \"quoted\"".into(),
                gui_type: GuiType::Poster,
                status: ImageStatus::Failed,
                viewers: 0,
                clamped: 0,
                fallback_steps: 0,
                message: "boom".into(),
            }],
            ..SweepResult::default()
        }
    }

    #[test]
    fn empty_result_gives_header_only_csv() {
        assert_eq!(results_csv(&SweepResult::default()), "config,gui_type,metric,mean,sd,n\n");
    }

    #[test]
    fn csv_columns_and_formatting() {
        let r = sample();
        assert_eq!(
            results_csv(&r),
            "config,gui_type,metric,mean,sd,n\ngamma=0.1,web,dtw,0.30000000000000004,0.3333333333333333,3\n"
        );
        assert!(diagnostics_csv(&r).contains("\"a, \"\"quoted\"\"\""));
        assert!(tests_csv(&r).contains("decay=linear,decay=gamma,laminarity,-2.5,11,0.0295,-0.72,-0.001,12,"));
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let r = sample();
        let files = emit(&r, OutputFormat::Json, dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        assert_eq!(load_result_json(&files[0]).unwrap(), r);
    }

    #[test]
    fn csv_emit_writes_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit(&sample(), OutputFormat::Csv, dir.path().join("nested")).unwrap();
        let names: Vec<_> = files.iter().map(|p| p.file_name().unwrap().to_str().unwrap()).collect();
        assert_eq!(names, ["results.csv", "tests.csv", "diagnostics.csv", "run_metadata.json"]);
        let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(&files[3]).unwrap()).unwrap();
        assert_eq!(meta["rho"], 0.1);
        assert_eq!(meta["defaults"]["gamma"], 0.1);
        assert!(meta["version"].is_string());
    }
}
