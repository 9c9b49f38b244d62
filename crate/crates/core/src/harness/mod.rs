//! Dataset ingestion, parameter sweeps, visit analysis and result emission.

mod emit;
pub mod fixture;
mod manifest;
mod sweep;
mod visits;

pub use emit::{diagnostics_csv, emit, load_result_json, results_csv, tests_csv, OutputFormat, RESULTS_HEADER};
pub use fixture::generate_fixture;
pub use manifest::{
    load_manifest, read_boxes, read_scanpath_csv, write_scanpath_csv, DatasetManifest, ManifestEntry, Partition,
};
pub use sweep::{
    axis_configs, evaluate_config, evaluate_configs, run_sweep, ConfigPoint, DtwScale, ImageDiagnostic, ImageStatus, ResultRow,
    RunMetadata, SweepAxis, SweepGrid, SweepOptions, SweepResult, TestRecord, ViewerReduction,
};
pub use visits::{analyze_visits, ScanpathSource, VisitReport, VisitRow};
