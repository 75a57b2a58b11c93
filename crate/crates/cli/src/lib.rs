//! Command-line front end: reads JSON problem manifests and Matrix Market
//! operands, runs the solvers from `opapprox-core` and writes JSON reports.

pub mod error;
pub mod execute;
pub mod manifest;
pub mod mtx;
pub mod report;
pub mod residuals;
pub mod run;

pub use error::CliError;
pub use execute::{execute, Outcome};
pub use manifest::{parse_manifest, Manifest, ManifestFile, Overrides, Problem, Role};
pub use report::ResultReport;
