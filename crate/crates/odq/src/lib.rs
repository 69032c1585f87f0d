//! Batch front end: manifests, fetching, assessment runs and reports.

pub mod batch;
pub mod cli;
pub mod fetch;
pub mod manifest;
pub mod report;

use thiserror::Error;

pub use batch::{assess_entry, run_batch, BatchOptions};
pub use manifest::{Manifest, ManifestEntry};
pub use report::{BatchReport, EntryDoc, ReportFormat, Scores};

#[derive(Debug, Error)]
pub enum AppError {
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("standard: {0}")]
    Standard(String),
    #[error("alias map: {0}")]
    Alias(String),
    #[error("fetch: {0}")]
    Fetch(String),
    #[error(transparent)]
    Ingest(#[from] odq_core::IngestError),
    #[error(transparent)]
    Assess(#[from] odq_core::DimensionError),
    #[error("report: {0}")]
    Report(String),
    #[error("usage: {0}")]
    Usage(String),
}
