//! Serializable batch reports: full JSON, a per-dataset CSV score table and
//! a radar table for external plotting.
//!
//! All numbers are rounded half-up to two decimals when a report document is
//! built, so the JSON form re-parses to an identical document.

use std::fmt;
use std::str::FromStr;

use odq_core::dimensions::round_half_up_2dp;
use odq_core::{
    Dimension, DimensionResult, FeaturePath, FileFormat, Outcome, QualityReport, Score,
};
use serde::{Deserialize, Serialize};

use crate::AppError;

pub const TOOL_NAME: &str = "odq";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReportFormat {
    Json,
    Csv,
    Radar,
}

impl ReportFormat {
    pub fn file_name(self) -> &'static str {
        match self {
            ReportFormat::Json => "report.json",
            ReportFormat::Csv => "report.csv",
            ReportFormat::Radar => "radar.csv",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "radar" => Ok(ReportFormat::Radar),
            other => Err(format!(
                "unknown report format {other:?} (json, csv, radar)"
            )),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Radar => "radar",
        })
    }
}

fn round2(value: f64) -> f64 {
    round_half_up_2dp(value)
        .parse()
        .expect("rounded number parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
        }
    }
}

/// The five scores of one dataset; `None` means not computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub file_format: Option<f64>,
    pub schema_accuracy: Option<f64>,
    pub schema_completeness: Option<f64>,
    pub type_consistency: Option<f64>,
    pub data_completeness: Option<f64>,
}

impl Scores {
    pub fn from_report(report: &QualityReport) -> Self {
        let s = report.scores().map(|s| s.map(|s: Score| s.rounded()));
        Self {
            file_format: s[0],
            schema_accuracy: s[1],
            schema_completeness: s[2],
            type_consistency: s[3],
            data_completeness: s[4],
        }
    }

    /// In [`Dimension::ALL`] order.
    pub fn as_array(&self) -> [Option<f64>; 5] {
        [
            self.file_format,
            self.schema_accuracy,
            self.schema_completeness,
            self.type_consistency,
            self.data_completeness,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub path: FeaturePath,
    pub weight: f64,
    pub points: f64,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionDoc {
    pub dimension: Dimension,
    pub score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub features: Vec<FeatureRow>,
}

impl From<&DimensionResult> for DimensionDoc {
    fn from(result: &DimensionResult) -> Self {
        Self {
            dimension: result.dimension,
            score: result.score.map(Score::rounded),
            note: result.note.clone(),
            features: result
                .per_feature
                .iter()
                .map(|(path, c)| FeatureRow {
                    path: path.clone(),
                    weight: round2(c.weight),
                    points: round2(c.points),
                    outcome: c.outcome.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EntryDoc {
    Assessed {
        id: String,
        source: String,
        format: FileFormat,
        record_count: usize,
        feature_count: usize,
        scores: Scores,
        dimensions: Vec<DimensionDoc>,
    },
    Failed {
        id: String,
        source: String,
        /// Set when the format was determined before the failure.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        format: Option<FileFormat>,
        error: String,
    },
}

impl EntryDoc {
    pub fn assessed(source: impl Into<String>, report: &QualityReport) -> Self {
        EntryDoc::Assessed {
            id: report.dataset_id.clone(),
            source: source.into(),
            format: report.source_format,
            record_count: report.record_count,
            feature_count: report.feature_count,
            scores: Scores::from_report(report),
            dimensions: report.results().iter().map(DimensionDoc::from).collect(),
        }
    }

    pub fn id(&self) -> &str {
        match self {
            EntryDoc::Assessed { id, .. } | EntryDoc::Failed { id, .. } => id,
        }
    }

    pub fn scores(&self) -> Option<&Scores> {
        match self {
            EntryDoc::Assessed { scores, .. } => Some(scores),
            EntryDoc::Failed { .. } => None,
        }
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, EntryDoc::Failed { .. })
    }
}

/// One run over a manifest; entries keep manifest order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub tool: ToolInfo,
    pub generated_at: String,
    pub standard_iri: String,
    pub entries: Vec<EntryDoc>,
}

impl BatchReport {
    pub fn failure_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_failed()).count()
    }

    pub fn from_json(text: &str) -> Result<Self, AppError> {
        serde_json::from_str(text).map_err(|e| AppError::Report(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// `id` plus the five scores, one row per assessed dataset.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["id"];
        header.extend(Dimension::ALL.map(Dimension::key));
        self.score_table(&header, true)
    }

    /// Scores only: five columns, rows in the same order as [`Self::to_csv`].
    pub fn to_radar(&self) -> String {
        self.score_table(&Dimension::ALL.map(Dimension::key), false)
    }

    fn score_table(&self, header: &[&str], with_id: bool) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        for entry in &self.entries {
            let Some(scores) = entry.scores() else {
                continue;
            };
            let mut row: Vec<String> = Vec::with_capacity(6);
            if with_id {
                row.push(entry.id().to_owned());
            }
            row.extend(
                scores
                    .as_array()
                    .map(|s| s.map(|v| format!("{v:.2}")).unwrap_or_default()),
            );
            writer.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn emit(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Radar => self.to_radar(),
        }
    }
}
