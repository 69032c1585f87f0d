//! Format detection and parsing of distributions into column-oriented datasets.
//!
//! Every supported format is reduced to the same shape: a number of records
//! and, for every feature path seen in any record, one value slot per record.
//! Nested structures are flattened to dotted paths.

mod detect;
mod json;
mod tabular;
mod xml;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::standard::FeaturePath;

pub use detect::detect_format;

/// Number of leading content bytes the format sniffer looks at.
pub const SNIFF_LEN: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("format {0} is scored but cannot be parsed")]
    UnsupportedFormat(FileFormat),
    #[error("invalid dataset: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FileFormat {
    #[serde(rename = "JSON")]
    Json,
    #[serde(rename = "JSON_LD")]
    JsonLd,
    #[serde(rename = "GEOJSON")]
    GeoJson,
    #[serde(rename = "XML")]
    Xml,
    #[serde(rename = "GML")]
    Gml,
    #[serde(rename = "KML")]
    Kml,
    #[serde(rename = "RDF")]
    Rdf,
    #[serde(rename = "CSV")]
    Csv,
    #[serde(rename = "XLS")]
    Xls,
    #[serde(rename = "XLSX")]
    Xlsx,
    #[serde(rename = "PDF")]
    Pdf,
    #[serde(rename = "TXT")]
    Txt,
    #[serde(rename = "Unknown")]
    Unknown,
}

impl FileFormat {
    pub const ALL: [FileFormat; 13] = [
        FileFormat::Json,
        FileFormat::JsonLd,
        FileFormat::GeoJson,
        FileFormat::Xml,
        FileFormat::Gml,
        FileFormat::Kml,
        FileFormat::Rdf,
        FileFormat::Csv,
        FileFormat::Xls,
        FileFormat::Xlsx,
        FileFormat::Pdf,
        FileFormat::Txt,
        FileFormat::Unknown,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            FileFormat::Json => "JSON",
            FileFormat::JsonLd => "JSON_LD",
            FileFormat::GeoJson => "GEOJSON",
            FileFormat::Xml => "XML",
            FileFormat::Gml => "GML",
            FileFormat::Kml => "KML",
            FileFormat::Rdf => "RDF",
            FileFormat::Csv => "CSV",
            FileFormat::Xls => "XLS",
            FileFormat::Xlsx => "XLSX",
            FileFormat::Pdf => "PDF",
            FileFormat::Txt => "TXT",
            FileFormat::Unknown => "Unknown",
        }
    }

    pub fn is_parseable(self) -> bool {
        matches!(
            self,
            FileFormat::Json
                | FileFormat::JsonLd
                | FileFormat::GeoJson
                | FileFormat::Xml
                | FileFormat::Gml
                | FileFormat::Kml
                | FileFormat::Csv
                | FileFormat::Xlsx
        )
    }
}

impl fmt::Display for FileFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FileFormat {
    type Err = IngestError;

    /// Case-insensitive; `-` and `_` are interchangeable (`json-ld`, `JSON_LD`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        let format = match norm.as_str() {
            "JSON" => FileFormat::Json,
            "JSON_LD" | "JSONLD" => FileFormat::JsonLd,
            "GEOJSON" => FileFormat::GeoJson,
            "XML" => FileFormat::Xml,
            "GML" => FileFormat::Gml,
            "KML" => FileFormat::Kml,
            "RDF" => FileFormat::Rdf,
            "CSV" => FileFormat::Csv,
            "XLS" => FileFormat::Xls,
            "XLSX" => FileFormat::Xlsx,
            "PDF" => FileFormat::Pdf,
            "TXT" => FileFormat::Txt,
            "UNKNOWN" => FileFormat::Unknown,
            _ => return Err(IngestError::Parse(format!("unknown format tag {s:?}"))),
        };
        Ok(format)
    }
}

/// A scalar value as found in the source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum Value {
    Null,
    Bool(bool),
    Integer(i64),
    Float(f64),
    Text(String),
}

impl Value {
    pub fn text(s: impl Into<String>) -> Self {
        Value::Text(s.into())
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    /// Plain rendering used when several values are joined into one.
    pub fn render(&self) -> Option<String> {
        match self {
            Value::Null => None,
            Value::Bool(b) => Some(b.to_string()),
            Value::Integer(i) => Some(i.to_string()),
            Value::Float(f) => Some(f.to_string()),
            Value::Text(t) => Some(t.clone()),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Null => serde_json::Value::Null,
            Value::Bool(b) => (*b).into(),
            Value::Integer(i) => (*i).into(),
            Value::Float(f) => serde_json::Number::from_f64(*f)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Value::Text(t) => t.clone().into(),
        }
    }
}

/// Separator used when a multi-valued feature is collapsed into one slot.
pub const JOIN_SEPARATOR: &str = ";";

/// Collapses all values one record holds for the same path into one slot.
fn merge_values(values: Vec<Value>) -> Value {
    let mut non_null: Vec<Value> = values.into_iter().filter(|v| !v.is_null()).collect();
    match non_null.len() {
        0 => Value::Null,
        1 => non_null.remove(0),
        _ => {
            let parts: Vec<String> = non_null.iter().filter_map(Value::render).collect();
            Value::Text(parts.join(JOIN_SEPARATOR))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureColumn {
    pub path: FeaturePath,
    pub values: Vec<Value>,
}

/// Column-oriented records of one distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    record_count: usize,
    columns: IndexMap<FeaturePath, FeatureColumn>,
    source_format: FileFormat,
}

impl Dataset {
    pub fn new(
        source_format: FileFormat,
        record_count: usize,
        columns: Vec<FeatureColumn>,
    ) -> Result<Self, IngestError> {
        let mut map = IndexMap::with_capacity(columns.len());
        for column in columns {
            if column.values.len() != record_count {
                return Err(IngestError::Invalid(format!(
                    "column {} has {} slots, expected {record_count}",
                    column.path,
                    column.values.len()
                )));
            }
            let path = column.path.clone();
            if map.insert(path.clone(), column).is_some() {
                return Err(IngestError::Invalid(format!("duplicate column {path}")));
            }
        }
        Ok(Self {
            record_count,
            columns: map,
            source_format,
        })
    }

    pub fn record_count(&self) -> usize {
        self.record_count
    }

    pub fn source_format(&self) -> FileFormat {
        self.source_format
    }

    pub fn columns(&self) -> impl Iterator<Item = &FeatureColumn> {
        self.columns.values()
    }

    pub fn column(&self, path: &FeaturePath) -> Option<&FeatureColumn> {
        self.columns.get(path)
    }

    pub fn feature_count(&self) -> usize {
        self.columns.len()
    }

    /// Feature names the dataset contains, including all-null ones.
    pub fn present_paths(&self) -> BTreeSet<FeaturePath> {
        if self.record_count == 0 {
            return BTreeSet::new();
        }
        self.columns.keys().cloned().collect()
    }

    /// Canonical record array: one object per record keyed by dotted path,
    /// with every column present in every record.
    pub fn to_canonical_json(&self) -> serde_json::Value {
        let records = (0..self.record_count)
            .map(|i| {
                let object: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .values()
                    .map(|c| (c.path.to_string(), c.values[i].to_json()))
                    .collect();
                serde_json::Value::Object(object)
            })
            .collect();
        serde_json::Value::Array(records)
    }
}

/// Free-function form of [`Dataset::present_paths`].
pub fn present_paths(dataset: &Dataset) -> BTreeSet<FeaturePath> {
    dataset.present_paths()
}

/// Accumulates flattened records and pads missing slots with nulls.
#[derive(Debug, Default)]
pub(crate) struct DatasetBuilder {
    record_count: usize,
    columns: IndexMap<FeaturePath, Vec<Value>>,
}

/// Flattened fields of one record; a path may collect several values.
pub(crate) type Record = IndexMap<FeaturePath, Vec<Value>>;

impl DatasetBuilder {
    pub fn push(&mut self, record: Record) {
        let index = self.record_count;
        self.record_count += 1;
        for (path, values) in record {
            let slots = self
                .columns
                .entry(path)
                .or_insert_with(|| vec![Value::Null; index]);
            slots.push(merge_values(values));
        }
        for slots in self.columns.values_mut() {
            if slots.len() < self.record_count {
                slots.push(Value::Null);
            }
        }
    }

    pub fn finish(self, format: FileFormat) -> Dataset {
        let columns = self
            .columns
            .into_iter()
            .map(|(path, values)| (path.clone(), FeatureColumn { path, values }))
            .collect();
        Dataset {
            record_count: self.record_count,
            columns,
            source_format: format,
        }
    }
}

pub(crate) fn add_field(record: &mut Record, path: FeaturePath, value: Value) {
    record.entry(path).or_default().push(value);
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// `/`-separated member names leading from the document root to the records.
    pub record_root: Option<String>,
    /// Field separator for CSV; defaults to `,`.
    pub csv_delimiter: Option<u8>,
}

impl ParseOptions {
    pub(crate) fn root_segments(&self) -> Vec<&str> {
        self.record_root
            .as_deref()
            .map(|r| r.split('/').filter(|s| !s.is_empty()).collect())
            .unwrap_or_default()
    }
}

/// Parses a distribution of the given format.
pub fn parse_dataset(
    format: FileFormat,
    content: &[u8],
    options: &ParseOptions,
) -> Result<Dataset, IngestError> {
    match format {
        FileFormat::Json | FileFormat::JsonLd => json::parse(format, decode(content)?, options),
        FileFormat::GeoJson => json::parse_geojson(decode(content)?, options),
        FileFormat::Xml | FileFormat::Gml | FileFormat::Kml => {
            xml::parse(format, decode(content)?, options)
        }
        FileFormat::Csv => tabular::parse_csv(decode(content)?, options),
        FileFormat::Xlsx => tabular::parse_xlsx(content),
        other => Err(IngestError::UnsupportedFormat(other)),
    }
}

fn decode(content: &[u8]) -> Result<&str, IngestError> {
    let text = std::str::from_utf8(content)
        .map_err(|e| IngestError::Parse(format!("content is not valid UTF-8: {e}")))?;
    Ok(text.strip_prefix('\u{feff}').unwrap_or(text))
}
