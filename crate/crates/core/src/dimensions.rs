//! The five quality dimensions and the per-dataset quality report.
//!
//! Every dimension yields a score between 0 and 100. Scores are reported
//! side by side and never folded into one overall number.

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{Dataset, FileFormat};
use crate::standard::{AliasMap, FeaturePath, StandardError, StandardSpec, WeightTable};
use crate::typesys::{profile_column, DataType, ProfileError};

/// Slack allowed when a floating-point sum lands just outside `[0, 100]`.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimensionError {
    #[error("dataset has no records")]
    EmptyDataset,
    #[error("dataset has no features")]
    EmptyFeatureSet,
    #[error(transparent)]
    Alias(StandardError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("score {0} outside [0, 100]")]
    OutOfRange(f64),
}

impl From<StandardError> for DimensionError {
    fn from(e: StandardError) -> Self {
        match e {
            StandardError::EmptyFeatureSet => DimensionError::EmptyFeatureSet,
            other => DimensionError::Alias(other),
        }
    }
}

/// Points in `[0, 100]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Score(f64);

impl Score {
    pub const MAX: Score = Score(100.0);
    pub const ZERO: Score = Score(0.0);

    pub fn new(points: f64) -> Result<Self, DimensionError> {
        if (0.0..=100.0).contains(&points) {
            Ok(Score(points))
        } else {
            Err(DimensionError::OutOfRange(points))
        }
    }

    /// Accepts a computed sum, absorbing rounding drift just past the bounds.
    fn from_sum(points: f64) -> Result<Self, DimensionError> {
        if (-BOUND_SLACK..=100.0 + BOUND_SLACK).contains(&points) {
            Ok(Score(points.clamp(0.0, 100.0)))
        } else {
            Err(DimensionError::OutOfRange(points))
        }
    }

    pub fn points(self) -> f64 {
        self.0
    }

    /// Rounded half-up to two decimals, e.g. `65.385 -> "65.39"`.
    pub fn display_2dp(self) -> String {
        round_half_up_2dp(self.0)
    }

    pub fn rounded(self) -> f64 {
        self.display_2dp().parse().expect("formatted number parses")
    }
}

impl TryFrom<f64> for Score {
    type Error = DimensionError;

    fn try_from(points: f64) -> Result<Self, Self::Error> {
        Score::new(points)
    }
}

impl From<Score> for f64 {
    fn from(score: Score) -> f64 {
        score.0
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_2dp())
    }
}

/// Half-up rounding to two decimals applied to the shortest decimal
/// representation of `value`, so `0.125` gives `0.13` even though the
/// binary value is not exactly representable.
pub fn round_half_up_2dp(value: f64) -> String {
    let negative = value < 0.0;
    let repr = format!("{}", value.abs());
    let (int_part, frac_part) = match repr.split_once('.') {
        Some((i, f)) => (i.to_owned(), f.to_owned()),
        None => (repr.clone(), String::new()),
    };
    let mut digits: Vec<u8> = int_part.bytes().map(|b| b - b'0').collect();
    let frac: Vec<u8> = frac_part.bytes().map(|b| b - b'0').collect();
    digits.push(frac.first().copied().unwrap_or(0));
    digits.push(frac.get(1).copied().unwrap_or(0));
    if frac.get(2).copied().unwrap_or(0) >= 5 {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let split = digits.len() - 2;
    let int: String = digits[..split]
        .iter()
        .map(|d| char::from(b'0' + d))
        .collect();
    let frac: String = digits[split..]
        .iter()
        .map(|d| char::from(b'0' + d))
        .collect();
    let sign = if negative && digits.iter().any(|&d| d != 0) {
        "-"
    } else {
        ""
    };
    format!("{sign}{int}.{frac}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    FileFormat,
    SchemaAccuracy,
    SchemaCompleteness,
    TypeConsistency,
    DataCompleteness,
}

impl Dimension {
    pub const ALL: [Dimension; 5] = [
        Dimension::FileFormat,
        Dimension::SchemaAccuracy,
        Dimension::SchemaCompleteness,
        Dimension::TypeConsistency,
        Dimension::DataCompleteness,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Dimension::FileFormat => "file_format",
            Dimension::SchemaAccuracy => "schema_accuracy",
            Dimension::SchemaCompleteness => "schema_completeness",
            Dimension::TypeConsistency => "type_consistency",
            Dimension::DataCompleteness => "data_completeness",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// How one feature fared in a dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    /// Name or information present / absent.
    Presence {
        matched: bool,
        sources: Vec<FeaturePath>,
    },
    /// Distinct types observed in the feature.
    Types { types: BTreeSet<DataType> },
    /// Non-null slots out of all slots.
    Filled { non_null: usize, values: usize },
}

impl Outcome {
    /// Fraction of the weight the feature earns.
    pub fn factor(&self) -> f64 {
        match self {
            Outcome::Presence { matched, .. } => f64::from(u8::from(*matched)),
            Outcome::Types { types } => 1.0 / types.len() as f64,
            Outcome::Filled { non_null, values } => *non_null as f64 / *values as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub weight: f64,
    pub outcome: Outcome,
    /// `weight * outcome.factor()`
    pub points: f64,
}

impl Contribution {
    fn new(weight: f64, outcome: Outcome) -> Self {
        let points = weight * outcome.factor();
        Self {
            weight,
            outcome,
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionResult {
    pub dimension: Dimension,
    /// `None` when the dimension could not be computed; see `note`.
    pub score: Option<Score>,
    pub note: Option<String>,
    pub per_feature: IndexMap<FeaturePath, Contribution>,
}

impl DimensionResult {
    fn from_contributions(
        dimension: Dimension,
        per_feature: IndexMap<FeaturePath, Contribution>,
    ) -> Result<Self, DimensionError> {
        let sum: f64 = per_feature.values().map(|c| c.points).sum();
        Ok(Self {
            dimension,
            score: Some(Score::from_sum(sum)?),
            note: None,
            per_feature,
        })
    }

    fn not_computed(dimension: Dimension, reason: &DimensionError) -> Self {
        Self {
            dimension,
            score: None,
            note: Some(format!("not computed: {reason}")),
            per_feature: IndexMap::new(),
        }
    }
}

/// Points for the distribution format.
pub fn score_file_format(format: FileFormat) -> Score {
    let points = match format {
        FileFormat::Json | FileFormat::JsonLd | FileFormat::GeoJson => 100.0,
        FileFormat::Xml | FileFormat::Gml | FileFormat::Kml | FileFormat::Rdf => 75.0,
        FileFormat::Csv => 50.0,
        FileFormat::Xls | FileFormat::Xlsx => 25.0,
        FileFormat::Pdf | FileFormat::Txt | FileFormat::Unknown => 0.0,
    };
    Score(points)
}

fn presence_result(
    dimension: Dimension,
    weights: &WeightTable,
    spec: &StandardSpec,
    found: impl Fn(&FeaturePath) -> Vec<FeaturePath>,
) -> Result<DimensionResult, DimensionError> {
    let per_feature = spec
        .features()
        .iter()
        .map(|f| {
            let weight = weights
                .get(&f.path)
                .expect("every spec feature is weighted");
            let sources = found(&f.path);
            let outcome = Outcome::Presence {
                matched: !sources.is_empty(),
                sources,
            };
            (f.path.clone(), Contribution::new(weight, outcome))
        })
        .collect();
    DimensionResult::from_contributions(dimension, per_feature)
}

/// Exact feature-name matches against the standard.
pub fn score_schema_accuracy(dataset: &Dataset, spec: &StandardSpec) -> DimensionResult {
    let present = dataset.present_paths();
    presence_result(Dimension::SchemaAccuracy, &spec.weights(), spec, |path| {
        if present.contains(path) {
            vec![path.clone()]
        } else {
            Vec::new()
        }
    })
    .expect("presence scores stay within bounds")
}

/// Presence of the standard's information once dataset names are mapped
/// through `alias`.
pub fn score_schema_completeness(
    dataset: &Dataset,
    alias: &AliasMap,
    spec: &StandardSpec,
) -> Result<DimensionResult, DimensionError> {
    let present = dataset.present_paths();
    let mapped = alias.apply(&present)?;
    presence_result(
        Dimension::SchemaCompleteness,
        &spec.weights(),
        spec,
        |path| {
            if mapped.contains(path) {
                alias
                    .sources_of(path, &present)
                    .into_iter()
                    .cloned()
                    .collect()
            } else {
                Vec::new()
            }
        },
    )
}

fn value_level(
    dimension: Dimension,
    dataset: &Dataset,
    spec: &StandardSpec,
    outcome: impl Fn(&crate::typesys::TypeProfile) -> Outcome,
) -> Result<DimensionResult, DimensionError> {
    if dataset.record_count() == 0 {
        return Err(DimensionError::EmptyDataset);
    }
    let weights = spec.local_weights(&dataset.present_paths())?;
    let mut per_feature = IndexMap::with_capacity(weights.len());
    for column in dataset.columns() {
        let weight = weights
            .get(&column.path)
            .expect("present paths are weighted");
        let profile = profile_column(column)?;
        per_feature.insert(
            column.path.clone(),
            Contribution::new(weight, outcome(&profile)),
        );
    }
    DimensionResult::from_contributions(dimension, per_feature)
}

/// Each provided feature earns its local weight divided by the number of
/// types its values use.
pub fn score_type_consistency(
    dataset: &Dataset,
    spec: &StandardSpec,
) -> Result<DimensionResult, DimensionError> {
    value_level(Dimension::TypeConsistency, dataset, spec, |p| {
        Outcome::Types {
            types: p.distinct_types.clone(),
        }
    })
}

/// Each provided feature earns its local weight times its non-null ratio.
pub fn score_data_completeness(
    dataset: &Dataset,
    spec: &StandardSpec,
) -> Result<DimensionResult, DimensionError> {
    value_level(Dimension::DataCompleteness, dataset, spec, |p| {
        Outcome::Filled {
            non_null: p.non_null_count(),
            values: p.value_count,
        }
    })
}

/// Five dimension results for one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub dataset_id: String,
    pub source_format: FileFormat,
    pub record_count: usize,
    pub feature_count: usize,
    results: [DimensionResult; 5],
}

impl QualityReport {
    pub fn results(&self) -> &[DimensionResult; 5] {
        &self.results
    }

    pub fn result(&self, dimension: Dimension) -> &DimensionResult {
        &self.results[Dimension::ALL
            .iter()
            .position(|d| *d == dimension)
            .expect("all dimensions listed")]
    }

    pub fn score(&self, dimension: Dimension) -> Option<Score> {
        self.result(dimension).score
    }

    /// Scores in [`Dimension::ALL`] order.
    pub fn scores(&self) -> [Option<Score>; 5] {
        self.results.each_ref().map(|r| r.score)
    }
}

/// Runs all five scorers. Value-level dimensions of a dataset without
/// records or features are marked as not computed instead of failing.
pub fn assess(
    dataset_id: impl Into<String>,
    dataset: &Dataset,
    spec: &StandardSpec,
    alias: &AliasMap,
) -> Result<QualityReport, DimensionError> {
    let file_format = DimensionResult {
        dimension: Dimension::FileFormat,
        score: Some(score_file_format(dataset.source_format())),
        note: Some(format!("format {}", dataset.source_format())),
        per_feature: IndexMap::new(),
    };
    let accuracy = score_schema_accuracy(dataset, spec);
    let completeness = score_schema_completeness(dataset, alias, spec)?;
    let degrade = |dimension, r: Result<DimensionResult, DimensionError>| match r {
        Ok(result) => Ok(result),
        Err(e @ (DimensionError::EmptyDataset | DimensionError::EmptyFeatureSet)) => {
            Ok(DimensionResult::not_computed(dimension, &e))
        }
        Err(e) => Err(e),
    };
    let types = degrade(
        Dimension::TypeConsistency,
        score_type_consistency(dataset, spec),
    )?;
    let nulls = degrade(
        Dimension::DataCompleteness,
        score_data_completeness(dataset, spec),
    )?;

    Ok(QualityReport {
        dataset_id: dataset_id.into(),
        source_format: dataset.source_format(),
        record_count: dataset.record_count(),
        feature_count: dataset.feature_count(),
        results: [file_format, accuracy, completeness, types, nulls],
    })
}
