//! Interoperability-oriented quality scoring of open datasets against a
//! feature standard.
//!
//! The pipeline is: load a [`StandardSpec`], detect and parse a distribution
//! into a [`Dataset`], then [`assess`] it on five dimensions (file format,
//! schema accuracy, schema completeness, data type consistency and data
//! completeness).

pub mod dimensions;
pub mod ingest;
pub mod standard;
pub mod typesys;

pub use dimensions::{
    assess, score_data_completeness, score_file_format, score_schema_accuracy,
    score_schema_completeness, score_type_consistency, Contribution, Dimension, DimensionError,
    DimensionResult, Outcome, QualityReport, Score,
};
pub use ingest::{
    detect_format, parse_dataset, present_paths, Dataset, FeatureColumn, FileFormat, IngestError,
    ParseOptions, Value,
};
pub use standard::{
    AliasMap, FeaturePath, FeatureSpec, Obligation, StandardError, StandardSpec, WeightTable,
};
pub use typesys::{
    infer_type, parse_type_vectors, profile_column, DataType, ProfileError, TypeProfile, TypeVector,
};
