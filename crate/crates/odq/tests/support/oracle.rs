//! Brute-force scorer used as an independent reference.
//!
//! Instances are generated with the expected type of every cell attached, so
//! the reference never calls the engine's type inference, weight tables or
//! alias handling; it re-derives everything from names and labels.

use std::collections::{BTreeMap, BTreeSet};

use odq_core::{
    AliasMap, DataType, Dataset, FeatureColumn, FeaturePath, FeatureSpec, FileFormat, StandardSpec,
    Value,
};
use proptest::prelude::*;

/// Cells whose type is unambiguous under the published recognition rules.
pub fn labeled_cells() -> Vec<(Value, DataType)> {
    vec![
        (Value::Null, DataType::Null),
        (Value::text(""), DataType::Null),
        (Value::text("   "), DataType::Null),
        (Value::Bool(true), DataType::Bool),
        (Value::text("false"), DataType::Bool),
        (Value::Integer(7), DataType::Integer),
        (Value::text("42"), DataType::Integer),
        (Value::Float(2.5), DataType::Float),
        (Value::text("3.14"), DataType::Float),
        (Value::text("Hrad"), DataType::String),
        (Value::text("Hrad, horní"), DataType::String),
        (Value::text("https://brno.cz/hrad"), DataType::Url),
        (Value::text("info@brno.cz"), DataType::Email),
        (Value::text("Hlavní 12"), DataType::Address),
        (Value::text("POINT (16.6068 49.1951)"), DataType::Point),
        (Value::text("+420 123 456 789"), DataType::PhoneNumber),
        (Value::text("+44 2071234567"), DataType::PhoneNumber),
    ]
}

pub const STANDARD_NAMES: [&str; 10] = [
    "@context",
    "název",
    "umístění",
    "kontakt",
    "web",
    "typ",
    "popis",
    "vstupné",
    "obrázek",
    "otevírací_doba",
];
pub const OTHER_NAMES: [&str; 8] = [
    "name", "location", "nazev", "umisteni", "Název", "url", "tel", "gps",
];

#[derive(Debug, Clone)]
pub struct Instance {
    pub mandatory: Vec<String>,
    pub optional: Vec<String>,
    pub format: FileFormat,
    pub record_count: usize,
    /// name -> per-record (value, expected type)
    pub columns: Vec<(String, Vec<(Value, DataType)>)>,
    /// dataset name -> standard name; never maps two present names onto one target
    pub alias: BTreeMap<String, String>,
}

impl Instance {
    pub fn spec(&self) -> StandardSpec {
        let mut features: Vec<_> = self
            .mandatory
            .iter()
            .map(|n| FeatureSpec::mandatory(n).unwrap())
            .collect();
        features.extend(
            self.optional
                .iter()
                .map(|n| FeatureSpec::optional(n).unwrap()),
        );
        StandardSpec::new("urn:oracle", features).unwrap()
    }

    pub fn dataset(&self) -> Dataset {
        Dataset::new(
            self.format,
            self.record_count,
            self.columns
                .iter()
                .map(|(name, cells)| FeatureColumn {
                    path: FeaturePath::parse(name).unwrap(),
                    values: cells.iter().map(|(v, _)| v.clone()).collect(),
                })
                .collect(),
        )
        .unwrap()
    }

    pub fn alias_map(&self) -> AliasMap {
        AliasMap::from_pairs(self.alias.iter().map(|(k, v)| (k.as_str(), v.as_str()))).unwrap()
    }
}

pub fn instance() -> impl Strategy<Value = Instance> {
    let spec_part = (1usize..=5, 0usize..=5)
        .prop_flat_map(|(m, o)| {
            (
                Just(m),
                prop::sample::subsequence(STANDARD_NAMES.to_vec(), m + o).prop_shuffle(),
            )
        })
        .prop_map(|(m, names)| {
            let names: Vec<String> = names.into_iter().map(str::to_owned).collect();
            (names[..m].to_vec(), names[m..].to_vec())
        });
    let all_names: Vec<&'static str> = STANDARD_NAMES
        .iter()
        .chain(OTHER_NAMES.iter())
        .copied()
        .collect();
    let data_part = (0usize..=10, 0usize..=20).prop_flat_map(move |(k, n)| {
        (
            prop::sample::subsequence(all_names.clone(), k).prop_shuffle(),
            prop::collection::vec(
                prop::collection::vec(prop::sample::select(labeled_cells()), n),
                k,
            ),
            Just(n),
        )
    });
    let format = prop::sample::select(FileFormat::ALL.to_vec());
    (spec_part, data_part, format, any::<u64>()).prop_map(
        |((mandatory, optional), (names, cells, n), format, seed)| {
            let columns: Vec<(String, Vec<(Value, DataType)>)> =
                names.into_iter().map(str::to_owned).zip(cells).collect();
            let alias = alias_for(&mandatory, &optional, &columns, seed);
            Instance {
                mandatory,
                optional,
                format,
                record_count: n,
                columns,
                alias,
            }
        },
    )
}

/// Maps some non-standard dataset names onto standard names the dataset
/// lacks, each target used once.
fn alias_for(
    mandatory: &[String],
    optional: &[String],
    columns: &[(String, Vec<(Value, DataType)>)],
    seed: u64,
) -> BTreeMap<String, String> {
    let standard: BTreeSet<&String> = mandatory.iter().chain(optional).collect();
    let present: BTreeSet<&String> = columns.iter().map(|(n, _)| n).collect();
    let mut free_targets: Vec<&String> = standard
        .iter()
        .filter(|s| !present.contains(*s))
        .copied()
        .collect();
    let mut alias = BTreeMap::new();
    let mut bits = seed;
    for (name, _) in columns {
        if standard.contains(name) {
            continue;
        }
        let take = bits & 1 == 1;
        bits >>= 1;
        if take {
            if let Some(target) = free_targets.pop() {
                alias.insert(name.clone(), target.clone());
            }
        }
    }
    alias
}

pub fn format_points(format: FileFormat) -> f64 {
    match format {
        FileFormat::Json | FileFormat::JsonLd | FileFormat::GeoJson => 100.0,
        FileFormat::Xml | FileFormat::Gml | FileFormat::Kml | FileFormat::Rdf => 75.0,
        FileFormat::Csv => 50.0,
        FileFormat::Xls | FileFormat::Xlsx => 25.0,
        _ => 0.0,
    }
}

/// Weights: one mandatory feature weighs as much as all optional ones and
/// everything adds up to 100.
fn weights(mandatory: &[&String], optional: &[&String]) -> BTreeMap<String, f64> {
    let (m, o) = (mandatory.len() as f64, optional.len() as f64);
    let mut w = BTreeMap::new();
    if optional.is_empty() {
        for f in mandatory {
            w.insert((*f).clone(), 100.0 / m);
        }
    } else if mandatory.is_empty() {
        for f in optional {
            w.insert((*f).clone(), 100.0 / o);
        }
    } else {
        let wm = 100.0 / (m + 1.0);
        for f in mandatory {
            w.insert((*f).clone(), wm);
        }
        for f in optional {
            w.insert((*f).clone(), wm / o);
        }
    }
    w
}

#[derive(Debug, Clone, Copy)]
pub struct OracleScores {
    pub file_format: f64,
    pub schema_accuracy: f64,
    pub schema_completeness: f64,
    pub type_consistency: Option<f64>,
    pub data_completeness: Option<f64>,
}

impl OracleScores {
    pub fn as_array(&self) -> [Option<f64>; 5] {
        [
            Some(self.file_format),
            Some(self.schema_accuracy),
            Some(self.schema_completeness),
            self.type_consistency,
            self.data_completeness,
        ]
    }
}

pub fn score(instance: &Instance) -> OracleScores {
    let mandatory: Vec<&String> = instance.mandatory.iter().collect();
    let optional: Vec<&String> = instance.optional.iter().collect();
    let spec_weights = weights(&mandatory, &optional);

    let names: BTreeSet<&String> = if instance.record_count == 0 {
        BTreeSet::new()
    } else {
        instance.columns.iter().map(|(n, _)| n).collect()
    };

    let mut accuracy = 0.0;
    for f in mandatory.iter().chain(&optional) {
        if names.contains(f) {
            accuracy += spec_weights[*f];
        }
    }

    let information: BTreeSet<&String> = names
        .iter()
        .map(|n| instance.alias.get(*n).unwrap_or(n))
        .collect();
    let mut completeness = 0.0;
    for f in mandatory.iter().chain(&optional) {
        if information.contains(f) {
            completeness += spec_weights[*f];
        }
    }

    let (types, filled) = if names.is_empty() {
        (None, None)
    } else {
        let local_mandatory: Vec<&String> = names
            .iter()
            .filter(|n| mandatory.contains(n))
            .copied()
            .collect();
        let local_optional: Vec<&String> = names
            .iter()
            .filter(|n| !mandatory.contains(n))
            .copied()
            .collect();
        let local = weights(&local_mandatory, &local_optional);
        let mut types = 0.0;
        let mut filled = 0.0;
        for (name, cells) in &instance.columns {
            let w = local[name];
            let distinct: BTreeSet<DataType> = cells.iter().map(|(_, t)| *t).collect();
            types += w / distinct.len() as f64;
            let non_null = cells.iter().filter(|(_, t)| *t != DataType::Null).count();
            filled += w * non_null as f64 / cells.len() as f64;
        }
        (Some(types), Some(filled))
    };

    OracleScores {
        file_format: format_points(instance.format),
        schema_accuracy: accuracy,
        schema_completeness: completeness,
        type_consistency: types,
        data_completeness: filled,
    }
}
