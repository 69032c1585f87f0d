//! Feature standards, alias maps and feature weights.
//!
//! A standard lists the feature paths a dataset is expected to carry, each
//! either mandatory or optional. Weights are assigned so that one mandatory
//! feature is worth as much as all optional features together and the whole
//! standard is worth 100 points.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Total number of points a weight table distributes.
pub const TOTAL_POINTS: f64 = 100.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StandardError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("invalid feature path {0:?}: {1}")]
    InvalidPath(String, &'static str),
    #[error("no features to weight")]
    EmptyFeatureSet,
    #[error("alias collision: {first} and {second} both map to {target}")]
    AliasCollision {
        first: FeaturePath,
        second: FeaturePath,
        target: FeaturePath,
    },
}

/// Dot-separated location of a feature inside a (flattened) record.
///
/// Comparison is byte-wise: case and diacritics are significant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeaturePath {
    segments: Vec<String>,
}

impl FeaturePath {
    pub fn from_segments<I, S>(segments: I) -> Result<Self, StandardError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let segments: Vec<String> = segments.into_iter().map(Into::into).collect();
        if segments.is_empty() {
            return Err(StandardError::InvalidPath(String::new(), "no segments"));
        }
        for s in &segments {
            if s.is_empty() {
                return Err(StandardError::InvalidPath(
                    segments.join("."),
                    "empty segment",
                ));
            }
            if s.contains('.') {
                return Err(StandardError::InvalidPath(
                    segments.join("."),
                    "segment contains '.'",
                ));
            }
        }
        Ok(Self { segments })
    }

    /// Parses `a.b.c`.
    pub fn parse(text: &str) -> Result<Self, StandardError> {
        Self::from_segments(text.split('.'))
    }

    /// Builds a path from arbitrary key text, dropping empty segments.
    /// Returns `None` if nothing usable remains.
    pub fn lenient(text: &str) -> Option<Self> {
        let segments: Vec<String> = text
            .split('.')
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        if segments.is_empty() {
            None
        } else {
            Some(Self { segments })
        }
    }

    pub fn segments(&self) -> &[String] {
        &self.segments
    }

    /// Returns `self` extended by the segments of `tail`.
    pub fn join(&self, tail: &FeaturePath) -> FeaturePath {
        let mut segments = self.segments.clone();
        segments.extend(tail.segments.iter().cloned());
        FeaturePath { segments }
    }
}

impl fmt::Display for FeaturePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.segments.join("."))
    }
}

impl FromStr for FeaturePath {
    type Err = StandardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for FeaturePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FeaturePath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        FeaturePath::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Obligation {
    Mandatory,
    Optional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub path: FeaturePath,
    pub obligation: Obligation,
}

impl FeatureSpec {
    pub fn mandatory(path: &str) -> Result<Self, StandardError> {
        Ok(Self {
            path: FeaturePath::parse(path)?,
            obligation: Obligation::Mandatory,
        })
    }

    pub fn optional(path: &str) -> Result<Self, StandardError> {
        Ok(Self {
            path: FeaturePath::parse(path)?,
            obligation: Obligation::Optional,
        })
    }

    pub fn is_mandatory(&self) -> bool {
        self.obligation == Obligation::Mandatory
    }
}

/// A validated feature standard.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StandardSpec {
    standard_iri: String,
    features: Vec<FeatureSpec>,
}

#[derive(Deserialize)]
struct StandardDocument {
    standard_iri: String,
    features: Vec<FeatureSpec>,
}

impl StandardSpec {
    /// Validates that paths are unique and at least one feature is mandatory.
    pub fn new(
        standard_iri: impl Into<String>,
        features: Vec<FeatureSpec>,
    ) -> Result<Self, StandardError> {
        let mut seen = BTreeSet::new();
        for f in &features {
            if !seen.insert(&f.path) {
                return Err(StandardError::Validation(format!(
                    "duplicate feature path {}",
                    f.path
                )));
            }
        }
        if !features.iter().any(FeatureSpec::is_mandatory) {
            return Err(StandardError::Validation(
                "standard declares no mandatory feature".into(),
            ));
        }
        Ok(Self {
            standard_iri: standard_iri.into(),
            features,
        })
    }

    /// Loads a standard from its JSON document form.
    pub fn from_json(document: &str) -> Result<Self, StandardError> {
        let doc: StandardDocument = serde_json::from_str(document.trim_start_matches('\u{feff}'))
            .map_err(|e| StandardError::Parse(e.to_string()))?;
        Self::new(doc.standard_iri, doc.features)
    }

    pub fn standard_iri(&self) -> &str {
        &self.standard_iri
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn mandatory_count(&self) -> usize {
        self.features.iter().filter(|f| f.is_mandatory()).count()
    }

    pub fn optional_count(&self) -> usize {
        self.features.len() - self.mandatory_count()
    }

    pub fn obligation_of(&self, path: &FeaturePath) -> Option<Obligation> {
        self.features
            .iter()
            .find(|f| &f.path == path)
            .map(|f| f.obligation)
    }

    /// Weights of all features in the standard.
    pub fn weights(&self) -> WeightTable {
        let (mandatory, optional): (Vec<_>, Vec<_>) =
            self.features.iter().partition(|f| f.is_mandatory());
        WeightTable::split(
            mandatory.into_iter().map(|f| f.path.clone()),
            optional.into_iter().map(|f| f.path.clone()),
        )
        .expect("a valid standard has at least one mandatory feature")
    }

    /// Weights over the features a dataset actually provides.
    ///
    /// Mandatory features are the standard's mandatory features found in
    /// `present`; every other present path counts as optional. Standard
    /// features missing from `present` get no entry.
    pub fn local_weights(
        &self,
        present: &BTreeSet<FeaturePath>,
    ) -> Result<WeightTable, StandardError> {
        if present.is_empty() {
            return Err(StandardError::EmptyFeatureSet);
        }
        let (mandatory, optional): (Vec<_>, Vec<_>) = present
            .iter()
            .cloned()
            .partition(|p| self.obligation_of(p) == Some(Obligation::Mandatory));
        WeightTable::split(mandatory, optional)
    }
}

/// Per-feature weights in points.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct WeightTable {
    entries: BTreeMap<FeaturePath, f64>,
}

impl WeightTable {
    /// Mandatory weight is `100 / (m + 1)`, optional weight is the mandatory
    /// weight divided by `o`. With no optional features the 100 points are
    /// split evenly over the mandatory ones, and with no mandatory features
    /// evenly over the optional ones.
    fn split(
        mandatory: impl IntoIterator<Item = FeaturePath>,
        optional: impl IntoIterator<Item = FeaturePath>,
    ) -> Result<Self, StandardError> {
        let mandatory: Vec<_> = mandatory.into_iter().collect();
        let optional: Vec<_> = optional.into_iter().collect();
        let (m, o) = (mandatory.len() as f64, optional.len() as f64);

        let (w_mandatory, w_optional) = match (mandatory.len(), optional.len()) {
            (0, 0) => return Err(StandardError::EmptyFeatureSet),
            (_, 0) => (TOTAL_POINTS / m, 0.0),
            (0, _) => (0.0, TOTAL_POINTS / o),
            _ => {
                let w_mf = TOTAL_POINTS / (m + 1.0);
                (w_mf, w_mf / o)
            }
        };

        let mut entries = BTreeMap::new();
        entries.extend(mandatory.into_iter().map(|p| (p, w_mandatory)));
        entries.extend(optional.into_iter().map(|p| (p, w_optional)));
        Ok(Self { entries })
    }

    pub fn get(&self, path: &FeaturePath) -> Option<f64> {
        self.entries.get(path).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FeaturePath, f64)> {
        self.entries.iter().map(|(p, w)| (p, *w))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }
}

/// Manual mapping of dataset feature names onto standard feature names.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AliasMap {
    aliases: BTreeMap<FeaturePath, FeaturePath>,
}

impl AliasMap {
    pub fn new(aliases: BTreeMap<FeaturePath, FeaturePath>) -> Self {
        Self { aliases }
    }

    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, StandardError> {
        let mut aliases = BTreeMap::new();
        for (from, to) in pairs {
            aliases.insert(FeaturePath::parse(from)?, FeaturePath::parse(to)?);
        }
        Ok(Self { aliases })
    }

    pub fn from_json(document: &str) -> Result<Self, StandardError> {
        serde_json::from_str(document.trim_start_matches('\u{feff}'))
            .map_err(|e| StandardError::Parse(e.to_string()))
    }

    pub fn is_empty(&self) -> bool {
        self.aliases.is_empty()
    }

    pub fn get(&self, path: &FeaturePath) -> Option<&FeaturePath> {
        self.aliases.get(path)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FeaturePath, &FeaturePath)> {
        self.aliases.iter()
    }

    /// Renames every path that has a mapping; other paths pass through.
    ///
    /// Fails if two mapped paths of `paths` share a target.
    pub fn apply(
        &self,
        paths: &BTreeSet<FeaturePath>,
    ) -> Result<BTreeSet<FeaturePath>, StandardError> {
        let mut claimed: BTreeMap<&FeaturePath, &FeaturePath> = BTreeMap::new();
        let mut out = BTreeSet::new();
        for path in paths {
            match self.aliases.get(path) {
                Some(target) => {
                    if let Some(first) = claimed.insert(target, path) {
                        return Err(StandardError::AliasCollision {
                            first: first.clone(),
                            second: path.clone(),
                            target: target.clone(),
                        });
                    }
                    out.insert(target.clone());
                }
                None => {
                    out.insert(path.clone());
                }
            }
        }
        Ok(out)
    }

    /// Dataset-side paths in `paths` that map onto `target`, or `target`
    /// itself if present unmapped.
    pub fn sources_of<'a>(
        &self,
        target: &FeaturePath,
        paths: &'a BTreeSet<FeaturePath>,
    ) -> Vec<&'a FeaturePath> {
        paths
            .iter()
            .filter(|p| match self.aliases.get(*p) {
                Some(t) => t == target,
                None => *p == target,
            })
            .collect()
    }
}
