//! Batch manifests: the list of distributions to assess in one run.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use odq_core::FileFormat;
use serde::{Deserialize, Serialize};

use crate::AppError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    /// Local path or `http(s)` URL.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_hint: Option<FileFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_root: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alias_file: Option<PathBuf>,
}

impl ManifestEntry {
    pub fn is_url(&self) -> bool {
        is_url(&self.source)
    }
}

pub fn is_url(source: &str) -> bool {
    let lower = source.trim_start().to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self, AppError> {
        let mut ids = BTreeSet::new();
        for entry in &entries {
            if entry.id.trim().is_empty() {
                return Err(AppError::Manifest("entry with empty id".into()));
            }
            if entry.source.trim().is_empty() {
                return Err(AppError::Manifest(format!(
                    "entry {:?} has an empty source",
                    entry.id
                )));
            }
            if !ids.insert(entry.id.as_str()) {
                return Err(AppError::Manifest(format!(
                    "duplicate entry id {:?}",
                    entry.id
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn from_json(text: &str) -> Result<Self, AppError> {
        let raw: Manifest = serde_json::from_str(text.trim_start_matches('\u{feff}'))
            .map_err(|e| AppError::Manifest(e.to_string()))?;
        Self::new(raw.entries)
    }

    /// Loads a manifest file; relative local sources and alias files are
    /// resolved against the manifest's directory.
    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Manifest(format!("{}: {e}", path.display())))?;
        let mut manifest = Self::from_json(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        for entry in &mut manifest.entries {
            if !entry.is_url() && Path::new(&entry.source).is_relative() {
                entry.source = base.join(&entry.source).to_string_lossy().into_owned();
            }
            if let Some(alias) = &entry.alias_file {
                if alias.is_relative() {
                    entry.alias_file = Some(base.join(alias));
                }
            }
        }
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let m = Manifest::from_json(
            r#"{"entries": [
                {"id": "brno", "source": "https://data.brno.cz/poi.geojson", "format_hint": "GEOJSON"},
                {"id": "decin", "source": "decin.xlsx", "record_root": "a/b", "alias_file": "decin-alias.json"}
            ]}"#,
        )
        .unwrap();
        assert_eq!(m.entries.len(), 2);
        assert!(m.entries[0].is_url());
        assert_eq!(m.entries[0].format_hint, Some(FileFormat::GeoJson));
        assert!(!m.entries[1].is_url());
    }

    #[test]
    fn rejects_duplicates_and_empty_sources() {
        let dup = r#"{"entries": [{"id": "a", "source": "x"}, {"id": "a", "source": "y"}]}"#;
        assert!(Manifest::from_json(dup).is_err());
        let empty = r#"{"entries": [{"id": "a", "source": " "}]}"#;
        assert!(Manifest::from_json(empty).is_err());
        assert!(Manifest::from_json(r#"{"entries": [{"id": "a"}]}"#).is_err());
    }

    #[test]
    fn resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("manifest.json");
        std::fs::write(
            &file,
            r#"{"entries": [{"id": "a", "source": "data/a.csv", "alias_file": "a.json"},
                           {"id": "b", "source": "http://x.cz/b.csv"}]}"#,
        )
        .unwrap();
        let m = Manifest::load(&file).unwrap();
        assert_eq!(
            Path::new(&m.entries[0].source),
            dir.path().join("data/a.csv")
        );
        assert_eq!(
            m.entries[0].alias_file.as_deref(),
            Some(dir.path().join("a.json").as_path())
        );
        assert_eq!(m.entries[1].source, "http://x.cz/b.csv");
    }
}
