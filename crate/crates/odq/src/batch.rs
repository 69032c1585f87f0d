use odq_core::{
    assess, detect_format, parse_dataset, AliasMap, FileFormat, ParseOptions, StandardSpec,
};
use rayon::prelude::*;

use crate::fetch::Fetcher;
use crate::manifest::{Manifest, ManifestEntry};
use crate::report::{BatchReport, EntryDoc, ToolInfo};
use crate::AppError;

/// Run-wide settings; manifest entries override the per-dataset defaults.
#[derive(Debug, Clone)]
pub struct BatchOptions {
    pub default_alias: AliasMap,
    pub csv_delimiter: Option<u8>,
    pub jobs: usize,
    pub fetcher: Fetcher,
}

impl Default for BatchOptions {
    fn default() -> Self {
        Self {
            default_alias: AliasMap::default(),
            csv_delimiter: None,
            jobs: 1,
            fetcher: Fetcher::default(),
        }
    }
}

pub fn load_alias(path: &std::path::Path) -> Result<AliasMap, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Alias(format!("{}: {e}", path.display())))?;
    AliasMap::from_json(&text).map_err(|e| AppError::Alias(format!("{}: {e}", path.display())))
}

/// Assesses every entry; failures are recorded per entry and never stop
/// the batch.
pub fn run_batch(manifest: &Manifest, spec: &StandardSpec, options: &BatchOptions) -> BatchReport {
    let run = || -> Vec<EntryDoc> {
        manifest
            .entries
            .par_iter()
            .map(|entry| assess_entry(entry, spec, options))
            .collect()
    };
    let entries = match rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(run),
        Err(_) => manifest
            .entries
            .iter()
            .map(|e| assess_entry(e, spec, options))
            .collect(),
    };
    BatchReport {
        tool: ToolInfo::default(),
        generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        standard_iri: spec.standard_iri().to_owned(),
        entries,
    }
}

pub fn assess_entry(
    entry: &ManifestEntry,
    spec: &StandardSpec,
    options: &BatchOptions,
) -> EntryDoc {
    let mut format = None;
    match try_assess(entry, spec, options, &mut format) {
        Ok(doc) => doc,
        Err(e) => EntryDoc::Failed {
            id: entry.id.clone(),
            source: entry.source.clone(),
            format,
            error: e.to_string(),
        },
    }
}

fn try_assess(
    entry: &ManifestEntry,
    spec: &StandardSpec,
    options: &BatchOptions,
    format_out: &mut Option<FileFormat>,
) -> Result<EntryDoc, AppError> {
    let alias = match &entry.alias_file {
        Some(path) => load_alias(path)?,
        None => options.default_alias.clone(),
    };
    let fetched = options.fetcher.fetch(&entry.source)?;
    let format = entry.format_hint.unwrap_or_else(|| {
        detect_format(&fetched.name, fetched.media_type.as_deref(), &fetched.bytes)
    });
    *format_out = Some(format);

    let parse_options = ParseOptions {
        record_root: entry.record_root.clone(),
        csv_delimiter: options.csv_delimiter,
    };
    let dataset = parse_dataset(format, &fetched.bytes, &parse_options)?;
    let report = assess(entry.id.clone(), &dataset, spec, &alias)?;
    Ok(EntryDoc::assessed(entry.source.clone(), &report))
}
