//! `odq assess` command line.
//!
//! Exit status: 0 when every dataset was assessed, 2 when at least one
//! entry failed to fetch or parse, 1 on usage, standard or output errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use odq_core::{FileFormat, StandardSpec};

use crate::batch::{load_alias, run_batch, BatchOptions};
use crate::fetch::Fetcher;
use crate::manifest::{Manifest, ManifestEntry};
use crate::report::{BatchReport, ReportFormat};
use crate::AppError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ENTRY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "odq",
    version,
    about = "Quality assessment of open datasets against a feature standard"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assess one dataset or every entry of a manifest.
    Assess(AssessArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["dataset", "manifest"])))]
pub struct AssessArgs {
    /// Standard file (JSON with `standard_iri` and `features`).
    #[arg(long)]
    pub standard: PathBuf,
    /// A single dataset: local path or http(s) URL.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Manifest file listing several datasets.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Alias map applied to entries that do not name their own.
    #[arg(long)]
    pub alias: Option<PathBuf>,
    /// Skip format detection (JSON, JSON_LD, GEOJSON, XML, GML, KML, CSV, XLSX, ...).
    #[arg(long, value_parser = parse_format)]
    pub format_hint: Option<FileFormat>,
    /// `/`-separated path from the document root to the records.
    #[arg(long)]
    pub record_root: Option<String>,
    /// Report format; may be repeated.
    #[arg(long = "report", default_value = "json")]
    pub reports: Vec<ReportFormat>,
    /// Directory for report files; reports go to stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cache for downloaded distributions.
    #[arg(long, env = "ODQ_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, value_parser = parse_delimiter)]
    pub csv_delimiter: Option<u8>,
    /// Number of datasets processed concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

fn parse_format(s: &str) -> Result<FileFormat, String> {
    s.parse().map_err(|e: odq_core::IngestError| e.to_string())
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    let unescaped = if s == "\\t" { "\t" } else { s };
    match unescaped.as_bytes() {
        [b] => Ok(*b),
        _ => Err(format!(
            "delimiter must be a single ASCII character, got {s:?}"
        )),
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Assess(args) => match run_assess(&args) {
            Ok(batch) => {
                for entry in &batch.entries {
                    if let crate::EntryDoc::Failed { id, error, .. } = entry {
                        eprintln!("odq: {id}: {error}");
                    }
                }
                if batch.failure_count() == 0 {
                    EXIT_OK
                } else {
                    EXIT_ENTRY_FAILED
                }
            }
            Err(e) => {
                eprintln!("odq: {e}");
                EXIT_USAGE
            }
        },
    }
}

fn dataset_id(source: &str) -> String {
    let trimmed = source.split(['?', '#']).next().unwrap_or(source);
    let name = trimmed
        .trim_end_matches('/')
        .rsplit(['/', '\\'])
        .next()
        .unwrap_or(trimmed);
    if name.is_empty() {
        source.to_owned()
    } else {
        name.to_owned()
    }
}

/// Runs the assessment and writes the requested reports.
pub fn run_assess(args: &AssessArgs) -> Result<BatchReport, AppError> {
    let standard_text = std::fs::read_to_string(&args.standard)
        .map_err(|e| AppError::Standard(format!("{}: {e}", args.standard.display())))?;
    let spec = StandardSpec::from_json(&standard_text)
        .map_err(|e| AppError::Standard(format!("{}: {e}", args.standard.display())))?;

    let mut manifest = match (&args.dataset, &args.manifest) {
        (Some(source), None) => Manifest::new(vec![ManifestEntry {
            id: dataset_id(source),
            source: source.clone(),
            format_hint: None,
            record_root: None,
            alias_file: None,
        }])?,
        (None, Some(path)) => Manifest::load(path)?,
        _ => {
            return Err(AppError::Usage(
                "give exactly one of --dataset or --manifest".into(),
            ))
        }
    };
    for entry in &mut manifest.entries {
        entry.format_hint = entry.format_hint.or(args.format_hint);
        if entry.record_root.is_none() {
            entry.record_root = args.record_root.clone();
        }
    }

    let options = BatchOptions {
        default_alias: match &args.alias {
            Some(path) => load_alias(path)?,
            None => Default::default(),
        },
        csv_delimiter: args.csv_delimiter,
        jobs: args.jobs,
        fetcher: Fetcher::with_cache(args.cache_dir.clone()),
    };
    let batch = run_batch(&manifest, &spec, &options);
    write_reports(&batch, &args.reports, args.out.as_deref())?;
    Ok(batch)
}

fn write_reports(
    batch: &BatchReport,
    formats: &[ReportFormat],
    out: Option<&Path>,
) -> Result<(), AppError> {
    let mut formats = formats.to_vec();
    formats.sort();
    formats.dedup();
    let io = |e: std::io::Error| AppError::Report(e.to_string());
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            for format in formats {
                std::fs::write(dir.join(format.file_name()), batch.emit(format)).map_err(io)?;
            }
        }
        None => {
            for format in formats {
                print!("{}", batch.emit(format));
            }
        }
    }
    Ok(())
}
