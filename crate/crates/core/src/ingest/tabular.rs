//! Row-per-record formats: CSV and the first worksheet of an XLSX workbook.

use std::io::Cursor;

use calamine::{open_workbook_from_rs, Data, Reader, Xlsx};

use super::{
    add_field, Dataset, DatasetBuilder, FileFormat, IngestError, ParseOptions, Record, Value,
};
use crate::standard::FeaturePath;

fn header_paths<'a>(names: impl Iterator<Item = &'a str>) -> Vec<FeaturePath> {
    names
        .enumerate()
        .map(|(i, name)| {
            FeaturePath::lenient(name.trim()).unwrap_or_else(|| {
                FeaturePath::parse(&format!("column{}", i + 1)).expect("valid path")
            })
        })
        .collect()
}

fn extra_column(index: usize) -> FeaturePath {
    FeaturePath::parse(&format!("column{}", index + 1)).expect("valid path")
}

pub(super) fn parse_csv(text: &str, options: &ParseOptions) -> Result<Dataset, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.csv_delimiter.unwrap_or(b','))
        .quote(b'"')
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| IngestError::Parse(e.to_string()))?
        .clone();
    let paths = header_paths(headers.iter());

    let mut builder = DatasetBuilder::default();
    // header-only input still declares its columns
    let mut declared = Record::new();
    for path in &paths {
        declared.entry(path.clone()).or_default();
    }

    for row in reader.records() {
        let row = row.map_err(|e| IngestError::Parse(e.to_string()))?;
        let mut record = declared.clone();
        for (i, field) in row.iter().enumerate() {
            let path = paths.get(i).cloned().unwrap_or_else(|| extra_column(i));
            add_field(&mut record, path, Value::text(field));
        }
        builder.push(record);
    }
    Ok(finish_with_headers(builder, &paths, FileFormat::Csv))
}

/// Keeps header columns even when no data row follows.
fn finish_with_headers(
    builder: DatasetBuilder,
    paths: &[FeaturePath],
    format: FileFormat,
) -> Dataset {
    let mut builder = builder;
    for path in paths {
        builder.columns.entry(path.clone()).or_default();
    }
    builder.finish(format)
}

pub(super) fn parse_xlsx(content: &[u8]) -> Result<Dataset, IngestError> {
    let mut workbook: Xlsx<Cursor<&[u8]>> = open_workbook_from_rs(Cursor::new(content))
        .map_err(|e: calamine::XlsxError| IngestError::Parse(e.to_string()))?;
    let range = workbook
        .worksheet_range_at(0)
        .ok_or_else(|| IngestError::Parse("workbook has no worksheet".into()))?
        .map_err(|e| IngestError::Parse(e.to_string()))?;

    let mut rows = range.rows();
    let Some(header) = rows.next() else {
        return Ok(DatasetBuilder::default().finish(FileFormat::Xlsx));
    };
    let header_text: Vec<String> = header.iter().map(|c| c.to_string()).collect();
    let paths = header_paths(header_text.iter().map(String::as_str));

    let mut builder = DatasetBuilder::default();
    for row in rows {
        let mut record = Record::new();
        for (i, cell) in row.iter().enumerate() {
            let path = paths.get(i).cloned().unwrap_or_else(|| extra_column(i));
            add_field(&mut record, path, cell_value(cell));
        }
        builder.push(record);
    }
    Ok(finish_with_headers(builder, &paths, FileFormat::Xlsx))
}

/// Spreadsheets store every number as a float; integral ones come back as
/// integers so they match what a CSV or JSON export would carry.
fn cell_value(cell: &Data) -> Value {
    match cell {
        Data::Empty | Data::Error(_) => Value::Null,
        Data::Int(i) => Value::Integer(*i),
        Data::Float(f) if f.fract() == 0.0 && f.abs() < 9.0e15 => Value::Integer(*f as i64),
        Data::Float(f) => Value::Float(*f),
        Data::Bool(b) => Value::Bool(*b),
        Data::String(s) => Value::text(s.as_str()),
        other => Value::text(other.to_string()),
    }
}
