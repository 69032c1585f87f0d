use serde_json::{Map, Value as Json};

use super::{
    add_field, Dataset, DatasetBuilder, FileFormat, IngestError, ParseOptions, Record, Value,
    JOIN_SEPARATOR,
};
use crate::standard::FeaturePath;

pub(super) fn parse(
    format: FileFormat,
    text: &str,
    options: &ParseOptions,
) -> Result<Dataset, IngestError> {
    let document = load(text)?;
    let root = select(&document, &options.root_segments())?;
    let mut builder = DatasetBuilder::default();
    for item in records(root) {
        let mut record = Record::new();
        match item {
            Json::Object(object) => flatten_object(&mut record, None, object),
            other => flatten(&mut record, fallback_path(None), other),
        }
        builder.push(record);
    }
    Ok(builder.finish(format))
}

/// Records are the `features` of a feature collection; only each feature's
/// `properties` and `geometry` members are kept, under those prefixes.
pub(super) fn parse_geojson(text: &str, options: &ParseOptions) -> Result<Dataset, IngestError> {
    let document = load(text)?;
    let segments = options.root_segments();
    let segments = if segments.is_empty() {
        vec!["features"]
    } else {
        segments
    };
    let root = select(&document, &segments)?;
    let mut builder = DatasetBuilder::default();
    for feature in records(root) {
        let mut record = Record::new();
        let Json::Object(feature) = feature else {
            return Err(IngestError::Parse(
                "GeoJSON feature is not an object".into(),
            ));
        };
        for member in ["properties", "geometry"] {
            if let Some(Json::Object(object)) = feature.get(member) {
                let prefix = FeaturePath::parse(member).expect("static path");
                if object.is_empty() {
                    add_field(&mut record, prefix, Value::Null);
                } else {
                    flatten_object(&mut record, Some(&prefix), object);
                }
            }
        }
        builder.push(record);
    }
    Ok(builder.finish(FileFormat::GeoJson))
}

fn load(text: &str) -> Result<Json, IngestError> {
    serde_json::from_str(text).map_err(|e| IngestError::Parse(e.to_string()))
}

fn select<'a>(document: &'a Json, segments: &[&str]) -> Result<&'a Json, IngestError> {
    let mut node = document;
    for segment in segments {
        node = node.get(segment).ok_or_else(|| {
            IngestError::Parse(format!("record root member {segment:?} not found"))
        })?;
    }
    Ok(node)
}

/// An array yields its elements; a lone object is a single record.
fn records(root: &Json) -> Box<dyn Iterator<Item = &Json> + '_> {
    match root {
        Json::Array(items) => Box::new(items.iter()),
        Json::Null => Box::new(std::iter::empty()),
        other => Box::new(std::iter::once(other)),
    }
}

fn child_path(prefix: Option<&FeaturePath>, key: &str) -> FeaturePath {
    let tail =
        FeaturePath::lenient(key).unwrap_or_else(|| FeaturePath::parse("_").expect("static path"));
    match prefix {
        Some(p) => p.join(&tail),
        None => tail,
    }
}

fn fallback_path(prefix: Option<&FeaturePath>) -> FeaturePath {
    prefix
        .cloned()
        .unwrap_or_else(|| FeaturePath::parse("value").expect("static path"))
}

fn flatten_object(record: &mut Record, prefix: Option<&FeaturePath>, object: &Map<String, Json>) {
    for (key, value) in object {
        flatten(record, child_path(prefix, key), value);
    }
}

fn flatten(record: &mut Record, path: FeaturePath, value: &Json) {
    match value {
        Json::Object(object) if object.is_empty() => add_field(record, path, Value::Null),
        Json::Object(object) => flatten_object(record, Some(&path), object),
        Json::Array(items) => {
            let mut scalars = Vec::new();
            let mut objects = Vec::new();
            collect_array(items, &mut scalars, &mut objects);
            if !scalars.is_empty() || objects.is_empty() {
                let value = if scalars.is_empty() {
                    Value::Null
                } else {
                    Value::Text(scalars.join(JOIN_SEPARATOR))
                };
                add_field(record, path.clone(), value);
            }
            for object in objects {
                flatten_object(record, Some(&path), object);
            }
        }
        scalar => add_field(record, path, scalar_value(scalar)),
    }
}

/// Splits a (possibly nested) array into rendered scalars and objects.
fn collect_array<'a>(
    items: &'a [Json],
    scalars: &mut Vec<String>,
    objects: &mut Vec<&'a Map<String, Json>>,
) {
    for item in items {
        match item {
            Json::Array(inner) => collect_array(inner, scalars, objects),
            Json::Object(object) if object.is_empty() => {}
            Json::Object(object) => objects.push(object),
            scalar => {
                if let Some(text) = scalar_value(scalar).render() {
                    scalars.push(text);
                }
            }
        }
    }
}

fn scalar_value(value: &Json) -> Value {
    match value {
        Json::Null => Value::Null,
        Json::Bool(b) => Value::Bool(*b),
        Json::Number(n) => match n.as_i64() {
            Some(i) => Value::Integer(i),
            None => Value::Float(n.as_f64().unwrap_or(f64::NAN)),
        },
        Json::String(s) => Value::Text(s.clone()),
        Json::Array(_) | Json::Object(_) => unreachable!("composite handled by flatten"),
    }
}
