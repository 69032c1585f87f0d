use std::sync::LazyLock;

use regex::bytes::Regex;

use super::{FileFormat, SNIFF_LEN};

static GEOJSON_COLLECTION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#""type"\s*:\s*"FeatureCollection""#).unwrap());
static JSONLD_CONTEXT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r#""@context"\s*:"#).unwrap());

/// Picks the format of a distribution.
///
/// Precedence: content sniffing for GeoJSON and JSON-LD, then the declared
/// media type, then the filename extension, then a last generic sniff for
/// plain JSON and XML. Anything else is `Unknown`.
pub fn detect_format(
    filename: &str,
    declared_media_type: Option<&str>,
    content_head: &[u8],
) -> FileFormat {
    let head = &content_head[..content_head.len().min(SNIFF_LEN)];
    let body = trim_head(head);
    let json_like = matches!(body.first(), Some(b'{') | Some(b'['));

    if json_like {
        if GEOJSON_COLLECTION.is_match(body) {
            return FileFormat::GeoJson;
        }
        if JSONLD_CONTEXT.is_match(body) {
            return FileFormat::JsonLd;
        }
    }
    if let Some(f) = declared_media_type.and_then(from_media_type) {
        return f;
    }
    if let Some(f) = from_extension(filename) {
        return f;
    }
    if json_like {
        return FileFormat::Json;
    }
    if body.starts_with(b"<?xml") {
        return FileFormat::Xml;
    }
    FileFormat::Unknown
}

fn trim_head(head: &[u8]) -> &[u8] {
    let head = head.strip_prefix(b"\xef\xbb\xbf").unwrap_or(head);
    let start = head
        .iter()
        .position(|b| !b.is_ascii_whitespace())
        .unwrap_or(head.len());
    &head[start..]
}

fn from_media_type(media_type: &str) -> Option<FileFormat> {
    let essence = media_type
        .split(';')
        .next()
        .unwrap_or_default()
        .trim()
        .to_ascii_lowercase();
    let format = match essence.as_str() {
        "application/json" | "text/json" => FileFormat::Json,
        "application/ld+json" => FileFormat::JsonLd,
        "application/geo+json" | "application/vnd.geo+json" => FileFormat::GeoJson,
        "application/xml" | "text/xml" => FileFormat::Xml,
        "application/gml+xml" => FileFormat::Gml,
        "application/vnd.google-earth.kml+xml" => FileFormat::Kml,
        "application/rdf+xml"
        | "text/turtle"
        | "application/n-triples"
        | "application/n-quads"
        | "application/trig" => FileFormat::Rdf,
        "text/csv" => FileFormat::Csv,
        "application/vnd.ms-excel" => FileFormat::Xls,
        "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet" => FileFormat::Xlsx,
        "application/pdf" => FileFormat::Pdf,
        "text/plain" => FileFormat::Txt,
        _ => return None,
    };
    Some(format)
}

fn from_extension(filename: &str) -> Option<FileFormat> {
    // URLs: drop query/fragment and take the last path segment
    let name = filename.split(['?', '#']).next().unwrap_or_default();
    let name = name.rsplit(['/', '\\']).next().unwrap_or_default();
    let (_, ext) = name.rsplit_once('.')?;
    let format = match ext.to_ascii_lowercase().as_str() {
        "json" => FileFormat::Json,
        "jsonld" => FileFormat::JsonLd,
        "geojson" => FileFormat::GeoJson,
        "xml" => FileFormat::Xml,
        "gml" => FileFormat::Gml,
        "kml" => FileFormat::Kml,
        "rdf" | "ttl" | "nt" | "nq" | "trig" | "owl" => FileFormat::Rdf,
        "csv" => FileFormat::Csv,
        "xls" => FileFormat::Xls,
        "xlsx" => FileFormat::Xlsx,
        "pdf" => FileFormat::Pdf,
        "txt" => FileFormat::Txt,
        _ => return None,
    };
    Some(format)
}
