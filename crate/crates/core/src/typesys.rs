//! Value type inference and per-feature type profiles.
//!
//! Ten types are recognised: the five primary ones (integer, float, bool,
//! string, null) and five semantic ones recognised in text (URL, e-mail,
//! address, point, phone number). Text is always examined lexically, so
//! `"42"` is an integer no matter which format it came from.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{FeatureColumn, Value};
use crate::standard::FeaturePath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DataType {
    Integer,
    Float,
    Bool,
    String,
    Null,
    Url,
    Email,
    Address,
    Point,
    PhoneNumber,
}

impl DataType {
    pub const ALL: [DataType; 10] = [
        DataType::Integer,
        DataType::Float,
        DataType::Bool,
        DataType::String,
        DataType::Null,
        DataType::Url,
        DataType::Email,
        DataType::Address,
        DataType::Point,
        DataType::PhoneNumber,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DataType::Integer => "Integer",
            DataType::Float => "Float",
            DataType::Bool => "Bool",
            DataType::String => "String",
            DataType::Null => "Null",
            DataType::Url => "Url",
            DataType::Email => "Email",
            DataType::Address => "Address",
            DataType::Point => "Point",
            DataType::PhoneNumber => "PhoneNumber",
        }
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DataType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DataType::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown data type {s:?}"))
    }
}

// All patterns are anchored over the whole trimmed value.

pub const URL_PATTERN: &str = r"^(?i:https?|ftp)://(?:[^\s/?#@]+@)?(?:[\p{L}\p{N}](?:[\p{L}\p{N}-]*[\p{L}\p{N}])?(?:\.[\p{L}\p{N}](?:[\p{L}\p{N}-]*[\p{L}\p{N}])?)*|\[[0-9A-Fa-f:.]+\])(?::\d{1,5})?(?:[/?#]\S*)?$";
pub const EMAIL_PATTERN: &str = r"^[^\s@]+@[^\s@.]+(?:\.[^\s@.]+)+$";
pub const POINT_PATTERN: &str = r"^POINT\s*\(\s*-?\d+(\.\d+)?\s+-?\d+(\.\d+)?\s*\)$";
pub const PHONE_PATTERN: &str = r"^(?:(\+420\s?)?\d{3}\s?\d{3}\s?\d{3}|\+\d{1,3}\s?\d{6,12})$";
pub const ADDRESS_PATTERN: &str = r"^[A-Za-zÀ-ž][A-Za-zÀ-ž .'-]*\s\d+([/]\d+)?[a-z]?$";
const INTEGER_PATTERN: &str = r"^[+-]?\d+$";
const FLOAT_PATTERN: &str =
    r"^[+-]?(?:\d+\.\d*|\.\d+|\d+(?:\.\d*)?[eE][+-]?\d+|\.\d+[eE][+-]?\d+)$";

fn compile(pattern: &str) -> Regex {
    Regex::new(pattern).expect("type pattern compiles")
}

static URL: LazyLock<Regex> = LazyLock::new(|| compile(URL_PATTERN));
static EMAIL: LazyLock<Regex> = LazyLock::new(|| compile(EMAIL_PATTERN));
static POINT: LazyLock<Regex> = LazyLock::new(|| compile(POINT_PATTERN));
static PHONE: LazyLock<Regex> = LazyLock::new(|| compile(PHONE_PATTERN));
static ADDRESS: LazyLock<Regex> = LazyLock::new(|| compile(ADDRESS_PATTERN));
static INTEGER: LazyLock<Regex> = LazyLock::new(|| compile(INTEGER_PATTERN));
static FLOAT: LazyLock<Regex> = LazyLock::new(|| compile(FLOAT_PATTERN));

/// Text rules in precedence order; the first match wins.
static TEXT_RULES: LazyLock<[(&'static Regex, DataType); 7]> = LazyLock::new(|| {
    [
        (&*URL, DataType::Url),
        (&*EMAIL, DataType::Email),
        (&*POINT, DataType::Point),
        (&*PHONE, DataType::PhoneNumber),
        (&*ADDRESS, DataType::Address),
        (&*INTEGER, DataType::Integer),
        (&*FLOAT, DataType::Float),
    ]
});

pub fn infer_type(value: &Value) -> DataType {
    match value {
        Value::Null => DataType::Null,
        Value::Bool(_) => DataType::Bool,
        Value::Integer(_) => DataType::Integer,
        Value::Float(_) => DataType::Float,
        Value::Text(text) => infer_text(text),
    }
}

fn infer_text(text: &str) -> DataType {
    let text = text.trim();
    if text.is_empty() {
        return DataType::Null;
    }
    if let Some((_, ty)) = TEXT_RULES.iter().find(|(re, _)| re.is_match(text)) {
        return *ty;
    }
    if text.eq_ignore_ascii_case("true") || text.eq_ignore_ascii_case("false") {
        return DataType::Bool;
    }
    DataType::String
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("column {0} has no values")]
    EmptyColumn(FeaturePath),
}

/// Types and null count observed in one feature column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeProfile {
    pub path: FeaturePath,
    pub distinct_types: BTreeSet<DataType>,
    pub null_count: usize,
    pub value_count: usize,
}

impl TypeProfile {
    /// Number of distinct types, never zero.
    pub fn type_count(&self) -> usize {
        self.distinct_types.len()
    }

    pub fn non_null_count(&self) -> usize {
        self.value_count - self.null_count
    }
}

pub fn profile_column(column: &FeatureColumn) -> Result<TypeProfile, ProfileError> {
    if column.values.is_empty() {
        return Err(ProfileError::EmptyColumn(column.path.clone()));
    }
    let mut distinct_types = BTreeSet::new();
    let mut null_count = 0;
    for value in &column.values {
        let ty = infer_type(value);
        if ty == DataType::Null {
            null_count += 1;
        }
        distinct_types.insert(ty);
    }
    Ok(TypeProfile {
        path: column.path.clone(),
        distinct_types,
        null_count,
        value_count: column.values.len(),
    })
}

/// One line of a type-vector file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeVector {
    pub line: usize,
    pub input: String,
    pub expected: DataType,
}

/// Parses a type-vector file: one `input<TAB>type` pair per line, `#`
/// starts a comment line. The input column understands `\t`, `\n`, `\s`
/// (space) and `\\` escapes.
pub fn parse_type_vectors(text: &str) -> Result<Vec<TypeVector>, String> {
    let mut vectors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let (input, expected) = line
            .rsplit_once('\t')
            .ok_or_else(|| format!("line {line_no}: missing tab separator"))?;
        let expected = expected
            .parse()
            .map_err(|e| format!("line {line_no}: {e}"))?;
        vectors.push(TypeVector {
            line: line_no,
            input: unescape(input).map_err(|e| format!("line {line_no}: {e}"))?,
            expected,
        });
    }
    Ok(vectors)
}

fn unescape(raw: &str) -> Result<String, String> {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('s') => out.push(' '),
            Some('\\') => out.push('\\'),
            other => {
                return Err(format!(
                    "bad escape \\{}",
                    other.map(String::from).unwrap_or_default()
                ))
            }
        }
    }
    Ok(out)
}
