//! JSON and CSV interchange.
//!
//! Spaces: `{"labels": [...], "metric": "matrix" | "euclidean", "matrix": [[...]], "coords": [[...]]}`
//! with exactly one of `matrix` / `coords`. Covers: `{"sets": {"<alpha>": [points]}}`, optionally
//! with a `"provenance"` object. Infinite values are written as the string `"inf"`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::metric::{Cover, MetricSpace};
use crate::partition::PartitionOfUnity;

/// Serializes a float, writing infinities as `"inf"` / `"-inf"`.
pub fn ser_ext<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

/// [`ser_ext`] over a slice.
pub fn ser_ext_vec<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Ext(*x))?;
    }
    seq.end()
}

struct Ext(f64);

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_ext(&self.0, s)
    }
}

/// JSON value for a float that may be infinite.
pub fn ext_value(v: f64) -> Value {
    serde_json::to_value(Ext(v)).unwrap_or(Value::Null)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Schema {
        path: "$".into(),
        message: e.to_string(),
    })?;
    s.push('\n');
    Ok(s)
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Schema {
        path: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<Vec<f64>>>,
}

/// Parses and validates a space.
pub fn parse_space(text: &str) -> Result<MetricSpace> {
    let file: SpaceFile = serde_json::from_str(text).map_err(syntax)?;
    match (file.metric.as_str(), file.matrix, file.coords) {
        (_, Some(_), Some(_)) => Err(schema("$", "exactly one of \"matrix\" and \"coords\" is allowed")),
        ("matrix", Some(m), None) => MetricSpace::from_matrix(m, file.labels, None),
        ("matrix", None, _) => Err(schema("matrix", "required when metric is \"matrix\"")),
        ("euclidean", None, Some(c)) => MetricSpace::euclidean(c, file.labels),
        ("euclidean", _, None) => Err(schema("coords", "required when metric is \"euclidean\"")),
        (other, _, _) => Err(schema(
            "metric",
            format!("expected \"matrix\" or \"euclidean\", got {other:?}"),
        )),
    }
}

/// Writes a space; Euclidean spaces keep their coordinates.
pub fn space_to_json(space: &MetricSpace) -> Result<String> {
    let file = match space.coords() {
        Some(c) => SpaceFile {
            labels: Some(space.labels().to_vec()),
            metric: "euclidean".into(),
            matrix: None,
            coords: Some(c.to_vec()),
        },
        None => SpaceFile {
            labels: Some(space.labels().to_vec()),
            metric: "matrix".into(),
            matrix: Some(space.matrix()),
            coords: None,
        },
    };
    to_json(&file)
}

/// A cover as read from disk together with its optional provenance block.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverFile {
    pub cover: Cover,
    pub provenance: Option<Value>,
}

/// Parses a cover of a space with `n_points` points.
pub fn parse_cover(text: &str, n_points: usize) -> Result<CoverFile> {
    let root: Value = serde_json::from_str(text).map_err(syntax)?;
    let obj = root.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    if let Some(key) = obj.keys().find(|k| *k != "sets" && *k != "provenance") {
        return Err(schema(key, "unknown field"));
    }
    let sets = obj
        .get("sets")
        .ok_or_else(|| schema("sets", "missing field"))?
        .as_object()
        .ok_or_else(|| schema("sets", "expected an object of index lists"))?;
    let mut members = Vec::with_capacity(sets.len());
    for (alpha, list) in sets {
        let path = format!("sets.{alpha}");
        let list = list
            .as_array()
            .ok_or_else(|| schema(&path, "expected an array of point indices"))?;
        let mut points = Vec::with_capacity(list.len());
        for (i, v) in list.iter().enumerate() {
            let p = v
                .as_u64()
                .ok_or_else(|| schema(&format!("{path}[{i}]"), "expected a nonnegative integer"))?;
            points.push(p as usize);
        }
        members.push((alpha.clone(), points));
    }
    Ok(CoverFile {
        cover: Cover::with_points(n_points, members)?,
        provenance: obj.get("provenance").cloned(),
    })
}

/// Writes a cover in canonical index order.
pub fn cover_to_json(cover: &Cover, provenance: Option<&Value>) -> Result<String> {
    to_json(&cover_value(cover, provenance))
}

/// The JSON object written by [`cover_to_json`].
pub fn cover_value(cover: &Cover, provenance: Option<&Value>) -> Value {
    let mut sets = Map::new();
    for (alpha, set) in cover.members() {
        sets.insert(alpha.to_string(), Value::from(set.to_vec()));
    }
    let mut root = Map::new();
    root.insert("sets".into(), Value::Object(sets));
    if let Some(p) = provenance {
        root.insert("provenance".into(), p.clone());
    }
    Value::Object(root)
}

/// Partition matrix as CSV: one row per point, one column per member, values
/// with 17 significant digits.
pub fn partition_to_csv(pou: &PartitionOfUnity, space: &MetricSpace) -> String {
    let mut out = String::from("point");
    for l in pou.labels() {
        out.push(',');
        out.push_str(&csv_field(l));
    }
    out.push('\n');
    for (x, row) in pou.rows().enumerate() {
        out.push_str(&csv_field(&space.labels()[x]));
        for v in row {
            let _ = write!(out, ",{v:.16e}");
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Reads the value matrix back from [`partition_to_csv`] output (unquoted
/// labels only).
pub fn parse_partition_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| schema("line 1", "empty file"))?;
    let labels: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let path = format!("line {}", i + 2);
        let row = line
            .split(',')
            .skip(1)
            .map(|f| f.parse::<f64>().map_err(|e| schema(&path, e.to_string())))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != labels.len() {
            return Err(schema(&path, format!("expected {} values, got {}", labels.len(), row.len())));
        }
        rows.push(row);
    }
    Ok((labels, rows))
}
