//! JSON documents: spaces in, reports out.
//!
//! Output is canonical: object keys sorted, no insignificant whitespace,
//! rationals as `"p"` or `"p/q"` strings, one trailing LF.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::rational::{format_rational, parse_rational};
use crate::Rational;

pub const FORMAT_VERSION: u64 = 1;

/// A labeled distance matrix as read from disk, before any metric checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDocument {
    pub labels: Vec<String>,
    pub distances: Vec<Vec<Rational>>,
}

pub fn rational_value(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn rationals_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

/// Accepts JSON integers and `"p"` / `"p/q"` strings.
pub fn parse_rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!(
            "expected an integer or a \"p/q\" string, found {other}"
        ))),
    }
}

/// Parses a comma-separated list of rationals such as `-2,1,1` or `1/2,-1/2`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    text.split(',').map(parse_rational).collect()
}

impl SpaceDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let root: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        let obj = root
            .as_object()
            .ok_or_else(|| Error::Parse("space document must be a JSON object".into()))?;
        match obj.get("version").and_then(Value::as_u64) {
            Some(FORMAT_VERSION) => {}
            Some(v) => return Err(Error::Parse(format!("unsupported format version {v}"))),
            None => return Err(Error::Parse("missing integer field \"version\"".into())),
        }
        let rows = obj
            .get("distances")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field \"distances\"".into()))?;
        let distances = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("each distance row must be an array".into()))?
                    .iter()
                    .map(parse_rational_value)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = distances.len();
        if n == 0 {
            return Err(Error::Parse("distance matrix is empty".into()));
        }
        if distances.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("distance matrix is not square".into()));
        }
        let labels = match obj.get("labels") {
            None => crate::metric::default_labels(n),
            Some(Value::Array(items)) => items
                .iter()
                .map(|l| {
                    l.as_str()
                        .map(str::to_owned)
                        .ok_or_else(|| Error::Parse("labels must be strings".into()))
                })
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Parse("\"labels\" must be an array".into())),
        };
        if labels.len() != n {
            return Err(Error::Parse(format!(
                "{} labels for {n} points",
                labels.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::Parse(format!("duplicate label {dup:?}")));
        }
        Ok(SpaceDocument { labels, distances })
    }

    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        SpaceDocument {
            labels: space.labels().to_vec(),
            distances: space.matrix().to_vec(),
        }
    }

    pub fn to_space(&self) -> Result<FiniteMetricSpace> {
        FiniteMetricSpace::new(self.labels.clone(), self.distances.clone())
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("version".into(), Value::from(FORMAT_VERSION));
        m.insert(
            "labels".into(),
            Value::Array(self.labels.iter().cloned().map(Value::String).collect()),
        );
        m.insert(
            "distances".into(),
            Value::Array(self.distances.iter().map(|r| rationals_value(r)).collect()),
        );
        Value::Object(m)
    }

    pub fn to_canonical(&self) -> String {
        canonical(&self.to_value())
    }

    /// Resolves a point given by label, or by index when no label matches.
    pub fn point(&self, token: &str) -> Result<usize> {
        let token = token.trim();
        if let Some(i) = self.labels.iter().position(|l| l == token) {
            return Ok(i);
        }
        match token.parse::<usize>() {
            Ok(i) if i < self.labels.len() => Ok(i),
            Ok(i) => Err(Error::PointIndex {
                index: i,
                len: self.labels.len(),
            }),
            Err(_) => Err(Error::Precondition(format!("unknown point {token:?}"))),
        }
    }
}

/// Compact JSON with sorted keys and a trailing LF.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
