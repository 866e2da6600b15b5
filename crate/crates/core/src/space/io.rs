//! Parsing and serialization of space documents.
//!
//! Three interchange formats:
//! * distance matrix CSV — header row of labels, cells `p/q`, integers, or
//!   `inf`;
//! * edge list text — one `u v` edge per line, `#` comments allowed;
//! * JSON space document — `{labels, dist, directed}` with distances as
//!   strings (`"inf"` for infinity) or plain integers.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use super::{rational_string, ExtDist, QuasiMetricSpace, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}, cell {cell}: {msg}")]
    Csv {
        line: usize,
        cell: usize,
        msg: String,
    },
    #[error("line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Parses a distance cell: `p/q`, an integer, or `inf`.
pub fn parse_ext_dist(s: &str) -> Result<ExtDist, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") || s == "∞" {
        return Ok(ExtDist::Infinity);
    }
    if let Some((num, den)) = s.split_once('/') {
        let p = BigInt::from_str(num.trim()).map_err(|_| format!("bad numerator '{}'", num))?;
        let q = BigInt::from_str(den.trim()).map_err(|_| format!("bad denominator '{}'", den))?;
        if q == BigInt::from(0) {
            return Err("zero denominator".into());
        }
        return Ok(ExtDist::Finite(BigRational::new(p, q)));
    }
    let p = BigInt::from_str(s).map_err(|_| format!("bad rational '{}'", s))?;
    Ok(ExtDist::Finite(BigRational::from_integer(p)))
}

/// Parses a distance matrix CSV with a header row of labels.
pub fn parse_distance_csv(text: &str) -> Result<QuasiMetricSpace, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(IoError::Csv {
        line: 1,
        cell: 1,
        msg: "empty file".into(),
    })?;
    let labels: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let n = labels.len();
    let mut matrix = Vec::with_capacity(n);
    for (lineno, line) in lines {
        let mut row = Vec::with_capacity(n);
        for (cellno, cell) in line.split(',').enumerate() {
            let d = parse_ext_dist(cell).map_err(|msg| IoError::Csv {
                line: lineno + 1,
                cell: cellno + 1,
                msg,
            })?;
            row.push(d);
        }
        if row.len() != n {
            return Err(IoError::Csv {
                line: lineno + 1,
                cell: row.len(),
                msg: format!("expected {} cells, found {}", n, row.len()),
            });
        }
        matrix.push(row);
    }
    if matrix.len() != n {
        return Err(IoError::Csv {
            line: matrix.len() + 1,
            cell: 1,
            msg: format!("expected {} data rows, found {}", n, matrix.len()),
        });
    }
    Ok(QuasiMetricSpace::from_distance_matrix(
        matrix,
        Some(labels),
    )?)
}

pub fn to_distance_csv(space: &QuasiMetricSpace) -> String {
    let mut out = space.labels().join(",");
    out.push('\n');
    let n = space.point_count();
    for x in 0..n {
        let row: Vec<String> = (0..n).map(|y| space.dist(x, y).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parses an edge list: one `u v` pair per line; `#` starts a comment.
pub fn parse_edge_list(text: &str, directed: bool) -> Result<QuasiMetricSpace, IoError> {
    let mut edges = Vec::new();
    let mut max_vertex = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize, IoError> {
            let tok = tok.ok_or(IoError::EdgeList {
                line: lineno + 1,
                msg: "expected 'u v'".into(),
            })?;
            tok.parse().map_err(|_| IoError::EdgeList {
                line: lineno + 1,
                msg: format!("bad vertex '{}'", tok),
            })
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        if it.next().is_some() {
            return Err(IoError::EdgeList {
                line: lineno + 1,
                msg: "trailing tokens after edge".into(),
            });
        }
        max_vertex = max_vertex.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(IoError::EdgeList {
            line: 1,
            msg: "no edges found".into(),
        });
    }
    Ok(QuasiMetricSpace::from_graph(
        max_vertex + 1,
        &edges,
        directed,
    )?)
}

/// Parses the JSON space document `{labels, dist, directed?}`.
pub fn parse_space_json(text: &str) -> Result<QuasiMetricSpace, IoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| IoError::Json("expected a JSON object".into()))?;
    let labels: Option<Vec<String>> = match obj.get("labels") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => Some(
            items
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    other => Ok(other.to_string()),
                })
                .collect::<Result<_, IoError>>()?,
        ),
        Some(_) => return Err(IoError::Json("'labels' must be an array".into())),
    };
    let dist = obj
        .get("dist")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Json("'dist' must be an array of arrays".into()))?;
    let mut matrix = Vec::with_capacity(dist.len());
    for (r, row) in dist.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| IoError::Json(format!("'dist' row {} is not an array", r)))?;
        let mut cells = Vec::with_capacity(row.len());
        for (c, cell) in row.iter().enumerate() {
            let d = match cell {
                Value::String(s) => parse_ext_dist(s),
                Value::Number(n) => parse_ext_dist(&n.to_string()),
                other => Err(format!("unsupported cell value {}", other)),
            }
            .map_err(|msg| IoError::Json(format!("dist[{}][{}]: {}", r, c, msg)))?;
            cells.push(d);
        }
        matrix.push(cells);
    }
    Ok(QuasiMetricSpace::from_distance_matrix(matrix, labels)?)
}

/// Serializes a space to the JSON document format. Finite distances are
/// rendered as `p/q` strings (integers without the `/q`).
pub fn space_to_json(space: &QuasiMetricSpace, directed: bool) -> Value {
    let n = space.point_count();
    let dist: Vec<Vec<Value>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| match space.dist(x, y) {
                    ExtDist::Infinity => Value::String("inf".into()),
                    ExtDist::Finite(v) => Value::String(rational_string(v)),
                })
                .collect()
        })
        .collect();
    json!({
        "labels": space.labels(),
        "dist": dist,
        "directed": directed,
    })
}
