//! The JSON model document.
//!
//! ```json
//! {"vertices": [{"id": "b", "color": "black", "pos": ["0", "1/2"]}],
//!  "edges": [{"id": "e1", "black": "b", "white": "w", "offset": [0, -1]}],
//!  "rotation": {"b": ["e1", "e2"]}}
//! ```
//!
//! Position coordinates are numbers or `"p/q"` strings; unknown fields are rejected.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::error::{Error, Result};
use crate::tiling::{Color, DimerModel, DimerVertex, EdgeSpec, Offset};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ColorDoc {
    Black,
    White,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Coord {
    Number(Number),
    Text(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: String,
    color: ColorDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pos: Option<[Coord; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    black: String,
    white: String,
    offset: [i64; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
    rotation: BTreeMap<String, Vec<String>>,
}

/// Exact value of a decimal literal such as `-0.125` or `3e-2`.
fn parse_decimal(s: &str) -> Option<Rational64> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let scale = frac.len() as i32 - exp;
    let mut n: i64 = format!("{int}{frac}").parse().ok()?;
    if neg {
        n = -n;
    }
    let ten = |k: i32| 10i64.checked_pow(k as u32);
    if scale >= 0 {
        Some(Rational64::new(n, ten(scale)?))
    } else {
        Some(Rational64::from(n.checked_mul(ten(-scale)?)?))
    }
}

fn coord_value(c: &Coord) -> Result<Rational64> {
    let bad = |s: &str| Error::Parse(format!("bad position coordinate `{s}`"));
    match c {
        Coord::Number(n) => {
            let s = n.to_string();
            parse_decimal(&s).ok_or_else(|| bad(&s))
        }
        Coord::Text(s) => {
            let t = s.trim();
            if t.contains('/') {
                let (p, q) = t.split_once('/').ok_or_else(|| bad(s))?;
                let p: i64 = p.trim().parse().map_err(|_| bad(s))?;
                let q: i64 = q.trim().parse().map_err(|_| bad(s))?;
                if q == 0 {
                    return Err(bad(s));
                }
                Ok(Rational64::new(p, q))
            } else {
                parse_decimal(t).ok_or_else(|| bad(s))
            }
        }
    }
}

/// Parses a rational written as an integer, a decimal or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    coord_value(&Coord::Text(s.to_string()))
}

/// Parses a JSON number or string into a rational.
pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational64> {
    match v {
        serde_json::Value::Number(n) => coord_value(&Coord::Number(n.clone())),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

/// `"p/q"`, or just `"p"` for integers.
pub fn rational_to_string(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_model(json: &str) -> Result<DimerModel> {
    let doc: ModelDoc = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for v in doc.vertices {
        let pos = match &v.pos {
            Some([x, y]) => Some((coord_value(x)?, coord_value(y)?)),
            None => None,
        };
        vertices.push(DimerVertex {
            id: v.id,
            color: match v.color {
                ColorDoc::Black => Color::Black,
                ColorDoc::White => Color::White,
            },
            pos,
        });
    }
    let edges = doc
        .edges
        .into_iter()
        .map(|e| EdgeSpec {
            id: e.id,
            black: e.black,
            white: e.white,
            offset: Offset::new(e.offset[0], e.offset[1]),
        })
        .collect();
    DimerModel::new(vertices, edges, &doc.rotation)
}

pub fn read_model(path: &std::path::Path) -> Result<DimerModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Argument(format!("cannot read `{}`: {e}", path.display())))?;
    parse_model(&text)
}

/// The model as a JSON document that [`parse_model`] reads back unchanged.
pub fn model_to_json(model: &DimerModel) -> String {
    let doc = ModelDoc {
        vertices: model
            .vertices()
            .iter()
            .map(|v| VertexDoc {
                id: v.id.clone(),
                color: match v.color {
                    Color::Black => ColorDoc::Black,
                    Color::White => ColorDoc::White,
                },
                pos: v.pos.map(|(x, y)| {
                    [
                        Coord::Text(rational_to_string(x)),
                        Coord::Text(rational_to_string(y)),
                    ]
                }),
            })
            .collect(),
        edges: model
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id.clone(),
                black: model.vertex_id(e.black).to_string(),
                white: model.vertex_id(e.white).to_string(),
                offset: [e.offset.dx, e.offset.dy],
            })
            .collect(),
        rotation: (0..model.num_vertices())
            .map(|v| {
                (
                    model.vertex_id(v).to_string(),
                    model.rotation(v).iter().map(|&e| model.edge_id(e).to_string()).collect(),
                )
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("model documents serialize")
}

impl FromStr for DimerModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_model(s)
    }
}
