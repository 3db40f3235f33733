//! Built-in models.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::tiling::{Color, DimerModel, DimerVertex, EdgeSpec, Offset, Position};

/// Names accepted by [`named`].
pub const NAMES: &[&str] = &["conifold", "honeycomb", "c3-z3", "conifold-z2", "degenerate"];

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn build(
    vertices: &[(&str, Color, Option<Position>)],
    edges: &[(&str, &str, &str, (i64, i64))],
    rotation: &[(&str, &[&str])],
) -> DimerModel {
    let vertices = vertices
        .iter()
        .map(|&(id, color, pos)| DimerVertex {
            id: id.to_string(),
            color,
            pos,
        })
        .collect();
    let edges = edges
        .iter()
        .map(|&(id, b, w, (dx, dy))| EdgeSpec {
            id: id.into(),
            black: b.into(),
            white: w.into(),
            offset: Offset::new(dx, dy),
        })
        .collect();
    let rotation = rotation
        .iter()
        .map(|(v, es)| (v.to_string(), es.iter().map(|s| s.to_string()).collect()))
        .collect();
    DimerModel::new(vertices, edges, &rotation).expect("catalog models are well formed")
}

/// The square-lattice model with one black and one white vertex per cell.
pub fn conifold() -> DimerModel {
    build(
        &[
            ("b", Color::Black, Some((r(0, 1), r(0, 1)))),
            ("w", Color::White, Some((r(1, 2), r(1, 2)))),
        ],
        &[
            ("e1", "b", "w", (0, 0)),
            ("e2", "b", "w", (-1, 0)),
            ("e3", "b", "w", (-1, -1)),
            ("e4", "b", "w", (0, -1)),
        ],
        &[("b", &["e1", "e2", "e3", "e4"]), ("w", &["e3", "e4", "e1", "e2"])],
    )
}

/// The hexagonal model: one hexagonal face per cell.
pub fn honeycomb() -> DimerModel {
    build(
        &[
            ("b", Color::Black, Some((r(1, 3), r(1, 3)))),
            ("w", Color::White, Some((r(2, 3), r(2, 3)))),
        ],
        &[
            ("e1", "b", "w", (0, 0)),
            ("e2", "b", "w", (-1, 0)),
            ("e3", "b", "w", (0, -1)),
        ],
        &[("b", &["e1", "e2", "e3"]), ("w", &["e1", "e2", "e3"])],
    )
}

/// A model with `|B| = |W|` in which some edges lie in no perfect matching:
/// the 2x2 cover of the honeycomb with three edges removed.
pub fn degenerate() -> DimerModel {
    let base = supercell(&honeycomb(), [[2, 0], [0, 2]]).expect("positive determinant");
    delete_edges(&base, &["e1_0", "e2_2", "e3_0"]).expect("deletion keeps the model valid")
}

/// Catalog lookup by name.
pub fn named(name: &str) -> Result<DimerModel> {
    match name {
        "conifold" => Ok(conifold()),
        "honeycomb" => Ok(honeycomb()),
        "c3-z3" => supercell(&honeycomb(), [[1, 1], [-1, 2]]),
        "conifold-z2" => supercell(&conifold(), [[2, 0], [0, 1]]),
        "degenerate" => Ok(degenerate()),
        other => Err(Error::Argument(format!(
            "unknown example `{other}` (known: {})",
            NAMES.join(", ")
        ))),
    }
}

/// Every catalog entry, in [`NAMES`] order.
pub fn all() -> Vec<(&'static str, DimerModel)> {
    NAMES
        .iter()
        .map(|&n| (n, named(n).expect("catalog names resolve")))
        .collect()
}

/// The same periodic graph seen on the larger torus `R^2 / L Z^2`.
///
/// Columns of `lattice` are the new period vectors in old cell coordinates;
/// the determinant must be positive so orientation and rotations are kept.
/// Lifted ids are `<id>_<k>` where `k` indexes the coset of the cell.
pub fn supercell(model: &DimerModel, lattice: [[i64; 2]; 2]) -> Result<DimerModel> {
    let [[a, b], [c, d]] = lattice;
    let det = a * d - b * c;
    if det <= 0 {
        return Err(Error::Argument(format!(
            "supercell lattice must have positive determinant, got {det}"
        )));
    }
    // Column vectors (a, c) and (b, d); adj = [[d, -b], [-c, a]].
    let split = |g: Offset| -> (Offset, Offset) {
        let u = d * g.dx - b * g.dy;
        let v = -c * g.dx + a * g.dy;
        let k = Offset::new(Integer::div_floor(&u, &det), Integer::div_floor(&v, &det));
        let rep = Offset::new(g.dx - (a * k.dx + b * k.dy), g.dy - (c * k.dx + d * k.dy));
        (rep, k)
    };
    let span = det.abs();
    let reps: Vec<Offset> = (-span..=span)
        .flat_map(|x| (-span..=span).map(move |y| Offset::new(x, y)))
        .map(|g| split(g).0)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    debug_assert_eq!(reps.len() as i64, det);
    let rep_index = |g: Offset| -> (usize, Offset) {
        let (rep, k) = split(g);
        (reps.binary_search(&rep).expect("coset representative"), k)
    };
    let to_new = |x: Rational64, y: Rational64| -> (Rational64, Rational64) {
        let det = Rational64::from(det);
        let u = (Rational64::from(d) * x - Rational64::from(b) * y) / det;
        let v = (Rational64::from(-c) * x + Rational64::from(a) * y) / det;
        (u - u.floor(), v - v.floor())
    };

    let mut vertices = Vec::new();
    for (k, rep) in reps.iter().enumerate() {
        for v in model.vertices() {
            let pos = v.pos.map(|(x, y)| {
                to_new(x + Rational64::from(rep.dx), y + Rational64::from(rep.dy))
            });
            vertices.push(DimerVertex {
                id: format!("{}_{k}", v.id),
                color: v.color,
                pos,
            });
        }
    }
    let mut edges = Vec::new();
    for (k, rep) in reps.iter().enumerate() {
        for e in model.edges() {
            let (kw, cell) = rep_index(*rep + e.offset);
            edges.push(EdgeSpec {
                id: format!("{}_{k}", e.id),
                black: format!("{}_{k}", model.vertex_id(e.black)),
                white: format!("{}_{kw}", model.vertex_id(e.white)),
                offset: cell,
            });
        }
    }
    let mut rotation = BTreeMap::new();
    for (k, rep) in reps.iter().enumerate() {
        for (vi, v) in model.vertices().iter().enumerate() {
            let ring = model
                .rotation(vi)
                .iter()
                .map(|&e| {
                    let kb = match v.color {
                        Color::Black => k,
                        Color::White => rep_index(*rep - model.edges()[e].offset).0,
                    };
                    format!("{}_{kb}", model.edge_id(e))
                })
                .collect();
            rotation.insert(format!("{}_{k}", v.id), ring);
        }
    }
    DimerModel::new(vertices, edges, &rotation)
}

/// Removes edges, merging the faces on either side of each.
pub fn delete_edges(model: &DimerModel, ids: &[&str]) -> Result<DimerModel> {
    for id in ids {
        if model.edge_by_id(id).is_none() {
            return Err(Error::Argument(format!("unknown edge `{id}`")));
        }
    }
    let keep = |e: usize| !ids.contains(&model.edge_id(e));
    let edges = (0..model.num_edges())
        .filter(|&e| keep(e))
        .map(|e| {
            let x = &model.edges()[e];
            EdgeSpec {
                id: x.id.clone(),
                black: model.vertex_id(x.black).to_string(),
                white: model.vertex_id(x.white).to_string(),
                offset: x.offset,
            }
        })
        .collect();
    let rotation = (0..model.num_vertices())
        .map(|v| {
            let ring = model
                .rotation(v)
                .iter()
                .filter(|&&e| keep(e))
                .map(|&e| model.edge_id(e).to_string())
                .collect();
            (model.vertex_id(v).to_string(), ring)
        })
        .collect();
    DimerModel::new(model.vertices().to_vec(), edges, &rotation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::validate_model;

    #[test]
    fn every_entry_is_valid() {
        for (name, m) in all() {
            let r = validate_model(&m);
            assert!(r.is_valid(), "{name}: {r:?}");
        }
    }

    #[test]
    fn supercell_multiplies_counts() {
        let m = supercell(&conifold(), [[2, 1], [0, 3]]).unwrap();
        assert_eq!(m.num_vertices(), 12);
        assert_eq!(m.num_edges(), 24);
        assert!(validate_model(&m).is_valid());
    }

    #[test]
    fn supercell_rejects_orientation_reversal() {
        assert!(supercell(&conifold(), [[0, 1], [1, 0]]).is_err());
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(named("nope"), Err(Error::Argument(_))));
    }
}
