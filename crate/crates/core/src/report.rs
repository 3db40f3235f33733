//! JSON reports, one per command-line subcommand.
//!
//! Every builder validates the model first. Objects are keyed by model ids
//! rather than indices, and rationals are written as `"p/q"` strings.

use num_rational::Rational64;
use serde_json::{json, Map, Value};

use crate::charts::{analyze_fixed_points, FixedPointAnalysis};
use crate::error::{Error, Result};
use crate::heights::{char_poly, height_change, newton_polygon, LatticePolygon};
use crate::io::{rational_from_json, rational_to_string};
use crate::lattice::{cone_over_polygon, dual_cone, hilbert_basis};
use crate::matchings::{enumerate_matchings, r_charge_average, Bipartite, Method, PerfectMatching};
use crate::quiver::{quiver_of, relations, Quiver};
use crate::stability::{generic_theta, is_stable, Theta, ZeroOneRep};
use crate::tiling::{ensure_valid, validate_model, DimerModel, Offset};

/// Draws of `xi` tried before a stability parameter is declared non-generic.
pub const MAX_THETA_DRAWS: usize = 100;

/// How a report should be judged by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// The input is fine but the answer is "no" (degenerate, invalid, unstable).
    Negative,
    /// A cross-check that must always pass did not.
    Violation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub verdict: Verdict,
}

impl Report {
    fn ok(json: Value) -> Self {
        Report {
            json,
            verdict: Verdict::Ok,
        }
    }
}

/// Where the stability parameter for `fixed-points` comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaSource {
    /// A Sardo-Infirri draw for the reference matching.
    Auto,
    /// A JSON object mapping face ids to rationals, or an array in face order.
    Given(Value),
}

fn offset(o: Offset) -> Value {
    json!([o.dx, o.dy])
}

fn rational(r: Rational64) -> Value {
    Value::String(rational_to_string(r))
}

/// The `idx`-th enumerated matching, or the first when `idx` is `None`.
pub fn matching_at(model: &DimerModel, idx: Option<usize>) -> Result<(usize, PerfectMatching)> {
    let all = enumerate_matchings(model);
    if all.is_empty() {
        return Err(Error::Precondition("the model has no perfect matchings".into()));
    }
    let i = idx.unwrap_or(0);
    let n = all.len();
    all.into_iter()
        .nth(i)
        .map(|d| (i, d))
        .ok_or_else(|| Error::Argument(format!("matching index {i} out of range, model has {n}")))
}

fn edge_ids(model: &DimerModel, d: &PerfectMatching) -> Value {
    json!(d.edge_ids(model).collect::<Vec<_>>())
}

fn polygon_of(model: &DimerModel, reference: Option<usize>) -> Result<(usize, LatticePolygon)> {
    let (r, d0) = matching_at(model, reference)?;
    Ok((r, newton_polygon(&char_poly(model, &d0)?)))
}

fn polygon_json(p: &LatticePolygon) -> Value {
    json!({
        "vertices": p.vertices.iter().map(|&v| offset(v)).collect::<Vec<_>>(),
        "area2": p.area2(),
        "degenerate": p.is_degenerate(),
    })
}

pub fn validate(model: &DimerModel) -> Report {
    let v = validate_model(model);
    let json = json!({
        "valid": v.is_valid(),
        "vertices": v.vertices,
        "edges": v.edges,
        "faces": v.faces,
        "euler": v.euler,
        "checks": v.checks,
    });
    Report {
        json,
        verdict: if v.is_valid() { Verdict::Ok } else { Verdict::Negative },
    }
}

fn arrow_ids(q: &Quiver, arrows: impl Iterator<Item = usize>) -> Vec<String> {
    arrows.map(|a| q.arrow(a).map_or_else(|_| a.to_string(), |x| x.id.clone())).collect()
}

pub fn quiver(model: &DimerModel) -> Result<Report> {
    ensure_valid(model)?;
    let q = quiver_of(model);
    let arrows: Vec<Value> = q
        .arrows
        .iter()
        .map(|a| {
            json!({
                "id": a.id,
                "source": q.vertices[a.source],
                "target": q.vertices[a.target],
                "displacement": offset(a.displacement),
            })
        })
        .collect();
    let rels: Vec<Value> = relations(&q)
        .iter()
        .map(|r| {
            json!({
                "arrow": q.arrows[r.arrow].id,
                "plus": arrow_ids(&q, r.plus.arrows.iter().copied()),
                "minus": arrow_ids(&q, r.minus.arrows.iter().copied()),
            })
        })
        .collect();
    Ok(Report::ok(json!({
        "vertices": q.vertices,
        "arrows": arrows,
        "relations": rels,
        "connected": q.is_connected(),
    })))
}

/// Every matching with its height change against the reference, when there is one.
pub fn matchings(model: &DimerModel, reference: Option<usize>) -> Result<Report> {
    ensure_valid(model)?;
    let all = enumerate_matchings(model);
    let d0 = if all.is_empty() {
        None
    } else {
        Some(matching_at(model, reference)?)
    };
    let list = all
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut v = json!({"index": i, "edges": edge_ids(model, d)});
            if let Some((_, d0)) = &d0 {
                v["height_change"] = offset(height_change(model, d, d0)?);
            }
            Ok(v)
        })
        .collect::<Result<Vec<Value>>>()?;
    Ok(Report::ok(json!({
        "count": all.len(),
        "reference": d0.map(|(r, _)| r),
        "matchings": list,
    })))
}

/// Terms `{"hx", "hy", "coeff"}` of the characteristic polynomial.
pub fn charpoly(model: &DimerModel, reference: Option<usize>) -> Result<Report> {
    ensure_valid(model)?;
    let (_, d0) = matching_at(model, reference)?;
    let z = char_poly(model, &d0)?;
    let terms: Vec<Value> = z
        .terms()
        .map(|(h, c)| json!({"hx": h.dx, "hy": h.dy, "coeff": c}))
        .collect();
    Ok(Report::ok(Value::Array(terms)))
}

pub fn polygon(model: &DimerModel, reference: Option<usize>) -> Result<(Report, LatticePolygon)> {
    ensure_valid(model)?;
    let (r, p) = polygon_of(model, reference)?;
    let mut json = polygon_json(&p);
    json["reference"] = json!(r);
    Ok((Report::ok(json), p))
}

/// The three non-degeneracy tests; negative when degenerate, a violation when they disagree.
pub fn check(model: &DimerModel) -> Result<Report> {
    ensure_valid(model)?;
    let g = Bipartite::of_model(model);
    let mut verdicts = Map::new();
    let mut values = Vec::new();
    for (key, m) in [
        ("per_edge", Method::PerEdge),
        ("r_charge", Method::RCharge),
        ("strong_marriage", Method::StrongMarriage),
    ] {
        let v = g.is_non_degenerate(m)?;
        verdicts.insert(key.into(), json!(v));
        values.push(v);
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let non_degenerate = agree && values[0];
    let missing: Vec<&str> = (0..model.num_edges())
        .filter(|&e| !g.has_matching_containing(e).unwrap_or(false))
        .map(|e| model.edge_id(e))
        .collect();
    let json = json!({
        "non_degenerate": non_degenerate,
        "agree": agree,
        "methods": verdicts,
        "edges_in_no_matching": missing,
    });
    let verdict = if !agree {
        Verdict::Violation
    } else if non_degenerate {
        Verdict::Ok
    } else {
        Verdict::Negative
    };
    Ok(Report { json, verdict })
}

/// Averaged R-charges and their sums around each vertex.
pub fn rcharge(model: &DimerModel) -> Result<Report> {
    ensure_valid(model)?;
    let r = r_charge_average(model)?;
    let edges: Map<String, Value> = (0..model.num_edges())
        .map(|e| (model.edge_id(e).to_string(), rational(r[e])))
        .collect();
    let two = Rational64::from(2);
    let mut sums = Map::new();
    let mut balanced = true;
    for v in 0..model.num_vertices() {
        let s: Rational64 = model.rotation(v).iter().map(|&e| r[e]).sum();
        balanced &= s == two;
        sums.insert(model.vertex_id(v).to_string(), rational(s));
    }
    let positive = r.iter().all(|x| *x > Rational64::from(0));
    let json = json!({
        "edges": edges,
        "vertex_sums": sums,
        "positive": positive,
        "balanced": balanced,
    });
    let verdict = if !balanced {
        Verdict::Violation
    } else if positive {
        Verdict::Ok
    } else {
        Verdict::Negative
    };
    Ok(Report { json, verdict })
}

fn theta_json(q: &Quiver, theta: &Theta) -> Value {
    let m: Map<String, Value> = q
        .vertices
        .iter()
        .zip(theta.values())
        .map(|(f, &t)| (f.clone(), rational(t)))
        .collect();
    Value::Object(m)
}

/// A generic Sardo-Infirri parameter for matching `idx` and the stability of its representation.
pub fn theta(model: &DimerModel, idx: Option<usize>, seed: u64) -> Result<Report> {
    ensure_valid(model)?;
    let q = quiver_of(model);
    let (i, d) = matching_at(model, idx)?;
    let draw = generic_theta(model, &q, &d, seed, MAX_THETA_DRAWS)?;
    let psi = ZeroOneRep::off_matching(model, &q, &d)?;
    let stable = is_stable(&q, &psi, &draw.theta)?;
    let xi: Map<String, Value> = (0..model.num_edges())
        .filter(|&e| !d.contains(e))
        .map(|e| (model.edge_id(e).to_string(), rational(draw.xi[e])))
        .collect();
    let json = json!({
        "matching": i,
        "matching_edges": edge_ids(model, &d),
        "seed": seed,
        "theta": theta_json(&q, &draw.theta),
        "xi": xi,
        "generic": true,
        "draws": draw.draws,
        "matching_rep_stable": stable,
    });
    Ok(Report {
        json,
        verdict: if stable { Verdict::Ok } else { Verdict::Violation },
    })
}

/// Reads a stability parameter given per face id (object) or in face order (array).
pub fn parse_theta(q: &Quiver, v: &Value) -> Result<Theta> {
    let values = match v {
        Value::Array(xs) => {
            if xs.len() != q.num_vertices() {
                return Err(Error::Argument(format!(
                    "theta has {} entries, quiver has {} vertices",
                    xs.len(),
                    q.num_vertices()
                )));
            }
            xs.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?
        }
        Value::Object(m) => {
            if let Some(k) = m.keys().find(|k| !q.vertices.contains(k)) {
                return Err(Error::Argument(format!("theta names unknown face `{k}`")));
            }
            q.vertices
                .iter()
                .map(|f| {
                    m.get(f)
                        .ok_or_else(|| Error::Argument(format!("theta is missing face `{f}`")))
                        .and_then(rational_from_json)
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => return Err(Error::Parse("theta must be a JSON object or array".into())),
    };
    Theta::new(values)
}

/// The fixed-point analysis, together with the parameter it used.
pub fn fixed_points_analysis(
    model: &DimerModel,
    source: &ThetaSource,
    reference: Option<usize>,
    seed: u64,
) -> Result<(Theta, FixedPointAnalysis)> {
    ensure_valid(model)?;
    let q = quiver_of(model);
    let (_, d0) = matching_at(model, reference)?;
    let theta = match source {
        ThetaSource::Auto => generic_theta(model, &q, &d0, seed, MAX_THETA_DRAWS)?.theta,
        ThetaSource::Given(v) => parse_theta(&q, v)?,
    };
    let polygon = newton_polygon(&char_poly(model, &d0)?);
    let analysis = analyze_fixed_points(model, &theta, &d0, &polygon)?;
    Ok((theta, analysis))
}

pub fn fixed_points(
    model: &DimerModel,
    source: &ThetaSource,
    reference: Option<usize>,
    seed: u64,
) -> Result<Report> {
    let (theta, a) = fixed_points_analysis(model, source, reference, seed)?;
    let q = quiver_of(model);
    let points: Vec<Value> = a
        .fixed_points
        .iter()
        .map(|fp| {
            let chart = &fp.chart;
            let mut v = json!({
                "zero_arrows": fp.zero_arrows,
                "lift": q.vertices.iter().zip(&fp.candidate.lift)
                    .map(|(f, &c)| (f.clone(), offset(c)))
                    .collect::<Map<String, Value>>(),
                "domain_faces": fp.domain.faces.iter()
                    .map(|&(f, c)| json!([q.vertices[f], offset(c)]))
                    .collect::<Vec<_>>(),
                "delta_edges": fp.domain.delta_edges.iter().map(|&e| model.edge_id(e)).collect::<Vec<_>>(),
                "chart": {
                    "case": chart.case,
                    "smooth": chart.smooth,
                    "description": chart.chart_description,
                    "boundary_length": chart.boundary_length,
                    "coordinate_edges": chart.coordinate_edges.iter()
                        .map(|c| json!({"edge": model.edge_id(c.edge), "black_cell": offset(c.black_cell)}))
                        .collect::<Vec<_>>(),
                    "marked_points": chart.marked_points.iter()
                        .map(|p| json!({
                            "vertex": model.vertex_id(p.vertex),
                            "cell": offset(p.cell),
                            "color": p.color,
                            "valency": p.valency,
                        }))
                        .collect::<Vec<_>>(),
                },
            });
            if let Some(cone) = &fp.cone {
                v["cone"] = json!({
                    "characters": cone.characters.to_rows(),
                    "rays": cone.rays,
                    "split_rays": cone.split_rays,
                });
            }
            v
        })
        .collect();
    let transitions: Vec<Value> = a
        .transitions
        .iter()
        .map(|t| json!({"from": t.from, "to": t.to, "matrix": t.matrix.to_rows(), "det": t.det}))
        .collect();
    let smooth_failed = a
        .certificate
        .checks
        .iter()
        .any(|c| c.name == "smooth_charts" && !c.passed);
    let shared = a.product_character_shared();
    let json = json!({
        "theta": theta_json(&q, &theta),
        "torus_dimension": a.torus_dimension,
        "count": a.fixed_points.len(),
        "fixed_points": points,
        "certificate": {"passed": a.certificate.passed(), "checks": a.certificate.checks},
        "transitions": transitions,
        "product_character_shared": shared,
    });
    let verdict = if smooth_failed {
        Verdict::Negative
    } else if !a.certificate.passed() || !shared || a.transitions.iter().any(|t| t.det != 1) {
        Verdict::Violation
    } else {
        Verdict::Ok
    };
    Ok(Report { json, verdict })
}

/// Polygon, cone, dual cone, Hilbert basis and the additive relations among its pair sums.
pub fn toric(model: &DimerModel, reference: Option<usize>) -> Result<Report> {
    ensure_valid(model)?;
    let (_, p) = polygon_of(model, reference)?;
    let cone = cone_over_polygon(&p)?;
    let dual = dual_cone(&cone)?;
    let hb = hilbert_basis(&dual)?;
    Ok(Report::ok(json!({
        "polygon": polygon_json(&p),
        "cone_rays": cone.rays,
        "dual_cone_rays": dual.rays,
        "hilbert_basis": hb.elements,
        "relations": hb.relations,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn conifold_charpoly_terms() {
        let r = charpoly(&catalog::conifold(), None).unwrap();
        let terms = r.json.as_array().unwrap();
        assert_eq!(terms.len(), 4);
        assert!(terms.iter().all(|t| t["coeff"] == 1));
    }

    #[test]
    fn rcharge_values() {
        let r = rcharge(&catalog::conifold()).unwrap();
        assert!(r.json["edges"].as_object().unwrap().values().all(|v| v == "1/2"));
        let r = rcharge(&catalog::honeycomb()).unwrap();
        assert!(r.json["edges"].as_object().unwrap().values().all(|v| v == "2/3"));
        assert!(r.json["vertex_sums"].as_object().unwrap().values().all(|v| v == "2"));
    }

    #[test]
    fn degenerate_fixture_is_a_negative_verdict() {
        let r = check(&catalog::degenerate()).unwrap();
        assert_eq!(r.verdict, Verdict::Negative);
        assert_eq!(r.json["agree"], true);
        assert_eq!(check(&catalog::conifold()).unwrap().verdict, Verdict::Ok);
    }

    #[test]
    fn fixed_points_on_fixtures() {
        for (name, count) in [("conifold", 2), ("honeycomb", 1)] {
            let m = catalog::named(name).unwrap();
            let r = fixed_points(&m, &ThetaSource::Auto, None, 0).unwrap();
            assert_eq!(r.verdict, Verdict::Ok, "{name}");
            assert_eq!(r.json["count"], count);
        }
    }

    #[test]
    fn given_theta_by_face_id() {
        let m = catalog::conifold();
        let q = quiver_of(&m);
        let v = json!({ q.vertices[0].clone(): "-1", q.vertices[1].clone(): 1 });
        let r = fixed_points(&m, &ThetaSource::Given(v), None, 0).unwrap();
        assert_eq!(r.json["count"], 2);
        let bad = json!({"nope": 0});
        assert!(fixed_points(&m, &ThetaSource::Given(bad), None, 0).is_err());
    }

    #[test]
    fn toric_conifold() {
        let r = toric(&catalog::conifold(), None).unwrap();
        assert_eq!(r.json["hilbert_basis"].as_array().unwrap().len(), 4);
        assert_eq!(r.json["relations"], json!([[0, 2, 1, 3]]));
    }

    #[test]
    fn matching_index_out_of_range() {
        assert!(matches!(
            matching_at(&catalog::conifold(), Some(4)),
            Err(Error::Argument(_))
        ));
    }
}
