//! Height changes, the characteristic polynomial and its Newton polygon.
//!
//! The height change of `D` relative to `D0` is read off homologically: orient
//! the edges of `D` white to black and those of `D0` black to white, so that the
//! superposition is a 1-cycle on the torus, and take its class in `Z^2` from
//! the edge offsets. That class is identified with `H^1(T, Z)` by Poincare
//! duality, so it equals the pairing of the cycle against the loops `(0,-1)`
//! and `(1,0)`; the lattice module evaluates the same pairing on quiver loops.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matchings::{enumerate_matchings, PerfectMatching};
use crate::tiling::{Dart, DimerModel, Direction, Offset};

/// Height change `h(D, D0)`; equal to the homology class of `D - D0` as above.
pub type HeightChange = Offset;

pub fn height_change(
    model: &DimerModel,
    d: &PerfectMatching,
    d0: &PerfectMatching,
) -> Result<HeightChange> {
    d.check(model)?;
    d0.check(model)?;
    let darts = d
        .edges()
        .iter()
        .map(|&e| Dart::new(e, Direction::WhiteToBlack))
        .chain(d0.edges().iter().map(|&e| Dart::new(e, Direction::BlackToWhite)));
    let mut balance = vec![0i64; model.num_vertices()];
    let mut class = Offset::ZERO;
    for dart in darts {
        balance[model.tail(dart)] += 1;
        balance[model.head(dart)] -= 1;
        class += model.dart_offset(dart);
    }
    if balance.iter().any(|&b| b != 0) {
        return Err(Error::Invariant("superposition of matchings is not a cycle".into()));
    }
    Ok(class)
}

/// A Laurent polynomial in `x, y` with positive integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LaurentPoly2 {
    terms: BTreeMap<Offset, u64>,
}

impl LaurentPoly2 {
    pub fn from_terms(terms: impl IntoIterator<Item = (Offset, u64)>) -> Self {
        let mut p = LaurentPoly2::default();
        for (o, c) in terms {
            if c > 0 {
                *p.terms.entry(o).or_insert(0) += c;
            }
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (Offset, u64)> + '_ {
        self.terms.iter().map(|(&o, &c)| (o, c))
    }

    pub fn coefficient(&self, exponent: Offset) -> u64 {
        self.terms.get(&exponent).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = Offset> + '_ {
        self.terms.keys().copied()
    }

    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplication by the monomial `x^s.dx y^s.dy`.
    pub fn shifted(&self, s: Offset) -> Self {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(&o, &c)| (o + s, c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<_> = self.terms().collect();
        ordered.sort_by_key(|(o, _)| (o.dx.abs() + o.dy.abs(), o.dy, o.dx));
        let mut first = true;
        for (o, c) in ordered {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = |v: &str, k: i64| match k {
                0 => String::new(),
                1 => v.to_string(),
                k => format!("{v}^{k}"),
            };
            let body = format!("{}{}", mono("x", o.dx), mono("y", o.dy));
            match (c, body.is_empty()) {
                (c, true) => write!(f, "{c}")?,
                (1, false) => f.write_str(&body)?,
                (c, false) => write!(f, "{c}{body}")?,
            }
        }
        Ok(())
    }
}

/// `Z(x, y) = sum over D of x^hx(D, D0) y^hy(D, D0)`.
pub fn char_poly(model: &DimerModel, d0: &PerfectMatching) -> Result<LaurentPoly2> {
    let all = enumerate_matchings(model);
    if all.is_empty() {
        return Err(Error::Precondition("no perfect matchings".into()));
    }
    let mut terms = Vec::with_capacity(all.len());
    for d in &all {
        terms.push((height_change(model, d, d0)?, 1));
    }
    Ok(LaurentPoly2::from_terms(terms))
}

/// A convex lattice polygon, vertices counterclockwise from the lexicographic minimum.
///
/// Degenerate hulls are kept: one vertex for a point, two for a segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePolygon {
    pub vertices: Vec<Offset>,
}

impl LatticePolygon {
    /// Twice the Euclidean area, the normalized area of the polygon.
    pub fn area2(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum()
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Closed containment.
    pub fn contains(&self, p: Offset) -> bool {
        let n = self.vertices.len();
        match n {
            0 => false,
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                (b - a).cross(p - a) == 0
                    && (p - a).dx * (p - b).dx <= 0
                    && (p - a).dy * (p - b).dy <= 0
            }
            _ => (0..n).all(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                (b - a).cross(p - a) >= 0
            }),
        }
    }

    pub fn translated(&self, s: Offset) -> Self {
        LatticePolygon {
            vertices: self.vertices.iter().map(|&v| v + s).collect(),
        }
    }
}

/// Convex hull of a finite point set by the monotone chain, dropping collinear points.
pub fn convex_hull(points: impl IntoIterator<Item = Offset>) -> LatticePolygon {
    let mut pts: Vec<Offset> = points.into_iter().collect();
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return LatticePolygon { vertices: pts };
    }
    let mut lower: Vec<Offset> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 {
            let k = lower.len();
            if (lower[k - 1] - lower[k - 2]).cross(p - lower[k - 2]) <= 0 {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(p);
    }
    let mut upper: Vec<Offset> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 {
            let k = upper.len();
            if (upper[k - 1] - upper[k - 2]).cross(p - upper[k - 2]) <= 0 {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    LatticePolygon { vertices: lower }
}

pub fn newton_polygon(z: &LaurentPoly2) -> LatticePolygon {
    convex_hull(z.support())
}

/// The default reference matching: the first in canonical order.
pub fn default_reference(model: &DimerModel) -> Result<PerfectMatching> {
    enumerate_matchings(model)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Precondition("no perfect matchings".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    fn o(x: i64, y: i64) -> Offset {
        Offset::new(x, y)
    }

    #[test]
    fn conifold_polynomial() {
        let m = catalog::conifold();
        let d0 = default_reference(&m).unwrap();
        let z = char_poly(&m, &d0).unwrap();
        let expected = LaurentPoly2::from_terms([(o(0, 0), 1), (o(1, 0), 1), (o(0, 1), 1), (o(1, 1), 1)]);
        assert_eq!(z, expected);
        assert_eq!(z.to_string(), "1 + x + y + xy");
        assert_eq!(
            newton_polygon(&z).vertices,
            vec![o(0, 0), o(1, 0), o(1, 1), o(0, 1)]
        );
    }

    #[test]
    fn honeycomb_polynomial() {
        let m = catalog::honeycomb();
        let z = char_poly(&m, &default_reference(&m).unwrap()).unwrap();
        assert_eq!(z.total(), 3);
        assert!(z.terms().all(|(_, c)| c == 1));
        let poly = newton_polygon(&z);
        assert_eq!(poly.vertices, vec![o(0, 0), o(1, 0), o(0, 1)]);
        assert_eq!(poly.area2(), 1);
    }

    #[test]
    fn self_height_is_zero() {
        for (_, m) in catalog::all() {
            for d in enumerate_matchings(&m) {
                assert_eq!(height_change(&m, &d, &d).unwrap(), Offset::ZERO);
            }
        }
    }

    #[test]
    fn changing_reference_translates() {
        for (_, m) in catalog::all() {
            let all = enumerate_matchings(&m);
            if all.is_empty() {
                continue;
            }
            let z0 = char_poly(&m, &all[0]).unwrap();
            let p0 = newton_polygon(&z0);
            for d1 in &all {
                let shift = height_change(&m, &all[0], d1).unwrap();
                let z1 = char_poly(&m, d1).unwrap();
                assert_eq!(z1, z0.shifted(shift));
                assert_eq!(newton_polygon(&z1), p0.translated(shift));
            }
        }
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(convex_hull([o(2, 3)]).vertices, vec![o(2, 3)]);
        assert_eq!(
            convex_hull([o(0, 0), o(1, 1), o(2, 2)]).vertices,
            vec![o(0, 0), o(2, 2)]
        );
        let single = LaurentPoly2::from_terms([(o(5, -1), 2)]);
        assert_eq!(newton_polygon(&single).vertices, vec![o(5, -1)]);
    }

    proptest! {
        #[test]
        fn hull_contains_its_points(pts in proptest::collection::vec((-6i64..6, -6i64..6), 1..25)) {
            let pts: Vec<Offset> = pts.into_iter().map(|(x, y)| o(x, y)).collect();
            let hull = convex_hull(pts.iter().copied());
            for p in &pts {
                prop_assert!(hull.contains(*p));
            }
            let n = hull.vertices.len();
            if n >= 3 {
                prop_assert!(hull.area2() > 0);
                for i in 0..n {
                    let a = hull.vertices[i];
                    let b = hull.vertices[(i + 1) % n];
                    let c = hull.vertices[(i + 2) % n];
                    prop_assert!((b - a).cross(c - b) > 0);
                }
                prop_assert_eq!(hull.vertices[0], *hull.vertices.iter().min().unwrap());
            }
        }
    }
}
