//! The quiver with relations dual to a dimer model.
//!
//! Quiver vertices are the faces of the model and arrows are its edges, so an
//! arrow is addressed by the index of the edge it crosses. The arrow dual to
//! `e` runs from the face left of the white-to-black side of `e` to the face
//! left of the black-to-white side, keeping the white endpoint on its right.

use std::collections::VecDeque;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matchings::PerfectMatching;
use crate::tiling::{compute_faces, Color, Dart, DimerModel, Direction, FaceMap, Offset};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub id: String,
    /// Index of the dual edge; also the arrow's identity.
    pub edge: usize,
    pub source: usize,
    pub target: usize,
    /// Cell of the target face lift minus cell of the source face lift, with
    /// each face placed at its anchored lift.
    pub displacement: Offset,
    /// `p+`: the other arrows around the white endpoint, clockwise, in traversal order.
    plus: Vec<usize>,
    /// `p-`: the other arrows around the black endpoint, counterclockwise, in traversal order.
    minus: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// Position in `arrows` of the arrow dual to each edge of the model.
    #[serde(skip)]
    slot: Vec<Option<usize>>,
}

/// A path `(a_n, ..., a_1)`; `a_1` is traversed first.
///
/// Arrows are stored in written order, so `arrows[0]` is the last arrow
/// traversed and ends at the target. An empty path sits at `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PathSeq {
    pub base: usize,
    pub arrows: Vec<usize>,
}

impl PathSeq {
    pub fn empty(base: usize) -> Self {
        PathSeq {
            base,
            arrows: Vec::new(),
        }
    }

    /// Builds a path from arrows listed in the order they are traversed.
    pub fn from_traversal(q: &Quiver, steps: &[usize]) -> Result<Self> {
        let Some(&first) = steps.first() else {
            return Err(Error::Argument("use PathSeq::empty for empty paths".into()));
        };
        let base = q.arrow(first)?.source;
        for w in steps.windows(2) {
            if q.arrow(w[0])?.target != q.arrow(w[1])?.source {
                return Err(Error::Argument(format!(
                    "arrows {} and {} do not compose",
                    q.arrow(w[0])?.id,
                    q.arrow(w[1])?.id
                )));
            }
        }
        q.arrow(*steps.last().expect("nonempty"))?;
        Ok(PathSeq {
            base,
            arrows: steps.iter().rev().copied().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Arrows in traversal order `a_1, ..., a_n`.
    pub fn traversal(&self) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().rev().copied()
    }

    pub fn source(&self) -> usize {
        self.base
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows
            .first()
            .map_or(self.base, |&a| q.arrows[q.slot[a].expect("path arrows exist")].target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationPair {
    pub arrow: usize,
    pub plus: PathSeq,
    pub minus: PathSeq,
}

impl Quiver {
    pub fn arrow(&self, a: usize) -> Result<&Arrow> {
        self.slot
            .get(a)
            .copied()
            .flatten()
            .map(|i| &self.arrows[i])
            .ok_or_else(|| Error::Argument(format!("no arrow dual to edge index {a}")))
    }

    pub fn has_arrow(&self, a: usize) -> bool {
        self.slot.get(a).copied().flatten().is_some()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for a in &self.arrows {
            adj[a.source].push(a.target);
            adj[a.target].push(a.source);
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn with_arrows(&self, keep: impl Fn(usize) -> bool) -> Quiver {
        let arrows: Vec<Arrow> = self.arrows.iter().filter(|a| keep(a.edge)).cloned().collect();
        let mut slot = vec![None; self.slot.len()];
        for (i, a) in arrows.iter().enumerate() {
            slot[a.edge] = Some(i);
        }
        Quiver {
            vertices: self.vertices.clone(),
            arrows,
            slot,
        }
    }
}

/// Builds the dual quiver from an already traced face map.
pub fn quiver_from_faces(model: &DimerModel, faces: &FaceMap) -> Quiver {
    let mut arrows = Vec::with_capacity(model.num_edges());
    for (i, e) in model.edges().iter().enumerate() {
        let down = Dart::new(i, Direction::WhiteToBlack);
        let up = Dart::new(i, Direction::BlackToWhite);
        let source = faces.face_of(down);
        let target = faces.face_of(up);
        // Edge lift with its black end in cell 0: the source face lift holds the
        // white tail in cell `offset`, the target face lift holds the black tail in 0.
        let displacement = faces.tail_cell[down.0] - faces.tail_cell[up.0] - e.offset;
        let deg_w = model.degree(e.white) as isize;
        let deg_b = model.degree(e.black) as isize;
        let plus = (1..deg_w).map(|k| model.rotate(i, Color::White, -k)).collect();
        let minus = (1..deg_b).map(|k| model.rotate(i, Color::Black, k)).collect();
        arrows.push(Arrow {
            id: e.id.clone(),
            edge: i,
            source,
            target,
            displacement,
            plus,
            minus,
        });
    }
    Quiver {
        vertices: faces.faces.iter().map(|f| f.id.clone()).collect(),
        slot: (0..arrows.len()).map(Some).collect(),
        arrows,
    }
}

pub fn quiver_of(model: &DimerModel) -> Quiver {
    quiver_from_faces(model, &compute_faces(model))
}

/// The path around the white endpoint of `a`, clockwise, from `t(a)` to `s(a)`.
pub fn p_plus(q: &Quiver, a: usize) -> Result<PathSeq> {
    let arrow = q.arrow(a)?;
    Ok(PathSeq {
        base: arrow.target,
        arrows: arrow.plus.iter().rev().copied().collect(),
    })
}

/// The path around the black endpoint of `a`, counterclockwise, from `t(a)` to `s(a)`.
pub fn p_minus(q: &Quiver, a: usize) -> Result<PathSeq> {
    let arrow = q.arrow(a)?;
    Ok(PathSeq {
        base: arrow.target,
        arrows: arrow.minus.iter().rev().copied().collect(),
    })
}

/// One relation `p+(a) - p-(a)` per arrow, in arrow order.
pub fn relations(q: &Quiver) -> Vec<RelationPair> {
    q.arrows
        .iter()
        .map(|a| RelationPair {
            arrow: a.edge,
            plus: p_plus(q, a.edge).expect("arrow exists"),
            minus: p_minus(q, a.edge).expect("arrow exists"),
        })
        .collect()
}

/// The subquiver `Q_D` with the arrows of `D` removed.
pub fn allowed_subquiver(model: &DimerModel, q: &Quiver, d: &PerfectMatching) -> Result<Quiver> {
    d.check(model)?;
    Ok(q.with_arrows(|e| !d.contains(e)))
}

/// The subquiver spanned by the arrows with `keep[a]` set.
pub fn support_subquiver(q: &Quiver, keep: &[bool]) -> Quiver {
    q.with_arrows(|e| keep.get(e).copied().unwrap_or(false))
}

/// Product of `values` along `p`; the empty path evaluates to one.
pub fn evaluate_path<T>(values: &[T], p: &PathSeq) -> T
where
    T: Clone + One,
{
    p.traversal()
        .fold(T::one(), |acc, a| acc * values[a].clone())
}

/// Sum of `weights` along `p`; the empty path weighs zero.
pub fn evaluate_weight(weights: &[i64], p: &PathSeq) -> i64 {
    p.traversal().map(|a| weights[a]).sum()
}

/// Arrows dual to the edges around dimer vertex `v`, in the order the arrows
/// chain: clockwise around white vertices, counterclockwise around black ones.
pub fn vertex_cycle(model: &DimerModel, v: usize) -> Vec<usize> {
    let ring = model.rotation(v);
    match model.vertices()[v].color {
        Color::Black => ring.to_vec(),
        Color::White => ring.iter().rev().copied().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::matchings::enumerate_matchings;
    use num_rational::Rational64;

    #[test]
    fn conifold_quiver_shape() {
        let m = catalog::conifold();
        let q = quiver_of(&m);
        assert_eq!(q.vertices.len(), 2);
        assert_eq!(q.arrows.len(), 4);
        let forward = q.arrows.iter().filter(|a| a.source == 0 && a.target == 1).count();
        let back = q.arrows.iter().filter(|a| a.source == 1 && a.target == 0).count();
        assert_eq!((forward, back), (2, 2));
        for a in 0..4 {
            assert_eq!(p_plus(&q, a).unwrap().len(), 3);
            assert_eq!(p_minus(&q, a).unwrap().len(), 3);
        }
    }

    #[test]
    fn honeycomb_is_three_loops() {
        let m = catalog::honeycomb();
        let q = quiver_of(&m);
        assert_eq!(q.vertices.len(), 1);
        assert_eq!(q.arrows.len(), 3);
        assert!(q.arrows.iter().all(|a| a.source == 0 && a.target == 0));
        // Loops have nonzero displacement: they wind around the torus.
        assert!(q.arrows.iter().all(|a| a.displacement != Offset::ZERO));
        // Around each degree-3 vertex the relation pairs the two other loops in
        // opposite orders, the commutator pattern.
        for r in relations(&q) {
            let mut plus = r.plus.arrows.clone();
            let mut minus = r.minus.arrows.clone();
            assert_eq!(plus.len(), 2);
            assert_ne!(plus, minus);
            plus.sort();
            minus.sort();
            assert_eq!(plus, minus);
            assert!(!plus.contains(&r.arrow));
        }
    }

    #[test]
    fn relation_paths_run_from_target_to_source() {
        for (_, m) in catalog::all() {
            let q = quiver_of(&m);
            for r in relations(&q) {
                let a = q.arrow(r.arrow).unwrap();
                for p in [&r.plus, &r.minus] {
                    assert_eq!(p.source(), a.target);
                    assert_eq!(p.target(&q), a.source);
                    let steps: Vec<_> = p.traversal().collect();
                    if !steps.is_empty() {
                        assert_eq!(PathSeq::from_traversal(&q, &steps).unwrap(), *p);
                    }
                }
                assert_eq!(r.plus.len(), m.degree(m.edges()[r.arrow].white) - 1);
                assert_eq!(r.minus.len(), m.degree(m.edges()[r.arrow].black) - 1);
            }
        }
    }

    #[test]
    fn vertex_cycles_close_with_zero_displacement() {
        for (_, m) in catalog::all() {
            let q = quiver_of(&m);
            for v in 0..m.num_vertices() {
                let cyc = vertex_cycle(&m, v);
                assert_eq!(cyc.len(), m.degree(v));
                let path = PathSeq::from_traversal(&q, &cyc).unwrap();
                assert_eq!(path.target(&q), path.source());
                let total: Offset = cyc.iter().map(|&a| q.arrows[a].displacement).sum();
                assert_eq!(total, Offset::ZERO);
            }
        }
    }

    #[test]
    fn degree_two_white_gives_length_one() {
        let m = catalog::named("degenerate").unwrap();
        let q = quiver_of(&m);
        let found = m.edges().iter().enumerate().find(|(_, e)| m.degree(e.white) == 2);
        let (a, _) = found.expect("fixture has a bivalent white vertex");
        assert_eq!(p_plus(&q, a).unwrap().len(), 1);
    }

    #[test]
    fn allowed_subquivers() {
        let m = catalog::conifold();
        let q = quiver_of(&m);
        let ms = enumerate_matchings(&m);
        let d4 = ms.iter().find(|d| d.contains(3)).unwrap();
        assert_eq!(allowed_subquiver(&m, &q, d4).unwrap().arrows.len(), 3);
        for d in &ms {
            assert!(allowed_subquiver(&m, &q, d).unwrap().is_connected());
        }
        let h = catalog::honeycomb();
        let hq = quiver_of(&h);
        let d1 = PerfectMatching::from_edges(&h, [0]).unwrap();
        assert_eq!(allowed_subquiver(&h, &hq, &d1).unwrap().arrows.len(), 2);
    }

    #[test]
    fn evaluation() {
        let m = catalog::conifold();
        let q = quiver_of(&m);
        let ones = vec![Rational64::from(1); 4];
        for r in relations(&q) {
            assert_eq!(evaluate_path(&ones, &r.plus), Rational64::from(1));
        }
        assert_eq!(evaluate_weight(&[1, 2, 3, 4], &PathSeq::empty(0)), 0);
        assert_eq!(evaluate_path(&[2i64, 3, 5, 7], &PathSeq::empty(0)), 1);
    }

    #[test]
    fn matching_indicator_weighs_relations_equally() {
        for (_, m) in catalog::all() {
            let q = quiver_of(&m);
            for d in enumerate_matchings(&m) {
                let chi = d.indicator(m.num_edges());
                for r in relations(&q) {
                    let expected = if d.contains(r.arrow) { 0 } else { 1 };
                    assert_eq!(evaluate_weight(&chi, &r.plus), expected);
                    assert_eq!(evaluate_weight(&chi, &r.minus), expected);
                }
            }
        }
    }
}
