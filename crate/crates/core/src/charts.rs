//! Torus-fixed 0/1 representations, their fundamental domains and local charts,
//! and the fan assembled from the charts.
//!
//! A candidate fixed point is a 0/1 representation whose nonzero arrows form a
//! connected spanning subquiver that lifts to the universal cover. The faces
//! of the lift form a fundamental domain `F`; the zero edges that meet another
//! zero edge form the graph `delta`, whose branch points on the boundary of
//! `F` decide the shape of the chart around the fixed point.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heights::LatticePolygon;
use crate::lattice::{cochar_lattice, split_by_reference, CocharLattice, IntMatrix, Splitting};
use crate::matchings::PerfectMatching;
use crate::quiver::{p_minus, p_plus, quiver_from_faces, Quiver};
use crate::stability::{is_generic, is_stable, Theta, ZeroOneRep};
use crate::tiling::{cells_within, compute_faces, Check, Color, Dart, DimerModel, FaceMap, Offset};

/// Exhaustive candidate search refuses quivers with more arrows than this.
pub const ARROW_LIMIT: usize = 24;

/// Radius of the cover patch on which the boundary equation is checked.
const PATCH_RADIUS: i64 = 2;

/// A gauge-fixed 0/1 representation together with the lift of its support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointCandidate {
    pub rep: ZeroOneRep,
    /// Cell of the lifted face for each quiver vertex; vertex 0 sits in cell 0.
    pub lift: Vec<Offset>,
    /// BFS tree of the support: `(parent, arrow, +1)` if the arrow points from parent to child.
    #[serde(skip)]
    tree_parent: Vec<Option<(usize, usize, i8)>>,
}

impl FixedPointCandidate {
    pub fn zero_arrows(&self, q: &Quiver) -> Vec<usize> {
        q.arrows
            .iter()
            .map(|a| a.edge)
            .filter(|&e| !self.rep.is_nonzero(e))
            .collect()
    }

    /// Signed arrow count along the tree path from vertex 0 to `v`.
    fn potential(&self, v: usize, n: usize) -> Vec<i64> {
        let mut p = vec![0i64; n];
        let mut cur = v;
        while let Some((parent, a, sign)) = self.tree_parent[cur] {
            p[a] += i64::from(sign);
            cur = parent;
        }
        p
    }

    /// The same candidate with its lift moved by `m`.
    pub fn translated(&self, m: Offset) -> Self {
        let mut c = self.clone();
        c.lift.iter_mut().for_each(|x| *x += m);
        c
    }
}

struct Support {
    lift: Vec<Offset>,
    tree_parent: Vec<Option<(usize, usize, i8)>>,
}

/// BFS over the nonzero arrows; `None` if the support is not connected and
/// spanning or some cycle of it is not null-homologous.
fn lift_support(q: &Quiver, rep: &ZeroOneRep) -> Option<Support> {
    let n = q.num_vertices();
    let mut lift: Vec<Option<Offset>> = vec![None; n];
    let mut tree_parent = vec![None; n];
    if n == 0 {
        return None;
    }
    lift[0] = Some(Offset::ZERO);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let cell = lift[v].expect("queued vertices are placed");
        for a in &q.arrows {
            if !rep.is_nonzero(a.edge) {
                continue;
            }
            let step = if a.source == v && lift[a.target].is_none() {
                Some((a.target, cell + a.displacement, 1))
            } else if a.target == v && lift[a.source].is_none() {
                Some((a.source, cell - a.displacement, -1))
            } else {
                None
            };
            if let Some((u, c, sign)) = step {
                lift[u] = Some(c);
                tree_parent[u] = Some((v, a.edge, sign));
                queue.push_back(u);
            }
        }
    }
    let lift: Vec<Offset> = lift.into_iter().collect::<Option<_>>()?;
    let closes = q.arrows.iter().all(|a| {
        !rep.is_nonzero(a.edge) || lift[a.target] == lift[a.source] + a.displacement
    });
    closes.then_some(Support { lift, tree_parent })
}

/// Every cocharacter acts trivially once gauge-fixed along the support tree.
fn is_torus_fixed(lattice: &CocharLattice, q: &Quiver, c: &FixedPointCandidate) -> bool {
    let n = q.arrows.len();
    let pots: Vec<Vec<i64>> = (0..q.num_vertices()).map(|v| c.potential(v, n)).collect();
    lattice.basis.iter().all(|b| {
        let g: Vec<i64> = pots
            .iter()
            .map(|p| p.iter().zip(b).map(|(x, y)| x * y).sum())
            .collect();
        q.arrows
            .iter()
            .filter(|a| c.rep.is_nonzero(a.edge))
            .all(|a| b[a.edge] == g[a.target] - g[a.source])
    })
}

fn check_full(q: &Quiver) -> Result<()> {
    if q.arrows.iter().enumerate().any(|(i, a)| a.edge != i) {
        return Err(Error::Argument("chart computations need the full quiver of a model".into()));
    }
    Ok(())
}

/// All candidate torus-fixed points for a generic `theta`, by increasing
/// bitmask of nonzero arrows.
pub fn enumerate_fixed_candidates(
    q: &Quiver,
    lattice: &CocharLattice,
    theta: &Theta,
) -> Result<Vec<FixedPointCandidate>> {
    check_full(q)?;
    let n = q.arrows.len();
    if n > ARROW_LIMIT {
        return Err(Error::Capacity {
            what: "arrows",
            got: n,
            limit: ARROW_LIMIT,
            hint: "",
        });
    }
    if !is_generic(q, theta)? {
        return Err(Error::Precondition("theta is not generic".into()));
    }
    let mask_of = |p: &crate::quiver::PathSeq| p.traversal().fold(0u64, |m, a| m | 1 << a);
    let mut rel = Vec::with_capacity(n);
    for a in &q.arrows {
        rel.push((mask_of(&p_plus(q, a.edge)?), mask_of(&p_minus(q, a.edge)?)));
    }
    let mut out = Vec::new();
    for mask in 0u64..1 << n {
        if rel
            .iter()
            .any(|&(p, m)| (p & mask == p) != (m & mask == m))
        {
            continue;
        }
        let rep = ZeroOneRep::from_mask(mask, n);
        let Some(support) = lift_support(q, &rep) else {
            continue;
        };
        let cand = FixedPointCandidate {
            rep,
            lift: support.lift,
            tree_parent: support.tree_parent,
        };
        if is_torus_fixed(lattice, q, &cand) && is_stable(q, &cand.rep, theta)? {
            out.push(cand);
        }
    }
    Ok(out)
}

/// A dart of the universal cover: a dart of the model and the cell of its tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LiftedDart {
    pub dart: Dart,
    pub tail_cell: Offset,
}

impl LiftedDart {
    fn head_cell(self, model: &DimerModel) -> Offset {
        self.tail_cell + model.dart_offset(self.dart)
    }

    /// `(edge, cell of its black end)`, the identity of the underlying edge lift.
    pub fn edge_lift(self, model: &DimerModel) -> (usize, Offset) {
        match self.dart.direction() {
            crate::tiling::Direction::BlackToWhite => (self.dart.edge(), self.tail_cell),
            crate::tiling::Direction::WhiteToBlack => (self.dart.edge(), self.head_cell(model)),
        }
    }
}

/// A vertex of the cover on the boundary of `F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryPoint {
    pub vertex: usize,
    pub cell: Offset,
    pub color: Color,
    /// Number of `delta` edges at the point.
    pub valency: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalDomain {
    /// `(quiver vertex, cell)` for each lifted face.
    pub faces: Vec<(usize, Offset)>,
    /// Boundary darts counterclockwise (the domain on their left).
    pub boundary: Vec<LiftedDart>,
    /// Tails of the boundary darts, in the same order.
    pub points: Vec<BoundaryPoint>,
    /// Edges of the model whose lifts make up `delta`.
    pub delta_edges: Vec<usize>,
}

fn face_darts<'a>(
    faces: &'a FaceMap,
    f: usize,
    cell: Offset,
) -> impl Iterator<Item = LiftedDart> + 'a {
    faces.faces[f].darts().map(move |d| LiftedDart {
        dart: d,
        tail_cell: cell + faces.tail_cell[d.0],
    })
}

/// Zero edges sharing an endpoint with another zero edge, and the number of
/// such edges at each vertex.
fn delta_graph(model: &DimerModel, rep: &ZeroOneRep) -> (Vec<usize>, Vec<usize>) {
    let zero_at: Vec<usize> = (0..model.num_vertices())
        .map(|v| model.rotation(v).iter().filter(|&&e| !rep.is_nonzero(e)).count())
        .collect();
    let delta: Vec<usize> = (0..model.num_edges())
        .filter(|&e| {
            let x = &model.edges()[e];
            !rep.is_nonzero(e) && (zero_at[x.black] >= 2 || zero_at[x.white] >= 2)
        })
        .collect();
    let valency = (0..model.num_vertices())
        .map(|v| model.rotation(v).iter().filter(|e| delta.contains(e)).count())
        .collect();
    (delta, valency)
}

pub fn fundamental_domain(
    model: &DimerModel,
    faces: &FaceMap,
    c: &FixedPointCandidate,
) -> Result<FundamentalDomain> {
    let reject = |why: String| Error::Invariant(format!("fundamental domain: {why}"));
    if c.lift.len() != faces.faces.len() {
        return Err(Error::Argument("candidate does not match the face map".into()));
    }
    let lifted: Vec<(usize, Offset)> = c.lift.iter().copied().enumerate().collect();
    let mut sides: BTreeMap<(usize, Offset), Vec<LiftedDart>> = BTreeMap::new();
    for &(f, cell) in &lifted {
        for ld in face_darts(faces, f, cell) {
            sides.entry(ld.edge_lift(model)).or_default().push(ld);
        }
    }
    let is_boundary = |ld: LiftedDart| sides[&ld.edge_lift(model)].len() == 1;
    let boundary_darts: BTreeSet<LiftedDart> = sides
        .values()
        .filter(|v| v.len() == 1)
        .map(|v| v[0])
        .collect();
    let Some(&start) = boundary_darts.iter().next() else {
        return Err(reject("the lifted faces have no boundary".into()));
    };

    let max_turns = model.num_edges() * 2 + 1;
    let next_boundary = |ld: LiftedDart| -> Result<LiftedDart> {
        let pivot = ld.head_cell(model);
        let mut cand = LiftedDart {
            dart: model.face_next(ld.dart),
            tail_cell: pivot,
        };
        for _ in 0..max_turns {
            if is_boundary(cand) {
                return Ok(cand);
            }
            cand = LiftedDart {
                dart: model.face_next(cand.dart.twin()),
                tail_cell: pivot,
            };
        }
        Err(reject("boundary walk does not close around a vertex".into()))
    };
    let mut boundary = vec![start];
    let mut cur = next_boundary(start)?;
    while cur != start {
        if boundary.len() > boundary_darts.len() {
            return Err(reject("boundary walk does not return".into()));
        }
        boundary.push(cur);
        cur = next_boundary(cur)?;
    }
    if boundary.len() != boundary_darts.len() {
        return Err(reject(format!(
            "boundary has several components ({} of {} boundary edges on the first)",
            boundary.len(),
            boundary_darts.len()
        )));
    }

    let (delta_edges, valency) = delta_graph(model, &c.rep);
    // The boundary equation on a patch: delta lifts are exactly the translates of the boundary.
    let patch: Vec<Offset> = cells_within(PATCH_RADIUS).collect();
    let delta_patch: BTreeSet<(usize, Offset)> = delta_edges
        .iter()
        .flat_map(|&e| patch.iter().map(move |&m| (e, m)))
        .collect();
    let translates: BTreeSet<(usize, Offset)> = boundary
        .iter()
        .flat_map(|ld| {
            let e = ld.dart.edge();
            patch.iter().map(move |&m| (e, m))
        })
        .collect();
    if delta_patch != translates {
        return Err(reject("delta is not the union of translates of the boundary".into()));
    }
    let interior_delta = sides
        .iter()
        .filter(|(_, v)| v.len() == 2)
        .any(|((e, _), _)| delta_edges.contains(e));
    if interior_delta {
        return Err(reject("delta meets the interior of the domain".into()));
    }

    let points = boundary
        .iter()
        .map(|ld| {
            let v = model.tail(ld.dart);
            BoundaryPoint {
                vertex: v,
                cell: ld.tail_cell,
                color: model.vertices()[v].color,
                valency: valency[v],
            }
        })
        .collect();
    Ok(FundamentalDomain {
        faces: lifted,
        boundary,
        points,
        delta_edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChartCase {
    FourQuadrivalent,
    SixTrivalentOppositeColors,
    SixTrivalentSameColors,
}

impl ChartCase {
    pub fn is_smooth(self) -> bool {
        self == ChartCase::SixTrivalentOppositeColors
    }

    pub fn description(self) -> &'static str {
        match self {
            ChartCase::FourQuadrivalent => "union of point and 2-torus, t₁t₃ = t₂t₄ = 1",
            ChartCase::SixTrivalentOppositeColors => "affine 3-space",
            ChartCase::SixTrivalentSameColors => "point ∪ {t₁t₂t₃ = 1}",
        }
    }

    /// Number of coordinate edges at the first marked point.
    pub fn arity(self) -> usize {
        match self {
            ChartCase::FourQuadrivalent => 4,
            _ => 3,
        }
    }
}

/// Classification of a boundary valency profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileClass {
    pub case: ChartCase,
    /// Indices of the points of valency at least three, in boundary order.
    pub marked: Vec<usize>,
}

/// Classifies `(valency, color)` of the boundary points listed counterclockwise.
///
/// The branch points cut the boundary into a polygon; the Euler count
/// `1 - sum(a_n)/2 + sum(a_n/n) = 0` must hold and only four quadrivalent or
/// six trivalent points are accepted.
pub fn classify_profile(points: &[(usize, Color)]) -> Result<ProfileClass> {
    let marked: Vec<usize> = (0..points.len()).filter(|&i| points[i].0 >= 3).collect();
    let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
    for &i in &marked {
        *counts.entry(points[i].0).or_insert(0) += 1;
    }
    let euler = Rational64::from(1)
        + counts
            .iter()
            .map(|(&n, &a)| Rational64::new(a, n as i64) - Rational64::new(a, 2))
            .sum::<Rational64>();
    if !euler.is_zero() {
        return Err(Error::Invariant(format!(
            "valency profile {counts:?} violates the Euler count (value {euler})"
        )));
    }
    let case = match counts.iter().map(|(&n, &a)| (n, a)).collect::<Vec<_>>().as_slice() {
        [(4, 4)] => ChartCase::FourQuadrivalent,
        [(3, 6)] => {
            if points[marked[0]].1 == points[marked[1]].1 {
                ChartCase::SixTrivalentSameColors
            } else {
                ChartCase::SixTrivalentOppositeColors
            }
        }
        _ => {
            return Err(Error::Invariant(format!(
                "valency profile {counts:?} is neither four quadrivalent nor six trivalent points"
            )))
        }
    };
    Ok(ProfileClass { case, marked })
}

/// An edge of the cover: the model edge and the cell of its black end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeLiftRef {
    pub edge: usize,
    pub black_cell: Offset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartReport {
    pub case: ChartCase,
    /// `e_1, e_2, ...` counterclockwise around the first marked point, `e_1` on
    /// the boundary towards the second marked point.
    pub coordinate_edges: Vec<EdgeLiftRef>,
    pub smooth: bool,
    pub chart_description: String,
    pub marked_points: Vec<BoundaryPoint>,
    pub boundary_length: usize,
}

pub fn classify_chart(model: &DimerModel, domain: &FundamentalDomain) -> Result<ChartReport> {
    let profile: Vec<(usize, Color)> = domain.points.iter().map(|p| (p.valency, p.color)).collect();
    let class = classify_profile(&profile)?;
    let first = class.marked[0];
    let v1 = &domain.points[first];
    let out = domain.boundary[first];
    let e1 = out.dart.edge();
    let mut coordinate_edges = Vec::with_capacity(class.case.arity());
    let deg = model.degree(v1.vertex) as isize;
    for k in 0..deg {
        let e = model.rotate(e1, v1.color, k);
        if k > 0 && !domain.delta_edges.contains(&e) {
            continue;
        }
        let ld = LiftedDart {
            dart: model.dart_from(v1.vertex, e),
            tail_cell: v1.cell,
        };
        let (edge, black_cell) = ld.edge_lift(model);
        coordinate_edges.push(EdgeLiftRef { edge, black_cell });
        if coordinate_edges.len() == class.case.arity() {
            break;
        }
    }
    if coordinate_edges.len() != class.case.arity() {
        return Err(Error::Invariant(format!(
            "marked point has {} delta edges, expected {}",
            coordinate_edges.len(),
            class.case.arity()
        )));
    }
    Ok(ChartReport {
        case: class.case,
        coordinate_edges,
        smooth: class.case.is_smooth(),
        chart_description: class.case.description().to_string(),
        marked_points: class.marked.iter().map(|&i| domain.points[i].clone()).collect(),
        boundary_length: domain.boundary.len(),
    })
}

/// The characters `t_i = phi(e_i)` of a smooth chart, as functionals on the
/// basis of `N`: weight on `e_i` minus the weight the gauge moves onto it.
pub fn chart_characters(
    lattice: &CocharLattice,
    q: &Quiver,
    c: &FixedPointCandidate,
    chart: &ChartReport,
) -> Result<IntMatrix> {
    if !chart.smooth {
        return Err(Error::Precondition(format!(
            "chart characters need a smooth chart, got {:?}",
            chart.case
        )));
    }
    if lattice.rank != 3 {
        return Err(Error::Invariant(format!(
            "smooth chart on a torus of dimension {}",
            lattice.rank
        )));
    }
    let n = q.arrows.len();
    let mut rows = Vec::with_capacity(3);
    for e in &chart.coordinate_edges {
        let a = q.arrow(e.edge)?;
        let mut f = vec![0i64; n];
        f[e.edge] += 1;
        let (pt, ps) = (c.potential(a.target, n), c.potential(a.source, n));
        for i in 0..n {
            f[i] -= pt[i] - ps[i];
        }
        rows.push(lattice.functional(&f)?);
    }
    Ok(IntMatrix::from_rows(&rows))
}

/// A maximal cone of the fan: the cone in `N` dual to the chart characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartCone {
    pub characters: IntMatrix,
    /// Ray generators in basis coordinates of `N`, one per character.
    pub rays: Vec<Vec<i64>>,
    /// The rays under the reference splitting, `(pi_x, pi_y, level)`.
    pub split_rays: Vec<[i64; 3]>,
}

/// Rays are the columns of the inverse character matrix.
pub fn chart_cone(characters: &IntMatrix, split: &Splitting) -> Result<ChartCone> {
    let inv = characters.inverse().ok_or_else(|| {
        Error::Invariant(format!(
            "chart characters are not a lattice basis (determinant {})",
            characters.det()
        ))
    })?;
    let rays: Vec<Vec<i64>> = (0..inv.cols()).map(|j| inv.col(j)).collect();
    let split_rays = rays.iter().map(|r| split.apply(r)).collect();
    Ok(ChartCone {
        characters: characters.clone(),
        rays,
        split_rays,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fan {
    pub cones: Vec<ChartCone>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub checks: Vec<Check>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn cross2(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Some edge line of one triangle weakly separates it from the other.
fn interiors_disjoint(s: &[[i64; 2]; 3], t: &[[i64; 2]; 3]) -> bool {
    let separated_by = |p: &[[i64; 2]; 3], r: &[[i64; 2]; 3]| {
        let orient = cross2(p[0], p[1], p[2]).signum();
        (0..3).any(|i| {
            let (a, b) = (p[i], p[(i + 1) % 3]);
            r.iter().all(|&x| cross2(a, b, x) * orient <= 0)
        })
    };
    separated_by(s, t) || separated_by(t, s)
}

/// Unimodularity, crepancy (every ray at level one) and an exact cover of the
/// cone over `polygon`, checked on the projected triangles.
pub fn verify_crepant(fan: &Fan, polygon: &LatticePolygon) -> CertificateReport {
    let mut checks = Vec::new();
    let bad_det: Vec<String> = fan
        .cones
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let d = IntMatrix::from_cols(&c.rays).det();
            (d.abs() != 1).then(|| format!("cone {i}: determinant {d}"))
        })
        .collect();
    checks.push(Check {
        name: "unimodular",
        passed: bad_det.is_empty() && !fan.cones.is_empty(),
        detail: if fan.cones.is_empty() {
            "fan has no cones".into()
        } else if bad_det.is_empty() {
            format!("{} cones, all of determinant ±1", fan.cones.len())
        } else {
            bad_det.join("; ")
        },
    });
    let bad_level: Vec<String> = fan
        .cones
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            c.split_rays
                .iter()
                .filter(|r| r[2] != 1)
                .map(move |r| format!("cone {i}: ray {r:?} at level {}", r[2]))
        })
        .collect();
    checks.push(Check {
        name: "level_one",
        passed: bad_level.is_empty(),
        detail: if bad_level.is_empty() {
            "every ray has level 1".into()
        } else {
            bad_level.join("; ")
        },
    });
    let triangles: Vec<[[i64; 2]; 3]> = fan
        .cones
        .iter()
        .map(|c| {
            let p = |r: [i64; 3]| [r[0], r[1]];
            [p(c.split_rays[0]), p(c.split_rays[1]), p(c.split_rays[2])]
        })
        .collect();
    let mut problems = Vec::new();
    for (i, t) in triangles.iter().enumerate() {
        if t.iter().any(|&[x, y]| !polygon.contains(Offset::new(x, y))) {
            problems.push(format!("cone {i} leaves the polygon"));
        }
        for (j, s) in triangles.iter().enumerate().skip(i + 1) {
            if !interiors_disjoint(t, s) {
                problems.push(format!("cones {i} and {j} overlap"));
            }
        }
    }
    let volume: i64 = triangles.iter().map(|t| cross2(t[0], t[1], t[2]).abs()).sum();
    if volume != polygon.area2() {
        problems.push(format!(
            "normalized volume {volume} differs from polygon area {}",
            polygon.area2()
        ));
    }
    checks.push(Check {
        name: "cover",
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{} triangles tile the polygon exactly", triangles.len())
        } else {
            problems.join("; ")
        },
    });
    CertificateReport { checks }
}

/// Change of chart coordinates `X_t X_s^{-1}` and its determinant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub matrix: IntMatrix,
    pub det: i64,
}

pub fn transition_matrix(from: &ChartCone, to: &ChartCone) -> Result<IntMatrix> {
    let inv = from
        .characters
        .inverse()
        .ok_or_else(|| Error::Invariant("source characters are not invertible".into()))?;
    Ok(&to.characters * &inv)
}

/// One candidate with its domain and chart.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub candidate: FixedPointCandidate,
    pub zero_arrows: Vec<String>,
    pub domain: FundamentalDomain,
    pub chart: ChartReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<ChartCone>,
}

/// Fixed points, charts and the fan certificate for one stability parameter.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointAnalysis {
    pub torus_dimension: usize,
    pub fixed_points: Vec<FixedPointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan: Option<Fan>,
    pub certificate: CertificateReport,
    pub transitions: Vec<Transition>,
    /// Sum of the chart characters, per chart.
    pub product_characters: Vec<Vec<i64>>,
}

impl FixedPointAnalysis {
    pub fn product_character_shared(&self) -> bool {
        self.product_characters.windows(2).all(|w| w[0] == w[1])
    }
}

/// Runs the whole pipeline for `theta`, splitting `N` by the reference `d0`.
pub fn analyze_fixed_points(
    model: &DimerModel,
    theta: &Theta,
    d0: &PerfectMatching,
    polygon: &LatticePolygon,
) -> Result<FixedPointAnalysis> {
    let faces = compute_faces(model);
    let q = quiver_from_faces(model, &faces);
    let lattice = cochar_lattice(&q)?;
    let candidates = enumerate_fixed_candidates(&q, &lattice, theta)?;
    let mut fixed_points = Vec::with_capacity(candidates.len());
    for c in candidates {
        let domain = fundamental_domain(model, &faces, &c)?;
        let chart = classify_chart(model, &domain)?;
        fixed_points.push(FixedPointReport {
            zero_arrows: c
                .zero_arrows(&q)
                .into_iter()
                .map(|e| q.arrows[e].id.clone())
                .collect(),
            candidate: c,
            domain,
            chart,
            cone: None,
        });
    }
    let all_smooth = fixed_points.iter().all(|f| f.chart.smooth);
    if all_smooth && lattice.rank != 3 && !fixed_points.is_empty() {
        return Err(Error::Invariant(format!(
            "smooth charts on a torus of dimension {}",
            lattice.rank
        )));
    }
    let mut analysis = FixedPointAnalysis {
        torus_dimension: lattice.rank,
        fixed_points,
        fan: None,
        certificate: CertificateReport { checks: Vec::new() },
        transitions: Vec::new(),
        product_characters: Vec::new(),
    };
    if !all_smooth || lattice.rank != 3 || polygon.is_degenerate() {
        analysis.certificate.checks.push(Check {
            name: "smooth_charts",
            passed: false,
            detail: format!(
                "fan not assembled: torus dimension {}, {} of {} charts smooth",
                lattice.rank,
                analysis.fixed_points.iter().filter(|f| f.chart.smooth).count(),
                analysis.fixed_points.len()
            ),
        });
        return Ok(analysis);
    }
    let split = split_by_reference(&lattice, model, &q, d0)?;
    let mut cones = Vec::new();
    for fp in &mut analysis.fixed_points {
        let x = chart_characters(&lattice, &q, &fp.candidate, &fp.chart)?;
        let cone = chart_cone(&x, &split)?;
        analysis.product_characters.push(
            (0..3).map(|j| (0..3).map(|i| x[(i, j)]).sum()).collect(),
        );
        fp.cone = Some(cone.clone());
        cones.push(cone);
    }
    for s in 0..cones.len() {
        for t in 0..cones.len() {
            if s != t {
                let matrix = transition_matrix(&cones[s], &cones[t])?;
                analysis.transitions.push(Transition {
                    from: s,
                    to: t,
                    det: matrix.det(),
                    matrix,
                });
            }
        }
    }
    let fan = Fan { cones };
    analysis.certificate = verify_crepant(&fan, polygon);
    analysis.fan = Some(fan);
    Ok(analysis)
}
