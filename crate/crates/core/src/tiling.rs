//! Dimer models as doubly periodic bipartite combinatorial maps.
//!
//! A model is stored on the fundamental cell of `T = R^2 / Z^2`: every edge
//! joins its black endpoint in cell `(0, 0)` to its white endpoint translated
//! by the edge offset. The embedding is carried by the rotation system, the
//! counterclockwise cyclic order of edges around each vertex.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_integer::Integer;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};

/// A translation in the deck group `Z^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Offset {
    pub dx: i64,
    pub dy: i64,
}

impl Offset {
    pub const ZERO: Offset = Offset { dx: 0, dy: 0 };

    pub const fn new(dx: i64, dy: i64) -> Self {
        Offset { dx, dy }
    }

    /// `det(self, other)`.
    pub fn cross(self, other: Offset) -> i64 {
        self.dx * other.dy - self.dy * other.dx
    }

    pub fn chebyshev(self) -> i64 {
        self.dx.abs().max(self.dy.abs())
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dx, self.dy)
    }
}

impl Add for Offset {
    type Output = Offset;
    fn add(self, o: Offset) -> Offset {
        Offset::new(self.dx + o.dx, self.dy + o.dy)
    }
}

impl Sub for Offset {
    type Output = Offset;
    fn sub(self, o: Offset) -> Offset {
        Offset::new(self.dx - o.dx, self.dy - o.dy)
    }
}

impl Neg for Offset {
    type Output = Offset;
    fn neg(self) -> Offset {
        Offset::new(-self.dx, -self.dy)
    }
}

impl Mul<i64> for Offset {
    type Output = Offset;
    fn mul(self, k: i64) -> Offset {
        Offset::new(self.dx * k, self.dy * k)
    }
}

impl AddAssign for Offset {
    fn add_assign(&mut self, o: Offset) {
        *self = *self + o;
    }
}

impl SubAssign for Offset {
    fn sub_assign(&mut self, o: Offset) {
        *self = *self - o;
    }
}

impl std::iter::Sum for Offset {
    fn sum<I: Iterator<Item = Offset>>(iter: I) -> Offset {
        iter.fold(Offset::ZERO, Add::add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Black => "black",
            Color::White => "white",
        })
    }
}

/// Rendering hint in `[0,1) x [0,1)`.
pub type Position = (Rational64, Rational64);

#[derive(Debug, Clone, PartialEq)]
pub struct DimerVertex {
    pub id: String,
    pub color: Color,
    pub pos: Option<Position>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimerEdge {
    pub id: String,
    /// Index of the black endpoint.
    pub black: usize,
    /// Index of the white endpoint.
    pub white: usize,
    /// The white endpoint sits in cell `offset` relative to the black one.
    pub offset: Offset,
}

/// An edge as written in a model document, endpoints named by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub black: String,
    pub white: String,
    pub offset: Offset,
}

/// Direction in which a face boundary traverses an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    BlackToWhite,
    WhiteToBlack,
}

/// One side of an edge, oriented away from its tail vertex.
///
/// Dart `2e` runs black to white along edge `e`, dart `2e + 1` runs white to black.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Dart(pub usize);

impl Dart {
    pub fn new(edge: usize, dir: Direction) -> Dart {
        match dir {
            Direction::BlackToWhite => Dart(2 * edge),
            Direction::WhiteToBlack => Dart(2 * edge + 1),
        }
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn direction(self) -> Direction {
        if self.0.is_multiple_of(2) {
            Direction::BlackToWhite
        } else {
            Direction::WhiteToBlack
        }
    }

    pub fn twin(self) -> Dart {
        Dart(self.0 ^ 1)
    }
}

/// A bipartite combinatorial map on the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct DimerModel {
    vertices: Vec<DimerVertex>,
    edges: Vec<DimerEdge>,
    rotation: Vec<Vec<usize>>,
    /// Position of each edge in the rotation of its black (resp. white) endpoint.
    black_slot: Vec<usize>,
    white_slot: Vec<usize>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl DimerModel {
    /// Builds a model, enforcing referential integrity and rotation-system consistency.
    pub fn new(
        vertices: Vec<DimerVertex>,
        edges: Vec<EdgeSpec>,
        rotation: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.id.is_empty() {
                return Err(Error::structural("", "", "empty vertex id"));
            }
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return Err(Error::structural(&v.id, "", "duplicate vertex id"));
            }
            if let Some((x, y)) = v.pos {
                let unit = |r: Rational64| r >= Rational64::from(0) && r < Rational64::from(1);
                if !unit(x) || !unit(y) {
                    return Err(Error::structural(&v.id, "", "position outside [0,1) x [0,1)"));
                }
            }
        }
        let mut seen_pos = HashSet::new();
        for v in &vertices {
            if let Some(p) = v.pos {
                if !seen_pos.insert(p) {
                    return Err(Error::structural(&v.id, "", "position shared with another vertex"));
                }
            }
        }

        let lookup = |id: &str, edge: &str| -> Result<usize> {
            vertex_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::structural(id, edge, "unknown vertex"))
        };
        let mut edge_index = HashMap::new();
        let mut triples = HashSet::new();
        let mut built = Vec::with_capacity(edges.len());
        for (i, e) in edges.into_iter().enumerate() {
            if e.id.is_empty() {
                return Err(Error::structural(&e.black, "", "empty edge id"));
            }
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::structural(&e.black, &e.id, "duplicate edge id"));
            }
            let b = lookup(&e.black, &e.id)?;
            let w = lookup(&e.white, &e.id)?;
            if vertices[b].color != Color::Black {
                return Err(Error::structural(&e.black, &e.id, "black endpoint is not black"));
            }
            if vertices[w].color != Color::White {
                return Err(Error::structural(&e.white, &e.id, "white endpoint is not white"));
            }
            if !triples.insert((b, w, e.offset)) {
                return Err(Error::structural(
                    &e.black,
                    &e.id,
                    "another edge has the same endpoints and offset",
                ));
            }
            built.push(DimerEdge {
                id: e.id,
                black: b,
                white: w,
                offset: e.offset,
            });
        }

        for key in rotation.keys() {
            if !vertex_index.contains_key(key) {
                return Err(Error::structural(key, "", "rotation given for unknown vertex"));
            }
        }
        let mut rot = vec![Vec::new(); vertices.len()];
        let mut black_slot = vec![usize::MAX; built.len()];
        let mut white_slot = vec![usize::MAX; built.len()];
        for (vi, v) in vertices.iter().enumerate() {
            let Some(order) = rotation.get(&v.id) else {
                return Err(Error::structural(&v.id, "", "vertex has no rotation entry"));
            };
            if order.is_empty() {
                return Err(Error::structural(&v.id, "", "vertex has degree 0"));
            }
            for (slot, eid) in order.iter().enumerate() {
                let Some(&ei) = edge_index.get(eid) else {
                    return Err(Error::structural(&v.id, eid, "rotation names an unknown edge"));
                };
                let e = &built[ei];
                let slots = match v.color {
                    Color::Black if e.black == vi => &mut black_slot,
                    Color::White if e.white == vi => &mut white_slot,
                    _ => {
                        return Err(Error::structural(&v.id, eid, "edge is not incident to vertex"))
                    }
                };
                if slots[ei] != usize::MAX {
                    return Err(Error::structural(&v.id, eid, "edge listed twice in rotation"));
                }
                slots[ei] = slot;
                rot[vi].push(ei);
            }
        }
        for (ei, e) in built.iter().enumerate() {
            if black_slot[ei] == usize::MAX {
                return Err(Error::structural(
                    &vertices[e.black].id,
                    &e.id,
                    "edge missing from rotation of its black endpoint",
                ));
            }
            if white_slot[ei] == usize::MAX {
                return Err(Error::structural(
                    &vertices[e.white].id,
                    &e.id,
                    "edge missing from rotation of its white endpoint",
                ));
            }
        }

        Ok(DimerModel {
            vertices,
            edges: built,
            rotation: rot,
            black_slot,
            white_slot,
            vertex_index,
            edge_index,
        })
    }

    pub fn vertices(&self) -> &[DimerVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[DimerEdge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Counterclockwise cyclic order of edges around vertex `v`.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v].id
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edges[e].id
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_by_id(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn blacks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].color == Color::Black)
    }

    pub fn whites(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].color == Color::White)
    }

    pub fn tail(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge()];
        match d.direction() {
            Direction::BlackToWhite => e.black,
            Direction::WhiteToBlack => e.white,
        }
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail(d.twin())
    }

    /// Cell of the head relative to the tail.
    pub fn dart_offset(&self, d: Dart) -> Offset {
        let off = self.edges[d.edge()].offset;
        match d.direction() {
            Direction::BlackToWhite => off,
            Direction::WhiteToBlack => -off,
        }
    }

    /// Dart leaving vertex `v` along edge `e`.
    pub fn dart_from(&self, v: usize, e: usize) -> Dart {
        match self.vertices[v].color {
            Color::Black => Dart::new(e, Direction::BlackToWhite),
            Color::White => Dart::new(e, Direction::WhiteToBlack),
        }
    }

    /// Position of edge `e` in the rotation at its endpoint of color `c`.
    pub fn slot(&self, e: usize, c: Color) -> usize {
        match c {
            Color::Black => self.black_slot[e],
            Color::White => self.white_slot[e],
        }
    }

    /// Edge `steps` positions counterclockwise from `e` around its endpoint of color `c`.
    pub fn rotate(&self, e: usize, c: Color, steps: isize) -> usize {
        let v = match c {
            Color::Black => self.edges[e].black,
            Color::White => self.edges[e].white,
        };
        let ring = &self.rotation[v];
        let n = ring.len() as isize;
        let i = self.slot(e, c) as isize;
        ring[(i + steps).rem_euclid(n) as usize]
    }

    /// Next dart along the boundary of the face lying to the left of `d`.
    pub fn face_next(&self, d: Dart) -> Dart {
        let v = self.head(d);
        let next = self.rotate(d.edge(), self.vertices[v].color, -1);
        self.dart_from(v, next)
    }

    /// Vertex partition count `(|B|, |W|)`.
    pub fn color_counts(&self) -> (usize, usize) {
        let b = self.blacks().count();
        (b, self.vertices.len() - b)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &e in &self.rotation[v] {
                let u = self.tail(self.dart_from(v, e).twin());
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Cells of the vertex lifts reached along a BFS tree from vertex 0, and the
    /// homology classes of the fundamental cycles of the non-tree edges.
    fn cycle_classes(&self) -> Vec<Offset> {
        let n = self.vertices.len();
        let mut cell: Vec<Option<Offset>> = vec![None; n];
        let mut tree_edge = vec![false; self.edges.len()];
        if n == 0 {
            return Vec::new();
        }
        cell[0] = Some(Offset::ZERO);
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let here = cell[v].expect("queued vertices have cells");
            for &e in &self.rotation[v] {
                let d = self.dart_from(v, e);
                let u = self.head(d);
                if cell[u].is_none() {
                    cell[u] = Some(here + self.dart_offset(d));
                    tree_edge[e] = true;
                    queue.push_back(u);
                }
            }
        }
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !tree_edge[*i])
            .filter_map(|(_, e)| Some(cell[e.black]? + e.offset - cell[e.white]?))
            .collect()
    }
}

/// A face of the map: a cyclic sequence of boundary sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: String,
    /// Edge index and traversal direction, with the face on the left.
    pub boundary: Vec<(usize, Direction)>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + Clone + '_ {
        self.boundary.iter().map(|&(e, d)| Dart::new(e, d))
    }
}

/// Faces of a model together with the dart-to-face incidence.
///
/// Each face is anchored at the tail of its first dart, placed in cell `(0,0)`.
/// `tail_cell[d]` is the cell of the tail of dart `d` in that anchored lift.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceMap {
    pub faces: Vec<Face>,
    pub dart_face: Vec<usize>,
    pub tail_cell: Vec<Offset>,
}

impl FaceMap {
    pub fn face_of(&self, d: Dart) -> usize {
        self.dart_face[d.0]
    }

    /// Signed offset sum around face `f`.
    pub fn holonomy(&self, model: &DimerModel, f: usize) -> Offset {
        self.faces[f].darts().map(|d| model.dart_offset(d)).sum()
    }
}

/// Traces the faces of the map.
///
/// From a dart, the next boundary dart leaves its head along the edge preceding
/// it in the counterclockwise rotation, so each traced face lies to the left of
/// its darts. Faces are ordered by their smallest dart and start there.
pub fn compute_faces(model: &DimerModel) -> FaceMap {
    let nd = 2 * model.num_edges();
    let mut dart_face = vec![usize::MAX; nd];
    let mut tail_cell = vec![Offset::ZERO; nd];
    let mut faces = Vec::new();
    for start in 0..nd {
        if dart_face[start] != usize::MAX {
            continue;
        }
        let f = faces.len();
        let mut boundary = Vec::new();
        let mut d = Dart(start);
        let mut cell = Offset::ZERO;
        loop {
            dart_face[d.0] = f;
            tail_cell[d.0] = cell;
            boundary.push((d.edge(), d.direction()));
            cell += model.dart_offset(d);
            d = model.face_next(d);
            if d.0 == start {
                break;
            }
        }
        faces.push(Face {
            id: format!("f{f}"),
            boundary,
        });
    }
    FaceMap {
        faces,
        dart_face,
        tail_cell,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.is_valid() {
            return Ok(());
        }
        let msg = self
            .failures()
            .iter()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::InvalidModel(msg))
    }
}

/// Checks that the map is a dimer model: a cellular bipartite map on the torus
/// whose offsets record the homology of the embedding.
pub fn validate_model(model: &DimerModel) -> ValidationReport {
    let faces = compute_faces(model);
    let v = model.num_vertices() as i64;
    let e = model.num_edges() as i64;
    let f = faces.faces.len() as i64;
    let euler = v - e + f;
    let mut checks = Vec::new();

    let bad_colors: Vec<_> = model
        .edges()
        .iter()
        .filter(|x| {
            model.vertices[x.black].color != Color::Black
                || model.vertices[x.white].color != Color::White
        })
        .map(|x| x.id.clone())
        .collect();
    checks.push(Check {
        name: "bipartite",
        passed: bad_colors.is_empty(),
        detail: if bad_colors.is_empty() {
            "every edge joins a black and a white vertex".into()
        } else {
            format!("edges with bad endpoint colors: {}", bad_colors.join(", "))
        },
    });

    let rotation_ok = model.edges().iter().enumerate().all(|(i, x)| {
        model.rotation[x.black].get(model.black_slot[i]) == Some(&i)
            && model.rotation[x.white].get(model.white_slot[i]) == Some(&i)
    }) && model
        .rotation
        .iter()
        .all(|r| !r.is_empty() && r.iter().collect::<BTreeSet<_>>().len() == r.len());
    checks.push(Check {
        name: "rotation",
        passed: rotation_ok,
        detail: "each edge appears once around each endpoint".into(),
    });

    let connected = model.is_connected();
    checks.push(Check {
        name: "connected",
        passed: connected,
        detail: if connected {
            "underlying graph is connected".into()
        } else {
            "underlying graph is disconnected".into()
        },
    });

    checks.push(Check {
        name: "euler",
        passed: euler == 0,
        detail: format!("V - E + F = {v} - {e} + {f} = {euler}"),
    });

    let open: Vec<_> = (0..faces.faces.len())
        .filter(|&i| faces.holonomy(model, i) != Offset::ZERO)
        .map(|i| format!("{} sums to {}", faces.faces[i].id, faces.holonomy(model, i)))
        .collect();
    checks.push(Check {
        name: "face_offsets",
        passed: open.is_empty(),
        detail: if open.is_empty() {
            "every face boundary has offset sum (0, 0)".into()
        } else {
            open.join(", ")
        },
    });

    let classes = model.cycle_classes();
    let mut minor_gcd = 0i64;
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            minor_gcd = minor_gcd.gcd(&a.cross(*b));
        }
    }
    checks.push(Check {
        name: "homology",
        passed: minor_gcd == 1,
        detail: format!("cycle offsets generate a sublattice of index {minor_gcd} in Z^2"),
    });

    ValidationReport {
        vertices: model.num_vertices(),
        edges: model.num_edges(),
        faces: faces.faces.len(),
        euler,
        checks,
    }
}

/// Fails unless `model` passes every validation check.
pub fn ensure_valid(model: &DimerModel) -> Result<()> {
    validate_model(model).into_result()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexLift {
    pub vertex: usize,
    pub cell: Offset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeLift {
    pub edge: usize,
    pub black_cell: Offset,
    pub white_cell: Offset,
    /// The white endpoint falls outside the fragment.
    pub stub: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceLift {
    pub face: usize,
    pub anchor_cell: Offset,
}

/// A finite piece of the periodic lift to `R^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverFragment {
    pub center_face: usize,
    pub radius: i64,
    pub vertices: Vec<VertexLift>,
    pub edges: Vec<EdgeLift>,
    pub faces: Vec<FaceLift>,
}

/// Every cell within Chebyshev distance `radius` of the cell holding the anchored
/// lift of `center`.
pub fn cells_within(radius: i64) -> impl Iterator<Item = Offset> {
    (-radius..=radius).flat_map(move |dx| (-radius..=radius).map(move |dy| Offset::new(dx, dy)))
}

pub fn lift_patch(model: &DimerModel, center: &str, radius: i64) -> Result<CoverFragment> {
    if radius < 0 {
        return Err(Error::Argument(format!("radius must be nonnegative, got {radius}")));
    }
    let faces = compute_faces(model);
    let center_face = faces
        .faces
        .iter()
        .position(|f| f.id == center)
        .ok_or_else(|| Error::Argument(format!("unknown face `{center}`")))?;
    let inside = |c: Offset| c.chebyshev() <= radius;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut face_lifts = Vec::new();
    for cell in cells_within(radius) {
        for v in 0..model.num_vertices() {
            vertices.push(VertexLift { vertex: v, cell });
        }
        for (i, e) in model.edges().iter().enumerate() {
            let white_cell = cell + e.offset;
            edges.push(EdgeLift {
                edge: i,
                black_cell: cell,
                white_cell,
                stub: !inside(white_cell),
            });
        }
        for f in 0..faces.faces.len() {
            face_lifts.push(FaceLift {
                face: f,
                anchor_cell: cell,
            });
        }
    }
    Ok(CoverFragment {
        center_face,
        radius,
        vertices,
        edges,
        faces: face_lifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn rotation(pairs: &[(&str, &[&str])]) -> BTreeMap<String, Vec<String>> {
        pairs
            .iter()
            .map(|(v, es)| (v.to_string(), es.iter().map(|s| s.to_string()).collect()))
            .collect()
    }

    fn vertex(id: &str, color: Color) -> DimerVertex {
        DimerVertex {
            id: id.into(),
            color,
            pos: None,
        }
    }

    fn edge(id: &str, b: &str, w: &str, dx: i64, dy: i64) -> EdgeSpec {
        EdgeSpec {
            id: id.into(),
            black: b.into(),
            white: w.into(),
            offset: Offset::new(dx, dy),
        }
    }

    #[test]
    fn conifold_is_valid() {
        let m = catalog::conifold();
        let r = validate_model(&m);
        assert!(r.is_valid(), "{r:?}");
        assert_eq!((r.vertices, r.edges, r.faces), (2, 4, 2));
        let faces = compute_faces(&m);
        assert!(faces.faces.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn honeycomb_is_valid() {
        let m = catalog::honeycomb();
        let r = validate_model(&m);
        assert!(r.is_valid(), "{r:?}");
        assert_eq!((r.vertices, r.edges, r.faces), (2, 3, 1));
        assert_eq!(compute_faces(&m).faces[0].len(), 6);
    }

    #[test]
    fn dropping_an_edge_from_one_rotation_is_structural() {
        let err = DimerModel::new(
            vec![vertex("b", Color::Black), vertex("w", Color::White)],
            vec![
                edge("e1", "b", "w", 0, 0),
                edge("e2", "b", "w", -1, 0),
                edge("e3", "b", "w", -1, -1),
                edge("e4", "b", "w", 0, -1),
            ],
            &rotation(&[("b", &["e1", "e2", "e3"]), ("w", &["e3", "e4", "e1", "e2"])]),
        )
        .unwrap_err();
        match err {
            Error::Structural { vertex, edge, .. } => {
                assert_eq!(vertex, "b");
                assert_eq!(edge, "e4");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicated_rotation_entry_is_structural() {
        let err = DimerModel::new(
            vec![vertex("b", Color::Black), vertex("w", Color::White)],
            vec![edge("e1", "b", "w", 0, 0)],
            &rotation(&[("b", &["e1", "e1"]), ("w", &["e1"])]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Structural { .. }));
    }

    #[test]
    fn wrong_colors_are_structural() {
        let err = DimerModel::new(
            vec![vertex("b", Color::Black), vertex("w", Color::White)],
            vec![edge("e1", "w", "b", 0, 0)],
            &rotation(&[("b", &["e1"]), ("w", &["e1"])]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Structural { .. }));
    }

    #[test]
    fn digon_is_a_sphere() {
        let m = DimerModel::new(
            vec![vertex("b", Color::Black), vertex("w", Color::White)],
            vec![edge("e1", "b", "w", 0, 0), edge("e2", "b", "w", 1, 0)],
            &rotation(&[("b", &["e1", "e2"]), ("w", &["e1", "e2"])]),
        )
        .unwrap();
        let faces = compute_faces(&m);
        assert_eq!(faces.faces.len(), 2);
        assert!(faces.faces.iter().all(|f| f.len() == 2));
        let r = validate_model(&m);
        assert_eq!(r.euler, 2);
        assert!(!r.is_valid());
    }

    #[test]
    fn negative_radius_rejected() {
        let m = catalog::conifold();
        assert!(matches!(lift_patch(&m, "f0", -1), Err(Error::Argument(_))));
    }

    #[test]
    fn patch_sizes() {
        let c = catalog::conifold();
        let p0 = lift_patch(&c, "f0", 0).unwrap();
        assert_eq!(p0.vertices.len(), 2);
        assert!(p0.edges.iter().any(|e| e.stub));
        let h = catalog::honeycomb();
        let p1 = lift_patch(&h, "f0", 1).unwrap();
        assert_eq!(p1.vertices.len(), 18);
        for m in [c, h] {
            let p2 = lift_patch(&m, "f0", 2).unwrap();
            assert_eq!(p2.vertices.len(), 25 * m.num_vertices());
        }
    }

    #[test]
    fn face_boundaries_alternate_and_cover_each_side_once() {
        for (_, m) in catalog::all() {
            let faces = compute_faces(&m);
            let total: usize = faces.faces.iter().map(Face::len).sum();
            assert_eq!(total, 2 * m.num_edges());
            for f in &faces.faces {
                assert_eq!(f.len() % 2, 0);
                for (d, next) in f.darts().zip(f.darts().cycle().skip(1)) {
                    assert_eq!(m.head(d), m.tail(next));
                    let c = m.vertices()[m.tail(d)].color;
                    assert_eq!(m.vertices()[m.tail(next)].color, c.opposite());
                }
            }
        }
    }
}
