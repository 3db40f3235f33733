use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heights::LatticePolygon;

pub type Vec3 = [i64; 3];

pub(crate) fn dot(a: Vec3, b: Vec3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Divides out the gcd of the entries; zero stays zero.
pub fn primitive(v: Vec3) -> Vec3 {
    let g = v[0].gcd(&v[1]).gcd(&v[2]);
    if g == 0 {
        v
    } else {
        [v[0] / g, v[1] / g, v[2] / g]
    }
}

/// A polyhedral cone in `Z^3` given by primitive ray generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cone3 {
    pub rays: Vec<Vec3>,
}

impl Cone3 {
    pub fn new(rays: Vec<Vec3>) -> Result<Self> {
        if rays.contains(&[0, 0, 0]) {
            return Err(Error::Argument("zero ray".into()));
        }
        Ok(Cone3 {
            rays: rays.into_iter().map(primitive).collect(),
        })
    }
}

/// The dual cone, with the rays of the original cone kept as its inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualCone {
    pub rays: Vec<Vec3>,
    /// `u` lies in the cone iff `u . f >= 0` for every `f` here.
    pub inequalities: Vec<Vec3>,
}

impl DualCone {
    pub fn contains(&self, u: Vec3) -> bool {
        self.inequalities.iter().all(|&f| dot(u, f) >= 0)
    }
}

/// The cone over `polygon x {1}`.
pub fn cone_over_polygon(polygon: &LatticePolygon) -> Result<Cone3> {
    if polygon.is_degenerate() || polygon.area2() <= 0 {
        return Err(Error::Precondition(format!(
            "unsupported: degenerate polygon with {} vertices has no three-dimensional cone",
            polygon.vertices.len()
        )));
    }
    Cone3::new(polygon.vertices.iter().map(|v| [v.dx, v.dy, 1]).collect())
}

/// Inner facet normals of a full-dimensional, strongly convex cone.
///
/// Normals of consecutive ray pairs come first, in ray order, so a cone over a
/// counterclockwise polygon gets one normal per polygon edge in edge order.
pub fn dual_cone(cone: &Cone3) -> Result<DualCone> {
    let rays = &cone.rays;
    let n = rays.len();
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let mut normals: Vec<Vec3> = Vec::new();
    for (i, j) in pairs {
        let c = cross(rays[i], rays[j]);
        if c == [0, 0, 0] {
            continue;
        }
        let signs: Vec<i64> = rays.iter().map(|&r| dot(c, r).signum()).collect();
        let normal = if signs.iter().all(|&s| s >= 0) {
            c
        } else if signs.iter().all(|&s| s <= 0) {
            [-c[0], -c[1], -c[2]]
        } else {
            continue;
        };
        let normal = primitive(normal);
        if !normals.contains(&normal) {
            normals.push(normal);
        }
    }
    let full = (0..n).any(|i| {
        (i + 1..n).any(|j| (j + 1..n).any(|k| dot(cross(rays[i], rays[j]), rays[k]) != 0))
    });
    if !full || normals.len() < 3 {
        return Err(Error::Precondition(
            "cone is not full-dimensional and strongly convex".into(),
        ));
    }
    Ok(DualCone {
        rays: normals,
        inequalities: rays.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::convex_hull;
    use crate::tiling::Offset;

    fn square() -> LatticePolygon {
        convex_hull([Offset::new(0, 0), Offset::new(1, 0), Offset::new(1, 1), Offset::new(0, 1)])
    }

    #[test]
    fn conifold_cone() {
        let c = cone_over_polygon(&square()).unwrap();
        assert_eq!(c.rays, vec![[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]]);
        let d = dual_cone(&c).unwrap();
        assert_eq!(d.rays, vec![[0, 1, 0], [-1, 0, 1], [0, -1, 1], [1, 0, 0]]);
    }

    #[test]
    fn triangle_dual_is_unimodular() {
        let t = convex_hull([Offset::new(0, 0), Offset::new(1, 0), Offset::new(0, 1)]);
        let d = dual_cone(&cone_over_polygon(&t).unwrap()).unwrap();
        assert_eq!(d.rays.len(), 3);
        assert_eq!(crate::lattice::IntMatrix::from_rows(&d.rays).det().abs(), 1);
    }

    #[test]
    fn translation_is_a_unimodular_change() {
        let s = Offset::new(3, -2);
        let a = dual_cone(&cone_over_polygon(&square()).unwrap()).unwrap();
        let b = dual_cone(&cone_over_polygon(&square().translated(s)).unwrap()).unwrap();
        // (x, y, z) -> (x, y, z - 3x + 2y) carries the first dual cone to the second.
        for (u, v) in a.rays.iter().zip(&b.rays) {
            assert_eq!(*v, [u[0], u[1], u[2] - s.dx * u[0] - s.dy * u[1]]);
        }
    }

    #[test]
    fn degenerate_polygon_is_unsupported() {
        let seg = convex_hull([Offset::new(0, 0), Offset::new(2, 0)]);
        assert!(matches!(cone_over_polygon(&seg), Err(Error::Precondition(_))));
    }
}
