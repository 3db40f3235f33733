use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::cone::{dot, DualCone, Vec3};
use crate::error::{Error, Result};

/// Largest Hilbert basis (and candidate set) the brute-force search accepts.
pub const HILBERT_LIMIT: usize = 10_000;

/// Box points scanned before giving up.
const BOX_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertBasis {
    /// Extreme rays first, in the order of the cone, then the rest by degree.
    pub elements: Vec<Vec3>,
    /// `[i, j, k, l]` with `g_i + g_j = g_k + g_l`, from coinciding pair sums.
    pub relations: Vec<[usize; 4]>,
    /// Lattice points of the cone inside the zonotope's bounding box.
    pub checked_points: usize,
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Minimal generators of the lattice points of a pointed full-dimensional cone.
///
/// Every generator lies in the zonotope spanned by the extreme rays, so the
/// candidates are the cone points of its bounding box. Scanning them by a
/// positive degree, a point is irreducible iff no smaller generator can be
/// subtracted from it inside the cone. Generation of every box point is then
/// re-verified.
pub fn hilbert_basis(cone: &DualCone) -> Result<HilbertBasis> {
    let weight: Vec3 = cone
        .inequalities
        .iter()
        .fold([0, 0, 0], |acc, &f| add(acc, f));
    let degree = |u: Vec3| dot(u, weight);
    if cone.rays.iter().any(|&g| !cone.contains(g) || degree(g) <= 0) {
        return Err(Error::Precondition("cone is not pointed and full-dimensional".into()));
    }
    let mut lo = [0i64; 3];
    let mut hi = [0i64; 3];
    for g in &cone.rays {
        for k in 0..3 {
            lo[k] += g[k].min(0);
            hi[k] += g[k].max(0);
        }
    }
    let volume: usize = (0..3).map(|k| (hi[k] - lo[k] + 1) as usize).product();
    if volume > BOX_LIMIT {
        return Err(Error::Capacity {
            what: "zonotope box points",
            got: volume,
            limit: BOX_LIMIT,
            hint: "",
        });
    }
    let mut points = Vec::new();
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                let u = [x, y, z];
                if u != [0, 0, 0] && cone.contains(u) {
                    points.push(u);
                }
            }
        }
    }
    if points.len() > HILBERT_LIMIT {
        return Err(Error::Capacity {
            what: "candidate lattice points",
            got: points.len(),
            limit: HILBERT_LIMIT,
            hint: "",
        });
    }
    points.sort_by_key(|&u| (degree(u), u));

    let mut basis: Vec<Vec3> = Vec::new();
    for &u in &points {
        if !basis.iter().any(|&b| cone.contains(sub(u, b))) {
            basis.push(u);
        }
    }
    if basis.len() > HILBERT_LIMIT {
        return Err(Error::Capacity {
            what: "Hilbert basis size",
            got: basis.len(),
            limit: HILBERT_LIMIT,
            hint: "",
        });
    }

    let mut memo: HashMap<Vec3, bool> = HashMap::new();
    for &u in &points {
        if !generated(u, &basis, cone, &mut memo) {
            return Err(Error::Invariant(format!("{u:?} is not generated by the basis")));
        }
    }

    let mut elements: Vec<Vec3> = cone.rays.iter().copied().filter(|r| basis.contains(r)).collect();
    if elements.len() != cone.rays.len() {
        return Err(Error::Invariant("an extreme ray is reducible".into()));
    }
    elements.extend(basis.iter().copied().filter(|b| !cone.rays.contains(b)));

    let mut sums: BTreeMap<Vec3, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..elements.len() {
        for j in i..elements.len() {
            sums.entry(add(elements[i], elements[j])).or_default().push((i, j));
        }
    }
    let mut relations: Vec<[usize; 4]> = sums
        .values()
        .filter(|p| p.len() > 1)
        .flat_map(|p| p.windows(2).map(|w| [w[0].0, w[0].1, w[1].0, w[1].1]))
        .collect();
    relations.sort();

    Ok(HilbertBasis {
        elements,
        relations,
        checked_points: points.len(),
    })
}

fn generated(u: Vec3, basis: &[Vec3], cone: &DualCone, memo: &mut HashMap<Vec3, bool>) -> bool {
    if u == [0, 0, 0] {
        return true;
    }
    if let Some(&g) = memo.get(&u) {
        return g;
    }
    let ok = basis.iter().any(|&b| {
        let r = sub(u, b);
        cone.contains(r) && generated(r, basis, cone, memo)
    });
    memo.insert(u, ok);
    ok
}
