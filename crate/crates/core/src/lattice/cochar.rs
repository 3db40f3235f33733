//! The cocharacter lattice `N` of the symmetry torus.
//!
//! `N` is the lattice of arrow weights `w` with `w(p+(a)) = w(p-(a))` for every
//! arrow, modulo the gauge weights `g_t(a) - g_s(a)`. Both steps go through
//! Smith normal forms, so the basis and the coordinates are exact.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{smith_normal_form, IntMatrix, Snf};
use crate::error::{Error, Result};
use crate::matchings::PerfectMatching;
use crate::quiver::{p_minus, p_plus, Quiver};
use crate::tiling::{DimerModel, Offset};

/// Homology classes of the two loops that define the projection to `Z^2`.
pub const LOOP_CLASSES: [Offset; 2] = [Offset::new(0, -1), Offset::new(1, 0)];

#[derive(Debug, Clone, Serialize)]
pub struct CocharLattice {
    pub rank: usize,
    /// Arrow-indexed representatives of a basis of the free part.
    pub basis: Vec<Vec<i64>>,
    /// Invariant factors above one of the torsion part; empty when torsion-free.
    pub torsion: Vec<i64>,
    #[serde(skip)]
    constraints: IntMatrix,
    #[serde(skip)]
    kernel: Snf,
    #[serde(skip)]
    quotient: Snf,
    #[serde(skip)]
    gauge: Vec<Vec<i64>>,
}

impl CocharLattice {
    pub fn num_arrows(&self) -> usize {
        self.constraints.cols()
    }

    /// `w(p+(a)) = w(p-(a))` for every arrow.
    pub fn satisfies_relations(&self, w: &[i64]) -> bool {
        w.len() == self.num_arrows() && self.constraints.mul_vec(w).iter().all(|&x| x == 0)
    }

    /// Coordinates of the class of `w` in the basis.
    pub fn coords(&self, w: &[i64]) -> Result<Vec<i64>> {
        if !self.satisfies_relations(w) {
            return Err(Error::Invariant(
                "weight vector does not satisfy the relation constraints".into(),
            ));
        }
        let x = self
            .kernel
            .solve(w)
            .ok_or_else(|| Error::Invariant("weight vector outside the kernel lattice".into()))?;
        let z = self.quotient.u.mul_vec(&x);
        Ok(z[z.len() - self.rank..].to_vec())
    }

    /// Arrow-indexed representative of the class with the given coordinates.
    pub fn lift(&self, coords: &[i64]) -> Vec<i64> {
        let mut w = vec![0i64; self.num_arrows()];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi += c * bi;
            }
        }
        w
    }

    /// Values of an arrow functional on the basis; it must vanish on gauge weights.
    pub fn functional(&self, f: &[i64]) -> Result<Vec<i64>> {
        if f.len() != self.num_arrows() {
            return Err(Error::Argument("functional has the wrong length".into()));
        }
        let dot = |w: &[i64]| -> i64 { w.iter().zip(f).map(|(a, b)| a * b).sum() };
        if self.gauge.iter().any(|g| dot(g) != 0) {
            return Err(Error::Invariant(
                "functional does not vanish on gauge weights".into(),
            ));
        }
        Ok(self.basis.iter().map(|b| dot(b)).collect())
    }

    /// Gauge weight of the vertex potential `g`: `g_t(a) - g_s(a)` on each arrow.
    pub fn gauge_weight(q: &Quiver, g: &[i64]) -> Vec<i64> {
        let mut w = vec![0i64; q.arrows.len()];
        for a in &q.arrows {
            w[a.edge] = g[a.target] - g[a.source];
        }
        w
    }
}

fn check_full(q: &Quiver) -> Result<()> {
    if q.arrows.iter().enumerate().any(|(i, a)| a.edge != i) {
        return Err(Error::Argument(
            "lattice computations need the full quiver of a model".into(),
        ));
    }
    Ok(())
}

pub fn cochar_lattice(q: &Quiver) -> Result<CocharLattice> {
    check_full(q)?;
    let n = q.arrows.len();
    let mut constraints = IntMatrix::zeros(n, n);
    for a in &q.arrows {
        for b in p_plus(q, a.edge)?.traversal() {
            constraints[(a.edge, b)] += 1;
        }
        for b in p_minus(q, a.edge)?.traversal() {
            constraints[(a.edge, b)] -= 1;
        }
    }
    let kernel_basis = smith_normal_form(&constraints).kernel();
    let kernel = smith_normal_form(&kernel_basis);
    let k = kernel_basis.cols();

    let gauge: Vec<Vec<i64>> = (0..q.num_vertices())
        .map(|v| {
            let g: Vec<i64> = (0..q.num_vertices()).map(|u| i64::from(u == v)).collect();
            CocharLattice::gauge_weight(q, &g)
        })
        .collect();
    let mut image = IntMatrix::zeros(k, gauge.len());
    for (j, g) in gauge.iter().enumerate() {
        let x = kernel
            .solve(g)
            .ok_or_else(|| Error::Invariant("gauge weight violates the relations".into()))?;
        for (i, xi) in x.into_iter().enumerate() {
            image[(i, j)] = xi;
        }
    }
    let quotient = smith_normal_form(&image);
    let rank = k - quotient.rank;
    let torsion = quotient
        .invariant_factors()
        .into_iter()
        .filter(|&d| d > 1)
        .collect();
    let basis = (quotient.rank..k)
        .map(|j| kernel_basis.mul_vec(&quotient.u_inv.col(j)))
        .collect();
    Ok(CocharLattice {
        rank,
        basis,
        torsion,
        constraints,
        kernel,
        quotient,
        gauge,
    })
}

/// Dimension of the torus acting on the moduli space.
pub fn torus_dimension(q: &Quiver) -> Result<usize> {
    Ok(cochar_lattice(q)?.rank)
}

/// Class of the indicator vector of `d`.
pub fn pm_cocharacter(
    lattice: &CocharLattice,
    model: &DimerModel,
    d: &PerfectMatching,
) -> Result<Vec<i64>> {
    d.check(model)?;
    lattice.coords(&d.indicator(model.num_edges()))
}

/// A closed walk in the quiver with arrows used forwards (+1) or backwards (-1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Loop {
    pub class: Offset,
    pub steps: Vec<(usize, i8)>,
}

impl Loop {
    pub fn weight(&self, w: &[i64]) -> i64 {
        self.steps.iter().map(|&(a, s)| i64::from(s) * w[a]).sum()
    }

    pub fn functional(&self, n: usize) -> Vec<i64> {
        let mut f = vec![0i64; n];
        for &(a, s) in &self.steps {
            f[a] += i64::from(s);
        }
        f
    }
}

/// Shortest closed walk avoiding `d` from vertex 0 to its translate by `class`.
/// A quiver vertex together with the cell of its lift.
type State = (usize, Offset);

fn find_loop(q: &Quiver, d: &PerfectMatching, class: Offset) -> Result<Loop> {
    let bound = 2 + q.num_vertices() as i64;
    let start = (0usize, Offset::ZERO);
    let goal = (0usize, class);
    // Predecessor state and the step (arrow, direction) taken from it.
    let mut prev: HashMap<State, (State, (usize, i8))> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = std::collections::HashSet::from([start]);
    while let Some(state) = queue.pop_front() {
        if state == goal {
            let mut steps = Vec::new();
            let mut cur = state;
            while cur != start {
                let (p, step) = prev[&cur];
                steps.push(step);
                cur = p;
            }
            steps.reverse();
            return Ok(Loop { class, steps });
        }
        let (v, cell) = state;
        for a in q.arrows.iter().filter(|a| !d.contains(a.edge)) {
            let mut moves = Vec::with_capacity(2);
            if a.source == v {
                moves.push(((a.target, cell + a.displacement), (a.edge, 1)));
            }
            if a.target == v {
                moves.push(((a.source, cell - a.displacement), (a.edge, -1)));
            }
            for (next, step) in moves {
                if next.1.chebyshev() <= bound && seen.insert(next) {
                    prev.insert(next, (state, step));
                    queue.push_back(next);
                }
            }
        }
    }
    Err(Error::Precondition(format!(
        "no loop of class {class} avoids the reference matching"
    )))
}

/// The splitting `N -> Z^2 x Z` defined by a reference matching.
#[derive(Debug, Clone, Serialize)]
pub struct Splitting {
    pub loops: [Loop; 2],
    /// Rows: the two loop pairings, then the level, all on the basis of `N`.
    pub matrix: IntMatrix,
    pub reference: Vec<i64>,
}

impl Splitting {
    pub fn project(&self, coords: &[i64]) -> Offset {
        let v = self.matrix.mul_vec(coords);
        Offset::new(v[0], v[1])
    }

    pub fn level(&self, coords: &[i64]) -> i64 {
        self.matrix.mul_vec(coords)[2]
    }

    /// Coordinates `(pi, level)` of a class.
    pub fn apply(&self, coords: &[i64]) -> [i64; 3] {
        let v = self.matrix.mul_vec(coords);
        [v[0], v[1], v[2]]
    }
}

/// Projection by pairing with two loops that avoid `d0`, and the level
/// functional counting weight around the first dimer vertex.
pub fn split_by_reference(
    lattice: &CocharLattice,
    model: &DimerModel,
    q: &Quiver,
    d0: &PerfectMatching,
) -> Result<Splitting> {
    check_full(q)?;
    d0.check(model)?;
    let n = q.arrows.len();
    let loops = [find_loop(q, d0, LOOP_CLASSES[0])?, find_loop(q, d0, LOOP_CLASSES[1])?];
    let mut level = vec![0i64; n];
    for &e in model.rotation(0) {
        level[e] += 1;
    }
    let rows = [
        lattice.functional(&loops[0].functional(n))?,
        lattice.functional(&loops[1].functional(n))?,
        lattice.functional(&level)?,
    ];
    let matrix = IntMatrix::from_rows(&rows).with_labels(
        vec!["pi_x".into(), "pi_y".into(), "level".into()],
        Vec::new(),
    );
    let reference = pm_cocharacter(lattice, model, d0)?;
    Ok(Splitting {
        loops,
        matrix,
        reference,
    })
}
