//! Perfect matchings and the three equivalent non-degeneracy tests.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tiling::{Color, DimerModel};

/// Largest color class the subset-enumerating marriage test accepts.
pub const MARRIAGE_LIMIT: usize = 20;

/// A bipartite multigraph; `edges[i] = (black, white)` with both indices local
/// to their color class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartite {
    pub n_black: usize,
    pub n_white: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Bipartite {
    pub fn new(n_black: usize, n_white: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(b, w)) = edges.iter().find(|&&(b, w)| b >= n_black || w >= n_white) {
            return Err(Error::Argument(format!("edge ({b}, {w}) out of range")));
        }
        Ok(Bipartite {
            n_black,
            n_white,
            edges,
        })
    }

    /// The graph underlying a model; edge indices are preserved.
    pub fn of_model(model: &DimerModel) -> Self {
        let mut local = vec![0; model.num_vertices()];
        let (mut nb, mut nw) = (0, 0);
        for (i, v) in model.vertices().iter().enumerate() {
            match v.color {
                Color::Black => {
                    local[i] = nb;
                    nb += 1;
                }
                Color::White => {
                    local[i] = nw;
                    nw += 1;
                }
            }
        }
        Bipartite {
            n_black: nb,
            n_white: nw,
            edges: model
                .edges()
                .iter()
                .map(|e| (local[e.black], local[e.white]))
                .collect(),
        }
    }

    fn black_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_black];
        for (i, &(b, _)) in self.edges.iter().enumerate() {
            adj[b].push(i);
        }
        adj
    }

    /// Whether the vertices not in the removed sets admit a perfect matching.
    fn has_perfect_matching_without(&self, gone_black: Option<usize>, gone_white: Option<usize>) -> bool {
        let blacks: Vec<usize> = (0..self.n_black).filter(|&b| Some(b) != gone_black).collect();
        let whites = (0..self.n_white).filter(|&w| Some(w) != gone_white).count();
        if blacks.len() != whites {
            return false;
        }
        let adj = self.black_adjacency();
        let mut owner: Vec<Option<usize>> = vec![None; self.n_white];
        fn augment(
            b: usize,
            g: &Bipartite,
            adj: &[Vec<usize>],
            gone_white: Option<usize>,
            seen: &mut [bool],
            owner: &mut [Option<usize>],
        ) -> bool {
            for &e in &adj[b] {
                let w = g.edges[e].1;
                if Some(w) == gone_white || seen[w] {
                    continue;
                }
                seen[w] = true;
                let free = match owner[w] {
                    None => true,
                    Some(other) => augment(other, g, adj, gone_white, seen, owner),
                };
                if free {
                    owner[w] = Some(b);
                    return true;
                }
            }
            false
        }
        blacks.into_iter().all(|b| {
            let mut seen = vec![false; self.n_white];
            augment(b, self, &adj, gone_white, &mut seen, &mut owner)
        })
    }

    /// All perfect matchings as sorted edge-index lists, in lexicographic order.
    pub fn matchings(&self) -> Vec<Vec<usize>> {
        if self.n_black != self.n_white {
            return Vec::new();
        }
        let adj = self.black_adjacency();
        let mut order: Vec<usize> = (0..self.n_black).collect();
        order.sort_by_key(|&b| (adj[b].len(), b));
        let mut used = vec![false; self.n_white];
        let mut chosen = Vec::with_capacity(self.n_black);
        let mut out = Vec::new();
        self.extend(&order, &adj, &mut used, &mut chosen, &mut out);
        for m in &mut out {
            m.sort_unstable();
        }
        out.sort();
        out
    }

    fn extend(
        &self,
        order: &[usize],
        adj: &[Vec<usize>],
        used: &mut [bool],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some((&b, rest)) = order.split_first() else {
            out.push(chosen.clone());
            return;
        };
        for &e in &adj[b] {
            let w = self.edges[e].1;
            if used[w] {
                continue;
            }
            used[w] = true;
            chosen.push(e);
            self.extend(rest, adj, used, chosen, out);
            chosen.pop();
            used[w] = false;
        }
    }

    pub fn has_matching_containing(&self, e: usize) -> Result<bool> {
        let &(b, w) = self
            .edges
            .get(e)
            .ok_or_else(|| Error::Argument(format!("edge index {e} out of range")))?;
        Ok(self.has_perfect_matching_without(Some(b), Some(w)))
    }

    /// `R_e = 2 / |Perf| * #{D : e in D}`.
    pub fn r_charge_average(&self) -> Result<Vec<Rational64>> {
        let all = self.matchings();
        if all.is_empty() {
            return Err(Error::Precondition("degenerate: empty matching set".into()));
        }
        let mut count = vec![0i64; self.edges.len()];
        for m in &all {
            for &e in m {
                count[e] += 1;
            }
        }
        let total = all.len() as i64;
        Ok(count
            .into_iter()
            .map(|c| Rational64::new(2 * c, total))
            .collect())
    }

    pub fn is_non_degenerate(&self, method: Method) -> Result<bool> {
        match method {
            Method::PerEdge => {
                for e in 0..self.edges.len() {
                    if !self.has_matching_containing(e)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Method::RCharge => match self.r_charge_average() {
                Ok(r) => Ok(r.iter().all(|x| *x > Rational64::from(0))),
                Err(Error::Precondition(_)) => Ok(false),
                Err(other) => Err(other),
            },
            Method::StrongMarriage => self.strong_marriage(),
        }
    }

    /// Every proper nonempty set of blacks sees strictly more whites, and vice versa.
    pub fn strong_marriage(&self) -> Result<bool> {
        let largest = self.n_black.max(self.n_white);
        if largest > MARRIAGE_LIMIT {
            return Err(Error::Capacity {
                what: "color class size",
                got: largest,
                limit: MARRIAGE_LIMIT,
                hint: "; use the PerEdge method instead",
            });
        }
        let mut black_nbrs = vec![0u32; self.n_black];
        let mut white_nbrs = vec![0u32; self.n_white];
        for &(b, w) in &self.edges {
            black_nbrs[b] |= 1 << w;
            white_nbrs[w] |= 1 << b;
        }
        Ok(expands(&black_nbrs) && expands(&white_nbrs))
    }
}

fn expands(nbrs: &[u32]) -> bool {
    let n = nbrs.len();
    let full = (1u64 << n) - 1;
    (1..full).all(|set| {
        let mut seen = 0u32;
        let mut rest = set;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            seen |= nbrs[i];
            rest &= rest - 1;
        }
        seen.count_ones() > set.count_ones()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    PerEdge,
    RCharge,
    StrongMarriage,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::PerEdge, Method::RCharge, Method::StrongMarriage];
}

/// A set of edges covering each vertex exactly once.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PerfectMatching {
    edges: Vec<usize>,
}

impl PerfectMatching {
    pub fn from_edges(model: &DimerModel, edges: impl IntoIterator<Item = usize>) -> Result<Self> {
        let edges: BTreeSet<usize> = edges.into_iter().collect();
        let d = PerfectMatching {
            edges: edges.into_iter().collect(),
        };
        d.check(model)?;
        Ok(d)
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Characteristic vector over the edges of a model with `n` edges.
    pub fn indicator(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for &e in &self.edges {
            v[e] = 1;
        }
        v
    }

    pub fn check(&self, model: &DimerModel) -> Result<()> {
        let mut hits = vec![0usize; model.num_vertices()];
        for &e in &self.edges {
            let edge = model
                .edges()
                .get(e)
                .ok_or_else(|| Error::Argument(format!("edge index {e} out of range")))?;
            hits[edge.black] += 1;
            hits[edge.white] += 1;
        }
        if let Some(v) = hits.iter().position(|&h| h != 1) {
            return Err(Error::Argument(format!(
                "not a perfect matching: vertex `{}` covered {} times",
                model.vertex_id(v),
                hits[v]
            )));
        }
        Ok(())
    }

    pub fn edge_ids<'a>(&'a self, model: &'a DimerModel) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.iter().map(move |&e| model.edge_id(e))
    }
}

/// All perfect matchings of `model`, canonically ordered.
pub fn enumerate_matchings(model: &DimerModel) -> Vec<PerfectMatching> {
    Bipartite::of_model(model)
        .matchings()
        .into_iter()
        .map(|edges| PerfectMatching { edges })
        .collect()
}

pub fn has_matching_containing(model: &DimerModel, edge_id: &str) -> Result<bool> {
    let e = model
        .edge_by_id(edge_id)
        .ok_or_else(|| Error::Argument(format!("unknown edge `{edge_id}`")))?;
    Bipartite::of_model(model).has_matching_containing(e)
}

pub fn r_charge_average(model: &DimerModel) -> Result<Vec<Rational64>> {
    Bipartite::of_model(model).r_charge_average()
}

pub fn is_non_degenerate(model: &DimerModel, method: Method) -> Result<bool> {
    Bipartite::of_model(model).is_non_degenerate(method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    /// Permanent of the edge-multiplicity matrix, by expansion over permutations.
    fn permanent_count(g: &Bipartite) -> u64 {
        if g.n_black != g.n_white {
            return 0;
        }
        let n = g.n_black;
        let mut mult = vec![vec![0u64; n]; n];
        for &(b, w) in &g.edges {
            mult[b][w] += 1;
        }
        fn go(row: usize, used: &mut Vec<bool>, mult: &[Vec<u64>]) -> u64 {
            if row == mult.len() {
                return 1;
            }
            let mut total = 0;
            for c in 0..mult.len() {
                if !used[c] && mult[row][c] > 0 {
                    used[c] = true;
                    total += mult[row][c] * go(row + 1, used, mult);
                    used[c] = false;
                }
            }
            total
        }
        go(0, &mut vec![false; n], &mult)
    }

    #[test]
    fn catalog_counts() {
        let c = catalog::conifold();
        let ms = enumerate_matchings(&c);
        assert_eq!(ms.len(), 4);
        assert!(ms.iter().all(|d| d.edges().len() == 1));
        assert_eq!(enumerate_matchings(&catalog::honeycomb()).len(), 3);
    }

    #[test]
    fn unbalanced_has_none() {
        let g = Bipartite::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        assert!(g.matchings().is_empty());
        for m in Method::ALL {
            assert!(!g.is_non_degenerate(m).unwrap());
        }
    }

    #[test]
    fn no_matching_fixture_fails_everywhere() {
        // Black 1 has no edges; black 0 reaches white 0 once and white 1 twice.
        let h = Bipartite::new(2, 2, vec![(0, 0), (0, 1), (0, 1)]).unwrap();
        assert!(h.matchings().is_empty());
        for e in 0..3 {
            assert!(!h.has_matching_containing(e).unwrap());
        }
        for m in Method::ALL {
            assert!(!h.is_non_degenerate(m).unwrap());
        }
    }

    #[test]
    fn r_charges() {
        let half = Rational64::new(1, 2);
        assert_eq!(r_charge_average(&catalog::conifold()).unwrap(), vec![half; 4]);
        let third = Rational64::new(2, 3);
        assert_eq!(r_charge_average(&catalog::honeycomb()).unwrap(), vec![third; 3]);
        let g = Bipartite::new(2, 2, vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        let r = g.r_charge_average().unwrap();
        assert_eq!(r[0], Rational64::from(0));
        let none = Bipartite::new(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        assert!(matches!(none.r_charge_average(), Err(Error::Precondition(_))));
    }

    #[test]
    fn catalog_verdicts() {
        for (name, m) in catalog::all() {
            let verdicts: Vec<bool> = Method::ALL
                .iter()
                .map(|&k| is_non_degenerate(&m, k).unwrap())
                .collect();
            assert!(verdicts.iter().all(|&v| v == verdicts[0]), "{name}: {verdicts:?}");
            assert_eq!(verdicts[0], name != "degenerate", "{name}");
        }
    }

    #[test]
    fn unknown_edge_id() {
        let m = catalog::conifold();
        assert!(matches!(has_matching_containing(&m, "zz"), Err(Error::Argument(_))));
        assert!(has_matching_containing(&m, "e2").unwrap());
    }

    #[test]
    fn marriage_capacity() {
        let g = Bipartite::new(21, 21, (0..21).map(|i| (i, i)).collect()).unwrap();
        assert!(matches!(g.strong_marriage(), Err(Error::Capacity { .. })));
    }

    #[test]
    fn non_matching_rejected() {
        let m = catalog::conifold();
        assert!(PerfectMatching::from_edges(&m, [0, 1]).is_err());
        assert!(PerfectMatching::from_edges(&m, []).is_err());
    }

    fn small_bipartite() -> impl Strategy<Value = Bipartite> {
        (1usize..6, 1usize..6).prop_flat_map(|(nb, nw)| {
            proptest::collection::vec((0..nb, 0..nw), 0..14)
                .prop_map(move |edges| Bipartite::new(nb, nw, edges).unwrap())
        })
    }

    proptest! {
        #[test]
        fn enumeration_matches_permanent(g in small_bipartite()) {
            let ms = g.matchings();
            prop_assert_eq!(ms.len() as u64, permanent_count(&g));
            let distinct: BTreeSet<_> = ms.iter().collect();
            prop_assert_eq!(distinct.len(), ms.len());
            for m in &ms {
                let blacks: BTreeSet<_> = m.iter().map(|&e| g.edges[e].0).collect();
                let whites: BTreeSet<_> = m.iter().map(|&e| g.edges[e].1).collect();
                prop_assert_eq!(blacks.len(), g.n_black);
                prop_assert_eq!(whites.len(), g.n_white);
            }
        }

        #[test]
        fn forcing_agrees_with_enumeration(g in small_bipartite()) {
            let ms = g.matchings();
            for e in 0..g.edges.len() {
                let expected = ms.iter().any(|m| m.contains(&e));
                prop_assert_eq!(g.has_matching_containing(e).unwrap(), expected);
            }
        }

        #[test]
        fn r_charge_sums_to_two(g in small_bipartite()) {
            if let Ok(r) = g.r_charge_average() {
                for b in 0..g.n_black {
                    let s: Rational64 = g.edges.iter().enumerate()
                        .filter(|(_, x)| x.0 == b).map(|(i, _)| r[i]).sum();
                    prop_assert_eq!(s, Rational64::from(2));
                }
                for w in 0..g.n_white {
                    let s: Rational64 = g.edges.iter().enumerate()
                        .filter(|(_, x)| x.1 == w).map(|(i, _)| r[i]).sum();
                    prop_assert_eq!(s, Rational64::from(2));
                }
            }
        }
    }
}
