//! Stability parameters and combinatorial stability of `(1,...,1)` representations.
//!
//! A 0/1 representation has a subrepresentation for every vertex subset closed
//! under its nonzero arrows, so stability reduces to a search over subsets.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matchings::PerfectMatching;
use crate::quiver::{p_minus, p_plus, Quiver};
use crate::tiling::DimerModel;

/// Subset searches refuse quivers with more vertices than this.
pub const SUBSET_LIMIT: usize = 20;

/// A stability parameter: one rational per quiver vertex, summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theta {
    values: Vec<Rational64>,
}

impl Theta {
    pub fn new(values: Vec<Rational64>) -> Result<Self> {
        let total: Rational64 = values.iter().sum();
        if !total.is_zero() {
            return Err(Error::Argument(format!("theta must sum to zero, sums to {total}")));
        }
        Ok(Theta { values })
    }

    pub fn values(&self) -> &[Rational64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `theta(S)` for the subset encoded by `mask`.
    pub fn on_mask(&self, mask: u32) -> Rational64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(v, _)| mask >> v & 1 == 1)
            .map(|(_, x)| *x)
            .sum()
    }

    pub fn on_subset(&self, subset: &[usize]) -> Rational64 {
        subset.iter().map(|&v| self.values[v]).sum()
    }

    pub fn scaled(&self, c: Rational64) -> Theta {
        Theta {
            values: self.values.iter().map(|x| x * c).collect(),
        }
    }

    fn check_against(&self, q: &Quiver) -> Result<()> {
        if self.values.len() != q.num_vertices() {
            return Err(Error::Argument(format!(
                "theta has {} entries, quiver has {} vertices",
                self.values.len(),
                q.num_vertices()
            )));
        }
        Ok(())
    }
}

/// A representation with every vector space `C` and every arrow `0` or `1`.
///
/// Indexed by the edge index of each arrow; arrows absent from the quiver are zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ZeroOneRep {
    values: Vec<bool>,
}

impl ZeroOneRep {
    /// Checks the relations: `p+(a)` is all ones exactly when `p-(a)` is.
    pub fn new(q: &Quiver, values: Vec<bool>) -> Result<Self> {
        let rep = ZeroOneRep { values };
        if let Some(a) = rep.violated_relation(q)? {
            return Err(Error::Argument(format!(
                "representation violates the relation at arrow `{}`",
                q.arrow(a)?.id
            )));
        }
        Ok(rep)
    }

    /// The representation that is zero on `d` and one elsewhere.
    pub fn off_matching(model: &DimerModel, q: &Quiver, d: &PerfectMatching) -> Result<Self> {
        d.check(model)?;
        ZeroOneRep::new(q, (0..model.num_edges()).map(|e| !d.contains(e)).collect())
    }

    pub fn all_ones(q: &Quiver) -> Self {
        let n = q.arrows.iter().map(|a| a.edge + 1).max().unwrap_or(0);
        ZeroOneRep {
            values: (0..n).map(|e| q.has_arrow(e)).collect(),
        }
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn is_nonzero(&self, a: usize) -> bool {
        self.values.get(a).copied().unwrap_or(false)
    }

    pub(crate) fn from_mask(mask: u64, n: usize) -> Self {
        ZeroOneRep {
            values: (0..n).map(|e| mask >> e & 1 == 1).collect(),
        }
    }

    fn violated_relation(&self, q: &Quiver) -> Result<Option<usize>> {
        for a in &q.arrows {
            let plus = p_plus(q, a.edge)?.traversal().all(|b| self.is_nonzero(b));
            let minus = p_minus(q, a.edge)?.traversal().all(|b| self.is_nonzero(b));
            if plus != minus {
                return Ok(Some(a.edge));
            }
        }
        Ok(None)
    }
}

fn check_size(q: &Quiver) -> Result<usize> {
    let n = q.num_vertices();
    if n > SUBSET_LIMIT {
        return Err(Error::Capacity {
            what: "quiver vertices",
            got: n,
            limit: SUBSET_LIMIT,
            hint: "",
        });
    }
    Ok(n)
}

fn mask_to_subset(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|v| mask >> v & 1 == 1).collect()
}

fn closed_masks(q: &Quiver, rep: &ZeroOneRep) -> Result<Vec<u32>> {
    let n = check_size(q)?;
    let mut succ = vec![0u32; n];
    for a in &q.arrows {
        if rep.is_nonzero(a.edge) {
            succ[a.source] |= 1 << a.target;
        }
    }
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    Ok((1..full)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || succ[v] & !s == 0))
        .collect())
}

/// Nonempty proper vertex subsets closed under the nonzero arrows of `rep`.
pub fn successor_closed_subsets(q: &Quiver, rep: &ZeroOneRep) -> Result<Vec<Vec<usize>>> {
    let n = q.num_vertices();
    Ok(closed_masks(q, rep)?
        .into_iter()
        .map(|m| mask_to_subset(m, n))
        .collect())
}

fn check_stability(q: &Quiver, rep: &ZeroOneRep, theta: &Theta, strict: bool) -> Result<bool> {
    theta.check_against(q)?;
    Ok(closed_masks(q, rep)?.into_iter().all(|s| {
        let t = theta.on_mask(s);
        if strict {
            t.is_positive()
        } else {
            !t.is_negative()
        }
    }))
}

/// `theta(S) > 0` for every proper subrepresentation `S`.
pub fn is_stable(q: &Quiver, rep: &ZeroOneRep, theta: &Theta) -> Result<bool> {
    check_stability(q, rep, theta, true)
}

/// `theta(S) >= 0` for every proper subrepresentation `S`.
pub fn is_semistable(q: &Quiver, rep: &ZeroOneRep, theta: &Theta) -> Result<bool> {
    check_stability(q, rep, theta, false)
}

/// `theta(S) != 0` for every nonempty proper subset.
pub fn is_generic(q: &Quiver, theta: &Theta) -> Result<bool> {
    theta.check_against(q)?;
    let n = check_size(q)?;
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    Ok((1..full).all(|s| !theta.on_mask(s).is_zero()))
}

/// Inflow minus outflow of `xi` over the arrows outside `d`.
///
/// `xi` is indexed by edge; entries on `d` are ignored and the rest must be positive.
pub fn sardo_infirri_theta(
    model: &DimerModel,
    q: &Quiver,
    d: &PerfectMatching,
    xi: &[Rational64],
) -> Result<Theta> {
    d.check(model)?;
    if xi.len() != model.num_edges() {
        return Err(Error::Argument(format!(
            "xi has {} entries, model has {} edges",
            xi.len(),
            model.num_edges()
        )));
    }
    let mut values = vec![Rational64::zero(); q.num_vertices()];
    for a in q.arrows.iter().filter(|a| !d.contains(a.edge)) {
        let x = xi[a.edge];
        if !x.is_positive() {
            return Err(Error::Argument(format!(
                "xi must be positive off the matching, got {x} on `{}`",
                a.id
            )));
        }
        values[a.target] += x;
        values[a.source] -= x;
    }
    Theta::new(values)
}

/// Seeded draws of positive rationals `n/d` with `n` in 1..=100 and `d` in 1..=10.
#[derive(Debug, Clone)]
pub struct XiSampler {
    rng: ChaCha8Rng,
}

impl XiSampler {
    pub fn new(seed: u64) -> Self {
        XiSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn draw(&mut self, len: usize) -> Vec<Rational64> {
        (0..len)
            .map(|_| {
                let n = self.rng.gen_range(1..=100);
                let d = self.rng.gen_range(1..=10);
                Rational64::new(n, d)
            })
            .collect()
    }
}

/// A generic Sardo-Infirri parameter for `d`, redrawing `xi` until generic.
#[derive(Debug, Clone, Serialize)]
pub struct GenericDraw {
    pub theta: Theta,
    pub xi: Vec<Rational64>,
    /// Draws consumed, including the accepted one.
    pub draws: usize,
}

pub fn generic_theta(
    model: &DimerModel,
    q: &Quiver,
    d: &PerfectMatching,
    seed: u64,
    max_draws: usize,
) -> Result<GenericDraw> {
    let mut sampler = XiSampler::new(seed);
    for draws in 1..=max_draws {
        let xi = sampler.draw(model.num_edges());
        let theta = sardo_infirri_theta(model, q, d, &xi)?;
        if is_generic(q, &theta)? {
            return Ok(GenericDraw { theta, xi, draws });
        }
    }
    Err(Error::Precondition(format!(
        "no generic parameter found in {max_draws} draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::matchings::enumerate_matchings;
    use crate::quiver::quiver_of;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from(n)
    }

    #[test]
    fn theta_must_sum_to_zero() {
        assert!(Theta::new(vec![r(1), r(1)]).is_err());
        assert!(Theta::new(vec![r(1), r(-1)]).is_ok());
    }

    #[test]
    fn conifold_closed_subsets() {
        let m = catalog::conifold();
        let q = quiver_of(&m);
        for d in enumerate_matchings(&m) {
            let rep = ZeroOneRep::off_matching(&m, &q, &d).unwrap();
            assert!(successor_closed_subsets(&q, &rep).unwrap().is_empty());
            for theta in [vec![r(1), r(-1)], vec![r(-3), r(3)]] {
                assert!(is_stable(&q, &rep, &Theta::new(theta).unwrap()).unwrap());
            }
        }
        let zero = ZeroOneRep::new(&q, vec![false; 4]).unwrap();
        assert_eq!(
            successor_closed_subsets(&q, &zero).unwrap(),
            vec![vec![0], vec![1]]
        );
        let theta = Theta::new(vec![r(1), r(-1)]).unwrap();
        assert!(!is_semistable(&q, &zero, &theta).unwrap());
    }

    #[test]
    fn relations_are_enforced() {
        let m = catalog::named("conifold-z2").unwrap();
        let q = quiver_of(&m);
        let n = m.num_edges();
        let bad = (0u64..1 << n).find(|&mask| ZeroOneRep::new(&q, ZeroOneRep::from_mask(mask, n).values).is_err());
        assert!(bad.is_some());
        assert!(ZeroOneRep::new(&q, vec![true; n]).is_ok());
    }

    #[test]
    fn honeycomb_has_no_proper_subsets() {
        let m = catalog::honeycomb();
        let q = quiver_of(&m);
        let rep = ZeroOneRep::new(&q, vec![false; 3]).unwrap();
        assert!(successor_closed_subsets(&q, &rep).unwrap().is_empty());
    }

    #[test]
    fn conifold_sardo_infirri_unit_xi() {
        let m = catalog::conifold();
        let q = quiver_of(&m);
        for d in enumerate_matchings(&m) {
            let theta = sardo_infirri_theta(&m, &q, &d, &[r(1); 4]).unwrap();
            let a = q.arrow(d.edges()[0]).unwrap();
            // The removed arrow leaves its target one inflow short.
            let mut expected = vec![r(0); 2];
            expected[a.target] -= r(1);
            expected[a.source] += r(1);
            assert_eq!(theta.values(), expected.as_slice());
            assert!(is_generic(&q, &theta).unwrap());
        }
    }

    #[test]
    fn generic_and_zero_theta() {
        let q = quiver_of(&catalog::conifold());
        assert!(is_generic(&q, &Theta::new(vec![r(1), r(-1)]).unwrap()).unwrap());
        assert!(!is_generic(&q, &Theta::new(vec![r(0), r(0)]).unwrap()).unwrap());
    }

    #[test]
    fn nonpositive_xi_rejected() {
        let m = catalog::conifold();
        let q = quiver_of(&m);
        let d = enumerate_matchings(&m).remove(0);
        let mut xi = vec![r(1); 4];
        let off = (0..4).find(|&e| !d.contains(e)).unwrap();
        xi[off] = r(0);
        assert!(sardo_infirri_theta(&m, &q, &d, &xi).is_err());
    }

    #[test]
    fn sampler_is_deterministic() {
        assert_eq!(XiSampler::new(7).draw(10), XiSampler::new(7).draw(10));
        assert_ne!(XiSampler::new(7).draw(10), XiSampler::new(8).draw(10));
    }

    proptest! {
        #[test]
        fn sardo_infirri_makes_psi0_stable(seed in 0u64..500, which in 0usize..16) {
            for (_, m) in catalog::all() {
                let q = quiver_of(&m);
                let all = enumerate_matchings(&m);
                if all.is_empty() || q.num_vertices() > SUBSET_LIMIT {
                    continue;
                }
                let d = &all[which % all.len()];
                let xi = XiSampler::new(seed).draw(m.num_edges());
                let theta = sardo_infirri_theta(&m, &q, d, &xi).unwrap();
                prop_assert!(theta.values().iter().sum::<Rational64>().is_zero());
                let rep = ZeroOneRep::off_matching(&m, &q, d).unwrap();
                prop_assert!(is_stable(&q, &rep, &theta).unwrap());
                prop_assert!(is_stable(&q, &rep, &theta.scaled(Rational64::new(3, 7))).unwrap());
                prop_assert!(is_stable(&q, &ZeroOneRep::all_ones(&q), &theta).unwrap());
            }
        }
    }
}
