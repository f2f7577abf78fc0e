use std::collections::BTreeSet;
use std::fmt;

use num::rational::BigRational;
use num::{BigUint, One, Zero};

use super::dist::FinDist;
use super::event::Event;
use super::outcome::Cylinder;
use super::randvar::RandVar;
use super::rational::Prob;
use super::rid::Rid;
use crate::error::ProbError;

/// A complete finite probability space over boolean assignments to a finite
/// rid set.
///
/// The σ-algebra of a finite space is generated by a partition; a *complete*
/// space additionally has every zero-probability block split into singleton
/// outcomes. A complete space is therefore fully determined by its
/// positive-probability blocks, which is what we store: pairwise-disjoint
/// events with strictly positive probabilities summing to one. Everything
/// outside their union is null, with singletons implicitly measurable.
///
/// All constructors and operations keep spaces in this completed form.
#[derive(Debug, Clone)]
pub struct FinProbSpace {
    domain: BTreeSet<Rid>,
    // Sorted by the least outcome of each block; canonical given the blocks.
    blocks: Vec<(Event, Prob)>,
}

impl FinProbSpace {
    /// The trivial space ε: empty domain, no information.
    pub fn trivial() -> Self {
        Self::trivial_over(BTreeSet::new())
    }

    /// No information, but an explicitly extended domain.
    pub fn trivial_over(domain: BTreeSet<Rid>) -> Self {
        let full = Event::full(domain.clone());
        FinProbSpace { domain, blocks: vec![(full, Prob::one())] }
    }

    /// Bernoulli space: `rid = true` with probability `p`.
    pub fn coin(rid: Rid, p: Prob) -> Self {
        let domain: BTreeSet<Rid> = [rid].into();
        let t = Event::of_cylinder(domain.clone(), Cylinder::fixing(rid, true));
        let f = Event::of_cylinder(domain.clone(), Cylinder::fixing(rid, false));
        Self::from_positive_blocks(domain, vec![(t, p.clone()), (f, p.complement())])
    }

    pub fn fair_coin(rid: Rid) -> Self {
        Self::coin(rid, Prob::ratio(1, 2))
    }

    /// Construct from a full partition of the outcome cube, including
    /// zero-probability blocks; the result is the completion.
    pub fn make_space(
        domain: BTreeSet<Rid>,
        blocks: Vec<(Event, Prob)>,
    ) -> Result<Self, ProbError> {
        // Partition check: pairwise disjoint and jointly exhaustive.
        for (i, (a, _)) in blocks.iter().enumerate() {
            if !a.domain().is_subset(&domain) {
                return Err(ProbError::NotAPartition);
            }
            for (b, _) in blocks.iter().skip(i + 1) {
                if !a.is_disjoint(b) {
                    return Err(ProbError::NotAPartition);
                }
            }
        }
        let mut count = BigUint::zero();
        for (e, _) in &blocks {
            count += e.with_domain(domain.clone()).count_outcomes();
        }
        if count != (BigUint::one() << domain.len()) {
            return Err(ProbError::NotAPartition);
        }
        let mut sum = BigRational::zero();
        for (_, p) in &blocks {
            sum += p.as_rational();
        }
        if !sum.is_one() {
            return Err(ProbError::ProbSumNotOne { sum: sum.to_string() });
        }
        Ok(Self::from_positive_blocks(
            domain.clone(),
            blocks
                .into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(e, p)| (e.with_domain(domain.clone()), p))
                .collect(),
        ))
    }

    /// Internal constructor: callers guarantee the positive-block invariants.
    pub(crate) fn from_positive_blocks(domain: BTreeSet<Rid>, blocks: Vec<(Event, Prob)>) -> Self {
        let mut blocks: Vec<(Event, Prob)> = blocks
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(e, p)| (e.with_domain(domain.clone()), p))
            .collect();
        blocks.sort_by_cached_key(|(e, _)| e.min_outcome_bits().expect("positive block nonempty"));
        debug_assert!(
            blocks
                .iter()
                .map(|(_, p)| p.clone())
                .sum::<Prob>()
                .is_one(),
            "positive blocks must carry total mass 1"
        );
        FinProbSpace { domain, blocks }
    }

    pub fn domain(&self) -> &BTreeSet<Rid> {
        &self.domain
    }

    /// The positive-probability blocks with their probabilities.
    pub fn blocks(&self) -> &[(Event, Prob)] {
        &self.blocks
    }

    /// The atoms: exactly the positive blocks.
    pub fn atoms(&self) -> impl Iterator<Item = &Event> {
        self.blocks.iter().map(|(e, _)| e)
    }

    pub fn num_atoms(&self) -> usize {
        self.blocks.len()
    }

    /// Union of the atoms; the complement of the null set.
    pub fn support(&self) -> Event {
        let mut s = Event::empty(self.domain.clone());
        for (e, _) in &self.blocks {
            s = s.union(e);
        }
        s
    }

    /// Add fresh rids without adding information about them.
    pub fn extend_domain(&self, new: &BTreeSet<Rid>) -> Result<Self, ProbError> {
        if !self.domain.is_disjoint(new) {
            return Err(ProbError::DomainOverlap);
        }
        let domain: BTreeSet<Rid> = self.domain.union(new).copied().collect();
        Ok(FinProbSpace {
            blocks: self
                .blocks
                .iter()
                .map(|(e, p)| (e.with_domain(domain.clone()), p.clone()))
                .collect(),
            domain,
        })
    }

    /// Extend both spaces to the union of their domains.
    pub fn aligned(&self, other: &Self) -> (Self, Self) {
        let d1: BTreeSet<Rid> = other.domain.difference(&self.domain).copied().collect();
        let d2: BTreeSet<Rid> = self.domain.difference(&other.domain).copied().collect();
        (
            self.extend_domain(&d1).expect("difference is fresh"),
            other.extend_domain(&d2).expect("difference is fresh"),
        )
    }

    /// Independent product. `None` when no product distribution exists.
    ///
    /// On completed spaces the product measure is forced on the common
    /// refinement; it exists exactly when no pair of positive blocks has an
    /// empty intersection.
    pub fn iprod(&self, other: &Self) -> Option<Self> {
        let (a, b) = self.aligned(other);
        let mut blocks = Vec::with_capacity(a.blocks.len() * b.blocks.len());
        for (ea, pa) in &a.blocks {
            for (eb, pb) in &b.blocks {
                let cell = ea.intersect(eb);
                if cell.is_empty() {
                    return None;
                }
                blocks.push((cell, pa * pb));
            }
        }
        Some(Self::from_positive_blocks(a.domain, blocks))
    }

    /// True when `e` is measurable: its intersection with the support is a
    /// union of blocks.
    pub fn is_measurable_event(&self, e: &Event) -> bool {
        self.blocks
            .iter()
            .all(|(b, _)| b.is_disjoint(e) || b.is_subset(e))
    }

    /// Probability of a measurable event.
    pub fn prob_of(&self, e: &Event) -> Result<Prob, ProbError> {
        let mut total = Prob::zero();
        for (b, p) in &self.blocks {
            if b.is_subset(e) {
                total = &total + p;
            } else if !b.is_disjoint(e) {
                return Err(ProbError::NotMeasurable);
            }
        }
        Ok(total)
    }

    /// Condition on a measurable event of positive probability: same
    /// σ-algebra, rescaled measure, completed.
    pub fn condition(&self, e: &Event) -> Result<Self, ProbError> {
        let pe = self.prob_of(e)?;
        if pe.is_zero() {
            return Err(ProbError::ZeroProbabilityEvent);
        }
        let blocks = self
            .blocks
            .iter()
            .filter(|(b, _)| b.is_subset(e))
            .map(|(b, p)| (b.clone(), p / &pe))
            .collect();
        Ok(Self::from_positive_blocks(self.domain.clone(), blocks))
    }

    /// The extension order: after domain alignment, `self`'s σ-algebra is
    /// contained in `other`'s and the measures agree on it.
    pub fn extension_leq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        // Null sets may only grow, so b's support must lie inside a's.
        if !b.support().is_subset(&a.support()) {
            return false;
        }
        for (ba, pa) in &a.blocks {
            let mut mass = Prob::zero();
            for (bb, pb) in &b.blocks {
                if bb.is_subset(ba) {
                    mass = &mass + pb;
                } else if !bb.is_disjoint(ba) {
                    return false;
                }
            }
            if &mass != pa {
                return false;
            }
        }
        true
    }

    /// The sure core: the subspace of probability-0/1 events. As a completed
    /// space this merges all atoms into one support block.
    pub fn sure_core(&self) -> Self {
        FinProbSpace::from_positive_blocks(
            self.domain.clone(),
            vec![(self.support(), Prob::one())],
        )
    }

    /// Equivalence up to domain extension.
    pub fn space_equiv(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a == b
    }

    /// A random variable is measurable when it is constant on every atom.
    pub fn is_measurable<T: Clone + PartialEq>(&self, rv: &RandVar<T>) -> bool {
        self.blocks.iter().all(|(e, _)| rv.constant_on(e).is_some())
    }

    /// Push-forward of the measure along a measurable random variable.
    pub fn distribution_of<T: Ord + Clone>(&self, rv: &RandVar<T>) -> Result<FinDist<T>, ProbError> {
        let mut weights = Vec::with_capacity(self.blocks.len());
        for (e, p) in &self.blocks {
            let v = rv.constant_on(e).ok_or(ProbError::NotMeasurable)?;
            weights.push((v.clone(), p.clone()));
        }
        Ok(FinDist::new(weights).expect("blocks carry total mass 1"))
    }

    /// Coarsen by the level sets of a measurable random variable: the
    /// smallest subspace of `self` in which `rv` is measurable.
    pub fn coarsen_by<T: Ord + Clone>(&self, rv: &RandVar<T>) -> Result<Self, ProbError> {
        let mut groups: std::collections::BTreeMap<T, (Event, Prob)> = Default::default();
        for (e, p) in &self.blocks {
            let v = rv.constant_on(e).ok_or(ProbError::NotMeasurable)?.clone();
            match groups.entry(v) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert((e.clone(), p.clone()));
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    let (ev, pv) = slot.get_mut();
                    *ev = ev.union(e);
                    *pv = &*pv + p;
                }
            }
        }
        Ok(Self::from_positive_blocks(
            self.domain.clone(),
            groups.into_values().collect(),
        ))
    }
}

impl PartialEq for FinProbSpace {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|((ea, pa), (eb, pb))| pa == pb && ea.sem_eq(eb))
    }
}

impl Eq for FinProbSpace {}

impl fmt::Display for FinProbSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨|domain|={}", self.domain.len())?;
        for (e, p) in &self.blocks {
            write!(f, "; {e}: {p}")?;
        }
        write!(f, "⟩")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{solve_independent_product, DenseSpace, ProductSolution};
    use crate::prob::Outcome;

    fn r(n: u32) -> Rid {
        Rid(n)
    }

    fn dom(rids: &[u32]) -> BTreeSet<Rid> {
        rids.iter().map(|n| Rid(*n)).collect()
    }

    fn ev(domain: &BTreeSet<Rid>, fixed: &[(u32, bool)]) -> Event {
        Event::of_cylinder(
            domain.clone(),
            Cylinder::from_fixed(fixed.iter().map(|(n, b)| (Rid(*n), *b))),
        )
    }

    #[test]
    fn make_space_fair_coin() {
        let d = dom(&[1]);
        let s = FinProbSpace::make_space(
            d.clone(),
            vec![(ev(&d, &[(1, true)]), Prob::ratio(1, 2)), (ev(&d, &[(1, false)]), Prob::ratio(1, 2))],
        )
        .unwrap();
        assert_eq!(s, FinProbSpace::fair_coin(r(1)));
    }

    #[test]
    fn make_space_trivial() {
        let s = FinProbSpace::make_space(BTreeSet::new(), vec![(Event::full(BTreeSet::new()), Prob::one())])
            .unwrap();
        assert_eq!(s, FinProbSpace::trivial());
        assert_eq!(s.num_atoms(), 1);
    }

    #[test]
    fn make_space_completes_zero_blocks() {
        let d = dom(&[1]);
        let s = FinProbSpace::make_space(
            d.clone(),
            vec![(ev(&d, &[(1, true)]), Prob::one()), (ev(&d, &[(1, false)]), Prob::zero())],
        )
        .unwrap();
        // The zero block leaves the positive partition entirely.
        assert_eq!(s.num_atoms(), 1);
        assert!(s.support().sem_eq(&ev(&d, &[(1, true)])));
    }

    #[test]
    fn make_space_rejects_bad_inputs() {
        let d = dom(&[1]);
        let overlap = FinProbSpace::make_space(
            d.clone(),
            vec![(Event::full(d.clone()), Prob::ratio(1, 2)), (ev(&d, &[(1, true)]), Prob::ratio(1, 2))],
        );
        assert_eq!(overlap.unwrap_err(), ProbError::NotAPartition);
        let gap = FinProbSpace::make_space(d.clone(), vec![(ev(&d, &[(1, true)]), Prob::one())]);
        assert_eq!(gap.unwrap_err(), ProbError::NotAPartition);
        let bad_sum = FinProbSpace::make_space(
            d.clone(),
            vec![(ev(&d, &[(1, true)]), Prob::ratio(1, 2)), (ev(&d, &[(1, false)]), Prob::ratio(1, 4))],
        );
        assert!(matches!(bad_sum.unwrap_err(), ProbError::ProbSumNotOne { .. }));
    }

    #[test]
    fn extend_trivial_space() {
        let s = FinProbSpace::trivial().extend_domain(&dom(&[1])).unwrap();
        assert_eq!(s.num_atoms(), 1);
        assert_eq!(s.blocks()[0].1, Prob::one());
        assert_eq!(s.blocks()[0].0.count_outcomes(), 2u32.into());
    }

    #[test]
    fn extend_fair_coin_matches_dense_oracle() {
        let s = FinProbSpace::fair_coin(r(1));
        let ext = s.extend_domain(&dom(&[2])).unwrap();
        assert_eq!(ext.num_atoms(), 2);
        for (e, p) in ext.blocks() {
            assert_eq!(p, &Prob::ratio(1, 2));
            assert_eq!(e.count_outcomes(), 2u32.into());
        }
        let dense = DenseSpace::of_space(&s).extend(&[r(2)]);
        assert_eq!(DenseSpace::of_space(&ext), dense);
    }

    #[test]
    fn extend_by_nothing_is_identity() {
        let s = FinProbSpace::fair_coin(r(1));
        assert_eq!(s.extend_domain(&BTreeSet::new()).unwrap(), s);
    }

    #[test]
    fn extend_rejects_overlap() {
        let s = FinProbSpace::fair_coin(r(1));
        assert_eq!(s.extend_domain(&dom(&[1])).unwrap_err(), ProbError::DomainOverlap);
    }

    #[test]
    fn iprod_product_law() {
        let s = FinProbSpace::fair_coin(r(1)).iprod(&FinProbSpace::coin(r(2), Prob::ratio(1, 3))).unwrap();
        let both = ev(s.domain(), &[(1, true), (2, true)]);
        assert_eq!(s.prob_of(&both).unwrap(), Prob::ratio(1, 6));
        assert_eq!(s.num_atoms(), 4);
    }

    #[test]
    fn iprod_unit() {
        let s = FinProbSpace::fair_coin(r(1));
        assert_eq!(s.iprod(&FinProbSpace::trivial()).unwrap(), s);
        assert_eq!(FinProbSpace::trivial().iprod(&s).unwrap(), s);
    }

    #[test]
    fn iprod_self_overlap_undefined() {
        // Confirmed by the independent solver: no distribution satisfies
        // μ(E)=μ(E)² except at 0/1, and the fair coin block has measure 1/2.
        let s = FinProbSpace::fair_coin(r(1));
        assert!(s.iprod(&s).is_none());
        let d = DenseSpace::of_space(&s);
        assert_eq!(solve_independent_product(&d, &d.clone()), ProductSolution::None);
    }

    #[test]
    fn iprod_agrees_with_solver_when_defined() {
        let a = FinProbSpace::fair_coin(r(1));
        let b = FinProbSpace::coin(r(2), Prob::ratio(1, 3));
        let prod = a.iprod(&b).unwrap();
        let (ax, bx) = a.aligned(&b);
        match solve_independent_product(&DenseSpace::of_space(&ax), &DenseSpace::of_space(&bx)) {
            ProductSolution::Unique(sol) => assert_eq!(sol, DenseSpace::of_space(&prod)),
            other => panic!("expected unique product, got {other:?}"),
        }
    }

    #[test]
    fn condition_on_atom_gives_dirac() {
        let s = FinProbSpace::fair_coin(r(1));
        let c = s.condition(&ev(s.domain(), &[(1, true)])).unwrap();
        assert_eq!(c.num_atoms(), 1);
        assert_eq!(c.blocks()[0].1, Prob::one());
        assert!(c.support().sem_eq(&ev(s.domain(), &[(1, true)])));
    }

    #[test]
    fn condition_on_full_cube_is_identity() {
        let s = FinProbSpace::fair_coin(r(1));
        assert_eq!(s.condition(&Event::full(s.domain().clone())).unwrap(), s);
    }

    #[test]
    fn condition_product_leaves_other_coin_fair() {
        let s = FinProbSpace::fair_coin(r(1)).iprod(&FinProbSpace::fair_coin(r(2))).unwrap();
        let e = ev(s.domain(), &[(1, true)]);
        let c = s.condition(&e).unwrap();
        // r2 is still fair afterwards.
        let t2 = ev(s.domain(), &[(2, true)]);
        assert_eq!(c.prob_of(&t2).unwrap(), Prob::ratio(1, 2));
        // Matches the definitional formula applied by the dense oracle.
        let dense = DenseSpace::of_space(&s);
        let expected = dense.condition(&dense.event_from(&e)).unwrap();
        assert_eq!(DenseSpace::of_space(&c), expected);
    }

    #[test]
    fn condition_error_cases() {
        // fair(r1) extended to {r1,r2}: the blocks still only know about r1,
        // so an event that cuts on r2 is not measurable.
        let s = FinProbSpace::fair_coin(r(1)).extend_domain(&dom(&[2])).unwrap();
        let crooked = ev(s.domain(), &[(1, true), (2, true)]);
        assert_eq!(s.condition(&crooked).unwrap_err(), ProbError::NotMeasurable);
        let sure = FinProbSpace::coin(r(1), Prob::one());
        let zero = ev(sure.domain(), &[(1, false)]);
        assert_eq!(sure.condition(&zero).unwrap_err(), ProbError::ZeroProbabilityEvent);
    }

    #[test]
    fn atoms_and_support() {
        let fair = FinProbSpace::fair_coin(r(1));
        assert_eq!(fair.num_atoms(), 2);
        assert!(fair.support().is_full());
        assert_eq!(FinProbSpace::trivial().num_atoms(), 1);
        let lopsided = FinProbSpace::coin(r(1), Prob::one());
        assert_eq!(lopsided.num_atoms(), 1);
        assert!(lopsided.support().sem_eq(&ev(lopsided.domain(), &[(1, true)])));
        // Support of a conditioned space is the conditioning event.
        let s = FinProbSpace::fair_coin(r(1)).iprod(&FinProbSpace::fair_coin(r(2))).unwrap();
        let e = ev(s.domain(), &[(1, true)]);
        assert!(s.condition(&e).unwrap().support().sem_eq(&e));
    }

    #[test]
    fn extension_order() {
        let fair1 = FinProbSpace::fair_coin(r(1));
        let fair2 = FinProbSpace::fair_coin(r(2));
        let prod = fair1.iprod(&fair2).unwrap();
        assert!(FinProbSpace::trivial().extension_leq(&fair1));
        assert!(FinProbSpace::trivial().extension_leq(&prod));
        assert!(fair1.extension_leq(&fair1));
        assert!(fair1.extension_leq(&prod));
        // fair(r1) is not below a space with no information about r1.
        assert!(!fair1.extension_leq(&fair2));
    }

    #[test]
    fn measurability_and_distributions() {
        let fair = FinProbSpace::fair_coin(r(1));
        let selector = RandVar::from_pieces(false, [(Cylinder::fixing(r(1), true), true)]);
        assert!(fair.is_measurable(&selector));
        assert_eq!(fair.distribution_of(&selector).unwrap(), FinDist::bernoulli(Prob::ratio(1, 2)));

        let constant = RandVar::constant(7u8);
        assert_eq!(fair.distribution_of(&constant).unwrap(), FinDist::dirac(7u8));

        // XOR of two fair coins is fair: enumerate the four outcomes.
        let prod = fair.iprod(&FinProbSpace::fair_coin(r(2))).unwrap();
        let mut xor = RandVar::constant(false);
        xor.override_region(Cylinder::from_fixed([(r(1), true), (r(2), false)]), true);
        xor.override_region(Cylinder::from_fixed([(r(1), false), (r(2), true)]), true);
        assert!(prod.is_measurable(&xor));
        assert_eq!(prod.distribution_of(&xor).unwrap(), FinDist::bernoulli(Prob::ratio(1, 2)));
        let mut hand_count = 0;
        for o in prod.support().outcomes() {
            if o.get(r(1)).unwrap() ^ o.get(r(2)).unwrap() {
                hand_count += 1;
            }
        }
        assert_eq!(hand_count, 2);

        // A variable finer than the space is not measurable.
        let fine = RandVar::from_pieces(0u8, [(Cylinder::fixing(r(2), true), 1u8)]);
        assert!(!fair.sure_core().is_measurable(&fine) || fair.sure_core().num_atoms() == 1);
        assert!(!FinProbSpace::fair_coin(r(1)).sure_core().iprod(&fair).unwrap().is_measurable(&fine));
    }

    #[test]
    fn space_equiv_examples() {
        let fair = FinProbSpace::fair_coin(r(1));
        let ext = fair.extend_domain(&dom(&[5])).unwrap();
        assert!(fair.space_equiv(&ext));
        assert!(fair.space_equiv(&fair));
        assert!(!fair.space_equiv(&FinProbSpace::coin(r(1), Prob::ratio(1, 3))));
        assert_ne!(fair, ext);
    }

    #[test]
    fn sure_core_examples() {
        let fair = FinProbSpace::fair_coin(r(1));
        let core = fair.sure_core();
        assert_eq!(core.num_atoms(), 1);
        assert!(core.space_equiv(&FinProbSpace::trivial()));
        // A δ-like space is its own core.
        let sure = FinProbSpace::coin(r(1), Prob::one());
        assert_eq!(sure.sure_core(), sure);
        // Idempotence.
        let s = fair.iprod(&FinProbSpace::coin(r(2), Prob::one())).unwrap();
        assert_eq!(s.sure_core().sure_core(), s.sure_core());
    }

    #[test]
    fn pushforward_support_is_image_of_support() {
        let s = FinProbSpace::coin(r(1), Prob::one());
        let rv = RandVar::from_pieces(0u8, [(Cylinder::fixing(r(1), true), 1u8)]);
        let d = s.distribution_of(&rv).unwrap();
        // The null r1=false outcome does not contribute a value.
        assert_eq!(d, FinDist::dirac(1u8));
    }

    #[test]
    fn outcome_eval_consistency() {
        let s = FinProbSpace::fair_coin(r(1));
        let o = Outcome::from_bits([(r(1), true)]);
        assert!(s.support().contains_outcome(&o));
    }
}
