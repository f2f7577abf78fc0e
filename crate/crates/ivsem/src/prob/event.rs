use std::collections::BTreeSet;
use std::fmt;

use num::BigUint;

use super::outcome::{Cylinder, Outcome};
use super::rid::Rid;

/// A measurable set of outcomes over a finite rid domain, stored as a finite
/// union of pairwise-disjoint cylinders.
///
/// The representation is not canonical (the same set admits many cylinder
/// decompositions), so equality of events is semantic: mutual containment.
#[derive(Debug, Clone)]
pub struct Event {
    domain: BTreeSet<Rid>,
    cyls: Vec<Cylinder>,
}

impl Event {
    pub fn empty(domain: BTreeSet<Rid>) -> Self {
        Event { domain, cyls: Vec::new() }
    }

    pub fn full(domain: BTreeSet<Rid>) -> Self {
        Event { domain, cyls: vec![Cylinder::top()] }
    }

    /// Event of all outcomes matching `cyl`. The cylinder's rids must lie in
    /// `domain`.
    pub fn of_cylinder(domain: BTreeSet<Rid>, cyl: Cylinder) -> Self {
        debug_assert!(cyl.rids().all(|r| domain.contains(&r)));
        Event { domain, cyls: vec![cyl] }
    }

    pub fn of_outcomes<'a>(domain: BTreeSet<Rid>, outcomes: impl IntoIterator<Item = &'a Outcome>) -> Self {
        let mut ev = Event::empty(domain);
        for o in outcomes {
            ev = ev.union(&Event::of_cylinder(ev.domain.clone(), Cylinder::of_outcome(o)));
        }
        ev
    }

    pub fn domain(&self) -> &BTreeSet<Rid> {
        &self.domain
    }

    pub fn cylinders(&self) -> &[Cylinder] {
        &self.cyls
    }

    pub fn is_empty(&self) -> bool {
        self.cyls.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    pub fn contains_outcome(&self, o: &Outcome) -> bool {
        self.cyls.iter().any(|c| c.contains_outcome(o))
    }

    fn union_domain(&self, other: &Event) -> BTreeSet<Rid> {
        self.domain.union(&other.domain).copied().collect()
    }

    /// Reinterpret over a larger domain. The set of described outcomes is the
    /// cylinder extension; the representation does not change.
    pub fn with_domain(&self, domain: BTreeSet<Rid>) -> Event {
        debug_assert!(self.domain.is_subset(&domain));
        Event { domain, cyls: self.cyls.clone() }
    }

    pub fn intersect(&self, other: &Event) -> Event {
        let mut cyls = Vec::new();
        for a in &self.cyls {
            for b in &other.cyls {
                if let Some(m) = a.meet(b) {
                    cyls.push(m);
                }
            }
        }
        Event { domain: self.union_domain(other), cyls }
    }

    pub fn subtract(&self, other: &Event) -> Event {
        let mut cyls = self.cyls.clone();
        for b in &other.cyls {
            let mut next = Vec::new();
            for a in cyls {
                next.extend(a.subtract(b));
            }
            cyls = next;
        }
        Event { domain: self.union_domain(other), cyls }
    }

    pub fn union(&self, other: &Event) -> Event {
        let mut out = other.subtract(self);
        out.cyls.extend(self.cyls.iter().cloned());
        out
    }

    pub fn complement(&self) -> Event {
        Event::full(self.domain.clone()).subtract(self)
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.cyls
            .iter()
            .all(|a| other.cyls.iter().all(|b| a.is_disjoint(b)))
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.subtract(other).is_empty()
    }

    /// Semantic equality (the cylinder decompositions may differ).
    pub fn sem_eq(&self, other: &Event) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    /// Number of outcomes in the event, counted over this event's domain.
    pub fn count_outcomes(&self) -> BigUint {
        let n = self.domain.len();
        let mut total = BigUint::from(0u32);
        for c in &self.cyls {
            total += BigUint::from(1u32) << (n - c.num_fixed());
        }
        total
    }

    /// All outcomes of the event, in lexicographic order over the sorted
    /// domain (false < true). Intended for small domains only.
    pub fn outcomes(&self) -> Vec<Outcome> {
        let rids: Vec<Rid> = self.domain.iter().copied().collect();
        let mut out = Vec::new();
        let mut scratch = Outcome::new();
        self.enumerate_rec(&rids, 0, &mut scratch, &mut out);
        out
    }

    fn enumerate_rec(&self, rids: &[Rid], i: usize, cur: &mut Outcome, out: &mut Vec<Outcome>) {
        if i == rids.len() {
            if self.contains_outcome(cur) {
                out.push(cur.clone());
            }
            return;
        }
        for b in [false, true] {
            cur.set(rids[i], b);
            self.enumerate_rec(rids, i + 1, cur, out);
        }
    }

    /// Bit pattern of the least outcome in the event (false < true,
    /// rids in ascending order); `None` for the empty event. Used as the
    /// canonical block ordering.
    pub fn min_outcome_bits(&self) -> Option<Vec<bool>> {
        let rids: Vec<Rid> = self.domain.iter().copied().collect();
        self.cyls
            .iter()
            .map(|c| {
                rids.iter()
                    .map(|r| c.value_at(*r).unwrap_or(false))
                    .collect::<Vec<bool>>()
            })
            .min()
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cyls.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.cyls.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(rids: &[u32]) -> BTreeSet<Rid> {
        rids.iter().map(|n| Rid(*n)).collect()
    }

    #[test]
    fn boolean_algebra_on_two_rids() {
        let d = dom(&[0, 1]);
        let a = Event::of_cylinder(d.clone(), Cylinder::fixing(Rid(0), true));
        let b = Event::of_cylinder(d.clone(), Cylinder::fixing(Rid(1), true));
        let both = a.intersect(&b);
        assert_eq!(both.count_outcomes(), BigUint::from(1u32));
        let either = a.union(&b);
        assert_eq!(either.count_outcomes(), BigUint::from(3u32));
        assert!(either.complement().sem_eq(&a.complement().intersect(&b.complement())));
        assert!(a.subtract(&b).is_disjoint(&b));
        assert!(Event::full(d.clone()).sem_eq(&a.union(&a.complement())));
        assert!(!a.sem_eq(&b));
        assert!(a.sem_eq(&a.clone()));
    }

    #[test]
    fn outcome_enumeration_order() {
        let d = dom(&[0, 1]);
        let full = Event::full(d);
        let os = full.outcomes();
        assert_eq!(os.len(), 4);
        assert_eq!(os[0].get(Rid(0)), Some(false));
        assert_eq!(os[0].get(Rid(1)), Some(false));
        assert_eq!(os[3].get(Rid(0)), Some(true));
    }

    #[test]
    fn min_outcome_key() {
        let d = dom(&[0, 1]);
        let a = Event::of_cylinder(d.clone(), Cylinder::fixing(Rid(0), true));
        assert_eq!(a.min_outcome_bits(), Some(vec![true, false]));
        assert_eq!(Event::full(d.clone()).min_outcome_bits(), Some(vec![false, false]));
        assert_eq!(Event::empty(d).min_outcome_bits(), None);
    }
}
