use std::collections::BTreeSet;

use super::event::Event;
use super::outcome::{Cylinder, Outcome};
use super::rid::Rid;

/// A finitely-supported function from outcomes to `T`: the value at a full
/// outcome depends only on its restriction to `domain`.
///
/// Stored as a list of `(cylinder, value)` pieces; later pieces shadow earlier
/// ones. The first piece always covers the whole cube, so the function is
/// total by construction.
#[derive(Debug, Clone)]
pub struct RandVar<T> {
    domain: BTreeSet<Rid>,
    pieces: Vec<(Cylinder, T)>,
}

impl<T: Clone> RandVar<T> {
    pub fn constant(v: T) -> Self {
        RandVar { domain: BTreeSet::new(), pieces: vec![(Cylinder::top(), v)] }
    }

    /// Build from explicit pieces (later entries shadow earlier ones). The
    /// first piece must cover the whole cube.
    pub fn from_pieces(base: T, overrides: impl IntoIterator<Item = (Cylinder, T)>) -> Self {
        let mut rv = RandVar::constant(base);
        for (c, v) in overrides {
            rv.override_region(c, v);
        }
        rv
    }

    pub fn domain(&self) -> &BTreeSet<Rid> {
        &self.domain
    }

    pub fn pieces(&self) -> &[(Cylinder, T)] {
        &self.pieces
    }

    /// Make the function return `v` on the outcomes matching `cyl`.
    pub fn override_region(&mut self, cyl: Cylinder, v: T) {
        self.domain.extend(cyl.rids());
        self.pieces.push((cyl, v));
    }

    /// Extend the dependency domain without changing the function.
    pub fn extend_domain(&mut self, rids: impl IntoIterator<Item = Rid>) {
        self.domain.extend(rids);
    }

    /// Value at a full outcome; the outcome must assign every rid the
    /// function's pieces mention.
    pub fn eval(&self, o: &Outcome) -> &T {
        for (c, v) in self.pieces.iter().rev() {
            if c.contains_outcome(o) {
                return v;
            }
        }
        unreachable!("base piece covers the cube")
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> RandVar<U> {
        RandVar {
            domain: self.domain.clone(),
            pieces: self.pieces.iter().map(|(c, v)| (c.clone(), f(v))).collect(),
        }
    }

    /// Pointwise combination. The result's domain is the union of the two.
    pub fn zip_with<U: Clone, V: Clone>(&self, other: &RandVar<U>, f: impl Fn(&T, &U) -> V) -> RandVar<V> {
        let mut pieces = Vec::new();
        // Order pieces i-major, j-minor: scanning from the end then picks the
        // latest matching piece of `self`, refined by the latest matching
        // piece of `other`, which is exactly pointwise application.
        for (ci, vi) in &self.pieces {
            for (cj, vj) in &other.pieces {
                if let Some(m) = ci.meet(cj) {
                    pieces.push((m, f(vi, vj)));
                }
            }
        }
        RandVar { domain: self.domain.union(&other.domain).copied().collect(), pieces }
    }

    /// The reachable pieces: each piece's cylinder minus everything shadowing
    /// it, paired with its value. Regions are pairwise disjoint and cover the
    /// cube.
    pub fn regions(&self) -> Vec<(Event, &T)> {
        let dom = self.domain.clone();
        let mut seen = Event::empty(dom.clone());
        let mut out = Vec::new();
        for (c, v) in self.pieces.iter().rev() {
            let region = Event::of_cylinder(dom.clone(), c.clone()).subtract(&seen);
            if !region.is_empty() {
                seen = seen.union(&region);
                out.push((region, v));
            }
        }
        out
    }

    /// Distinct reachable values (one entry per region; values may repeat).
    pub fn reachable_values(&self) -> Vec<&T> {
        self.regions().into_iter().map(|(_, v)| v).collect()
    }

    /// The set of outcomes whose value satisfies `pred`.
    pub fn preimage_event(&self, pred: impl Fn(&T) -> bool) -> Event {
        let mut ev = Event::empty(self.domain.clone());
        for (region, v) in self.regions() {
            if pred(v) {
                ev = ev.union(&region);
            }
        }
        ev
    }
}

impl<T: Clone + PartialEq> RandVar<T> {
    /// If the function is constant on `region`, its value there.
    pub fn constant_on(&self, region: &Event) -> Option<&T> {
        if region.is_empty() {
            return None;
        }
        let full_dom: BTreeSet<Rid> = region.domain().union(&self.domain).copied().collect();
        let mut remaining = region.with_domain(full_dom.clone());
        let mut value: Option<&T> = None;
        for (c, v) in self.pieces.iter().rev() {
            if remaining.is_empty() {
                break;
            }
            let cev = Event::of_cylinder(full_dom.clone(), c.clone());
            let hit = remaining.intersect(&cev);
            if hit.is_empty() {
                continue;
            }
            match value {
                None => value = Some(v),
                Some(w) if w == v => {}
                Some(_) => return None,
            }
            remaining = remaining.subtract(&cev);
        }
        debug_assert!(remaining.is_empty(), "base piece covers the cube");
        value
    }

    /// Semantic equality as functions on outcomes.
    pub fn sem_eq(&self, other: &RandVar<T>) -> bool {
        self.zip_with(other, |a, b| a == b)
            .regions()
            .into_iter()
            .all(|(_, eq)| *eq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u32) -> Rid {
        Rid(n)
    }

    #[test]
    fn later_pieces_shadow() {
        let mut rv = RandVar::constant(0);
        rv.override_region(Cylinder::fixing(r(0), true), 1);
        rv.override_region(Cylinder::from_fixed([(r(0), true), (r(1), true)]), 2);
        let o = Outcome::from_bits([(r(0), true), (r(1), false)]);
        assert_eq!(*rv.eval(&o), 1);
        let o2 = Outcome::from_bits([(r(0), true), (r(1), true)]);
        assert_eq!(*rv.eval(&o2), 2);
        let o3 = Outcome::from_bits([(r(0), false), (r(1), true)]);
        assert_eq!(*rv.eval(&o3), 0);
    }

    #[test]
    fn constant_on_detects_splits() {
        let mut rv = RandVar::constant(0);
        rv.override_region(Cylinder::fixing(r(0), true), 1);
        let dom: BTreeSet<Rid> = [r(0), r(1)].into_iter().collect();
        let whole = Event::full(dom.clone());
        assert_eq!(rv.constant_on(&whole), None);
        let left = Event::of_cylinder(dom.clone(), Cylinder::fixing(r(0), true));
        assert_eq!(rv.constant_on(&left), Some(&1));
        // Constant even though two pieces contribute, because values agree.
        let mut rv2 = RandVar::constant(5);
        rv2.override_region(Cylinder::fixing(r(1), false), 5);
        assert_eq!(rv2.constant_on(&whole), Some(&5));
    }

    #[test]
    fn zip_with_is_pointwise() {
        let mut a = RandVar::constant(1);
        a.override_region(Cylinder::fixing(r(0), true), 2);
        let mut b = RandVar::constant(10);
        b.override_region(Cylinder::fixing(r(1), true), 20);
        let sum = a.zip_with(&b, |x, y| x + y);
        let o = Outcome::from_bits([(r(0), true), (r(1), true)]);
        assert_eq!(*sum.eval(&o), 22);
        let o2 = Outcome::from_bits([(r(0), false), (r(1), true)]);
        assert_eq!(*sum.eval(&o2), 21);
        let o3 = Outcome::from_bits([(r(0), false), (r(1), false)]);
        assert_eq!(*sum.eval(&o3), 11);
    }

    #[test]
    fn sem_eq_ignores_representation() {
        let mut a = RandVar::constant(0);
        a.override_region(Cylinder::fixing(r(0), true), 1);
        let mut b = RandVar::constant(7);
        b.override_region(Cylinder::fixing(r(0), false), 0);
        b.override_region(Cylinder::fixing(r(0), true), 1);
        assert!(a.sem_eq(&b));
        b.override_region(Cylinder::from_fixed([(r(0), true), (r(1), true)]), 9);
        assert!(!a.sem_eq(&b));
    }
}
