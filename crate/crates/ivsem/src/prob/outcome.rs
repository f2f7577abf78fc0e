use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::rid::Rid;

// Outcome and Cylinder print the same way: `{r0=T r3=F}`.
macro_rules! fmt_assignment {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{{")?;
            let mut first = true;
            for (r, b) in self.iter() {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{}={}", r, if b { "T" } else { "F" })?;
            }
            write!(f, "}}")
        }
    };
}

/// A total boolean assignment on a finite rid set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Outcome {
    bits: BTreeMap<Rid, bool>,
}

impl Outcome {
    pub fn new() -> Self {
        Outcome { bits: BTreeMap::new() }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = (Rid, bool)>) -> Self {
        Outcome { bits: bits.into_iter().collect() }
    }

    pub fn get(&self, rid: Rid) -> Option<bool> {
        self.bits.get(&rid).copied()
    }

    pub fn set(&mut self, rid: Rid, b: bool) {
        self.bits.insert(rid, b);
    }

    pub fn with(mut self, rid: Rid, b: bool) -> Self {
        self.set(rid, b);
        self
    }

    pub fn domain(&self) -> impl Iterator<Item = Rid> + '_ {
        self.bits.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rid, bool)> + '_ {
        self.bits.iter().map(|(r, b)| (*r, *b))
    }

    /// Restrict to the given rid set; rids absent from the outcome are dropped.
    pub fn restrict(&self, rids: &BTreeSet<Rid>) -> Outcome {
        Outcome {
            bits: self.bits.iter().filter(|(r, _)| rids.contains(r)).map(|(r, b)| (*r, *b)).collect(),
        }
    }
}

impl fmt::Display for Outcome {
    fmt_assignment!();
}

/// A partial boolean assignment, denoting the set of outcomes that agree with
/// it (a cylinder). The empty assignment denotes the whole outcome cube.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cylinder {
    fixed: BTreeMap<Rid, bool>,
}

impl Cylinder {
    /// The whole cube: no rid constrained.
    pub fn top() -> Self {
        Cylinder { fixed: BTreeMap::new() }
    }

    pub fn fixing(rid: Rid, b: bool) -> Self {
        Cylinder { fixed: [(rid, b)].into_iter().collect() }
    }

    pub fn from_fixed(fixed: impl IntoIterator<Item = (Rid, bool)>) -> Self {
        Cylinder { fixed: fixed.into_iter().collect() }
    }

    pub fn of_outcome(o: &Outcome) -> Self {
        Cylinder { fixed: o.iter().collect() }
    }

    pub fn is_top(&self) -> bool {
        self.fixed.is_empty()
    }

    pub fn rids(&self) -> impl Iterator<Item = Rid> + '_ {
        self.fixed.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rid, bool)> + '_ {
        self.fixed.iter().map(|(r, b)| (*r, *b))
    }

    pub fn value_at(&self, rid: Rid) -> Option<bool> {
        self.fixed.get(&rid).copied()
    }

    pub fn num_fixed(&self) -> usize {
        self.fixed.len()
    }

    /// Extend with one more constraint. Panics if `rid` is already fixed to
    /// the opposite value.
    pub fn and_fix(&self, rid: Rid, b: bool) -> Cylinder {
        let mut fixed = self.fixed.clone();
        if let Some(prev) = fixed.insert(rid, b) {
            assert_eq!(prev, b, "contradictory fix of {rid}");
        }
        Cylinder { fixed }
    }

    /// Intersection; `None` when the constraints conflict (empty set).
    pub fn meet(&self, other: &Cylinder) -> Option<Cylinder> {
        // Iterate over the smaller side.
        let (small, large) = if self.fixed.len() <= other.fixed.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut fixed = large.fixed.clone();
        for (r, b) in &small.fixed {
            match fixed.insert(*r, *b) {
                Some(prev) if prev != *b => return None,
                _ => {}
            }
        }
        Some(Cylinder { fixed })
    }

    pub fn is_disjoint(&self, other: &Cylinder) -> bool {
        let (small, large) = if self.fixed.len() <= other.fixed.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .fixed
            .iter()
            .any(|(r, b)| matches!(large.fixed.get(r), Some(lb) if lb != b))
    }

    /// Set containment: every outcome of `other` also lies in `self`.
    pub fn contains_cyl(&self, other: &Cylinder) -> bool {
        self.fixed
            .iter()
            .all(|(r, b)| other.fixed.get(r) == Some(b))
    }

    pub fn contains_outcome(&self, o: &Outcome) -> bool {
        self.fixed.iter().all(|(r, b)| o.get(*r) == Some(*b))
    }

    /// `self \ other` as a list of pairwise-disjoint cylinders.
    pub fn subtract(&self, other: &Cylinder) -> Vec<Cylinder> {
        if self.is_disjoint(other) {
            return vec![self.clone()];
        }
        // Constraints of `other` on rids that `self` leaves free, in rid order.
        let extra: Vec<(Rid, bool)> = other
            .fixed
            .iter()
            .filter(|(r, _)| !self.fixed.contains_key(r))
            .map(|(r, b)| (*r, *b))
            .collect();
        let mut out = Vec::with_capacity(extra.len());
        let mut prefix = self.clone();
        for (r, b) in extra {
            out.push(prefix.and_fix(r, !b));
            prefix = prefix.and_fix(r, b);
        }
        out
    }
}

impl fmt::Display for Cylinder {
    fmt_assignment!();
}
