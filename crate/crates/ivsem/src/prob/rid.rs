use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

/// A random choice identifier: an abstract name for one boolean coin toss.
///
/// Rids are totally ordered and drawn from a countable supply; outcomes
/// assign each rid a boolean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rid(pub u32);

impl fmt::Display for Rid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// Monotone supply of fresh rids. Never hands out the same rid twice.
#[derive(Debug)]
pub struct RidSupply {
    next: AtomicU32,
}

impl RidSupply {
    pub fn new() -> Self {
        Self::starting_at(0)
    }

    /// Start the counter at `n`; used to exercise rid-naming independence.
    pub fn starting_at(n: u32) -> Self {
        RidSupply { next: AtomicU32::new(n) }
    }

    pub fn fresh(&self) -> Rid {
        Rid(self.next.fetch_add(1, Ordering::Relaxed))
    }
}

impl Default for RidSupply {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supply_never_repeats() {
        let s = RidSupply::new();
        let a = s.fresh();
        let b = s.fresh();
        let c = s.fresh();
        assert!(a < b && b < c);
    }

    #[test]
    fn supply_offset() {
        let s = RidSupply::starting_at(7);
        assert_eq!(s.fresh(), Rid(7));
    }
}
