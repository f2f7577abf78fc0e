use std::collections::BTreeMap;
use std::fmt;

use num::rational::BigRational;
use num::Zero;

use super::rational::Prob;
use crate::error::ProbError;

/// A finitely-supported exact distribution: weights sum to 1 and every stored
/// weight is strictly positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinDist<A: Ord> {
    weights: BTreeMap<A, Prob>,
}

impl<A: Ord + Clone> FinDist<A> {
    pub fn new(weights: impl IntoIterator<Item = (A, Prob)>) -> Result<Self, ProbError> {
        let mut map: BTreeMap<A, Prob> = BTreeMap::new();
        let mut total = BigRational::zero();
        for (a, p) in weights {
            if p.is_zero() {
                continue;
            }
            total += p.as_rational();
            match map.entry(a) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(p);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let merged = Prob::from_rational(e.get().as_rational() + p.as_rational());
                    e.insert(merged);
                }
            }
        }
        if !num::One::is_one(&total) {
            return Err(ProbError::DistSumNotOne { sum: total.to_string() });
        }
        Ok(FinDist { weights: map })
    }

    pub fn dirac(a: A) -> Self {
        FinDist { weights: [(a, Prob::one())].into_iter().collect() }
    }

    pub fn prob(&self, a: &A) -> Prob {
        self.weights.get(a).cloned().unwrap_or_else(Prob::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &A> {
        self.weights.keys()
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&A, &Prob)> {
        self.weights.iter()
    }

    pub fn is_dirac(&self) -> bool {
        self.weights.len() == 1
    }

    pub fn map<B: Ord + Clone>(&self, f: impl Fn(&A) -> B) -> FinDist<B> {
        FinDist::new(self.weights.iter().map(|(a, p)| (f(a), p.clone())))
            .expect("map preserves total mass")
    }

    /// Monadic bind: mixture of `f(a)` weighted by the mass of `a`.
    pub fn bind<B: Ord + Clone>(&self, f: impl Fn(&A) -> FinDist<B>) -> FinDist<B> {
        let mut acc: Vec<(B, Prob)> = Vec::new();
        for (a, p) in &self.weights {
            for (b, q) in f(a).weights {
                acc.push((b, p * &q));
            }
        }
        FinDist::new(acc).expect("bind preserves total mass")
    }

    /// The dependent product `μ ⊛ κ` over pairs: weight of `(v, w)` is
    /// `μ(v) · κ(v)(w)`.
    pub fn fuse<B: Ord + Clone>(&self, kappa: impl Fn(&A) -> FinDist<B>) -> FinDist<(A, B)> {
        let mut acc: Vec<((A, B), Prob)> = Vec::new();
        for (a, p) in &self.weights {
            for (b, q) in kappa(a).weights {
                acc.push(((a.clone(), b), p * &q));
            }
        }
        FinDist::new(acc).expect("fuse preserves total mass")
    }

    /// Product of independent distributions.
    pub fn product<B: Ord + Clone>(&self, other: &FinDist<B>) -> FinDist<(A, B)> {
        self.fuse(|_| other.clone())
    }
}

impl FinDist<bool> {
    /// `Ber(p)`: `true` with probability `p`.
    pub fn bernoulli(p: Prob) -> Self {
        FinDist::new([(true, p.clone()), (false, p.complement())]).expect("mass 1")
    }
}

impl FinDist<i64> {
    /// Uniform over `0 ..= n-1`.
    pub fn uniform(n: i64) -> Self {
        assert!(n > 0);
        FinDist::new((0..n).map(|k| (k, Prob::ratio(1, n)))).expect("mass 1")
    }

    /// Binomial(n, p): number of successes in n independent `Ber(p)` trials.
    pub fn binomial(n: u32, p: Prob) -> Self {
        let mut d = FinDist::dirac(0i64);
        for _ in 0..n {
            d = d.bind(|k| {
                let k = *k;
                FinDist::new([(k + 1, p.clone()), (k, p.complement())]).expect("mass 1")
            });
        }
        d
    }
}

impl<A: Ord + fmt::Display> fmt::Display for FinDist<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, p)) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}: {p}")?;
        }
        write!(f, "}}")
    }
}
