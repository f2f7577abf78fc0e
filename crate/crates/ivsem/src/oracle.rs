//! Dense reference implementations used to cross-check the cylinder-based
//! probability kernel, independent of it by construction.
//!
//! Everything here enumerates the full outcome cube explicitly, so it only
//! works for small domains. It lives in the library (rather than a test
//! module) so integration tests and the verification suites can reach it, but
//! it is not part of the modelling API.

use std::collections::BTreeSet;

use num::rational::BigRational;
use num::{One, Zero};

use crate::prob::{Event, FinProbSpace, Outcome, Rid};

/// A finite space with the full partition materialized, including null
/// singletons: outcomes are bitmasks over the sorted rid list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseSpace {
    pub rids: Vec<Rid>,
    /// Every block of the completed partition, with its probability; blocks
    /// are sets of outcome masks, sorted by least mask for canonicity.
    pub blocks: Vec<(BTreeSet<u64>, BigRational)>,
}

impl DenseSpace {
    pub fn new(rids: Vec<Rid>, mut blocks: Vec<(BTreeSet<u64>, BigRational)>) -> Self {
        blocks.sort_by_key(|(b, _)| b.iter().next().copied());
        DenseSpace { rids, blocks }
    }

    /// Split every zero block into singletons.
    pub fn complete(&self) -> DenseSpace {
        let mut blocks = Vec::new();
        for (b, p) in &self.blocks {
            if p.is_zero() {
                for m in b {
                    blocks.push((BTreeSet::from([*m]), BigRational::zero()));
                }
            } else {
                blocks.push((b.clone(), p.clone()));
            }
        }
        DenseSpace::new(self.rids.clone(), blocks)
    }

    fn mask_of(&self, o: &Outcome) -> u64 {
        let mut m = 0u64;
        for (i, r) in self.rids.iter().enumerate() {
            if o.get(*r) == Some(true) {
                m |= 1 << i;
            }
        }
        m
    }

    /// Materialize a production space: its positive blocks plus the implicit
    /// null singletons.
    pub fn of_space(s: &FinProbSpace) -> DenseSpace {
        let rids: Vec<Rid> = s.domain().iter().copied().collect();
        assert!(rids.len() <= 16, "dense oracle is for small domains");
        let mut dense = DenseSpace { rids, blocks: Vec::new() };
        let mut covered: BTreeSet<u64> = BTreeSet::new();
        for (e, p) in s.blocks() {
            let masks: BTreeSet<u64> = e.outcomes().iter().map(|o| dense.mask_of(o)).collect();
            covered.extend(&masks);
            dense.blocks.push((masks, p.as_rational().clone()));
        }
        for m in 0..(1u64 << dense.rids.len()) {
            if !covered.contains(&m) {
                dense.blocks.push((BTreeSet::from([m]), BigRational::zero()));
            }
        }
        DenseSpace::new(dense.rids.clone(), dense.blocks)
    }

    /// Domain extension, following the definitional formula: each block is
    /// crossed with the full cube over the new rids, probabilities unchanged,
    /// then completed.
    pub fn extend(&self, new: &[Rid]) -> DenseSpace {
        let mut rids = self.rids.clone();
        rids.extend_from_slice(new);
        rids.sort();
        let position: Vec<usize> = self
            .rids
            .iter()
            .map(|r| rids.iter().position(|x| x == r).unwrap())
            .collect();
        let new_positions: Vec<usize> = new
            .iter()
            .map(|r| rids.iter().position(|x| x == r).unwrap())
            .collect();
        let blocks = self
            .blocks
            .iter()
            .map(|(b, p)| {
                let mut grown: BTreeSet<u64> = BTreeSet::new();
                for m in b {
                    // Re-index the old bits, then splice in every assignment
                    // of the new rids.
                    let mut base = 0u64;
                    for (i, pos) in position.iter().enumerate() {
                        if m & (1 << i) != 0 {
                            base |= 1 << pos;
                        }
                    }
                    for assign in 0..(1u64 << new_positions.len()) {
                        let mut mm = base;
                        for (j, pos) in new_positions.iter().enumerate() {
                            if assign & (1 << j) != 0 {
                                mm |= 1 << pos;
                            }
                        }
                        grown.insert(mm);
                    }
                }
                (grown, p.clone())
            })
            .collect();
        DenseSpace::new(rids, blocks).complete()
    }

    /// Conditioning per the definitional formula `μ'(Y) = μ(Y ∩ E) / μ(E)`,
    /// on the same σ-algebra, then completed.
    pub fn condition(&self, event: &BTreeSet<u64>) -> Option<DenseSpace> {
        // Measurability: every block inside or outside the event.
        let mut pe = BigRational::zero();
        for (b, p) in &self.blocks {
            if b.is_subset(event) {
                pe += p;
            } else if !b.is_disjoint(event) {
                return None;
            }
        }
        if pe.is_zero() {
            return None;
        }
        let blocks = self
            .blocks
            .iter()
            .map(|(b, p)| {
                let q = if b.is_subset(event) { p / &pe } else { BigRational::zero() };
                (b.clone(), q)
            })
            .collect();
        Some(DenseSpace::new(self.rids.clone(), blocks).complete())
    }

    pub fn event_from(&self, e: &Event) -> BTreeSet<u64> {
        e.with_domain(self.rids.iter().copied().collect())
            .outcomes()
            .iter()
            .map(|o| self.mask_of(o))
            .collect()
    }
}

/// Outcome of the brute-force product solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductSolution {
    /// No distribution on the common refinement satisfies the product law.
    None,
    /// Exactly one does.
    Unique(DenseSpace),
    /// More than one does.
    Ambiguous,
}

/// Search for all distributions on the common refinement of two (aligned,
/// completed) dense spaces satisfying `ν(E1 ∩ E2) = μ1(E1) · μ2(E2)` on all
/// generator pairs, by exact linear algebra. The constraints on partition
/// blocks extend to all measurable pairs by additivity.
pub fn solve_independent_product(a: &DenseSpace, b: &DenseSpace) -> ProductSolution {
    assert_eq!(a.rids, b.rids, "spaces must be aligned first");
    // Refinement cells: nonempty pairwise intersections.
    let mut cells: Vec<(BTreeSet<u64>, usize, usize)> = Vec::new();
    for (i, (ba, _)) in a.blocks.iter().enumerate() {
        for (j, (bb, _)) in b.blocks.iter().enumerate() {
            let cell: BTreeSet<u64> = ba.intersection(bb).copied().collect();
            if !cell.is_empty() {
                cells.push((cell, i, j));
            }
        }
    }
    let n = cells.len();
    // Equations: one per block pair, plus total mass.
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (i, (_, pa)) in a.blocks.iter().enumerate() {
        for (j, (_, pb)) in b.blocks.iter().enumerate() {
            let mut row = vec![BigRational::zero(); n + 1];
            for (k, (_, ci, cj)) in cells.iter().enumerate() {
                if *ci == i && *cj == j {
                    row[k] = BigRational::one();
                }
            }
            row[n] = pa * pb;
            rows.push(row);
        }
    }
    let mut total = vec![BigRational::one(); n + 1];
    total[n] = BigRational::one();
    rows.push(total);

    match gauss_solve(rows, n) {
        GaussResult::Inconsistent => ProductSolution::None,
        GaussResult::Underdetermined => ProductSolution::Ambiguous,
        GaussResult::Unique(xs) => {
            if xs.iter().any(|x| x.is_negative()) {
                return ProductSolution::None;
            }
            let blocks = cells
                .into_iter()
                .zip(xs)
                .map(|((cell, _, _), p)| (cell, p))
                .collect();
            ProductSolution::Unique(DenseSpace::new(a.rids.clone(), blocks).complete())
        }
    }
}

enum GaussResult {
    Inconsistent,
    Underdetermined,
    Unique(Vec<BigRational>),
}

/// Exact Gaussian elimination on an augmented matrix with `n` unknowns.
fn gauss_solve(mut rows: Vec<Vec<BigRational>>, n: usize) -> GaussResult {
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let scale = rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x /= &scale;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in 0..=n {
                    let delta = &f * &rows[r][c];
                    rows[i][c] -= delta;
                }
            }
        }
        pivot_rows.push(col);
        r += 1;
    }
    // Any leftover row 0 = nonzero is inconsistent.
    for row in rows.iter().skip(r) {
        if row[..n].iter().all(|x| x.is_zero()) && !row[n].is_zero() {
            return GaussResult::Inconsistent;
        }
    }
    if pivot_rows.len() < n {
        return GaussResult::Underdetermined;
    }
    let mut xs = vec![BigRational::zero(); n];
    for (row, col) in pivot_rows.into_iter().enumerate() {
        xs[col] = rows[row][n].clone();
    }
    GaussResult::Unique(xs)
}

use num::Signed;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Prob;

    #[test]
    fn solver_pins_fair_product() {
        let a = DenseSpace::of_space(&FinProbSpace::fair_coin(Rid(0)));
        let b = DenseSpace::of_space(&FinProbSpace::fair_coin(Rid(1)));
        let (a, b) = (a.extend(&[Rid(1)]), b.extend(&[Rid(0)]));
        match solve_independent_product(&a, &b) {
            ProductSolution::Unique(s) => {
                assert_eq!(s.blocks.len(), 4);
                for (_, p) in &s.blocks {
                    assert_eq!(p, &BigRational::new(1.into(), 4.into()));
                }
            }
            other => panic!("expected unique solution, got {other:?}"),
        }
    }

    #[test]
    fn solver_rejects_self_product_of_fair_coin() {
        let a = DenseSpace::of_space(&FinProbSpace::fair_coin(Rid(0)));
        assert_eq!(solve_independent_product(&a, &a.clone()), ProductSolution::None);
    }

    #[test]
    fn solver_accepts_self_product_of_sure_space() {
        let d = DenseSpace::of_space(&FinProbSpace::coin(Rid(0), Prob::one()));
        match solve_independent_product(&d, &d.clone()) {
            ProductSolution::Unique(s) => assert_eq!(s, d.complete()),
            other => panic!("expected unique, got {other:?}"),
        }
    }
}
