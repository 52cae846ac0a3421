//! Greedy sibling-group cover with a subset-size cap `c`.
//!
//! Each round picks the largest sibling subset of the uncovered members of
//! size at most `c`, gives it two fresh parents, and removes it. The parent
//! count is within `(a/c + ln c) * sqrt(n)` of optimal, where `a` is the
//! largest sibling-set size, and the number of oracle queries is polynomial
//! for fixed `c`.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::genotypes::{CoverSolution, Individual, Population};
use crate::mendel::{self, Oracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyConfig {
    c: usize,
}

impl GreedyConfig {
    pub fn new(c: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidConfig("c must be at least 1".into()));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> usize {
        self.c
    }
}

/// Largest sibling subset of `uncovered` with at most `c` members.
///
/// Sizes are tried from `min(c, |uncovered|)` downward and, within a size,
/// index tuples in lexicographic order; the first feasible subset wins.
/// `uncovered` is treated as a set and sorted first.
pub fn next_group(
    pop: &Population,
    uncovered: &[usize],
    cfg: GreedyConfig,
    oracle: &Oracle,
) -> Result<Vec<usize>> {
    if uncovered.is_empty() {
        return Err(Error::InvalidInstance("no uncovered members".into()));
    }
    pop.check_indices(uncovered)?;
    let mut pool = uncovered.to_vec();
    pool.sort_unstable();
    pool.dedup();

    for size in (1..=cfg.c.min(pool.len())).rev() {
        for cand in pool.iter().copied().combinations(size) {
            if oracle.is_sibling_set(pop, &cand)? {
                return Ok(cand);
            }
        }
    }
    unreachable!("singletons are always sibling sets")
}

pub fn greedy_cover(pop: &Population, cfg: GreedyConfig, oracle: &Oracle) -> Result<CoverSolution> {
    let calls_before = oracle.calls();
    let mut uncovered: Vec<usize> = (0..pop.n()).collect();
    let mut sol = CoverSolution::empty();

    while !uncovered.is_empty() {
        let group = next_group(pop, &uncovered, cfg, oracle)?;
        let (a, b) = mendel::materialize_parents(pop, &group)?;
        let s = sol.slot_count;
        sol.slot_genotypes.push(Individual::new(format!("slot{s}"), a.loci));
        sol.slot_genotypes.push(Individual::new(format!("slot{}", s + 1), b.loci));
        sol.slot_count += 2;
        sol.family_of_group.push((s, s + 1));
        uncovered.retain(|i| !group.contains(i));
        sol.groups.push(group);
    }
    sol.oracle_calls = oracle.calls() - calls_before;
    Ok(sol)
}

/// `(a/c + ln c) * sqrt(n) * opt`.
pub fn ratio_bound(a: usize, c: usize, n: usize, opt: usize) -> f64 {
    (a as f64 / c as f64 + (c as f64).ln()) * (n as f64).sqrt() * opt as f64
}

/// `n^(c+1) + n`, saturating.
pub fn oracle_call_bound(n: usize, c: usize) -> u128 {
    let n = n as u128;
    n.checked_pow(c as u32 + 1)
        .and_then(|p| p.checked_add(n))
        .unwrap_or(u128::MAX)
}

/// Size of the largest sibling set in `pop`, by enumerating subsets from the
/// largest size down. Exponential; for small populations only.
pub fn max_sibling_set_size(pop: &Population) -> usize {
    let all: Vec<usize> = (0..pop.n()).collect();
    for size in (1..=pop.n()).rev() {
        if all
            .iter()
            .copied()
            .combinations(size)
            .any(|s| mendel::sibling_set_feasible(pop, &s).unwrap_or(false))
        {
            return size;
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genotypes::{parse_population, Genotype};

    fn identical(n: usize) -> Population {
        let members = (0..n)
            .map(|i| Individual::new(format!("m{i}"), vec![Genotype::homozygous(1)]))
            .collect();
        Population::new(1, members).unwrap()
    }

    fn cfg(c: usize) -> GreedyConfig {
        GreedyConfig::new(c).unwrap()
    }

    #[test]
    fn rejects_zero_cap() {
        assert!(GreedyConfig::new(0).is_err());
    }

    #[test]
    fn next_group_examples() {
        let o = Oracle::new();
        assert_eq!(next_group(&identical(4), &[0, 1, 2, 3], cfg(2), &o).unwrap(), vec![0, 1]);
        let p = parse_population("3 1\nA 1/2\nB 3/4\nC 5/6").unwrap();
        assert_eq!(next_group(&p, &[0, 1, 2], cfg(3), &o).unwrap(), vec![0, 1]);
        let worked = parse_population("3 2\nI1 1/2 1/1\nI2 4/3 6/6\nI3 1/2 1/6").unwrap();
        assert_eq!(next_group(&worked, &[0, 1, 2], cfg(3), &o).unwrap(), vec![0, 1, 2]);
        assert!(next_group(&worked, &[], cfg(3), &o).is_err());
    }

    #[test]
    fn next_group_respects_uncovered() {
        let o = Oracle::new();
        assert_eq!(next_group(&identical(4), &[3, 1], cfg(4), &o).unwrap(), vec![1, 3]);
    }

    #[test]
    fn cover_examples() {
        let o = Oracle::new();
        let empty = greedy_cover(&Population::empty(), cfg(2), &o).unwrap();
        assert_eq!((empty.groups.len(), empty.slot_count), (0, 0));

        let s = greedy_cover(&identical(4), cfg(2), &o).unwrap();
        assert_eq!(s.groups, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(s.slot_count, 4);
        s.validate(&identical(4)).unwrap();

        let s = greedy_cover(&identical(4), cfg(4), &o).unwrap();
        assert_eq!(s.groups, vec![vec![0, 1, 2, 3]]);
        assert_eq!(s.slot_count, 2);
    }

    #[test]
    fn oracle_calls_are_the_counter_delta() {
        let o = Oracle::new();
        o.is_sibling_set(&identical(2), &[0]).unwrap();
        let s = greedy_cover(&identical(4), cfg(2), &o).unwrap();
        // round 1: {0,1}; round 2: {2,3}
        assert_eq!(s.oracle_calls, 2);
        assert_eq!(o.calls(), 3);
    }

    #[test]
    fn bounds() {
        assert_eq!(oracle_call_bound(3, 2), 30);
        assert!((ratio_bound(3, 3, 4, 2) - (1.0 + 3f64.ln()) * 4.0).abs() < 1e-12);
        assert_eq!(max_sibling_set_size(&identical(5)), 5);
        let p = parse_population("3 1\nA 1/2\nB 3/4\nC 5/6").unwrap();
        assert_eq!(max_sibling_set_size(&p), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn population() -> impl Strategy<Value = Population> {
            (1usize..=2, 2u32..=5).prop_flat_map(|(ell, alleles)| {
                prop::collection::vec(
                    prop::collection::vec((1..=alleles, 1..=alleles), ell),
                    0..=7,
                )
                .prop_map(move |rows| {
                    let members = rows
                        .into_iter()
                        .enumerate()
                        .map(|(i, loci)| {
                            Individual::new(
                                format!("m{i}"),
                                loci.into_iter().map(|(a, b)| Genotype::new(a, b)).collect(),
                            )
                        })
                        .collect();
                    Population::new(ell, members).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn valid_capped_deterministic(p in population(), c in 1usize..=4) {
                let o = Oracle::new();
                let s = greedy_cover(&p, cfg(c), &o).unwrap();
                s.validate(&p).unwrap();
                prop_assert!(s.max_group_size() <= c);
                prop_assert_eq!(s.slot_count, 2 * s.groups.len());
                prop_assert!(u128::from(s.oracle_calls) <= oracle_call_bound(p.n(), c));
                let again = greedy_cover(&p, cfg(c), &Oracle::new()).unwrap();
                prop_assert_eq!(s, again);
            }

            #[test]
            fn group_size_matches_capped_maximum(p in population(), c in 1usize..=4) {
                prop_assume!(p.n() > 0);
                let all: Vec<usize> = (0..p.n()).collect();
                let g = next_group(&p, &all, cfg(c), &Oracle::new()).unwrap();
                prop_assert_eq!(g.len(), c.min(max_sibling_set_size(&p)));
            }
        }
    }
}
