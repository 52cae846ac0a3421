//! The sibling-set oracle.
//!
//! A child takes one allele from each parent at every locus. Whether a set of
//! individuals can share a pair of parents decomposes per locus: parents are
//! arbitrary genotype sequences, so per-locus witnesses compose into two whole
//! parent individuals. At one locus it is enough to search parent genotypes
//! over the alleles observed in the children plus one fresh wildcard symbol,
//! because a parent allele that is never passed on can be anything.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::genotypes::{AlleleId, Genotype, Individual, Population};

/// True if `child` can receive one allele from `p` and the other from `q`.
#[inline]
pub fn genotype_derivable(child: Genotype, p: Genotype, q: Genotype) -> bool {
    (p.contains(child.lo()) && q.contains(child.hi()))
        || (p.contains(child.hi()) && q.contains(child.lo()))
}

pub fn can_be_child_of(child: &Individual, a: &Individual, b: &Individual) -> Result<bool> {
    for other in [a, b] {
        if other.ell() != child.ell() {
            return Err(Error::LocusCountMismatch {
                expected: child.ell(),
                found: other.ell(),
            });
        }
    }
    Ok(child
        .loci
        .iter()
        .zip(a.loci.iter().zip(&b.loci))
        .all(|(&c, (&p, &q))| genotype_derivable(c, p, q)))
}

/// An unordered pair of parent genotypes at one locus, stored with `p <= q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocusParentPair {
    p: Genotype,
    q: Genotype,
}

impl LocusParentPair {
    pub fn new(a: Genotype, b: Genotype) -> Self {
        Self {
            p: a.min(b),
            q: a.max(b),
        }
    }

    pub fn p(&self) -> Genotype {
        self.p
    }

    pub fn q(&self) -> Genotype {
        self.q
    }

    pub fn produces(&self, child: Genotype) -> bool {
        genotype_derivable(child, self.p, self.q)
    }
}

/// One more than the largest allele in `children`, or 0 if there are none.
pub fn wildcard(children: &[Genotype]) -> AlleleId {
    children
        .iter()
        .map(|g| g.hi().0 + 1)
        .max()
        .map_or(AlleleId(0), AlleleId)
}

/// Sorted distinct alleles of `children`.
pub fn observed_alleles(children: &[Genotype]) -> Vec<AlleleId> {
    let mut out: Vec<AlleleId> = children.iter().flat_map(Genotype::alleles).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Observed alleles followed by the wildcard.
pub fn allele_domain(children: &[Genotype]) -> Vec<AlleleId> {
    let mut d = observed_alleles(children);
    d.push(wildcard(children));
    d
}

/// Every genotype over `domain`, in lexicographic order. `domain` must be
/// sorted.
pub fn genotypes_over(domain: &[AlleleId]) -> Vec<Genotype> {
    let mut out = Vec::with_capacity(domain.len() * (domain.len() + 1) / 2);
    for (i, a) in domain.iter().enumerate() {
        for b in &domain[i..] {
            out.push(Genotype::new(a.0, b.0));
        }
    }
    out
}

/// Two parents carry at most four distinct alleles between them.
const MAX_PARENT_ALLELES: usize = 4;

/// All parent-genotype pairs over the observed-plus-wildcard domain that can
/// produce every genotype in `children`, in canonical order.
pub fn locus_feasible(children: &[Genotype]) -> Vec<LocusParentPair> {
    let observed = observed_alleles(children);
    if observed.len() > MAX_PARENT_ALLELES {
        return Vec::new();
    }
    let domain = allele_domain(children);
    let gs = genotypes_over(&domain);
    let mut out = Vec::new();
    for (i, &p) in gs.iter().enumerate() {
        for &q in &gs[i..] {
            if children.iter().all(|&c| genotype_derivable(c, p, q)) {
                out.push(LocusParentPair { p, q });
            }
        }
    }
    out
}

/// Same answer as `!locus_feasible(children).is_empty()`, with early exit.
pub(crate) fn locus_has_parents(children: &[Genotype]) -> bool {
    if children.len() <= 2 {
        return true;
    }
    let observed = observed_alleles(children);
    if observed.len() > MAX_PARENT_ALLELES {
        return false;
    }
    let mut domain = observed;
    domain.push(wildcard(children));
    let gs = genotypes_over(&domain);
    gs.iter().enumerate().any(|(i, &p)| {
        // every child needs an allele from p
        children.iter().all(|c| c.shares_allele(&p))
            && gs[i..]
                .iter()
                .any(|&q| children.iter().all(|&c| genotype_derivable(c, p, q)))
    })
}

/// Uncounted sibling-set test. Prefer [`Oracle::is_sibling_set`] where the
/// number of queries matters.
pub fn sibling_set_feasible(pop: &Population, members: &[usize]) -> Result<bool> {
    pop.check_indices(members)?;
    Ok((0..pop.ell()).all(|j| locus_has_parents(&pop.locus_column(members, j))))
}

/// Sibling-set oracle with a query counter.
///
/// The counter is atomic, so one oracle can be shared by parallel workers and
/// still report an exact total.
#[derive(Debug, Default)]
pub struct Oracle {
    calls: AtomicU64,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn is_sibling_set(&self, pop: &Population, members: &[usize]) -> Result<bool> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        sibling_set_feasible(pop, members)
    }
}

/// Two parents for a sibling set. At each locus the first pair of
/// [`locus_feasible`] is used.
pub fn materialize_parents(pop: &Population, members: &[usize]) -> Result<(Individual, Individual)> {
    pop.check_indices(members)?;
    let mut a = Vec::with_capacity(pop.ell());
    let mut b = Vec::with_capacity(pop.ell());
    for j in 0..pop.ell() {
        let pair = *locus_feasible(&pop.locus_column(members, j))
            .first()
            .ok_or(Error::NotSiblingSet)?;
        a.push(pair.p);
        b.push(pair.q);
    }
    Ok((Individual::new("P0", a), Individual::new("P1", b)))
}

/// Reference oracle: enumerates whole parent individuals jointly over every
/// locus and tests each member with [`can_be_child_of`].
///
/// Candidates at a locus are genotypes over the observed alleles plus a
/// wildcard that share an allele with every member there (each parent passes
/// one allele to each child). Exponential in the locus count; keep inputs
/// small.
pub fn brute_sibling_check(pop: &Population, members: &[usize]) -> Result<bool> {
    pop.check_indices(members)?;
    let children: Vec<&Individual> = members.iter().map(|&i| &pop.members()[i]).collect();

    let per_locus: Vec<Vec<Genotype>> = (0..pop.ell())
        .map(|j| {
            let column = pop.locus_column(members, j);
            genotypes_over(&allele_domain(&column))
                .into_iter()
                .filter(|g| column.iter().all(|c| c.shares_allele(g)))
                .collect()
        })
        .collect();
    if per_locus.iter().any(Vec::is_empty) {
        return Ok(false);
    }

    let mut parents = Vec::new();
    let mut cursor = vec![0usize; per_locus.len()];
    loop {
        let loci = cursor.iter().zip(&per_locus).map(|(&k, c)| c[k]).collect();
        parents.push(Individual::new("candidate", loci));
        // odometer step
        let mut pos = per_locus.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < per_locus[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
        if cursor.iter().all(|&k| k == 0) {
            break;
        }
    }

    for (i, a) in parents.iter().enumerate() {
        for b in &parents[i..] {
            let mut all = true;
            for c in &children {
                if !can_be_child_of(c, a, b)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genotypes::parse_population;

    fn g(a: u32, b: u32) -> Genotype {
        Genotype::new(a, b)
    }

    fn ind(loci: &[(u32, u32)]) -> Individual {
        Individual::new("x", loci.iter().map(|&(a, b)| g(a, b)).collect())
    }

    fn single_locus(rows: &[(u32, u32)]) -> Population {
        let members = rows
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| Individual::new(format!("m{i}"), vec![g(a, b)]))
            .collect();
        Population::new(1, members).unwrap()
    }

    fn worked() -> Population {
        parse_population("3 2\nI1 1/2 1/1\nI2 4/3 6/6\nI3 1/2 1/6").unwrap()
    }

    #[test]
    fn child_of_known_parents() {
        let child = ind(&[(1, 2), (1, 1)]);
        let a = ind(&[(1, 3), (1, 6)]);
        let b = ind(&[(2, 4), (1, 6)]);
        assert!(can_be_child_of(&child, &a, &b).unwrap());
        for c in worked().members() {
            assert!(can_be_child_of(c, &a, &b).unwrap());
        }
    }

    #[test]
    fn child_missing_allele() {
        assert!(!can_be_child_of(&ind(&[(3, 3)]), &ind(&[(1, 1)]), &ind(&[(1, 2)])).unwrap());
        assert!(can_be_child_of(&ind(&[(1, 2)]), &ind(&[(1, 2)]), &ind(&[(1, 2)])).unwrap());
    }

    #[test]
    fn homozygous_child_needs_allele_from_both() {
        assert!(!can_be_child_of(&ind(&[(1, 1)]), &ind(&[(1, 1)]), &ind(&[(2, 3)])).unwrap());
    }

    #[test]
    fn child_locus_mismatch() {
        let r = can_be_child_of(&ind(&[(1, 1)]), &ind(&[(1, 1), (1, 1)]), &ind(&[(1, 1)]));
        assert!(matches!(r, Err(Error::LocusCountMismatch { .. })));
    }

    #[test]
    fn locus_feasible_examples() {
        let pairs = locus_feasible(&[g(1, 2), g(3, 4), g(1, 3)]);
        assert!(pairs.contains(&LocusParentPair::new(g(1, 4), g(2, 3))));
        // brute force over {1,2,3,4,5}: enumerate every genotype pair directly
        let mut expected = Vec::new();
        for a in 1..=5 {
            for b in a..=5 {
                for c in 1..=5 {
                    for d in c..=5 {
                        let (p, q) = (g(a, b), g(c, d));
                        if p <= q
                            && [g(1, 2), g(3, 4), g(1, 3)]
                                .iter()
                                .all(|&ch| genotype_derivable(ch, p, q))
                        {
                            expected.push(LocusParentPair::new(p, q));
                        }
                    }
                }
            }
        }
        expected.sort();
        assert_eq!(pairs, expected);

        assert!(locus_feasible(&[g(1, 2), g(3, 4), g(5, 6)]).is_empty());
        assert_eq!(
            locus_feasible(&[]),
            vec![LocusParentPair::new(g(0, 0), g(0, 0))]
        );
    }

    #[test]
    fn locus_feasible_is_sorted() {
        let pairs = locus_feasible(&[g(1, 1), g(1, 2)]);
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        assert!(!pairs.is_empty());
    }

    #[test]
    fn sibling_examples() {
        let o = Oracle::new();
        assert!(o.is_sibling_set(&worked(), &[0, 1, 2]).unwrap());
        let p = single_locus(&[(1, 2), (3, 4), (5, 6)]);
        assert!(!o.is_sibling_set(&p, &[0, 1, 2]).unwrap());
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert!(o.is_sibling_set(&p, &pair).unwrap());
        }
        assert!(o.is_sibling_set(&p, &[]).unwrap());
        assert_eq!(o.calls(), 6);
        assert!(matches!(
            o.is_sibling_set(&p, &[3]),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn four_allele_bound_over_three_children() {
        // five alleles, no six: still infeasible
        let p = single_locus(&[(1, 2), (3, 4), (1, 5)]);
        assert!(!sibling_set_feasible(&p, &[0, 1, 2]).unwrap());
        assert!(!brute_sibling_check(&p, &[0, 1, 2]).unwrap());
    }

    #[test]
    fn materialize_examples() {
        let pop = worked();
        let (a, b) = materialize_parents(&pop, &[0, 1, 2]).unwrap();
        for c in pop.members() {
            assert!(can_be_child_of(c, &a, &b).unwrap());
        }

        let single = single_locus(&[(1, 1)]);
        let (a, b) = materialize_parents(&single, &[0]).unwrap();
        assert!(a.loci[0].contains(AlleleId(1)) && b.loci[0].contains(AlleleId(1)));

        let pair = single_locus(&[(1, 2), (3, 4)]);
        let (a, b) = materialize_parents(&pair, &[0, 1]).unwrap();
        for c in pair.members() {
            assert!(can_be_child_of(c, &a, &b).unwrap());
        }

        let bad = single_locus(&[(1, 2), (3, 4), (5, 6)]);
        assert!(matches!(
            materialize_parents(&bad, &[0, 1, 2]),
            Err(Error::NotSiblingSet)
        ));
    }

    #[test]
    fn materialize_is_deterministic() {
        let pop = worked();
        assert_eq!(
            materialize_parents(&pop, &[0, 2]).unwrap(),
            materialize_parents(&pop, &[0, 2]).unwrap()
        );
    }

    #[test]
    fn brute_examples() {
        assert!(brute_sibling_check(&worked(), &[0, 1, 2]).unwrap());
        let p = single_locus(&[(1, 2), (3, 4), (5, 6)]);
        assert!(!brute_sibling_check(&p, &[0, 1, 2]).unwrap());
        assert!(brute_sibling_check(&p, &[0, 2]).unwrap());
        assert!(brute_sibling_check(&Population::empty(), &[]).unwrap());
    }

    #[test]
    fn counter_is_exact_across_threads() {
        let o = Oracle::new();
        let pop = worked();
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    for _ in 0..250 {
                        o.is_sibling_set(&pop, &[0, 1]).unwrap();
                    }
                });
            }
        });
        assert_eq!(o.calls(), 1000);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_population() -> impl Strategy<Value = Population> {
            (1usize..=3, 1u32..=6).prop_flat_map(|(ell, alleles)| {
                prop::collection::vec(
                    prop::collection::vec((1..=alleles, 1..=alleles), ell),
                    1..=6,
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

        fn population_and_members() -> impl Strategy<Value = (Population, Vec<usize>)> {
            small_population().prop_flat_map(|p| {
                let n = p.n();
                (Just(p), prop::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=n))
            })
        }

        proptest! {
            #[test]
            fn agrees_with_brute((p, m) in population_and_members()) {
                prop_assert_eq!(
                    sibling_set_feasible(&p, &m).unwrap(),
                    brute_sibling_check(&p, &m).unwrap()
                );
            }

            #[test]
            fn subset_closure((p, m) in population_and_members(), drop in any::<prop::sample::Index>()) {
                if sibling_set_feasible(&p, &m).unwrap() && !m.is_empty() {
                    let mut sub = m.clone();
                    sub.remove(drop.index(m.len()));
                    prop_assert!(sibling_set_feasible(&p, &sub).unwrap());
                }
            }

            #[test]
            fn materialized_parents_verify((p, m) in population_and_members()) {
                if sibling_set_feasible(&p, &m).unwrap() {
                    let (a, b) = materialize_parents(&p, &m).unwrap();
                    for &i in &m {
                        prop_assert!(can_be_child_of(&p.members()[i], &a, &b).unwrap());
                    }
                }
            }

            #[test]
            fn small_sets_always_feasible(p in small_population(), i in 0usize..6, j in 0usize..6) {
                let (i, j) = (i % p.n(), j % p.n());
                prop_assert!(sibling_set_feasible(&p, &[i]).unwrap());
                if i != j {
                    prop_assert!(sibling_set_feasible(&p, &[i, j]).unwrap());
                }
            }

            #[test]
            fn five_alleles_is_infeasible((p, m) in population_and_members()) {
                let too_many = (0..p.ell()).any(|j| observed_alleles(&p.locus_column(&m, j)).len() > 4);
                if too_many {
                    prop_assert!(!sibling_set_feasible(&p, &m).unwrap());
                }
            }
        }
    }
}
