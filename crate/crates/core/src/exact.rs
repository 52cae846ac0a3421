//! Exact solvers for small instances.
//!
//! MIN-PARENT is searched as a slot problem: pick `k` parent slots and give
//! every member an unordered pair of distinct slots (its family). Members that
//! share a family form a sibling group, so the smallest `k` that admits an
//! assignment is the optimum. Whether an assignment can be realized is checked
//! locus by locus, since parents are independent across loci.
//!
//! FIND-MIN-PARENT is searched over subsets of the candidate pool in order of
//! increasing size.

use std::time::{Duration, Instant};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::genotypes::{AlleleId, CoverSolution, FindMinParentInstance, Genotype, Individual, Population};
use crate::mendel::{self, genotype_derivable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "OPTIMAL",
            SolveStatus::Feasible => "FEASIBLE",
            SolveStatus::Infeasible => "INFEASIBLE",
        }
    }
}

impl std::str::FromStr for SolveStatus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "OPTIMAL" => Ok(SolveStatus::Optimal),
            "FEASIBLE" => Ok(SolveStatus::Feasible),
            "INFEASIBLE" => Ok(SolveStatus::Infeasible),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

/// Caps on the exact searches. `None` means unbounded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_slots: Option<usize>,
    pub time_budget: Option<Duration>,
}

impl ExactLimits {
    pub fn unbounded() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: Duration) -> Self {
        Self {
            max_slots: None,
            time_budget: Some(budget),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyAssignment {
    pub slot_count: usize,
    pub family_of_member: Vec<(usize, usize)>,
}

/// Can every slot get a genotype over `domain` so that each child is
/// derivable from its family's two slots?
pub fn locus_slot_assignment_exists(
    locus_children: &[Genotype],
    fa: &FamilyAssignment,
    domain: &[AlleleId],
) -> bool {
    let gts = mendel::genotypes_over(domain);
    slot_witness(locus_children, &fa.family_of_member, fa.slot_count, &gts).is_some()
}

/// Backtracking over slots in index order with forward checking. Returns one
/// genotype per slot, or `None`.
fn slot_witness(
    children: &[Genotype],
    families: &[(usize, usize)],
    k: usize,
    gts: &[Genotype],
) -> Option<Vec<Genotype>> {
    debug_assert_eq!(children.len(), families.len());
    // a slot passes one allele to every child of its families
    let mut cand: Vec<Vec<Genotype>> = (0..k)
        .map(|s| {
            gts.iter()
                .filter(|g| {
                    children
                        .iter()
                        .zip(families)
                        .filter(|(_, &(a, b))| a == s || b == s)
                        .all(|(c, _)| c.shares_allele(g))
                })
                .copied()
                .collect()
        })
        .collect();
    if cand.iter().any(Vec::is_empty) {
        return None;
    }
    // members keyed by their lower slot: (child, higher slot)
    let mut by_low: Vec<Vec<(Genotype, usize)>> = vec![Vec::new(); k];
    for (&c, &(a, b)) in children.iter().zip(families) {
        by_low[a.min(b)].push((c, a.max(b)));
    }
    let mut chosen = Vec::with_capacity(k);
    if assign_slot(0, &mut cand, &by_low, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn assign_slot(
    slot: usize,
    cand: &mut [Vec<Genotype>],
    by_low: &[Vec<(Genotype, usize)>],
    chosen: &mut Vec<Genotype>,
) -> bool {
    if slot == cand.len() {
        return true;
    }
    let options = cand[slot].clone();
    for g in options {
        let saved: Vec<(usize, Vec<Genotype>)> = by_low[slot]
            .iter()
            .map(|&(_, hi)| hi)
            .unique()
            .map(|hi| (hi, cand[hi].clone()))
            .collect();
        let mut ok = true;
        for &(c, hi) in &by_low[slot] {
            cand[hi].retain(|&q| genotype_derivable(c, g, q));
            if cand[hi].is_empty() {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push(g);
            if assign_slot(slot + 1, cand, by_low, chosen) {
                return true;
            }
            chosen.pop();
        }
        for (hi, c) in saved {
            cand[hi] = c;
        }
    }
    false
}

/// Result of [`exact_min_parent`]: `Optimal` when the search completed,
/// `Feasible` when a limit cut it short and a fallback cover is returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinParentOutcome {
    pub solution: CoverSolution,
    pub status: SolveStatus,
}

struct SlotSearch {
    n: usize,
    k: usize,
    /// `children[j][i]`: genotype of member `i` at locus `j`
    children: Vec<Vec<Genotype>>,
    gts: Vec<Vec<Genotype>>,
    families: Vec<(usize, usize)>,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
    witness: Option<Vec<Vec<Genotype>>>,
}

impl SlotSearch {
    fn out_of_time(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(256) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    fn prefix_feasible(&self, members: usize) -> bool {
        let fams = &self.families[..members];
        (0..self.children.len())
            .all(|j| slot_witness(&self.children[j][..members], fams, self.k, &self.gts[j]).is_some())
    }

    fn dfs(&mut self, member: usize, used: usize) -> bool {
        if self.out_of_time() {
            return false;
        }
        if member == self.n {
            if used != self.k {
                return false;
            }
            let fams = &self.families;
            self.witness = Some(
                (0..self.children.len())
                    .map(|j| {
                        slot_witness(&self.children[j], fams, self.k, &self.gts[j])
                            .expect("prefix check covered every member")
                    })
                    .collect(),
            );
            return true;
        }
        // each remaining member can open at most two new slots
        if used + 2 * (self.n - member) < self.k {
            return false;
        }
        for s in 0..=used.min(self.k - 1) {
            let t_max = if s == used { used + 1 } else { used };
            for t in (s + 1)..=t_max.min(self.k - 1) {
                self.families.push((s, t));
                let next_used = used.max(t + 1);
                if self.prefix_feasible(member + 1) && self.dfs(member + 1, next_used) {
                    return true;
                }
                self.families.pop();
                if self.timed_out {
                    return false;
                }
            }
        }
        false
    }
}

/// Pairs members in index order, two fresh slots per pair (and per leftover
/// singleton). Always feasible.
pub fn pairing_cover(pop: &Population) -> Result<CoverSolution> {
    let mut sol = CoverSolution::empty();
    for chunk in (0..pop.n()).collect::<Vec<_>>().chunks(2) {
        let (a, b) = mendel::materialize_parents(pop, chunk)?;
        let s = sol.slot_count;
        sol.slot_genotypes.push(Individual::new(format!("slot{s}"), a.loci));
        sol.slot_genotypes.push(Individual::new(format!("slot{}", s + 1), b.loci));
        sol.slot_count += 2;
        sol.family_of_group.push((s, s + 1));
        sol.groups.push(chunk.to_vec());
    }
    Ok(sol)
}

/// Minimum-parent cover by exhaustive slot search.
///
/// Tries `k = 2, 3, ...`; member 0 always takes slots `(0, 1)` and a new slot
/// index is only opened after every smaller one is in use. The first `k` with
/// a realizable assignment is optimal. If `max_slots` or the time budget is
/// hit first, the pairing cover is returned as `Feasible`.
pub fn exact_min_parent(pop: &Population, limits: ExactLimits) -> Result<MinParentOutcome> {
    let n = pop.n();
    if n == 0 {
        return Ok(MinParentOutcome {
            solution: CoverSolution::empty(),
            status: SolveStatus::Optimal,
        });
    }
    let upper = if n.is_multiple_of(2) { n } else { n + 1 };
    let k_max = limits.max_slots.unwrap_or(upper).min(upper);
    let deadline = limits.time_budget.and_then(|b| Instant::now().checked_add(b));

    let all: Vec<usize> = (0..n).collect();
    let children: Vec<Vec<Genotype>> = (0..pop.ell()).map(|j| pop.locus_column(&all, j)).collect();
    let gts: Vec<Vec<Genotype>> = children
        .iter()
        .map(|col| mendel::genotypes_over(&mendel::allele_domain(col)))
        .collect();

    for k in 2..=k_max {
        let mut search = SlotSearch {
            n,
            k,
            children: children.clone(),
            gts: gts.clone(),
            families: Vec::with_capacity(n),
            deadline,
            nodes: 0,
            timed_out: false,
            witness: None,
        };
        if search.dfs(0, 0) {
            let witness = search.witness.expect("set on success");
            let solution = cover_from_assignment(pop, k, &search.families, &witness);
            return Ok(MinParentOutcome {
                solution,
                status: SolveStatus::Optimal,
            });
        }
        if search.timed_out {
            break;
        }
    }
    Ok(MinParentOutcome {
        solution: pairing_cover(pop)?,
        status: SolveStatus::Feasible,
    })
}

fn cover_from_assignment(
    pop: &Population,
    k: usize,
    families: &[(usize, usize)],
    witness: &[Vec<Genotype>],
) -> CoverSolution {
    let mut sol = CoverSolution::empty();
    for (i, &fam) in families.iter().enumerate() {
        match sol.family_of_group.iter().position(|&f| f == fam) {
            Some(g) => sol.groups[g].push(i),
            None => {
                sol.family_of_group.push(fam);
                sol.groups.push(vec![i]);
            }
        }
    }
    sol.slot_count = k;
    sol.slot_genotypes = (0..k)
        .map(|s| {
            Individual::new(
                format!("slot{s}"),
                (0..pop.ell()).map(|j| witness[j][s]).collect(),
            )
        })
        .collect();
    sol
}

/// A choice of parents from the pool, with one pair per partition cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentSelection {
    pub chosen: Vec<usize>,
    pub pair_of_group: Vec<(usize, usize)>,
}

impl ParentSelection {
    pub fn size(&self) -> usize {
        self.chosen.len()
    }

    pub fn validate(&self, inst: &FindMinParentInstance) -> Result<()> {
        if self.pair_of_group.len() != inst.partition.len() {
            return Err(Error::InvalidInstance("one pair per cell required".into()));
        }
        let pool = inst.parent_pool.members();
        for (cell, &(a, b)) in inst.partition.iter().zip(&self.pair_of_group) {
            if a == b || !self.chosen.contains(&a) || !self.chosen.contains(&b) {
                return Err(Error::InvalidInstance(format!(
                    "pair ({a}, {b}) is not two distinct chosen parents"
                )));
            }
            for &i in cell {
                if !mendel::can_be_child_of(&inst.population.members()[i], &pool[a], &pool[b])? {
                    return Err(Error::InvalidInstance(format!(
                        "`{}` is not a child of `{}` and `{}`",
                        inst.population.members()[i].id,
                        pool[a].id,
                        pool[b].id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Every unordered pool pair that can parent all of `cell`.
pub fn feasible_pairs_for_group(inst: &FindMinParentInstance, cell: &[usize]) -> Result<Vec<(usize, usize)>> {
    inst.population.check_indices(cell)?;
    let pool = inst.parent_pool.members();
    let mut out = Vec::new();
    for i in 0..pool.len() {
        for j in (i + 1)..pool.len() {
            let mut ok = true;
            for &m in cell {
                if !mendel::can_be_child_of(&inst.population.members()[m], &pool[i], &pool[j])? {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

fn cell_pairs(inst: &FindMinParentInstance) -> Result<Vec<Vec<(usize, usize)>>> {
    let pairs = inst
        .partition
        .iter()
        .map(|cell| feasible_pairs_for_group(inst, cell))
        .collect::<Result<Vec<_>>>()?;
    if let Some(c) = pairs.iter().position(Vec::is_empty) {
        let ids: Vec<&str> = inst.partition[c]
            .iter()
            .map(|&i| inst.population.members()[i].id.as_str())
            .collect();
        return Err(Error::Infeasible(format!("no pool pair parents cell {ids:?}")));
    }
    Ok(pairs)
}

fn first_pair_within(pairs: &[(usize, usize)], chosen: &[bool]) -> Option<(usize, usize)> {
    pairs.iter().copied().find(|&(a, b)| chosen[a] && chosen[b])
}

/// Smallest subset of the pool serving every cell; ties go to the
/// lexicographically smallest index set.
pub fn exact_find_min_parent(inst: &FindMinParentInstance, limits: ExactLimits) -> Result<ParentSelection> {
    let pairs = cell_pairs(inst)?;
    let p = inst.parent_pool.n();
    let deadline = limits.time_budget.and_then(|b| Instant::now().checked_add(b));
    let max_size = limits.max_slots.unwrap_or(p).min(p);
    let mut mask = vec![false; p];
    let mut tried = 0u64;

    for size in 0..=max_size {
        for subset in (0..p).combinations(size) {
            tried += 1;
            if tried.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(Error::BudgetExceeded);
            }
            mask.iter_mut().for_each(|m| *m = false);
            for &i in &subset {
                mask[i] = true;
            }
            let picked: Option<Vec<_>> = pairs.iter().map(|ps| first_pair_within(ps, &mask)).collect();
            if let Some(pair_of_group) = picked {
                return Ok(ParentSelection {
                    chosen: subset,
                    pair_of_group,
                });
            }
        }
    }
    Err(Error::BudgetExceeded)
}

/// Repeatedly adds the pool pair that parents the most unserved cells (ties to
/// the lexicographically smallest pair). No approximation guarantee.
pub fn greedy_find_min_parent(inst: &FindMinParentInstance) -> Result<ParentSelection> {
    let pairs = cell_pairs(inst)?;
    let p = inst.parent_pool.n();
    let mut mask = vec![false; p];
    let mut served = vec![false; pairs.len()];

    while served.iter().any(|s| !s) {
        let mut best: Option<((usize, usize), usize)> = None;
        for a in 0..p {
            for b in (a + 1)..p {
                let gain = pairs
                    .iter()
                    .zip(&served)
                    .filter(|(ps, &s)| !s && ps.contains(&(a, b)))
                    .count();
                if gain > best.map_or(0, |(_, g)| g) {
                    best = Some(((a, b), gain));
                }
            }
        }
        let ((a, b), _) = best.expect("every unserved cell has a feasible pair");
        mask[a] = true;
        mask[b] = true;
        for (s, ps) in served.iter_mut().zip(&pairs) {
            *s = *s || first_pair_within(ps, &mask).is_some();
        }
    }
    let pair_of_group = pairs
        .iter()
        .map(|ps| first_pair_within(ps, &mask).expect("served"))
        .collect();
    Ok(ParentSelection {
        chosen: (0..p).filter(|&i| mask[i]).collect(),
        pair_of_group,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genotypes::parse_population;

    fn g(a: u32, b: u32) -> Genotype {
        Genotype::new(a, b)
    }

    fn fa(k: usize, fams: &[(usize, usize)]) -> FamilyAssignment {
        FamilyAssignment {
            slot_count: k,
            family_of_member: fams.to_vec(),
        }
    }

    fn dom(children: &[Genotype]) -> Vec<AlleleId> {
        mendel::allele_domain(children)
    }

    #[test]
    fn slot_assignment_examples() {
        let kids = [g(1, 1), g(2, 2), g(1, 2)];
        assert!(locus_slot_assignment_exists(&kids, &fa(2, &[(0, 1); 3]), &dom(&kids)));

        let kids = [g(1, 1), g(9, 9)];
        let f = fa(3, &[(0, 1), (1, 2)]);
        assert!(locus_slot_assignment_exists(&kids, &f, &dom(&kids)));
        let w = slot_witness(&kids, &f.family_of_member, 3, &mendel::genotypes_over(&dom(&kids))).unwrap();
        assert_eq!(w[1], g(1, 9));

        let kids = [g(1, 2), g(3, 4), g(5, 6)];
        assert!(!locus_slot_assignment_exists(&kids, &fa(2, &[(0, 1); 3]), &dom(&kids)));
    }

    #[test]
    fn slot_witness_brute_agreement() {
        // 3 slots, families (0,1),(1,2),(0,2) over children drawn from {1,2,3}
        let fams = [(0, 1), (1, 2), (0, 2)];
        let all: Vec<Genotype> = mendel::genotypes_over(&[AlleleId(1), AlleleId(2), AlleleId(3)]);
        for &a in &all {
            for &b in &all {
                for &c in &all {
                    let kids = [a, b, c];
                    let gts = mendel::genotypes_over(&dom(&kids));
                    let mut brute = false;
                    for &x in &gts {
                        for &y in &gts {
                            for &z in &gts {
                                let s = [x, y, z];
                                if kids
                                    .iter()
                                    .zip(&fams)
                                    .all(|(&k, &(p, q))| genotype_derivable(k, s[p], s[q]))
                                {
                                    brute = true;
                                }
                            }
                        }
                    }
                    assert_eq!(slot_witness(&kids, &fams, 3, &gts).is_some(), brute, "{kids:?}");
                }
            }
        }
    }

    #[test]
    fn worked_example_needs_two() {
        let p = parse_population("3 2\nI1 1/2 1/1\nI2 4/3 6/6\nI3 1/2 1/6").unwrap();
        let out = exact_min_parent(&p, ExactLimits::unbounded()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.solution.slot_count, 2);
        out.solution.validate(&p).unwrap();
    }

    #[test]
    fn single_and_empty() {
        let p = parse_population("1 1\nA 3/7").unwrap();
        let out = exact_min_parent(&p, ExactLimits::unbounded()).unwrap();
        assert_eq!((out.solution.slot_count, out.status), (2, SolveStatus::Optimal));
        let out = exact_min_parent(&Population::empty(), ExactLimits::unbounded()).unwrap();
        assert_eq!(out.solution.slot_count, 0);
    }

    #[test]
    fn shares_parents_across_groups() {
        // three pairwise-incompatible triples cannot be one group, but
        // families (0,1),(0,2),(1,2) share slots
        let p = parse_population("3 1\nA 1/2\nB 3/4\nC 5/6").unwrap();
        let out = exact_min_parent(&p, ExactLimits::unbounded()).unwrap();
        assert_eq!(out.solution.slot_count, 3);
        out.solution.validate(&p).unwrap();
    }

    #[test]
    fn max_slots_limit_falls_back() {
        let p = parse_population("3 1\nA 1/2\nB 3/4\nC 5/6").unwrap();
        let limits = ExactLimits {
            max_slots: Some(2),
            time_budget: None,
        };
        let out = exact_min_parent(&p, limits).unwrap();
        assert_eq!(out.status, SolveStatus::Feasible);
        assert_eq!(out.solution.slot_count, 4);
        out.solution.validate(&p).unwrap();
    }

    #[test]
    fn zero_budget_falls_back() {
        let p = parse_population("4 1\nA 1/2\nB 3/4\nC 5/6\nD 7/8").unwrap();
        let out = exact_min_parent(&p, ExactLimits::with_budget(Duration::ZERO)).unwrap();
        // the deadline is polled every 256 nodes; small searches may finish
        out.solution.validate(&p).unwrap();
    }

    fn toy_instance() -> FindMinParentInstance {
        let m = crate::reductions::MinRepInstance::new(2, 1, vec![0, 0], vec![0], vec![(0, 0), (1, 0)]).unwrap();
        crate::reductions::reduce_minrep(&m, crate::reductions::NonEdgeMode::Compact).unwrap()
    }

    #[test]
    fn toy_find_min_parent() {
        let inst = toy_instance();
        // pool: a1, a2, b1 ; cell: both edge individuals
        let pairs = feasible_pairs_for_group(&inst, &inst.partition[0]).unwrap();
        assert!(pairs.contains(&(0, 2)));
        // brute force over all subsets of the 3-element pool
        let mut best = usize::MAX;
        for bits in 0u32..8 {
            let chosen: Vec<usize> = (0..3).filter(|i| bits >> i & 1 == 1).collect();
            if pairs.iter().any(|&(a, b)| chosen.contains(&a) && chosen.contains(&b)) {
                best = best.min(chosen.len());
            }
        }
        assert_eq!(best, 2);
        let sel = exact_find_min_parent(&inst, ExactLimits::unbounded()).unwrap();
        assert_eq!(sel.chosen, vec![0, 2]);
        sel.validate(&inst).unwrap();

        let gsel = greedy_find_min_parent(&inst).unwrap();
        gsel.validate(&inst).unwrap();
    }

    fn instance(pop: &str, pool: &str, cells: Vec<Vec<usize>>) -> FindMinParentInstance {
        FindMinParentInstance::new(
            parse_population(pop).unwrap(),
            parse_population(pool).unwrap(),
            cells,
        )
        .unwrap()
    }

    #[test]
    fn feasible_pairs_edge_cases() {
        let inst = instance("1 1\nc 1/1", "2 1\np 9/9\nq 9/9", vec![vec![0]]);
        assert!(feasible_pairs_for_group(&inst, &[0]).unwrap().is_empty());
        assert_eq!(feasible_pairs_for_group(&inst, &[]).unwrap(), vec![(0, 1)]);
        assert!(matches!(
            exact_find_min_parent(&inst, ExactLimits::unbounded()),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(greedy_find_min_parent(&inst), Err(Error::Infeasible(_))));
    }

    #[test]
    fn forced_pair() {
        let inst = instance("1 1\nc 1/2", "3 1\np 1/1\nq 2/2\nr 3/3", vec![vec![0]]);
        let sel = exact_find_min_parent(&inst, ExactLimits::unbounded()).unwrap();
        assert_eq!(sel.chosen, vec![0, 1]);
        let gsel = greedy_find_min_parent(&inst).unwrap();
        assert_eq!(gsel.chosen, vec![0, 1]);
    }

    #[test]
    fn universal_pair_greedy_matches_optimum() {
        // pair (p, q) = ({1,2},{3,4}) parents every cell; r only fits some
        let inst = instance(
            "4 1\nc0 1/3\nc1 2/4\nc2 1/4\nc3 2/3",
            "3 1\np 1/2\nq 3/4\nr 1/3",
            vec![vec![0], vec![1], vec![2], vec![3]],
        );
        let exact = exact_find_min_parent(&inst, ExactLimits::unbounded()).unwrap();
        let greedy = greedy_find_min_parent(&inst).unwrap();
        assert_eq!(exact.size(), 2);
        assert_eq!(greedy.size(), 2);
        greedy.validate(&inst).unwrap();
    }
}
