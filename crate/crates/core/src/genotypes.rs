//! Individuals, populations and solutions, plus the plain-text formats they
//! are read from and written to.
//!
//! Population file:
//!
//! ```text
//! # optional comment lines
//! 3 2
//! I1 1/2 1/1
//! I2 3/4 6/6
//! I3 1/2 1/6
//! ```
//!
//! The first data line is `n ell`, followed by exactly `n` rows of an id and
//! `ell` genotypes. Genotypes are stored with `lo <= hi`, so `4/3` reads back
//! as `3/4`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mendel;

/// A single allele identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlleleId(pub u32);

impl From<u32> for AlleleId {
    fn from(v: u32) -> Self {
        AlleleId(v)
    }
}

impl fmt::Display for AlleleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The unordered pair of alleles an individual carries at one locus.
///
/// Always stored as `lo <= hi`; `{x, y}` and `{y, x}` compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Genotype {
    lo: AlleleId,
    hi: AlleleId,
}

impl Genotype {
    pub fn new(a: u32, b: u32) -> Self {
        Self {
            lo: AlleleId(a.min(b)),
            hi: AlleleId(a.max(b)),
        }
    }

    pub fn homozygous(a: u32) -> Self {
        Self::new(a, a)
    }

    pub fn lo(&self) -> AlleleId {
        self.lo
    }

    pub fn hi(&self) -> AlleleId {
        self.hi
    }

    pub fn alleles(&self) -> [AlleleId; 2] {
        [self.lo, self.hi]
    }

    pub fn contains(&self, a: AlleleId) -> bool {
        self.lo == a || self.hi == a
    }

    pub fn is_homozygous(&self) -> bool {
        self.lo == self.hi
    }

    /// True if the two genotypes have at least one allele in common.
    pub fn shares_allele(&self, other: &Genotype) -> bool {
        self.contains(other.lo) || self.contains(other.hi)
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.lo, self.hi)
    }
}

impl FromStr for Genotype {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| format!("genotype `{s}` is not of the form a/b"))?;
        Ok(Genotype::new(parse_allele(a)?, parse_allele(b)?))
    }
}

fn parse_allele(s: &str) -> std::result::Result<u32, String> {
    let v: i64 = s
        .trim()
        .parse()
        .map_err(|_| format!("allele `{s}` is not an integer"))?;
    if v < 0 {
        return Err(format!("negative allele `{s}`"));
    }
    u32::try_from(v).map_err(|_| format!("allele `{s}` is too large"))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Individual {
    pub id: String,
    pub loci: Vec<Genotype>,
}

impl Individual {
    pub fn new(id: impl Into<String>, loci: Vec<Genotype>) -> Self {
        Self {
            id: id.into(),
            loci,
        }
    }

    pub fn ell(&self) -> usize {
        self.loci.len()
    }

    fn write_row(&self, out: &mut String) {
        out.push_str(&self.id);
        for g in &self.loci {
            out.push(' ');
            out.push_str(&g.to_string());
        }
    }
}

/// A set of genotyped individuals that all share the same locus count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    ell: usize,
    members: Vec<Individual>,
}

impl Population {
    pub fn new(ell: usize, members: Vec<Individual>) -> Result<Self> {
        let mut seen = HashSet::new();
        for m in &members {
            if m.id.is_empty() || m.id.chars().any(char::is_whitespace) {
                return Err(Error::InvalidPopulation(format!(
                    "id `{}` is empty or contains whitespace",
                    m.id
                )));
            }
            if !seen.insert(m.id.as_str()) {
                return Err(Error::InvalidPopulation(format!("duplicate id `{}`", m.id)));
            }
            if m.loci.len() != ell {
                return Err(Error::LocusCountMismatch {
                    expected: ell,
                    found: m.loci.len(),
                });
            }
        }
        Ok(Self { ell, members })
    }

    pub fn empty() -> Self {
        Self {
            ell: 0,
            members: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.members.len()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn get(&self, idx: usize) -> Result<&Individual> {
        self.members.get(idx).ok_or(Error::IndexOutOfRange {
            index: idx,
            len: self.members.len(),
        })
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.members.iter().position(|m| m.id == id)
    }

    /// Genotypes of `members` at locus `j`, in member order.
    pub fn locus_column(&self, members: &[usize], j: usize) -> Vec<Genotype> {
        members.iter().map(|&i| self.members[i].loci[j]).collect()
    }

    /// The population restricted to the given indices, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Population> {
        let mut out = Vec::with_capacity(indices.len());
        for &i in indices {
            out.push(self.get(i)?.clone());
        }
        Population::new(self.ell, out)
    }

    pub(crate) fn check_indices(&self, indices: &[usize]) -> Result<()> {
        match indices.iter().find(|&&i| i >= self.n()) {
            Some(&index) => Err(Error::IndexOutOfRange {
                index,
                len: self.n(),
            }),
            None => Ok(()),
        }
    }
}

/// Yields `(1-based line number, trimmed line)` for every non-blank,
/// non-comment line.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_population(text: &str) -> Result<Population> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `n ell` header"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::parse(hline, "header must be `n ell`"));
    }
    let n: usize = dims[0]
        .parse()
        .map_err(|_| Error::parse(hline, format!("bad individual count `{}`", dims[0])))?;
    let ell: usize = dims[1]
        .parse()
        .map_err(|_| Error::parse(hline, format!("bad locus count `{}`", dims[1])))?;

    let mut members = Vec::with_capacity(n);
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (lineno, line) in lines {
        if members.len() == n {
            return Err(Error::parse(
                lineno,
                format!("declared n={n} but found more rows"),
            ));
        }
        let mut tokens = line.split_whitespace();
        let id = tokens.next().expect("data lines are non-empty").to_string();
        let loci = tokens
            .map(|t| t.parse::<Genotype>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::parse(lineno, e))?;
        if loci.len() != ell {
            return Err(Error::parse(
                lineno,
                format!("individual `{id}` has {} loci, expected {ell}", loci.len()),
            ));
        }
        if let Some(prev) = seen.insert(id.clone(), lineno) {
            return Err(Error::parse(
                lineno,
                format!("duplicate id `{id}` (first seen on line {prev})"),
            ));
        }
        members.push(Individual::new(id, loci));
    }
    if members.len() != n {
        return Err(Error::parse(
            hline,
            format!("declared n={n} but found {} rows", members.len()),
        ));
    }
    Population::new(ell, members)
}

pub fn serialize_population(p: &Population) -> String {
    let mut out = format!("{} {}\n", p.n(), p.ell());
    for m in p.members() {
        m.write_row(&mut out);
        out.push('\n');
    }
    out
}

/// A cover of a population by sibling groups, each attached to a pair of
/// parent slots. The objective is `slot_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    pub groups: Vec<Vec<usize>>,
    pub slot_count: usize,
    pub family_of_group: Vec<(usize, usize)>,
    pub slot_genotypes: Vec<Individual>,
    pub oracle_calls: u64,
}

impl CoverSolution {
    pub fn empty() -> Self {
        Self {
            groups: Vec::new(),
            slot_count: 0,
            family_of_group: Vec::new(),
            slot_genotypes: Vec::new(),
            oracle_calls: 0,
        }
    }

    pub fn parent_count(&self) -> usize {
        self.slot_count
    }

    /// Size of the largest group.
    pub fn max_group_size(&self) -> usize {
        self.groups.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Checks the partition, slot and Mendelian invariants against `pop`.
    pub fn validate(&self, pop: &Population) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        if self.groups.len() != self.family_of_group.len() {
            return bad("group and family counts differ".into());
        }
        if self.slot_genotypes.len() != self.slot_count {
            return bad("slot genotype count differs from slot count".into());
        }
        let mut covered = vec![false; pop.n()];
        for g in &self.groups {
            pop.check_indices(g)?;
            for &i in g {
                if std::mem::replace(&mut covered[i], true) {
                    return bad(format!("member {i} appears in two groups"));
                }
            }
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return bad(format!("member {i} is not covered"));
        }
        for (g, &(s, t)) in self.groups.iter().zip(&self.family_of_group) {
            if s == t || s >= self.slot_count || t >= self.slot_count {
                return bad(format!("family ({s}, {t}) is not a pair of distinct slots"));
            }
            let (a, b) = (&self.slot_genotypes[s], &self.slot_genotypes[t]);
            for &i in g {
                if !mendel::can_be_child_of(&pop.members()[i], a, b)? {
                    return bad(format!(
                        "member `{}` is not a child of slots {s} and {t}",
                        pop.members()[i].id
                    ));
                }
            }
        }
        Ok(())
    }
}

/// FIND-MIN-PARENT input: a population, a candidate parent pool and a fixed
/// partition of the population into sibling groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FindMinParentInstance {
    pub population: Population,
    pub parent_pool: Population,
    pub partition: Vec<Vec<usize>>,
}

impl FindMinParentInstance {
    pub fn new(
        population: Population,
        parent_pool: Population,
        partition: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if parent_pool.ell() != population.ell() && !parent_pool.is_empty() {
            return Err(Error::LocusCountMismatch {
                expected: population.ell(),
                found: parent_pool.ell(),
            });
        }
        let ids: HashSet<&str> = population.members().iter().map(|m| m.id.as_str()).collect();
        if let Some(p) = parent_pool.members().iter().find(|p| ids.contains(p.id.as_str())) {
            return Err(Error::InvalidInstance(format!(
                "pool id `{}` also names a population member",
                p.id
            )));
        }
        let mut seen = vec![false; population.n()];
        for cell in &partition {
            population.check_indices(cell)?;
            for &i in cell {
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidInstance(format!(
                        "member `{}` is in two cells",
                        population.members()[i].id
                    )));
                }
            }
            if !mendel::sibling_set_feasible(&population, cell)? {
                return Err(Error::InvalidInstance(format!(
                    "cell {:?} is not a sibling set",
                    cell.iter().map(|&i| &population.members()[i].id).collect::<Vec<_>>()
                )));
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInstance(format!(
                "member `{}` is in no cell",
                population.members()[i].id
            )));
        }
        Ok(Self {
            population,
            parent_pool,
            partition,
        })
    }
}

/// Reads a partition file: one line per cell listing member ids.
pub fn parse_partition(text: &str, pop: &Population) -> Result<Vec<Vec<usize>>> {
    let mut cells = Vec::new();
    let mut seen = vec![false; pop.n()];
    for (lineno, line) in data_lines(text) {
        let mut cell = Vec::new();
        for id in line.split_whitespace() {
            let idx = pop
                .index_of(id)
                .ok_or_else(|| Error::parse(lineno, format!("unknown member id `{id}`")))?;
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::parse(lineno, format!("member `{id}` listed twice")));
            }
            cell.push(idx);
        }
        cells.push(cell);
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::parse(
            0,
            format!("member `{}` is not in any cell", pop.members()[i].id),
        ));
    }
    Ok(cells)
}

pub fn serialize_partition(partition: &[Vec<usize>], pop: &Population) -> String {
    let mut out = String::new();
    for cell in partition {
        let ids: Vec<&str> = cell.iter().map(|&i| pop.members()[i].id.as_str()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const WORKED_EXAMPLE: &str = "3 2\nI1 1/2 1/1\nI2 4/3 6/6\nI3 1/2 1/6";

    #[test]
    fn parses_and_canonicalizes_worked_example() {
        let p = parse_population(WORKED_EXAMPLE).unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.ell(), 2);
        assert_eq!(p.members()[1].loci[0], Genotype::new(3, 4));
        assert_eq!(p.members()[1].loci[0].lo(), AlleleId(3));
        assert_eq!(
            serialize_population(&p),
            "3 2\nI1 1/2 1/1\nI2 3/4 6/6\nI3 1/2 1/6\n"
        );
    }

    #[test]
    fn empty_population() {
        let p = parse_population("0 0").unwrap();
        assert_eq!((p.n(), p.ell()), (0, 0));
        assert_eq!(serialize_population(&p), "0 0\n");
    }

    #[test]
    fn homozygous_single() {
        let p = Population::new(1, vec![Individual::new("I1", vec![Genotype::homozygous(5)])]).unwrap();
        let s = serialize_population(&p);
        assert_eq!(s, "1 1\nI1 5/5\n");
        assert_eq!(parse_population(&s).unwrap(), p);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let p = parse_population("# header\n\n2 1\n# row\nA 1/2\nB 2/2\n").unwrap();
        assert_eq!(p.n(), 2);
    }

    fn parse_err_line(text: &str) -> usize {
        match parse_population(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_count_mismatch() {
        assert_eq!(parse_err_line("1 1\nX 2/1\nX 3/3"), 3);
        assert_eq!(parse_err_line("3 1\nX 2/1"), 1);
    }

    #[test]
    fn rejects_duplicate_id() {
        assert_eq!(parse_err_line("2 1\nX 2/1\nX 3/3"), 3);
    }

    #[test]
    fn rejects_inconsistent_locus_count() {
        assert_eq!(parse_err_line("2 2\nX 2/1 1/1\nY 3/3"), 3);
    }

    #[test]
    fn rejects_negative_and_malformed_alleles() {
        assert_eq!(parse_err_line("1 1\nX -1/2"), 2);
        assert_eq!(parse_err_line("1 1\nX 1-2"), 2);
        assert_eq!(parse_err_line("1 1\nX a/2"), 2);
        assert_eq!(parse_err_line("n 1"), 1);
    }

    #[test]
    fn population_new_rejects_bad_members() {
        let g = vec![Genotype::new(1, 1)];
        assert!(matches!(
            Population::new(2, vec![Individual::new("A", g.clone())]),
            Err(Error::LocusCountMismatch { .. })
        ));
        assert!(Population::new(1, vec![Individual::new("A B", g)]).is_err());
    }

    #[test]
    fn partition_round_trip() {
        let p = parse_population(WORKED_EXAMPLE).unwrap();
        let cells = parse_partition("I1 I3\nI2\n", &p).unwrap();
        assert_eq!(cells, vec![vec![0, 2], vec![1]]);
        assert_eq!(serialize_partition(&cells, &p), "I1 I3\nI2\n");
        assert!(parse_partition("I1 I3\n", &p).is_err());
        assert!(parse_partition("I1 I3 I1\nI2", &p).is_err());
        assert!(parse_partition("I1 I9\nI2 I3", &p).is_err());
    }

    #[test]
    fn instance_rejects_overlapping_ids_and_non_sibling_cells() {
        let pop = parse_population("3 1\nA 1/2\nB 3/4\nC 5/6").unwrap();
        let pool = parse_population("1 1\nA 1/1").unwrap();
        assert!(FindMinParentInstance::new(pop.clone(), pool, vec![vec![0, 1, 2]]).is_err());
        let pool = parse_population("1 1\nP 1/1").unwrap();
        assert!(FindMinParentInstance::new(pop.clone(), pool.clone(), vec![vec![0, 1, 2]]).is_err());
        assert!(FindMinParentInstance::new(pop.clone(), pool.clone(), vec![vec![0, 1]]).is_err());
        assert!(FindMinParentInstance::new(pop, pool, vec![vec![0, 1], vec![2]]).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn population() -> impl Strategy<Value = Population> {
            (0usize..4).prop_flat_map(|ell| {
                prop::collection::vec(prop::collection::vec((0u32..50, 0u32..50), ell), 0..6)
                    .prop_map(move |rows| {
                        let members = rows
                            .into_iter()
                            .enumerate()
                            .map(|(i, loci)| {
                                Individual::new(
                                    format!("ind{i}"),
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
            fn round_trip(p in population()) {
                let text = serialize_population(&p);
                prop_assert_eq!(parse_population(&text).unwrap(), p);
            }

            #[test]
            fn serialized_pairs_are_canonical(p in population()) {
                let text = serialize_population(&p);
                for tok in text.split_whitespace().filter(|t| t.contains('/')) {
                    let (a, b) = tok.split_once('/').unwrap();
                    prop_assert!(a.parse::<u32>().unwrap() <= b.parse::<u32>().unwrap());
                }
            }
        }
    }
}
