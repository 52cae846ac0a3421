//! Seeded synthetic populations with known parents.
//!
//! All randomness comes from one SplitMix64 stream per call, so any language
//! can reproduce a population bit for bit:
//!
//! ```text
//! state = seed
//! next():  state += 0x9e3779b97f4a7c15
//!          z = state
//!          z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//!          z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//!          return z ^ (z >> 31)                    (all arithmetic mod 2^64)
//! below(m) = (next() * m) >> 64                    (128-bit product)
//! coin()   = next() >> 63
//! ```
//!
//! Draw order: for each family in index order, parent 0 then parent 1, each
//! locus in order, two alleles `1 + below(alleles_per_locus)`. Then for each
//! family in index order: when the child count is a range `lo..=hi`, one draw
//! `lo + below(hi - lo + 1)`; then each child in birth order, each locus in
//! order, `coin()` picks the allele from parent 0 and another `coin()` the
//! allele from parent 1 (0 selects the lower allele).

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::genotypes::{Genotype, Individual, Population};

/// The documented deterministic stream.
#[derive(Debug, Clone)]
pub struct SimStream(SplitMix64);

impl SimStream {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish value in `0..m` by multiply-shift. `m` must be positive.
    pub fn below(&mut self, m: u64) -> u64 {
        ((u128::from(self.next_u64()) * u128::from(m)) >> 64) as u64
    }

    pub fn coin(&mut self) -> usize {
        (self.next_u64() >> 63) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChildCount {
    Fixed(usize),
    /// Inclusive range.
    Range(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub families: usize,
    pub children_per_family: ChildCount,
    pub loci: usize,
    pub alleles_per_locus: u32,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.families == 0 {
            return bad("families must be at least 1");
        }
        if self.loci == 0 {
            return bad("loci must be at least 1");
        }
        if self.alleles_per_locus == 0 {
            return bad("alleles_per_locus must be at least 1");
        }
        match self.children_per_family {
            ChildCount::Fixed(0) => bad("children per family must be at least 1"),
            ChildCount::Range(lo, hi) if lo == 0 || lo > hi => bad("child range must be 1 <= lo <= hi"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrueFamily {
    pub parents: (Individual, Individual),
    /// Indices into the generated population.
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub families: Vec<TrueFamily>,
}

impl GroundTruth {
    /// One line per family: the two parent ids, then the child ids.
    pub fn serialize(&self, pop: &Population) -> String {
        let mut out = String::new();
        for f in &self.families {
            let mut ids = vec![f.parents.0.id.as_str(), f.parents.1.id.as_str()];
            ids.extend(f.children.iter().map(|&i| pop.members()[i].id.as_str()));
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }
}

/// One child of `a` and `b`: at each locus a fair coin picks each parent's
/// contributed allele.
pub fn mendelian_child(
    a: &Individual,
    b: &Individual,
    rng: &mut SimStream,
    id: impl Into<String>,
) -> Result<Individual> {
    if a.ell() != b.ell() {
        return Err(Error::LocusCountMismatch {
            expected: a.ell(),
            found: b.ell(),
        });
    }
    let loci = a
        .loci
        .iter()
        .zip(&b.loci)
        .map(|(ga, gb)| {
            let x = ga.alleles()[rng.coin()];
            let y = gb.alleles()[rng.coin()];
            Genotype::new(x.0, y.0)
        })
        .collect();
    Ok(Individual::new(id, loci))
}

pub fn random_population(cfg: &SimConfig) -> Result<(Population, GroundTruth)> {
    cfg.validate()?;
    let mut rng = SimStream::new(cfg.seed);
    let alleles = u64::from(cfg.alleles_per_locus);
    let founder = |id: String, rng: &mut SimStream| {
        let loci = (0..cfg.loci)
            .map(|_| {
                let x = 1 + rng.below(alleles) as u32;
                let y = 1 + rng.below(alleles) as u32;
                Genotype::new(x, y)
            })
            .collect();
        Individual::new(id, loci)
    };
    let parents: Vec<(Individual, Individual)> = (0..cfg.families)
        .map(|f| {
            let p0 = founder(format!("f{f}p0"), &mut rng);
            let p1 = founder(format!("f{f}p1"), &mut rng);
            (p0, p1)
        })
        .collect();

    let mut members = Vec::new();
    let mut families = Vec::with_capacity(cfg.families);
    for (f, (p0, p1)) in parents.into_iter().enumerate() {
        let count = match cfg.children_per_family {
            ChildCount::Fixed(c) => c,
            ChildCount::Range(lo, hi) => lo + rng.below((hi - lo + 1) as u64) as usize,
        };
        let mut children = Vec::with_capacity(count);
        for birth in 0..count {
            children.push(members.len());
            members.push(mendelian_child(&p0, &p1, &mut rng, format!("f{f}c{birth}"))?);
        }
        families.push(TrueFamily {
            parents: (p0, p1),
            children,
        });
    }
    Ok((Population::new(cfg.loci, members)?, GroundTruth { families }))
}
