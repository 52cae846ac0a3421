//! Covering a population by full-sibling groups with as few parents as
//! possible.
//!
//! * [`genotypes`]: individuals, populations, solutions and their text formats
//! * [`mendel`]: the sibling-set oracle and parent materialization
//! * [`greedy`]: capped greedy cover with a provable ratio
//! * [`exact`]: exhaustive solvers for small instances, with and without a
//!   fixed partition and candidate pool
//! * [`reductions`]: triangle-packing and MINREP gadget generators
//! * [`simgen`]: seeded synthetic populations
//! * [`cli`]: the `minparent` command line, reports and benchmarks

pub mod cli;
pub mod error;
pub mod exact;
pub mod genotypes;
pub mod greedy;
pub mod mendel;
pub mod reductions;
pub mod simgen;

pub use error::{Error, Result};
pub use exact::{ExactLimits, MinParentOutcome, ParentSelection, SolveStatus};
pub use genotypes::{
    parse_population, serialize_population, AlleleId, CoverSolution, FindMinParentInstance, Genotype, Individual,
    Population,
};
pub use greedy::GreedyConfig;
pub use mendel::Oracle;
