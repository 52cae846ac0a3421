//! Exact minimum parent count, with and without a time budget.
//!
//! ```bash
//! cargo run --release -p minparent --example exact_solver
//! ```

use std::time::{Duration, Instant};

use minparent::exact::exact_min_parent;
use minparent::simgen::{random_population, ChildCount, SimConfig};
use minparent::ExactLimits;

fn main() -> minparent::Result<()> {
    let (pop, _) = random_population(&SimConfig {
        families: 4,
        children_per_family: ChildCount::Range(1, 3),
        loci: 5,
        alleles_per_locus: 8,
        seed: 77,
    })?;

    let start = Instant::now();
    let out = exact_min_parent(&pop, ExactLimits::unbounded())?;
    out.solution.validate(&pop)?;
    println!("{} after {:?}: {} parents", out.status.as_str(), start.elapsed(), out.solution.slot_count);
    for (group, (p, q)) in out.solution.groups.iter().zip(&out.solution.family_of_group) {
        let ids: Vec<&str> = group.iter().map(|&i| pop.members()[i].id.as_str()).collect();
        println!("  slots {p} {q} : {}", ids.join(" "));
    }

    // a zero budget stops at once and falls back to pairing up individuals
    let rushed = exact_min_parent(&pop, ExactLimits::with_budget(Duration::ZERO))?;
    println!("{} with no budget: {} parents", rushed.status.as_str(), rushed.solution.slot_count);
    Ok(())
}
