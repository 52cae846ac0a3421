//! Greedy cover of a simulated population, compared with the exact optimum
//! and the worst-case ratio bound.
//!
//! ```bash
//! cargo run --release -p minparent --example greedy_cover
//! ```

use minparent::exact::exact_min_parent;
use minparent::greedy::{greedy_cover, max_sibling_set_size, oracle_call_bound, ratio_bound};
use minparent::simgen::{random_population, ChildCount, SimConfig};
use minparent::{ExactLimits, GreedyConfig, Oracle};

fn main() -> minparent::Result<()> {
    let (pop, truth) = random_population(&SimConfig {
        families: 3,
        children_per_family: ChildCount::Fixed(3),
        loci: 4,
        alleles_per_locus: 6,
        seed: 5,
    })?;
    let opt = exact_min_parent(&pop, ExactLimits::unbounded())?.solution.slot_count;
    let a = max_sibling_set_size(&pop);
    println!("n = {}, true families = {}, optimum = {opt}, largest sibling set = {a}", pop.n(), truth.families.len());

    for c in 1..=4 {
        let oracle = Oracle::new();
        let sol = greedy_cover(&pop, GreedyConfig::new(c)?, &oracle)?;
        sol.validate(&pop)?;
        println!(
            "c = {c}: {} parents (bound {:.1}), {} oracle calls (bound {})",
            sol.parent_count(),
            ratio_bound(a, c, pop.n(), opt),
            oracle.calls(),
            oracle_call_bound(pop.n(), c)
        );
    }
    Ok(())
}
