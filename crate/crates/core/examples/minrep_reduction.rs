//! Representative cover to parent selection: the fewest pool parents
//! explaining every cell equals the fewest representatives.
//!
//! ```bash
//! cargo run --release -p minparent --example minrep_reduction
//! ```

use minparent::exact::exact_find_min_parent;
use minparent::reductions::{brute_minrep, parse_minrep, parent_id, reduce_minrep, NonEdgeMode};
use minparent::ExactLimits;

fn main() -> minparent::Result<()> {
    // A groups {a0,a1} {a2,a3}, B groups {b0,b1} {b2,b3}
    let m = parse_minrep(
        "4 4 2 2 6
         0 0 1 1
         0 0 1 1
         0 0
         1 2
         2 1
         3 3
         0 3
         2 2",
    )?;
    let (gamma, witness) = brute_minrep(&m)?;
    let names: Vec<String> = witness.iter().map(|&v| parent_id(v)).collect();
    println!("representatives needed: {gamma} ({})", names.join(" "));

    for mode in [NonEdgeMode::Compact, NonEdgeMode::Faithful] {
        let inst = reduce_minrep(&m, mode)?;
        let sel = exact_find_min_parent(&inst, ExactLimits::unbounded())?;
        sel.validate(&inst)?;
        let chosen: Vec<&str> = sel.chosen.iter().map(|&i| inst.parent_pool.members()[i].id.as_str()).collect();
        println!(
            "{mode:?}: {} loci, {} cells, {} parents ({})",
            inst.population.ell(),
            inst.partition.len(),
            sel.size(),
            chosen.join(" ")
        );
    }
    Ok(())
}
