//! Pick the fewest parents from a candidate pool so that each family of
//! known siblings has both its parents among them.
//!
//! ```bash
//! cargo run -p minparent --example find_parents
//! ```

use minparent::exact::{exact_find_min_parent, feasible_pairs_for_group, greedy_find_min_parent};
use minparent::genotypes::parse_partition;
use minparent::{parse_population, ExactLimits, FindMinParentInstance};

fn main() -> minparent::Result<()> {
    let children = parse_population(
        "5 2
         c1 1/3 2/2
         c2 1/4 2/5
         c3 1/4 5/5
         c4 3/6 2/6
         c5 1/4 5/6",
    )?;
    let pool = parse_population(
        "4 2
         m1 1/1 2/5
         f1 3/4 2/5
         f2 1/6 2/6
         m2 4/6 6/6",
    )?;
    let cells = parse_partition("c1 c2 c3\nc4 c5", &children)?;
    let inst = FindMinParentInstance::new(children, pool, cells)?;

    for (i, cell) in inst.partition.iter().enumerate() {
        let pairs = feasible_pairs_for_group(&inst, cell)?;
        let names: Vec<String> = pairs
            .iter()
            .map(|&(p, q)| format!("{}+{}", inst.parent_pool.members()[p].id, inst.parent_pool.members()[q].id))
            .collect();
        println!("cell {i}: possible parent pairs {}", names.join(", "));
    }

    let show = |chosen: &[usize]| {
        chosen
            .iter()
            .map(|&i| inst.parent_pool.members()[i].id.clone())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let exact = exact_find_min_parent(&inst, ExactLimits::unbounded())?;
    println!("exact:  {} parents ({})", exact.size(), show(&exact.chosen));
    let greedy = greedy_find_min_parent(&inst)?;
    println!("greedy: {} parents ({})", greedy.size(), show(&greedy.chosen));
    Ok(())
}
