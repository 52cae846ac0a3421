//! Test a group of individuals for a common pair of parents and, when one
//! exists, build a concrete pair.
//!
//! ```bash
//! cargo run -p minparent --example sibling_check
//! ```

use minparent::mendel::{can_be_child_of, materialize_parents};
use minparent::{parse_population, Oracle};

fn main() -> minparent::Result<()> {
    let pop = parse_population(
        "4 2
         I1 1/2 1/1
         I2 3/4 6/6
         I3 1/2 1/6
         I4 5/7 2/2",
    )?;
    let oracle = Oracle::new();

    for group in [vec![0, 1, 2], vec![0, 1, 2, 3], vec![2, 3]] {
        let ids: Vec<&str> = group.iter().map(|&i| pop.members()[i].id.as_str()).collect();
        let sibling = oracle.is_sibling_set(&pop, &group)?;
        println!("{{{}}} sibling set: {sibling}", ids.join(", "));
        if sibling {
            let (a, b) = materialize_parents(&pop, &group)?;
            let show = |p: &minparent::Individual| p.loci.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            println!("  parents {} | {}", show(&a), show(&b));
            for &i in &group {
                assert!(can_be_child_of(&pop.members()[i], &a, &b)?);
            }
        }
    }
    println!("oracle calls: {}", oracle.calls());
    Ok(())
}
