//! Generate a population with known families, write it out and check that
//! the solver recovers no more parents than the truth uses.
//!
//! ```bash
//! cargo run --release -p minparent --example simulate
//! ```

use minparent::exact::exact_min_parent;
use minparent::simgen::{random_population, ChildCount, SimConfig};
use minparent::{serialize_population, ExactLimits, Oracle};

fn main() -> minparent::Result<()> {
    let cfg = SimConfig {
        families: 3,
        children_per_family: ChildCount::Range(2, 4),
        loci: 6,
        alleles_per_locus: 10,
        seed: 2024,
    };
    let (pop, truth) = random_population(&cfg)?;
    print!("{}", serialize_population(&pop));
    println!("# families");
    print!("{}", truth.serialize(&pop));

    let oracle = Oracle::new();
    for f in &truth.families {
        assert!(oracle.is_sibling_set(&pop, &f.children)?);
    }
    let out = exact_min_parent(&pop, ExactLimits::unbounded())?;
    println!(
        "# minimum parents {} ({}), true parents {}",
        out.solution.slot_count,
        out.status.as_str(),
        2 * truth.families.len()
    );
    Ok(())
}
