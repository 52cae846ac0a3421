//! Run the built-in smoke suite and a small custom manifest, printing CSV.
//!
//! ```bash
//! cargo run --release -p minparent --example bench
//! ```

use std::path::Path;

use minparent::cli::{run_bench, BenchManifest};

fn main() -> minparent::Result<()> {
    let smoke = BenchManifest::builtin("smoke")?;
    print!("{}", run_bench(&smoke, Path::new("."))?);

    let custom = BenchManifest::parse(
        r#"
        name = "random families"

        [[instance]]
        name = "f4c3"
        random = { families = 4, children = 3, loci = 5, alleles = 8, seed = 1 }

        [[run]]
        algorithm = "greedy"
        c = 3

        [[run]]
        algorithm = "exact"
        budget_ms = 5000
        "#,
    )?;
    print!("{}", run_bench(&custom, Path::new("."))?);
    Ok(())
}
