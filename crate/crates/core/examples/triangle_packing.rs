//! Triangle packing to MIN-PARENT: reduce a few small graphs, solve both
//! sides exactly and compare `n - t` with the minimum parent count.
//!
//! ```bash
//! cargo run --release -p minparent --example triangle_packing
//! ```

use std::time::Instant;

use minparent::exact::{exact_min_parent, ExactLimits};
use minparent::reductions::{brute_tp, reduce_tp, Graph};

fn main() -> minparent::Result<()> {
    let graphs = [
        ("K3", Graph::complete(3)),
        ("C4", Graph::cycle(4)),
        ("P4", Graph::path(4)),
        ("bowtie", Graph::new(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])?),
        ("C5", Graph::cycle(5)),
        ("two triangles", Graph::new(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])?),
        ("P6", Graph::path(6)),
        ("C7", Graph::cycle(7)),
    ];

    println!("{:<14} {:>2} {:>4} {:>2} {:>6} {:>8} {:>8}", "graph", "n", "loci", "t", "n - t", "parents", "ms");
    for (name, g) in &graphs {
        let pop = reduce_tp(g)?;
        let tp = brute_tp(g);
        let start = Instant::now();
        let out = exact_min_parent(&pop, ExactLimits::unbounded())?;
        let n = g.node_count();
        let note = if (n - 3 * tp.t) % 2 == 1 { "  (odd leftover)" } else { "" };
        println!(
            "{:<14} {:>2} {:>4} {:>2} {:>6} {:>8} {:>8}{note}",
            name,
            n,
            pop.ell(),
            tp.t,
            n - tp.t,
            out.solution.slot_count,
            start.elapsed().as_millis()
        );
    }
    Ok(())
}
