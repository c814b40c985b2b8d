//! Sample fixed-ratio loci of 2×3 matrices and read off their dimension.
//!
//! `cargo run --release --example explore_locus -- 2000 7` uses 2000 starts
//! and seed 7.

use oddsgeom::locus::explore;
use oddsgeom::tables::RatioKind::{Cross, Equal, Parallel};
use oddsgeom::RatioAssignment;

fn main() -> oddsgeom::Result<()> {
    let mut args = std::env::args().skip(1);
    let starts = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(20050617);

    let conditions = [
        ("r_cross^(1) = r_cross^(2) = 1", vec![(Cross, 1, 1.0), (Cross, 2, 1.0)]),
        ("r_cross^(1) = r_equal^(2) = 1", vec![(Cross, 1, 1.0), (Equal, 2, 1.0)]),
        ("4, 3, 2", vec![(Cross, 0, 4.0), (Cross, 1, 3.0), (Equal, 2, 2.0)]),
        ("equal rows", vec![(Cross, 0, 1.0), (Cross, 1, 1.0), (Equal, 2, 1.0)]),
        (
            "four lines",
            vec![(Cross, 0, 1.0), (Cross, 1, 1.0), (Parallel, 1, 1.0), (Parallel, 2, 1.0)],
        ),
    ];
    for (name, items) in conditions {
        let s = explore(&RatioAssignment::from_triples(&items)?, starts, seed)?;
        let mut dims = s.local_dims();
        dims.sort_unstable();
        dims.dedup();
        println!(
            "{name:<32} slices {}  clusters {:>3}  dims {dims:?}  max points per slice {}  failed {}  rejected {}",
            s.slice_count,
            s.clusters.len(),
            s.max_clusters_per_slice(),
            s.failures,
            s.rejected
        );
    }
    Ok(())
}
