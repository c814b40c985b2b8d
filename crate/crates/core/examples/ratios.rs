//! The three odds ratios of a 2×2 table and their square roots.

use oddsgeom::{normalize_counts, RatioKind};

fn main() -> oddsgeom::Result<()> {
    let t = normalize_counts([4.0, 2.0, 1.0, 3.0])?;
    println!("table {:?}", t.rows());
    for kind in RatioKind::ALL {
        println!("r_{:<9} = {:.6}", kind.name(), t.ratio(kind));
    }
    let o = t.odds_triple();
    println!("alpha {:.6}  beta {:.6}  gamma {:.6}", o.alpha(), o.beta(), o.gamma());

    // swapping rows inverts r_cross and r_equal but leaves r_parallel alone
    let s = t.swap_rows().odds_triple();
    println!("rows swapped: {:.6} {:.6} {:.6}", s.r_cross, s.r_parallel, s.r_equal);
    Ok(())
}
