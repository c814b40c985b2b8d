//! Any three positive ratios belong to exactly one table.

use oddsgeom::{entry_ratios_from_triple, table_from_triple, OddsTriple};

fn main() -> oddsgeom::Result<()> {
    for (x, p, e) in [(1.0, 1.0, 1.0), (6.0, 2.0 / 3.0, 8.0 / 3.0), (36.0, 2.25, 0.5625)] {
        let o = OddsTriple::new(x, p, e)?;
        let t = table_from_triple(&o);
        let back = t.odds_triple();
        let er = entry_ratios_from_triple(&o);
        println!(
            "({x}, {p:.4}, {e:.4}) -> {:?}  ratios back {:.12} {:.12} {:.12}  p00/p11 {:.4}  p10/p01 {:.4}",
            t.entries(),
            back.r_cross,
            back.r_parallel,
            back.r_equal,
            er.diag,
            er.off_diag
        );
    }
    Ok(())
}
