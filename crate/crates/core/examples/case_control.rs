//! Diagnostic summary of a case-control study given as counts.
//!
//! Rows are non-diseased / diseased, columns are test negative / positive.

use oddsgeom::normalize_counts;

fn main() -> oddsgeom::Result<()> {
    let t = normalize_counts([45.0, 5.0, 10.0, 40.0])?;
    let s = t.case_control();
    let o = t.odds_triple();
    println!("specificity {:.4}", s.specificity);
    println!("sensitivity {:.4}", s.sensitivity);
    println!("DOR {:.4} (r_cross {:.4})", s.dor, o.r_cross);
    println!("EOR {:.4} (1/r_parallel {:.4})", s.eor, 1.0 / o.r_parallel);
    Ok(())
}
