//! Walk the segment of tables with r_cross = 4 and r_parallel = 1.
//!
//! The third ratio falls from +inf to 0 along the way, so every value of it
//! is met exactly once.

use oddsgeom::geometry::{sample_segment, SegmentChart, SegmentChartXP};

fn main() -> oddsgeom::Result<()> {
    let chart = SegmentChartXP::from_ratios(4.0, 1.0)?;
    println!("v in (0, {})", chart.v_upper());
    for t in sample_segment(&chart, 7) {
        let o = t.odds_triple();
        println!("{:?}  r_equal = {:.6}", t.entries(), o.r_equal);
    }

    let v = chart.locate(1.0)?;
    println!("r_equal = 1 at v = {v}: {:?}", chart.table(v)?.entries());
    Ok(())
}
