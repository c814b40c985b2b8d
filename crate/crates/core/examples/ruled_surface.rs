//! Tables with r_cross = 1 (independence), swept by r_parallel, as CSV.
//!
//! Each r_parallel contributes one straight segment; together they cover the
//! independence surface. Pipe into a plotting tool of your choice.

use oddsgeom::geometry::{independence_params, ruled_surface_sample};

fn main() -> oddsgeom::Result<()> {
    let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
    let n = 9;
    println!("r_parallel,p00,p01,p10,p11,s,t");
    for (i, t) in ruled_surface_sample(1.0, &grid, n)?.iter().enumerate() {
        let st = independence_params(t, 1e-12)?;
        let [a, b, c, d] = t.entries();
        println!("{},{a},{b},{c},{d},{},{}", grid[i / n], st.s(), st.t());
    }
    Ok(())
}
