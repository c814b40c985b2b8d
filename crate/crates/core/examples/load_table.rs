//! Read a table from a CSV or JSON file and print its ratios as JSON with
//! 17 significant digits.
//!
//! `cargo run --example load_table -- table.csv`, or with no argument a
//! small CSV is written to a temporary path first.

use std::path::PathBuf;

use oddsgeom::io::{load_table, num, rows_json, Table};
use serde_json::json;

fn main() -> oddsgeom::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            let p = std::env::temp_dir().join("oddsgeom_example.csv");
            std::fs::write(&p, "45,5\n10,40\n").map_err(|e| oddsgeom::Error::Parse(e.to_string()))?;
            p
        }
    };
    // counts are fine here: normalize
    let report = match load_table(&path)?.into_table(true, 1e-9)? {
        Table::TwoByTwo(t) => {
            let o = t.odds_triple();
            json!({
                "rows": rows_json(&t.rows()),
                "r_cross": num(o.r_cross),
                "r_parallel": num(o.r_parallel),
                "r_equal": num(o.r_equal),
            })
        }
        Table::TwoByThree(t) => json!({
            "rows": rows_json(&t.rows()),
            "ratios": t.all_ratios().iter().map(|r| r.map(num).to_vec()).collect::<Vec<_>>(),
        }),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}
