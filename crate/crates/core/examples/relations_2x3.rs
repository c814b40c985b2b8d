//! The nine ratios of a 2×3 table, the identities they obey, and what a
//! partial assignment of them implies.

use oddsgeom::relations::RatioSlot;
use oddsgeom::tables::RatioKind::{Cross, Equal};
use oddsgeom::{check_relations, closure, ProbTable2x3, RatioAssignment};

fn main() -> oddsgeom::Result<()> {
    let t = ProbTable2x3::new([0.1, 0.2, 0.3, 0.1, 0.2, 0.1], 1e-9)?;
    for slot in RatioSlot::all() {
        println!("{:<12} {:.6}", slot.to_string(), slot.eval(&t));
    }
    for c in check_relations(&t, 1e-10).checks {
        println!("{:<18} {:.6} = {:.6}", c.relation.name(), c.lhs, c.rhs);
    }

    let a = RatioAssignment::from_triples(&[(Cross, 0, 4.0), (Cross, 1, 3.0), (Equal, 2, 2.0)])?;
    let report = closure(&a);
    println!("{:?}", report.status);
    for c in &report.derived {
        println!("  implies {}^({}) = {}", c.kind, c.deleted_col, c.value);
    }

    let bad = RatioAssignment::from_triples(&[(Cross, 0, 1.0), (Cross, 1, 1.0), (Cross, 2, 2.0)])?;
    for v in closure(&bad).violations {
        println!("violated: {} ({} != {})", v.relation.name(), v.lhs, v.rhs);
    }
    Ok(())
}
