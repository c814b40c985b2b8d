//! Geometry of 2×2 and 2×3 contingency tables with prescribed odds ratios.
//!
//! - [`tables`]: validated tables, the three odds ratios, 2×3 sub-ratios and
//!   case-control indices.
//! - [`geometry`]: the segments of tables sharing two ratios, the unique table
//!   with three given ratios, the independence chart and surface sampling.
//! - [`relations`]: the multiplicative identities among 2×3 ratios and the
//!   closure of partial assignments.
//! - [`locus`]: Newton-based sampling of fixed-ratio loci of 2×3 matrices and
//!   local dimension estimates.
//! - [`io`] and [`cli`]: file formats and the `oddsgeom` command line.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod locus;
pub mod relations;
pub mod tables;

pub use error::{Error, Result};
pub use geometry::{
    chart_pe_table, chart_xp_table, independence_params, independence_table,
    invert_third_ratio_xp, negative_branch_matrix, ruled_surface_sample, sample_segment,
    table_from_triple, third_ratio_pe, third_ratio_xp, IndependenceParams, SegmentChart,
    SegmentChartPE, SegmentChartXE, SegmentChartXP,
};
pub use relations::{check_relations, closure, ConsistencyReport, Constraint, RatioAssignment};
pub use tables::{
    case_control_summary, entry_ratios_from_triple, normalize_counts, odds_triple, ratio_2x3,
    validate_table, CaseControlSummary, OddsTriple, ProbTable2x2, ProbTable2x3, RatioKind,
    RealMatrix2x2,
};
