//! The `oddsgeom` command line.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 inconsistent ratio
//! assignment, 4 no solutions found by `explore`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::geometry::{chart_for, ruled_surface_sample, table_from_triple};
use crate::io::{fmt17, load_table, num, parse_inline, rows_json, to_json17, RawTable, Table};
use crate::locus::explore;
use crate::relations::{check_relations, closure, RatioAssignment, RatioSlot};
use crate::tables::{
    entry_ratios_from_triple, OddsTriple, ProbTable2x2, ProbTable2x3, RatioKind, DEFAULT_SUM_TOL,
};

/// Seed used by `explore` when none is given.
pub const DEFAULT_SEED: u64 = 20050617;

/// Relative tolerance for the 2×3 identity check in `ratios` and `relations`.
const RELATION_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "oddsgeom", version, about = "Odds-ratio geometry of 2x2 and 2x3 contingency tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Inline table, rows separated by `;`, entries by `,`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "file")]
    pub table: Option<String>,

    /// CSV or JSON table file.
    #[arg(long)]
    pub file: Option<PathBuf>,

    /// Entries are counts rather than probabilities (requires --normalize).
    #[arg(long)]
    pub counts: bool,

    /// Divide entries by their total.
    #[arg(long)]
    pub normalize: bool,

    /// Tolerance on |sum - 1| for probability input.
    #[arg(long, default_value_t = DEFAULT_SUM_TOL)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Odds ratios of a 2x2 table, or all nine ratios of a 2x3 table.
    Ratios(TableArgs),

    /// The unique 2x2 table with three given ratios.
    Reconstruct {
        #[arg(long)]
        rcross: f64,
        #[arg(long)]
        rparallel: f64,
        #[arg(long)]
        requal: f64,
    },

    /// Tables along the segment where two ratios are fixed.
    Segment {
        #[arg(long)]
        rcross: Option<f64>,
        #[arg(long)]
        rparallel: Option<f64>,
        #[arg(long)]
        requal: Option<f64>,
        /// Read the given values as square roots (alpha, beta, gamma).
        #[arg(long)]
        roots: bool,
        /// Number of interior points.
        #[arg(short = 'n', default_value_t = 10)]
        n: usize,
    },

    /// Tables on the ruled surface of fixed r_cross, one segment per r_parallel.
    Surface {
        #[arg(long)]
        rcross: f64,
        /// Comma-separated r_parallel values.
        #[arg(long, value_delimiter = ',', required = true)]
        rparallel_grid: Vec<f64>,
        #[arg(long)]
        roots: bool,
        #[arg(short = 'n', default_value_t = 10)]
        n: usize,
    },

    /// Specificity, sensitivity, DOR and EOR of a case-control table.
    Casecontrol(TableArgs),

    /// Check the 2x3 identities on a table, or close a ratio assignment.
    Relations {
        #[command(flatten)]
        table: TableArgs,
        /// Inline assignment JSON instead of a table.
        #[arg(long, conflicts_with_all = ["table", "file"])]
        assignment: Option<String>,
        /// Assignment JSON file instead of a table.
        #[arg(long, conflicts_with_all = ["table", "file", "assignment"])]
        assignment_file: Option<PathBuf>,
    },

    /// Sample the locus of a 2x3 ratio assignment.
    Explore {
        /// Assignment JSON file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Inline assignment JSON.
        #[arg(long, conflicts_with = "file")]
        assignment: Option<String>,
        #[arg(long, default_value_t = 500)]
        starts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// What a command produced: text for stdout, text for stderr, exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stdout: String, err: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout,
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(report) => Outcome::ok(render(&report, cli.format)),
        Err(e) => {
            let code = exit_code(&e);
            let stdout = match &e {
                Error::InconsistentAssignment(report) => {
                    render(&Report::json(json!({ "closure": to_json17(report) })), cli.format)
                }
                _ => String::new(),
            };
            Outcome::fail(code, stdout, e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InconsistentAssignment(_) => 3,
        Error::NoSolutionsFound { .. } => 4,
        _ => 2,
    }
}

/// A JSON document plus an optional flat CSV view of it.
struct Report {
    json: Value,
    csv: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Report {
    fn json(json: Value) -> Self {
        Self { json, csv: None }
    }

    fn with_csv(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.csv = Some((header.iter().map(|s| s.to_string()).collect(), rows));
        self
    }
}

fn render(report: &Report, format: Format) -> String {
    match (format, &report.csv) {
        (Format::Csv, Some((header, rows))) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).expect("in-memory write");
            for r in rows {
                w.write_record(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
        _ => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("json");
            s.push('\n');
            s
        }
    }
}

fn read_table(args: &TableArgs) -> Result<Table, Error> {
    let raw: RawTable = match (&args.table, &args.file) {
        (Some(t), _) => parse_inline(t)?,
        (None, Some(path)) => load_table(path)?,
        (None, None) => return Err(Error::Parse("pass --table or --file".to_string())),
    };
    if args.counts && !args.normalize {
        return Err(Error::Parse("count input needs --normalize".to_string()));
    }
    raw.into_table(args.normalize, args.tol)
}

fn read_assignment(inline: Option<&str>, file: Option<&PathBuf>) -> Result<RatioAssignment, Error> {
    let text = match (inline, file) {
        (Some(s), _) => s.to_string(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
        (None, None) => return Err(Error::Parse("pass an assignment".to_string())),
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

fn execute(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Ratios(args) => match read_table(args)? {
            Table::TwoByTwo(t) => Ok(ratios_2x2(&t)),
            Table::TwoByThree(t) => Ok(ratios_2x3(&t)),
        },
        Command::Reconstruct {
            rcross,
            rparallel,
            requal,
        } => reconstruct(*rcross, *rparallel, *requal),
        Command::Segment {
            rcross,
            rparallel,
            requal,
            roots,
            n,
        } => segment(*rcross, *rparallel, *requal, *roots, *n),
        Command::Surface {
            rcross,
            rparallel_grid,
            roots,
            n,
        } => surface(*rcross, rparallel_grid, *roots, *n),
        Command::Casecontrol(args) => match read_table(args)? {
            Table::TwoByTwo(t) => Ok(casecontrol(&t)),
            Table::TwoByThree(_) => Err(Error::Parse("casecontrol needs a 2x2 table".to_string())),
        },
        Command::Relations {
            table,
            assignment,
            assignment_file,
        } => {
            if assignment.is_some() || assignment_file.is_some() {
                let a = read_assignment(assignment.as_deref(), assignment_file.as_ref())?;
                let report = closure(&a);
                if !report.is_consistent() {
                    return Err(Error::InconsistentAssignment(Box::new(report)));
                }
                Ok(Report::json(json!({
                    "assignment": to_json17(&a),
                    "closure": to_json17(&report),
                })))
            } else {
                match read_table(table)? {
                    Table::TwoByThree(t) => Ok(ratios_2x3(&t)),
                    Table::TwoByTwo(_) => {
                        Err(Error::Parse("relations needs a 2x3 table".to_string()))
                    }
                }
            }
        }
        Command::Explore {
            file,
            assignment,
            starts,
            seed,
        } => {
            let a = read_assignment(assignment.as_deref(), file.as_ref())?;
            let report = closure(&a);
            if !report.is_consistent() {
                return Err(Error::InconsistentAssignment(Box::new(report)));
            }
            let sample = explore(&a, *starts, *seed)?;
            let rows = sample
                .clusters
                .iter()
                .map(|c| {
                    let mut r: Vec<String> = c.representative.iter().map(|&x| fmt17(x)).collect();
                    r.push(fmt17(c.residual));
                    r.push(c.size.to_string());
                    r.push(c.local_dim.dim.to_string());
                    r
                })
                .collect();
            Ok(Report::json(json!({
                "assignment": to_json17(&a),
                "closure": to_json17(&report),
                "sample": to_json17(&sample),
            }))
            .with_csv(
                &["p00", "p01", "p02", "p10", "p11", "p12", "residual", "size", "local_dim"],
                rows,
            ))
        }
    }
}

fn triple_json(o: &OddsTriple) -> Value {
    json!({
        "r_cross": num(o.r_cross),
        "r_parallel": num(o.r_parallel),
        "r_equal": num(o.r_equal),
    })
}

fn table_row(t: &ProbTable2x2) -> Vec<String> {
    let o = t.odds_triple();
    t.entries()
        .iter()
        .chain(&[o.r_cross, o.r_parallel, o.r_equal])
        .map(|&x| fmt17(x))
        .collect()
}

const TABLE_HEADER: [&str; 7] = ["p00", "p01", "p10", "p11", "r_cross", "r_parallel", "r_equal"];

fn ratios_2x2(t: &ProbTable2x2) -> Report {
    let o = t.odds_triple();
    let e = entry_ratios_from_triple(&o);
    let json = json!({
        "shape": "2x2",
        "rows": rows_json(&t.rows()),
        "r_cross": num(o.r_cross),
        "r_parallel": num(o.r_parallel),
        "r_equal": num(o.r_equal),
        "alpha": num(o.alpha()),
        "beta": num(o.beta()),
        "gamma": num(o.gamma()),
        "entry_ratios": {
            "p00_over_p11": num(e.diag),
            "p10_over_p01": num(e.off_diag),
        },
    });
    let mut row = table_row(t);
    row.extend([o.alpha(), o.beta(), o.gamma()].map(fmt17));
    let mut header = TABLE_HEADER.to_vec();
    header.extend(["alpha", "beta", "gamma"]);
    Report::json(json).with_csv(&header, vec![row])
}

fn ratios_2x3(t: &ProbTable2x3) -> Report {
    let ratios: Vec<_> = RatioSlot::all().map(|s| (s, s.eval(t))).collect();
    let json = json!({
        "shape": "2x3",
        "rows": rows_json(&t.rows()),
        "ratios": ratios
            .iter()
            .map(|(s, v)| json!({ "kind": s.kind, "deleted_col": s.deleted_col, "value": num(*v) }))
            .collect::<Vec<_>>(),
        "relations": to_json17(&check_relations(t, RELATION_TOL)),
    });
    let rows = ratios
        .iter()
        .map(|(s, v)| vec![s.kind.to_string(), s.deleted_col.to_string(), fmt17(*v)])
        .collect();
    Report::json(json).with_csv(&["kind", "deleted_col", "value"], rows)
}

fn reconstruct(rcross: f64, rparallel: f64, requal: f64) -> Result<Report, Error> {
    let o = OddsTriple::new(rcross, rparallel, requal)?;
    let t = table_from_triple(&o);
    let back = t.odds_triple();
    let max_rel = RatioKind::ALL
        .iter()
        .map(|&k| ((back.get(k) - o.get(k)) / o.get(k)).abs())
        .fold(0.0, f64::max);
    let json = json!({
        "input": triple_json(&o),
        "rows": rows_json(&t.rows()),
        "verification": {
            "ratios": triple_json(&back),
            "max_relative_error": num(max_rel),
            "sum": num(t.entries().iter().sum()),
        },
    });
    Ok(Report::json(json).with_csv(&TABLE_HEADER, vec![table_row(&t)]))
}

fn ratio_arg(value: f64, roots: bool) -> f64 {
    if roots {
        value * value
    } else {
        value
    }
}

fn segment(
    rcross: Option<f64>,
    rparallel: Option<f64>,
    requal: Option<f64>,
    roots: bool,
    n: usize,
) -> Result<Report, Error> {
    let given: Vec<(RatioKind, f64)> = [
        (RatioKind::Cross, rcross),
        (RatioKind::Parallel, rparallel),
        (RatioKind::Equal, requal),
    ]
    .into_iter()
    .filter_map(|(k, v)| v.map(|v| (k, ratio_arg(v, roots))))
    .collect();
    let [first, second] = given[..] else {
        return Err(Error::Parse(
            "segment needs exactly two of --rcross, --rparallel, --requal".to_string(),
        ));
    };
    let chart = chart_for(first, second)?;
    let upper = chart.v_upper();
    let mut tables = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for k in 1..=n {
        let v = k as f64 / (n + 1) as f64 * upper;
        let t = chart.table(v)?;
        let o = t.odds_triple();
        tables.push(json!({
            "v": num(v),
            "rows": rows_json(&t.rows()),
            "ratios": triple_json(&o),
        }));
        let mut row = vec![fmt17(v)];
        row.extend(table_row(&t));
        rows.push(row);
    }
    let json = json!({
        "fixed": chart.fixed().iter().map(|(k, v)| json!({"kind": k, "value": num(*v)})).collect::<Vec<_>>(),
        "free": chart.free_kind(),
        "v_upper": num(upper),
        "tables": tables,
    });
    let mut header = vec!["v"];
    header.extend(TABLE_HEADER);
    Ok(Report::json(json).with_csv(&header, rows))
}

fn surface(rcross: f64, grid: &[f64], roots: bool, n: usize) -> Result<Report, Error> {
    let rcross = ratio_arg(rcross, roots);
    let grid: Vec<f64> = grid.iter().map(|&g| ratio_arg(g, roots)).collect();
    let tables = ruled_surface_sample(rcross, &grid, n)?;
    let mut items = Vec::with_capacity(tables.len());
    let mut rows = Vec::with_capacity(tables.len());
    for (i, t) in tables.iter().enumerate() {
        let target = grid[i / n.max(1)];
        items.push(json!({
            "r_parallel_target": num(target),
            "rows": rows_json(&t.rows()),
            "ratios": triple_json(&t.odds_triple()),
        }));
        let mut row = vec![fmt17(target)];
        row.extend(table_row(t));
        rows.push(row);
    }
    let json = json!({
        "r_cross": num(rcross),
        "r_parallel_grid": grid.iter().map(|&g| num(g)).collect::<Vec<_>>(),
        "tables": items,
    });
    let mut header = vec!["r_parallel_target"];
    header.extend(TABLE_HEADER);
    Ok(Report::json(json).with_csv(&header, rows))
}

fn casecontrol(t: &ProbTable2x2) -> Report {
    let s = t.case_control();
    let o = t.odds_triple();
    let dor_residual = (s.dor - o.r_cross).abs();
    let eor_residual = (s.eor * o.r_parallel - 1.0).abs();
    let json = json!({
        "rows": rows_json(&t.rows()),
        "specificity": num(s.specificity),
        "sensitivity": num(s.sensitivity),
        "dor": num(s.dor),
        "eor": num(s.eor),
        "r_cross": num(o.r_cross),
        "r_parallel": num(o.r_parallel),
        "dor_residual": num(dor_residual),
        "eor_residual": num(eor_residual),
    });
    let row = [
        s.specificity,
        s.sensitivity,
        s.dor,
        s.eor,
        dor_residual,
        eor_residual,
    ]
    .map(fmt17)
    .to_vec();
    Report::json(json).with_csv(
        &["specificity", "sensitivity", "dor", "eor", "dor_residual", "eor_residual"],
        vec![row],
    )
}
