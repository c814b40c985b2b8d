//! Contingency tables, their odds ratios and case-control indices.
//!
//! A 2×2 table is stored row-major as `(p00, p01, p10, p11)` and a 2×3 table
//! as `(p00, p01, p02, p10, p11, p12)`. Every table here is strictly positive
//! and sums to one; zero cells are rejected because the ratios would be zero
//! or undefined.
//!
//! The three ratios of a 2×2 table are
//!
//! ```text
//! r_cross    = p00 p11 / (p01 p10)
//! r_parallel = p00 p10 / (p01 p11)
//! r_equal    = p00 p01 / (p10 p11)
//! ```
//!
//! and their positive square roots are called `alpha`, `beta` and `gamma`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on `|sum - 1|` accepted by the validating constructors.
pub const DEFAULT_SUM_TOL: f64 = 1e-9;

/// Which of the three ratios of a 2×2 (sub)table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioKind {
    Cross,
    Parallel,
    Equal,
}

impl RatioKind {
    pub const ALL: [RatioKind; 3] = [RatioKind::Cross, RatioKind::Parallel, RatioKind::Equal];

    pub fn name(self) -> &'static str {
        match self {
            RatioKind::Cross => "cross",
            RatioKind::Parallel => "parallel",
            RatioKind::Equal => "equal",
        }
    }

    /// Indices `(numerator, denominator)` of the two monomials of this ratio
    /// in a row-major 2×2 block `[q00, q01, q10, q11]`.
    pub(crate) fn monomials(self) -> ([usize; 2], [usize; 2]) {
        match self {
            RatioKind::Cross => ([0, 3], [1, 2]),
            RatioKind::Parallel => ([0, 2], [1, 3]),
            RatioKind::Equal => ([0, 1], [2, 3]),
        }
    }

    /// The ratio evaluated on raw 2×2 entries (no validation).
    pub fn of(self, q: [f64; 4]) -> f64 {
        let (num, den) = self.monomials();
        (q[num[0]] * q[num[1]]) / (q[den[0]] * q[den[1]])
    }
}

impl fmt::Display for RatioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RatioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cross" | "x" => Ok(RatioKind::Cross),
            "parallel" | "||" => Ok(RatioKind::Parallel),
            "equal" | "=" => Ok(RatioKind::Equal),
            other => Err(Error::Parse(format!("unknown ratio kind `{other}`"))),
        }
    }
}

/// An unconstrained real 2×2 matrix, a point of affine 4-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealMatrix2x2 {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

impl RealMatrix2x2 {
    pub fn new(p00: f64, p01: f64, p10: f64, p11: f64) -> Self {
        Self { p00, p01, p10, p11 }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.p00, self.p01, self.p10, self.p11]
    }

    /// True when every entry is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.entries().iter().all(|&p| p > 0.0)
    }
}

fn check_entries(raw: &[f64], tol: f64) -> Result<()> {
    if let Some(i) = raw.iter().position(|p| !p.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if let Some(i) = raw.iter().position(|&p| p <= 0.0) {
        return Err(Error::NonPositiveEntry(i));
    }
    let sum: f64 = raw.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::NotNormalized(sum));
    }
    Ok(())
}

fn normalize<const N: usize>(counts: [f64; N]) -> Result<[f64; N]> {
    if let Some(i) = counts.iter().position(|p| !p.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if let Some(i) = counts.iter().position(|&p| p <= 0.0) {
        return Err(Error::NonPositiveEntry(i));
    }
    let total: f64 = counts.iter().sum();
    Ok(counts.map(|c| c / total))
}

/// A strictly positive 2×2 probability table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbTable2x2 {
    p: [f64; 4],
}

impl ProbTable2x2 {
    /// Validates raw entries. Values are kept as given, never renormalized.
    pub fn new(raw: [f64; 4], tol: f64) -> Result<Self> {
        check_entries(&raw, tol)?;
        Ok(Self { p: raw })
    }

    /// Maps positive counts into the simplex by dividing by their total.
    pub fn from_counts(counts: [f64; 4]) -> Result<Self> {
        Ok(Self {
            p: normalize(counts)?,
        })
    }

    /// Built by the charts, whose entries are positive and sum to one by construction.
    pub(crate) fn from_chart(p: [f64; 4]) -> Self {
        debug_assert!(p.iter().all(|&x| x > 0.0), "chart produced {p:?}");
        Self { p }
    }

    pub fn uniform() -> Self {
        Self { p: [0.25; 4] }
    }

    pub fn entries(&self) -> [f64; 4] {
        self.p
    }

    pub fn p00(&self) -> f64 {
        self.p[0]
    }
    pub fn p01(&self) -> f64 {
        self.p[1]
    }
    pub fn p10(&self) -> f64 {
        self.p[2]
    }
    pub fn p11(&self) -> f64 {
        self.p[3]
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.p[0], self.p[1]], [self.p[2], self.p[3]]]
    }

    pub fn transpose(&self) -> Self {
        Self {
            p: [self.p[0], self.p[2], self.p[1], self.p[3]],
        }
    }

    pub fn swap_rows(&self) -> Self {
        Self {
            p: [self.p[2], self.p[3], self.p[0], self.p[1]],
        }
    }

    pub fn swap_cols(&self) -> Self {
        Self {
            p: [self.p[1], self.p[0], self.p[3], self.p[2]],
        }
    }

    pub fn ratio(&self, kind: RatioKind) -> f64 {
        kind.of(self.p)
    }

    pub fn odds_triple(&self) -> OddsTriple {
        OddsTriple {
            r_cross: self.ratio(RatioKind::Cross),
            r_parallel: self.ratio(RatioKind::Parallel),
            r_equal: self.ratio(RatioKind::Equal),
        }
    }

    pub fn case_control(&self) -> CaseControlSummary {
        case_control_summary(self)
    }
}

/// `validate_table`: accepts a table iff every entry is positive and the sum is within `tol` of 1.
pub fn validate_table(raw: [f64; 4], tol: f64) -> Result<ProbTable2x2> {
    ProbTable2x2::new(raw, tol)
}

pub fn normalize_counts(counts: [f64; 4]) -> Result<ProbTable2x2> {
    ProbTable2x2::from_counts(counts)
}

pub fn odds_triple(t: &ProbTable2x2) -> OddsTriple {
    t.odds_triple()
}

/// The three odds ratios of a 2×2 table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OddsTriple {
    pub r_cross: f64,
    pub r_parallel: f64,
    pub r_equal: f64,
}

impl OddsTriple {
    pub fn new(r_cross: f64, r_parallel: f64, r_equal: f64) -> Result<Self> {
        for (name, value) in [
            ("r_cross", r_cross),
            ("r_parallel", r_parallel),
            ("r_equal", r_equal),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveRatio { name, value });
            }
        }
        Ok(Self {
            r_cross,
            r_parallel,
            r_equal,
        })
    }

    /// Positive square root of `r_cross`.
    pub fn alpha(&self) -> f64 {
        self.r_cross.sqrt()
    }

    /// Positive square root of `r_parallel`.
    pub fn beta(&self) -> f64 {
        self.r_parallel.sqrt()
    }

    /// Positive square root of `r_equal`.
    pub fn gamma(&self) -> f64 {
        self.r_equal.sqrt()
    }

    pub fn get(&self, kind: RatioKind) -> f64 {
        match kind {
            RatioKind::Cross => self.r_cross,
            RatioKind::Parallel => self.r_parallel,
            RatioKind::Equal => self.r_equal,
        }
    }

    /// Triple of the transposed table: transposition swaps `r_parallel` and `r_equal`.
    pub fn transposed(&self) -> Self {
        Self {
            r_cross: self.r_cross,
            r_parallel: self.r_equal,
            r_equal: self.r_parallel,
        }
    }
}

/// Entry quotients recoverable from the triple alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryRatios {
    /// `beta * gamma`, equal to `p00 / p11`.
    pub diag: f64,
    /// `beta / gamma`, equal to `p10 / p01`.
    ///
    /// Note the orientation: `r_parallel / r_equal = (p10 / p01)^2`, so the
    /// off-diagonal quotient is `p10 / p01` and not its reciprocal.
    pub off_diag: f64,
}

pub fn entry_ratios_from_triple(o: &OddsTriple) -> EntryRatios {
    let (beta, gamma) = (o.beta(), o.gamma());
    EntryRatios {
        diag: beta * gamma,
        off_diag: beta / gamma,
    }
}

/// Specificity, sensitivity and the diagnostic / error odds ratios of a
/// case-control table (rows: disease absent/present, columns: test negative/positive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseControlSummary {
    pub specificity: f64,
    pub sensitivity: f64,
    pub dor: f64,
    pub eor: f64,
}

pub fn case_control_summary(t: &ProbTable2x2) -> CaseControlSummary {
    let [p00, p01, p10, p11] = t.entries();
    let row0 = p00 + p01;
    let row1 = p10 + p11;
    let specificity = p00 / row0;
    let sensitivity = p11 / row1;
    // complements taken from the cells, not as 1 - x, to keep full relative precision
    let spec_c = p01 / row0;
    let sens_c = p10 / row1;
    let spec_odds = specificity / spec_c;
    let sens_odds = sensitivity / sens_c;
    CaseControlSummary {
        specificity,
        sensitivity,
        dor: spec_odds / (sens_c / sensitivity),
        eor: sens_odds / spec_odds,
    }
}

/// A strictly positive 2×3 probability table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbTable2x3 {
    p: [f64; 6],
}

impl ProbTable2x3 {
    pub fn new(raw: [f64; 6], tol: f64) -> Result<Self> {
        check_entries(&raw, tol)?;
        Ok(Self { p: raw })
    }

    pub fn from_counts(counts: [f64; 6]) -> Result<Self> {
        Ok(Self {
            p: normalize(counts)?,
        })
    }

    pub fn uniform() -> Self {
        Self { p: [1.0 / 6.0; 6] }
    }

    pub fn entries(&self) -> [f64; 6] {
        self.p
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.p[3 * row + col]
    }

    pub fn rows(&self) -> [[f64; 3]; 2] {
        [[self.p[0], self.p[1], self.p[2]], [self.p[3], self.p[4], self.p[5]]]
    }

    /// The 2×2 block left after deleting `deleted_col`, columns in increasing order.
    pub fn submatrix(&self, deleted_col: usize) -> Result<[f64; 4]> {
        let [a, b] = kept_columns(deleted_col)?;
        Ok([self.p[a], self.p[b], self.p[3 + a], self.p[3 + b]])
    }

    pub fn ratio(&self, kind: RatioKind, deleted_col: usize) -> Result<f64> {
        Ok(kind.of(self.submatrix(deleted_col)?))
    }

    /// All nine ratios, indexed `[kind][deleted_col]` in the order of [`RatioKind::ALL`].
    pub fn all_ratios(&self) -> [[f64; 3]; 3] {
        RatioKind::ALL.map(|kind| {
            [0, 1, 2].map(|col| self.ratio(kind, col).expect("column in range"))
        })
    }
}

/// `ratio_2x3`: the `kind` ratio of the 2×2 block obtained by deleting `deleted_col`.
pub fn ratio_2x3(t: &ProbTable2x3, kind: RatioKind, deleted_col: usize) -> Result<f64> {
    t.ratio(kind, deleted_col)
}

/// The two columns kept when `deleted_col` is removed from a 2×3 matrix.
pub fn kept_columns(deleted_col: usize) -> Result<[usize; 2]> {
    match deleted_col {
        0 => Ok([1, 2]),
        1 => Ok([0, 2]),
        2 => Ok([0, 1]),
        c => Err(Error::BadColumn(c)),
    }
}
