//! Tables with two prescribed odds ratios.
//!
//! Fixing two of the three ratios of a 2×2 table leaves a one-parameter
//! family: an open segment of the probability simplex. Each chart below maps
//! the segment parameter `v` (an open interval) onto that segment, and the
//! remaining ratio is a strictly decreasing bijection from the interval onto
//! `(0, +inf)`. Together with [`invert_third_ratio_xp`] this pins down the
//! unique table with all three ratios prescribed.
//!
//! Closed forms used, with `w = 1 - (a + b) v`:
//!
//! ```text
//! (r_cross = alpha^2, r_parallel = beta^2):
//!     table  = ( ab/(ab+1) w,  w/(ab+1),  beta v,  alpha v )      a=alpha, b=beta
//!     r_equal = ( w / ((ab+1) v) )^2
//!     v(r_equal) = 1 / (alpha + beta + (ab+1) sqrt(r_equal))
//!
//! (r_parallel = beta^2, r_equal = gamma^2):
//!     table  = ( bg/(bg+1) w,  gamma v,  beta v,  w/(bg+1) )      b=beta, g=gamma
//!     r_cross = ( w / ((bg+1) v) )^2
//! ```
//!
//! Some published versions of these relations read `r_equal = w^2 / ((ab+1) v)`,
//! `r_cross = (b/(bg+1))^2 w^2 / v^2` and `v = 1/(alpha + beta + sqrt((ab+1) r_equal))`.
//! Evaluating the ratios of the chart tables directly contradicts all three
//! (for instance `alpha = beta = r_equal = 1` must give the uniform table at
//! `v = 1/4`), so the forms above are the ones implemented.
//!
//! The `(r_cross, r_equal)` family is the transpose of the `(r_cross, r_parallel)`
//! family, since transposing a table exchanges `r_parallel` and `r_equal`.

use crate::error::{Error, Result};
use crate::tables::{OddsTriple, ProbTable2x2, RatioKind, RealMatrix2x2};

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositiveRatio { name, value })
    }
}

fn in_open_interval(name: &'static str, value: f64, lower: f64, upper: f64) -> Result<f64> {
    if value > lower && value < upper {
        Ok(value)
    } else {
        Err(Error::OutOfRangeParameter {
            name,
            value,
            lower,
            upper,
        })
    }
}

/// A one-parameter family of tables sharing two fixed ratios.
pub trait SegmentChart {
    /// The two ratios held fixed along the segment.
    fn fixed(&self) -> [(RatioKind, f64); 2];

    /// The ratio that varies along the segment.
    fn free_kind(&self) -> RatioKind;

    /// Upper end of the open parameter interval `(0, v_upper)`.
    fn v_upper(&self) -> f64;

    fn table(&self, v: f64) -> Result<ProbTable2x2>;

    /// Value of the free ratio at `v`.
    fn third_ratio(&self, v: f64) -> Result<f64>;

    /// Inverse of [`SegmentChart::third_ratio`].
    fn locate(&self, third: f64) -> Result<f64>;
}

/// Chart of the tables with `r_cross = alpha^2` and `r_parallel = beta^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentChartXP {
    alpha: f64,
    beta: f64,
}

impl SegmentChartXP {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            alpha: positive("alpha", alpha)?,
            beta: positive("beta", beta)?,
        })
    }

    pub fn from_ratios(r_cross: f64, r_parallel: f64) -> Result<Self> {
        Self::new(
            positive("r_cross", r_cross)?.sqrt(),
            positive("r_parallel", r_parallel)?.sqrt(),
        )
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn check_v(&self, v: f64) -> Result<f64> {
        in_open_interval("v", v, 0.0, self.v_upper())
    }

    fn entries(&self, v: f64, w: f64) -> [f64; 4] {
        let (a, b) = (self.alpha, self.beta);
        let k = a * b + 1.0;
        [a * b / k * w, w / k, b * v, a * v]
    }
}

impl SegmentChart for SegmentChartXP {
    fn fixed(&self) -> [(RatioKind, f64); 2] {
        [
            (RatioKind::Cross, self.alpha * self.alpha),
            (RatioKind::Parallel, self.beta * self.beta),
        ]
    }

    fn free_kind(&self) -> RatioKind {
        RatioKind::Equal
    }

    fn v_upper(&self) -> f64 {
        1.0 / (self.alpha + self.beta)
    }

    fn table(&self, v: f64) -> Result<ProbTable2x2> {
        let v = self.check_v(v)?;
        let w = 1.0 - (self.alpha + self.beta) * v;
        Ok(ProbTable2x2::from_chart(self.entries(v, w)))
    }

    fn third_ratio(&self, v: f64) -> Result<f64> {
        let v = self.check_v(v)?;
        let w = 1.0 - (self.alpha + self.beta) * v;
        let q = w / ((self.alpha * self.beta + 1.0) * v);
        Ok(q * q)
    }

    fn locate(&self, r_equal: f64) -> Result<f64> {
        let gamma = positive("r_equal", r_equal)?.sqrt();
        let v = 1.0 / (self.alpha + self.beta + (self.alpha * self.beta + 1.0) * gamma);
        // r_equal so small (or large) that v rounds onto an endpoint
        self.check_v(v)
    }
}

/// Chart of the tables with `r_parallel = beta^2` and `r_equal = gamma^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentChartPE {
    beta: f64,
    gamma: f64,
}

impl SegmentChartPE {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            beta: positive("beta", beta)?,
            gamma: positive("gamma", gamma)?,
        })
    }

    pub fn from_ratios(r_parallel: f64, r_equal: f64) -> Result<Self> {
        Self::new(
            positive("r_parallel", r_parallel)?.sqrt(),
            positive("r_equal", r_equal)?.sqrt(),
        )
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl SegmentChart for SegmentChartPE {
    fn fixed(&self) -> [(RatioKind, f64); 2] {
        [
            (RatioKind::Parallel, self.beta * self.beta),
            (RatioKind::Equal, self.gamma * self.gamma),
        ]
    }

    fn free_kind(&self) -> RatioKind {
        RatioKind::Cross
    }

    fn v_upper(&self) -> f64 {
        1.0 / (self.beta + self.gamma)
    }

    fn table(&self, v: f64) -> Result<ProbTable2x2> {
        let v = in_open_interval("v", v, 0.0, self.v_upper())?;
        let (b, g) = (self.beta, self.gamma);
        let k = b * g + 1.0;
        let w = 1.0 - (b + g) * v;
        Ok(ProbTable2x2::from_chart([b * g / k * w, g * v, b * v, w / k]))
    }

    fn third_ratio(&self, v: f64) -> Result<f64> {
        let v = in_open_interval("v", v, 0.0, self.v_upper())?;
        let w = 1.0 - (self.beta + self.gamma) * v;
        let q = w / ((self.beta * self.gamma + 1.0) * v);
        Ok(q * q)
    }

    fn locate(&self, r_cross: f64) -> Result<f64> {
        let alpha = positive("r_cross", r_cross)?.sqrt();
        let v = 1.0 / (self.beta + self.gamma + (self.beta * self.gamma + 1.0) * alpha);
        in_open_interval("v", v, 0.0, self.v_upper())
    }
}

/// Chart of the tables with `r_cross = alpha^2` and `r_equal = gamma^2`,
/// obtained by transposing the [`SegmentChartXP`] tables with `beta = gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentChartXE {
    inner: SegmentChartXP,
}

impl SegmentChartXE {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            inner: SegmentChartXP::new(alpha, positive("gamma", gamma)?)?,
        })
    }

    pub fn from_ratios(r_cross: f64, r_equal: f64) -> Result<Self> {
        Self::new(
            positive("r_cross", r_cross)?.sqrt(),
            positive("r_equal", r_equal)?.sqrt(),
        )
    }
}

impl SegmentChart for SegmentChartXE {
    fn fixed(&self) -> [(RatioKind, f64); 2] {
        let [cross, (_, eq)] = self.inner.fixed();
        [cross, (RatioKind::Equal, eq)]
    }

    fn free_kind(&self) -> RatioKind {
        RatioKind::Parallel
    }

    fn v_upper(&self) -> f64 {
        self.inner.v_upper()
    }

    fn table(&self, v: f64) -> Result<ProbTable2x2> {
        Ok(self.inner.table(v)?.transpose())
    }

    fn third_ratio(&self, v: f64) -> Result<f64> {
        self.inner.third_ratio(v)
    }

    fn locate(&self, r_parallel: f64) -> Result<f64> {
        self.inner.locate(r_parallel)
    }
}

/// Builds the chart holding the two given ratios fixed.
pub fn chart_for(
    first: (RatioKind, f64),
    second: (RatioKind, f64),
) -> Result<Box<dyn SegmentChart + Send + Sync>> {
    use RatioKind::*;
    let mut pair = [first, second];
    pair.sort_by_key(|(k, _)| *k);
    match pair {
        [(Cross, x), (Parallel, p)] => Ok(Box::new(SegmentChartXP::from_ratios(x, p)?)),
        [(Cross, x), (Equal, e)] => Ok(Box::new(SegmentChartXE::from_ratios(x, e)?)),
        [(Parallel, p), (Equal, e)] => Ok(Box::new(SegmentChartPE::from_ratios(p, e)?)),
        _ => Err(Error::Parse(
            "a segment needs two different ratio kinds".to_string(),
        )),
    }
}

pub fn chart_xp_table(alpha: f64, beta: f64, v: f64) -> Result<ProbTable2x2> {
    SegmentChartXP::new(alpha, beta)?.table(v)
}

pub fn chart_pe_table(beta: f64, gamma: f64, v: f64) -> Result<ProbTable2x2> {
    SegmentChartPE::new(beta, gamma)?.table(v)
}

/// `r_equal` along the `(r_cross, r_parallel)` segment.
pub fn third_ratio_xp(alpha: f64, beta: f64, v: f64) -> Result<f64> {
    SegmentChartXP::new(alpha, beta)?.third_ratio(v)
}

/// `r_cross` along the `(r_parallel, r_equal)` segment.
pub fn third_ratio_pe(beta: f64, gamma: f64, v: f64) -> Result<f64> {
    SegmentChartPE::new(beta, gamma)?.third_ratio(v)
}

/// The segment parameter at which the `(alpha, beta)` chart reaches `r_equal`.
///
/// Fails with `OutOfRangeParameter` only when `r_equal` is so extreme that the
/// root rounds onto an endpoint of the interval.
pub fn invert_third_ratio_xp(alpha: f64, beta: f64, r_equal: f64) -> Result<f64> {
    SegmentChartXP::new(alpha, beta)?.locate(r_equal)
}

/// The unique table with the given three ratios.
///
/// Equivalent to evaluating the `(alpha, beta)` chart at the inverted
/// parameter; the entries work out proportional to
/// `(alpha beta gamma, gamma, beta, alpha)`, which is how they are computed
/// here to avoid the cancellation in `1 - (alpha + beta) v`.
pub fn table_from_triple(o: &OddsTriple) -> ProbTable2x2 {
    let (a, b, g) = (o.alpha(), o.beta(), o.gamma());
    let d = a + b + (a * b + 1.0) * g;
    let v = 1.0 / d;
    let w = (a * b + 1.0) * g / d;
    let chart = SegmentChartXP { alpha: a, beta: b };
    ProbTable2x2::from_chart(chart.entries(v, w))
}

/// Margins `(s, t)` of a table with `r_cross = 1`: the first row and the first column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceParams {
    s: f64,
    t: f64,
}

impl IndependenceParams {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        Ok(Self {
            s: in_open_interval("s", s, 0.0, 1.0)?,
            t: in_open_interval("t", t, 0.0, 1.0)?,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn table(&self) -> ProbTable2x2 {
        let (s, t) = (self.s, self.t);
        ProbTable2x2::from_chart([s * t, s * (1.0 - t), (1.0 - s) * t, (1.0 - s) * (1.0 - t)])
    }
}

/// `(s t, s (1-t), (1-s) t, (1-s)(1-t))`.
pub fn independence_table(s: f64, t: f64) -> Result<ProbTable2x2> {
    Ok(IndependenceParams::new(s, t)?.table())
}

/// Inverse of [`independence_table`]; requires `|r_cross - 1| <= tol`.
pub fn independence_params(table: &ProbTable2x2, tol: f64) -> Result<IndependenceParams> {
    let r = table.ratio(RatioKind::Cross);
    if (r - 1.0).abs() > tol {
        return Err(Error::NotIndependent(r));
    }
    let s = table.p00() + table.p01();
    let t = table.p00() + table.p10();
    IndependenceParams::new(s, t)
}

/// `n` tables evenly spaced strictly inside the segment, at `v = k/(n+1) * v_upper`.
pub fn sample_segment<C: SegmentChart + ?Sized>(chart: &C, n: usize) -> Vec<ProbTable2x2> {
    let upper = chart.v_upper();
    (1..=n)
        .map(|k| {
            let v = k as f64 / (n + 1) as f64 * upper;
            chart.table(v).expect("interior grid point")
        })
        .collect()
}

/// Segments of fixed `r_cross`, one per `r_parallel` in the grid.
pub fn ruled_surface_sample(
    r_cross: f64,
    parallel_grid: &[f64],
    v_count: usize,
) -> Result<Vec<ProbTable2x2>> {
    let mut out = Vec::with_capacity(parallel_grid.len() * v_count);
    for &r_parallel in parallel_grid {
        let chart = SegmentChartXP::from_ratios(r_cross, r_parallel)?;
        out.extend(sample_segment(&chart, v_count));
    }
    Ok(out)
}

/// A point of the second linear component, `(beta u, -u/alpha, beta v, -alpha v)`.
/// With positive `alpha` and `beta` it always has a non-positive entry.
pub fn negative_branch_matrix(alpha: f64, beta: f64, u: f64, v: f64) -> RealMatrix2x2 {
    RealMatrix2x2::new(beta * u, -u / alpha, beta * v, -alpha * v)
}
