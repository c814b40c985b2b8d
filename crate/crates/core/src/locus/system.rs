use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::relations::{closure, Constraint, RatioAssignment};
use crate::tables::kept_columns;

/// Number of unknowns: the entries of a 2×3 matrix, row-major.
pub const N_VARS: usize = 6;

/// Smallest admissible `|entry|` for a point to count as off the coordinate hyperplanes.
pub const DEFAULT_ENTRY_FLOOR: f64 = 1e-6;

pub type Point = [f64; N_VARS];

/// `value * den[0] * den[1] - num[0] * num[1]`, indices into the 6 unknowns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEquation {
    pub constraint: Constraint,
    pub num: [usize; 2],
    pub den: [usize; 2],
}

impl RatioEquation {
    pub fn new(constraint: Constraint) -> Result<Self> {
        let [a, b] = kept_columns(constraint.deleted_col)?;
        let block = [a, b, 3 + a, 3 + b];
        let (num, den) = constraint.kind.monomials();
        Ok(Self {
            constraint,
            num: num.map(|i| block[i]),
            den: den.map(|i| block[i]),
        })
    }

    pub fn eval(&self, x: &Point) -> f64 {
        self.constraint.value * x[self.den[0]] * x[self.den[1]] - x[self.num[0]] * x[self.num[1]]
    }

    pub fn gradient(&self, x: &Point) -> Point {
        let mut g = [0.0; N_VARS];
        let c = self.constraint.value;
        g[self.den[0]] += c * x[self.den[1]];
        g[self.den[1]] += c * x[self.den[0]];
        g[self.num[0]] -= x[self.num[1]];
        g[self.num[1]] -= x[self.num[0]];
        g
    }

    /// The ratio itself, `num / den`.
    pub fn ratio(&self, x: &Point) -> f64 {
        (x[self.num[0]] * x[self.num[1]]) / (x[self.den[0]] * x[self.den[1]])
    }
}

/// An affine equation `coeffs . x - offset = 0`, used to cut the locus down to points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineSlice {
    pub coeffs: Point,
    pub offset: f64,
}

impl AffineSlice {
    pub fn eval(&self, x: &Point) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - self.offset
    }
}

/// Cleared-denominator ratio equations, the sum-to-one equation and optional slices.
///
/// Equation order is: ratio equations (assignment order), the sum, then slices.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    ratios: Vec<RatioEquation>,
    slices: Vec<AffineSlice>,
}

impl PolySystem {
    /// Builds the system without any closure check.
    pub fn from_constraints(constraints: &[Constraint]) -> Result<Self> {
        Ok(Self {
            ratios: constraints
                .iter()
                .map(|&c| RatioEquation::new(c))
                .collect::<Result<_>>()?,
            slices: Vec::new(),
        })
    }

    pub fn ratio_equations(&self) -> &[RatioEquation] {
        &self.ratios
    }

    pub fn slices(&self) -> &[AffineSlice] {
        &self.slices
    }

    pub fn n_vars(&self) -> usize {
        N_VARS
    }

    pub fn n_equations(&self) -> usize {
        self.ratios.len() + 1 + self.slices.len()
    }

    pub fn with_slices(&self, slices: Vec<AffineSlice>) -> Self {
        Self {
            ratios: self.ratios.clone(),
            slices,
        }
    }

    pub fn without_slices(&self) -> Self {
        self.with_slices(Vec::new())
    }

    pub fn evaluate(&self, x: &Point) -> DVector<f64> {
        let mut out = Vec::with_capacity(self.n_equations());
        out.extend(self.ratios.iter().map(|e| e.eval(x)));
        out.push(x.iter().sum::<f64>() - 1.0);
        out.extend(self.slices.iter().map(|s| s.eval(x)));
        DVector::from_vec(out)
    }

    pub fn jacobian(&self, x: &Point) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.n_equations(), N_VARS);
        for (r, e) in self.ratios.iter().enumerate() {
            for (c, g) in e.gradient(x).into_iter().enumerate() {
                j[(r, c)] = g;
            }
        }
        let sum_row = self.ratios.len();
        for c in 0..N_VARS {
            j[(sum_row, c)] = 1.0;
        }
        for (k, s) in self.slices.iter().enumerate() {
            for c in 0..N_VARS {
                j[(sum_row + 1 + k, c)] = s.coeffs[c];
            }
        }
        j
    }

    /// Largest absolute residual.
    pub fn residual(&self, x: &Point) -> f64 {
        self.evaluate(x).amax()
    }
}

/// One quadric per constraint plus the sum-to-one equation; rejects assignments
/// the closure finds inconsistent.
pub fn build_system(a: &RatioAssignment) -> Result<PolySystem> {
    let report = closure(a);
    if !report.is_consistent() {
        return Err(Error::InconsistentAssignment(Box::new(report)));
    }
    PolySystem::from_constraints(a.constraints())
}

/// Whether `x` lies on the locus of `a`: entries off zero by at least
/// [`DEFAULT_ENTRY_FLOOR`], sum within `tol` of one, every ratio within relative `tol`.
pub fn membership(x: &Point, a: &RatioAssignment, tol: f64) -> bool {
    membership_with_floor(x, a, tol, DEFAULT_ENTRY_FLOOR)
}

pub fn membership_with_floor(x: &Point, a: &RatioAssignment, tol: f64, floor: f64) -> bool {
    if x.iter().any(|v| !v.is_finite() || v.abs() < floor) {
        return false;
    }
    if (x.iter().sum::<f64>() - 1.0).abs() > tol {
        return false;
    }
    a.constraints().iter().all(|&c| {
        let eq = RatioEquation::new(c).expect("validated assignment");
        let r = eq.ratio(x);
        (r - c.value).abs() <= tol * c.value.abs()
    })
}
