use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::system::{Point, PolySystem, N_VARS};

/// Settings for [`newton_refine`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub max_iterations: usize,
    /// Stop once the largest residual is at or below this.
    pub tolerance: f64,
    /// A Newton step longer than this (Euclidean) counts as divergence.
    pub max_step: f64,
    pub max_halvings: usize,
    /// Singular values below `rcond * sigma_max` are dropped from the least-squares step.
    pub rcond: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            tolerance: 1e-13,
            max_step: 10.0,
            max_halvings: 30,
            rcond: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NewtonStatus {
    Converged,
    Diverged,
    MaxIterations,
    /// Backtracking could not reduce the residual.
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonResult {
    pub x: Point,
    pub residual: f64,
    pub iterations: usize,
    pub status: NewtonStatus,
}

impl NewtonResult {
    pub fn converged(&self) -> bool {
        self.status == NewtonStatus::Converged
    }
}

/// Minimum-norm least-squares solution of `j * dx = rhs`.
pub(crate) fn least_squares_step(j: DMatrix<f64>, rhs: &DVector<f64>, rcond: f64) -> Option<DVector<f64>> {
    let svd = j.svd(true, true);
    let smax = svd.singular_values.max();
    if smax.is_nan() || smax <= 0.0 {
        return None;
    }
    svd.solve(rhs, rcond * smax).ok()
}

/// Gauss-Newton iteration with step halving on the residual norm.
///
/// Each step is the minimum-norm least-squares solution, so the same routine
/// handles square, overdetermined and underdetermined systems.
pub fn newton_refine(sys: &PolySystem, start: Point, cfg: &NewtonConfig) -> NewtonResult {
    let mut x = start;
    let mut f = sys.evaluate(&x);
    let mut norm = f.norm();

    for it in 0..cfg.max_iterations {
        let residual = f.amax();
        if residual <= cfg.tolerance {
            return NewtonResult {
                x,
                residual,
                iterations: it,
                status: NewtonStatus::Converged,
            };
        }
        let Some(step) = least_squares_step(sys.jacobian(&x), &(-&f), cfg.rcond) else {
            return finish(x, residual, it, NewtonStatus::Stalled);
        };
        let step_norm = step.norm();
        if !step_norm.is_finite() || step_norm > cfg.max_step {
            return finish(x, residual, it, NewtonStatus::Diverged);
        }

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_halvings {
            let mut trial = x;
            for k in 0..N_VARS {
                trial[k] += t * step[k];
            }
            let ft = sys.evaluate(&trial);
            let nt = ft.norm();
            if nt < norm {
                accepted = Some((trial, ft, nt));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((trial, ft, nt)) => {
                x = trial;
                f = ft;
                norm = nt;
            }
            None => return finish(x, residual, it, NewtonStatus::Stalled),
        }
    }
    let residual = f.amax();
    let status = if residual <= cfg.tolerance {
        NewtonStatus::Converged
    } else {
        NewtonStatus::MaxIterations
    };
    finish(x, residual, cfg.max_iterations, status)
}

fn finish(x: Point, residual: f64, iterations: usize, status: NewtonStatus) -> NewtonResult {
    NewtonResult {
        x,
        residual,
        iterations,
        status,
    }
}
