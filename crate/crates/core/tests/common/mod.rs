//! Random draws and direct-ratio oracles shared by the integration tests.

#![allow(dead_code)]

use oddsgeom::{ProbTable2x2, ProbTable2x3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Log-uniform on `[e^-span, e^span]`.
pub fn log_uniform<R: Rng>(rng: &mut R, span: f64) -> f64 {
    rng.random_range(-span..span).exp()
}

/// Uniform on the open simplex, redrawn until every entry is above `1e-6`.
pub fn simplex<const N: usize, R: Rng>(rng: &mut R) -> [f64; N] {
    loop {
        let mut x = [0.0; N];
        for v in &mut x {
            *v = rng.sample::<f64, _>(Exp1);
        }
        let total: f64 = x.iter().sum();
        let x = x.map(|v| v / total);
        if x.iter().all(|&v| v > 1e-6) {
            return x;
        }
    }
}

pub fn table2x2<R: Rng>(rng: &mut R) -> ProbTable2x2 {
    ProbTable2x2::new(simplex::<4, _>(rng), 1e-9).unwrap()
}

pub fn table2x3<R: Rng>(rng: &mut R) -> ProbTable2x3 {
    ProbTable2x3::new(simplex::<6, _>(rng), 1e-9).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

// The three ratios straight from the definitions, on [p00, p01, p10, p11].
pub fn cross(p: [f64; 4]) -> f64 {
    p[0] * p[3] / (p[1] * p[2])
}

pub fn parallel(p: [f64; 4]) -> f64 {
    p[0] * p[2] / (p[1] * p[3])
}

pub fn equal(p: [f64; 4]) -> f64 {
    p[0] * p[1] / (p[2] * p[3])
}

/// The 2×2 block of `q` (row-major 2×3) left after deleting column `c`.
pub fn block(q: [f64; 6], c: usize) -> [f64; 4] {
    let (i, j) = match c {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    [q[i], q[j], q[3 + i], q[3 + j]]
}

/// Relative defects of the five product identities among 2×3 ratios.
pub fn identity_defects(q: [f64; 6]) -> [f64; 5] {
    let x = |c| cross(block(q, c));
    let p = |c| parallel(block(q, c));
    let e = |c| equal(block(q, c));
    [
        rel(p(0) * p(2), p(1)),
        rel(x(0) * x(2), x(1)),
        rel(x(0), e(2) / e(1)),
        rel(x(1), e(2) / e(0)),
        rel(x(2), e(1) / e(0)),
    ]
}

pub fn xp_chart_oracle(alpha: f64, beta: f64, v: f64) -> [f64; 4] {
    let w = 1.0 - (alpha + beta) * v;
    let k = alpha * beta + 1.0;
    [alpha * beta * w / k, w / k, beta * v, alpha * v]
}

pub fn pe_chart_oracle(beta: f64, gamma: f64, v: f64) -> [f64; 4] {
    let w = 1.0 - (beta + gamma) * v;
    let k = beta * gamma + 1.0;
    [beta * gamma * w / k, gamma * v, beta * v, w / k]
}

/// Bisection for the parameter where the `(alpha, beta)` chart reaches `r_equal`,
/// using only directly computed ratios.
pub fn bisect_xp(alpha: f64, beta: f64, r_equal: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0 / (alpha + beta));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        // r_equal decreases along the chart
        if equal(xp_chart_oracle(alpha, beta, mid)) > r_equal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
