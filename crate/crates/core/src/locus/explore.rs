//! Seeded sampling of a fixed-ratio locus.
//!
//! The locus of an assignment is cut down to finitely many points by adding
//! as many random affine equations as its dimension, and those points are
//! found by Newton refinement from random starts in the open simplex. Slices
//! are redrawn for every batch of starts so that one unlucky slice cannot
//! hide a real branch.
//!
//! Everything is a function of the seed: each batch owns an RNG stream
//! derived from `(seed, batch index)`, starts are drawn before any Newton run,
//! and results are merged in start order whether or not the runs happen in
//! parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::dimension::{local_dimension, LocalDimension, DEFAULT_SVD_THRESHOLD};
use super::newton::{newton_refine, NewtonConfig, NewtonResult};
use super::system::{build_system, AffineSlice, Point, PolySystem, DEFAULT_ENTRY_FLOOR, N_VARS};
use crate::error::{Error, Result};
use crate::relations::RatioAssignment;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExploreConfig {
    pub n_starts: usize,
    pub seed: u64,
    /// Largest residual (slices included) accepted for a found point.
    pub residual_tol: f64,
    pub entry_floor: f64,
    /// Max-norm radius within which points are merged.
    pub cluster_radius: f64,
    /// Starts sharing one draw of slice equations.
    pub batch_size: usize,
    pub svd_threshold: f64,
    /// Upper bound on unsliced starts tried when estimating the dimension.
    pub bootstrap_starts: usize,
    pub newton: NewtonConfig,
}

impl ExploreConfig {
    pub fn new(n_starts: usize, seed: u64) -> Self {
        Self {
            n_starts,
            seed,
            residual_tol: 1e-10,
            entry_floor: DEFAULT_ENTRY_FLOOR,
            cluster_radius: 1e-6,
            batch_size: 100,
            svd_threshold: DEFAULT_SVD_THRESHOLD,
            bootstrap_starts: 200,
            newton: NewtonConfig::default(),
        }
    }
}

/// How the number of slices was chosen.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bootstrap {
    /// Start index of the first unsliced solution, if one was found.
    pub start: Option<usize>,
    /// Local dimension there, or `5 - #constraints` as a fallback.
    pub dimension: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoundPoint {
    pub start: usize,
    pub batch: usize,
    pub x: Point,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    /// Lowest-residual member.
    pub representative: Point,
    pub residual: f64,
    pub batch: usize,
    pub size: usize,
    pub local_dim: LocalDimension,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BatchSummary {
    pub index: usize,
    pub sub_seed: u64,
    pub starts: usize,
    pub converged: usize,
    /// Distinct points found on this batch's slice.
    pub clusters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusSample {
    pub seed: u64,
    pub n_starts: usize,
    pub slice_count: usize,
    pub bootstrap: Bootstrap,
    pub points: Vec<FoundPoint>,
    pub clusters: Vec<Cluster>,
    pub batches: Vec<BatchSummary>,
    /// Starts whose Newton run did not converge.
    pub failures: usize,
    /// Converged starts dropped by the residual or entry-floor filter.
    pub rejected: usize,
}

impl LocusSample {
    pub fn local_dims(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.local_dim.dim).collect()
    }

    /// Largest number of distinct points found on any single slice.
    pub fn max_clusters_per_slice(&self) -> usize {
        self.batches.iter().map(|b| b.clusters).max().unwrap_or(0)
    }
}

/// splitmix64 finalizer, used to derive independent sub-seeds.
fn mix(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const BOOTSTRAP_STREAM: u64 = u64::MAX;

/// Uniform point of the open probability simplex.
pub fn random_simplex_point<R: Rng + ?Sized>(rng: &mut R) -> Point {
    let mut x: Point = [0.0; N_VARS];
    for v in &mut x {
        let e: f64 = rng.sample(Exp1);
        *v = e;
    }
    let total: f64 = x.iter().sum();
    x.map(|v| v / total)
}

/// A slice with standard normal coefficients through a random simplex point.
pub fn random_slice<R: Rng + ?Sized>(rng: &mut R) -> AffineSlice {
    let mut coeffs: Point = [0.0; N_VARS];
    for c in &mut coeffs {
        *c = rng.sample(StandardNormal);
    }
    let center = random_simplex_point(rng);
    let offset = coeffs.iter().zip(&center).map(|(a, b)| a * b).sum();
    AffineSlice { coeffs, offset }
}

fn accept(sys: &PolySystem, r: &NewtonResult, cfg: &ExploreConfig) -> Option<f64> {
    if !r.converged() {
        return None;
    }
    let residual = sys.residual(&r.x);
    let floor_ok = r.x.iter().all(|v| v.abs() >= cfg.entry_floor);
    (residual <= cfg.residual_tol && floor_ok).then_some(residual)
}

fn max_dist(a: &Point, b: &Point) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

/// Greedy clustering in input order; returns member indices per cluster.
fn cluster_points(points: &[FoundPoint], radius: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match clusters
            .iter_mut()
            .find(|c| max_dist(&points[c[0]].x, &p.x) <= radius)
        {
            Some(c) => c.push(i),
            None => clusters.push(vec![i]),
        }
    }
    clusters
}

fn bootstrap(sys: &PolySystem, n_constraints: usize, cfg: &ExploreConfig) -> Bootstrap {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(cfg.seed, BOOTSTRAP_STREAM));
    for start in 0..cfg.bootstrap_starts.min(cfg.n_starts.max(1)) {
        let x0 = random_simplex_point(&mut rng);
        let r = newton_refine(sys, x0, &cfg.newton);
        if accept(sys, &r, cfg).is_some() {
            return Bootstrap {
                start: Some(start),
                dimension: local_dimension(sys, &r.x, cfg.svd_threshold).dim,
            };
        }
    }
    Bootstrap {
        start: None,
        dimension: 5usize.saturating_sub(n_constraints),
    }
}

pub fn explore(a: &RatioAssignment, n_starts: usize, seed: u64) -> Result<LocusSample> {
    explore_with(a, &ExploreConfig::new(n_starts, seed))
}

pub fn explore_with(a: &RatioAssignment, cfg: &ExploreConfig) -> Result<LocusSample> {
    let sys = build_system(a)?;
    let boot = bootstrap(&sys, a.len(), cfg);
    let slice_count = boot.dimension;

    let batch_size = cfg.batch_size.max(1);
    let n_batches = cfg.n_starts.div_ceil(batch_size);
    let mut points = Vec::new();
    let mut batches = Vec::with_capacity(n_batches);
    let mut failures = 0;
    let mut rejected = 0;

    for b in 0..n_batches {
        let sub_seed = mix(cfg.seed, b as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        let slices = (0..slice_count).map(|_| random_slice(&mut rng)).collect();
        let sliced = sys.with_slices(slices);
        let first = b * batch_size;
        let count = batch_size.min(cfg.n_starts - first);
        let starts: Vec<Point> = (0..count).map(|_| random_simplex_point(&mut rng)).collect();

        let results: Vec<NewtonResult> = starts
            .par_iter()
            .map(|x0| newton_refine(&sliced, *x0, &cfg.newton))
            .collect();

        let mut found = Vec::new();
        for (k, r) in results.iter().enumerate() {
            if !r.converged() {
                failures += 1;
                continue;
            }
            match accept(&sliced, r, cfg) {
                Some(residual) => found.push(FoundPoint {
                    start: first + k,
                    batch: b,
                    x: r.x,
                    residual,
                }),
                None => rejected += 1,
            }
        }
        batches.push(BatchSummary {
            index: b,
            sub_seed,
            starts: count,
            converged: found.len(),
            clusters: cluster_points(&found, cfg.cluster_radius).len(),
        });
        points.extend(found);
    }

    if points.is_empty() {
        return Err(Error::NoSolutionsFound {
            starts: cfg.n_starts,
        });
    }

    let clusters = cluster_points(&points, cfg.cluster_radius)
        .into_iter()
        .map(|members| {
            let best = members
                .iter()
                .copied()
                .min_by(|&i, &j| points[i].residual.total_cmp(&points[j].residual))
                .expect("non-empty cluster");
            let rep = &points[best];
            Cluster {
                representative: rep.x,
                residual: rep.residual,
                batch: rep.batch,
                size: members.len(),
                local_dim: local_dimension(&sys, &rep.x, cfg.svd_threshold),
            }
        })
        .collect();

    Ok(LocusSample {
        seed: cfg.seed,
        n_starts: cfg.n_starts,
        slice_count,
        bootstrap: boot,
        points,
        clusters,
        batches,
        failures,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::RatioKind::{Cross as X, Equal as E};

    #[test]
    fn sub_seeds_differ() {
        assert_ne!(mix(1, 0), mix(1, 1));
        assert_ne!(mix(1, 0), mix(2, 0));
    }

    #[test]
    fn simplex_points_are_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = random_simplex_point(&mut rng);
            assert!(x.iter().all(|&v| v > 0.0));
            assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_assignment_fills_sigma() {
        let s = explore(&RatioAssignment::empty(), 200, 3).unwrap();
        assert_eq!(s.slice_count, 5);
        assert!(s.local_dims().iter().all(|&d| d == 5));
        assert_eq!(s.clusters.len(), 2);
    }

    #[test]
    fn equal_rows_condition() {
        let a = RatioAssignment::from_triples(&[(X, 0, 1.0), (X, 1, 1.0), (E, 2, 1.0)]).unwrap();
        let s = explore(&a, 300, 11).unwrap();
        assert!(!s.clusters.is_empty());
        assert!(s.local_dims().iter().all(|&d| d == 2));
    }

    #[test]
    fn inconsistent_assignment_is_rejected() {
        let a = RatioAssignment::from_triples(&[(X, 0, 1.0), (X, 1, 1.0), (X, 2, 2.0)]).unwrap();
        assert!(matches!(explore(&a, 10, 0), Err(Error::InconsistentAssignment(_))));
    }

    #[test]
    fn clustering_merges_close_points() {
        let p = |x: f64, start| FoundPoint {
            start,
            batch: 0,
            x: [x; 6],
            residual: 0.0,
        };
        let pts = [p(0.1, 0), p(0.1 + 1e-9, 1), p(0.2, 2)];
        assert_eq!(cluster_points(&pts, 1e-6), vec![vec![0, 1], vec![2]]);
    }
}
