use nalgebra::DMatrix;
use serde::Serialize;

use super::system::{Point, PolySystem, N_VARS};

/// Default relative cut-off for counting a singular value toward the rank.
pub const DEFAULT_SVD_THRESHOLD: f64 = 1e-8;

/// Minimum ratio between the last retained and first dropped singular value
/// for the rank decision to count as clean.
pub const MIN_GAP_RATIO: f64 = 10.0;

/// Singular-value rank decision for a matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEstimate {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `sigma[rank-1] / sigma[rank]`, infinite when nothing was dropped.
    pub gap_ratio: f64,
}

pub fn numerical_rank(m: &DMatrix<f64>, threshold: f64) -> RankEstimate {
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let smax = sv.first().copied().unwrap_or(0.0);
    let rank = if smax > 0.0 {
        sv.iter().filter(|&&s| s > threshold * smax).count()
    } else {
        0
    };
    // directions beyond min(rows, cols) have singular value zero
    let dropped = sv.get(rank).copied().unwrap_or(0.0);
    let gap_ratio = match rank {
        0 => 0.0,
        r => sv[r - 1] / dropped,
    };
    RankEstimate {
        rank,
        singular_values: sv,
        gap_ratio,
    }
}

/// Local dimension of the locus at a point: `6 - rank(J)`, slices excluded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalDimension {
    pub dim: usize,
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub gap_ratio: f64,
    /// Set when the spectrum has no clear gap; the point may be singular on the locus.
    pub on_singular_locus: bool,
}

pub fn local_dimension(sys: &PolySystem, x: &Point, svd_threshold: f64) -> LocalDimension {
    let j = sys.without_slices().jacobian(x);
    let est = numerical_rank(&j, svd_threshold);
    LocalDimension {
        dim: N_VARS - est.rank,
        rank: est.rank,
        on_singular_locus: est.gap_ratio.is_nan() || est.gap_ratio < MIN_GAP_RATIO,
        singular_values: est.singular_values,
        gap_ratio: est.gap_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::Constraint;
    use crate::tables::RatioKind::Cross;

    #[test]
    fn affine_only_is_five() {
        let sys = PolySystem::from_constraints(&[]).unwrap();
        let d = local_dimension(&sys, &[0.1, 0.2, 0.3, 0.1, 0.2, 0.1], DEFAULT_SVD_THRESHOLD);
        assert_eq!(d.dim, 5);
        assert!(d.gap_ratio.is_infinite());
        assert!(!d.on_singular_locus);
    }

    #[test]
    fn rank_one_point_of_unit_crosses() {
        // rank-one matrix with rows (1, 2, 3) and 2 (1, 2, 3), scaled to sum 1
        let x = [1.0, 2.0, 3.0, 2.0, 4.0, 6.0].map(|v| v / 18.0);
        let sys = PolySystem::from_constraints(&[
            Constraint::new(Cross, 1, 1.0),
            Constraint::new(Cross, 2, 1.0),
        ])
        .unwrap();
        assert!(sys.residual(&x) < 1e-15);
        let d = local_dimension(&sys, &x, DEFAULT_SVD_THRESHOLD);
        assert_eq!(d.dim, 3);
        assert!(!d.on_singular_locus);
    }

    #[test]
    fn slices_are_ignored() {
        use crate::locus::system::AffineSlice;
        let sys = PolySystem::from_constraints(&[]).unwrap().with_slices(vec![AffineSlice {
            coeffs: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            offset: 0.5,
        }]);
        assert_eq!(local_dimension(&sys, &[0.5, 0.1, 0.1, 0.1, 0.1, 0.1], 1e-8).dim, 5);
    }

    #[test]
    fn rank_of_zero_matrix() {
        let est = numerical_rank(&DMatrix::zeros(3, 3), 1e-8);
        assert_eq!(est.rank, 0);
    }
}
