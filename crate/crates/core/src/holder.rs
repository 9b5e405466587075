//! Empirical Hölder exponent of `F1` from a sampled grid.
//!
//! Pairs of grid points are drawn at dyadic separations, averaged per
//! separation level, and the log of the mean `|F1(X) - F1(X')|` is regressed
//! on the log of the mean `d_M(X, X')`. The slope estimates the exponent and
//! `exp(intercept)` the prefactor. This is a
//! diagnostic: nothing downstream depends on it.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::{manhattan_distance, Point2};
use crate::surface::SurfaceGrid;

pub const MIN_DEPTH: u32 = 3;
pub const MIN_PAIRS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderEstimate {
    /// Fitted exponent, clamped to `(0, 1]`.
    pub exponent: f64,
    pub prefactor: f64,
    /// Points that entered the fit after dropping zero distances or differences.
    pub used_pairs: usize,
}

/// Least-squares fit of `log dv` against `log d` over `(d, dv)` pairs.
///
/// Pairs with `d == 0` or `dv == 0` carry no information about the exponent
/// and are skipped. Returns `None` when fewer than two distinct distances
/// remain.
pub fn holder_fit(pairs: &[(f64, f64)]) -> Option<HolderEstimate> {
    let logs: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(d, dv)| *d > 0.0 && *dv != 0.0 && d.is_finite() && dv.is_finite())
        .map(|&(d, dv)| (libm::log(d), libm::log(libm::fabs(dv))))
        .collect();
    let n = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Some(HolderEstimate {
        exponent: slope.clamp(f64::EPSILON, 1.0),
        prefactor: libm::exp(intercept),
        used_pairs: logs.len(),
    })
}

/// Estimates the Hölder exponent of `F1` from `sample_pairs` seeded random
/// pairs of grid points.
pub fn estimate_holder(grid: &SurfaceGrid, sample_pairs: usize, rng_seed: u64) -> Result<HolderEstimate> {
    if grid.depth < MIN_DEPTH {
        return Err(Error::InsufficientSamples { needed: MIN_DEPTH as usize, found: grid.depth as usize });
    }
    if sample_pairs < MIN_PAIRS {
        return Err(Error::InsufficientSamples { needed: MIN_PAIRS, found: sample_pairs });
    }
    let (nx, ny) = (grid.xs.len(), grid.ys.len());
    // Axis-aligned pairs at dyadic separations up to a sixteenth of the
    // shorter axis. Along an axis a piecewise-bilinear surface is piecewise
    // linear, so the smooth limit fits a slope of one at every level.
    let widest = ((nx.min(ny) - 1) / 16).max(2);
    let levels = usize::BITS - widest.leading_zeros();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    // Every base point is paired at every level, so the per-level means
    // share their positions and differ only through the separation.
    let mut sums = alloc::vec![(0.0f64, 0.0f64, 0usize); levels as usize];
    let bases = sample_pairs.div_ceil(levels as usize);
    let reach = 1usize << (levels - 1);
    if nx.min(ny) <= reach {
        return Err(Error::InsufficientSamples { needed: reach + 1, found: nx.min(ny) });
    }
    for _ in 0..bases {
        let along_x = rng.random_bool(0.5);
        let (i, j) = if along_x {
            (rng.random_range(0..nx - reach), rng.random_range(0..ny))
        } else {
            (rng.random_range(0..nx), rng.random_range(0..ny - reach))
        };
        for (level, s) in sums.iter_mut().enumerate() {
            let step = 1usize << level;
            let (i2, j2) = if along_x { (i + step, j) } else { (i, j + step) };
            let a = Point2::new(grid.xs[i], grid.ys[j]);
            let b = Point2::new(grid.xs[i2], grid.ys[j2]);
            s.0 += manhattan_distance(a, b);
            s.1 += libm::fabs(grid.f1[(i2, j2)] - grid.f1[(i, j)]);
            s.2 += 1;
        }
    }
    let pairs: Vec<(f64, f64)> = sums
        .iter()
        .map(|&(d, dv, c)| (d / c as f64, dv / c as f64))
        .collect();
    holder_fit(&pairs).ok_or(Error::InsufficientSamples { needed: 2, found: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::IfsModel;
    use crate::params::IfsParameters;
    use crate::surface::solve_surface;
    use crate::testdata::{table1, table1_model};

    #[test]
    fn smooth_limit_is_lipschitz() {
        let model = IfsModel::build(table1(), IfsParameters::uniform(0.0, 0.0, 0.0, 2, 2).unwrap()).unwrap();
        for depth in [5, 6, 8] {
            let grid = solve_surface(&model, depth).unwrap();
            for seed in 0..32 {
                let h = estimate_holder(&grid, 2000, seed).unwrap();
                assert!((h.exponent - 1.0).abs() <= 0.05, "depth {depth} seed {seed}: {h:?}");
            }
        }
    }

    #[test]
    fn fractal_surface_is_reproducible() {
        let grid = solve_surface(&table1_model(), 6).unwrap();
        let a = estimate_holder(&grid, 2000, 5).unwrap();
        let b = estimate_holder(&grid, 2000, 5).unwrap();
        assert!(a.exponent > 0.0 && a.exponent <= 1.0);
        assert_eq!(a.exponent.to_bits(), b.exponent.to_bits());
        assert_eq!(a.prefactor.to_bits(), b.prefactor.to_bits());
    }

    #[test]
    fn identical_pairs_do_not_change_the_fit() {
        let pairs = [(0.1, 0.05), (0.2, 0.11), (0.4, 0.19), (0.8, 0.42)];
        let mut padded = pairs.to_vec();
        padded.extend([(0.0, 0.0); 10]);
        padded.push((0.3, 0.0));
        assert_eq!(holder_fit(&pairs), holder_fit(&padded));
    }

    #[test]
    fn exact_power_law_is_recovered() {
        let pairs: Vec<(f64, f64)> = (1..40).map(|k| {
            let d = k as f64 / 40.0;
            (d, 3.0 * libm::pow(d, 0.6))
        }).collect();
        let h = holder_fit(&pairs).unwrap();
        assert!((h.exponent - 0.6).abs() < 1e-12);
        assert!((h.prefactor - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_shallow_grids_and_small_samples() {
        let model = table1_model();
        let shallow = solve_surface(&model, 2).unwrap();
        assert!(matches!(estimate_holder(&shallow, 500, 1), Err(Error::InsufficientSamples { .. })));
        let deep = solve_surface(&model, 3).unwrap();
        assert!(matches!(estimate_holder(&deep, 99, 1), Err(Error::InsufficientSamples { .. })));
        let thin = crate::dataset::validate_dataset(
            alloc::vec![0.0, 1.0],
            alloc::vec![0.0, 1.0, 2.0],
            alloc::vec![0.0; 6],
            alloc::vec![0.0; 6],
        )
        .unwrap();
        let thin = IfsModel::build(thin, IfsParameters::uniform(0.2, 0.1, 0.2, 1, 2).unwrap()).unwrap();
        let grid = solve_surface(&thin, 4).unwrap();
        assert!(matches!(estimate_holder(&grid, 500, 1), Err(Error::InsufficientSamples { .. })));
    }
}
