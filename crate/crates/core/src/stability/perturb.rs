//! Seeded perturbations of a dataset that keep the ratio condition.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::GeneralizedDataset;
use crate::error::{Error, Result};

/// Which part of the dataset to perturb.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbKind {
    X,
    Y,
    Z,
    T,
    All,
}

/// Moves both ends of `axis` inward by independent amounts in
/// `[0, magnitude]` and maps the interior nodes affinely, so every node moves
/// by at most `magnitude`.
fn shrink_axis(axis: &[f64], magnitude: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let (a, b) = (axis[0], axis[axis.len() - 1]);
    let lo = a + rng.random_range(0.0..=magnitude);
    let hi = b - rng.random_range(0.0..=magnitude);
    let scale = (hi - lo) / (b - a);
    let last = axis.len() - 1;
    axis.iter()
        .enumerate()
        .map(|(i, &u)| match i {
            0 => lo,
            _ if i == last => hi,
            _ => lo + scale * (u - a),
        })
        .collect()
}

fn jitter(values: &[f64], magnitude: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    values.iter().map(|&v| v + rng.random_range(-magnitude..=magnitude)).collect()
}

/// Returns a perturbed copy of `base`.
///
/// z and t receive independent uniform noise in `[-magnitude, magnitude]` per
/// node. An axis is replaced by an affine image of itself whose end points
/// move inward by at most `magnitude`, which keeps the ratio condition and
/// keeps the perturbed domain inside the original one.
pub fn generate_perturbation(
    base: &GeneralizedDataset,
    kind: PerturbKind,
    magnitude: f64,
    rng_seed: u64,
) -> Result<GeneralizedDataset> {
    if !(magnitude > 0.0 && magnitude.is_finite()) {
        return Err(Error::InvalidArgument("magnitude must be positive and finite"));
    }
    let moves_x = matches!(kind, PerturbKind::X | PerturbKind::All);
    let moves_y = matches!(kind, PerturbKind::Y | PerturbKind::All);
    let span = |axis: &[f64]| axis[axis.len() - 1] - axis[0];
    let mut limit = f64::INFINITY;
    if moves_x {
        limit = limit.min(span(base.x()) / 2.0);
    }
    if moves_y {
        limit = limit.min(span(base.y()) / 2.0);
    }
    if magnitude >= limit {
        return Err(Error::MagnitudeTooLarge { magnitude, limit });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let x = if moves_x { shrink_axis(base.x(), magnitude, &mut rng) } else { base.x().to_vec() };
    let y = if moves_y { shrink_axis(base.y(), magnitude, &mut rng) } else { base.y().to_vec() };
    let z = match kind {
        PerturbKind::Z | PerturbKind::All => jitter(base.z().as_slice(), magnitude, &mut rng),
        _ => base.z().as_slice().to_vec(),
    };
    let t = match kind {
        PerturbKind::T | PerturbKind::All => jitter(base.t().as_slice(), magnitude, &mut rng),
        _ => base.t().as_slice().to_vec(),
    };
    GeneralizedDataset::new(x, y, z, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::bounds::max_node_displacement;
    use crate::stability::rescale::{build_rescale, check_ratio_invariance, DEFAULT_RATIO_TOL};
    use crate::testdata::table1;

    #[test]
    fn z_noise_respects_magnitude() {
        let base = table1();
        let p = generate_perturbation(&base, PerturbKind::Z, 0.1, 3).unwrap();
        assert!(p.same_axes(&base));
        assert_eq!(p.t(), base.t());
        assert!(p.z().max_abs_diff(base.z()).unwrap() <= 0.1);
        assert!(p.z() != base.z());
    }

    #[test]
    fn axis_perturbations_keep_the_ratio_condition() {
        let base = table1();
        for seed in 0..1000 {
            for kind in [PerturbKind::X, PerturbKind::Y, PerturbKind::All] {
                let p = generate_perturbation(&base, kind, 0.3, seed).unwrap();
                assert!(check_ratio_invariance(&base, &p, DEFAULT_RATIO_TOL).unwrap().holds());
                assert!(build_rescale(&base, &p).unwrap().target_within_source());
                let dx = base.x().iter().zip(p.x()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                assert!(dx <= 0.3);
            }
        }
        let p = generate_perturbation(&base, PerturbKind::X, 0.3, 9).unwrap();
        assert_eq!(p.y(), base.y());
        assert!(max_node_displacement(&base, &p) <= 0.3);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let base = table1();
        for kind in [PerturbKind::X, PerturbKind::Y, PerturbKind::Z, PerturbKind::T, PerturbKind::All] {
            let a = generate_perturbation(&base, kind, 0.05, 42).unwrap();
            let b = generate_perturbation(&base, kind, 0.05, 42).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn oversized_axis_perturbation_is_rejected() {
        assert!(matches!(
            generate_perturbation(&table1(), PerturbKind::X, 1.0, 0),
            Err(Error::MagnitudeTooLarge { .. })
        ));
        assert!(generate_perturbation(&table1(), PerturbKind::Z, 5.0, 0).is_ok());
        assert!(matches!(generate_perturbation(&table1(), PerturbKind::Z, 0.0, 0), Err(Error::InvalidArgument(_))));
    }
}
