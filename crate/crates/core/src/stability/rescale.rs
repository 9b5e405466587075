//! The rescaling map `R: S -> S*`, its inverse `K`, and the invariance of
//! ratio condition under which `R` conjugates the two IFS.

use alloc::vec::Vec;

use crate::dataset::GeneralizedDataset;
use crate::error::{Axis, Error, Result};
use crate::maps::{lower_cell, IntervalMap};

pub const DEFAULT_RATIO_TOL: f64 = 1e-9;

/// Per-cell residuals of the ratio condition on each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCheck {
    /// `(x_0 - x_N)/(x*_0 - x*_N) - (x_{n-1} - x_n)/(x*_{n-1} - x*_n)` for each cell `n`.
    pub x_residuals: Vec<f64>,
    pub y_residuals: Vec<f64>,
    pub tol: f64,
}

impl RatioCheck {
    pub fn holds(&self) -> bool {
        self.first_violation().is_none()
    }

    /// First offending `(axis, zero-based cell, residual)`, if any.
    pub fn first_violation(&self) -> Option<(Axis, usize, f64)> {
        let over = |r: &f64| !(libm::fabs(*r) <= self.tol);
        if let Some(n) = self.x_residuals.iter().position(over) {
            return Some((Axis::X, n, self.x_residuals[n]));
        }
        self.y_residuals.iter().position(over).map(|m| (Axis::Y, m, self.y_residuals[m]))
    }
}

fn ratio_residuals(a: &[f64], b: &[f64]) -> Vec<f64> {
    let last = a.len() - 1;
    let global = (a[0] - a[last]) / (b[0] - b[last]);
    a.windows(2).zip(b.windows(2)).map(|(u, v)| global - (u[0] - u[1]) / (v[0] - v[1])).collect()
}

/// Checks the invariance of ratio condition between the axes of `base` and
/// `pert`. It holds exactly when each perturbed axis is an affine image of
/// the original one.
pub fn check_ratio_invariance(base: &GeneralizedDataset, pert: &GeneralizedDataset, tol: f64) -> Result<RatioCheck> {
    if base.x().len() != pert.x().len() {
        return Err(Error::ShapeMismatch { what: "x axis", expected: base.x().len(), found: pert.x().len() });
    }
    if base.y().len() != pert.y().len() {
        return Err(Error::ShapeMismatch { what: "y axis", expected: base.y().len(), found: pert.y().len() });
    }
    Ok(RatioCheck {
        x_residuals: ratio_residuals(base.x(), pert.x()),
        y_residuals: ratio_residuals(base.y(), pert.y()),
        tol,
    })
}

/// `R` maps each cell `S_{n,m}` affinely onto `S*_{n,m}`; `K` is its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaleMap {
    base_x: Vec<f64>,
    base_y: Vec<f64>,
    pert_x: Vec<f64>,
    pert_y: Vec<f64>,
    rx: Vec<IntervalMap>,
    ry: Vec<IntervalMap>,
}

fn cell_maps(a: &[f64], b: &[f64]) -> Vec<IntervalMap> {
    a.windows(2).zip(b.windows(2)).map(|(u, v)| IntervalMap::new((u[0], u[1]), (v[0], v[1]))).collect()
}

impl RescaleMap {
    /// Builds `R` without checking the ratio condition. Axes must have the
    /// same number of nodes.
    pub fn piecewise(base: &GeneralizedDataset, pert: &GeneralizedDataset) -> Result<Self> {
        check_ratio_invariance(base, pert, f64::INFINITY)?;
        Ok(RescaleMap {
            base_x: base.x().to_vec(),
            base_y: base.y().to_vec(),
            pert_x: pert.x().to_vec(),
            pert_y: pert.y().to_vec(),
            rx: cell_maps(base.x(), pert.x()),
            ry: cell_maps(base.y(), pert.y()),
        })
    }

    /// Identity on the domain of `data`.
    pub fn identity(data: &GeneralizedDataset) -> Self {
        Self::piecewise(data, data).expect("a dataset has its own shape")
    }

    /// `R(x, y)`.
    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.rx[lower_cell(&self.base_x, x)].apply(x),
            self.ry[lower_cell(&self.base_y, y)].apply(y),
        )
    }

    /// `K(x*, y*)`.
    pub fn invert(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.rx[lower_cell(&self.pert_x, x)].invert(x),
            self.ry[lower_cell(&self.pert_y, y)].invert(y),
        )
    }

    /// The x-part of `R_{n,m}` for zero-based cell `n`.
    pub fn x_piece(&self, n: usize) -> &IntervalMap {
        &self.rx[n]
    }

    pub fn y_piece(&self, m: usize) -> &IntervalMap {
        &self.ry[m]
    }

    /// True when `S*` lies inside `S`.
    pub fn target_within_source(&self) -> bool {
        let inside = |a: &[f64], b: &[f64]| a[0] <= b[0] && b[b.len() - 1] <= a[a.len() - 1];
        inside(&self.base_x, &self.pert_x) && inside(&self.base_y, &self.pert_y)
    }
}

/// Builds `R` after checking the ratio condition at [`DEFAULT_RATIO_TOL`].
///
/// The bound for perturbed axes also assumes `S*` inside `S`; when that fails
/// a warning is logged and the map is still returned.
pub fn build_rescale(base: &GeneralizedDataset, pert: &GeneralizedDataset) -> Result<RescaleMap> {
    let check = check_ratio_invariance(base, pert, DEFAULT_RATIO_TOL)?;
    if let Some((axis, cell, residual)) = check.first_violation() {
        return Err(Error::RatioConditionViolated { axis, cell: cell + 1, residual });
    }
    let map = RescaleMap::piecewise(base, pert)?;
    if !map.target_within_source() {
        log::warn!("perturbed domain is not contained in the original domain");
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::DomainMaps;
    use crate::testdata::{case_ia, case_ib, table1};
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn published_axis_perturbations_satisfy_the_ratio_condition() {
        let c = check_ratio_invariance(&table1(), &case_ib(), DEFAULT_RATIO_TOL).unwrap();
        assert!(c.holds());
        assert!(check_ratio_invariance(&table1(), &case_ia(), DEFAULT_RATIO_TOL).unwrap().holds());
        assert!(check_ratio_invariance(&table1(), &table1(), DEFAULT_RATIO_TOL).unwrap().holds());
    }

    #[test]
    fn non_affine_axis_is_rejected() {
        let bad = table1().with_axes(vec![0.1, 1.0, 1.95], vec![0.0, 1.0, 2.0]).unwrap();
        let c = check_ratio_invariance(&table1(), &bad, DEFAULT_RATIO_TOL).unwrap();
        assert!(!c.holds());
        // 2/1.85 against 1/0.9 and 1/0.95.
        assert!((c.x_residuals[0] - (2.0 / 1.85 - 1.0 / 0.9)).abs() < 1e-15);
        assert!(matches!(
            build_rescale(&table1(), &bad),
            Err(Error::RatioConditionViolated { axis: Axis::X, cell: 1, .. })
        ));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let wide = GeneralizedDataset::new(vec![0.0, 1.0], vec![0.0, 1.0, 2.0], vec![0.0; 6], vec![0.0; 6]).unwrap();
        assert!(matches!(
            check_ratio_invariance(&table1(), &wide, DEFAULT_RATIO_TOL),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn r_sends_nodes_to_nodes() {
        let r = build_rescale(&table1(), &case_ib()).unwrap();
        assert_eq!(r.apply(0.0, 0.0), (0.1, 0.1));
        assert_eq!(r.apply(1.0, 1.0), (1.0, 1.0));
        assert_eq!(r.apply(2.0, 0.0), (1.9, 0.1));
        let (x, y) = r.invert(r.apply(0.37, 1.62).0, r.apply(0.37, 1.62).1);
        assert!((x - 0.37).abs() < 1e-12 && (y - 1.62).abs() < 1e-12);
    }

    #[test]
    fn conjugates_the_domain_maps() {
        // xi*_{n,m} = R o xi_{n,m} o K at sampled points.
        let (base, pert) = (table1(), case_ib());
        let r = build_rescale(&base, &pert).unwrap();
        let maps = DomainMaps::new(base.x(), base.y());
        let star = DomainMaps::new(pert.x(), pert.y());
        for n in 0..2 {
            for m in 0..2 {
                for k in 0..=20 {
                    let (xs, ys) = (0.1 + 1.8 * k as f64 / 20.0, 1.9 - 1.8 * k as f64 / 20.0);
                    let (u, v) = r.invert(xs, ys);
                    let lhs = r.apply(maps.phi(n).apply(u), maps.psi(m).apply(v));
                    let rhs = (star.phi(n).apply(xs), star.psi(m).apply(ys));
                    assert!((lhs.0 - rhs.0).abs() <= 1e-12 && (lhs.1 - rhs.1).abs() <= 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn k_inverts_r(x in 0.0f64..=2.0, y in 0.0f64..=2.0, shift in 0.0f64..0.4, stretch in 0.5f64..1.5) {
            let ax: Vec<f64> = table1().x().iter().map(|&u| shift + stretch * u).collect();
            let pert = table1().with_axes(ax.clone(), ax).unwrap();
            let r = build_rescale(&table1(), &pert).unwrap();
            let (px, py) = r.apply(x, y);
            let (bx, by) = r.invert(px, py);
            prop_assert!((bx - x).abs() <= 1e-12 && (by - y).abs() <= 1e-12);
        }
    }
}
