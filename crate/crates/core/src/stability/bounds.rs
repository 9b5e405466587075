//! Closed-form perturbation bounds on the sup distance between two surfaces.
//!
//! All bounds take the scalar triple shared by every cell and use its
//! magnitudes. The strict `bound_*` functions reject inputs that perturb more
//! than the one quantity they cover; [`BoundTerms`] evaluates every term
//! without that restriction.

use crate::dataset::GeneralizedDataset;
use crate::error::{Error, Result};
use crate::params::{IfsParameters, StabilityConfig};
use crate::stability::rescale::build_rescale;

fn uniform_magnitudes(params: &IfsParameters) -> Result<(f64, f64, f64)> {
    let (a, b, g) = params.uniform_triple().ok_or(Error::NonUniformParameters)?;
    Ok((libm::fabs(a), libm::fabs(b), libm::fabs(g)))
}

fn same_shape(base: &GeneralizedDataset, pert: &GeneralizedDataset) -> Result<()> {
    if base.same_shape(pert) {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            what: "perturbed dataset",
            expected: base.z().as_slice().len(),
            found: pert.z().as_slice().len(),
        })
    }
}

/// `max_{n,m} (|x_n - x*_n| + |y_m - y*_m|)`, which is the largest Manhattan
/// displacement of a node.
pub fn max_node_displacement(base: &GeneralizedDataset, pert: &GeneralizedDataset) -> f64 {
    let max_diff = |a: &[f64], b: &[f64]| a.iter().zip(b).fold(0.0f64, |acc, (u, v)| acc.max(libm::fabs(u - v)));
    max_diff(base.x(), pert.x()) + max_diff(base.y(), pert.y())
}

fn coefficient_xy(a: f64, b: f64, g: f64) -> f64 {
    2.0 * b * g / ((1.0 - a) * (1.0 - g)) + (1.0 + a) / (1.0 - a)
}

fn coefficient_z(a: f64) -> f64 {
    4.0 * (1.0 + a) / (1.0 - a)
}

fn coefficient_t(a: f64, b: f64, g: f64) -> f64 {
    8.0 * b / ((1.0 - a) * (1.0 - g))
}

fn coefficient_t_hidden(g: f64) -> f64 {
    4.0 * (1.0 + g) / (1.0 - g)
}

/// Every bound term for a pair of datasets, plus the perturbation sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTerms {
    pub max_xy_manhattan: f64,
    pub max_dz: f64,
    pub max_dt: f64,
    /// Term for the independent variables, `||F1 - G1||` with z, t fixed.
    pub xy: f64,
    /// Term for the dependent variable.
    pub z: f64,
    /// Term for the hidden variable acting on `F1`.
    pub t: f64,
    /// Bound on `||F2 - G2||` when only t moves.
    pub t_hidden_surface: f64,
}

impl BoundTerms {
    /// Evaluates all terms. Needs a uniform parameter triple and ratio
    /// compatible axes.
    pub fn compute(
        base: &GeneralizedDataset,
        pert: &GeneralizedDataset,
        params: &IfsParameters,
        cfg: &StabilityConfig,
    ) -> Result<Self> {
        same_shape(base, pert)?;
        let (a, b, g) = uniform_magnitudes(params)?;
        build_rescale(base, pert)?;
        let max_xy_manhattan = max_node_displacement(base, pert);
        let max_dz = base.z().max_abs_diff(pert.z()).expect("same shape");
        let max_dt = base.t().max_abs_diff(pert.t()).expect("same shape");
        let xy = if max_xy_manhattan == 0.0 {
            0.0
        } else {
            cfg.m_bar() * coefficient_xy(a, b, g) * libm::pow(max_xy_manhattan, cfg.delta())
        };
        Ok(BoundTerms {
            max_xy_manhattan,
            max_dz,
            max_dt,
            xy,
            z: coefficient_z(a) * max_dz,
            t: coefficient_t(a, b, g) * max_dt,
            t_hidden_surface: coefficient_t_hidden(g) * max_dt,
        })
    }

    /// The dataset metric `d`: sum of the t, z and xy terms.
    pub fn metric(&self) -> f64 {
        self.t + self.z + self.xy
    }
}

fn require_equal(base: &GeneralizedDataset, pert: &GeneralizedDataset, axes: bool, z: bool, t: bool) -> Result<()> {
    same_shape(base, pert)?;
    if axes && !base.same_axes(pert) {
        return Err(Error::AxesDiffer);
    }
    if z && base.z() != pert.z() {
        return Err(Error::ValuesDiffer { which: "z" });
    }
    if t && base.t() != pert.t() {
        return Err(Error::ValuesDiffer { which: "t" });
    }
    Ok(())
}

/// Bound for a perturbation of the independent variables only:
/// `M [2 b g / ((1-a)(1-g)) + (1+a)/(1-a)] max(|dx| + |dy|)^delta`.
pub fn bound_independent(
    base: &GeneralizedDataset,
    pert: &GeneralizedDataset,
    params: &IfsParameters,
    cfg: &StabilityConfig,
) -> Result<f64> {
    require_equal(base, pert, false, true, true)?;
    Ok(BoundTerms::compute(base, pert, params, cfg)?.xy)
}

/// Bound for a perturbation of z only: `4 (1+a)/(1-a) max|dz|`.
pub fn bound_dependent(base: &GeneralizedDataset, pert: &GeneralizedDataset, params: &IfsParameters) -> Result<f64> {
    require_equal(base, pert, true, false, true)?;
    Ok(BoundTerms::compute(base, pert, params, &StabilityConfig::default())?.z)
}

/// Bound on `||F2 - G2||` for a perturbation of t only: `4 (1+g)/(1-g) max|dt|`.
pub fn bound_hidden_surface(
    base: &GeneralizedDataset,
    pert: &GeneralizedDataset,
    params: &IfsParameters,
) -> Result<f64> {
    require_equal(base, pert, true, true, false)?;
    Ok(BoundTerms::compute(base, pert, params, &StabilityConfig::default())?.t_hidden_surface)
}

/// Bound on `||F1 - G1||` for a perturbation of t only: `8 b / ((1-a)(1-g)) max|dt|`.
pub fn bound_hidden(base: &GeneralizedDataset, pert: &GeneralizedDataset, params: &IfsParameters) -> Result<f64> {
    require_equal(base, pert, true, true, false)?;
    Ok(BoundTerms::compute(base, pert, params, &StabilityConfig::default())?.t)
}

/// The dataset metric `d(base, pert)`, which bounds `||F1 - G1||` when every
/// variable is perturbed at once.
pub fn perturbation_metric(
    base: &GeneralizedDataset,
    pert: &GeneralizedDataset,
    params: &IfsParameters,
    cfg: &StabilityConfig,
) -> Result<f64> {
    Ok(BoundTerms::compute(base, pert, params, cfg)?.metric())
}
