//! Stability of the surface under perturbation of the data.
//!
//! Two datasets on the same index grid are compared through the piecewise
//! affine rescaling `R` between their domains, four closed-form bounds on the
//! distance between their surfaces, and a direct measurement of that distance.

pub mod bounds;
pub mod perturb;
pub mod rescale;
pub mod verify;

pub use bounds::{
    bound_dependent, bound_hidden, bound_hidden_surface, bound_independent, perturbation_metric, BoundTerms,
};
pub use perturb::{generate_perturbation, PerturbKind};
pub use rescale::{build_rescale, check_ratio_invariance, RatioCheck, RescaleMap, DEFAULT_RATIO_TOL};
pub use verify::{empirical_sup_diff, verify_stability, Comparison, StabilityReport, VIOLATION_TOL};
