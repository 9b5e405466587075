//! Coalescence hidden-variable fractal interpolation surfaces (CHFIS).
//!
//! Given generalized interpolation data `(x_i, y_j, z_ij, t_ij)` on a
//! rectangular grid, this crate builds the non-diagonal affine IFS whose
//! attractor is the graph of `F = (F1, F2)`, evaluates that surface exactly on
//! address grids, and computes the closed-form perturbation bounds that relate
//! the distance between two datasets to the distance between their surfaces.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, exporters and
//! the command-line front end live in the companion `chfis` crate.
//!
//! Module map:
//!
//! * [`dataset`], [`params`], [`metric`]: shared vocabulary and validation.
//! * [`maps`], [`coeffs`], [`model`]: the IFS itself.
//! * [`surface`], [`sweep`], [`point`], [`holder`]: evaluation and diagnostics.
//! * [`stability`]: rescaling, the perturbation bounds and their empirical check.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod coeffs;
pub mod dataset;
mod error;
pub mod holder;
pub mod maps;
pub mod matrix;
pub mod metric;
pub mod model;
pub mod params;
pub mod point;
pub mod stability;
pub mod surface;
pub mod sweep;

#[cfg(test)]
pub(crate) mod testdata;

pub use coeffs::CellCoefficients;
pub use dataset::{validate_dataset, GeneralizedDataset};
pub use error::{Axis, Constraint, Error, Result};
pub use matrix::Matrix;
pub use metric::{manhattan_distance, Point2};
pub use model::{Cell, IfsModel};
pub use params::{validate_parameters, IfsParameters, ParamValue, ParameterInput, StabilityConfig};
pub use point::{eval_point, PointEstimate};
pub use surface::{solve_surface, SurfaceGrid};
