//! Evaluation of the surface at an arbitrary point.
//!
//! The address of `(x, y)` is expanded by repeatedly locating the owning cell
//! and pulling the point back through `(phi_n, psi_m)`. If the pre-image lands
//! on a node the value there is known exactly and the expansion stops.
//! Otherwise, after `depth` steps the bilinear interpolant of the data stands
//! in for the surface and the functional equation is applied forward again.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::maps::{lower_cell, snap_to_node};
use crate::model::IfsModel;

/// Default number of address levels.
pub const DEFAULT_EVAL_DEPTH: u32 = 30;

/// `(F1, F2)` at a point together with a bound on the truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEstimate {
    pub f1: f64,
    pub f2: f64,
    /// Bound on `|F1 - f1|` excluding floating-point rounding.
    pub err1: f64,
    /// Bound on `|F2 - f2|` excluding floating-point rounding.
    pub err2: f64,
    /// Address levels actually expanded.
    pub levels: u32,
    /// True when the expansion reached a node, making the value exact.
    pub exact: bool,
}

/// Sup-norm distance between the surface and the bilinear interpolant `B` of
/// the data, as `(for F1, for F2)`.
///
/// `||F2 - B2|| <= ||T2 B2 - B2|| / (1 - max|gamma|)`, and `T2 B2 - B2` is
/// bilinear on every data rectangle in pre-image coordinates, so its sup is
/// attained on images of nodes. The `F1` bound adds the coupling through
/// `max |beta|`.
pub fn seed_error_bounds(model: &IfsModel) -> (f64, f64) {
    let d = model.dataset();
    let params = model.params();
    let mut r1 = 0.0f64;
    let mut r2 = 0.0f64;
    for n in 0..model.n_cells_x() {
        for m in 0..model.n_cells_y() {
            for (i, &x) in d.x().iter().enumerate() {
                for (j, &y) in d.y().iter().enumerate() {
                    let (bz, bt) = d.bilinear(model.maps().phi(n).apply(x), model.maps().psi(m).apply(y));
                    let (f1, f2) = model.apply0(n, m, x, y, d.z()[(i, j)], d.t()[(i, j)]);
                    r1 = r1.max(libm::fabs(f1 - bz));
                    r2 = r2.max(libm::fabs(f2 - bt));
                }
            }
        }
    }
    let (a, b, g) = (params.max_abs_alpha(), params.max_abs_beta(), params.max_abs_gamma());
    let e2 = r2 / (1.0 - g);
    let e1 = (r1 + b * e2) / (1.0 - a);
    (e1, e2)
}

/// Evaluates `(F1, F2)` at `(x, y)` using at most `depth` address levels.
pub fn eval_point(model: &IfsModel, x: f64, y: f64, depth: u32) -> Result<PointEstimate> {
    let data = model.dataset();
    if !(x.is_finite() && y.is_finite()) || !data.contains(x, y) {
        return Err(Error::OutOfDomain { x, y });
    }
    let (xn, yn) = (data.x(), data.y());
    let node_index = |nodes: &[f64], u: f64| nodes.binary_search_by(|a| a.total_cmp(&u)).ok();

    let mut steps: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(depth as usize);
    let (mut u, mut v) = (snap_to_node(xn, x), snap_to_node(yn, y));
    let mut base = None;
    loop {
        if let (Some(i), Some(j)) = (node_index(xn, u), node_index(yn, v)) {
            base = Some((data.z()[(i, j)], data.t()[(i, j)]));
            break;
        }
        if steps.len() == depth as usize {
            break;
        }
        let n = lower_cell(xn, u);
        let m = lower_cell(yn, v);
        let pu = snap_to_node(xn, model.maps().phi(n).invert(u));
        let pv = snap_to_node(yn, model.maps().psi(m).invert(v));
        let (n, m, pu, pv) = model.resolve0(n, m, pu, pv);
        steps.push((n, m, pu, pv));
        u = pu;
        v = pv;
    }

    let exact = base.is_some();
    let (mut f1, mut f2) = base.unwrap_or_else(|| data.bilinear(u, v));
    let (mut e1, mut e2) = if exact { (0.0, 0.0) } else { seed_error_bounds(model) };
    let params = model.params();
    let (a, b, g) = (params.max_abs_alpha(), params.max_abs_beta(), params.max_abs_gamma());
    for &(n, m, pu, pv) in steps.iter().rev() {
        let next = model.apply0(n, m, pu, pv, f1, f2);
        f1 = next.0;
        f2 = next.1;
        e1 = a * e1 + b * e2;
        e2 *= g;
    }
    Ok(PointEstimate {
        f1,
        f2,
        err1: e1,
        err2: e2,
        levels: steps.len() as u32,
        exact,
    })
}
