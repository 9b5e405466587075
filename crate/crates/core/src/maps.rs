//! Affine interval maps: the domain contractions `phi_n`, `psi_m` and the
//! per-cell pieces of the rescaling map.

use alloc::vec::Vec;

/// Increasing affine bijection from `[src.0, src.1]` onto `[dst.0, dst.1]`.
///
/// Both endpoints map exactly, in both directions; interior points go through
/// `dst.0 + scale * (u - src.0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMap {
    src: (f64, f64),
    dst: (f64, f64),
    scale: f64,
}

impl IntervalMap {
    /// Requires `src.0 < src.1` and `dst.0 < dst.1`.
    pub fn new(src: (f64, f64), dst: (f64, f64)) -> Self {
        debug_assert!(src.0 < src.1 && dst.0 < dst.1);
        IntervalMap {
            src,
            dst,
            scale: (dst.1 - dst.0) / (src.1 - src.0),
        }
    }

    pub fn source(&self) -> (f64, f64) {
        self.src
    }

    pub fn target(&self) -> (f64, f64) {
        self.dst
    }

    /// Slope of the map.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Intercept `b` of `u -> scale * u + b`.
    pub fn offset(&self) -> f64 {
        self.dst.0 - self.scale * self.src.0
    }

    pub fn apply(&self, u: f64) -> f64 {
        if u == self.src.1 {
            self.dst.1
        } else {
            self.dst.0 + self.scale * (u - self.src.0)
        }
    }

    pub fn invert(&self, v: f64) -> f64 {
        if v == self.dst.1 {
            self.src.1
        } else if v == self.dst.0 {
            self.src.0
        } else {
            self.src.0 + (v - self.dst.0) / self.scale
        }
    }

    /// The inverse map.
    pub fn inverse(&self) -> IntervalMap {
        IntervalMap::new(self.dst, self.src)
    }
}

/// Rounding slack used when deciding whether a coordinate sits on a node.
const NODE_SNAP_ULPS: f64 = 8.0;

/// Returns `u` snapped to the nearest node when it is within a few ulps of the
/// axis span.
pub(crate) fn snap_to_node(nodes: &[f64], u: f64) -> f64 {
    let span = nodes[nodes.len() - 1] - nodes[0];
    let tol = NODE_SNAP_ULPS * f64::EPSILON * span;
    let k = nodes.partition_point(|&a| a < u);
    for idx in [k.wrapping_sub(1), k] {
        if let Some(&a) = nodes.get(idx) {
            if libm::fabs(a - u) <= tol {
                return a;
            }
        }
    }
    u
}

/// Zero-based index of the cell holding `u`, with an interior node assigned to
/// the cell below it (lower index). `u` must lie in `[a_0, a_K]`.
pub(crate) fn lower_cell(nodes: &[f64], u: f64) -> usize {
    let k = nodes.partition_point(|&a| a < u);
    k.saturating_sub(1).min(nodes.len() - 2)
}

/// Zero-based cell whose half-open interval `[a_{k}, a_{k+1})` holds `u`; the
/// last node belongs to the last cell.
pub(crate) fn upper_cell(nodes: &[f64], u: f64) -> usize {
    let k = nodes.partition_point(|&a| a <= u);
    k.saturating_sub(1).min(nodes.len() - 2)
}

/// The per-axis contractions `phi_n: I -> I_n` and `psi_m: J -> J_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainMaps {
    x: Vec<IntervalMap>,
    y: Vec<IntervalMap>,
}

impl DomainMaps {
    /// Builds the maps for strictly increasing `x` and `y` node lists.
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        DomainMaps {
            x: axis_maps(x),
            y: axis_maps(y),
        }
    }

    /// `phi_n` for the zero-based cell index `n - 1`.
    pub fn phi(&self, cell: usize) -> &IntervalMap {
        &self.x[cell]
    }

    /// `psi_m` for the zero-based cell index `m - 1`.
    pub fn psi(&self, cell: usize) -> &IntervalMap {
        &self.y[cell]
    }

    pub fn phis(&self) -> &[IntervalMap] {
        &self.x
    }

    pub fn psis(&self) -> &[IntervalMap] {
        &self.y
    }
}

fn axis_maps(nodes: &[f64]) -> Vec<IntervalMap> {
    let whole = (nodes[0], nodes[nodes.len() - 1]);
    nodes
        .windows(2)
        .map(|w| IntervalMap::new(whole, (w[0], w[1])))
        .collect()
}
