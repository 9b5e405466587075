//! Sweep form of the fixed-point iteration on a finite sample set.
//!
//! The operator sends a function sampled on `P = xs x ys` to
//! `T f (X) = G_{n,m}(pre(X), f(pre(X)))`, which is well defined when each
//! axis is closed under the inverse domain maps (`pre(P) ⊂ P`). The hidden
//! component is iterated first (contraction `max |gamma|`); the surface
//! component is then iterated with the hidden one frozen (contraction
//! `max |alpha|`). Starting from the bilinear interpolant, this is the
//! set-wide analogue of [`eval_point`](crate::point::eval_point).
//!
//! On an address grid every point has a finite address and the iteration
//! settles after `L + 1` sweeps. On a lattice such as `x_0 + (x_N - x_0) i / D`
//! with odd `D` over uniform nodes the addresses are periodic, so the
//! iterates keep contracting at exactly the parameter rates.
//!
//! Iterates are carried in double-double precision. The per-point affine
//! terms are plain `f64` but identical in every sweep, so successive
//! differences are resolved far below the `f64` rounding floor.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::maps::{snap_to_node, upper_cell, IntervalMap};
use crate::matrix::Matrix;
use crate::model::IfsModel;
use crate::surface::{axis_grid, SurfaceGrid};

/// Successive-iterate sup distances `||f_{k+1} - f_k||` for each stage.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepHistory {
    /// `F2` stage.
    pub hidden: Vec<f64>,
    /// `F1` stage, with `F2` frozen at its last iterate.
    pub surface: Vec<f64>,
}

impl SweepHistory {
    /// Largest ratio `d_{k+1} / d_k` over consecutive nonzero distances.
    pub fn worst_ratio(distances: &[f64]) -> Option<f64> {
        distances
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .reduce(f64::max)
    }
}

/// Output of [`sweep_solve`]. `grid.depth` is the address depth when the
/// sample set is an address grid and 0 otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: SurfaceGrid,
    pub history: SweepHistory,
}

/// Sample axes closed under the inverse domain maps.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleAxes {
    xs: Vec<f64>,
    ys: Vec<f64>,
    depth: u32,
    pre_x: Vec<(usize, usize)>,
    pre_y: Vec<(usize, usize)>,
}

impl SampleAxes {
    /// The depth-`depth` address grid.
    pub fn address_grid(model: &IfsModel, depth: u32) -> Result<Self> {
        let d = model.dataset();
        let xs = axis_grid(d.x(), model.maps().phis(), depth);
        let ys = axis_grid(d.y(), model.maps().psis(), depth);
        let mut axes = SampleAxes::new(model, xs, ys)?;
        axes.depth = depth;
        Ok(axes)
    }

    /// `x_0 + (x_N - x_0) i / denominator` on both axes, `i = 0..=denominator`.
    pub fn lattice(model: &IfsModel, denominator: usize) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidArgument("lattice denominator must be positive"));
        }
        let line = |(a, b): (f64, f64)| -> Vec<f64> {
            (0..=denominator)
                .map(|i| if i == denominator { b } else { a + (b - a) * (i as f64 / denominator as f64) })
                .collect()
        };
        let d = model.dataset();
        SampleAxes::new(model, line(d.x_range()), line(d.y_range()))
    }

    /// Arbitrary sorted axes; fails unless each is closed under pre-images.
    pub fn new(model: &IfsModel, xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let d = model.dataset();
        let pre_x = preimages(d.x(), model.maps().phis(), &xs)?;
        let pre_y = preimages(d.y(), model.maps().psis(), &ys)?;
        Ok(SampleAxes {
            xs,
            ys,
            depth: 0,
            pre_x,
            pre_y,
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }
}

/// For each sample, the zero-based cell owning it and the index of its
/// pre-image within the same sample list.
fn preimages(nodes: &[f64], maps: &[IntervalMap], samples: &[f64]) -> Result<Vec<(usize, usize)>> {
    let not_closed = Error::InvalidArgument("sample axis is not closed under the inverse domain maps");
    if samples.is_empty() || samples.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("sample axis must be strictly increasing"));
    }
    let span = nodes[nodes.len() - 1] - nodes[0];
    let tol = 1e-12 * span;
    samples
        .iter()
        .map(|&u| {
            if u < nodes[0] || u > nodes[nodes.len() - 1] {
                return Err(not_closed.clone());
            }
            let u = snap_to_node(nodes, u);
            let n = upper_cell(nodes, u);
            let pre = maps[n].invert(u);
            let k = samples.partition_point(|&s| s < pre);
            [k.wrapping_sub(1), k]
                .into_iter()
                .filter_map(|i| samples.get(i).map(|&s| (i, s)))
                .find(|&(_, s)| libm::fabs(s - pre) <= tol)
                .map(|(i, _)| (n, i))
                .ok_or(not_closed.clone())
        })
        .collect()
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn add(self, other: Dd) -> Dd {
        let (s, e) = Self::two_sum(self.hi, other.hi);
        Self::quick_two_sum(s, e + self.lo + other.lo)
    }

    fn add_f64(self, c: f64) -> Dd {
        self.add(Dd::from_f64(c))
    }

    fn scale(self, g: f64) -> Dd {
        let p = self.hi * g;
        let e = libm::fma(self.hi, g, -p);
        Self::quick_two_sum(p, e + self.lo * g)
    }

    fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }
}

fn max_abs_diff(a: &[Dd], b: &[Dd]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |acc, (x, y)| f64::max(acc, libm::fabs(x.sub(*y).to_f64())))
}

/// Runs `hidden_sweeps` sweeps of the `F2` operator, then `surface_sweeps`
/// sweeps of the `F1` operator, on `axes`.
pub fn sweep_solve(model: &IfsModel, axes: &SampleAxes, hidden_sweeps: usize, surface_sweeps: usize) -> SweepResult {
    let (xs, ys) = (&axes.xs, &axes.ys);
    let (px, py) = (&axes.pre_x, &axes.pre_y);
    let data = model.dataset();
    let params = model.params();
    let (rows, cols) = (xs.len(), ys.len());

    // per point: (pre-image flat index, alpha, beta, gamma, p, q)
    let ops: Vec<(usize, f64, f64, f64, f64, f64)> = (0..rows)
        .flat_map(|p| (0..cols).map(move |r| (p, r)))
        .map(|(p, r)| {
            let ((n, q), (m, s)) = (px[p], py[r]);
            let (a, b, g) = params.at(n, m);
            let (p, qv) = model.pq0(n, m, xs[q], ys[s]);
            (q * cols + s, a, b, g, p, qv)
        })
        .collect();
    let seed: Vec<(f64, f64)> = (0..rows * cols).map(|i| data.bilinear(xs[i / cols], ys[i % cols])).collect();
    let mut f1: Vec<Dd> = seed.iter().map(|s| Dd::from_f64(s.0)).collect();
    let mut f2: Vec<Dd> = seed.iter().map(|s| Dd::from_f64(s.1)).collect();

    let mut history = SweepHistory::default();
    for _ in 0..hidden_sweeps {
        let next: Vec<Dd> = ops.iter().map(|&(src, _, _, g, _, q)| f2[src].scale(g).add_f64(q)).collect();
        history.hidden.push(max_abs_diff(&next, &f2));
        f2 = next;
    }
    for _ in 0..surface_sweeps {
        let next: Vec<Dd> = ops
            .iter()
            .map(|&(src, a, b, _, p, _)| f1[src].scale(a).add(f2[src].scale(b)).add_f64(p))
            .collect();
        history.surface.push(max_abs_diff(&next, &f1));
        f1 = next;
    }

    let flatten = |v: &[Dd]| Matrix::from_parts(rows, cols, v.iter().map(|d| d.to_f64()).collect());
    SweepResult {
        grid: SurfaceGrid {
            depth: axes.depth,
            xs: xs.clone(),
            ys: ys.clone(),
            f1: flatten(&f1),
            f2: flatten(&f2),
        },
        history,
    }
}
