//! Exact evaluation of `(F1, F2)` on the depth-`L` address grid.
//!
//! The depth-0 grid is the node set. The depth-`l` grid along x is the union
//! of `phi_n` images of the depth-`(l-1)` grid; with `K = N^l` intervals at
//! depth `l-1`, index `p` of the new grid is the image of index `q = p mod K`
//! under cell `n = p / K` (the last point belongs to the last cell). That
//! decomposition is exactly the boundary rule of the model, so every sample
//! is produced by one finite application of the functional equation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::maps::IntervalMap;
use crate::matrix::Matrix;
use crate::model::IfsModel;

/// Default cap on the refinement depth.
pub const DEFAULT_MAX_DEPTH: u32 = 12;

/// Samples of `F1`, `F2` on the full depth-`L` address grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub depth: u32,
    /// Sorted abscissae, `N^(L+1) + 1` of them.
    pub xs: Vec<f64>,
    /// Sorted ordinates, `M^(L+1) + 1` of them.
    pub ys: Vec<f64>,
    /// `F1` with the x index as row.
    pub f1: Matrix,
    /// `F2` with the x index as row.
    pub f2: Matrix,
}

impl SurfaceGrid {
    /// Index of `x` in `xs` if present exactly.
    pub fn x_index(&self, x: f64) -> Option<usize> {
        self.xs.binary_search_by(|a| a.total_cmp(&x)).ok()
    }

    /// Index of `y` in `ys` if present exactly.
    pub fn y_index(&self, y: f64) -> Option<usize> {
        self.ys.binary_search_by(|a| a.total_cmp(&y)).ok()
    }

    /// `(F1, F2)` at a grid point given by coordinates.
    pub fn lookup(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        let (i, j) = (self.x_index(x)?, self.y_index(y)?);
        Some((self.f1[(i, j)], self.f2[(i, j)]))
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Number of grid points per axis at `depth` for an axis with `cells` cells,
/// or `None` on overflow.
pub fn axis_len(cells: usize, depth: u32) -> Option<usize> {
    cells.checked_pow(depth.checked_add(1)?)?.checked_add(1)
}

/// `(cell, q)`: the zero-based cell producing index `p` at the next depth and
/// the pre-image index `q` at the current depth, whose grid has `k` intervals.
#[inline]
pub(crate) fn split_index(p: usize, k: usize, cells: usize) -> (usize, usize) {
    let n = p / k;
    if n >= cells {
        (cells - 1, k)
    } else {
        (n, p % k)
    }
}

/// One refinement of an axis grid.
pub(crate) fn refine_axis(prev: &[f64], maps: &[IntervalMap]) -> Vec<f64> {
    let k = prev.len() - 1;
    let cells = maps.len();
    (0..=cells * k)
        .map(|p| {
            let (n, q) = split_index(p, k, cells);
            maps[n].apply(prev[q])
        })
        .collect()
}

/// Axis grid at `depth`.
pub(crate) fn axis_grid(nodes: &[f64], maps: &[IntervalMap], depth: u32) -> Vec<f64> {
    let mut g = nodes.to_vec();
    for _ in 0..depth {
        g = refine_axis(&g, maps);
    }
    g
}

/// [`solve_surface_capped`] with [`DEFAULT_MAX_DEPTH`].
pub fn solve_surface(model: &IfsModel, depth: u32) -> Result<SurfaceGrid> {
    solve_surface_capped(model, depth, DEFAULT_MAX_DEPTH)
}

/// Evaluates the surface on the depth-`depth` address grid by forward
/// recursion from the node values. `F2` of each level is computed before `F1`
/// and never reads it.
pub fn solve_surface_capped(model: &IfsModel, depth: u32, cap: u32) -> Result<SurfaceGrid> {
    if depth > cap {
        return Err(Error::DepthTooLarge { depth, cap });
    }
    let (nn, mm) = (model.n_cells_x(), model.n_cells_y());
    let too_large = Error::DepthTooLarge { depth, cap: depth.saturating_sub(1) };
    let nx = axis_len(nn, depth).ok_or(too_large.clone())?;
    let ny = axis_len(mm, depth).ok_or(too_large.clone())?;
    nx.checked_mul(ny).ok_or(too_large)?;

    let data = model.dataset();
    let mut xs = data.x().to_vec();
    let mut ys = data.y().to_vec();
    let mut f1 = data.z().clone();
    let mut f2 = data.t().clone();

    for _ in 0..depth {
        let (kx, ky) = (xs.len() - 1, ys.len() - 1);
        let new_xs = refine_axis(&xs, model.maps().phis());
        let new_ys = refine_axis(&ys, model.maps().psis());
        let (rows, cols) = (new_xs.len(), new_ys.len());
        let cols_src: Vec<(usize, usize)> = (0..cols).map(|r| split_index(r, ky, mm)).collect();

        let mut g2 = Vec::with_capacity(rows * cols);
        for p in 0..rows {
            let (n, q) = split_index(p, kx, nn);
            for &(m, s) in &cols_src {
                g2.push(model.apply_f2(n, m, xs[q], ys[s], f2[(q, s)]));
            }
        }
        let mut g1 = Vec::with_capacity(rows * cols);
        for p in 0..rows {
            let (n, q) = split_index(p, kx, nn);
            for &(m, s) in &cols_src {
                g1.push(model.apply_f1(n, m, xs[q], ys[s], f1[(q, s)], f2[(q, s)]));
            }
        }
        xs = new_xs;
        ys = new_ys;
        f1 = Matrix::from_parts(rows, cols, g1);
        f2 = Matrix::from_parts(rows, cols, g2);
    }

    Ok(SurfaceGrid { depth, xs, ys, f1, f2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::GeneralizedDataset;
    use crate::model::Cell;
    use crate::params::IfsParameters;
    use crate::testdata::table1_model;
    use alloc::vec;

    #[test]
    fn depth_zero_is_the_data() {
        let model = table1_model();
        let g = solve_surface(&model, 0).unwrap();
        assert_eq!(&g.f1, model.dataset().z());
        assert_eq!(&g.f2, model.dataset().t());
        assert_eq!(g.xs, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn depth_one_sample_points() {
        let model = table1_model();
        let g = solve_surface(&model, 1).unwrap();
        assert_eq!(g.xs, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        let (f1, f2) = g.lookup(1.5, 1.5).unwrap();
        assert!((f1 - 0.4925).abs() < 1e-12, "{f1}");
        assert!((f2 - 0.8625).abs() < 1e-12, "{f2}");
        let (f1, f2) = g.lookup(0.5, 0.5).unwrap();
        assert!((f1 - 0.4425).abs() < 1e-12, "{f1}");
        assert!((f2 - 0.6625).abs() < 1e-12, "{f2}");
    }

    #[test]
    fn grid_sizes_follow_cell_counts() {
        let d = GeneralizedDataset::new(
            vec![0.0, 0.4, 1.0, 1.3],
            vec![0.0, 2.0],
            vec![0.0, 1.0, 0.5, 0.2, 0.3, 0.1, 0.9, 0.4],
            vec![0.2; 8],
        )
        .unwrap();
        let model = IfsModel::build(d, IfsParameters::uniform(0.5, 0.1, 0.3, 3, 1).unwrap()).unwrap();
        let g = solve_surface(&model, 3).unwrap();
        assert_eq!(g.xs.len(), 3usize.pow(4) + 1);
        assert_eq!(g.ys.len(), 2);
        assert!(g.xs.windows(2).all(|w| w[0] < w[1]));
        for x in [0.0, 0.4, 1.0, 1.3] {
            assert!(g.x_index(x).is_some(), "node {x} missing");
        }
    }

    #[test]
    fn depth_cap_enforced() {
        let model = table1_model();
        assert_eq!(
            solve_surface(&model, 13).unwrap_err(),
            Error::DepthTooLarge { depth: 13, cap: 12 }
        );
        assert!(solve_surface_capped(&model, 3, 2).is_err());
    }

    #[test]
    fn every_preimage_gives_the_grid_value() {
        // Each depth-(L+1) point on a shared edge has several (cell, pre-image)
        // pairs; through the boundary rule they must all produce the stored value.
        let model = table1_model();
        let coarse = solve_surface(&model, 3).unwrap();
        let fine = solve_surface(&model, 4).unwrap();
        let mut edge_hits = 0;
        for n in 1..=2 {
            for m in 1..=2 {
                for &x in &coarse.xs {
                    for &y in &coarse.ys {
                        let px = model.maps().phi(n - 1).apply(x);
                        let py = model.maps().psi(m - 1).apply(y);
                        let (cell, rx, ry) = model.resolve_boundary(Cell::new(n, m), x, y).unwrap();
                        let iq = coarse.x_index(rx).unwrap();
                        let is = coarse.y_index(ry).unwrap();
                        let got = model
                            .apply_cell(cell, rx, ry, coarse.f1[(iq, is)], coarse.f2[(iq, is)])
                            .unwrap();
                        let want = fine.lookup(px, py).unwrap();
                        assert!((got.0 - want.0).abs() <= 1e-9 && (got.1 - want.1).abs() <= 1e-9);
                        if cell != Cell::new(n, m) {
                            edge_hits += 1;
                        }
                    }
                }
            }
        }
        assert!(edge_hits > 0);
    }

    #[test]
    fn interpolation_property_on_random_grids() {
        let d = GeneralizedDataset::new(
            vec![-0.7, 0.1, 0.35, 2.0],
            vec![1.0, 1.5, 4.0],
            vec![0.5, 0.2, 0.9, -0.1, 0.4, 0.3, 0.8, 0.6, 0.7, 0.0, 0.1, 0.2],
            vec![0.1, 0.3, 0.2, 0.6, 0.5, 0.4, 0.9, 0.8, 0.7, 0.2, 0.1, 0.0],
        )
        .unwrap();
        let model = IfsModel::build(d.clone(), IfsParameters::uniform(0.6, -0.3, 0.4, 3, 2).unwrap()).unwrap();
        let g = solve_surface(&model, 4).unwrap();
        for (i, &x) in d.x().iter().enumerate() {
            for (j, &y) in d.y().iter().enumerate() {
                let (f1, f2) = g.lookup(x, y).expect("node on grid");
                assert!((f1 - d.z()[(i, j)]).abs() <= 1e-9);
                assert!((f2 - d.t()[(i, j)]).abs() <= 1e-9);
            }
        }
    }
}
