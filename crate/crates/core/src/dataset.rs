//! Generalized interpolation data: a rectangular grid carrying a dependent
//! value `z` and a hidden value `t` at every node.

use alloc::vec::Vec;

use crate::error::{Axis, Error, Result};
use crate::matrix::Matrix;

/// Validated generalized interpolation data.
///
/// `z` and `t` are `(N+1) x (M+1)` matrices with the x index as row. Fields are
/// private so every value in circulation has passed [`validate_dataset`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedDataset {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Matrix,
    t: Matrix,
}

/// Checks the candidate grid and values, returning a [`GeneralizedDataset`].
///
/// `z` and `t` are row-major with `z[i * (M+1) + j] = z_ij`.
pub fn validate_dataset(x: Vec<f64>, y: Vec<f64>, z: Vec<f64>, t: Vec<f64>) -> Result<GeneralizedDataset> {
    check_axis(&x, Axis::X)?;
    check_axis(&y, Axis::Y)?;
    let (rows, cols) = (x.len(), y.len());
    let z = values_matrix(z, rows, cols, "z")?;
    let t = values_matrix(t, rows, cols, "t")?;
    Ok(GeneralizedDataset { x, y, z, t })
}

fn check_axis(nodes: &[f64], axis: Axis) -> Result<()> {
    let what = match axis {
        Axis::X => "x",
        Axis::Y => "y",
    };
    if let Some(index) = nodes.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { what, index });
    }
    if nodes.len() < 2 {
        return Err(Error::TooFewNodes {
            axis,
            found: nodes.len(),
        });
    }
    // exact comparison: equal neighbours are duplicates
    if let Some(w) = nodes.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::NonMonotoneAxis { axis, index: w + 1 });
    }
    Ok(())
}

fn values_matrix(values: Vec<f64>, rows: usize, cols: usize, what: &'static str) -> Result<Matrix> {
    let expected = rows * cols;
    if values.len() != expected {
        return Err(Error::ShapeMismatch {
            what,
            expected,
            found: values.len(),
        });
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { what, index });
    }
    Ok(Matrix::from_parts(rows, cols, values))
}

impl GeneralizedDataset {
    /// Same as [`validate_dataset`].
    pub fn new(x: Vec<f64>, y: Vec<f64>, z: Vec<f64>, t: Vec<f64>) -> Result<Self> {
        validate_dataset(x, y, z, t)
    }

    /// Abscissae `x_0 < .. < x_N`.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Ordinates `y_0 < .. < y_M`.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Dependent values `z_ij`.
    pub fn z(&self) -> &Matrix {
        &self.z
    }

    /// Hidden values `t_ij`.
    pub fn t(&self) -> &Matrix {
        &self.t
    }

    /// Number of cells along x (`N`).
    pub fn n_cells_x(&self) -> usize {
        self.x.len() - 1
    }

    /// Number of cells along y (`M`).
    pub fn n_cells_y(&self) -> usize {
        self.y.len() - 1
    }

    /// `[x_0, x_N]`
    pub fn x_range(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// `[y_0, y_M]`
    pub fn y_range(&self) -> (f64, f64) {
        (self.y[0], self.y[self.y.len() - 1])
    }

    /// True when `(x, y)` lies in the closed rectangle `S`.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (x0, xn) = self.x_range();
        let (y0, ym) = self.y_range();
        x >= x0 && x <= xn && y >= y0 && y <= ym
    }

    /// True when both datasets share the same grid shape.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.x.len() == other.x.len() && self.y.len() == other.y.len()
    }

    /// True when both datasets have bitwise identical axes.
    pub fn same_axes(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }

    /// Replaces the axes, revalidating.
    pub fn with_axes(&self, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        validate_dataset(x, y, self.z.as_slice().to_vec(), self.t.as_slice().to_vec())
    }

    /// Replaces the dependent values, revalidating.
    pub fn with_z(&self, z: Vec<f64>) -> Result<Self> {
        validate_dataset(self.x.clone(), self.y.clone(), z, self.t.as_slice().to_vec())
    }

    /// Replaces the hidden values, revalidating.
    pub fn with_t(&self, t: Vec<f64>) -> Result<Self> {
        validate_dataset(self.x.clone(), self.y.clone(), self.z.as_slice().to_vec(), t)
    }

    /// Bilinear interpolant of the node data at `(x, y)`, as `(z, t)`.
    ///
    /// Points outside `S` are clamped to the boundary.
    pub fn bilinear(&self, x: f64, y: f64) -> (f64, f64) {
        let (i, u) = bracket(&self.x, x);
        let (j, v) = bracket(&self.y, y);
        let blend = |m: &Matrix| {
            let a = m[(i, j)];
            let b = m[(i + 1, j)];
            let c = m[(i, j + 1)];
            let d = m[(i + 1, j + 1)];
            (1.0 - u) * (1.0 - v) * a + u * (1.0 - v) * b + (1.0 - u) * v * c + u * v * d
        };
        (blend(&self.z), blend(&self.t))
    }
}

/// Index `i` of the interval `[a_i, a_{i+1}]` holding `u`, and the local
/// coordinate in `[0, 1]`.
fn bracket(nodes: &[f64], u: f64) -> (usize, f64) {
    let last = nodes.len() - 1;
    let u = u.clamp(nodes[0], nodes[last]);
    let i = match nodes.partition_point(|&a| a <= u) {
        0 => 0,
        k => (k - 1).min(last - 1),
    };
    let s = (u - nodes[i]) / (nodes[i + 1] - nodes[i]);
    (i, s)
}
