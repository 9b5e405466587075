//! The IFS for one dataset and parameter set: domain maps, cell maps and the
//! boundary rule that keeps the attractor single-valued.

use alloc::vec::Vec;
use core::fmt;

use crate::coeffs::{CellCoefficients, CornerForm};
use crate::dataset::GeneralizedDataset;
use crate::error::{Axis, Error, Result};
use crate::maps::DomainMaps;
use crate::params::IfsParameters;

/// One-based cell index `(n, m)`, `1 <= n <= N`, `1 <= m <= M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub n: usize,
    pub m: usize,
}

impl Cell {
    pub const fn new(n: usize, m: usize) -> Self {
        Cell { n, m }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

/// The four corners of `S`, in the order the join-up conditions list them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// `(x_0, y_0)` mapped to node `(n-1, m-1)`
    LowLow,
    /// `(x_N, y_0)` mapped to node `(n, m-1)`
    HighLow,
    /// `(x_0, y_M)` mapped to node `(n-1, m)`
    LowHigh,
    /// `(x_N, y_M)` mapped to node `(n, m)`
    HighHigh,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::LowLow, Corner::HighLow, Corner::LowHigh, Corner::HighHigh];
}

/// `F_{n,m}(corner, z, t) - (z_target, t_target)` for one corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerResidual {
    pub corner: Corner,
    pub dz: f64,
    pub dt: f64,
}

/// Absolute join-up tolerance per unit of data magnitude.
const JOINUP_TOL: f64 = 1e-12;

/// An immutable CHFIS model.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsModel {
    dataset: GeneralizedDataset,
    params: IfsParameters,
    maps: DomainMaps,
    coeffs: Vec<CellCoefficients>,
    forms: Vec<CornerForm>,
    origin: (f64, f64),
    span: (f64, f64),
}

impl IfsModel {
    /// Computes every cell's coefficients and checks the join-up conditions.
    pub fn build(dataset: GeneralizedDataset, params: IfsParameters) -> Result<Self> {
        let (nn, mm) = (dataset.n_cells_x(), dataset.n_cells_y());
        if params.n_cells_x() != nn || params.n_cells_y() != mm {
            return Err(Error::ShapeMismatch {
                what: "parameters",
                expected: nn * mm,
                found: params.n_cells_x() * params.n_cells_y(),
            });
        }
        for (axis, nodes) in [(Axis::X, dataset.x()), (Axis::Y, dataset.y())] {
            if let Some(i) = nodes.windows(2).position(|w| !(w[1] - w[0] > 0.0)) {
                return Err(Error::DegenerateGrid { axis, index: i });
            }
        }
        let maps = DomainMaps::new(dataset.x(), dataset.y());
        let mut coeffs = Vec::with_capacity(nn * mm);
        let mut forms = Vec::with_capacity(nn * mm);
        for n in 0..nn {
            for m in 0..mm {
                let (a, b, g) = params.at(n, m);
                coeffs.push(CellCoefficients::compute(&dataset, n, m, a, b, g));
                forms.push(CornerForm::compute(&dataset, n, m, a, b, g));
            }
        }
        let (x0, xn) = dataset.x_range();
        let (y0, ym) = dataset.y_range();
        let model = IfsModel {
            dataset,
            params,
            maps,
            coeffs,
            forms,
            origin: (x0, y0),
            span: (xn - x0, ym - y0),
        };
        let tol = JOINUP_TOL * model.magnitude();
        for n in 1..=nn {
            for m in 1..=mm {
                let cell = Cell::new(n, m);
                for r in model.verify_joinup(cell)? {
                    let residual = f64::max(libm::fabs(r.dz), libm::fabs(r.dt));
                    if residual > tol {
                        return Err(Error::JoinUpResidual { n, m, residual });
                    }
                }
            }
        }
        Ok(model)
    }

    /// Scale of the data used to make rounding tolerances relative.
    fn magnitude(&self) -> f64 {
        let d = &self.dataset;
        1.0f64.max(d.z().max_abs()).max(d.t().max_abs())
    }

    pub fn dataset(&self) -> &GeneralizedDataset {
        &self.dataset
    }

    pub fn params(&self) -> &IfsParameters {
        &self.params
    }

    pub fn maps(&self) -> &DomainMaps {
        &self.maps
    }

    pub fn n_cells_x(&self) -> usize {
        self.dataset.n_cells_x()
    }

    pub fn n_cells_y(&self) -> usize {
        self.dataset.n_cells_y()
    }

    fn check_cell(&self, cell: Cell) -> Result<()> {
        let (nn, mm) = (self.n_cells_x(), self.n_cells_y());
        if cell.n == 0 || cell.m == 0 || cell.n > nn || cell.m > mm {
            return Err(Error::CellOutOfRange {
                n: cell.n,
                m: cell.m,
                n_cells_x: nn,
                n_cells_y: mm,
            });
        }
        Ok(())
    }

    /// Coefficients of a one-based cell.
    pub fn coefficients(&self, cell: Cell) -> Result<&CellCoefficients> {
        self.check_cell(cell)?;
        Ok(self.coeffs0(cell.n - 1, cell.m - 1))
    }

    #[inline]
    pub(crate) fn coeffs0(&self, n: usize, m: usize) -> &CellCoefficients {
        &self.coeffs[n * self.n_cells_y() + m]
    }

    /// Residuals of `F_{n,m}` at the four corner conditions.
    pub fn verify_joinup(&self, cell: Cell) -> Result<[CornerResidual; 4]> {
        self.check_cell(cell)?;
        let d = &self.dataset;
        let (nn, mm) = (self.n_cells_x(), self.n_cells_y());
        let (n, m) = (cell.n - 1, cell.m - 1);
        Ok(Corner::ALL.map(|corner| {
            let (i, j, ti, tj) = match corner {
                Corner::LowLow => (0, 0, n, m),
                Corner::HighLow => (nn, 0, n + 1, m),
                Corner::LowHigh => (0, mm, n, m + 1),
                Corner::HighHigh => (nn, mm, n + 1, m + 1),
            };
            let (f1, f2) = self.apply0(n, m, d.x()[i], d.y()[j], d.z()[(i, j)], d.t()[(i, j)]);
            CornerResidual {
                corner,
                dz: f1 - d.z()[(ti, tj)],
                dt: f2 - d.t()[(ti, tj)],
            }
        }))
    }

    /// `(p_{n,m}(x, y), q_{n,m}(x, y))` at pre-image coordinates.
    pub fn eval_pq(&self, cell: Cell, x: f64, y: f64) -> Result<(f64, f64)> {
        self.check_cell(cell)?;
        Ok(self.pq0(cell.n - 1, cell.m - 1, x, y))
    }

    /// `F_{n,m}(x, y, f1, f2)` without any boundary redirection.
    pub fn apply_cell(&self, cell: Cell, x: f64, y: f64, f1: f64, f2: f64) -> Result<(f64, f64)> {
        self.check_cell(cell)?;
        Ok(self.apply0(cell.n - 1, cell.m - 1, x, y, f1, f2))
    }

    #[inline]
    pub(crate) fn apply0(&self, n: usize, m: usize, x: f64, y: f64, f1: f64, f2: f64) -> (f64, f64) {
        (self.apply_f1(n, m, x, y, f1, f2), self.apply_f2(n, m, x, y, f2))
    }

    #[inline]
    pub(crate) fn apply_f1(&self, n: usize, m: usize, x: f64, y: f64, f1: f64, f2: f64) -> f64 {
        let (a, b, _) = self.params.at(n, m);
        let (u, v) = self.unit(x, y);
        a * f1 + b * f2 + self.forms[n * self.n_cells_y() + m].p(u, v)
    }

    #[inline]
    pub(crate) fn apply_f2(&self, n: usize, m: usize, x: f64, y: f64, f2: f64) -> f64 {
        let (_, _, g) = self.params.at(n, m);
        let (u, v) = self.unit(x, y);
        g * f2 + self.forms[n * self.n_cells_y() + m].q(u, v)
    }

    /// Domain coordinates scaled to the unit square.
    #[inline]
    fn unit(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.origin.0) / self.span.0, (y - self.origin.1) / self.span.1)
    }

    #[inline]
    pub(crate) fn pq0(&self, n: usize, m: usize, x: f64, y: f64) -> (f64, f64) {
        let (u, v) = self.unit(x, y);
        let form = &self.forms[n * self.n_cells_y() + m];
        (form.p(u, v), form.q(u, v))
    }

    /// Boundary rule of `G_{n,m}`: a pre-image on the upper edge `x = x_N` of
    /// an interior cell is handed to cell `n+1` at `x = x_0`, and likewise
    /// `y = y_M` to cell `m+1` at `y = y_0`.
    ///
    /// The surface value there is then `F_{n+1,m}(x_0, y, F(x_0, y))`, so a
    /// shared edge gets the same value whichever side it is reached from.
    pub fn resolve_boundary(&self, cell: Cell, x: f64, y: f64) -> Result<(Cell, f64, f64)> {
        self.check_cell(cell)?;
        let (n, m, x, y) = self.resolve0(cell.n - 1, cell.m - 1, x, y);
        Ok((Cell::new(n + 1, m + 1), x, y))
    }

    #[inline]
    pub(crate) fn resolve0(&self, mut n: usize, mut m: usize, mut x: f64, mut y: f64) -> (usize, usize, f64, f64) {
        let (x0, xn) = self.dataset.x_range();
        let (y0, ym) = self.dataset.y_range();
        if x == xn && n + 1 < self.n_cells_x() {
            n += 1;
            x = x0;
        }
        if y == ym && m + 1 < self.n_cells_y() {
            m += 1;
            y = y0;
        }
        (n, m, x, y)
    }
}
