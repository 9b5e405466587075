//! Per-cell coefficients of `F_{n,m}` fixed by the four corner join-up
//! conditions.

use crate::dataset::GeneralizedDataset;

/// Coefficients of one cell map
///
/// ```text
/// F1 = e x + f y + alpha z + beta t + g x y + k
/// F2 = e~ x + f~ y + gamma t + g~ x y + k~
/// ```
///
/// plus the corner second differences `z_eva`, `t_eva` of the whole grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellCoefficients {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub k: f64,
    pub e_t: f64,
    pub f_t: f64,
    pub g_t: f64,
    pub k_t: f64,
    pub z_eva: f64,
    pub t_eva: f64,
}

impl CellCoefficients {
    /// Closed-form coefficients for the zero-based cell `(n, m)`.
    pub fn compute(data: &GeneralizedDataset, n: usize, m: usize, alpha: f64, beta: f64, gamma: f64) -> Self {
        let (x, y, z, t) = (data.x(), data.y(), data.z(), data.t());
        let (nn, mm) = (data.n_cells_x(), data.n_cells_y());
        let (x0, xn) = (x[0], x[nn]);
        let (y0, ym) = (y[0], y[mm]);
        let dx = x0 - xn;
        let dy = y0 - ym;

        let z_eva = z[(nn, mm)] - z[(nn, 0)] - z[(0, mm)] + z[(0, 0)];
        let t_eva = t[(nn, mm)] - t[(nn, 0)] - t[(0, mm)] + t[(0, 0)];

        // target corner values z_{n-1,m-1}, z_{n,m-1}, z_{n-1,m}, z_{n,m}
        let (z00, z10, z01, z11) = (z[(n, m)], z[(n + 1, m)], z[(n, m + 1)], z[(n + 1, m + 1)]);
        let (t00, t10, t01, t11) = (t[(n, m)], t[(n + 1, m)], t[(n, m + 1)], t[(n + 1, m + 1)]);

        let g = (z00 - z01 - z10 + z11 - alpha * z_eva - beta * t_eva) / (dx * dy);
        let e = (z00 - z10 - alpha * (z[(0, 0)] - z[(nn, 0)]) - beta * (t[(0, 0)] - t[(nn, 0)]) - g * dx * y0) / dx;
        let f = (z00 - z01 - alpha * (z[(0, 0)] - z[(0, mm)]) - beta * (t[(0, 0)] - t[(0, mm)]) - g * dy * x0) / dy;
        let k = z11 - e * xn - f * ym - alpha * z[(nn, mm)] - beta * t[(nn, mm)] - g * xn * ym;

        let g_t = (t00 - t01 - t10 + t11 - gamma * t_eva) / (dx * dy);
        let e_t = (t00 - t10 - gamma * (t[(0, 0)] - t[(nn, 0)]) - g_t * dx * y0) / dx;
        let f_t = (t00 - t01 - gamma * (t[(0, 0)] - t[(0, mm)]) - g_t * dy * x0) / dy;
        let k_t = t11 - e_t * xn - f_t * ym - gamma * t[(nn, mm)] - g_t * xn * ym;

        CellCoefficients {
            e,
            f,
            g,
            k,
            e_t,
            f_t,
            g_t,
            k_t,
            z_eva,
            t_eva,
        }
    }

    /// `p(x, y) = e x + f y + g x y + k`
    #[inline]
    pub fn p(&self, x: f64, y: f64) -> f64 {
        self.e * x + self.f * y + self.g * x * y + self.k
    }

    /// `q(x, y) = e~ x + f~ y + g~ x y + k~`
    #[inline]
    pub fn q(&self, x: f64, y: f64) -> f64 {
        self.e_t * x + self.f_t * y + self.g_t * x * y + self.k_t
    }
}

/// `p` and `q` as blends of their corner values over the whole domain,
/// `v00 + (v10 - v00) s + (v01 - v00) w + (v11 - v10 - v01 + v00) s w` with
/// `s = (x - x_0) / (x_N - x_0)` and `w = (y - y_0) / (y_M - y_0)`.
///
/// Same functions as the monomial form in [`CellCoefficients`], but without
/// the cancellation that form suffers when the domain lies far from the
/// origin relative to its size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CornerForm {
    p: [f64; 4],
    q: [f64; 4],
}

fn blend(v00: f64, v10: f64, v01: f64, v11: f64) -> [f64; 4] {
    [v00, v10 - v00, v01 - v00, (v11 - v10) - (v01 - v00)]
}

#[inline]
fn eval(c: &[f64; 4], s: f64, w: f64) -> f64 {
    c[0] + c[1] * s + (c[2] + c[3] * s) * w
}

impl CornerForm {
    pub(crate) fn compute(data: &GeneralizedDataset, n: usize, m: usize, alpha: f64, beta: f64, gamma: f64) -> Self {
        let (z, t) = (data.z(), data.t());
        let (nn, mm) = (data.n_cells_x(), data.n_cells_y());
        // (target node, source corner) for the corners (x_0,y_0), (x_N,y_0), (x_0,y_M), (x_N,y_M)
        let corners = [((n, m), (0, 0)), ((n + 1, m), (nn, 0)), ((n, m + 1), (0, mm)), ((n + 1, m + 1), (nn, mm))];
        let pv = corners.map(|(tgt, src)| z[tgt] - alpha * z[src] - beta * t[src]);
        let qv = corners.map(|(tgt, src)| t[tgt] - gamma * t[src]);
        CornerForm {
            p: blend(pv[0], pv[1], pv[2], pv[3]),
            q: blend(qv[0], qv[1], qv[2], qv[3]),
        }
    }

    #[inline]
    pub(crate) fn p(&self, s: f64, w: f64) -> f64 {
        eval(&self.p, s, w)
    }

    #[inline]
    pub(crate) fn q(&self, s: f64, w: f64) -> f64 {
        eval(&self.q, s, w)
    }
}
