//! Free and constrained IFS variables, and the stability constants.

use alloc::vec::Vec;

use crate::error::{Constraint, Error, Result};
use crate::matrix::Matrix;

/// One parameter as entered: a scalar broadcast to every cell, or an explicit
/// row-major `N x M` matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Scalar(f64),
    PerCell(Vec<f64>),
}

/// Unvalidated `(alpha, beta, gamma)` entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterInput {
    pub alpha: ParamValue,
    pub beta: ParamValue,
    pub gamma: ParamValue,
}

impl ParameterInput {
    /// Scalar triple broadcast to every cell.
    pub fn scalar(alpha: f64, beta: f64, gamma: f64) -> Self {
        ParameterInput {
            alpha: ParamValue::Scalar(alpha),
            beta: ParamValue::Scalar(beta),
            gamma: ParamValue::Scalar(gamma),
        }
    }
}

/// Per-cell `alpha`, `beta`, `gamma`, each an `N x M` matrix indexed
/// `(n-1, m-1)`.
///
/// Invariants: `|alpha| < 1`, `|gamma| < 1` and `|beta| + |gamma| < 1` in every cell.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsParameters {
    alpha: Matrix,
    beta: Matrix,
    gamma: Matrix,
}

/// Validates `raw` for a grid with `n_cells_x x n_cells_y` cells.
///
/// Scalars are broadcast; mixing scalar and per-cell entries is rejected.
pub fn validate_parameters(raw: &ParameterInput, n_cells_x: usize, n_cells_y: usize) -> Result<IfsParameters> {
    use ParamValue::*;
    let cells = n_cells_x * n_cells_y;
    let expand = |v: &ParamValue, what: &'static str| -> Result<Matrix> {
        let data = match v {
            Scalar(s) => alloc::vec![*s; cells],
            PerCell(d) => {
                if d.len() != cells {
                    return Err(Error::ShapeMismatch {
                        what,
                        expected: cells,
                        found: d.len(),
                    });
                }
                d.clone()
            }
        };
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { what, index });
        }
        Ok(Matrix::from_parts(n_cells_x, n_cells_y, data))
    };
    let all_scalar = matches!((&raw.alpha, &raw.beta, &raw.gamma), (Scalar(_), Scalar(_), Scalar(_)));
    let all_matrix = matches!((&raw.alpha, &raw.beta, &raw.gamma), (PerCell(_), PerCell(_), PerCell(_)));
    if !all_scalar && !all_matrix {
        return Err(Error::MixedParameterEntry);
    }
    let params = IfsParameters {
        alpha: expand(&raw.alpha, "alpha")?,
        beta: expand(&raw.beta, "beta")?,
        gamma: expand(&raw.gamma, "gamma")?,
    };
    params.check()?;
    Ok(params)
}

impl IfsParameters {
    /// The same `(alpha, beta, gamma)` in every cell.
    pub fn uniform(alpha: f64, beta: f64, gamma: f64, n_cells_x: usize, n_cells_y: usize) -> Result<Self> {
        validate_parameters(&ParameterInput::scalar(alpha, beta, gamma), n_cells_x, n_cells_y)
    }

    fn check(&self) -> Result<()> {
        for n in 0..self.alpha.rows() {
            for m in 0..self.alpha.cols() {
                let (a, b, g) = self.at(n, m);
                let fail = |constraint, value| Error::ContractionViolated {
                    n: n + 1,
                    m: m + 1,
                    constraint,
                    value,
                };
                if !(libm::fabs(a) < 1.0) {
                    return Err(fail(Constraint::Alpha, a));
                }
                if !(libm::fabs(g) < 1.0) {
                    return Err(fail(Constraint::Gamma, g));
                }
                let bg = libm::fabs(b) + libm::fabs(g);
                if !(bg < 1.0) {
                    return Err(fail(Constraint::BetaPlusGamma, bg));
                }
            }
        }
        Ok(())
    }

    /// `(alpha, beta, gamma)` of the zero-based cell `(n, m)`.
    pub fn at(&self, n: usize, m: usize) -> (f64, f64, f64) {
        (self.alpha[(n, m)], self.beta[(n, m)], self.gamma[(n, m)])
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }

    pub fn beta(&self) -> &Matrix {
        &self.beta
    }

    pub fn gamma(&self) -> &Matrix {
        &self.gamma
    }

    pub fn n_cells_x(&self) -> usize {
        self.alpha.rows()
    }

    pub fn n_cells_y(&self) -> usize {
        self.alpha.cols()
    }

    /// The shared triple when every cell carries the same values.
    pub fn uniform_triple(&self) -> Option<(f64, f64, f64)> {
        Some((
            self.alpha.uniform_value()?,
            self.beta.uniform_value()?,
            self.gamma.uniform_value()?,
        ))
    }

    /// `max |alpha|` over all cells: the contraction factor of the `F1` stage.
    pub fn max_abs_alpha(&self) -> f64 {
        self.alpha.max_abs()
    }

    /// `max |beta|` over all cells.
    pub fn max_abs_beta(&self) -> f64 {
        self.beta.max_abs()
    }

    /// `max |gamma|` over all cells: the contraction factor of the `F2` stage.
    pub fn max_abs_gamma(&self) -> f64 {
        self.gamma.max_abs()
    }

    /// Round-trips back to an input, keeping the scalar form when uniform.
    pub fn to_input(&self) -> ParameterInput {
        match self.uniform_triple() {
            Some((a, b, g)) => ParameterInput::scalar(a, b, g),
            None => ParameterInput {
                alpha: ParamValue::PerCell(self.alpha.as_slice().to_vec()),
                beta: ParamValue::PerCell(self.beta.as_slice().to_vec()),
                gamma: ParamValue::PerCell(self.gamma.as_slice().to_vec()),
            },
        }
    }
}

/// Hoelder constant and exponent used by the independent-variable bound.
///
/// Their existence is known but no values are; the defaults `m_bar = 1.3`,
/// `delta = 1` are a calibration that reproduces the published sample
/// surface bounds, not a derived result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConfig {
    m_bar: f64,
    delta: f64,
}

impl StabilityConfig {
    pub const DEFAULT_M_BAR: f64 = 1.3;
    pub const DEFAULT_DELTA: f64 = 1.0;

    /// Requires `m_bar > 0` and `0 < delta <= 1`.
    pub fn new(m_bar: f64, delta: f64) -> Result<Self> {
        if !(m_bar > 0.0 && m_bar.is_finite()) {
            return Err(Error::InvalidArgument("m_bar must be positive and finite"));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidArgument("delta must lie in (0, 1]"));
        }
        Ok(StabilityConfig { m_bar, delta })
    }

    pub fn m_bar(&self) -> f64 {
        self.m_bar
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig {
            m_bar: Self::DEFAULT_M_BAR,
            delta: Self::DEFAULT_DELTA,
        }
    }
}
