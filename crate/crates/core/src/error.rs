use core::fmt;

/// Grid axis, used to locate validation failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Abscissae `x_0..x_N`.
    X,
    /// Ordinates `y_0..y_M`.
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

/// Which of the three contractivity constraints a parameter set broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `|alpha| < 1`
    Alpha,
    /// `|gamma| < 1`
    Gamma,
    /// `|beta| + |gamma| < 1`
    BetaPlusGamma,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Alpha => f.write_str("|alpha| < 1"),
            Constraint::Gamma => f.write_str("|gamma| < 1"),
            Constraint::BetaPlusGamma => f.write_str("|beta| + |gamma| < 1"),
        }
    }
}

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{axis} axis is not strictly increasing at index {index}")]
    NonMonotoneAxis { axis: Axis, index: usize },
    #[error("{axis} axis needs at least two nodes, found {found}")]
    TooFewNodes { axis: Axis, found: usize },
    #[error("shape mismatch in {what}: expected {expected} entries, found {found}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value in {what} at index {index}")]
    NonFiniteValue { what: &'static str, index: usize },
    #[error("cell ({n},{m}) violates {constraint} (value {value})")]
    ContractionViolated {
        n: usize,
        m: usize,
        constraint: Constraint,
        value: f64,
    },
    #[error("alpha, beta and gamma must all be scalars or all be per-cell matrices")]
    MixedParameterEntry,
    #[error("degenerate {axis} interval at index {index}")]
    DegenerateGrid { axis: Axis, index: usize },
    #[error("join-up residual {residual:e} in cell ({n},{m}) exceeds tolerance")]
    JoinUpResidual { n: usize, m: usize, residual: f64 },
    #[error("cell ({n},{m}) is outside 1..={n_cells_x} x 1..={n_cells_y}")]
    CellOutOfRange {
        n: usize,
        m: usize,
        n_cells_x: usize,
        n_cells_y: usize,
    },
    #[error("depth {depth} exceeds the cap {cap}")]
    DepthTooLarge { depth: u32, cap: u32 },
    #[error("point ({x}, {y}) lies outside the interpolation domain")]
    OutOfDomain { x: f64, y: f64 },
    #[error("need at least {needed} usable samples, found {found}")]
    InsufficientSamples { needed: usize, found: usize },
    #[error("invariance of ratio fails on the {axis} axis at cell {cell} (residual {residual:e})")]
    RatioConditionViolated {
        axis: Axis,
        cell: usize,
        residual: f64,
    },
    #[error("stability bounds need one scalar alpha, beta, gamma shared by every cell")]
    NonUniformParameters,
    #[error("the two datasets have different axes")]
    AxesDiffer,
    #[error("the two datasets differ in {which}, which this bound assumes unchanged")]
    ValuesDiffer { which: &'static str },
    #[error("surface domains do not overlap under the requested comparison")]
    DomainMismatch,
    #[error("perturbation magnitude {magnitude} is too large (must be below {limit})")]
    MagnitudeTooLarge { magnitude: f64, limit: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;
