use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown geometry `{0}` (expected one of triangle, chain3, pyramid, square, star, chain4)")]
    UnknownGeometry(String),

    #[error("basis index {index} out of range 1..={dim}")]
    BasisIndexOutOfRange { index: usize, dim: usize },

    #[error("site {site} out of range 1..={n_sites}")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("unsupported cluster size N={0} (only 3 and 4 are tabulated)")]
    UnsupportedSize(usize),

    #[error("expected {expected} pair weights, got {got}")]
    WeightCount { expected: usize, got: usize },

    #[error("3-body weight {0} given for a geometry whose ansatz excludes it")]
    ExcludedThreeBody(f64),

    #[error("{what} is not available for {geometry}")]
    UnsupportedGeometry { geometry: String, what: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("analytic formula outside its domain: {0}")]
    Domain(String),

    #[error("degenerate point: gap {gap:e} below threshold at J={j}, Bx={bx}")]
    Degenerate { gap: f64, j: f64, bx: f64 },

    #[error("inconsistent core system: residual {0:e}")]
    Inconsistent(f64),

    #[error("vanishing denominator in closed form: {0}")]
    VanishingDenominator(&'static str),

    #[error("time {t} outside the fast-forward range [0, {tff}]")]
    TimeOutOfRange { t: f64, tff: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("norm drift {drift:e} after step {step}; use more steps (smaller dt)")]
    StepSize { drift: f64, step: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics (degeneracy, step size, solver
    /// breakdown) as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_)
                | Error::Degenerate { .. }
                | Error::Inconsistent(_)
                | Error::VanishingDenominator(_)
                | Error::StepSize { .. }
        )
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        if self.is_numeric() {
            2
        } else {
            1
        }
    }
}
