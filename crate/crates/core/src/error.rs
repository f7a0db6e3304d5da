use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("state vector has zero norm")]
    ZeroState,

    #[error("matrix is not hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("operation requires equal couplings (omega_a0 = omega_b0, gamma_a = gamma_b)")]
    UnequalCouplings,

    #[error("omega1 is zero: no field cycle is defined")]
    NoCycle,

    #[error("eigen label must be in 1..=4, got {0}")]
    InvalidLabel(u8),

    #[error("all of omega0, gamma and J are zero: the cubic is degenerate")]
    DegenerateParameters,

    #[error("arccos argument {0} lies outside [-1, 1] beyond rounding tolerance")]
    ArccosDomain(f64),

    #[error("field axis for the single-spin phase has zero length")]
    ZeroAxis,

    #[error("{steps} steps give {per_period:.2} steps per shortest period, need at least {minimum}")]
    StepBudget {
        steps: usize,
        per_period: f64,
        minimum: usize,
    },

    #[error("at least {minimum} steps are required, got {steps}")]
    TooFewSteps { steps: usize, minimum: usize },
}
