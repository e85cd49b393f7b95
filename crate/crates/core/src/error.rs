use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("degenerate triplet geometry: Gram condition number {condition:e} exceeds limit")]
    DegenerateGeometry { condition: f64 },

    #[error("degenerate response: sounder response has zero norm")]
    DegenerateResponse,

    #[error("invalid noise variance {0}")]
    InvalidNoiseVariance(f64),

    #[error("tracking period must be at least one slot, got {0}")]
    InvalidPeriod(u64),

    #[error(
        "overhead budget {o_max} admits no {m_per_event}-slot event in a {frame_len}-slot frame"
    )]
    InfeasibleBudget {
        o_max: f64,
        m_per_event: usize,
        frame_len: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
