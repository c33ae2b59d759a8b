use thiserror::Error;

/// Errors surfaced by samplers, integrators and validators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed interlacing array: row `row` (1-based) has the wrong length.
    #[error("structural error: row {row} has {got} entries, expected {expected}")]
    MalformedRow { row: usize, got: usize, expected: usize },

    /// An index or size argument outside its admissible range.
    #[error("range error: {0}")]
    Range(String),

    /// A real-valued argument outside its admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition on the state of a sampler or integrator failed.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Iterative numerics failed to converge within the iteration budget.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The adaptive step-size control hit its floor.
    #[error(
        "step-size floor reached at t = {time}: smallest adjacent gap {gap:.3e} on level {level}; \
         dt too coarse for this configuration"
    )]
    StepFloor { time: f64, level: usize, gap: f64 },

    /// Array or file failed interlacing validation.
    #[error("validation error: interlacing violated at level {level}, index {index}")]
    Interlacing { level: usize, index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
