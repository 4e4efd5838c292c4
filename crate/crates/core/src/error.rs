use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("truncated payload: {0}")]
    Truncated(String),

    #[error("corrupt payload: {0}")]
    Corrupt(String),

    #[error("unsupported channel count {0}; only mono input is accepted")]
    UnsupportedChannels(u16),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid budget: {0}")]
    InvalidBudget(String),

    #[error("budget infeasible: {0}")]
    BudgetInfeasible(String),

    #[error("nothing left to cancel: only mandatory points remain")]
    NothingToCancel,

    #[error("underdetermined reconstruction: {0}")]
    Underdetermined(String),

    #[error("degenerate signal: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
