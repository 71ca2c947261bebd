use thiserror::Error;

/// Errors raised by the arithmetic kernels and checks.
///
/// `NotPIntegral` is kept apart from the usage errors: hitting it while
/// reducing a coefficient would be a mathematical finding, not a caller bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {value} is not {p}-integral")]
    NotPIntegral { p: u64, value: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{value} is outside the valid range: {reason}")]
    Range { value: i64, reason: String },

    #[error("division by zero in F_{p}")]
    DivisionByZero { p: u64 },

    #[error("series with zero constant term is not invertible in F_{p}[[X]]")]
    NotInvertible { p: u64 },

    #[error("operands live over different fields (F_{left} vs F_{right})")]
    FieldMismatch { left: u64, right: u64 },

    #[error("table for p={p} has depth {have}, need {need}")]
    TableTooShallow { p: u64, have: usize, need: usize },

    #[error("time budget of {budget_ms} ms exceeded")]
    BudgetExceeded { budget_ms: u64 },

    #[error("internal arithmetic fault: {0}")]
    ArithmeticFault(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
