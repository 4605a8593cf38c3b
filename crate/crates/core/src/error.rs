use thiserror::Error;

/// Recoverable failures surfaced to callers. Internal arithmetic invariants
/// (e.g. a field norm failing to be rational) are bugs and panic instead.
#[derive(Debug, Error)]
pub enum QtError {
    #[error("order {0} is not supported: need 3 <= n <= {1} (set QUASITOMO_MAX_ORDER to raise the cap)")]
    UnsupportedOrder(u32, u32),

    #[error("directions are parallel: {0}")]
    ParallelDirections(String),

    #[error("valuation of zero is infinite ({0})")]
    InfiniteValuation(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("point set configuration is not generic: {0}")]
    NonGenericConfiguration(String),

    #[error("invalid argument: {0}")]
    BadArgument(String),

    #[error("search exhausted: {0}")]
    NotFound(String),

    #[error("element of order {found} used where order {expected} was required")]
    OrderMismatch { expected: u32, found: u32 },
}

pub type QtResult<T> = Result<T, QtError>;
