use thiserror::Error;

/// Errors shared by all modules of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input violated a structural precondition (length, alphabet, framing).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An error radius or budget is infeasible for the given sequence.
    #[error("infeasible error budget: {0}")]
    InfeasibleBudget(String),

    /// The received word is not reachable from any codeword within the
    /// assumed error budget.
    #[error("uncorrectable input: {0}")]
    Uncorrectable(String),

    /// More than one codeword explains the received word. Within proven
    /// parameters this must never fire; it indicates a construction violation.
    #[error("ambiguous decoding: {0}")]
    Ambiguous(String),

    /// A consistency check on derived data failed, indicating corruption
    /// upstream of the current operation.
    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    /// An enumeration exceeded its configured bound. For level-by-level
    /// searches the last fully completed levels are carried along.
    #[error("enumeration bound exceeded ({0} states)")]
    BoundExceeded(usize),

    /// Like [`Error::BoundExceeded`] but carrying the per-length counts of the
    /// last complete BFS levels.
    #[error("enumeration bound exceeded; last complete level at length {}", .completed.last().map(|(n, _)| *n).unwrap_or(0))]
    PartialCount { completed: Vec<(usize, u64)> },

    /// Indexed decoding finished but some indices were never observed.
    #[error("missing indices after decode: {0:?}")]
    MissingIndices(Vec<usize>),

    /// The decoder input is outside the assumed channel model (for example, a
    /// de-duplication root that is not a codeword).
    #[error("channel-model violation: {0}")]
    ChannelModelViolation(String),
}
