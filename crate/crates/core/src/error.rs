use thiserror::Error;

/// Errors raised while building or reading instances and allocations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("value pair requires 0 <= p < q and q >= 1 (got p={p}, q={q})")]
    InvalidValues { p: u64, q: u64 },
    #[error("instance needs at least one agent")]
    NoAgents,
    #[error("expected {expected} bundles or big sets, got {got}")]
    AgentCountMismatch { expected: usize, got: usize },
    #[error("agent {agent}: good {good} out of range (m={m})")]
    GoodOutOfRange { agent: usize, good: usize, m: usize },
    #[error("agent {agent}: good {good} listed twice")]
    DuplicateGood { agent: usize, good: usize },
    #[error("allocation is not non-wasteful")]
    NotNonWasteful,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl CoreError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        CoreError::Parse {
            line,
            msg: msg.into(),
        }
    }
}
