//! Error taxonomy shared by every module.
//!
//! Variants map onto the process exit codes used by the CLI: contract and
//! parse problems are caller mistakes, resource limits are size guards, and
//! verification failures mean a numerical check did not hold.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's input was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed text input; `position` is the 1-based token index.
    #[error("parse error at token {position} ({token:?}): {reason}")]
    Parse {
        position: usize,
        token: String,
        reason: String,
    },

    /// Input is well-formed but exceeds a size guard.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The iterative eigensolver did not converge.
    #[error("eigensolver failed to converge within {iterations} iterations")]
    EigenConvergence { iterations: usize },

    /// Perturbation series outside its convergence region.
    #[error(
        "perturbation series diverges: |lambda V| = {perturbation_norm:.6e} \
         exceeds gamma/4 = {threshold:.6e}"
    )]
    SeriesDivergence {
        perturbation_norm: f64,
        threshold: f64,
    },

    /// A requested low-energy subspace cuts through a degenerate level.
    #[error(
        "degenerate cut: levels {d} and {} differ by {gap:.3e}; \
         the requested effective dimension straddles a degenerate block", d - 1
    )]
    DegenerateCut { d: usize, gap: f64 },

    /// A self-check that the implementation performs on its own output failed.
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
