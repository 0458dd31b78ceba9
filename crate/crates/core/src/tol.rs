//! Numerical tolerances used across the workbench.
//!
//! All comparisons in this crate are tolerance-based; the defaults live here
//! so that a bound appearing in several modules is defined exactly once.
//! Unless a constant says otherwise, tolerances are absolute.

/// A matrix flagged as Hermitian must satisfy `max|M - M^dag|` below this.
pub const HERMITIAN_FLAG: f64 = 1e-12;

/// Hermiticity required of eigendecomposition inputs.
pub const HERMITIAN_INPUT: f64 = 1e-10;

/// Eigen-reconstruction residual, relative to `max(1, |M|)`.
pub const EIG_RESIDUAL: f64 = 1e-9;

/// Unitarity of single representation generators.
pub const UNITARY_GENERATOR: f64 = 1e-12;

/// Unitarity of representation matrices of long words.
pub const UNITARY_WORD: f64 = 1e-9;

/// Braid relations (Yang-Baxter and far commutation) on generators.
pub const BRAID_RELATION: f64 = 1e-10;

/// Weighted trace of the identity braid.
pub const TRACE_IDENTITY: f64 = 1e-12;

/// Trace cyclicity and Markov-move invariance.
pub const MARKOV: f64 = 1e-9;

/// Temperley-Lieb generator relations.
pub const TL_RELATION: f64 = 1e-10;

/// Agreement between the representation-trace evaluator and the
/// state-sum oracle.
pub const ORACLE_MATCH: f64 = 1e-9;

/// Unitarity required of trace-estimation inputs.
pub const UNITARY_INPUT: f64 = 1e-10;

/// Exact-mode trace estimation against the direct evaluator.
pub const DQC1_EXACT: f64 = 1e-10;

/// Per-entry agreement of the register embedding with the representation.
pub const DQC1_EMBED: f64 = 1e-12;

/// Commutation of gadget symmetry operators with the gadget Hamiltonian.
pub const GADGET_SYMMETRY: f64 = 1e-12;

/// Width for grouping numerically equal eigenvalues into one eigenspace.
pub const EIGENSPACE_CLUSTER: f64 = 1e-8;

/// Axis vectors of Hamiltonian terms must be unit length within this.
pub const UNIT_AXIS: f64 = 1e-12;

/// Spectrum comparisons (sub-multiset checks, encoded-spectrum fidelity).
pub const SPECTRUM_MATCH: f64 = 1e-10;

/// Two levels closer than this count as exactly degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// Stabilizer fixing of codewords, logical commutation, projector
/// idempotence, and encoded-operator commutation.
pub const STABILIZER: f64 = 1e-12;

/// Stabilizer detection condition `P E P = 0`.
pub const DETECTION: f64 = 1e-12;

/// Slack allowed when checking the encoded-Hamiltonian gap lower bound.
pub const GAP_MARGIN: f64 = 1e-9;

/// Hermiticity required of schedule Hamiltonians.
pub const SCHEDULE_HERMITIAN: f64 = 1e-10;

/// Minimum admissible spectral gap along a schedule.
pub const MIN_GAP: f64 = 1e-8;

/// Step-doubling convergence criterion on the final evolved state.
pub const EVOLVE_REFINE: f64 = 1e-8;

/// Allowed drift of the state norm across a full evolution.
pub const NORM_DRIFT: f64 = 1e-9;

/// Relative refinement target for the bound quadrature.
pub const QUADRATURE_REL: f64 = 1e-6;

/// Additive slack when comparing evolution distance against the bound.
pub const DISTANCE_SLACK: f64 = 1e-6;
