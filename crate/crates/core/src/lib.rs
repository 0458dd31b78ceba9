//! Numerical workbench for a family of quantum-computation primitives that
//! admit exact cross-checks against one another:
//!
//! - Jones polynomial evaluation at the five-fold root of unity via the
//!   Fibonacci representation of braid groups ([`fib`], [`jones`]), validated
//!   against a brute-force Kauffman-bracket state sum ([`bracket`]).
//! - One-clean-qubit (DQC1) trace estimation of the same invariant ([`dqc1`]).
//! - Perturbative gadgets reducing k-local Hamiltonians to 2-local ones, with
//!   the low-energy effective Hamiltonian reconstructed both exactly and by a
//!   degenerate perturbation series ([`gadget`]).
//! - Stabilizer-code encodings that give encoded Hamiltonians a constant
//!   energy gap against local errors ([`stab`]).
//! - A quantitative adiabatic-theorem bound compared against integrated
//!   Schrödinger evolution ([`adiabatic`]).
//!
//! All numerics are dense double-precision complex linear algebra ([`linalg`]);
//! every comparison is tolerance-based with the defaults collected in [`tol`].

pub mod adiabatic;
pub mod bracket;
pub mod braid;
pub mod dqc1;
pub mod error;
pub mod fib;
pub mod gadget;
pub mod jones;
pub mod linalg;
pub mod stab;
pub mod tol;

pub use braid::{parse_braid, BraidWord, ClosureKind};
pub use error::{Error, Result};
pub use linalg::{CMatrix, ComplexMatrix, Pauli, PauliString};
