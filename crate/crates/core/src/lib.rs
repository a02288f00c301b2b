//! Numerics for coherence orders of fractional density-matrix powers.
//!
//! The crate computes, for finite-dimensional quantum states:
//!
//! - α-Rényi relative entropies and the α-relative purity they are built
//!   from ([`coherence`]);
//! - the coherence-order block decomposition of normalized fractional
//!   states, the resulting α-MQI spectrum, and its second moment
//!   ([`coherence`]);
//! - Wigner-Yanase-Dyson skew information, quantum Fisher information,
//!   variances, and the full hierarchy of bounds relating them to the
//!   MQI second moment ([`quantifiers`]);
//! - analytic closed forms for single-qubit, Bell-diagonal, and mixed
//!   multiparticle families, used to cross-validate the numeric engine
//!   ([`closed_forms`]);
//! - the time-reversal echo protocol for the all-to-all Ising model
//!   ([`echo`]).
//!
//! The linear-algebra layer ([`matrix`], [`eigen`]) is self-contained:
//! dense complex matrices with a cyclic Jacobi Hermitian eigensolver,
//! accurate and deterministic at the dimensions involved (d ≲ 256).

pub mod closed_forms;
pub mod coherence;
pub mod echo;
pub mod eigen;
mod error;
pub mod matrix;
pub mod observables;
pub mod quantifiers;
pub mod states;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
