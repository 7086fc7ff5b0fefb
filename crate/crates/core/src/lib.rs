//! Canonical entanglement of two indistinguishable particles.
//!
//! A pure two-particle state `Σ Ω_ij a_i† a_j† |0⟩` is described by its
//! coefficient matrix `Ω`, antisymmetric for fermions and symmetric for
//! bosons. This crate brings `Ω` to canonical form under unitary congruence
//! (Youla pair blocks or Takagi diagonal), evaluates the single-particle
//! correlation measures and the average per-qubit entanglement of the
//! canonical state, and checks the exact relations between them.
//!
//! The [`fock`] module is an independent brute-force route through the
//! occupation-number basis and is meant for verification only.

pub mod canonical;
pub mod error;
pub mod fock;
mod jacobi;
pub mod measures;
pub mod state;

pub use canonical::{canonical_form, reconstruct, takagi, youla, CanonicalForm};
pub use error::{Error, Result};
pub use measures::{
    binary_entropy, entropy_from_tangle, linear_correlation, qubit_entanglement_linear,
    qubit_entanglement_vn, reduced_density_matrix, relation_residuals, von_neumann_correlation,
    MeasureReport, QubitEntanglement, ReducedDensityMatrix,
};
pub use state::{
    norm_squared, normalize, parse_state, parse_state_with_tolerance, random_state, random_unitary,
    serialize_state, validate_state, ParticleKind, TwoParticleState, ValidationReport, Violation,
};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;

/// Dense complex matrix used for coefficient matrices and mode transformations.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Default relative tolerance for validation and relation checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
