use thiserror::Error;

use crate::state::ParticleKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("coefficient matrix is {found}x{found} but {modes} modes were declared")]
    DimensionMismatch { modes: usize, found: usize },

    #[error("fermionic states need an even number of modes, got {0}")]
    OddFermionModes(usize),

    #[error("state needs at least one mode")]
    NoModes,

    #[error("degenerate state: coefficient matrix is zero")]
    Degenerate,

    #[error("{kind} coefficient matrix violates its symmetry class (relative residual {residual:e} > {tolerance:e})")]
    Symmetry {
        kind: ParticleKind,
        residual: f64,
        tolerance: f64,
    },

    #[error("state is not normalized: norm² = {norm_squared}")]
    NotNormalized { norm_squared: f64 },

    #[error("{what} = {value} lies outside [0, 1]")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("malformed state document: {0}")]
    Parse(String),

    #[error("{what} is {size}, oracle limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}
