//! Two-particle pure states `|Ψ⟩ = Σ_ij Ω_ij a_i† a_j† |0⟩` and their
//! coefficient matrices.
//!
//! With this convention `⟨Ψ|Ψ⟩ = 2 Tr(Ω†Ω)` for both particle kinds, so a
//! normalized fermionic state has `Σ 4 y_k² = 1` and a normalized bosonic
//! state `Σ 2 y_k² = 1` in terms of its canonical coefficients.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{CMatrix, C64, DEFAULT_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParticleKind {
    Fermion,
    Boson,
}

impl ParticleKind {
    /// Number of canonical pairs (fermions) or canonical modes (bosons) for
    /// `modes` single-particle modes.
    pub fn pairs(self, modes: usize) -> usize {
        match self {
            ParticleKind::Fermion => modes / 2,
            ParticleKind::Boson => modes,
        }
    }

    /// Number of single-particle modes for `pairs` canonical pairs.
    pub fn modes_for_pairs(self, pairs: usize) -> usize {
        match self {
            ParticleKind::Fermion => 2 * pairs,
            ParticleKind::Boson => pairs,
        }
    }

    /// Weight `w` such that the qubit excitation probability is `w·y_k²`.
    pub(crate) fn weight(self) -> f64 {
        match self {
            ParticleKind::Fermion => 4.0,
            ParticleKind::Boson => 2.0,
        }
    }

    fn sign(self) -> f64 {
        // Ω ± Ωᵀ vanishes for the right symmetry class.
        match self {
            ParticleKind::Fermion => 1.0,
            ParticleKind::Boson => -1.0,
        }
    }
}

impl fmt::Display for ParticleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParticleKind::Fermion => f.write_str("fermion"),
            ParticleKind::Boson => f.write_str("boson"),
        }
    }
}

impl std::str::FromStr for ParticleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fermion" | "fermions" | "f" => Ok(ParticleKind::Fermion),
            "boson" | "bosons" | "b" => Ok(ParticleKind::Boson),
            other => Err(Error::Parse(format!("unknown particle kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// Ω is not (anti)symmetric within tolerance.
    Symmetry,
    /// `2 Tr(Ω†Ω)` differs from one by more than the tolerance.
    NotNormalized,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `‖Ω ± Ωᵀ‖_F / ‖Ω‖_F`, with `+` for fermions and `-` for bosons.
    pub symmetry_residual: f64,
    /// `2 Tr(Ω†Ω)`, equal to `⟨Ψ|Ψ⟩`.
    pub norm_squared: f64,
    pub flags: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, violation: Violation) -> bool {
        self.flags.contains(&violation)
    }

    pub fn is_clean(&self) -> bool {
        self.flags.is_empty()
    }
}

fn frobenius_sq(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Checks shape, symmetry class and normalization of a coefficient matrix.
///
/// Structural problems (non-square, wrong size, odd fermionic mode count, zero
/// matrix) are errors; symmetry and normalization problems are reported as
/// flags so callers can decide what to do with them.
pub fn validate_state(
    kind: ParticleKind,
    modes: usize,
    omega: &CMatrix,
    tolerance: f64,
) -> Result<ValidationReport> {
    let (rows, cols) = omega.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows != modes {
        return Err(Error::DimensionMismatch { modes, found: rows });
    }
    if modes == 0 {
        return Err(Error::NoModes);
    }
    if kind == ParticleKind::Fermion && !modes.is_multiple_of(2) {
        return Err(Error::OddFermionModes(modes));
    }
    let total = frobenius_sq(omega);
    if total == 0.0 {
        return Err(Error::Degenerate);
    }

    let sign = kind.sign();
    let mut off = 0.0;
    for i in 0..modes {
        for j in 0..modes {
            off += (omega[(i, j)] + omega[(j, i)] * sign).norm_sqr();
        }
    }
    let symmetry_residual = (off / total).sqrt();
    let norm_squared = 2.0 * total;

    let mut flags = Vec::new();
    if symmetry_residual > tolerance {
        flags.push(Violation::Symmetry);
    }
    if (norm_squared - 1.0).abs() > tolerance {
        flags.push(Violation::NotNormalized);
    }
    Ok(ValidationReport {
        symmetry_residual,
        norm_squared,
        flags,
    })
}

/// A validated two-particle state. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    kind: ParticleKind,
    omega: CMatrix,
}

impl TwoParticleState {
    /// Builds a state, rejecting matrices outside the symmetry class at the
    /// default tolerance. Unnormalized matrices are accepted.
    pub fn new(kind: ParticleKind, omega: CMatrix) -> Result<Self> {
        Self::with_tolerance(kind, omega, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(kind: ParticleKind, omega: CMatrix, tolerance: f64) -> Result<Self> {
        let report = validate_state(kind, omega.nrows(), &omega, tolerance)?;
        if report.has(Violation::Symmetry) {
            return Err(Error::Symmetry {
                kind,
                residual: report.symmetry_residual,
                tolerance,
            });
        }
        Ok(TwoParticleState { kind, omega })
    }

    /// Builds a state from real-valued rows; convenient for literals.
    pub fn from_real_rows(kind: ParticleKind, rows: &[&[f64]]) -> Result<Self> {
        let m = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::NotSquare {
                rows: m,
                cols: bad.len(),
            });
        }
        let omega = DMatrix::from_fn(m, m, |i, j| C64::new(rows[i][j], 0.0));
        Self::new(kind, omega)
    }

    pub fn kind(&self) -> ParticleKind {
        self.kind
    }

    pub fn modes(&self) -> usize {
        self.omega.nrows()
    }

    pub fn pairs(&self) -> usize {
        self.kind.pairs(self.modes())
    }

    pub fn omega(&self) -> &CMatrix {
        &self.omega
    }

    pub fn into_omega(self) -> CMatrix {
        self.omega
    }

    pub fn validate(&self, tolerance: f64) -> ValidationReport {
        validate_state(self.kind, self.modes(), &self.omega, tolerance)
            .expect("constructed states are structurally valid")
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (norm_squared(self) - 1.0).abs() <= tolerance
    }
}

/// `⟨Ψ|Ψ⟩ = 2 Tr(Ω†Ω)`.
pub fn norm_squared(state: &TwoParticleState) -> f64 {
    2.0 * frobenius_sq(&state.omega)
}

/// Rescales Ω so that `⟨Ψ|Ψ⟩ = 1`.
pub fn normalize(state: &TwoParticleState) -> Result<TwoParticleState> {
    let n2 = norm_squared(state);
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::Degenerate);
    }
    let scale = 1.0 / n2.sqrt();
    Ok(TwoParticleState {
        kind: state.kind,
        omega: state.omega.map(|z| z * scale),
    })
}

pub(crate) fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // Row-major draw order, real part first.
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        data.push(C64::new(re * s, im * s));
    }
    DMatrix::from_row_slice(rows, cols, &data)
}

/// Draws a random normalized state from the Ginibre ensemble, projected onto
/// the symmetry class of `kind`.
///
/// The generator is ChaCha8 seeded from `seed`; entries are
/// `(g₁ + i g₂)/√2` with independent standard normals, drawn row-major.
pub fn random_state(kind: ParticleKind, modes: usize, seed: u64) -> Result<TwoParticleState> {
    if modes == 0 {
        return Err(Error::NoModes);
    }
    if kind == ParticleKind::Fermion && !modes.is_multiple_of(2) {
        return Err(Error::OddFermionModes(modes));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = ginibre(modes, modes, &mut rng);
    let at = a.transpose();
    let half = C64::new(0.5, 0.0);
    let omega = match kind {
        ParticleKind::Fermion => (a - at) * half,
        ParticleKind::Boson => (a + at) * half,
    };
    normalize(&TwoParticleState { kind, omega })
}

/// Haar-random unitary via QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn random_unitary(modes: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unitary_with(modes, &mut rng)
}

pub(crate) fn random_unitary_with<R: Rng>(modes: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(modes, modes, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..modes {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..modes {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[derive(Serialize, Deserialize)]
struct StateDocument {
    kind: ParticleKind,
    modes: usize,
    omega: Vec<Vec<[f64; 2]>>,
}

/// Reads a state document `{"kind", "modes", "omega": [[[re, im], …], …]}`.
///
/// The symmetry class is checked at the default tolerance; see
/// [`parse_state_with_tolerance`] to override it.
pub fn parse_state(bytes: &[u8]) -> Result<TwoParticleState> {
    parse_state_with_tolerance(bytes, DEFAULT_TOLERANCE)
}

pub fn parse_state_with_tolerance(bytes: &[u8], tolerance: f64) -> Result<TwoParticleState> {
    let doc: StateDocument =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let m = doc.modes;
    if doc.omega.len() != m {
        return Err(Error::DimensionMismatch {
            modes: m,
            found: doc.omega.len(),
        });
    }
    if let Some(row) = doc.omega.iter().find(|row| row.len() != m) {
        return Err(Error::NotSquare {
            rows: m,
            cols: row.len(),
        });
    }
    let omega = DMatrix::from_fn(m, m, |i, j| {
        let [re, im] = doc.omega[i][j];
        C64::new(re, im)
    });
    TwoParticleState::with_tolerance(doc.kind, omega, tolerance)
}

pub(crate) fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

/// Writes the state document; fields in the order kind, modes, omega.
pub fn serialize_state(state: &TwoParticleState) -> Vec<u8> {
    let doc = StateDocument {
        kind: state.kind,
        modes: state.modes(),
        omega: matrix_to_rows(&state.omega),
    };
    serde_json::to_vec(&doc).expect("state documents always serialize")
}
