//! Correlation measures of the single-particle reduced state and canonical
//! entanglement of the induced qubit structure.
//!
//! Everything here is in bits. The canonical coefficients map onto qubit
//! excitation probabilities `p_k = 4 y_k²` (fermions) or `p_k = 2 y_k²`
//! (bosons); the canonical state is then a single-excitation superposition
//! over `N` qubits, so each qubit's reduced state is `diag(1 − p_k, p_k)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::canonical::CanonicalForm;
use crate::error::{Error, Result};
use crate::state::{norm_squared, ParticleKind, TwoParticleState};
use crate::{CMatrix, C64, DEFAULT_TOLERANCE};

/// Slack allowed on probabilities before they are clamped into `[0, 1]`.
pub const PROBABILITY_SLACK: f64 = 1e-12;

/// Residual keys reported by [`relation_residuals`].
pub mod relation {
    /// `E_F − (1/N)[S_F − 1 − Σ (1 − 4y²) log₂(1 − 4y²)]`
    pub const FERMION_VON_NEUMANN: &str = "fermion_von_neumann";
    /// `E_B − (1/N)[S_B − Σ (1 − 2y²) log₂(1 − 2y²)]`
    pub const BOSON_VON_NEUMANN: &str = "boson_von_neumann";
    /// `E′_F − (2/N)(2S′_F − 1)`
    pub const FERMION_LINEAR: &str = "fermion_linear";
    /// `E′_B − (2/N) S′_B`
    pub const BOSON_LINEAR: &str = "boson_linear";
}

/// Single-particle reduced density matrix `ρ = 2 Ω†Ω`.
///
/// Entry `(μ, ν)` equals `⟨Ψ|a_μ† a_ν|Ψ⟩ / 2`. Under this convention the
/// matrix is entrywise identical to the occupation-basis expectation values
/// computed by [`crate::fock::oracle_rdm`]; the other index order gives the
/// complex conjugate, with the same spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    rho: CMatrix,
}

impl ReducedDensityMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// `‖ρ − ρ†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).norm()
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.rho.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `−Tr ρ log₂ ρ` from the spectrum.
    pub fn von_neumann_entropy(&self) -> f64 {
        self.spectrum()
            .into_iter()
            .map(|l| -xlog2x(l.max(0.0)))
            .sum()
    }

    /// `1 − Tr ρ²`.
    pub fn linear_entropy(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
        1.0 - self.rho.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

pub fn reduced_density_matrix(state: &TwoParticleState) -> Result<ReducedDensityMatrix> {
    reduced_density_matrix_with_tolerance(state, DEFAULT_TOLERANCE)
}

pub fn reduced_density_matrix_with_tolerance(
    state: &TwoParticleState,
    tolerance: f64,
) -> Result<ReducedDensityMatrix> {
    let n2 = norm_squared(state);
    if (n2 - 1.0).abs() > tolerance {
        return Err(Error::NotNormalized { norm_squared: n2 });
    }
    let omega = state.omega();
    let rho = omega.adjoint() * omega * C64::new(2.0, 0.0);
    Ok(ReducedDensityMatrix { rho })
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

fn clamp_probability(what: &'static str, x: f64) -> Result<f64> {
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&x) {
        return Err(Error::OutOfRange { what, value: x });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// `h(x) = −x log₂ x − (1 − x) log₂(1 − x)`, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    let x = clamp_probability("binary entropy argument", x)?;
    Ok(-xlog2x(x) - xlog2x(1.0 - x))
}

/// `h((1 + √(1 − τ)) / 2)`.
pub fn entropy_from_tangle(tau: f64) -> Result<f64> {
    let tau = clamp_probability("tangle", tau)?;
    binary_entropy((1.0 + (1.0 - tau).sqrt()) / 2.0)
}

fn require_normalized(canonical: &CanonicalForm, tolerance: f64) -> Result<()> {
    let n2 = canonical.norm_squared();
    if (n2 - 1.0).abs() > tolerance {
        return Err(Error::NotNormalized { norm_squared: n2 });
    }
    Ok(())
}

fn excitation_probabilities(canonical: &CanonicalForm) -> Result<Vec<f64>> {
    let w = canonical.kind().weight();
    canonical
        .y()
        .iter()
        .map(|y| clamp_probability("qubit excitation probability", w * y * y))
        .collect()
}

fn von_neumann_unchecked(canonical: &CanonicalForm) -> f64 {
    let y = canonical.y();
    match canonical.kind() {
        ParticleKind::Fermion => -1.0 - 4.0 * y.iter().map(|v| xlog2x(v * v)).sum::<f64>(),
        ParticleKind::Boson => -y.iter().map(|v| xlog2x(2.0 * v * v)).sum::<f64>(),
    }
}

fn linear_unchecked(canonical: &CanonicalForm) -> f64 {
    let quartic: f64 = canonical.y().iter().map(|v| v.powi(4)).sum();
    match canonical.kind() {
        ParticleKind::Fermion => 1.0 - 8.0 * quartic,
        ParticleKind::Boson => 1.0 - 4.0 * quartic,
    }
}

/// Von Neumann entropy of the reduced state from the canonical coefficients.
pub fn von_neumann_correlation(canonical: &CanonicalForm) -> Result<f64> {
    require_normalized(canonical, DEFAULT_TOLERANCE)?;
    Ok(von_neumann_unchecked(canonical))
}

/// Linear entropy of the reduced state from the canonical coefficients.
pub fn linear_correlation(canonical: &CanonicalForm) -> Result<f64> {
    require_normalized(canonical, DEFAULT_TOLERANCE)?;
    Ok(linear_unchecked(canonical))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QubitEntanglement {
    pub per_qubit: Vec<f64>,
    pub average: f64,
}

impl QubitEntanglement {
    fn from_per_qubit(per_qubit: Vec<f64>) -> Self {
        let average = per_qubit.iter().sum::<f64>() / per_qubit.len() as f64;
        QubitEntanglement { per_qubit, average }
    }
}

fn vn_unchecked(canonical: &CanonicalForm) -> Result<QubitEntanglement> {
    let per = excitation_probabilities(canonical)?
        .into_iter()
        .map(binary_entropy)
        .collect::<Result<Vec<_>>>()?;
    Ok(QubitEntanglement::from_per_qubit(per))
}

fn lin_unchecked(canonical: &CanonicalForm) -> Result<QubitEntanglement> {
    let per = excitation_probabilities(canonical)?
        .into_iter()
        .map(|p| 2.0 * p * (1.0 - p))
        .collect();
    Ok(QubitEntanglement::from_per_qubit(per))
}

/// Entanglement entropy of each canonical qubit with the rest, and the mean.
pub fn qubit_entanglement_vn(canonical: &CanonicalForm) -> Result<QubitEntanglement> {
    require_normalized(canonical, DEFAULT_TOLERANCE)?;
    vn_unchecked(canonical)
}

/// Linear entropy `2p(1 − p)` of each canonical qubit, and the mean.
pub fn qubit_entanglement_linear(canonical: &CanonicalForm) -> Result<QubitEntanglement> {
    require_normalized(canonical, DEFAULT_TOLERANCE)?;
    lin_unchecked(canonical)
}

fn residuals_unchecked(
    canonical: &CanonicalForm,
    vn: &QubitEntanglement,
    lin: &QubitEntanglement,
) -> BTreeMap<String, f64> {
    let n = canonical.pairs() as f64;
    let y = canonical.y();
    let s_vn = von_neumann_unchecked(canonical);
    let s_lin = linear_unchecked(canonical);
    let mut out = BTreeMap::new();
    match canonical.kind() {
        ParticleKind::Fermion => {
            let tail: f64 = y.iter().map(|v| xlog2x(1.0 - 4.0 * v * v)).sum();
            let rhs = (s_vn - 1.0 - tail) / n;
            out.insert(
                relation::FERMION_VON_NEUMANN.to_owned(),
                (vn.average - rhs).abs(),
            );
            let rhs = 2.0 / n * (2.0 * s_lin - 1.0);
            out.insert(
                relation::FERMION_LINEAR.to_owned(),
                (lin.average - rhs).abs(),
            );
        }
        ParticleKind::Boson => {
            let tail: f64 = y.iter().map(|v| xlog2x(1.0 - 2.0 * v * v)).sum();
            let rhs = (s_vn - tail) / n;
            out.insert(
                relation::BOSON_VON_NEUMANN.to_owned(),
                (vn.average - rhs).abs(),
            );
            let rhs = 2.0 / n * s_lin;
            out.insert(relation::BOSON_LINEAR.to_owned(), (lin.average - rhs).abs());
        }
    }
    out
}

/// Absolute residuals of the exact relations between canonical entanglement
/// and the correlation measures, keyed by the names in [`relation`].
pub fn relation_residuals(canonical: &CanonicalForm) -> Result<BTreeMap<String, f64>> {
    require_normalized(canonical, DEFAULT_TOLERANCE)?;
    let vn = vn_unchecked(canonical)?;
    let lin = lin_unchecked(canonical)?;
    Ok(residuals_unchecked(canonical, &vn, &lin))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub s_vn: f64,
    pub s_lin: f64,
    pub e_vn_per_qubit: Vec<f64>,
    pub e_vn_avg: f64,
    pub e_lin_per_qubit: Vec<f64>,
    pub e_lin_avg: f64,
    pub residuals: BTreeMap<String, f64>,
}

impl MeasureReport {
    pub fn compute(canonical: &CanonicalForm) -> Result<Self> {
        Self::compute_with_tolerance(canonical, DEFAULT_TOLERANCE)
    }

    /// As [`MeasureReport::compute`], accepting `|⟨Ψ|Ψ⟩ − 1| ≤ tolerance`.
    pub fn compute_with_tolerance(canonical: &CanonicalForm, tolerance: f64) -> Result<Self> {
        require_normalized(canonical, tolerance)?;
        let vn = vn_unchecked(canonical)?;
        let lin = lin_unchecked(canonical)?;
        let residuals = residuals_unchecked(canonical, &vn, &lin);
        Ok(MeasureReport {
            s_vn: von_neumann_unchecked(canonical),
            s_lin: linear_unchecked(canonical),
            e_vn_per_qubit: vn.per_qubit,
            e_vn_avg: vn.average,
            e_lin_per_qubit: lin.per_qubit,
            e_lin_avg: lin.average,
            residuals,
        })
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}
