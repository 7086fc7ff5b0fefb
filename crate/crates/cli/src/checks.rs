//! Brute-force comparisons shared by `analyze --verify` and `verify`.

use canonent::fock::{self, MAX_ALGEBRA_PAIRS, MAX_ORACLE_MODES};
use canonent::{
    measures::reduced_density_matrix_with_tolerance, CanonicalForm, MeasureReport, ParticleKind,
    TwoParticleState,
};
use serde::Serialize;

use crate::format::{out, row, sig6};
use crate::Failure;

#[derive(Debug, Clone, Serialize)]
pub(crate) struct AlgebraOutcome {
    pub pairs: usize,
    pub relations_checked: usize,
    pub max_violation: f64,
    pub passed: bool,
}

/// Oracle-minus-analytic deltas; `None` entries were not applicable.
#[derive(Debug, Clone, Serialize)]
pub(crate) struct Verification {
    /// `|⟨Ψ|Ψ⟩_Fock − 2 Tr Ω†Ω|`.
    pub fock_norm_delta: f64,
    /// Largest entrywise `|2Ω†Ω − ⟨a_μ† a_ν⟩/2|`.
    pub rdm_delta: f64,
    /// Largest `|E_k − S(Tr_{¬k} |ψ⟩⟨ψ|)|` over qubits.
    pub qubit_vn_delta: f64,
    /// Largest `|E′_k − (1 − Tr ρ_k²)|` over qubits.
    pub qubit_lin_delta: f64,
    pub algebra: Option<AlgebraOutcome>,
    pub notices: Vec<String>,
}

impl Verification {
    pub fn run(
        state: &TwoParticleState,
        canonical: &CanonicalForm,
        report: &MeasureReport,
        tolerance: f64,
    ) -> Result<Self, Failure> {
        let m = state.modes();
        if m > MAX_ORACLE_MODES {
            return Err(Failure::Input(format!(
                "{m} modes exceed the Fock oracle limit of {MAX_ORACLE_MODES}"
            )));
        }
        let fock_vec = fock::build_fock_vector(state)?;
        let fock_norm_delta = (fock_vec.norm_squared() - canonent::norm_squared(state)).abs();

        let analytic = reduced_density_matrix_with_tolerance(state, tolerance)?;
        let oracle = fock::oracle_rdm(state)?;
        let rdm_delta = (analytic.matrix() - oracle).camax();

        let qubits = fock::oracle_qubit_states(canonical);
        let delta = |values: &[f64], f: fn(&nalgebra::Matrix2<canonent::C64>) -> f64| {
            values
                .iter()
                .zip(&qubits)
                .map(|(&e, rho)| (e - f(rho)).abs())
                .fold(0.0, f64::max)
        };
        let qubit_vn_delta = delta(&report.e_vn_per_qubit, fock::qubit_entropy);
        let qubit_lin_delta = delta(&report.e_lin_per_qubit, fock::qubit_linear_entropy);

        let mut notices = Vec::new();
        if qubits.len() > fock::MAX_PARTIAL_TRACE_QUBITS {
            notices.push(format!(
                "{} qubits: reduced qubit states from the closed form, explicit partial traces stop at {}",
                qubits.len(),
                fock::MAX_PARTIAL_TRACE_QUBITS
            ));
        }
        let pairs = state.pairs();
        let algebra = match state.kind() {
            ParticleKind::Boson => {
                notices.push("pair algebra check applies to fermions only".into());
                None
            }
            ParticleKind::Fermion if pairs > MAX_ALGEBRA_PAIRS => {
                notices.push(format!(
                    "pair algebra check skipped: N = {pairs} exceeds the limit of {MAX_ALGEBRA_PAIRS}"
                ));
                None
            }
            ParticleKind::Fermion => {
                let r = fock::check_pair_algebra(pairs)?;
                Some(AlgebraOutcome {
                    pairs,
                    relations_checked: r.relations_checked,
                    max_violation: r.max_violation(),
                    passed: r.passed(),
                })
            }
        };
        Ok(Verification {
            fock_norm_delta,
            rdm_delta,
            qubit_vn_delta,
            qubit_lin_delta,
            algebra,
            notices,
        })
    }

    pub fn max_delta(&self) -> f64 {
        [
            self.fock_norm_delta,
            self.rdm_delta,
            self.qubit_vn_delta,
            self.qubit_lin_delta,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passed(&self, tolerance: f64) -> bool {
        self.max_delta() <= tolerance && self.algebra.as_ref().is_none_or(|a| a.passed)
    }

    pub fn print_table(&self) {
        row("Fock norm delta", sig6(self.fock_norm_delta));
        row("RDM delta", sig6(self.rdm_delta));
        row("qubit E_vn delta", sig6(self.qubit_vn_delta));
        row("qubit E_lin delta", sig6(self.qubit_lin_delta));
        match &self.algebra {
            Some(a) => row(
                "pair algebra",
                format!(
                    "{} ({} relations, N = {}, max violation {})",
                    if a.passed { "ok" } else { "FAILED" },
                    a.relations_checked,
                    a.pairs,
                    sig6(a.max_violation)
                ),
            ),
            None => row("pair algebra", "skipped"),
        }
        for n in &self.notices {
            out!("note: {n}");
        }
    }
}
