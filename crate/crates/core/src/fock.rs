//! Brute-force occupation-number representation used as an independent check
//! of the analytic formulas.
//!
//! Nothing in this module goes through the canonical decomposition or the
//! closed-form measures: states are built by applying creation operators to
//! the vacuum, reduced density matrices by applying annihilation operators,
//! and qubit reduced states by explicit partial traces.
//!
//! Fermionic sign convention: occupation patterns are ordered products
//! `a_1†^{n_1} a_2†^{n_2} … |0⟩` over ascending modes, so
//! `a_i† a_j† |0⟩ = +|1_i 1_j⟩` for `i < j` and `a_m` picks up
//! `(−1)^{Σ_{l<m} n_l}`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix2};
use serde::Serialize;

use crate::canonical::CanonicalForm;
use crate::error::{Error, Result};
use crate::state::{ParticleKind, TwoParticleState};
use crate::{CMatrix, C64};

/// Largest mode count accepted by the occupation-basis routines.
pub const MAX_ORACLE_MODES: usize = 64;

/// Largest pair count for the full fermionic Fock-space algebra check.
pub const MAX_ALGEBRA_PAIRS: usize = 4;

/// Largest qubit count for which reduced qubit states are obtained by an
/// explicit partial trace over `2^N` amplitudes.
pub const MAX_PARTIAL_TRACE_QUBITS: usize = 12;

type Occupation = Vec<u8>;
type SparseState = BTreeMap<Occupation, C64>;

fn create(kind: ParticleKind, mode: usize, occ: &Occupation) -> Option<(f64, Occupation)> {
    let mut out = occ.clone();
    match kind {
        ParticleKind::Fermion => {
            if occ[mode] == 1 {
                return None;
            }
            let parity = occ[..mode].iter().map(|&n| n as usize).sum::<usize>() % 2;
            out[mode] = 1;
            Some((if parity == 0 { 1.0 } else { -1.0 }, out))
        }
        ParticleKind::Boson => {
            out[mode] += 1;
            Some(((out[mode] as f64).sqrt(), out))
        }
    }
}

fn annihilate(kind: ParticleKind, mode: usize, occ: &Occupation) -> Option<(f64, Occupation)> {
    if occ[mode] == 0 {
        return None;
    }
    let mut out = occ.clone();
    out[mode] -= 1;
    match kind {
        ParticleKind::Fermion => {
            let parity = occ[..mode].iter().map(|&n| n as usize).sum::<usize>() % 2;
            Some((if parity == 0 { 1.0 } else { -1.0 }, out))
        }
        ParticleKind::Boson => Some(((occ[mode] as f64).sqrt(), out)),
    }
}

fn apply<F>(state: &SparseState, op: F) -> SparseState
where
    F: Fn(&Occupation) -> Option<(f64, Occupation)>,
{
    let mut out = SparseState::new();
    for (occ, amp) in state {
        if let Some((factor, next)) = op(occ) {
            *out.entry(next).or_insert(C64::new(0.0, 0.0)) += amp * factor;
        }
    }
    out.retain(|_, a| a.norm_sqr() > 0.0);
    out
}

fn inner(bra: &SparseState, ket: &SparseState) -> C64 {
    bra.iter()
        .filter_map(|(occ, a)| ket.get(occ).map(|b| a.conj() * b))
        .sum()
}

fn check_modes(modes: usize) -> Result<()> {
    if modes > MAX_ORACLE_MODES {
        return Err(Error::TooLarge {
            what: "mode count",
            size: modes,
            limit: MAX_ORACLE_MODES,
        });
    }
    Ok(())
}

/// Two-particle state vector over the occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    kind: ParticleKind,
    modes: usize,
    basis: Vec<(usize, usize)>,
    amplitudes: Vec<C64>,
}

impl FockVector {
    pub fn kind(&self) -> ParticleKind {
        self.kind
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Basis labels `(i, j)` with `i < j` for `|1_i 1_j⟩`, and `(i, i)` for
    /// `|2_i⟩` (bosons only), in lexicographic order.
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude on the pattern `(i, j)`, in either order.
    pub fn amplitude(&self, i: usize, j: usize) -> Option<C64> {
        let key = (i.min(j), i.max(j));
        self.basis
            .iter()
            .position(|&b| b == key)
            .map(|p| self.amplitudes[p])
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn to_sparse(&self) -> SparseState {
        self.basis
            .iter()
            .zip(&self.amplitudes)
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(&(i, j), &a)| {
                let mut occ = vec![0u8; self.modes];
                occ[i] += 1;
                occ[j] += 1;
                (occ, a)
            })
            .collect()
    }
}

fn occupation_basis(kind: ParticleKind, modes: usize) -> Vec<(usize, usize)> {
    let mut basis = Vec::new();
    for i in 0..modes {
        let start = match kind {
            ParticleKind::Fermion => i + 1,
            ParticleKind::Boson => i,
        };
        for j in start..modes {
            basis.push((i, j));
        }
    }
    basis
}

fn occupation_label(occ: &Occupation) -> (usize, usize) {
    let mut modes = occ
        .iter()
        .enumerate()
        .flat_map(|(m, &n)| std::iter::repeat_n(m, n as usize));
    let i = modes.next().expect("two particles");
    let j = modes.next().expect("two particles");
    (i, j)
}

/// Expands `Σ_ij Ω_ij a_i† a_j† |0⟩` by applying the creation operators to
/// the vacuum term by term.
pub fn build_fock_vector(state: &TwoParticleState) -> Result<FockVector> {
    let kind = state.kind();
    let modes = state.modes();
    check_modes(modes)?;
    let omega = state.omega();
    let vacuum = vec![0u8; modes];

    let mut psi = SparseState::new();
    for i in 0..modes {
        for j in 0..modes {
            let w = omega[(i, j)];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            // a_j† acts first
            let Some((f1, once)) = create(kind, j, &vacuum) else {
                continue;
            };
            let Some((f2, twice)) = create(kind, i, &once) else {
                continue;
            };
            *psi.entry(twice).or_insert(C64::new(0.0, 0.0)) += w * (f1 * f2);
        }
    }

    let basis = occupation_basis(kind, modes);
    let mut amplitudes = vec![C64::new(0.0, 0.0); basis.len()];
    for (occ, amp) in psi {
        let label = occupation_label(&occ);
        let pos = basis
            .iter()
            .position(|&b| b == label)
            .expect("two-particle patterns are in the basis");
        amplitudes[pos] = amp;
    }
    Ok(FockVector {
        kind,
        modes,
        basis,
        amplitudes,
    })
}

/// `⟨Ψ|a_μ† a_ν|Ψ⟩ / ⟨Ψ|N̂|Ψ⟩` at entry `(μ, ν)`, by explicit operator action.
pub fn oracle_rdm(state: &TwoParticleState) -> Result<CMatrix> {
    let fock = build_fock_vector(state)?;
    let kind = fock.kind;
    let m = fock.modes;
    let psi = fock.to_sparse();
    let lowered: Vec<SparseState> = (0..m)
        .map(|mode| apply(&psi, |occ| annihilate(kind, mode, occ)))
        .collect();
    // ⟨a_μ† a_ν⟩ = ⟨a_μ Ψ | a_ν Ψ⟩
    let mut rho = DMatrix::from_fn(m, m, |mu, nu| inner(&lowered[mu], &lowered[nu]));
    let number = rho.trace().re;
    if number == 0.0 {
        return Err(Error::Degenerate);
    }
    rho.scale_mut(1.0 / number);
    Ok(rho)
}

/// The `N`-qubit single-excitation state `Σ c_k |0…1_k…0⟩` of a canonical
/// form, with `c_k = 2 y_k` (fermions) or `√2 y_k` (bosons).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QubitStateOracle {
    pub n_qubits: usize,
    pub amplitudes: Vec<f64>,
}

impl QubitStateOracle {
    pub fn from_canonical(canonical: &CanonicalForm) -> Self {
        let scale = match canonical.kind() {
            ParticleKind::Fermion => 2.0,
            ParticleKind::Boson => std::f64::consts::SQRT_2,
        };
        QubitStateOracle {
            n_qubits: canonical.pairs(),
            amplitudes: canonical.y().iter().map(|y| scale * y).collect(),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|c| c * c).sum()
    }

    /// Dense `2^N` amplitude vector; qubit 0 is the most significant bit.
    pub fn dense(&self) -> Result<Vec<C64>> {
        let n = self.n_qubits;
        if n > MAX_PARTIAL_TRACE_QUBITS {
            return Err(Error::TooLarge {
                what: "qubit count",
                size: n,
                limit: MAX_PARTIAL_TRACE_QUBITS,
            });
        }
        let mut psi = vec![C64::new(0.0, 0.0); 1 << n];
        for (k, &c) in self.amplitudes.iter().enumerate() {
            psi[1 << (n - 1 - k)] = C64::new(c, 0.0);
        }
        Ok(psi)
    }

    /// Reduced state of qubit `k` by tracing out every other qubit of the
    /// dense vector.
    pub fn partial_trace(&self, k: usize) -> Result<Matrix2<C64>> {
        let psi = self.dense()?;
        let n = self.n_qubits;
        let bit = 1usize << (n - 1 - k);
        let mut rho = Matrix2::zeros();
        for rest in 0..psi.len() {
            if rest & bit != 0 {
                continue;
            }
            let amps = [psi[rest], psi[rest | bit]];
            for a in 0..2 {
                for b in 0..2 {
                    rho[(a, b)] += amps[a] * amps[b].conj();
                }
            }
        }
        Ok(rho)
    }

    /// `diag(1 − |c_k|², |c_k|²)` without building the state.
    pub fn direct_reduced(&self, k: usize) -> Matrix2<C64> {
        let p = self.amplitudes[k] * self.amplitudes[k];
        Matrix2::new(
            C64::new(1.0 - p, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(p, 0.0),
        )
    }
}

/// Single-qubit reduced states of the canonical qubit state: explicit partial
/// traces up to [`MAX_PARTIAL_TRACE_QUBITS`], the direct formula beyond.
pub fn oracle_qubit_states(canonical: &CanonicalForm) -> Vec<Matrix2<C64>> {
    let q = QubitStateOracle::from_canonical(canonical);
    (0..q.n_qubits)
        .map(|k| {
            if q.n_qubits <= MAX_PARTIAL_TRACE_QUBITS {
                q.partial_trace(k).expect("size checked")
            } else {
                q.direct_reduced(k)
            }
        })
        .collect()
}

/// Von Neumann entropy (bits) of a 2×2 density matrix from its eigenvalues.
pub fn qubit_entropy(rho: &Matrix2<C64>) -> f64 {
    rho.symmetric_eigenvalues()
        .iter()
        .map(|&l| if l > 0.0 { -l * l.log2() } else { 0.0 })
        .sum()
}

/// `1 − Tr ρ²` of a 2×2 density matrix.
pub fn qubit_linear_entropy(rho: &Matrix2<C64>) -> f64 {
    1.0 - (rho * rho).trace().re
}

/// Dense real operators on the `2^{2N}`-dimensional fermionic Fock space.
///
/// Basis index bit `m` is the occupation of mode `m`.
#[derive(Debug, Clone)]
pub struct PairOperators {
    n_pairs: usize,
    annihilators: Vec<DMatrix<f64>>,
    raising: Vec<DMatrix<f64>>,
    lowering: Vec<DMatrix<f64>>,
    weight: Vec<DMatrix<f64>>,
}

impl PairOperators {
    /// `σ_{k+} = a_{2k}† a_{2k+1}†`, `σ_{k−} = σ_{k+}† = a_{2k+1} a_{2k}`,
    /// `σ_{kz} = (n_{2k} + n_{2k+1} − 1)/2` (zero-based modes).
    pub fn new(n_pairs: usize) -> Result<Self> {
        if n_pairs == 0 || n_pairs > MAX_ALGEBRA_PAIRS {
            return Err(Error::TooLarge {
                what: "pair count",
                size: n_pairs,
                limit: MAX_ALGEBRA_PAIRS,
            });
        }
        let modes = 2 * n_pairs;
        let dim = 1usize << modes;
        let annihilators: Vec<DMatrix<f64>> = (0..modes)
            .map(|m| {
                let mut a = DMatrix::zeros(dim, dim);
                for s in 0..dim {
                    if s & (1 << m) == 0 {
                        continue;
                    }
                    let below = (s & ((1 << m) - 1)).count_ones();
                    a[(s ^ (1 << m), s)] = if below % 2 == 0 { 1.0 } else { -1.0 };
                }
                a
            })
            .collect();
        let identity = DMatrix::<f64>::identity(dim, dim);
        let mut raising = Vec::new();
        let mut lowering = Vec::new();
        let mut weight = Vec::new();
        for k in 0..n_pairs {
            let (a1, a2) = (&annihilators[2 * k], &annihilators[2 * k + 1]);
            raising.push(a1.transpose() * a2.transpose());
            lowering.push(a2 * a1);
            let n1 = a1.transpose() * a1;
            let n2 = a2.transpose() * a2;
            weight.push((n1 + n2 - &identity) * 0.5);
        }
        Ok(PairOperators {
            n_pairs,
            annihilators,
            raising,
            lowering,
            weight,
        })
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn annihilator(&self, mode: usize) -> &DMatrix<f64> {
        &self.annihilators[mode]
    }

    pub fn raising(&self, k: usize) -> &DMatrix<f64> {
        &self.raising[k]
    }

    pub fn lowering(&self, k: usize) -> &DMatrix<f64> {
        &self.lowering[k]
    }

    pub fn weight(&self, k: usize) -> &DMatrix<f64> {
        &self.weight[k]
    }

    /// Replaces `σ_{k−}` by `a_{2k} a_{2k+1} = −σ_{k+}†`. The su(2) relation
    /// `[σ+, σ−] = 2σz` then fails, which makes a negative control.
    pub fn with_flipped_lowering(mut self, k: usize) -> Self {
        self.lowering[k] = -&self.lowering[k];
        self
    }

    pub fn check(&self) -> PairAlgebraReport {
        let mut report = PairAlgebraReport::default();
        let modes = 2 * self.n_pairs;
        let dim = 1usize << modes;
        let identity = DMatrix::<f64>::identity(dim, dim);
        let zero = DMatrix::<f64>::zeros(dim, dim);

        for i in 0..modes {
            for j in 0..modes {
                let a = &self.annihilators[i];
                let bd = self.annihilators[j].transpose();
                let target = if i == j { &identity } else { &zero };
                let v = op_norm(&(anticommutator(a, &bd) - target));
                report.record(&format!("{{a_{i}, a_{j}†}} = δ"), v, Family::Anticommutator);
                let v = op_norm(&anticommutator(a, &self.annihilators[j]));
                report.record(&format!("{{a_{i}, a_{j}}} = 0"), v, Family::Anticommutator);
            }
        }

        for k in 0..self.n_pairs {
            let (p, m, z) = (&self.raising[k], &self.lowering[k], &self.weight[k]);
            let v = op_norm(&(commutator(z, p) - p));
            report.record(&format!("[σ{k}z, σ{k}+] = σ{k}+"), v, Family::Su2);
            let v = op_norm(&(commutator(z, m) + m));
            report.record(&format!("[σ{k}z, σ{k}−] = −σ{k}−"), v, Family::Su2);
            let v = op_norm(&(commutator(p, m) - z * 2.0));
            report.record(&format!("[σ{k}+, σ{k}−] = 2σ{k}z"), v, Family::Su2);
        }

        for k in 0..self.n_pairs {
            for l in 0..self.n_pairs {
                if k == l {
                    continue;
                }
                let left = [&self.raising[k], &self.lowering[k], &self.weight[k]];
                let right = [&self.raising[l], &self.lowering[l], &self.weight[l]];
                for (x, a) in left.iter().zip(["+", "−", "z"]) {
                    for (y, b) in right.iter().zip(["+", "−", "z"]) {
                        let v = op_norm(&commutator(x, y));
                        report.record(&format!("[σ{k}{a}, σ{l}{b}] = 0"), v, Family::Cross);
                    }
                }
            }
        }
        report
    }
}

fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

fn anticommutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b + b * a
}

/// Spectral norm; exact zero short-circuits the SVD.
fn op_norm(m: &DMatrix<f64>) -> f64 {
    if m.iter().all(|&x| x == 0.0) {
        return 0.0;
    }
    m.singular_values().max()
}

/// Threshold on the operator-norm violation of each algebra relation.
pub const ALGEBRA_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Anticommutator,
    Su2,
    Cross,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PairAlgebraReport {
    pub relations_checked: usize,
    pub max_anticommutator_violation: f64,
    pub max_su2_violation: f64,
    pub max_cross_pair_violation: f64,
    /// Relations whose violation exceeds [`ALGEBRA_TOLERANCE`].
    pub violations: Vec<String>,
}

impl PairAlgebraReport {
    fn record(&mut self, name: &str, value: f64, family: Family) {
        self.relations_checked += 1;
        let slot = match family {
            Family::Anticommutator => &mut self.max_anticommutator_violation,
            Family::Su2 => &mut self.max_su2_violation,
            Family::Cross => &mut self.max_cross_pair_violation,
        };
        *slot = slot.max(value);
        if value > ALGEBRA_TOLERANCE {
            self.violations
                .push(format!("{name} (violation {value:e})"));
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_violation(&self) -> f64 {
        self.max_anticommutator_violation
            .max(self.max_su2_violation)
            .max(self.max_cross_pair_violation)
    }
}

/// Anticommutator preflight plus su(2) and cross-pair commutation checks of
/// the pair operators on the full fermionic Fock space of `n_pairs` pairs.
pub fn check_pair_algebra(n_pairs: usize) -> Result<PairAlgebraReport> {
    Ok(PairOperators::new(n_pairs)?.check())
}
