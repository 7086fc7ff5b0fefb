//! Canonical forms under unitary congruence, `Ω = U Y Uᵀ`.
//!
//! Symmetric Ω (bosons) is brought to Takagi form, `Y = diag(y_1, …, y_N)`.
//! Antisymmetric Ω (fermions) is brought to Youla form, `Y` block diagonal
//! with blocks `[[0, y_k], [-y_k, 0]]`. In both cases `y_k ≥ 0`, sorted
//! descending, and every phase lives in `U`.
//!
//! Both constructions start from the left singular vectors of Ω and use the
//! antilinear map `φ(v) = Ω v̄`, which commutes with `ΩΩ†` and therefore
//! preserves each singular subspace. On a subspace with singular value `σ`,
//! `φ/σ` squares to `+1` for symmetric Ω and to `-1` for antisymmetric Ω.
//! Takagi vectors are the fixed points of `φ/σ`; Youla pairs are `(p, -φ(p)/σ)`.
//! Singular values closer than a relative gap of `1e-8` are processed as one
//! cluster, choosing vectors greedily by largest component outside the span
//! built so far, so degenerate subspaces are re-orthogonalized explicitly.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{matrix_to_rows, ParticleKind, TwoParticleState};
use crate::{CMatrix, C64, DEFAULT_TOLERANCE};

/// Relative gap below which neighbouring singular values share a cluster.
pub const CLUSTER_GAP: f64 = 1e-8;

/// Singular values below `RANK_CUTOFF · σ_max` are treated as exact zeros.
pub const RANK_CUTOFF: f64 = 1e-13;

type CVector = DVector<C64>;

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    kind: ParticleKind,
    y: Vec<f64>,
    u: CMatrix,
    reconstruction_residual: f64,
}

/// JSON view of a canonical form: `{"y": […], "u": [[[re, im], …], …], "residual": r}`.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalSummary {
    pub y: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<Vec<[f64; 2]>>>,
    pub residual: f64,
}

impl CanonicalForm {
    /// Assembles a canonical form from coefficients and a mode transformation,
    /// e.g. to build a state with prescribed `y`. The residual is zero because
    /// Ω is defined by the congruence.
    pub fn from_parts(kind: ParticleKind, y: Vec<f64>, u: CMatrix) -> Result<Self> {
        let modes = kind.modes_for_pairs(y.len());
        if u.nrows() != u.ncols() {
            return Err(Error::NotSquare {
                rows: u.nrows(),
                cols: u.ncols(),
            });
        }
        if u.nrows() != modes {
            return Err(Error::DimensionMismatch {
                modes,
                found: u.nrows(),
            });
        }
        if let Some(&bad) = y.iter().find(|v| v.is_nan() || **v < 0.0) {
            return Err(Error::Parse(format!(
                "canonical coefficients must be nonnegative, got {bad}"
            )));
        }
        let mut cf = CanonicalForm {
            kind,
            y,
            u,
            reconstruction_residual: 0.0,
        };
        cf.sort_descending();
        Ok(cf)
    }

    pub fn kind(&self) -> ParticleKind {
        self.kind
    }

    pub fn pairs(&self) -> usize {
        self.y.len()
    }

    pub fn modes(&self) -> usize {
        self.u.nrows()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    /// `‖Ω − U Y Uᵀ‖_F` against the matrix that was decomposed.
    pub fn reconstruction_residual(&self) -> f64 {
        self.reconstruction_residual
    }

    /// `Σ 4 y_k²` for fermions, `Σ 2 y_k²` for bosons; the state's `⟨Ψ|Ψ⟩`.
    pub fn norm_squared(&self) -> f64 {
        let w = self.kind.weight();
        self.y.iter().map(|y| w * y * y).sum()
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.modes();
        (self.u.adjoint() * &self.u - CMatrix::identity(m, m)).norm()
    }

    /// The canonical matrix `Y`.
    pub fn canonical_matrix(&self) -> CMatrix {
        let m = self.modes();
        let mut y = CMatrix::zeros(m, m);
        match self.kind {
            ParticleKind::Boson => {
                for (k, &v) in self.y.iter().enumerate() {
                    y[(k, k)] = C64::new(v, 0.0);
                }
            }
            ParticleKind::Fermion => {
                for (k, &v) in self.y.iter().enumerate() {
                    y[(2 * k, 2 * k + 1)] = C64::new(v, 0.0);
                    y[(2 * k + 1, 2 * k)] = C64::new(-v, 0.0);
                }
            }
        }
        y
    }

    /// `U Y Uᵀ`.
    pub fn omega(&self) -> CMatrix {
        &self.u * self.canonical_matrix() * self.u.transpose()
    }

    pub fn summary(&self, emit_u: bool) -> CanonicalSummary {
        CanonicalSummary {
            y: self.y.clone(),
            u: emit_u.then(|| matrix_to_rows(&self.u)),
            residual: self.reconstruction_residual,
        }
    }

    fn sort_descending(&mut self) {
        let n = self.y.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.y[b].total_cmp(&self.y[a]));
        if order.iter().enumerate().all(|(i, &k)| i == k) {
            return;
        }
        let width = match self.kind {
            ParticleKind::Boson => 1,
            ParticleKind::Fermion => 2,
        };
        let mut u = self.u.clone();
        for (dst, &src) in order.iter().enumerate() {
            for w in 0..width {
                u.set_column(dst * width + w, &self.u.column(src * width + w));
            }
        }
        self.y = order.iter().map(|&k| self.y[k]).collect();
        self.u = u;
    }
}

/// Rebuilds `U Y Uᵀ`; with `original` also returns `‖Ω − U Y Uᵀ‖_F`.
pub fn reconstruct(
    canonical: &CanonicalForm,
    original: Option<&CMatrix>,
) -> (CMatrix, Option<f64>) {
    let omega = canonical.omega();
    let residual = original.map(|o| (o - &omega).norm());
    (omega, residual)
}

/// Canonical form of a state: Youla for fermions, Takagi for bosons.
pub fn canonical_form(state: &TwoParticleState) -> Result<CanonicalForm> {
    // The state already passed its symmetry check; decompose its projection
    // onto the symmetry class and report the residual against Ω itself.
    let omega = state.omega();
    let cf = match state.kind() {
        ParticleKind::Fermion => youla_unchecked(omega),
        ParticleKind::Boson => takagi_unchecked(omega),
    };
    Ok(cf)
}

/// Youla decomposition of an antisymmetric matrix.
pub fn youla(omega: &CMatrix) -> Result<CanonicalForm> {
    check_input(ParticleKind::Fermion, omega)?;
    Ok(youla_unchecked(omega))
}

/// Takagi decomposition of a symmetric matrix.
pub fn takagi(omega: &CMatrix) -> Result<CanonicalForm> {
    check_input(ParticleKind::Boson, omega)?;
    Ok(takagi_unchecked(omega))
}

fn check_input(kind: ParticleKind, omega: &CMatrix) -> Result<()> {
    // Shape, parity, zero matrix and symmetry class; normalization is not
    // required for a decomposition.
    let report = crate::state::validate_state(kind, omega.nrows(), omega, DEFAULT_TOLERANCE)?;
    if report.has(crate::state::Violation::Symmetry) {
        return Err(Error::Symmetry {
            kind,
            residual: report.symmetry_residual,
            tolerance: DEFAULT_TOLERANCE,
        });
    }
    Ok(())
}

fn youla_unchecked(omega: &CMatrix) -> CanonicalForm {
    let a = (omega - omega.transpose()) * C64::new(0.5, 0.0);
    let (y, u) = youla_core(&a);
    finish(ParticleKind::Fermion, y, u, omega)
}

fn takagi_unchecked(omega: &CMatrix) -> CanonicalForm {
    let a = (omega + omega.transpose()) * C64::new(0.5, 0.0);
    let (y, u) = takagi_core(&a);
    finish(ParticleKind::Boson, y, u, omega)
}

fn finish(kind: ParticleKind, y: Vec<f64>, u: CMatrix, omega: &CMatrix) -> CanonicalForm {
    let mut cf = CanonicalForm {
        kind,
        y,
        u,
        reconstruction_residual: 0.0,
    };
    cf.sort_descending();
    cf.reconstruction_residual = (omega - cf.omega()).norm();
    cf
}

/// Left singular vectors sorted by descending singular value.
fn singular_subspaces(a: &CMatrix) -> (Vec<f64>, Vec<CVector>) {
    crate::jacobi::left_singular_pairs(a)
}

/// Splits descending singular values into clusters of near-equal values,
/// returning the clusters of nonzero values and the index where zeros begin.
fn clusters(sigma: &[f64]) -> (Vec<std::ops::Range<usize>>, usize) {
    let top = sigma.first().copied().unwrap_or(0.0);
    let nonzero = sigma.iter().take_while(|&&s| s > RANK_CUTOFF * top).count();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=nonzero {
        if i == nonzero || sigma[i - 1] - sigma[i] > CLUSTER_GAP * sigma[i - 1] {
            out.push(start..i);
            start = i;
        }
    }
    (out, nonzero)
}

/// Removes the components of `v` along an orthonormal `basis` (two passes).
fn project_out(v: &mut CVector, basis: &[CVector]) {
    for _ in 0..2 {
        for b in basis {
            let c = b.dotc(v);
            v.axpy(-c, b, C64::new(1.0, 0.0));
        }
    }
}

/// Candidate with the largest component outside `basis`, already normalized.
fn best_candidate<'a, I>(candidates: I, basis: &[CVector]) -> Option<CVector>
where
    I: IntoIterator<Item = &'a CVector>,
{
    candidates
        .into_iter()
        .map(|c| {
            let mut r = c.clone();
            project_out(&mut r, basis);
            r
        })
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .filter(|r| r.norm() > 1e-6)
        .map(|r| r.normalize())
}

fn antilinear(a: &CMatrix, v: &CVector) -> CVector {
    a * v.conjugate()
}

/// Completes `basis` to `m` orthonormal vectors, preferring `pool`, then the
/// standard basis.
fn complete_basis(basis: &mut Vec<CVector>, pool: &[CVector], m: usize) {
    let standard: Vec<CVector> = (0..m)
        .map(|i| {
            let mut e = CVector::zeros(m);
            e[i] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    while basis.len() < m {
        let next = best_candidate(pool.iter().chain(standard.iter()), basis)
            .expect("the standard basis spans the space");
        basis.push(next);
    }
}

fn columns_to_matrix(cols: &[CVector], m: usize) -> CMatrix {
    DMatrix::from_fn(m, m, |i, j| cols[j][i])
}

fn takagi_core(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let m = a.nrows();
    let (sigma, vectors) = singular_subspaces(a);
    let (groups, nonzero) = clusters(&sigma);
    let mut basis: Vec<CVector> = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m);

    for group in groups {
        for _ in group.clone() {
            let Some(r) = best_candidate(&vectors[group.clone()], &basis) else {
                break;
            };
            let w = antilinear(a, &r);
            let s = w.norm();
            let jr = w / C64::new(s, 0.0);
            // r ± J r are fixed points of J = φ/σ (the second after a factor i);
            // their squared norms sum to 4, so the larger is well conditioned.
            let plus = &r + &jr;
            let minus = (&r - &jr) * C64::new(0.0, 1.0);
            let mut v = if plus.norm() >= minus.norm() {
                plus
            } else {
                minus
            };
            project_out(&mut v, &basis);
            let v = v.normalize();
            let coeff = v.dotc(&antilinear(a, &v)).re.max(0.0);
            basis.push(v);
            y.push(coeff);
        }
    }

    complete_basis(&mut basis, &vectors[nonzero..], m);
    y.resize(m, 0.0);
    (y, columns_to_matrix(&basis, m))
}

fn youla_core(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let m = a.nrows();
    let (sigma, vectors) = singular_subspaces(a);
    let (groups, nonzero) = clusters(&sigma);
    let mut basis: Vec<CVector> = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m / 2);

    for group in groups {
        let pairs = group.len().div_ceil(2);
        for _ in 0..pairs {
            if basis.len() + 2 > m {
                break;
            }
            let Some(p) = best_candidate(&vectors[group.clone()], &basis) else {
                break;
            };
            // Ω p̄ = -y q and Ω q̄ = y p for the block [[0, y], [-y, 0]].
            let mut q = -antilinear(a, &p);
            basis.push(p);
            project_out(&mut q, &basis);
            let q = if q.norm() > 0.0 {
                q.normalize()
            } else {
                best_candidate(&vectors[group.clone()], &basis)
                    .expect("a nonzero singular subspace has even dimension")
            };
            let p = basis.last().expect("just pushed");
            let coeff = p.dotc(&antilinear(a, &q)).re.max(0.0);
            basis.push(q);
            y.push(coeff);
        }
    }

    complete_basis(&mut basis, &vectors[nonzero..], m);
    y.resize(m / 2, 0.0);
    (y, columns_to_matrix(&basis, m))
}
