//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;
use std::time::Instant;

use canonent::fock::{
    check_pair_algebra, oracle_rdm, qubit_entropy, qubit_linear_entropy, PairOperators,
    QubitStateOracle,
};
use canonent::measures::relation;
use canonent::{
    canonical_form, entropy_from_tangle, random_state, random_unitary, reduced_density_matrix,
    CMatrix, CanonicalForm, MeasureReport, ParticleKind, TwoParticleState, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;
const UNITARITY_TOL: f64 = 1e-12;
const TANGLE_TOL: f64 = 1e-12;
const ALGEBRA_TOL: f64 = 1e-12;
const ENSEMBLE_PER_N: usize = 1000;
const ORACLE_STATES: usize = 500;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Random normalized states for every pair count 1..=6, `ENSEMBLE_PER_N` each.
fn ensemble(kind: ParticleKind) -> Vec<(usize, u64, TwoParticleState)> {
    let mut out = Vec::new();
    for n in 1..=6 {
        for i in 0..ENSEMBLE_PER_N {
            let seed = (n as u64) << 32 | i as u64;
            let s = random_state(kind, kind.modes_for_pairs(n), seed).unwrap();
            out.push((n, seed, s));
        }
    }
    out
}

fn reports(kind: ParticleKind) -> Vec<(usize, CanonicalForm, MeasureReport)> {
    ensemble(kind)
        .into_iter()
        .map(|(n, _, s)| {
            let cf = canonical_form(&s).unwrap();
            let r = MeasureReport::compute(&cf).unwrap();
            (n, cf, r)
        })
        .collect()
}

fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

fn uncorrelated_fermion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut ds, mut de, mut dl) = (0.0f64, 0.0f64, 0.0f64);
    let mut count = 0;
    for m in (2..=12).step_by(2) {
        for trial in 0..40 {
            let i = rng.random_range(0..m);
            let mut j = rng.random_range(0..m);
            while j == i {
                j = rng.random_range(0..m);
            }
            let z = phase(rng.random_range(0.0..2.0 * PI)) * 0.5;
            let mut omega = CMatrix::zeros(m, m);
            omega[(i, j)] = z;
            omega[(j, i)] = -z;
            if trial % 2 == 1 {
                // same determinant in rotated single-particle modes
                let v = random_unitary(m, 1000 + trial as u64 + 100 * m as u64);
                omega = &v * omega * v.transpose();
            }
            let s = TwoParticleState::new(ParticleKind::Fermion, omega).unwrap();
            let r = MeasureReport::compute(&canonical_form(&s).unwrap()).unwrap();
            ds = ds.max((r.s_vn - 1.0).abs());
            de = de.max(r.e_vn_avg.abs());
            dl = dl.max(r.e_lin_avg.abs());
            count += 1;
        }
    }
    outcome(
        ds <= TOL && de <= TOL && dl <= TOL,
        format!("{count} Slater states, M ≤ 12: max|S_vn−1| = {ds:.2e}, max|E_vn| = {de:.2e}, max|E_lin| = {dl:.2e}"),
    )
}

fn uncorrelated_boson() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut count = 0;
    for m in 1..=12 {
        for trial in 0..20 {
            let mut v = canonent::CMatrix::zeros(m, 1);
            if trial % 2 == 0 {
                v[(rng.random_range(0..m), 0)] = C64::new(1.0, 0.0);
            } else {
                let u = random_unitary(m, 5000 + trial as u64 + 100 * m as u64);
                v.copy_from(&u.column(0));
            }
            let z = phase(rng.random_range(0.0..2.0 * PI)) * FRAC_1_SQRT_2;
            let omega = &v * v.transpose() * z;
            let s = TwoParticleState::new(ParticleKind::Boson, omega).unwrap();
            let r = MeasureReport::compute(&canonical_form(&s).unwrap()).unwrap();
            for x in [r.s_vn, r.s_lin, r.e_vn_avg, r.e_lin_avg] {
                worst = worst.max(x.abs());
            }
            count += 1;
        }
    }
    outcome(
        worst <= TOL,
        format!("{count} single-mode boson states: max|S_vn, S_lin, E_vn, E_lin| = {worst:.2e}"),
    )
}

fn max_relation(data: &[(usize, CanonicalForm, MeasureReport)], key: &str) -> f64 {
    data.iter()
        .map(|(_, _, r)| r.residuals[key])
        .fold(0.0, f64::max)
}

fn linear_relation(data: &[(usize, CanonicalForm, MeasureReport)], kind: ParticleKind) -> Outcome {
    // recomputed here from the report fields rather than read from residuals
    let worst = data
        .iter()
        .map(|(n, _, r)| {
            let n = *n as f64;
            let rhs = match kind {
                ParticleKind::Fermion => 2.0 / n * (2.0 * r.s_lin - 1.0),
                ParticleKind::Boson => 2.0 / n * r.s_lin,
            };
            (r.e_lin_avg - rhs).abs()
        })
        .fold(0.0, f64::max);
    let key = match kind {
        ParticleKind::Fermion => relation::FERMION_LINEAR,
        ParticleKind::Boson => relation::BOSON_LINEAR,
    };
    let reported = max_relation(data, key);
    outcome(
        worst <= TOL && reported <= TOL,
        format!(
            "{} {kind} states, N = 1..6: max residual {worst:.2e} (reported {reported:.2e})",
            data.len()
        ),
    )
}

fn von_neumann_relations(
    fermions: &[(usize, CanonicalForm, MeasureReport)],
    bosons: &[(usize, CanonicalForm, MeasureReport)],
) -> Outcome {
    let f = max_relation(fermions, relation::FERMION_VON_NEUMANN);
    let b = max_relation(bosons, relation::BOSON_VON_NEUMANN);
    outcome(
        f <= TOL && b <= TOL,
        format!("fermion max residual {f:.2e}, boson max residual {b:.2e}"),
    )
}

/// Singular values from the Hermitian embedding [[0, Ω], [Ω†, 0]].
fn embedded_singular_values(omega: &CMatrix) -> Vec<f64> {
    let m = omega.nrows();
    let mut h = CMatrix::zeros(2 * m, 2 * m);
    h.view_mut((0, m), (m, m)).copy_from(omega);
    h.view_mut((m, 0), (m, m)).copy_from(&omega.adjoint());
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev.truncate(m);
    ev.into_iter().map(|s| s.max(0.0)).collect()
}

fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    use rand_distr::StandardNormal;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * FRAC_1_SQRT_2
    })
}

/// Random (anti)symmetric matrix: full rank, rank deficient, or with a
/// degenerate spectrum, scaled to ‖Ω‖_F = 1/√2.
fn test_matrix(kind: ParticleKind, m: usize, variant: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let omega = match variant % 3 {
        0 => {
            let a = ginibre(m, m, rng);
            match kind {
                ParticleKind::Fermion => &a - a.transpose(),
                ParticleKind::Boson => &a + a.transpose(),
            }
        }
        1 => match kind {
            ParticleKind::Boson => {
                let r = rng.random_range(1..=m);
                let g = ginibre(m, r, rng);
                &g * g.transpose()
            }
            ParticleKind::Fermion => {
                let r = rng.random_range(1..=m / 2);
                let g = ginibre(m, 2 * r, rng);
                let mut j = CMatrix::zeros(2 * r, 2 * r);
                for k in 0..r {
                    j[(2 * k, 2 * k + 1)] = C64::new(1.0, 0.0);
                    j[(2 * k + 1, 2 * k)] = C64::new(-1.0, 0.0);
                }
                &g * j * g.transpose()
            }
        },
        _ => {
            let pairs = kind.pairs(m);
            let distinct: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0)).collect();
            let y: Vec<f64> = (0..pairs)
                .map(|k| if k % 4 == 3 { 0.0 } else { distinct[k % 3 % 2] })
                .collect();
            let v = random_unitary(m, rng.random());
            CanonicalForm::from_parts(kind, y, v).unwrap().omega()
        }
    };
    let norm = omega.norm();
    if norm == 0.0 {
        let mut fallback = CMatrix::zeros(m, m);
        match kind {
            ParticleKind::Boson => fallback[(0, 0)] = C64::new(FRAC_1_SQRT_2, 0.0),
            ParticleKind::Fermion => {
                fallback[(0, 1)] = C64::new(0.5, 0.0);
                fallback[(1, 0)] = C64::new(-0.5, 0.0);
            }
        }
        return fallback;
    }
    omega * C64::new(FRAC_1_SQRT_2 / norm, 0.0)
}

fn decomposition_certification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut detail = String::new();
    let mut passed = true;
    for kind in [ParticleKind::Boson, ParticleKind::Fermion] {
        let (mut rec, mut uni, mut sv) = (0.0f64, 0.0f64, 0.0f64);
        let mut deficient = 0;
        for i in 0..1000 {
            let m = match kind {
                ParticleKind::Boson => 1 + i % 12,
                ParticleKind::Fermion => 2 * (1 + i % 6),
            };
            let omega = test_matrix(kind, m, i, &mut rng);
            let cf = match kind {
                ParticleKind::Boson => canonent::takagi(&omega).unwrap(),
                ParticleKind::Fermion => canonent::youla(&omega).unwrap(),
            };
            let (_, residual) = canonent::reconstruct(&cf, Some(&omega));
            rec = rec.max(residual.unwrap() / omega.norm());
            uni = uni.max(cf.unitarity_defect());
            let sigma = embedded_singular_values(&omega);
            let expected: Vec<f64> = match kind {
                ParticleKind::Boson => sigma,
                ParticleKind::Fermion => sigma.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect(),
            };
            if expected.iter().any(|&s| s < 1e-12) {
                deficient += 1;
            }
            for (a, b) in cf.y().iter().zip(&expected) {
                sv = sv.max((a - b).abs());
            }
        }
        let ok = rec <= TOL && uni <= UNITARITY_TOL && sv <= TOL;
        passed &= ok;
        let _ = write!(
            detail,
            "{kind}: max rel ‖Ω−UYUᵀ‖ = {rec:.2e}, max ‖U†U−I‖ = {uni:.2e}, max |y−σ| = {sv:.2e} ({deficient} rank-deficient); "
        );
    }
    outcome(passed, detail.trim_end_matches("; ").to_owned())
}

fn oracle_equivalence() -> Outcome {
    let mut rdm = 0.0f64;
    for kind in [ParticleKind::Fermion, ParticleKind::Boson] {
        for i in 0..ORACLE_STATES {
            let m = match kind {
                ParticleKind::Fermion => 2 * (1 + i % 4),
                ParticleKind::Boson => 1 + i % 8,
            };
            let s = random_state(kind, m, 70_000 + i as u64).unwrap();
            let oracle = oracle_rdm(&s).unwrap();
            let analytic = reduced_density_matrix(&s).unwrap();
            rdm = rdm.max((oracle - analytic.matrix()).camax());
        }
    }
    let mut qubit = 0.0f64;
    for kind in [ParticleKind::Fermion, ParticleKind::Boson] {
        for n in 1..=12 {
            for t in 0..10 {
                let s = random_state(kind, kind.modes_for_pairs(n), 90_000 + 100 * n as u64 + t)
                    .unwrap();
                let cf = canonical_form(&s).unwrap();
                let r = MeasureReport::compute(&cf).unwrap();
                let q = QubitStateOracle::from_canonical(&cf);
                for k in 0..n {
                    let rho = q.partial_trace(k).unwrap();
                    qubit = qubit.max((qubit_entropy(&rho) - r.e_vn_per_qubit[k]).abs());
                    qubit = qubit.max((qubit_linear_entropy(&rho) - r.e_lin_per_qubit[k]).abs());
                }
            }
        }
    }
    outcome(
        rdm <= TOL && qubit <= TOL,
        format!("{ORACLE_STATES} states per kind, M ≤ 8: max |ρ−ρ_oracle| = {rdm:.2e}; N ≤ 12 partial traces: max entropy delta = {qubit:.2e}"),
    )
}

fn tangle_consistency(
    fermions: &[(usize, CanonicalForm, MeasureReport)],
    bosons: &[(usize, CanonicalForm, MeasureReport)],
) -> Outcome {
    let mut worst = 0.0f64;
    let mut qubits = 0;
    for (_, _, r) in fermions.iter().chain(bosons) {
        for (e, l) in r.e_vn_per_qubit.iter().zip(&r.e_lin_per_qubit) {
            worst = worst.max((entropy_from_tangle(2.0 * l).unwrap() - e).abs());
            qubits += 1;
        }
    }
    outcome(
        worst <= TANGLE_TOL,
        format!("{qubits} qubits: max |E(τ = 2E′_k) − E_k| = {worst:.2e}"),
    )
}

fn algebra_check() -> Outcome {
    let mut worst = 0.0f64;
    let mut relations = 0;
    let mut clean = true;
    for n in 1..=4 {
        let r = check_pair_algebra(n).unwrap();
        worst = worst.max(r.max_violation());
        relations += r.relations_checked;
        clean &= r.passed();
    }
    let control = PairOperators::new(2)
        .unwrap()
        .with_flipped_lowering(0)
        .check();
    let caught = !control.passed();
    outcome(
        clean && worst <= ALGEBRA_TOL && caught,
        format!(
            "N = 1..4: {relations} relations, max violation {worst:.2e}; corrupted σ−: {} violation(s) flagged",
            control.violations.len()
        ),
    )
}

fn ranges(
    fermions: &[(usize, CanonicalForm, MeasureReport)],
    bosons: &[(usize, CanonicalForm, MeasureReport)],
) -> Outcome {
    let floor = fermions
        .iter()
        .map(|(_, _, r)| r.s_vn)
        .fold(f64::INFINITY, f64::min);
    let mut vn_ok = true;
    let mut lin_ok = true;
    for (_, _, r) in fermions.iter().chain(bosons) {
        vn_ok &= r.e_vn_per_qubit.iter().all(|e| (0.0..=1.0).contains(e));
        lin_ok &= r.e_lin_per_qubit.iter().all(|e| (0.0..=0.5).contains(e));
    }
    outcome(
        floor >= 1.0 - TOL && vn_ok && lin_ok,
        format!(
            "min fermionic S_vn = {floor:.12}; E_vn,k ∈ [0,1]: {vn_ok}; E_lin,k ∈ [0,½]: {lin_ok}"
        ),
    )
}

/// A named criterion, evaluated lazily so its timing is its own.
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let start = Instant::now();
    let fermions = reports(ParticleKind::Fermion);
    let bosons = reports(ParticleKind::Boson);

    let criteria: Vec<Criterion> = vec![
        ("uncorrelated fermion", Box::new(uncorrelated_fermion)),
        ("uncorrelated boson", Box::new(uncorrelated_boson)),
        (
            "fermionic linear relation",
            Box::new(|| linear_relation(&fermions, ParticleKind::Fermion)),
        ),
        (
            "bosonic linear relation",
            Box::new(|| linear_relation(&bosons, ParticleKind::Boson)),
        ),
        (
            "von Neumann relations",
            Box::new(|| von_neumann_relations(&fermions, &bosons)),
        ),
        (
            "decomposition certification",
            Box::new(decomposition_certification),
        ),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        (
            "tangle consistency",
            Box::new(|| tangle_consistency(&fermions, &bosons)),
        ),
        ("pair algebra", Box::new(algebra_check)),
        ("range and floor", Box::new(|| ranges(&fermions, &bosons))),
    ];

    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failures += 1;
        }
        println!(
            "[{}] AC{:<2} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
