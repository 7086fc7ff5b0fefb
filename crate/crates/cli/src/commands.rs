use std::path::Path;

use canonent::canonical::CanonicalSummary;
use canonent::fock::MAX_ORACLE_MODES;
use canonent::{
    canonical_form, normalize, parse_state_with_tolerance, random_state, CMatrix, CanonicalForm,
    MeasureReport, ParticleKind, TwoParticleState,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::checks::Verification;
use crate::format::{complex, list, out, row, sig6};
use crate::{AnalyzeArgs, Failure, Format, SweepArgs, VerifyArgs};

/// What was read, and the matrix that was actually analyzed.
#[derive(Debug, Serialize)]
struct InputEcho {
    kind: ParticleKind,
    modes: usize,
    normalization_applied: bool,
    /// `⟨Ψ|Ψ⟩` of the file as read.
    norm_squared: f64,
    omega: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize)]
struct AnalysisDocument {
    input: InputEcho,
    canonical: CanonicalSummary,
    measures: MeasureReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<Verification>,
}

#[derive(Debug, Serialize)]
struct VerifyDocument {
    input: InputEcho,
    verification: Verification,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct SweepRow {
    kind: ParticleKind,
    #[serde(rename = "N")]
    pairs: usize,
    seed: u64,
    s_vn: f64,
    s_lin: f64,
    e_vn_avg: f64,
    e_lin_avg: f64,
    max_residual: f64,
}

fn rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn echo(state: &TwoParticleState, read_norm: f64, normalized: bool) -> InputEcho {
    InputEcho {
        kind: state.kind(),
        modes: state.modes(),
        normalization_applied: normalized,
        norm_squared: read_norm,
        omega: rows(state.omega()),
    }
}

fn load(
    path: &Path,
    rescale: bool,
    tolerance: f64,
) -> Result<(TwoParticleState, InputEcho), Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let state = parse_state_with_tolerance(&bytes, tolerance)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let norm = canonent::norm_squared(&state);
    if state.is_normalized(tolerance) {
        let echo = echo(&state, norm, false);
        return Ok((state, echo));
    }
    if !rescale {
        return Err(Failure::Input(format!(
            "{}: state is not normalized: norm² = {norm} (use --normalize to rescale)",
            path.display()
        )));
    }
    let state = normalize(&state)?;
    let echo = echo(&state, norm, true);
    Ok((state, echo))
}

/// Relative reconstruction residual `‖Ω − U Y Uᵀ‖_F / ‖Ω‖_F`.
fn relative_residual(state: &TwoParticleState, cf: &CanonicalForm) -> f64 {
    cf.reconstruction_residual() / state.omega().norm()
}

fn ensure_oracle_size(state: &TwoParticleState) -> Result<(), Failure> {
    let m = state.modes();
    if m > MAX_ORACLE_MODES {
        return Err(Failure::Input(format!(
            "{m} modes exceed the Fock oracle limit of {MAX_ORACLE_MODES}"
        )));
    }
    Ok(())
}

fn print_json<T: Serialize>(doc: &T) {
    out!(
        "{}",
        serde_json::to_string_pretty(doc).expect("reports always serialize")
    );
}

fn print_state_header(input: &InputEcho) {
    let pairs = input.kind.pairs(input.modes);
    let note = if input.normalization_applied {
        format!(" (rescaled from norm² = {})", sig6(input.norm_squared))
    } else {
        String::new()
    };
    row(
        "state",
        format!("{}, M = {}, N = {pairs}{note}", input.kind, input.modes),
    );
}

pub(crate) fn analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let tol = args.tolerance.tolerance;
    let (state, input) = load(&args.path, args.normalize, tol)?;
    if args.verify {
        ensure_oracle_size(&state)?;
    }
    let cf = canonical_form(&state)?;
    let measures = MeasureReport::compute_with_tolerance(&cf, tol)?;
    let verification = if args.verify {
        Some(Verification::run(&state, &cf, &measures, tol)?)
    } else {
        None
    };

    let mut breaches = Vec::new();
    let recon = relative_residual(&state, &cf);
    if recon > tol {
        breaches.push(format!("reconstruction residual {recon:e}"));
    }
    if measures.max_residual() > tol {
        breaches.push(format!("relation residual {:e}", measures.max_residual()));
    }
    if let Some(v) = &verification {
        if !v.passed(tol) {
            breaches.push(format!("oracle delta {:e}", v.max_delta()));
        }
    }

    let doc = AnalysisDocument {
        input,
        canonical: cf.summary(args.emit_u),
        measures,
        verification,
    };
    match args.format {
        Format::Json => print_json(&doc),
        Format::Table => print_analysis(&doc, &cf, args.emit_u),
    }
    if breaches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!(
            "tolerance {tol:e} exceeded: {}",
            breaches.join(", ")
        )))
    }
}

fn print_analysis(doc: &AnalysisDocument, cf: &CanonicalForm, emit_u: bool) {
    print_state_header(&doc.input);
    row("y", list(&doc.canonical.y));
    row("reconstruction", sig6(doc.canonical.residual));
    if emit_u {
        out!("U");
        for r in cf.u().row_iter() {
            let cells: Vec<String> = r.iter().map(|&z| complex(z)).collect();
            out!("  {}", cells.join("  "));
        }
    }
    let m = &doc.measures;
    row("S (von Neumann)", sig6(m.s_vn));
    row("S' (linear)", sig6(m.s_lin));
    row("E_k", list(&m.e_vn_per_qubit));
    row("E (average)", sig6(m.e_vn_avg));
    row("E'_k", list(&m.e_lin_per_qubit));
    row("E' (average)", sig6(m.e_lin_avg));
    out!("relation residuals");
    for (name, r) in &m.residuals {
        out!("  {name:<22}{}", sig6(*r));
    }
    if let Some(v) = &doc.verification {
        out!("oracle deltas");
        v.print_table();
    }
}

pub(crate) fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let tol = args.tolerance.tolerance;
    let kind = args.kind;
    let pairs = args.pairs as usize;
    let modes = kind.modes_for_pairs(pairs);
    let samples: Vec<(SweepRow, f64)> = (0..args.count)
        .into_par_iter()
        .map(|i| {
            let seed = args.seed.wrapping_add(i);
            let state = random_state(kind, modes, seed)?;
            let cf = canonical_form(&state)?;
            // Normalized by construction; `tol` applies to the residuals only.
            let m = MeasureReport::compute(&cf)?;
            let row = SweepRow {
                kind,
                pairs,
                seed,
                s_vn: m.s_vn,
                s_lin: m.s_lin,
                e_vn_avg: m.e_vn_avg,
                e_lin_avg: m.e_lin_avg,
                max_residual: m.max_residual(),
            };
            Ok((row, relative_residual(&state, &cf)))
        })
        .collect::<Result<_, canonent::Error>>()?;

    let unwritable =
        |e: csv::Error| Failure::Input(format!("cannot write {}: {e}", args.out.display()));
    let mut writer = csv::Writer::from_path(&args.out).map_err(unwritable)?;
    for (r, _) in &samples {
        writer.serialize(r).map_err(unwritable)?;
    }
    writer
        .flush()
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", args.out.display())))?;

    let max_relation = samples
        .iter()
        .map(|(r, _)| r.max_residual)
        .fold(0.0, f64::max);
    let max_recon = samples.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    out!(
        "{} {kind} samples, N = {pairs}, seeds {}..{}: max relation residual {max_relation:.3e}, max reconstruction residual {max_recon:.3e}; wrote {}",
        args.count,
        args.seed,
        args.seed.wrapping_add(args.count - 1),
        args.out.display()
    );
    if max_relation > tol || max_recon > tol {
        return Err(Failure::Tolerance(format!(
            "tolerance {tol:e} exceeded by the sweep"
        )));
    }
    Ok(())
}

fn random_request(spec: &[String]) -> Result<(ParticleKind, usize, u64), Failure> {
    let [kind, pairs, seed] = spec else {
        return Err(Failure::Usage("--random takes KIND N SEED".into()));
    };
    let kind = kind
        .parse()
        .map_err(|e: canonent::Error| Failure::Usage(e.to_string()))?;
    let pairs: usize = pairs
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::Usage(format!("invalid pair count {pairs:?}")))?;
    let seed = seed
        .parse()
        .map_err(|_| Failure::Usage(format!("invalid seed {seed:?}")))?;
    Ok((kind, pairs, seed))
}

pub(crate) fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let tol = args.tolerance.tolerance;
    let (state, input) = match (&args.random, &args.path) {
        (Some(spec), _) => {
            let (kind, pairs, seed) = random_request(spec)?;
            let modes = kind.modes_for_pairs(pairs);
            if modes > MAX_ORACLE_MODES {
                return Err(Failure::Input(format!(
                    "{modes} modes exceed the Fock oracle limit of {MAX_ORACLE_MODES}"
                )));
            }
            let state = random_state(kind, modes, seed)?;
            let input = echo(&state, canonent::norm_squared(&state), false);
            (state, input)
        }
        (None, Some(path)) => load(path, args.normalize, tol)?,
        (None, None) => return Err(Failure::Usage("give a state file or --random".into())),
    };
    ensure_oracle_size(&state)?;
    let cf = canonical_form(&state)?;
    let measures = MeasureReport::compute_with_tolerance(&cf, tol)?;
    let verification = Verification::run(&state, &cf, &measures, tol)?;
    let passed = verification.passed(tol);
    let max = verification.max_delta();
    match args.format {
        Format::Json => print_json(&VerifyDocument {
            input,
            verification,
            passed,
        }),
        Format::Table => {
            print_state_header(&input);
            verification.print_table();
            out!(
                "{} (max delta {}, tolerance {})",
                if passed { "verified" } else { "FAILED" },
                sig6(max),
                sig6(tol)
            );
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!(
            "oracle comparison failed at tolerance {tol:e}"
        )))
    }
}
