//! Acceptance gate: one check per shipped claim, each printed as a single
//! `criterion N: PASS/FAIL` line. The process exits nonzero if any fails.
//!
//! Criteria 1–3 drive the `dcomp` binary end to end; the statistical loops
//! behind criteria 4–7 call the library directly with fixed seeds.

use std::process::Output;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dcomp_core::entanglement::{
    assemble_density, build_p, build_p_legacy16, concurrence_legacy, concurrence_pform,
    concurrence_pure, eof_from_concurrence, eof_spectral, legacy_family_matrix, mixed_concurrence,
    DensityMatrix, Ensemble, MixedRoute,
};
use dcomp_core::identities::{random_params, IdentityReport};
use dcomp_core::linalg::{lu_solve, ComplexMatrix};
use dcomp_core::multipliers::{build_j, Family, JVariant};
use dcomp_core::solver::{bench_solve, structured_solve, BenchRecord, SolveForm};
use dcomp_core::states::{bracket_norm, build_matrix, normalize, vectorize, StateParams};
use dcomp_core::Complex64;

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: Vec<(usize, Criterion)> = vec![
        (1, criterion_j_identity_suite),
        (2, criterion_i_identity_suite),
        (3, criterion_variant_arbitration),
        (4, criterion_pairing_gates),
        (5, criterion_eof_consistency),
        (6, criterion_mixed_formula),
        (7, criterion_solver),
    ];
    let mut failures = 0;
    for (number, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("criterion {number}: PASS — {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {number}: FAIL — {detail}");
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criterion(s) failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

// ----------------------------------------------------------------- helpers

fn dcomp(args: &[&str]) -> Result<Output, String> {
    std::process::Command::new(env!("CARGO_BIN_EXE_dcomp"))
        .args(args)
        .output()
        .map_err(|err| format!("failed to launch dcomp: {err}"))
}

fn parse_reports(output: &Output) -> Result<Vec<IdentityReport>, String> {
    serde_json::from_slice(&output.stdout)
        .map_err(|err| format!("cannot parse verify output: {err}"))
}

/// Every row matching (name, family, k) must exist and sit at or below
/// `tol`; `variant` further restricts the match when given.
fn require_rows(
    reports: &[IdentityReport],
    name: &str,
    family: Family,
    k: usize,
    variant: Option<JVariant>,
    tol: f64,
) -> Result<(), String> {
    let matched: Vec<&IdentityReport> = reports
        .iter()
        .filter(|r| {
            r.name == name
                && r.family == Some(family)
                && r.k == k
                && variant.is_none_or(|v| r.j_variant == Some(v))
        })
        .collect();
    if matched.is_empty() {
        return Err(format!("no {name} row for family {family}, k = {k}"));
    }
    for row in matched {
        if row.residual > tol || !row.pass {
            return Err(format!(
                "{name} (family {family}, k = {k}) residual {:.3e} exceeds {tol:.1e}",
                row.residual
            ));
        }
    }
    Ok(())
}

fn normalized_draw(k: usize, rng: &mut ChaCha8Rng) -> StateParams {
    loop {
        if let Ok(normalized) = normalize(&random_params(Family::J, k, rng)) {
            return normalized;
        }
    }
}

fn random_rhs(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn dense_system(params: &StateParams, form: SolveForm) -> ComplexMatrix {
    let a = build_matrix(params);
    let j = build_j(params.k() + 1, JVariant::ExplicitJ4).unwrap();
    let b_top = params.ladder().last().unwrap().0;
    match form {
        SolveForm::A => a,
        SolveForm::BA => j.matrix_left(&a).scale(b_top),
        SolveForm::At => a.transpose(),
        SolveForm::AtBt => j.transposed().matrix_right(&a.transpose()).scale(b_top),
    }
}

fn relative_residual(m: &ComplexMatrix, x: &[Complex64], y: &[Complex64]) -> f64 {
    let image = m.mat_vec(x);
    let defect = image
        .iter()
        .zip(y)
        .map(|(got, want)| (got - want).norm_sqr())
        .sum::<f64>()
        .sqrt();
    defect
        / y.iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(1e-300)
}

fn vector_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------- criteria

/// Identity suite over the J family with the working (explicit) seed:
/// determinant ≤ 1e−8 and spectrum ≤ 1e−9 for k = 1..4, the four product
/// identities ≤ 1e−10 at k = 2,3, 100 draws per cell, under 60 s.
fn criterion_j_identity_suite() -> Result<String, String> {
    let start = Instant::now();
    let output = dcomp(&[
        "verify",
        "--family",
        "J",
        "--j-variant",
        "explicit-j4",
        "--kmax",
        "4",
        "--draws",
        "100",
        "--seed",
        "42",
        "--output",
        "json",
    ])?;
    let elapsed = start.elapsed().as_secs_f64();
    if !output.status.success() {
        return Err(format!("verify exited with {:?}", output.status.code()));
    }
    let reports = parse_reports(&output)?;
    for k in 1..=4 {
        require_rows(&reports, "determinant", Family::J, k, None, 1e-8)?;
        require_rows(&reports, "spectrum", Family::J, k, None, 1e-9)?;
    }
    for k in 2..=3 {
        for name in [
            "inverse-kernel",
            "norm-split",
            "ladder-cross",
            "norm-product",
        ] {
            require_rows(&reports, name, Family::J, k, None, 1e-10)?;
        }
    }
    if elapsed >= 60.0 {
        return Err(format!("suite took {elapsed:.1}s, budget is 60s"));
    }
    Ok(format!(
        "determinant/spectrum k ≤ 4 and product identities at k = 2,3 within gates ({elapsed:.1}s)"
    ))
}

/// The second family's determinant and characteristic-polynomial identities
/// at the same tolerances, k = 2..4, 100 draws.
fn criterion_i_identity_suite() -> Result<String, String> {
    let output = dcomp(&[
        "verify", "--family", "I", "--kmax", "4", "--draws", "100", "--seed", "42", "--output",
        "json",
    ])?;
    if !output.status.success() {
        return Err(format!("verify exited with {:?}", output.status.code()));
    }
    let reports = parse_reports(&output)?;
    for k in 2..=4 {
        require_rows(&reports, "determinant", Family::I, k, None, 1e-8)?;
        require_rows(&reports, "spectrum", Family::I, k, None, 1e-9)?;
    }
    Ok("I-family determinant and spectrum hold for k = 2..4".into())
}

/// Arbitration between the two J seeds at k = 1,2: the suite must report
/// both, at least one must pass everything, and the README must document
/// the outcome.
fn criterion_variant_arbitration() -> Result<String, String> {
    let output = dcomp(&[
        "verify", "--family", "J", "--kmax", "2", "--draws", "100", "--seed", "42", "--output",
        "json",
    ])?;
    if !output.status.success() {
        return Err(format!(
            "verify over both seeds exited with {:?} (no variant passes)",
            output.status.code()
        ));
    }
    let reports = parse_reports(&output)?;
    let explicit_failures = reports
        .iter()
        .filter(|r| r.j_variant == Some(JVariant::ExplicitJ4) && !r.pass)
        .count();
    if explicit_failures > 0 {
        return Err(format!("explicit seed fails {explicit_failures} check(s)"));
    }
    let recursive_gating_failures = reports
        .iter()
        .filter(|r| r.j_variant == Some(JVariant::Recursive) && r.gating && !r.pass)
        .count();
    if recursive_gating_failures == 0 {
        return Err("expected the recursive seed to fail its gates at k = 2".into());
    }

    // A recursive-only run must report the failure through its exit code.
    let recursive_only = dcomp(&[
        "verify",
        "--family",
        "J",
        "--kmax",
        "2",
        "--draws",
        "100",
        "--seed",
        "42",
        "--j-variant",
        "recursive",
        "--output",
        "json",
    ])?;
    if recursive_only.status.code() != Some(1) {
        return Err(format!(
            "recursive-only verify exited with {:?}, expected 1",
            recursive_only.status.code()
        ));
    }

    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md"))
        .map_err(|err| format!("cannot read README.md: {err}"))?;
    if !readme.contains("explicit-j4") || !readme.contains("recursive") {
        return Err("README.md does not document the seed arbitration".into());
    }
    Ok(format!(
        "explicit-j4 passes all checks; recursive fails {recursive_gating_failures} gating check(s); outcome documented in README"
    ))
}

/// Pairing gates: `build_p(k)` self-verifies for k = 1..3 (also through the
/// CLI), and the fixed 16×16 pairing reproduces the legacy closed form
/// within 1e−10 on 20 draws.
fn criterion_pairing_gates() -> Result<String, String> {
    for k in 1..=3 {
        build_p(k).map_err(|err| format!("build_p({k}) failed its self-check: {err}"))?;
        let output = dcomp(&["pmatrix", "--k", &k.to_string()])?;
        if !output.status.success() {
            return Err(format!(
                "pmatrix --k {k} exited with {:?}",
                output.status.code()
            ));
        }
    }

    let p_legacy = build_p_legacy16();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c45_4741);
    let mut worst = 0.0f64;
    for draw in 0..20 {
        let mut scalars = [Complex64::ZERO; 6];
        for z in &mut scalars {
            *z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let raw_norm_sq = 2.0 * scalars.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let t = raw_norm_sq.sqrt().recip();
        for z in &mut scalars {
            *z *= t;
        }
        let [b, a1, b1, c1, d1, e] = scalars;
        let state = vectorize(&legacy_family_matrix(b, a1, b1, c1, d1, e))
            .map_err(|err| format!("draw {draw}: {err}"))?;
        let via_pairing =
            concurrence_pform(&state, &p_legacy).map_err(|err| format!("draw {draw}: {err}"))?;
        let closed = concurrence_legacy(b, a1, b1, c1, d1, e)
            .map_err(|err| format!("draw {draw}: {err}"))?;
        let gap = (via_pairing - closed).abs();
        worst = worst.max(gap);
        if gap > 1e-10 {
            return Err(format!(
                "draw {draw}: pairing form {via_pairing:.12} vs closed form {closed:.12}"
            ));
        }
    }
    Ok(format!(
        "build_p self-verifies for k = 1..3; legacy pairing matches 4|b₁c₁−a₁d₁+be| (worst gap {worst:.2e})"
    ))
}

/// EoF consistency: the spectral route equals the closed form within 1e−9
/// on 100 normalized draws per k = 1..3, plus the forced values.
fn criterion_eof_consistency() -> Result<String, String> {
    let mut worst = 0.0f64;
    for k in 1..=3 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xE0F0 + k as u64);
        for draw in 0..100 {
            let params = normalized_draw(k, &mut rng);
            let d = concurrence_pure(&params);
            let closed = eof_from_concurrence(d.min(1.0), 1 << k)
                .map_err(|err| format!("k={k} draw={draw}: {err}"))?;
            let spectral = eof_spectral(&vectorize(&build_matrix(&params)).unwrap())
                .map_err(|err| format!("k={k} draw={draw}: {err}"))?;
            let gap = (closed - spectral).abs();
            worst = worst.max(gap);
            if gap > 1e-9 {
                return Err(format!(
                    "k={k} draw={draw}: closed {closed:.12} vs spectral {spectral:.12}"
                ));
            }
        }
    }

    let maximal = normalize(
        &StateParams::new(
            Family::J,
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ONE,
            vec![(Complex64::ZERO, Complex64::ZERO)],
        )
        .unwrap(),
    )
    .unwrap();
    let d = concurrence_pure(&maximal);
    if (d - 1.0).abs() > 1e-12 {
        return Err(format!("maximal k=1 state has d = {d:.15}, expected 1"));
    }
    let e = eof_spectral(&vectorize(&build_matrix(&maximal)).unwrap()).unwrap();
    if (e - 2.0).abs() > 1e-12 {
        return Err(format!("maximal k=1 state has E = {e:.15}, expected 2"));
    }
    for k in 1..=3 {
        let e = eof_from_concurrence(1.0, 1 << k).unwrap();
        if (e - (k as f64 + 1.0)).abs() > 1e-10 {
            return Err(format!(
                "d=1 at k={k} gives E = {e:.12}, expected {}",
                k + 1
            ));
        }
    }
    Ok(format!(
        "spectral and closed-form EoF agree on 100 draws per k = 1..3 (worst gap {worst:.2e}); forced values hit"
    ))
}

/// Mixed-state formula: rank-1 densities reproduce the pure concurrence,
/// the two spectrum routes agree, and the maximally mixed state is flat.
fn criterion_mixed_formula() -> Result<String, String> {
    for k in 1..=2 {
        let p = build_p(k).map_err(|err| err.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x3A11 + k as u64);
        for draw in 0..10 {
            let params = normalized_draw(k, &mut rng);
            let pure_d = concurrence_pure(&params);
            let state = vectorize(&build_matrix(&params)).unwrap();
            let ensemble = Ensemble::new(vec![(1.0, state)]).map_err(|err| err.to_string())?;
            let rho = assemble_density(&ensemble).map_err(|err| err.to_string())?;
            let mixed = mixed_concurrence(&rho, &p, MixedRoute::Hermitian)
                .map_err(|err| format!("k={k} draw={draw}: {err}"))?;
            if (mixed.d - pure_d).abs() > 1e-8 {
                return Err(format!(
                    "k={k} draw={draw}: rank-1 density gives d = {:.12}, pure state gives {pure_d:.12}",
                    mixed.d
                ));
            }
        }
    }

    let p1 = build_p(1).map_err(|err| err.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x2B0B);
    let mut worst_route_gap = 0.0f64;
    for trial in 0..20 {
        let raw: Vec<f64> = (0..3).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut members = Vec::new();
        for weight in &raw {
            let params = normalized_draw(1, &mut rng);
            members.push((weight / total, vectorize(&build_matrix(&params)).unwrap()));
        }
        let rho = assemble_density(&Ensemble::new(members).map_err(|err| err.to_string())?)
            .map_err(|err| err.to_string())?;
        let hermitian = mixed_concurrence(&rho, &p1, MixedRoute::Hermitian)
            .map_err(|err| format!("trial {trial}: {err}"))?;
        let direct = mixed_concurrence(&rho, &p1, MixedRoute::Direct)
            .map_err(|err| format!("trial {trial}: {err}"))?;
        let gap = (hermitian.d - direct.d).abs();
        worst_route_gap = worst_route_gap.max(gap);
        if gap > 1e-8 {
            return Err(format!(
                "trial {trial}: hermitian route d = {:.12}, direct route d = {:.12}",
                hermitian.d, direct.d
            ));
        }
    }

    let flat = ComplexMatrix::identity(16).scale(Complex64::new(1.0 / 16.0, 0.0));
    let rho = DensityMatrix::new(flat, 1).map_err(|err| err.to_string())?;
    let mixed =
        mixed_concurrence(&rho, &p1, MixedRoute::Hermitian).map_err(|err| err.to_string())?;
    if mixed.d != 0.0 {
        return Err(format!(
            "maximally mixed state has d = {:.3e}, expected exactly 0 after clamping",
            mixed.d
        ));
    }
    Ok(format!(
        "rank-1 densities reproduce pure d (k ≤ 2); routes agree on 20 ensembles (worst gap {worst_route_gap:.2e}); maximally mixed d = 0"
    ))
}

/// Solver: residuals ≤ 1e−9 and LU agreement ≤ 1e−8 on 100 gated draws per
/// k ≤ 6; the benchmark must show the structured solve strictly faster at
/// N ≥ 1024 with a median-time ratio ≤ 0.2 at N = 1024.
fn criterion_solver() -> Result<String, String> {
    for k in 1..=6 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x501_0000 + k as u64);
        for draw in 0..100 {
            let params = loop {
                let candidate = random_params(Family::J, k, &mut rng);
                if bracket_norm(&candidate).bracket.norm() >= 1e-3 {
                    break candidate;
                }
            };
            let y = random_rhs(params.n(), &mut rng);
            for form in [SolveForm::A, SolveForm::BA, SolveForm::At, SolveForm::AtBt] {
                let x = structured_solve(&params, &y, form)
                    .map_err(|err| format!("k={k} draw={draw} form {form}: {err}"))?;
                let residual = relative_residual(&dense_system(&params, form), &x, &y);
                if residual > 1e-9 {
                    return Err(format!(
                        "k={k} draw={draw} form {form}: residual {residual:.3e}"
                    ));
                }
            }
            let x_structured = structured_solve(&params, &y, SolveForm::A).unwrap();
            let x_lu = lu_solve(&build_matrix(&params), &y)
                .map_err(|err| format!("k={k} draw={draw}: LU failed: {err}"))?;
            let gap = vector_distance(&x_structured, &x_lu) / vector_norm(&x_lu).max(1e-300);
            if gap > 1e-8 {
                return Err(format!("k={k} draw={draw}: LU disagreement {gap:.3e}"));
            }
        }
    }

    let records = bench_solve(&[7, 8, 9, 10], 3, 0xBEA7).map_err(|err| err.to_string())?;
    let sizes: Vec<usize> = records.iter().map(|r| r.n).collect();
    if sizes != [256, 512, 1024, 2048] {
        return Err(format!(
            "benchmark sizes {sizes:?}, expected [256, 512, 1024, 2048]"
        ));
    }
    for record in &records {
        if record.residual_structured > 1e-8 || record.residual_lu > 1e-8 {
            return Err(format!(
                "benchmark residuals at N = {}: structured {:.3e}, lu {:.3e}",
                record.n, record.residual_structured, record.residual_lu
            ));
        }
    }
    let ratio = records[2].structured_seconds / records[2].lu_seconds;
    if ratio > 0.2 {
        return Err(format!(
            "structured/LU time ratio at N = 1024 is {ratio:.3}"
        ));
    }
    for record in &records[2..] {
        if record.structured_seconds >= record.lu_seconds {
            return Err(format!(
                "structured solve not strictly faster at N = {}: {:.6}s vs {:.6}s",
                record.n, record.structured_seconds, record.lu_seconds
            ));
        }
    }
    let structured_slope = fitted_exponent(&records, |r| r.structured_seconds);
    let lu_slope = fitted_exponent(&records, |r| r.lu_seconds);
    if structured_slope > 2.4 || lu_slope < 2.6 {
        println!(
            "criterion 7 warning: fitted exponents structured {structured_slope:.2}, lu {lu_slope:.2} (timing noise; not failing)"
        );
    }
    Ok(format!(
        "residuals and LU agreement hold for k ≤ 6; ratio at N=1024 is {ratio:.3}; exponents structured {structured_slope:.2}, lu {lu_slope:.2}"
    ))
}

/// Least-squares slope of log(time) against log(N).
fn fitted_exponent(records: &[BenchRecord], time: impl Fn(&BenchRecord) -> f64) -> f64 {
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| ((r.n as f64).ln(), time(r).max(1e-12).ln()))
        .collect();
    let n = points.len() as f64;
    let sum_x: f64 = points.iter().map(|(x, _)| x).sum();
    let sum_y: f64 = points.iter().map(|(_, y)| y).sum();
    let sum_xx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sum_xy: f64 = points.iter().map(|(x, y)| x * y).sum();
    (n * sum_xy - sum_x * sum_y) / (n * sum_xx - sum_x * sum_x)
}
