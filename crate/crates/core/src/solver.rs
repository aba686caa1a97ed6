//! Structured O(N²) solves for ladder-matrix systems, with an LU benchmark.
//!
//! Whenever the inverse kernel `Jᵗ Aᵗ J A = [A]·Id` holds (the J family under
//! the explicit seed variant), systems in `A` — or in the scaled-multiplier
//! products `BA`, `Aᵗ`, `AᵗBᵗ` with `B = b_k·J` — invert by applying `J`
//! twice (each O(N), `J` being a signed permutation) around one dense
//! mat-vec with `A` (O(N²)), then dividing by the bracket `[A]`:
//!
//! * `A·x = y`   →  `x = (σ/[A])·Jᵗ(A(Jy))`,
//! * `BA·x = y`  →  `x = (σ/(b_k·[A]))·Jᵗ(Ay)`,
//! * `Aᵗ·x = y`  →  `x = (1/[A])·Jᵗ(A(Jy))`,
//! * `AᵗBᵗ·x = y` → `x = (1/(b_k·[A]))·A(Jy)`,
//!
//! where `σ` is the involution sign at the ladder length (`Aᵗ = σA` folds
//! the transposed forms back onto the first two). [`bench_solve`] times this
//! path against dense LU on the same right-hand sides.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::identities::random_params;
use crate::linalg::{lu_solve, ComplexMatrix, LinalgError};
use crate::multipliers::{build_j, involution_sign, Family, JVariant};
use crate::states::{bracket_norm, build_matrix, StateParams};

/// Largest ladder length [`bench_solve`] accepts (`N = 2^{k+1} ≤ 4096`).
pub const MAX_BENCH_K: usize = 11;

/// `|[A]|` must exceed this times `max(1, ‖A‖)` for a solve to proceed.
const BRACKET_FLOOR: f64 = 1e-12;
/// `|b_k|` must exceed this for the forms that divide by it.
const TOP_COEFFICIENT_FLOOR: f64 = 1e-12;
/// Benchmark draws are redrawn until `|[A]|` clears this, so the benchmark
/// measures speed rather than error amplification near singularity.
const BENCH_BRACKET_GATE: f64 = 1e-3;

/// CSV header emitted ahead of [`BenchRecord`] rows.
pub const BENCH_CSV_HEADER: &str = "N,structured_s,lu_s,res_structured,res_lu";

/// Which structured system to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveForm {
    /// `A·x = y`.
    A,
    /// `(b_k·J)·A·x = y`.
    BA,
    /// `Aᵗ·x = y`.
    At,
    /// `Aᵗ·(b_k·J)ᵗ·x = y`.
    AtBt,
}

impl std::fmt::Display for SolveForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self {
            SolveForm::A => "A",
            SolveForm::BA => "BA",
            SolveForm::At => "At",
            SolveForm::AtBt => "AtBt",
        };
        write!(f, "{tag}")
    }
}

impl std::str::FromStr for SolveForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(SolveForm::A),
            "BA" => Ok(SolveForm::BA),
            "At" => Ok(SolveForm::At),
            "AtBt" => Ok(SolveForm::AtBt),
            other => Err(format!(
                "unknown solve form {other:?}; expected A, BA, At, or AtBt"
            )),
        }
    }
}

/// One benchmark measurement at size `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    /// System size `N = 2^{k+1}`.
    #[serde(rename = "N")]
    pub n: usize,
    /// Median wall time of the structured solve (includes building `A`).
    #[serde(rename = "structured_s")]
    pub structured_seconds: f64,
    /// Median wall time of the dense LU solve (matrix prebuilt).
    #[serde(rename = "lu_s")]
    pub lu_seconds: f64,
    /// `‖A·x − y‖₂ / ‖y‖₂` for the structured solution.
    #[serde(rename = "res_structured")]
    pub residual_structured: f64,
    /// `‖A·x − y‖₂ / ‖y‖₂` for the LU solution.
    #[serde(rename = "res_lu")]
    pub residual_lu: f64,
}

impl BenchRecord {
    /// The record as one CSV row under [`BENCH_CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.n,
            self.structured_seconds,
            self.lu_seconds,
            self.residual_structured,
            self.residual_lu
        )
    }
}

/// Failures of the structured solver and its benchmark harness.
#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    /// `[A]` is numerically zero, so the structured inverse does not exist.
    #[error("singular bracket: |[A]| = {magnitude:.3e} is below the threshold {threshold:.3e}")]
    SingularBracket {
        /// `|[A]|` for the rejected parameters.
        magnitude: f64,
        /// The floor it had to clear.
        threshold: f64,
    },
    /// The top ladder coefficient is numerically zero but the requested form
    /// divides by it.
    #[error("top ladder coefficient is numerically zero (|b_k| = {magnitude:.3e}); forms BA and AtBt divide by it")]
    ZeroTopCoefficient {
        /// `|b_k|` for the rejected parameters.
        magnitude: f64,
    },
    /// The right-hand side has the wrong length.
    #[error("right-hand side has length {got}, expected {expected}")]
    DimensionMismatch {
        /// Expected length `N`.
        expected: usize,
        /// Actual length.
        got: usize,
    },
    /// The parameters use a J-seed variant whose tower does not satisfy the
    /// inverse kernel, so no structured inverse is available.
    #[error("the structured inverse requires the explicit J seed; the {variant} variant does not satisfy the inverse kernel")]
    UnsupportedVariant {
        /// The rejected variant.
        variant: JVariant,
    },
    /// The structured inverse rests on the J-multiplier kernel; other
    /// families do not satisfy it.
    #[error("the structured inverse is only available for the J family, got {family}")]
    UnsupportedFamily {
        /// The rejected family.
        family: Family,
    },
    /// Benchmark level out of range.
    #[error("k must be between 1 and {max} (N = 2^(k+1) capped at 4096), got {k}")]
    LevelOutOfRange {
        /// The rejected level.
        k: usize,
        /// Largest accepted level.
        max: usize,
    },
    /// The benchmark needs at least one repetition.
    #[error("reps must be at least 1")]
    ZeroReps,
    /// The LU reference path failed.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn scaled(v: Vec<Complex64>, factor: Complex64) -> Vec<Complex64> {
    v.into_iter().map(|z| factor * z).collect()
}

fn top_coefficient(params: &StateParams) -> Result<Complex64, SolverError> {
    let (b_top, _) = *params.ladder().last().expect("ladder is nonempty");
    if b_top.norm() <= TOP_COEFFICIENT_FLOOR {
        return Err(SolverError::ZeroTopCoefficient {
            magnitude: b_top.norm(),
        });
    }
    Ok(b_top)
}

/// Solves the system named by `form` in O(N²).
///
/// Only the J family under the explicit seed variant is accepted: the
/// inverse formulas rest on the kernel `Jᵗ Aᵗ J A = [A]·Id`, which the
/// identity suite shows holds for that tower and fails for the recursive
/// variant and for the I family.
///
/// # Errors
/// [`SolverError::UnsupportedFamily`] / [`SolverError::UnsupportedVariant`]
/// for constructions without the kernel;
/// [`SolverError::DimensionMismatch`] for a wrong-length `y`;
/// [`SolverError::SingularBracket`] when `|[A]| ≤ 1e−12·max(1, ‖A‖)`;
/// [`SolverError::ZeroTopCoefficient`] when forms `BA`/`AtBt` divide by a
/// vanishing `b_k`.
pub fn structured_solve(
    params: &StateParams,
    y: &[Complex64],
    form: SolveForm,
) -> Result<Vec<Complex64>, SolverError> {
    if params.family() != Family::J {
        return Err(SolverError::UnsupportedFamily {
            family: params.family(),
        });
    }
    if params.j_variant() != JVariant::ExplicitJ4 {
        return Err(SolverError::UnsupportedVariant {
            variant: params.j_variant(),
        });
    }
    let n = params.n();
    if y.len() != n {
        return Err(SolverError::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let bn = bracket_norm(params);
    let threshold = BRACKET_FLOOR * bn.norm_sq.max(1.0);
    if bn.bracket.norm() <= threshold {
        return Err(SolverError::SingularBracket {
            magnitude: bn.bracket.norm(),
            threshold,
        });
    }

    let sigma = Complex64::new(involution_sign(params.k()), 0.0);
    let j = build_j(params.k() + 1, JVariant::ExplicitJ4)
        .expect("ladder-length cap keeps multiplier levels in range");
    let a = build_matrix(params);

    Ok(match form {
        SolveForm::A => scaled(
            j.apply_transpose(&a.mat_vec(&j.apply(y))),
            sigma / bn.bracket,
        ),
        SolveForm::BA => scaled(
            j.apply_transpose(&a.mat_vec(y)),
            sigma / (top_coefficient(params)? * bn.bracket),
        ),
        SolveForm::At => scaled(
            j.apply_transpose(&a.mat_vec(&j.apply(y))),
            Complex64::ONE / bn.bracket,
        ),
        SolveForm::AtBt => scaled(
            a.mat_vec(&j.apply(y)),
            Complex64::ONE / (top_coefficient(params)? * bn.bracket),
        ),
    })
}

fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖A·x − y‖₂ / ‖y‖₂` (absolute when `y = 0`).
fn relative_residual(a: &ComplexMatrix, x: &[Complex64], y: &[Complex64]) -> f64 {
    let image = a.mat_vec(x);
    let defect: f64 = image
        .iter()
        .zip(y)
        .map(|(got, want)| (got - want).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = vector_norm(y);
    if scale > 0.0 {
        defect / scale
    } else {
        defect
    }
}

fn median(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2.0
    }
}

/// Benchmarks the structured solve against dense LU at each requested level.
///
/// For each `k` the harness draws one well-conditioned parameter set
/// (`|[A]| ≥ 1e−3`, redrawing as needed) and one right-hand side, both
/// deterministic under `seed`, then medians `reps` timed runs of each
/// solver. The structured timing deliberately includes rebuilding `A` from
/// the parameters on every run (the conservative accounting); the LU timing
/// gets its dense matrix prebuilt. Residuals are relative to `‖y‖₂`.
///
/// Wall times depend on the machine; only the matrix/right-hand-side content
/// is deterministic.
///
/// # Errors
/// [`SolverError::ZeroReps`]; [`SolverError::LevelOutOfRange`] for `k`
/// outside `1..=`[`MAX_BENCH_K`]; solver and LU failures are propagated
/// (unreachable for gated draws).
pub fn bench_solve(
    k_list: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<BenchRecord>, SolverError> {
    if reps == 0 {
        return Err(SolverError::ZeroReps);
    }
    let mut records = Vec::with_capacity(k_list.len());
    for &k in k_list {
        if k == 0 || k > MAX_BENCH_K {
            return Err(SolverError::LevelOutOfRange {
                k,
                max: MAX_BENCH_K,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let params = loop {
            let candidate = random_params(Family::J, k, &mut rng);
            if bracket_norm(&candidate).bracket.norm() >= BENCH_BRACKET_GATE {
                break candidate;
            }
        };
        let n = params.n();
        let y: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();

        let mut structured_times = Vec::with_capacity(reps);
        let mut x_structured = Vec::new();
        for _ in 0..reps {
            let start = Instant::now();
            x_structured = structured_solve(&params, &y, SolveForm::A)?;
            structured_times.push(start.elapsed().as_secs_f64());
        }

        let a = build_matrix(&params);
        let mut lu_times = Vec::with_capacity(reps);
        let mut x_lu = Vec::new();
        for _ in 0..reps {
            let start = Instant::now();
            x_lu = lu_solve(&a, &y)?;
            lu_times.push(start.elapsed().as_secs_f64());
        }

        records.push(BenchRecord {
            n,
            structured_seconds: median(structured_times),
            lu_seconds: median(lu_times),
            residual_structured: relative_residual(&a, &x_structured, &y),
            residual_lu: relative_residual(&a, &x_lu, &y),
        });
    }
    Ok(records)
}
