//! Concurrence and entanglement of formation for the ladder-built states.
//!
//! A ladder parameter set defines a pure bipartite state whose coefficient
//! matrix is the ladder matrix `A` (scaled to unit Frobenius norm). Because
//! `AA†` has at most two distinct eigenvalues, everything entanglement-related
//! collapses to closed formulas:
//!
//! * the generalized concurrence of the pure state is `d = 2^{k+1}·|[A]|`
//!   ([`concurrence_pure`]), equivalently `d = 2n·√(λ₁λ₂)` from the reduced
//!   spectrum ([`spectral_summary`]);
//! * the same number is a quadratic form `|⟨ψ|p ψ*⟩|` for a fixed signed
//!   pairing matrix `p` ([`build_p`], [`concurrence_pform`]);
//! * entanglement of formation follows from `d` alone
//!   ([`eof_from_concurrence`]), cross-checkable against the reduced-state
//!   entropy ([`eof_spectral`]);
//! * for mixed states assembled from such pure states
//!   ([`assemble_density`]), the decomposition-minimum concurrence comes from
//!   the singular spectrum of `√ρ·p·ρ*·p·√ρ` ([`mixed_concurrence`]), with
//!   two deliberately independent numerical routes.
//!
//! A legacy 4×4 single-parameter family with its own 16×16 pairing matrix is
//! kept alongside ([`build_p_legacy16`], [`concurrence_legacy`]).

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::identities::random_params;
use crate::linalg::{hermitian_eigensystem, psd_sqrt, ComplexMatrix, LinalgError};
use crate::multipliers::{build_j, Family, JVariant};
use crate::states::{
    bracket_norm, build_matrix, normalize, partial_trace_rho1, PureState, StateError, StateParams,
};

/// Largest ladder length [`build_p`] supports (a 4096×4096 pairing matrix).
pub const MAX_P_K: usize = 5;

/// Relative tolerance for the pairing matrix's built-in oracle check.
const SELF_VERIFY_TOL: f64 = 1e-10;
/// Seed for the deterministic draws behind that oracle check.
const SELF_VERIFY_SEED: u64 = 0x7061_6972;
/// Number of oracle draws per level.
const SELF_VERIFY_DRAWS: usize = 20;

/// Reconstruction bound for eigendecompositions in this module.
const EIGEN_RECON_TOL: f64 = 1e-10;
/// Reduced-state eigenvalues below this are dropped from entropies.
const ENTROPY_FLOOR: f64 = 1e-14;
/// Singular values below `1e-6·Ω₁` are roundoff artifacts of the doubled
/// spectrum computation and are dropped before the alternating sum.
const OMEGA_FLOOR_FACTOR: f64 = 1e-6;

/// Failures in the entanglement pipeline.
#[derive(Debug, thiserror::Error)]
pub enum EntanglementError {
    /// Requested pairing level outside `1..=`[`MAX_P_K`].
    #[error("k must be between 1 and {max}, got {k}")]
    LevelOutOfRange {
        /// The rejected level.
        k: usize,
        /// Largest supported level.
        max: usize,
    },
    /// The pairing matrix failed its own oracle check — the sign set does
    /// not reproduce the bracket concurrence at this level.
    #[error("pairing self-verification failed: relative residual {residual:.3e} exceeds {tolerance:.0e}")]
    SelfVerificationFailed {
        /// Worst relative residual observed.
        residual: f64,
        /// The bound it had to meet.
        tolerance: f64,
    },
    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Dimension implied by the first operand.
        expected: usize,
        /// Dimension found on the second.
        got: usize,
    },
    /// Concurrence outside `[0, 1]` beyond tolerance.
    #[error("concurrence must lie in [0, 1] (tolerance 1e-12), got {d}")]
    ConcurrenceOutOfRange {
        /// The rejected value.
        d: f64,
    },
    /// The degeneracy parameter must be positive.
    #[error("degeneracy n must be at least 1")]
    ZeroDegeneracy,
    /// Legacy-family parameters must come pre-normalized.
    #[error("parameters must give a unit-Frobenius matrix, got squared norm {norm_sq}")]
    NotNormalized {
        /// The squared Frobenius norm found.
        norm_sq: f64,
    },
    /// A probability was negative.
    #[error("probabilities must be nonnegative, got {value}")]
    NegativeProbability {
        /// The offending weight.
        value: f64,
    },
    /// The ensemble weights do not form a distribution.
    #[error("probabilities must sum to 1 within 1e-12, got {sum}")]
    ProbabilitySum {
        /// The actual sum.
        sum: f64,
    },
    /// An ensemble needs at least one member.
    #[error("ensemble must have at least one member")]
    EmptyEnsemble,
    /// The state dimension is not `2^{k+1}` for any supported `k ≥ 1`.
    #[error("subsystem dimension {n} is not a ladder dimension (expected 2^(k+1) with k >= 1)")]
    DimensionNotSupported {
        /// The offending subsystem dimension.
        n: usize,
    },
    /// A density matrix failed Hermiticity validation.
    #[error("density matrix is not Hermitian: defect {defect:.3e}")]
    NotHermitianDensity {
        /// Max-norm of `ρ − ρ†`.
        defect: f64,
    },
    /// A density matrix failed the unit-trace validation.
    #[error("density matrix trace must be 1, got {re}{im:+}i")]
    TraceNotOne {
        /// Real part of the trace.
        re: f64,
        /// Imaginary part of the trace.
        im: f64,
    },
    /// A density matrix has an eigenvalue below `−1e−10`.
    #[error("density matrix has negative eigenvalue {value:.3e}")]
    NegativeEigenvalue {
        /// The offending eigenvalue.
        value: f64,
    },
    /// An underlying dense-linear-algebra failure.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// An underlying parameter/state failure.
    #[error(transparent)]
    State(#[from] StateError),
}

/// The two-eigenvalue shape of a ladder state's reduced density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    /// Multiplicity of each eigenvalue cluster (`2^k`).
    pub n: usize,
    /// Mean of the top cluster.
    pub lambda1: f64,
    /// Mean of the bottom cluster.
    pub lambda2: f64,
    /// The diagonal determinant `(λ₁λ₂)^n`.
    #[serde(rename = "D")]
    pub big_d: f64,
    /// Generalized concurrence `2n·√(λ₁λ₂)`.
    pub d: f64,
    /// Entanglement of formation in bits (reduced-state entropy).
    #[serde(rename = "E")]
    pub e: f64,
}

/// One convex decomposition of a mixed state into pure states.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    /// Validates weights (nonnegative, summing to 1 within `1e−12`) and
    /// dimensions (all members alike).
    ///
    /// # Errors
    /// [`EntanglementError::EmptyEnsemble`],
    /// [`EntanglementError::NegativeProbability`],
    /// [`EntanglementError::ProbabilitySum`], or
    /// [`EntanglementError::DimensionMismatch`].
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self, EntanglementError> {
        let first = members
            .first()
            .ok_or(EntanglementError::EmptyEnsemble)?
            .1
            .subsystem_dim();
        let mut sum = 0.0;
        for (weight, state) in &members {
            if *weight < 0.0 {
                return Err(EntanglementError::NegativeProbability { value: *weight });
            }
            if state.subsystem_dim() != first {
                return Err(EntanglementError::DimensionMismatch {
                    expected: first * first,
                    got: state.amplitudes().len(),
                });
            }
            sum += weight;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(EntanglementError::ProbabilitySum { sum });
        }
        Ok(Ensemble { members })
    }

    /// The weighted members.
    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    /// Shared subsystem dimension `N` (full states live in `N²`).
    pub fn subsystem_dim(&self) -> usize {
        self.members[0].1.subsystem_dim()
    }
}

/// A validated mixed state over a ladder-dimension Hilbert space.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    k: usize,
}

impl DensityMatrix {
    /// Validates shape (`2^{2k+2}` square), Hermiticity (`1e−10`), unit
    /// trace (`1e−10`), and spectrum (eigenvalues ≥ `−1e−10`).
    ///
    /// # Errors
    /// [`EntanglementError::DimensionMismatch`] on a wrong shape, otherwise
    /// the specific validation failure.
    pub fn new(matrix: ComplexMatrix, k: usize) -> Result<Self, EntanglementError> {
        let q = 1usize << (2 * k + 2);
        if !matrix.is_square() || matrix.rows() != q {
            return Err(EntanglementError::DimensionMismatch {
                expected: q,
                got: matrix.rows(),
            });
        }
        let defect = matrix.max_diff(&matrix.adjoint());
        if defect > 1e-10 {
            return Err(EntanglementError::NotHermitianDensity { defect });
        }
        let trace = matrix.trace();
        if (trace - Complex64::ONE).norm() > 1e-10 {
            return Err(EntanglementError::TraceNotOne {
                re: trace.re,
                im: trace.im,
            });
        }
        let eigen = hermitian_eigensystem(&matrix, EIGEN_RECON_TOL)?;
        if let Some(&min) = eigen.values.last() {
            if min < -1e-10 {
                return Err(EntanglementError::NegativeEigenvalue { value: min });
            }
        }
        Ok(DensityMatrix { matrix, k })
    }

    /// The validated matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Ladder length of the underlying family space.
    pub fn k(&self) -> usize {
        self.k
    }
}

/// Which spectrum route [`mixed_concurrence`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixedRoute {
    /// Eigenvalues of the explicit PSD square root `R = √(√ρ·p·ρ*·p·√ρ)`.
    Hermitian,
    /// Square roots of the eigenvalues of `√ρ·p·ρ*·p·√ρ` itself (similar to
    /// `ρ·p·ρ*·p`, so these are that matrix's root-eigenvalues).
    Direct,
}

impl std::fmt::Display for MixedRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MixedRoute::Hermitian => write!(f, "hermitian"),
            MixedRoute::Direct => write!(f, "direct"),
        }
    }
}

/// Output of [`mixed_concurrence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedConcurrenceResult {
    /// Concurrence `max(0, Ω₁ − Σ_{i≥2} Ω_i)`.
    pub d: f64,
    /// Entanglement of formation from `d`.
    #[serde(rename = "E")]
    pub e: f64,
    /// The singular spectrum, descending, after the roundoff floor.
    pub omegas: Vec<f64>,
}

/// The signed pairing behind `p`: row `I` holds `sign[I]` in column
/// `col[I]`, nothing else.
struct Pairing {
    col: Vec<usize>,
    sign: Vec<f64>,
}

impl Pairing {
    /// `⟨ψ|p ψ*⟩ = Σ_I ψ_I* · sign_I · ψ_{col_I}*` in O(Q).
    fn quadratic_form(&self, amplitudes: &[Complex64]) -> Complex64 {
        amplitudes
            .iter()
            .enumerate()
            .map(|(i, amp)| self.sign[i] * amp.conj() * amplitudes[self.col[i]].conj())
            .sum()
    }

    fn dense(&self) -> ComplexMatrix {
        let q = self.col.len();
        let mut m = ComplexMatrix::zeros(q, q);
        for i in 0..q {
            m[(i, self.col[i])] = Complex64::new(self.sign[i], 0.0);
        }
        m
    }
}

/// `p = J ⊗ J` at level `k+1`, as row/sign lists.
fn pairing_structure(k: usize) -> Pairing {
    let j = build_j(k + 1, JVariant::ExplicitJ4).expect("level bounded by MAX_P_K + 1");
    let n = j.size();
    let mut col = Vec::with_capacity(n * n);
    let mut sign = Vec::with_capacity(n * n);
    for i in 0..n {
        for l in 0..n {
            col.push(j.column_of_row(i) * n + j.column_of_row(l));
            sign.push(j.sign_of_row(i) * j.sign_of_row(l));
        }
    }
    Pairing { col, sign }
}

/// Oracle check: on 20 deterministic normalized draws, `|⟨ψ|p ψ*⟩|` must
/// equal `2^{k+1}·|[A]|` within [`SELF_VERIFY_TOL`].
fn self_verify_pairing(pairing: &Pairing, k: usize) -> Result<(), EntanglementError> {
    let mut rng = ChaCha8Rng::seed_from_u64(SELF_VERIFY_SEED);
    rng.set_stream(k as u64);
    for _ in 0..SELF_VERIFY_DRAWS {
        let params = normalize(&random_params(Family::J, k, &mut rng))?;
        let amplitudes = build_matrix(&params);
        let lhs = pairing.quadratic_form(amplitudes.entries()).norm();
        let rhs = 2.0f64.powi(k as i32 + 1) * bracket_norm(&params).bracket.norm();
        let residual = (lhs - rhs).abs() / rhs.max(1.0);
        if residual > SELF_VERIFY_TOL {
            return Err(EntanglementError::SelfVerificationFailed {
                residual,
                tolerance: SELF_VERIFY_TOL,
            });
        }
    }
    Ok(())
}

/// Builds the `2^{2k+2} × 2^{2k+2}` pairing matrix `p` whose quadratic form
/// `|⟨ψ|p ψ*⟩|` equals the bracket concurrence `2^{k+1}·|[A]|` for every
/// ladder state at length `k`.
///
/// `p` is `J ⊗ J` for the level-`k+1` multiplier (the seed variant that
/// passes the identity suite), which makes it symmetric with `±1` entries on
/// the anti-diagonal only. The builder never returns an unchecked matrix: it
/// first replays 20 deterministic draws against the bracket oracle and
/// errors on any mismatch.
///
/// # Errors
/// [`EntanglementError::LevelOutOfRange`] outside `1..=`[`MAX_P_K`];
/// [`EntanglementError::SelfVerificationFailed`] if the oracle check fails.
pub fn build_p(k: usize) -> Result<ComplexMatrix, EntanglementError> {
    if k == 0 || k > MAX_P_K {
        return Err(EntanglementError::LevelOutOfRange { k, max: MAX_P_K });
    }
    let pairing = pairing_structure(k);
    self_verify_pairing(&pairing, k)?;
    Ok(pairing.dense())
}

/// The 16×16 pairing matrix of the legacy 4×4 family: symmetric, entries
/// (1-based; `+` unless marked) at
/// `(1,16) (2,15) −(3,14) (4,10) (5,12) (6,11) (7,13) −(8,9)` and their
/// mirrors. Unlike the ladder pairings it is not purely anti-diagonal.
pub fn build_p_legacy16() -> ComplexMatrix {
    // 0-based upper pairs; mirrors fill the transpose.
    const PAIRS: [(usize, usize, f64); 8] = [
        (0, 15, 1.0),
        (1, 14, 1.0),
        (2, 13, -1.0),
        (3, 9, 1.0),
        (4, 11, 1.0),
        (5, 10, 1.0),
        (6, 12, 1.0),
        (7, 8, -1.0),
    ];
    let mut p = ComplexMatrix::zeros(16, 16);
    for &(i, j, sign) in &PAIRS {
        p[(i, j)] = Complex64::new(sign, 0.0);
        p[(j, i)] = Complex64::new(sign, 0.0);
    }
    p
}

/// Bracket-route concurrence of the pure state with these parameters:
/// `d = 2^{k+1}·|[A]|`. Lies in `[0, 1]` when the parameters are normalized.
pub fn concurrence_pure(params: &StateParams) -> f64 {
    2.0f64.powi(params.k() as i32 + 1) * bracket_norm(params).bracket.norm()
}

/// Pairing-route concurrence `|Σ_{I,J} ψ_I* p_{IJ} ψ_J*|` for any state and
/// pairing matrix of matching dimension.
///
/// # Errors
/// [`EntanglementError::DimensionMismatch`] when `p` is not `Q×Q` for the
/// state's `Q` amplitudes.
pub fn concurrence_pform(state: &PureState, p: &ComplexMatrix) -> Result<f64, EntanglementError> {
    let q = state.amplitudes().len();
    if !p.is_square() || p.rows() != q {
        return Err(EntanglementError::DimensionMismatch {
            expected: q,
            got: p.rows(),
        });
    }
    let conj: Vec<Complex64> = state.amplitudes().iter().map(|z| z.conj()).collect();
    let image = p.mat_vec(&conj);
    let form: Complex64 = conj.iter().zip(&image).map(|(a, b)| a * b).sum();
    Ok(form.norm())
}

/// `−t·log₂(t)` with the `0·log 0 = 0` convention.
fn entropy_term(t: f64) -> f64 {
    if t > 0.0 {
        -t * t.log2()
    } else {
        0.0
    }
}

/// Entanglement of formation (bits) from a concurrence `d` and cluster
/// multiplicity `n`, via the closed formula for the doubly-degenerate
/// spectrum: `E = n·(h(x) + h(1/n − x))` with
/// `x = (1 + √(1 − d²))/(2n)` and `h(t) = −t·log₂ t`.
///
/// # Errors
/// [`EntanglementError::ConcurrenceOutOfRange`] if `d < −1e−12` or
/// `d > 1 + 1e−12` (values inside the tolerance band are clamped);
/// [`EntanglementError::ZeroDegeneracy`] if `n = 0`.
pub fn eof_from_concurrence(d: f64, n: usize) -> Result<f64, EntanglementError> {
    if n == 0 {
        return Err(EntanglementError::ZeroDegeneracy);
    }
    if !(-1e-12..=1.0 + 1e-12).contains(&d) {
        return Err(EntanglementError::ConcurrenceOutOfRange { d });
    }
    let d = d.clamp(0.0, 1.0);
    let n_f = n as f64;
    let x = (1.0 + (1.0 - d * d).sqrt()) / (2.0 * n_f);
    Ok(n_f * (entropy_term(x) + entropy_term(1.0 / n_f - x)))
}

/// Entanglement of formation (bits) as the entropy of the reduced state:
/// `E = −Tr(ρ₁·log₂ ρ₁)`, dropping eigenvalues below `1e−14`. This route
/// never sees the bracket, so it is an independent oracle for
/// [`eof_from_concurrence`] on family states.
///
/// # Errors
/// Any eigensolver failure, as [`EntanglementError::Linalg`].
pub fn eof_spectral(state: &PureState) -> Result<f64, EntanglementError> {
    let rho1 = partial_trace_rho1(state);
    let eigen = hermitian_eigensystem(&rho1, EIGEN_RECON_TOL)?;
    Ok(eigen
        .values
        .iter()
        .filter(|&&mu| mu >= ENTROPY_FLOOR)
        .map(|&mu| entropy_term(mu))
        .sum())
}

/// Cluster means, determinant `D`, concurrence, and entropy of a ladder
/// state's reduced density matrix.
///
/// # Errors
/// [`EntanglementError::DimensionNotSupported`] when the subsystem dimension
/// is not `2^{k+1}`; eigensolver failures as [`EntanglementError::Linalg`].
pub fn spectral_summary(state: &PureState) -> Result<SpectralSummary, EntanglementError> {
    let dim = state.subsystem_dim();
    if dim < 4 || !dim.is_power_of_two() {
        return Err(EntanglementError::DimensionNotSupported { n: dim });
    }
    let n = dim / 2;
    let rho1 = partial_trace_rho1(state);
    let eigen = hermitian_eigensystem(&rho1, EIGEN_RECON_TOL)?;
    let lambda1 = eigen.values[..n].iter().sum::<f64>() / n as f64;
    let lambda2 = eigen.values[n..].iter().sum::<f64>() / n as f64;
    let product = (lambda1 * lambda2).max(0.0);
    let e = eigen
        .values
        .iter()
        .filter(|&&mu| mu >= ENTROPY_FLOOR)
        .map(|&mu| entropy_term(mu))
        .sum();
    Ok(SpectralSummary {
        n,
        lambda1,
        lambda2,
        big_d: product.powi(n as i32),
        d: (2.0 * n as f64 * product.sqrt()).min(1.0),
        e,
    })
}

/// `ρ = Σ pᵢ·|ψᵢ⟩⟨ψᵢ|`, validated as a [`DensityMatrix`].
///
/// # Errors
/// [`EntanglementError::DimensionNotSupported`] for non-ladder dimensions;
/// the [`DensityMatrix::new`] validations otherwise.
pub fn assemble_density(ensemble: &Ensemble) -> Result<DensityMatrix, EntanglementError> {
    let dim = ensemble.subsystem_dim();
    if dim < 4 || !dim.is_power_of_two() {
        return Err(EntanglementError::DimensionNotSupported { n: dim });
    }
    let k = dim.trailing_zeros() as usize - 1;
    let q = dim * dim;
    let mut rho = ComplexMatrix::zeros(q, q);
    for (weight, state) in ensemble.members() {
        let amps = state.amplitudes();
        for i in 0..q {
            for j in 0..q {
                rho[(i, j)] += weight * amps[i] * amps[j].conj();
            }
        }
    }
    DensityMatrix::new(rho, k)
}

/// Decomposition-minimum concurrence of a mixed state, plus its
/// entanglement of formation.
///
/// Both routes start from `M = √ρ·p·ρ*·p·√ρ` (symmetrized), whose spectrum
/// equals that of `ρ·p·ρ*·p` by similarity:
///
/// * [`MixedRoute::Hermitian`] forms `R = √M` explicitly and takes `R`'s
///   eigenvalues;
/// * [`MixedRoute::Direct`] takes `M`'s eigenvalues and square-roots them.
///
/// The descending `Ω_i` list is floored at `1e−6·Ω₁` (the doubled spectrum
/// produces that much roundoff around zero), then
/// `d = max(0, Ω₁ − Σ_{i≥2} Ω_i)` and `E = `[`eof_from_concurrence`]`(d, 2^k)`.
///
/// # Errors
/// [`EntanglementError::DimensionMismatch`] when `p` does not match `ρ`;
/// non-PSD inputs and eigensolver failures as [`EntanglementError::Linalg`].
pub fn mixed_concurrence(
    rho: &DensityMatrix,
    p: &ComplexMatrix,
    route: MixedRoute,
) -> Result<MixedConcurrenceResult, EntanglementError> {
    let q = rho.matrix().rows();
    if !p.is_square() || p.rows() != q {
        return Err(EntanglementError::DimensionMismatch {
            expected: q,
            got: p.rows(),
        });
    }
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let half = sqrt_rho
        .multiply(p)
        .multiply(&rho.matrix().conjugate())
        .multiply(p)
        .multiply(&sqrt_rho);
    let m = half.add(&half.adjoint()).scale(Complex64::new(0.5, 0.0));

    let raw: Vec<f64> = match route {
        MixedRoute::Hermitian => {
            let r = psd_sqrt(&m)?;
            hermitian_eigensystem(&r, EIGEN_RECON_TOL)?.values
        }
        MixedRoute::Direct => hermitian_eigensystem(&m, EIGEN_RECON_TOL)?
            .values
            .into_iter()
            .map(|lambda| lambda.max(0.0).sqrt())
            .collect(),
    };

    let top = raw.first().copied().unwrap_or(0.0).max(0.0);
    let omegas: Vec<f64> = raw
        .into_iter()
        .map(|w| w.max(0.0))
        .filter(|&w| w >= OMEGA_FLOOR_FACTOR * top && w > 0.0)
        .collect();
    let d = match omegas.split_first() {
        Some((first, rest)) => (first - rest.iter().sum::<f64>()).max(0.0),
        None => 0.0,
    };
    let e = eof_from_concurrence(d.min(1.0), 1 << rho.k())?;
    Ok(MixedConcurrenceResult { d, e, omegas })
}

/// The legacy 4×4 family matrix
///
/// ```text
/// (  0    b   a₁   b₁ )
/// ( −b    0   c₁   d₁ )
/// ( a₁   c₁    0   −e )
/// ( b₁   d₁    e    0 )
/// ```
///
/// whose flattening is the 16-amplitude state the legacy pairing acts on.
pub fn legacy_family_matrix(
    b: Complex64,
    a1: Complex64,
    b1: Complex64,
    c1: Complex64,
    d1: Complex64,
    e: Complex64,
) -> ComplexMatrix {
    let zero = Complex64::ZERO;
    ComplexMatrix::from_rows(&[
        vec![zero, b, a1, b1],
        vec![-b, zero, c1, d1],
        vec![a1, c1, zero, -e],
        vec![b1, d1, e, zero],
    ])
}

/// Closed-form concurrence of the legacy family: `d = 4·|b₁c₁ − a₁d₁ + b·e|`.
///
/// The parameters must already give a unit-Frobenius matrix, i.e.
/// `2(|b|²+|a₁|²+|b₁|²+|c₁|²+|d₁|²+|e|²) = 1` within `1e−10`; an all-zero
/// draw therefore fails here rather than returning a degenerate 0.
///
/// # Errors
/// [`EntanglementError::NotNormalized`].
pub fn concurrence_legacy(
    b: Complex64,
    a1: Complex64,
    b1: Complex64,
    c1: Complex64,
    d1: Complex64,
    e: Complex64,
) -> Result<f64, EntanglementError> {
    let norm_sq = 2.0
        * (b.norm_sqr()
            + a1.norm_sqr()
            + b1.norm_sqr()
            + c1.norm_sqr()
            + d1.norm_sqr()
            + e.norm_sqr());
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(EntanglementError::NotNormalized { norm_sq });
    }
    Ok(4.0 * (b1 * c1 - a1 * d1 + b * e).norm())
}
