//! Parameterized coefficient matrices and the pure states they define.
//!
//! A parameter set is a 2x2 core `[[a, -c], [c, d]]` plus a ladder of pairs
//! `(b_i, c_i)`; each ladder step doubles the matrix size by sandwiching the
//! previous matrix between scaled multiplier blocks. A ladder of length `k`
//! yields an `N x N` matrix with `N = 2^(k+1)`, and flattening that matrix
//! gives a bipartite pure state of two `N`-dimensional subsystems whose
//! reduced density matrix has at most two distinct eigenvalues — the
//! property every closed formula downstream relies on.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::ComplexMatrix;
use crate::multipliers::{build_i, build_j, involution_sign, Family, JVariant, Multiplier};

/// Largest supported ladder length (matrices up to 4096 x 4096).
pub const MAX_LADDER: usize = 11;

/// Errors from parameter validation and state construction.
#[derive(Debug, Error)]
pub enum StateError {
    #[error("ladder must contain at least one (b, c) pair")]
    EmptyLadder,

    #[error("ladder length {k} exceeds the supported maximum {max}")]
    LadderTooLong { k: usize, max: usize },

    #[error("parameter {name} is not finite")]
    NonFinite { name: String },

    #[error("zero matrix cannot be normalized")]
    ZeroMatrix,

    #[error("state is not normalized: |trace(AA\u{2020}) - 1| = {defect:.3e}")]
    NotNormalized { defect: f64 },

    #[error("amplitude vector length {len} is not a square of an even dimension")]
    BadAmplitudeCount { len: usize },
}

/// Parameters of one family matrix: the 2x2 core `(a, c, d)`, the ladder of
/// `(b_i, c_i)` pairs, the family tag, and the J-seed variant used when the
/// family is J.
///
/// Serializes as `{"family":"J","a":[re,im],"c":[re,im],"d":[re,im],
/// "ladder":[[[re,im],[re,im]],...],"j_variant":"explicit-j4"}`; `j_variant`
/// may be omitted and defaults to `explicit-j4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct StateParams {
    family: Family,
    a: Complex64,
    c: Complex64,
    d: Complex64,
    ladder: Vec<(Complex64, Complex64)>,
    j_variant: JVariant,
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    family: Family,
    a: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
    ladder: Vec<[[f64; 2]; 2]>,
    #[serde(default)]
    j_variant: JVariant,
}

impl TryFrom<ParamsRepr> for StateParams {
    type Error = String;

    fn try_from(r: ParamsRepr) -> Result<Self, String> {
        let pair = |[re, im]: [f64; 2]| Complex64::new(re, im);
        StateParams::new(
            r.family,
            pair(r.a),
            pair(r.c),
            pair(r.d),
            r.ladder.iter().map(|&[b, c]| (pair(b), pair(c))).collect(),
        )
        .map(|p| p.with_j_variant(r.j_variant))
        .map_err(|e| e.to_string())
    }
}

impl From<StateParams> for ParamsRepr {
    fn from(p: StateParams) -> ParamsRepr {
        let pair = |z: Complex64| [z.re, z.im];
        ParamsRepr {
            family: p.family,
            a: pair(p.a),
            c: pair(p.c),
            d: pair(p.d),
            ladder: p.ladder.iter().map(|&(b, c)| [pair(b), pair(c)]).collect(),
            j_variant: p.j_variant,
        }
    }
}

impl StateParams {
    /// Validates and stores a parameter set (default J-seed variant).
    ///
    /// # Errors
    /// Empty or over-long ladder, or any non-finite component.
    pub fn new(
        family: Family,
        a: Complex64,
        c: Complex64,
        d: Complex64,
        ladder: Vec<(Complex64, Complex64)>,
    ) -> Result<Self, StateError> {
        if ladder.is_empty() {
            return Err(StateError::EmptyLadder);
        }
        if ladder.len() > MAX_LADDER {
            return Err(StateError::LadderTooLong {
                k: ladder.len(),
                max: MAX_LADDER,
            });
        }
        let finite = |name: &str, z: Complex64| {
            if z.re.is_finite() && z.im.is_finite() {
                Ok(())
            } else {
                Err(StateError::NonFinite { name: name.into() })
            }
        };
        finite("a", a)?;
        finite("c", c)?;
        finite("d", d)?;
        for (i, &(b, cc)) in ladder.iter().enumerate() {
            finite(&format!("b{}", i + 1), b)?;
            finite(&format!("c{}", i + 1), cc)?;
        }
        Ok(StateParams {
            family,
            a,
            c,
            d,
            ladder,
            j_variant: JVariant::default(),
        })
    }

    pub fn with_j_variant(mut self, variant: JVariant) -> Self {
        self.j_variant = variant;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn d(&self) -> Complex64 {
        self.d
    }

    pub fn ladder(&self) -> &[(Complex64, Complex64)] {
        &self.ladder
    }

    pub fn j_variant(&self) -> JVariant {
        self.j_variant
    }

    /// Ladder length `k`.
    pub fn k(&self) -> usize {
        self.ladder.len()
    }

    /// Built matrix dimension `N = 2^(k+1)`.
    pub fn n(&self) -> usize {
        1 << (self.k() + 1)
    }

    /// Returns a copy with every parameter multiplied by `t`.
    pub fn scaled(&self, t: Complex64) -> StateParams {
        StateParams {
            family: self.family,
            a: self.a * t,
            c: self.c * t,
            d: self.d * t,
            ladder: self.ladder.iter().map(|&(b, c)| (b * t, c * t)).collect(),
            j_variant: self.j_variant,
        }
    }
}

/// The bracket `[A]` (complex quadratic form) and norm `‖A‖` (real
/// quadratic form) of a parameter set. `2^(k+1)·|bracket|` is the
/// generalized concurrence of the normalized state; `2^k·norm_sq` is
/// `trace(AA†)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BracketNorm {
    pub bracket: Complex64,
    pub norm_sq: f64,
}

/// Computes `[A]` and `‖A‖` from the parameters alone (no matrix built).
///
/// Both families share the base values `[A₄] = b₁c₁ + ad + c²` and
/// `‖A₄‖ = |b₁|² + |c₁|² + |a|² + 2|c|² + |d|²`. Each further ladder step
/// adds `|b_i|² + |c_i|²` to the norm; the bracket accumulates as
/// `[A] ← sign(i)·b_i·c_i − [A]` for the J family (sign from
/// [`involution_sign`]) and as `[A] ← b₁c₁ + ad + c² − Σ_{i≥2} b_i c_i` in
/// closed form for the I family.
pub fn bracket_norm(p: &StateParams) -> BracketNorm {
    let (a, c, d) = (p.a, p.c, p.d);
    let (b1, c1) = p.ladder[0];
    let mut bracket = b1 * c1 + a * d + c * c;
    let mut norm_sq =
        b1.norm_sqr() + c1.norm_sqr() + a.norm_sqr() + 2.0 * c.norm_sqr() + d.norm_sqr();
    for (i, &(bi, ci)) in p.ladder.iter().enumerate().skip(1) {
        let step = i + 1;
        norm_sq += bi.norm_sqr() + ci.norm_sqr();
        bracket = match p.family {
            Family::J => involution_sign(step) * bi * ci - bracket,
            Family::I => bracket - bi * ci,
        };
    }
    BracketNorm { bracket, norm_sq }
}

/// Builds the `N x N` coefficient matrix for the parameter set.
///
/// The first ladder step is shared by both families (it uses the 2x2 J
/// seed); from step 2 on, the J family sandwiches with J multipliers of the
/// parameter set's variant and alternating transpose sign, while the I
/// family uses I multipliers with a fixed block pattern.
pub fn build_matrix(p: &StateParams) -> ComplexMatrix {
    let mut a = ComplexMatrix::from_rows(&[vec![p.a, -p.c], vec![p.c, p.d]]);
    for (i, &(bi, ci)) in p.ladder.iter().enumerate() {
        let step = i + 1;
        a = match p.family {
            Family::J => {
                // Ladder lengths are capped at MAX_LADDER, so the level is
                // always in the multiplier builder's range.
                let j = build_j(step, p.j_variant).expect("level within range");
                grow_j(&a, &j, bi, ci, involution_sign(step))
            }
            Family::I if step == 1 => {
                let j = build_j(1, p.j_variant).expect("level within range");
                grow_j(&a, &j, bi, ci, involution_sign(1))
            }
            Family::I => {
                let m = build_i(step).expect("level within range");
                grow_i(&a, &m, bi, ci)
            }
        };
    }
    a
}

/// `[[b·J, A], [tau·Aᵗ, c·Jᵗ]]`
fn grow_j(
    a: &ComplexMatrix,
    j: &Multiplier,
    b: Complex64,
    c: Complex64,
    tau: f64,
) -> ComplexMatrix {
    let n = a.rows();
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    let jt = j.transposed();
    for r in 0..n {
        out[(r, j.column_of_row(r))] = b * j.sign_of_row(r);
        out[(n + r, n + jt.column_of_row(r))] = c * jt.sign_of_row(r);
        for col in 0..n {
            out[(r, n + col)] = a[(r, col)];
            out[(n + r, col)] = tau * a[(col, r)];
        }
    }
    out
}

/// `[[b·I, A], [-Aᵗ, c·I]]` (bottom-right block not transposed)
fn grow_i(a: &ComplexMatrix, m: &Multiplier, b: Complex64, c: Complex64) -> ComplexMatrix {
    let n = a.rows();
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        out[(r, m.column_of_row(r))] = b * m.sign_of_row(r);
        out[(n + r, n + m.column_of_row(r))] = c * m.sign_of_row(r);
        for col in 0..n {
            out[(r, n + col)] = a[(r, col)];
            out[(n + r, col)] = -a[(col, r)];
        }
    }
    out
}

/// Rescales all parameters by a real `t > 0` so that `trace(AA†) =
/// 2^k·‖A‖ = 1`, i.e. the flattened state has unit norm.
///
/// # Errors
/// [`StateError::ZeroMatrix`] when every parameter is zero.
pub fn normalize(p: &StateParams) -> Result<StateParams, StateError> {
    let bn = bracket_norm(p);
    let trace = (1u64 << p.k()) as f64 * bn.norm_sq;
    if trace == 0.0 {
        return Err(StateError::ZeroMatrix);
    }
    let t = 1.0 / trace.sqrt();
    if !t.is_finite() {
        return Err(StateError::NonFinite {
            name: "scale".into(),
        });
    }
    Ok(p.scaled(Complex64::new(t, 0.0)))
}

/// A bipartite pure state on two `n`-dimensional subsystems, stored as the
/// row-major flattening of its `n x n` coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Subsystem dimension `n`; the amplitude vector has length `n²`.
    pub fn subsystem_dim(&self) -> usize {
        self.n
    }

    /// Row-major amplitudes: index of `(i, j)` is `i·n + j`.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Reassembles the coefficient matrix the state was flattened from.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |i, j| self.amplitudes[i * self.n + j])
    }
}

/// Flattens a square coefficient matrix into a pure state, requiring unit
/// normalization (`trace(AA†) = 1` within 1e-10).
///
/// # Errors
/// [`StateError::NotNormalized`] when the squared amplitude sum is off by
/// more than 1e-10.
pub fn vectorize(a: &ComplexMatrix) -> Result<PureState, StateError> {
    assert!(a.is_square(), "coefficient matrix must be square");
    let total: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum();
    let defect = (total - 1.0).abs();
    if defect > 1e-10 {
        return Err(StateError::NotNormalized { defect });
    }
    Ok(PureState {
        n: a.rows(),
        amplitudes: a.entries().to_vec(),
    })
}

/// Reduced density matrix of the first subsystem: reshape the amplitudes
/// back to `A` and return `AA†` (Hermitian, trace 1).
pub fn partial_trace_rho1(s: &PureState) -> ComplexMatrix {
    let a = s.coefficient_matrix();
    a.multiply(&a.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn j_params(a: f64, c: f64, d: f64, ladder: &[(f64, f64)]) -> StateParams {
        StateParams::new(
            Family::J,
            re(a),
            re(c),
            re(d),
            ladder.iter().map(|&(b, cc)| (re(b), re(cc))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn size_four_matrix_has_expected_rows() {
        // Rows (0,b1,a,-c), (-b1,0,c,d), (-a,-c,0,-c1), (c,-d,c1,0).
        let p = j_params(1.0, 2.0, 3.0, &[(4.0, 5.0)]);
        let m = build_matrix(&p);
        let expected = ComplexMatrix::from_real_rows(&[
            vec![0.0, 4.0, 1.0, -2.0],
            vec![-4.0, 0.0, 2.0, 3.0],
            vec![-1.0, -2.0, 0.0, -5.0],
            vec![2.0, -3.0, 5.0, 0.0],
        ]);
        assert_eq!(m, expected);
    }

    #[test]
    fn j_family_transpose_sign() {
        for k in 1..=4 {
            let ladder: Vec<(f64, f64)> =
                (0..k).map(|i| (0.3 + i as f64, 1.1 - i as f64)).collect();
            let p = j_params(0.7, -0.2, 0.4, &ladder);
            let m = build_matrix(&p);
            let tau = involution_sign(k);
            let diff = m.transpose().max_diff(&m.scale(re(tau)));
            assert_eq!(diff, 0.0, "k={k}");
        }
    }

    #[test]
    fn base_bracket_and_norm() {
        // a=d=1/2, c=0, b1=c1=0: bracket = ad = 1/4, norm = 1/2.
        let p = j_params(0.5, 0.0, 0.5, &[(0.0, 0.0)]);
        let bn = bracket_norm(&p);
        assert_eq!(bn.bracket, re(0.25));
        assert_eq!(bn.norm_sq, 0.5);
    }

    #[test]
    fn bracket_recursion_alternates_signs() {
        // Ladder length 4: bracket = b4c4 - b3c3 - b2c2 - b1c1 - ad - c².
        let p = j_params(
            1.0,
            2.0,
            3.0,
            &[(1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (3.0, 1.0)],
        );
        let bn = bracket_norm(&p);
        let expected = 3.0 - 2.0 - 2.0 - 1.0 - 3.0 - 4.0;
        assert_eq!(bn.bracket, re(expected));
    }

    #[test]
    fn i_family_bracket_closed_form() {
        let p = StateParams::new(
            Family::I,
            re(1.0),
            re(2.0),
            re(-1.0),
            vec![(re(1.0), re(3.0)), (re(2.0), re(2.0)), (re(1.0), re(-1.0))],
        )
        .unwrap();
        // c² + ad + b1c1 - b2c2 - b3c3 = 4 - 1 + 3 - 4 + 1 = 3.
        assert_eq!(bracket_norm(&p).bracket, re(3.0));
    }

    #[test]
    fn entry_sum_is_power_of_two_times_norm() {
        for family in [Family::J, Family::I] {
            for k in 1..=3 {
                let ladder: Vec<(Complex64, Complex64)> = (0..k)
                    .map(|i| (c64(0.4 + i as f64, -0.2), c64(-0.9, 0.1 * i as f64)))
                    .collect();
                let p = StateParams::new(
                    family,
                    c64(0.3, 0.8),
                    c64(-0.5, 0.2),
                    c64(1.1, -0.4),
                    ladder,
                )
                .unwrap();
                let bn = bracket_norm(&p);
                let sum: f64 = build_matrix(&p)
                    .entries()
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum();
                let expected = (1u64 << k) as f64 * bn.norm_sq;
                assert!(
                    (sum - expected).abs() <= 1e-12 * expected.max(1.0),
                    "family {family:?} k={k}: {sum} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn normalize_divides_by_root_trace() {
        // a=d=1, rest 0, k=1: trace(AA†) = 2·‖A‖ = 4, so t = 1/2 and the
        // normalized norm is 1/2.
        let p = j_params(1.0, 0.0, 1.0, &[(0.0, 0.0)]);
        let q = normalize(&p).unwrap();
        assert_eq!(q.a(), re(0.5));
        assert_eq!(q.d(), re(0.5));
        let bn = bracket_norm(&q);
        assert!((bn.norm_sq - 0.5).abs() < 1e-15);
        // Idempotence.
        let q2 = normalize(&q).unwrap();
        assert!((q2.a() - q.a()).norm() < 1e-15);
    }

    #[test]
    fn normalize_rejects_zero() {
        let p = j_params(0.0, 0.0, 0.0, &[(0.0, 0.0)]);
        assert!(matches!(normalize(&p), Err(StateError::ZeroMatrix)));
    }

    #[test]
    fn vectorize_layout_and_partial_trace() {
        let p = normalize(&j_params(1.0, 0.0, 1.0, &[(0.5, 0.0)])).unwrap();
        let m = build_matrix(&p);
        let s = vectorize(&m).unwrap();
        // Row 0 of A₄ is (0, b1, a, -c): flattened indices 1 and 2.
        assert_eq!(s.amplitudes()[1], p.ladder()[0].0);
        assert_eq!(s.amplitudes()[2], p.a());
        let rho = partial_trace_rho1(&s);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.max_diff(&rho.adjoint()) == 0.0);
    }

    #[test]
    fn maximal_state_reduces_to_uniform_diagonal() {
        let p = normalize(&j_params(0.5, 0.0, 0.5, &[(0.0, 0.0)])).unwrap();
        let s = vectorize(&build_matrix(&p)).unwrap();
        let rho = partial_trace_rho1(&s);
        let quarter = ComplexMatrix::identity(4).scale(re(0.25));
        assert!(rho.max_diff(&quarter) < 1e-15);
    }

    #[test]
    fn vectorize_rejects_unnormalized() {
        let p = j_params(1.0, 0.0, 1.0, &[(0.0, 0.0)]);
        let m = build_matrix(&p);
        assert!(matches!(
            vectorize(&m),
            Err(StateError::NotNormalized { .. })
        ));
    }

    #[test]
    fn params_json_round_trip() {
        let p = StateParams::new(
            Family::I,
            c64(0.25, -0.5),
            c64(1.0 / 3.0, 0.125),
            c64(-2.0, 1e-9),
            vec![
                (c64(0.1, 0.2), c64(-0.3, 0.4)),
                (c64(5.0, -6.0), c64(0.0, 1.0)),
            ],
        )
        .unwrap()
        .with_j_variant(JVariant::Recursive);
        let text = serde_json::to_string(&p).unwrap();
        let back: StateParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn params_json_variant_defaults_to_explicit() {
        let text = r#"{"family":"J","a":[1.0,0.0],"c":[0.0,0.0],"d":[1.0,0.0],"ladder":[[[0.0,0.0],[0.0,0.0]]]}"#;
        let p: StateParams = serde_json::from_str(text).unwrap();
        assert_eq!(p.j_variant(), JVariant::ExplicitJ4);
    }

    #[test]
    fn params_validation() {
        assert!(matches!(
            StateParams::new(Family::J, re(1.0), re(0.0), re(1.0), vec![]),
            Err(StateError::EmptyLadder)
        ));
        let long = vec![(re(1.0), re(1.0)); 12];
        assert!(matches!(
            StateParams::new(Family::J, re(1.0), re(0.0), re(1.0), long),
            Err(StateError::LadderTooLong { .. })
        ));
        assert!(matches!(
            StateParams::new(
                Family::J,
                c64(f64::NAN, 0.0),
                re(0.0),
                re(1.0),
                vec![(re(0.0), re(0.0))]
            ),
            Err(StateError::NonFinite { .. })
        ));
    }

    #[test]
    fn scaling_covariance() {
        let p = j_params(0.7, -0.3, 0.2, &[(0.5, 1.5), (2.0, -1.0)]);
        let t = c64(0.6, -0.8);
        let scaled = p.scaled(t);
        let bn = bracket_norm(&p);
        let bns = bracket_norm(&scaled);
        assert!((bns.bracket - bn.bracket * t * t).norm() < 1e-12);
        assert!((bns.norm_sq - bn.norm_sq * t.norm_sqr()).abs() < 1e-12);
    }
}
