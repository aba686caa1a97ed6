//! Numerical toolkit for a family of recursively constructed bipartite pure
//! states whose reduced density matrices have (at most) two eigenvalues.
//!
//! The library covers five layers, each usable on its own:
//!
//! * [`linalg`] — dense complex matrices, a cyclic Jacobi Hermitian
//!   eigensolver, PSD square roots, and LU solve/determinant. No external
//!   linear-algebra backend; everything runs on plain `f64` pairs.
//! * [`multipliers`] — the signed permutation matrices (two related kinds,
//!   `J` and `I`) that drive the block recursions, stored structurally as
//!   index/sign tables rather than dense matrices.
//! * [`states`] — the parameterized coefficient matrices themselves, their
//!   quadratic scalar invariants (`bracket` and `norm`), normalization, and
//!   vectorization into pure states.
//! * [`identities`] — residual-based numerical verification of every
//!   algebraic identity the construction promises, over seeded random
//!   parameter draws, including the arbitration between the two multiplier
//!   construction variants.
//! * [`entanglement`] / [`solver`] — the payoff: closed-form generalized
//!   concurrence and entanglement of formation for pure and mixed states,
//!   and an O(N²) structured linear solver with an LU benchmark.

pub mod entanglement;
pub mod identities;
pub mod linalg;
pub mod multipliers;
pub mod solver;
pub mod states;

pub use num_complex::Complex64;
