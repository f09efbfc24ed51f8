//! Numerical laboratory for projection-interlaced product formulas.
//!
//! The library studies products of the form `(P phi(tH/n) P)^n` where `H` is
//! a non-negative Hermitian operator, `P` an orthogonal projection onto a
//! subspace, and `phi` a complex "admissible" function on `[0, inf)`. At
//! finite matrix scale these products converge to the unitary group
//! `exp(-itK)` generated by the compression `K = V* H V`, and the crate
//! provides everything needed to observe, certify and stress that
//! convergence:
//!
//! * [`spectral`] — dense complex linear algebra: Hermitian eigensolves,
//!   spectral functional calculus, operator norms, PSD square roots;
//! * [`functions`] — the registry of admissible functions, grid-based
//!   verification of their defining conditions, Kato-part decompositions,
//!   cutoff regularization and the auxiliary scalar maps `p`, `p±`, `p_alpha`;
//! * [`engine`] — Zeno generators, steps, products, targets, error metrics,
//!   certified convergence bounds and proof-path diagnostics;
//! * [`models`] — deterministic builders for the operator/projection pairs
//!   used in experiments (random, commuting, lattice Laplacian, and the
//!   out-of-assumption momentum circle);
//! * [`harness`] — the config-driven experiment runner with CSV/JSON
//!   persistence and log-log rate fitting.
//!
//! All numerical kernels are generic over the real scalar type through the
//! [`scalar::Real`] trait; the aliases below fix the `f64` instantiation
//! used by the harness and the command-line tools.

pub mod engine;
pub mod error;
pub mod functions;
pub mod harness;
pub mod models;
pub mod scalar;
pub mod spectral;
pub mod tol;

pub use error::{Error, Result};

/// Concrete scalar type used by the harness and CLI.
pub type Scalar = f64;
/// Dense complex matrix over the default scalar.
pub type Matrix = spectral::CMatrix<Scalar>;
/// Dense complex vector over the default scalar.
pub type Vector = spectral::CVector<Scalar>;
/// Hermitian operator in spectral form over the default scalar.
pub type Operator = spectral::SpectralOperator<Scalar>;
/// Isometry onto a closed subspace over the default scalar.
pub type Projection = spectral::SubspaceProjection<Scalar>;
// TODO(scaffold): Function/Model/Record aliases land with their modules.
