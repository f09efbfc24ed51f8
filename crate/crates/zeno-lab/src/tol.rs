//! Centralized numerical tolerances.
//!
//! Every threshold used by the library lives here so that the contracts of
//! the individual operations stay in one place. Values are `f64` and get
//! converted to the working scalar where they are used.

/// Orthonormality defect allowed for eigenvector matrices and isometries,
/// `|U*U - I| <= ORTHONORMALITY` (operator norm; checks are performed in the
/// Frobenius norm, which dominates it).
pub const ORTHONORMALITY: f64 = 1e-10;

/// Spectral reconstruction residual, `|U L U* - A| <= RECONSTRUCTION * max(1, |A|)`.
pub const RECONSTRUCTION: f64 = 1e-10;

/// Default relative Hermiticity tolerance on eigensolver inputs; inputs are
/// symmetrized as `(A + A*)/2` before decomposition.
pub const HERMITICITY_REL: f64 = 1e-8;

/// Relative width of the eigenvalue clamping window for PSD operations:
/// eigenvalues in `[-CLAMP_REL * max(1, lambda_max), 0)` are clamped to zero,
/// anything below is a hard error.
pub const CLAMP_REL: f64 = 1e-10;

/// PSD square-root consistency, `|sqrt(A)^2 - A| <= SQRT_PSD * max(1, lambda_max)`.
pub const SQRT_PSD: f64 = 1e-9;

/// Slack for unit-magnitude checks (`|phi| <= 1`, contraction norms, strong
/// errors versus norm errors).
pub const UNIT_SLACK: f64 = 1e-12;

/// Sign-condition slack: the imaginary part of an admissible function counts
/// as non-positive when it stays below this value on the verification grid.
pub const SIGN_SLACK: f64 = 1e-12;

/// Acceptance window for one-sided derivative estimates at zero
/// (`phi'(+0) = -i` and Kato-part slope `1`).
pub const DERIVATIVE_WINDOW: f64 = 1e-4;

/// Near-zero point adjoined to the grid when taking `inf/sup` of
/// `(1 - kato(s))/s` over `(0, x]`, so the supremum reaches its `s -> 0`
/// limit within `1e-9`.
pub const P_BOUNDS_ANCHOR: f64 = 1e-8;

/// Bound on the sup of `|p_alpha|` beyond which the function is treated as
/// failing the power-law condition.
pub const P_ALPHA_CAP: f64 = 1e6;

/// Relative slack in the certified bound comparison `lhs <= rhs * (1 + BOUND_SLACK)`.
pub const BOUND_SLACK: f64 = 1e-10;

/// Margin floor for the sandwich form inequalities.
pub const SANDWICH_MARGIN: f64 = -1e-9;

/// Defect factorization residual, `|(I - F(tau)) - tau W* p(tau H) W| <= FACTORIZATION`.
pub const FACTORIZATION: f64 = 1e-9;

/// Condition-number guard on resolvent inversions in the diagnostics; beyond
/// this the result is reported as a flagged non-result instead of a number.
pub const CONDITION_GUARD: f64 = 1e12;

/// Commutator norm below which a model counts as commuting, `|PH - HP|`.
pub const COMMUTING: f64 = 1e-10;

/// Errors at or below this value count as converged-to-zero; rate fits drop
/// such points and ratio checks treat them as exact.
pub const CONVERGED_FLOOR: f64 = 1e-14;

/// Roundoff floor for scalar product-formula error ratios: when the formula
/// collapses exactly (e.g. the plain exponential), finite-precision noise of
/// this size is treated as zero.
pub const SCALAR_NOISE_FLOOR: f64 = 1e-13;

/// Tolerance for recognizing a time shift as a whole number of grid steps on
/// the discrete circle.
pub const GRID_ALIGNMENT: f64 = 1e-9;
