//! Registry and verification of admissible functions.
//!
//! An admissible function is a complex Borel map on `[0, inf)` with
//! `|phi| <= 1`, `phi(0) = 1` and one-sided derivative `phi'(+0) = -i`.
//! The sign condition `Im(phi) <= 0` is what the sandwich argument needs;
//! functions violating it can be repaired by a cutoff `phi * chi_Delta`
//! where `Delta` keeps a neighbourhood of zero and stays inside the
//! non-positive-sign region.
//!
//! Verification is performed on a finite log-spaced grid, not symbolically;
//! reports therefore speak about the grid only. Derivatives at `+0` are
//! one-sided difference quotients with a single Richardson extrapolation
//! step over a decreasing step sequence.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{exp_minus_i, imag_unit, modulus, real, Real};
use crate::tol;

/// Verification state of a registry flag: never checked, or checked with
/// the stated outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Unverified,
    True,
    False,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::True
        } else {
            TriState::False
        }
    }

    pub fn is_true(self) -> bool {
        self == TriState::True
    }
}

/// Provenance-carrying flags of a [`FunctionSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFlags {
    pub admissible: TriState,
    pub kato: TriState,
    pub im_nonpositive: TriState,
}

impl Default for VerificationFlags {
    fn default() -> Self {
        Self {
            admissible: TriState::Unverified,
            kato: TriState::Unverified,
            im_nonpositive: TriState::Unverified,
        }
    }
}

/// Finite union of half-open intervals `[a, b)` on `[0, inf)`, sorted and
/// pairwise disjoint. The first interval must start at zero so the union
/// always contains a neighbourhood of the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion<T: Real> {
    intervals: Vec<(T, T)>,
}

impl<T: Real> IntervalUnion<T> {
    pub fn new(intervals: Vec<(T, T)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidIntervals("no intervals given".into()));
        }
        if intervals[0].0 != T::zero() {
            return Err(Error::InvalidIntervals(
                "the first interval must start at 0 (a neighbourhood of zero is required)".into(),
            ));
        }
        for w in intervals.iter() {
            if !(w.0 < w.1) {
                return Err(Error::InvalidIntervals(format!(
                    "interval [{:?}, {:?}) is empty or reversed",
                    w.0.to_f64(),
                    w.1.to_f64()
                )));
            }
            if w.0 < T::zero() {
                return Err(Error::InvalidIntervals("intervals must lie in [0, inf)".into()));
            }
        }
        for pair in intervals.windows(2) {
            if pair[1].0 < pair[0].1 {
                return Err(Error::InvalidIntervals("intervals must be sorted and disjoint".into()));
            }
        }
        Ok(Self { intervals })
    }

    /// Single interval `[0, b)`.
    pub fn zero_to(b: T) -> Result<Self> {
        Self::new(vec![(T::zero(), b)])
    }

    pub fn intervals(&self) -> &[(T, T)] {
        &self.intervals
    }

    pub fn contains(&self, x: T) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x < b)
    }

    /// Intersection with another union; fails when the result no longer
    /// contains a neighbourhood of zero.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        let mut out = Vec::new();
        for &(a1, b1) in &self.intervals {
            for &(a2, b2) in &other.intervals {
                let a = a1.max(a2);
                let b = b1.min(b2);
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        Self::new(out)
    }

    /// Deterministic ASCII label, e.g. `[0..3.141592653589793)`.
    pub fn label(&self) -> String {
        self.intervals
            .iter()
            .map(|&(a, b)| {
                format!("[{}..{})", a.to_f64().unwrap_or(f64::NAN), b.to_f64().unwrap_or(f64::NAN))
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// An identified scalar function `[0, inf) -> C` with verification flags and
/// an optional cutoff set. When a cutoff is present the evaluator already
/// contains the indicator factor.
#[derive(Clone)]
pub struct FunctionSpec<T: Real> {
    id: String,
    evaluator: Arc<dyn Fn(T) -> Complex<T> + Send + Sync>,
    flags: VerificationFlags,
    cutoff: Option<IntervalUnion<T>>,
}

impl<T: Real> fmt::Debug for FunctionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("id", &self.id)
            .field("flags", &self.flags)
            .field("cutoff", &self.cutoff.as_ref().map(|c| c.label()))
            .finish()
    }
}

impl<T: Real> FunctionSpec<T> {
    pub fn new<F>(id: impl Into<String>, evaluator: F) -> Self
    where
        F: Fn(T) -> Complex<T> + Send + Sync + 'static,
    {
        Self {
            id: id.into(),
            evaluator: Arc::new(evaluator),
            flags: VerificationFlags::default(),
            cutoff: None,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn eval(&self, x: T) -> Complex<T> {
        (self.evaluator)(x)
    }

    pub fn flags(&self) -> VerificationFlags {
        self.flags
    }

    pub fn cutoff(&self) -> Option<&IntervalUnion<T>> {
        self.cutoff.as_ref()
    }

    /// Returns the spec with flags updated from a verification report.
    pub fn with_verification(mut self, report: &AdmissibilityReport<T>) -> Self {
        self.flags.admissible = TriState::from_bool(report.is_admissible());
        self.flags.im_nonpositive = TriState::from_bool(report.im_nonpositive);
        self
    }

    pub fn with_kato_flag(mut self, ok: bool) -> Self {
        self.flags.kato = TriState::from_bool(ok);
        self
    }
}

/// Ids of the built-in functions.
pub const BUILTIN_IDS: [&str; 5] =
    ["exp", "resolvent-1", "resolvent-2", "resolvent-3", "cutoff-exp-[0,pi)"];

/// Looks up a built-in function: the plain exponential `exp(-ix)`, the
/// resolvent powers `(1 + ix/k)^{-k}` for `k = 1, 2, 3`, and the spectrally
/// cut off exponential `exp(-ix) chi_[0,pi)(x)`.
pub fn builtin<T: Real>(id: &str) -> Result<FunctionSpec<T>> {
    match id {
        "exp" => Ok(FunctionSpec::new(id, |x: T| exp_minus_i(x))),
        "resolvent-1" | "resolvent-2" | "resolvent-3" => {
            let k: u32 = id.rsplit('-').next().unwrap().parse().unwrap();
            let kf = real::<T>(f64::from(k));
            Ok(FunctionSpec::new(id, move |x: T| {
                Complex::new(T::one(), x / kf).powu(k).inv()
            }))
        }
        "cutoff-exp-[0,pi)" => {
            let delta = IntervalUnion::zero_to(T::pi()).expect("pi > 0");
            let d = delta.clone();
            let mut spec = FunctionSpec::new(id, move |x: T| {
                if d.contains(x) {
                    exp_minus_i(x)
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            });
            spec.cutoff = Some(delta);
            Ok(spec)
        }
        other => Err(Error::UnknownFunction(other.to_string())),
    }
}

/// Log-spaced verification grid.
#[derive(Debug, Clone)]
pub struct Grid<T: Real> {
    points: Vec<T>,
}

impl<T: Real> Grid<T> {
    /// `count` log-spaced points from `min` to `max` inclusive.
    pub fn log_spaced(min: T, max: T, count: usize) -> Result<Self> {
        if !(T::zero() < min && min < max) || count < 2 {
            return Err(Error::InvalidParameter(
                "log grid needs 0 < min < max and >= 2 points".into(),
            ));
        }
        let (lo, hi) = (min.log10(), max.log10());
        let step = (hi - lo) / real::<T>((count - 1) as f64);
        let ten = real::<T>(10.0);
        let points = (0..count).map(|i| ten.powf(lo + step * real::<T>(i as f64))).collect();
        Ok(Self { points })
    }

    /// The standard grid: `10^4` log-spaced points on `[1e-6, 1e3]`.
    pub fn standard() -> Self {
        Self::log_spaced(real(1e-6), real(1e3), 10_000).expect("standard grid parameters are valid")
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    fn check_coverage(&self) -> Result<()> {
        let ok = self.points.len() >= 10_000
            && self.points[0] <= real(1e-6)
            && *self.points.last().unwrap() >= real(1e3);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "verification grid must cover [1e-6, 1e3] with at least 10^4 points".into(),
            ))
        }
    }
}

/// Default decreasing step sequence for one-sided derivative estimates.
pub const DERIVATIVE_STEPS: [f64; 5] = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7];

/// Outcome of the grid verification of the admissibility conditions.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport<T: Real> {
    /// `sup_grid |phi| <= 1 + 1e-12`.
    pub bounded_by_one: bool,
    /// `phi(0) = 1` within `1e-12`.
    pub value_one_at_zero: bool,
    /// Richardson-extrapolated one-sided difference quotient at zero.
    pub derivative_at_zero: Complex<T>,
    /// `|derivative_at_zero + i| <= 1e-4`.
    pub derivative_matches: bool,
    /// `Im(phi) <= 1e-12` on the whole grid.
    pub im_nonpositive: bool,
    /// Grid points where `Im(phi) > 1e-12`.
    pub violating_points: Vec<T>,
}

impl<T: Real> AdmissibilityReport<T> {
    /// All three admissibility conditions hold on the grid.
    pub fn is_admissible(&self) -> bool {
        self.bounded_by_one && self.value_one_at_zero && self.derivative_matches
    }
}

fn one_sided_derivative<T: Real>(f: &dyn Fn(T) -> Complex<T>, steps: &[T]) -> Complex<T> {
    let at_zero = f(T::zero());
    let quotient = |h: T| (f(h) - at_zero) / Complex::new(h, T::zero());
    let n = steps.len();
    if n == 1 {
        return quotient(steps[0]);
    }
    // one Richardson extrapolation step on the two smallest steps kills the
    // leading O(h) error of the one-sided quotient
    let (h1, h2) = (steps[n - 2], steps[n - 1]);
    let (d1, d2) = (quotient(h1), quotient(h2));
    (d2 * Complex::new(h1, T::zero()) - d1 * Complex::new(h2, T::zero()))
        / Complex::new(h1 - h2, T::zero())
}

fn validate_steps<T: Real>(steps: &[T]) -> Result<()> {
    let ok = !steps.is_empty()
        && steps.windows(2).all(|w| w[0] > w[1])
        && steps.iter().all(|&h| real::<T>(1e-7) <= h && h <= real::<T>(1e-3));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "derivative steps must be a decreasing sequence inside [1e-7, 1e-3]".into(),
        ))
    }
}

/// Checks the admissibility conditions for `spec` on the grid.
pub fn verify_admissible<T: Real>(
    spec: &FunctionSpec<T>,
    grid: &Grid<T>,
    steps: &[T],
) -> Result<AdmissibilityReport<T>> {
    grid.check_coverage()?;
    validate_steps(steps)?;

    let at_zero = spec.eval(T::zero());
    if !(at_zero.re.is_finite() && at_zero.im.is_finite()) {
        return Err(Error::FunctionNotFinite { point: 0.0 });
    }
    let value_one_at_zero = modulus(at_zero - Complex::new(T::one(), T::zero())) <= real(1e-12);

    let mut sup = T::zero();
    let mut violating = Vec::new();
    for &x in grid.points() {
        let v = spec.eval(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::FunctionNotFinite { point: x.to_f64().unwrap_or(f64::NAN) });
        }
        sup = sup.max(modulus(v));
        if v.im > real(tol::SIGN_SLACK) {
            violating.push(x);
        }
    }

    let derivative_at_zero = one_sided_derivative(&|x| spec.eval(x), steps);
    let derivative_matches =
        modulus(derivative_at_zero + imag_unit::<T>()) <= real(tol::DERIVATIVE_WINDOW);

    Ok(AdmissibilityReport {
        bounded_by_one: sup <= T::one() + real(tol::UNIT_SLACK),
        value_one_at_zero,
        derivative_at_zero,
        derivative_matches,
        im_nonpositive: violating.is_empty(),
        violating_points: violating,
    })
}

/// Real decomposition `phi = psi - i(1 - kato)` of a function obeying the
/// sign condition: `psi = Re(phi)`, `omega = -Im(phi)`, `kato = 1 - omega`.
#[derive(Clone)]
pub struct Decomposition<T: Real> {
    psi: Arc<dyn Fn(T) -> T + Send + Sync>,
    omega: Arc<dyn Fn(T) -> T + Send + Sync>,
    kato: Arc<dyn Fn(T) -> T + Send + Sync>,
}

impl<T: Real> fmt::Debug for Decomposition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Decomposition { psi, omega, kato }")
    }
}

impl<T: Real> Decomposition<T> {
    /// `psi(x) = Re(phi(x))`, bounded by one with `psi(0) = 1`.
    pub fn psi(&self, x: T) -> T {
        (self.psi)(x)
    }

    /// `omega(x) = -Im(phi(x))`, in `[0, 1]` with `omega(0) = 0`.
    pub fn omega(&self, x: T) -> T {
        (self.omega)(x)
    }

    /// The Kato part `kato(x) = 1 - omega(x)`, in `[0, 1]` with `kato(0) = 1`
    /// and slope `-1` at `+0`.
    pub fn kato(&self, x: T) -> T {
        (self.kato)(x)
    }
}

/// Splits `phi` into its real part and Kato part. Requires the sign
/// condition to be verified (`im_nonpositive = true`) — without it
/// `omega = -Im(phi)` may leave `[0, 1]`. All range conditions are checked
/// on the grid, and the slope `omega'(+0)` must match `1` within `1e-4`.
pub fn kato_part_decompose<T: Real>(
    spec: &FunctionSpec<T>,
    grid: &Grid<T>,
) -> Result<Decomposition<T>> {
    if spec.flags.im_nonpositive != TriState::True {
        return Err(Error::SignConditionUnverified(spec.id.clone()));
    }
    let slack = real::<T>(tol::SIGN_SLACK);
    let check = |x: T| -> Result<()> {
        let v = spec.eval(x);
        let (psi, omega) = (v.re, -v.im);
        if psi.abs() > T::one() + slack {
            return Err(Error::KatoPartOutOfRange {
                point: x.to_f64().unwrap_or(f64::NAN),
                value: psi.to_f64().unwrap_or(f64::NAN),
            });
        }
        if omega < -slack || omega > T::one() + slack {
            return Err(Error::KatoPartOutOfRange {
                point: x.to_f64().unwrap_or(f64::NAN),
                value: omega.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    };
    check(T::zero())?;
    for &x in grid.points() {
        check(x)?;
    }

    let ev = spec.evaluator.clone();
    let steps: Vec<T> = DERIVATIVE_STEPS.iter().map(|&h| real(h)).collect();
    let slope = one_sided_derivative(&|x| Complex::new(-ev(x).im, T::zero()), &steps);
    if (slope.re - T::one()).abs() > real(tol::DERIVATIVE_WINDOW) {
        return Err(Error::InvalidParameter(format!(
            "omega'(+0) = {} is not 1 within {}",
            slope.re.to_f64().unwrap_or(f64::NAN),
            tol::DERIVATIVE_WINDOW
        )));
    }

    let ev_psi = spec.evaluator.clone();
    let ev_omega = spec.evaluator.clone();
    let ev_kato = spec.evaluator.clone();
    Ok(Decomposition {
        psi: Arc::new(move |x| ev_psi(x).re),
        omega: Arc::new(move |x| -ev_omega(x).im),
        kato: Arc::new(move |x| T::one() + ev_kato(x).im),
    })
}

/// Applies the indicator of `delta` to `spec`. `delta` must contain a
/// neighbourhood of zero (guaranteed by the [`IntervalUnion`] invariant) and
/// must stay inside the non-positive-sign region of `spec` on the grid.
pub fn cutoff_regularize<T: Real>(
    spec: &FunctionSpec<T>,
    delta: &IntervalUnion<T>,
    grid: &Grid<T>,
) -> Result<FunctionSpec<T>> {
    for &x in grid.points() {
        if delta.contains(x) && spec.eval(x).im > real(tol::SIGN_SLACK) {
            return Err(Error::CutoffOutsideSignSet { point: x.to_f64().unwrap_or(f64::NAN) });
        }
    }
    let ev = spec.evaluator.clone();
    let d = delta.clone();
    let cutoff = match &spec.cutoff {
        Some(existing) => existing.intersect(delta)?,
        None => delta.clone(),
    };
    Ok(FunctionSpec {
        id: format!("{}|{}", spec.id, delta.label()),
        evaluator: Arc::new(move |x: T| {
            if d.contains(x) {
                ev(x)
            } else {
                Complex::new(T::zero(), T::zero())
            }
        }),
        flags: VerificationFlags::default(),
        cutoff: Some(cutoff),
    })
}

/// The defect quotient `p(x) = (1 - phi(x))/x` with `p(0) = i`.
pub fn p_value<T: Real>(spec: &FunctionSpec<T>, x: T) -> Complex<T> {
    debug_assert!(x >= T::zero());
    if x == T::zero() {
        imag_unit()
    } else {
        (Complex::new(T::one(), T::zero()) - spec.eval(x)) / Complex::new(x, T::zero())
    }
}

/// `C_p`: the sup of `|p|` over `{0}` and the grid.
pub fn p_constant<T: Real>(spec: &FunctionSpec<T>, grid: &Grid<T>) -> T {
    grid.points()
        .iter()
        .map(|&x| modulus(p_value(spec, x)))
        .fold(T::one(), |m, v| m.max(v))
}

/// The power-law remainder `p_alpha(x) = (p(x) - i)/x^alpha`, zero at zero.
pub fn p_alpha_value<T: Real>(spec: &FunctionSpec<T>, alpha: T, x: T) -> Complex<T> {
    debug_assert!(x >= T::zero() && alpha > T::zero());
    if x == T::zero() {
        Complex::new(T::zero(), T::zero())
    } else {
        (p_value(spec, x) - imag_unit()) / Complex::new(x.powf(alpha), T::zero())
    }
}

/// `C_alpha`: the sup of `|p_alpha|` over the grid. Errors when the sup
/// exceeds the cap, meaning the function fails the power-law condition.
pub fn p_alpha_constant<T: Real>(spec: &FunctionSpec<T>, alpha: T, grid: &Grid<T>) -> Result<T> {
    let sup = grid
        .points()
        .iter()
        .map(|&x| modulus(p_alpha_value(spec, alpha, x)))
        .fold(T::zero(), |m, v| m.max(v));
    if sup > real(tol::P_ALPHA_CAP) {
        Err(Error::PAlphaUnbounded { sup: sup.to_f64().unwrap_or(f64::INFINITY) })
    } else {
        Ok(sup)
    }
}

/// Lower/upper envelopes of the Kato defect quotient:
/// `p_minus(x) = inf_{s in (0,x]} (1 - kato(s))/s` and `p_plus` the sup,
/// both `1` at `x = 0`. The inf/sup run over the grid points in `(0, x]`
/// together with the evaluation point `x` itself and a near-zero anchor
/// `min(x, 1e-8)` that realizes the `s -> 0` limit of the sup.
pub fn p_bounds<T: Real>(kato: &Decomposition<T>, x: T, grid: &Grid<T>) -> (T, T) {
    debug_assert!(x >= T::zero());
    if x == T::zero() {
        return (T::one(), T::one());
    }
    let quotient = |s: T| (T::one() - kato.kato(s)) / s;
    let anchor = x.min(real(tol::P_BOUNDS_ANCHOR));
    let mut lo = quotient(anchor).min(quotient(x));
    let mut hi = quotient(anchor).max(quotient(x));
    for &s in grid.points() {
        if s > x {
            break;
        }
        let q = quotient(s);
        lo = lo.min(q);
        hi = hi.max(q);
    }
    (lo, hi)
}
