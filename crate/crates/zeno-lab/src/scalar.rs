//! Scalar abstraction for the numerical kernels.
//!
//! Everything that computes is generic over [`Real`], which is satisfied by
//! `f32` and `f64`. Tolerances and other literal constants are written as
//! `f64` and converted at the point of use with [`real`].

use num_complex::Complex;

/// Real scalar type the kernels are generic over.
pub trait Real: nalgebra::RealField + num_traits::FromPrimitive + num_traits::ToPrimitive + Copy {}

impl<T> Real for T where
    T: nalgebra::RealField + num_traits::FromPrimitive + num_traits::ToPrimitive + Copy
{
}

/// Converts an `f64` literal to the working scalar type.
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must be representable in the scalar type")
}

/// Complex number from two `f64` literals.
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(real(re), real(im))
}

/// The imaginary unit.
pub fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `exp(-ix)` for real `x`, evaluated through the real trigonometric
/// functions so no floating-point complex exponential is involved.
pub fn exp_minus_i<T: Real>(x: T) -> Complex<T> {
    Complex::new(x.cos(), -x.sin())
}

/// Modulus of a complex number over a [`Real`] scalar (`num_complex::norm`
/// is only available for `num_traits::Float` types).
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}
