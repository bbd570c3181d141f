//! `f64` math for builds without `std`, backed by `libm`.
//!
//! Modules that need transcendental functions import [`FloatExt`] under
//! `cfg(not(feature = "std"))`; with `std` enabled the inherent methods are
//! used directly and this shim compiles to nothing.

#[cfg(not(feature = "std"))]
pub(crate) trait FloatExt: Sized {
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn exp_m1(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn powi(self, n: i32) -> Self;
}

#[cfg(not(feature = "std"))]
impl FloatExt for f64 {
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    #[inline]
    fn exp_m1(self) -> f64 {
        libm::expm1(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        libm::log(self)
    }
    #[inline]
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    #[inline]
    fn powi(self, n: i32) -> f64 {
        libm::pow(self, n as f64)
    }
}
