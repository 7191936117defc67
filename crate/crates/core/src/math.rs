//! Float math shim: inherent `f64` methods under `std`, `libm` otherwise.

#![allow(dead_code)]

macro_rules! shim {
    ($(fn $name:ident($($arg:ident),+) => $libm:ident;)*) => {
        $(
            #[cfg(feature = "std")]
            #[inline(always)]
            pub fn $name($($arg: f64),+) -> f64 {
                shim!(@std $name, $($arg),+)
            }
            #[cfg(not(feature = "std"))]
            #[inline(always)]
            pub fn $name($($arg: f64),+) -> f64 {
                libm::$libm($($arg),+)
            }
        )*
    };
    (@std $name:ident, $x:ident) => { $x.$name() };
    (@std $name:ident, $x:ident, $y:ident) => { $x.$name($y) };
}

shim! {
    fn exp(x) => exp;
    fn exp_m1(x) => expm1;
    fn ln(x) => log;
    fn ln_1p(x) => log1p;
    fn sqrt(x) => sqrt;
    fn sin(x) => sin;
    fn cos(x) => cos;
    fn cosh(x) => cosh;
    fn sinh(x) => sinh;
    fn acosh(x) => acosh;
    fn floor(x) => floor;
    fn ceil(x) => ceil;
    fn round(x) => round;
    fn atan2(y, x) => atan2;
    fn powf(x, y) => pow;
}

#[inline(always)]
pub fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & !(1u64 << 63))
}

/// ln cosh(x) without overflow for large |x|.
#[inline]
pub fn ln_cosh(x: f64) -> f64 {
    let a = abs(x);
    a + ln_1p(exp(-2.0 * a)) - core::f64::consts::LN_2
}

/// cosh(x) - 1 without cancellation near x = 0.
#[inline]
pub fn cosh_m1(x: f64) -> f64 {
    let s = sinh(0.5 * x);
    2.0 * s * s
}
