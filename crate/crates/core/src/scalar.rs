//! Value rings used by the weighted enumerations: complex numbers over `f64`
//! or double-double for sampled parameter points, and `BigRational` for exact
//! q-specializations.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};
use qd::Quad;

/// Real field under the complex values: `f64`, or the double-double `Quad`
/// (about 32 digits).
pub trait Real: Num + Copy + Neg<Output = Self> + PartialOrd + Debug + Send + Sync + 'static {
    /// Cutoff for the infinite theta product.
    const PRODUCT_TOL: f64;

    fn lift(x: f64) -> Self;

    fn approx(self) -> f64;

    /// `z^w` on the principal branch for non-integer `w`.
    fn complex_pow(z: Complex<Self>, w: Complex<Self>) -> Complex<Self>;
}

impl Real for f64 {
    const PRODUCT_TOL: f64 = 1e-17;

    fn lift(x: f64) -> Self {
        x
    }

    fn approx(self) -> f64 {
        self
    }

    fn complex_pow(z: Complex64, w: Complex64) -> Complex64 {
        (w * z.ln()).exp()
    }
}

impl Real for Quad {
    const PRODUCT_TOL: f64 = 1e-33;

    fn lift(x: f64) -> Self {
        Quad::from_f64(x)
    }

    fn approx(self) -> f64 {
        self.0 + self.1
    }

    /// `z^n * z^f` with `n = floor(Re w)`: the integer power is exact and the
    /// fractional one is a fixed double, so `z^{w+d} = z^w z^d` to full precision.
    fn complex_pow(z: Complex<Quad>, w: Complex<Quad>) -> Complex<Quad> {
        let n = w.re.approx().floor();
        let frac = approx_complex(w - Complex::new(Quad::from_f64(n), Quad::from_f64(0.0)));
        let f: Complex<Quad> = lift_complex(f64::complex_pow(approx_complex(z), frac));
        f * crate::theta::powi(z, n as i64)
    }
}

/// Double-double complex numbers.
pub type PreciseComplex = Complex<Quad>;

pub fn lift_complex<T: Real>(z: Complex64) -> Complex<T> {
    Complex::new(T::lift(z.re), T::lift(z.im))
}

pub fn approx_complex<T: Real>(z: Complex<T>) -> Complex64 {
    Complex64::new(z.re.approx(), z.im.approx())
}

/// `|z|` rounded to `f64`.
pub fn modulus<T: Real>(z: Complex<T>) -> f64 {
    z.re.approx().hypot(z.im.approx())
}

pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    fn from_i64(n: i64) -> Self;
    fn to_complex(&self) -> Complex64;
    fn is_exact() -> bool;
}

impl<T: Real> Scalar for Complex<T> {
    fn from_i64(n: i64) -> Self {
        Complex::new(T::lift(n as f64), T::zero())
    }

    fn to_complex(&self) -> Complex64 {
        approx_complex(*self)
    }

    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn is_exact() -> bool {
        true
    }
}

/// `|x - y| / max(|x|, |y|, 1e-30)`; exact rings report 0 or 1.
pub fn rel_err<V: Scalar>(x: &V, y: &V) -> f64 {
    if V::is_exact() {
        return if x == y { 0.0 } else { 1.0 };
    }
    let d = (x.clone() - y.clone()).to_complex().norm();
    let (x, y) = (x.to_complex(), y.to_complex());
    if !d.is_finite() {
        return f64::INFINITY;
    }
    if d == 0.0 {
        return 0.0;
    }
    d / x.norm().max(y.norm()).max(1e-30)
}

pub fn pow<V: Scalar>(x: &V, k: u32) -> V {
    let mut acc = V::one();
    for _ in 0..k {
        acc = acc * x.clone();
    }
    acc
}
