//! Modified Jacobi theta function and theta shifted factorials.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{approx_complex, lift_complex, modulus, Real};

/// Nome of the theta function, `|p| < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nome<T: Real = f64>(Complex<T>);

impl<T: Real> Nome<T> {
    pub fn new(p: Complex<T>) -> Result<Self> {
        let m = modulus(p);
        if m < 1.0 {
            Ok(Nome(p))
        } else {
            Err(Error::InvalidNome(m))
        }
    }

    pub fn zero() -> Self {
        Nome(Complex::zero())
    }

    pub fn value(&self) -> Complex<T> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Nome<f64> {
    /// The same nome in another real field.
    pub fn widen<U: Real>(&self) -> Nome<U> {
        Nome(lift_complex(self.0))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ThetaEvalConfig {
    pub truncation_tolerance: f64,
    pub max_terms: usize,
}

impl Default for ThetaEvalConfig {
    fn default() -> Self {
        ThetaEvalConfig { truncation_tolerance: f64::PRODUCT_TOL, max_terms: 10_000 }
    }
}

impl ThetaEvalConfig {
    pub fn for_field<T: Real>() -> Self {
        ThetaEvalConfig { truncation_tolerance: T::PRODUCT_TOL, ..Default::default() }
    }
}

/// `theta(x; p) = prod_{j >= 0} (1 - p^j x)(1 - p^{j+1}/x)`.
pub fn theta_with<T: Real>(x: Complex<T>, p: Nome<T>, cfg: &ThetaEvalConfig) -> Result<Complex<T>> {
    if x.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let one = Complex::<T>::one();
    if p.is_zero() {
        return Ok(one - x);
    }
    let p = p.value();
    let inv = x.inv();
    let pn = modulus(p);
    let bound = modulus(x).max(pn * modulus(inv));
    let mut pj = one;
    let mut pj_abs = 1.0;
    let mut prod = one;
    for _ in 0..cfg.max_terms {
        if pj_abs * bound < cfg.truncation_tolerance {
            return Ok(prod);
        }
        let next = pj * p;
        prod = prod * (one - pj * x) * (one - next * inv);
        pj = next;
        pj_abs *= pn;
    }
    Err(Error::NoConvergence(cfg.max_terms))
}

pub fn theta<T: Real>(x: Complex<T>, p: Nome<T>) -> Result<Complex<T>> {
    theta_with(x, p, &ThetaEvalConfig::for_field::<T>())
}

/// Product of `theta(x; p)` over `xs`.
pub fn theta_multi<T: Real>(xs: &[Complex<T>], p: Nome<T>) -> Result<Complex<T>> {
    xs.iter().try_fold(Complex::one(), |acc, &x| Ok(acc * theta(x, p)?))
}

/// Theta shifted factorial `(a; q, p)_n` for any integer `n`.
pub fn qp_shifted_factorial<T: Real>(a: Complex<T>, q: Complex<T>, p: Nome<T>, n: i64) -> Result<Complex<T>> {
    let mut prod = Complex::one();
    if n >= 0 {
        let mut x = a;
        for _ in 0..n {
            prod = prod * theta(x, p)?;
            x = x * q;
        }
        Ok(prod)
    } else {
        let mut x = a * powi(q, n);
        for _ in 0..(-n) {
            prod = prod * theta(x, p)?;
            x = x * q;
        }
        if modulus(prod) < 1e-300 {
            return Err(Error::PoleEncountered(format!("(a;q,p)_{n} with a = {}, q = {}", approx_complex(a), approx_complex(q))));
        }
        Ok(prod.inv())
    }
}

/// `z^k` by repeated squaring.
pub fn powi<T: Real>(z: Complex<T>, k: i64) -> Complex<T> {
    let mut base = if k < 0 { z.inv() } else { z };
    let mut e = k.unsigned_abs();
    let mut acc = Complex::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

/// `z^w` on the principal branch; integer `w` takes the exact path.
pub fn powc<T: Real>(z: Complex<T>, w: Complex<T>) -> Complex<T> {
    if let Some(k) = as_integer(w) {
        return powi(z, k);
    }
    T::complex_pow(z, w)
}

pub(crate) fn as_integer<T: Real>(w: Complex<T>) -> Option<i64> {
    let r = w.re.approx();
    if w.im.is_zero() && r.abs() < 1e15 && w.re == T::lift(r.round()) {
        Some(r as i64)
    } else {
        None
    }
}
