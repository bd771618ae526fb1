//! Elliptic small/big weights, elliptic numbers and binomials, together with
//! their degenerate families, plus plain q-analogues.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qd::Quad;

use crate::error::{Error, Result};
use crate::scalar::{approx_complex, lift_complex, modulus, Real, Scalar};
use crate::theta::{powc, powi, qp_shifted_factorial, theta, Nome};

const POLE_EPS: f64 = 1e-300;

/// Common interface of every weight family: the small weight `w(k)`, the big
/// weight `W(k)`, the number `[n]`, binomials, and the parameter rescaling
/// `a -> a q^da`, `b -> b q^db`.
pub trait WeightSystem: Clone + Send + Sync {
    type Value: Scalar;

    fn small_weight(&self, k: i64) -> Result<Self::Value>;
    fn big_weight(&self, k: i64) -> Result<Self::Value>;
    fn number(&self, n: i64) -> Result<Self::Value>;
    fn binomial(&self, n: i64, k: i64) -> Result<Self::Value>;
    fn rescaled(&self, da: i64, db: i64) -> Self;

    /// `(a, b) -> (a q^{2k}, b q^k)`.
    fn shifted(&self, k: i64) -> Self {
        self.rescaled(2 * k, k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family<T: Real = f64> {
    Elliptic {
        a: Complex<T>,
        b: Complex<T>,
        q: Complex<T>,
        p: Nome<T>,
    },
    ABq {
        a: Complex<T>,
        b: Complex<T>,
        q: Complex<T>,
    },
    Aq {
        a: Complex<T>,
        q: Complex<T>,
    },
    ZeroBq {
        b: Complex<T>,
        q: Complex<T>,
    },
    PlainQ {
        q: Complex<T>,
    },
    /// p = 0 with q replaced by q/frak_p.
    FrakPQ {
        a: Complex<T>,
        b: Complex<T>,
        q: Complex<T>,
        frak_p: Complex<T>,
    },
}

/// Weight families over `f64`.
pub type WeightFamily = Family<f64>;

/// The same families evaluated in double-double arithmetic.
pub type PreciseFamily = Family<Quad>;

/// `(a q^{2k}, b q^k)`.
pub fn shift_params<T: Real>(a: Complex<T>, b: Complex<T>, q: Complex<T>, k: i64) -> (Complex<T>, Complex<T>) {
    (a * powi(q, 2 * k), b * powi(q, k))
}

fn c1<T: Real>() -> Complex<T> {
    Complex::one()
}

fn real<T: Real>(x: f64) -> Complex<T> {
    Complex::new(T::lift(x), T::zero())
}

/// `prod th(num) / prod th(den)`, failing on a vanishing denominator factor.
fn quotient<T: Real, F>(num: &[Complex<T>], den: &[Complex<T>], th: F, what: &str) -> Result<Complex<T>>
where
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    let mut top = c1::<T>();
    for &x in num {
        top = top * th(x)?;
    }
    let mut bottom = c1::<T>();
    for &x in den {
        let t = th(x)?;
        if modulus(t) < POLE_EPS {
            return Err(Error::PoleEncountered(format!("{what}: vanishing factor at {}", approx_complex(x))));
        }
        bottom = bottom * t;
    }
    Ok(top / bottom)
}

fn linear<T: Real>(x: Complex<T>) -> Result<Complex<T>> {
    Ok(c1::<T>() - x)
}

// The a,b-formulas written once over a theta-like factor `th`; `qk` is q^k.

fn ab_small<T: Real, F>(a: Complex<T>, b: Complex<T>, q: Complex<T>, qk: Complex<T>, th: F) -> Result<Complex<T>>
where
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    let q2 = q * q;
    let num = [a * q * qk * qk, b * qk, a * qk / (q2 * b)];
    let den = [a * qk * qk / q, b * qk * q2, a * qk / b];
    Ok(q * quotient(&num, &den, th, "small weight")?)
}

fn ab_big<T: Real, F>(a: Complex<T>, b: Complex<T>, q: Complex<T>, qk: Complex<T>, th: F) -> Result<Complex<T>>
where
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    let q2 = q * q;
    let num = [a * q * (qk * qk), b * q, b * q2, a / (q * b), a / b];
    let den = [a * q, b * qk * q, b * qk * q2, a / (q * b) * qk, a / b * qk];
    Ok(quotient(&num, &den, th, "big weight")? * qk)
}

fn ab_number<T: Real, F>(a: Complex<T>, b: Complex<T>, q: Complex<T>, qz: Complex<T>, th: F) -> Result<Complex<T>>
where
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    let num = [qz, a * qz, b * q * q, a / b];
    let den = [q, a * q, b * qz * q, a / b * (qz / q)];
    quotient(&num, &den, th, "elliptic number")
}

fn ratio<T: Real>(num: Complex<T>, den: Complex<T>, what: &str) -> Result<Complex<T>> {
    if modulus(den) < POLE_EPS {
        return Err(Error::PoleEncountered(what.to_string()));
    }
    Ok(num / den)
}

impl<T: Real> Family<T> {
    pub fn q(&self) -> Complex<T> {
        match *self {
            Family::Elliptic { q, .. }
            | Family::ABq { q, .. }
            | Family::Aq { q, .. }
            | Family::ZeroBq { q, .. }
            | Family::PlainQ { q }
            | Family::FrakPQ { q, .. } => q,
        }
    }

    /// Base used for powers: q, or q/frak_p in the frak_p,q family.
    fn base(&self) -> Complex<T> {
        match *self {
            Family::FrakPQ { q, frak_p, .. } => q / frak_p,
            _ => self.q(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Elliptic { .. } => "elliptic",
            Family::ABq { .. } => "abq",
            Family::Aq { .. } => "aq",
            Family::ZeroBq { .. } => "zerobq",
            Family::PlainQ { .. } => "q",
            Family::FrakPQ { .. } => "pq",
        }
    }

    fn small_from_power(&self, qk: Complex<T>) -> Result<Complex<T>> {
        match *self {
            Family::Elliptic { a, b, q, p } => ab_small(a, b, q, qk, |x| theta(x, p)),
            Family::ABq { a, b, q } => ab_small(a, b, q, qk, linear),
            Family::Aq { a, q } => Ok(ratio(c1::<T>() - a * qk * qk * q, c1::<T>() - a * qk * qk / q, "a;q small weight")? / q),
            Family::ZeroBq { b, q } => Ok(ratio(c1::<T>() - b * qk, c1::<T>() - b * qk * q * q, "0,b;q small weight")? * q),
            Family::PlainQ { q } => Ok(q),
            Family::FrakPQ { .. } => unreachable!("handled by small_weight_at"),
        }
    }

    /// The frak_p,q small weight evaluated from its own expression in frak_p and q.
    fn frak_small(a: Complex<T>, b: Complex<T>, q: Complex<T>, fp: Complex<T>, k: Complex<T>) -> Result<Complex<T>> {
        let pw = |z: Complex<T>, e: Complex<T>| powc(z, e);
        let (one, two) = (c1::<T>(), real::<T>(2.0));
        let num = (pw(fp, two * k + one) - a * pw(q, two * k + one))
            * (pw(fp, k) - b * pw(q, k))
            * (b * pw(fp, k - two) - a * pw(q, k - two));
        let den = (pw(fp, two * k - one) - a * pw(q, two * k - one))
            * (pw(fp, k + two) - b * pw(q, k + two))
            * (b * pw(fp, k) - a * pw(q, k));
        Ok(ratio(num, den, "frak_p,q small weight")? * fp * q)
    }

    fn frak_number(a: Complex<T>, b: Complex<T>, q: Complex<T>, fp: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
        let pw = |x: Complex<T>, e: Complex<T>| powc(x, e);
        let one = c1::<T>();
        let num = (pw(fp, z) - pw(q, z)) * (pw(fp, z) - a * pw(q, z)) * (fp * fp - b * q * q) * (b - a);
        let den = (fp - q) * (fp - a * q) * (pw(fp, z + one) - b * pw(q, z + one)) * (b * pw(fp, z - one) - a * pw(q, z - one));
        ratio(num, den, "frak_p,q number")
    }

    fn big_from_power(&self, qk: Complex<T>) -> Result<Complex<T>> {
        match *self {
            Family::Elliptic { a, b, q, p } => ab_big(a, b, q, qk, |x| theta(x, p)),
            Family::ABq { a, b, q } => ab_big(a, b, q, qk, linear),
            Family::FrakPQ { a, b, q, frak_p } => ab_big(a, b, q / frak_p, qk, linear),
            Family::Aq { a, q } => Ok(ratio(c1::<T>() - a * q * qk * qk, c1::<T>() - a * q, "a;q big weight")? / qk),
            Family::ZeroBq { b, q } => {
                let q2 = q * q;
                Ok(ratio(
                    (c1::<T>() - b * q) * (c1::<T>() - b * q2),
                    (c1::<T>() - b * qk * q) * (c1::<T>() - b * qk * q2),
                    "0,b;q big weight",
                )? * qk)
            }
            Family::PlainQ { .. } => Ok(qk),
        }
    }

    fn number_from_power(&self, qz: Complex<T>) -> Result<Complex<T>> {
        match *self {
            Family::Elliptic { a, b, q, p } => ab_number(a, b, q, qz, |x| theta(x, p)),
            Family::ABq { a, b, q } => ab_number(a, b, q, qz, linear),
            Family::Aq { a, q } => {
                Ok(ratio((c1::<T>() - qz) * (c1::<T>() - a * qz), (c1::<T>() - q) * (c1::<T>() - a * q), "a;q number")? * q / qz)
            }
            Family::ZeroBq { b, q } => {
                ratio((c1::<T>() - qz) * (c1::<T>() - b * q * q), (c1::<T>() - q) * (c1::<T>() - b * qz * q), "0,b;q number")
            }
            Family::PlainQ { q } => ratio(c1::<T>() - qz, c1::<T>() - q, "q-number"),
            Family::FrakPQ { .. } => unreachable!("handled by number_at"),
        }
    }

    /// `w(k)` at complex `k`, using the principal branch of `q^k`.
    pub fn small_weight_at(&self, k: Complex<T>) -> Result<Complex<T>> {
        if let Family::FrakPQ { a, b, q, frak_p } = *self {
            return Self::frak_small(a, b, q, frak_p, k);
        }
        self.small_from_power(powc(self.base(), k))
    }

    /// `W(k)` at complex `k`.
    pub fn big_weight_at(&self, k: Complex<T>) -> Result<Complex<T>> {
        self.big_from_power(powc(self.base(), k))
    }

    /// `[z]` at complex `z`.
    pub fn number_at(&self, z: Complex<T>) -> Result<Complex<T>> {
        match *self {
            Family::FrakPQ { a, b, q, frak_p } => Self::frak_number(a, b, q, frak_p, z),
            Family::PlainQ { q } if q == c1() => Ok(z),
            _ => self.number_from_power(powc(self.base(), z)),
        }
    }

    fn rescale_complex(&self, da: Complex<T>, db: Complex<T>) -> Self {
        let base = self.base();
        let sa = powc(base, da);
        let sb = powc(base, db);
        match *self {
            Family::Elliptic { a, b, q, p } => Family::Elliptic { a: a * sa, b: b * sb, q, p },
            Family::ABq { a, b, q } => Family::ABq { a: a * sa, b: b * sb, q },
            Family::Aq { a, q } => Family::Aq { a: a * sa, q },
            Family::ZeroBq { b, q } => Family::ZeroBq { b: b * sb, q },
            Family::PlainQ { q } => Family::PlainQ { q },
            Family::FrakPQ { a, b, q, frak_p } => Family::FrakPQ { a: a * sa, b: b * sb, q, frak_p },
        }
    }

    /// The same family at p = 0 with the a,b-parameters kept, where meaningful.
    pub fn at_p_zero(&self) -> Self {
        match *self {
            Family::Elliptic { a, b, q, .. } => Family::ABq { a, b, q },
            other => other,
        }
    }
}

impl WeightFamily {
    /// The same parameters in another real field; `f64` inputs embed exactly.
    pub fn widen<U: Real>(&self) -> Family<U> {
        let l = lift_complex::<U>;
        match *self {
            Family::Elliptic { a, b, q, p } => Family::Elliptic { a: l(a), b: l(b), q: l(q), p: p.widen() },
            Family::ABq { a, b, q } => Family::ABq { a: l(a), b: l(b), q: l(q) },
            Family::Aq { a, q } => Family::Aq { a: l(a), q: l(q) },
            Family::ZeroBq { b, q } => Family::ZeroBq { b: l(b), q: l(q) },
            Family::PlainQ { q } => Family::PlainQ { q: l(q) },
            Family::FrakPQ { a, b, q, frak_p } => Family::FrakPQ { a: l(a), b: l(b), q: l(q), frak_p: l(frak_p) },
        }
    }

    pub fn precise(&self) -> PreciseFamily {
        self.widen()
    }
}

impl<T: Real> WeightSystem for Family<T> {
    type Value = Complex<T>;

    fn small_weight(&self, k: i64) -> Result<Complex<T>> {
        self.small_weight_at(real(k as f64))
    }

    fn big_weight(&self, k: i64) -> Result<Complex<T>> {
        self.big_weight_at(real(k as f64))
    }

    fn number(&self, n: i64) -> Result<Complex<T>> {
        self.number_at(real(n as f64))
    }

    fn binomial(&self, n: i64, k: i64) -> Result<Complex<T>> {
        if k < 0 || k > n {
            return Ok(Complex::zero());
        }
        let m = n - k;
        let zero = Nome::zero();
        let fac = |x: Complex<T>, q: Complex<T>, p: Nome<T>| qp_shifted_factorial(x, q, p, m);
        match *self {
            Family::Elliptic { a, b, q, p } => ell_binomial(a, b, q, p, k, m),
            Family::ABq { a, b, q } => ell_binomial(a, b, q, zero, k, m),
            Family::FrakPQ { a, b, q, frak_p } => ell_binomial(a, b, q / frak_p, zero, k, m),
            Family::Aq { a, q } => {
                let qk1 = powi(q, 1 + k);
                let num = fac(qk1, q, zero)? * fac(a * qk1, q, zero)?;
                let den = fac(q, q, zero)? * fac(a * q, q, zero)?;
                Ok(ratio(num, den, "a;q binomial")? * powi(q, k * (k - n)))
            }
            Family::ZeroBq { b, q } => {
                let qk1 = powi(q, 1 + k);
                let num = fac(qk1, q, zero)? * fac(b * qk1, q, zero)?;
                let den = fac(q, q, zero)? * fac(b * powi(q, 1 + 2 * k), q, zero)?;
                ratio(num, den, "0,b;q binomial")
            }
            Family::PlainQ { q } => Ok(q_binomial(&q, n, k)),
        }
    }

    fn rescaled(&self, da: i64, db: i64) -> Self {
        self.rescale_complex(real(da as f64), real(db as f64))
    }
}

fn ell_binomial<T: Real>(a: Complex<T>, b: Complex<T>, q: Complex<T>, p: Nome<T>, k: i64, m: i64) -> Result<Complex<T>> {
    let f = |x: Complex<T>| qp_shifted_factorial(x, q, p, m);
    let qk1 = powi(q, 1 + k);
    let num = f(qk1)? * f(a * qk1)? * f(b * qk1)? * f(a * powi(q, 1 - k) / b)?;
    let den = f(q)? * f(a * q)? * f(b * powi(q, 1 + 2 * k))? * f(a * q / b)?;
    ratio(num, den, "elliptic binomial")
}

/// Small weights `w(lo..=hi)` evaluated once for an enumeration.
#[derive(Clone, Debug)]
pub struct WeightTable<V> {
    lo: i64,
    vals: Vec<V>,
}

impl<V: Scalar> WeightTable<V> {
    pub fn small<S: WeightSystem<Value = V>>(sys: &S, lo: i64, hi: i64) -> Result<Self> {
        let vals = (lo..=hi.max(lo)).map(|k| sys.small_weight(k)).collect::<Result<Vec<_>>>()?;
        Ok(WeightTable { lo, vals })
    }

    pub fn get(&self, k: i64) -> &V {
        &self.vals[(k - self.lo) as usize]
    }
}

/// Big-weight flag, accumulated `(da, db)` and index.
type CacheKey = (bool, i64, i64, i64);

/// Memoizes `w(k)` and `W(k)` of a system and of all its rescalings, which
/// share one cache keyed by the accumulated `(da, db)`.
#[derive(Clone, Debug)]
pub struct CachedWeights<S: WeightSystem> {
    sys: S,
    offset: (i64, i64),
    cache: Arc<Mutex<HashMap<CacheKey, S::Value>>>,
}

impl<S: WeightSystem> CachedWeights<S> {
    pub fn new(sys: S) -> Self {
        CachedWeights { sys, offset: (0, 0), cache: Arc::default() }
    }

    fn memo(&self, big: bool, k: i64, f: impl FnOnce() -> Result<S::Value>) -> Result<S::Value> {
        let key = (big, self.offset.0, self.offset.1, k);
        if let Some(v) = self.cache.lock().expect("weight cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = f()?;
        self.cache.lock().expect("weight cache poisoned").insert(key, v.clone());
        Ok(v)
    }
}

impl<S: WeightSystem> WeightSystem for CachedWeights<S> {
    type Value = S::Value;

    fn small_weight(&self, k: i64) -> Result<S::Value> {
        self.memo(false, k, || self.sys.small_weight(k))
    }

    fn big_weight(&self, k: i64) -> Result<S::Value> {
        self.memo(true, k, || self.sys.big_weight(k))
    }

    fn number(&self, n: i64) -> Result<S::Value> {
        self.sys.number(n)
    }

    fn binomial(&self, n: i64, k: i64) -> Result<S::Value> {
        self.sys.binomial(n, k)
    }

    fn rescaled(&self, da: i64, db: i64) -> Self {
        CachedWeights {
            sys: self.sys.rescaled(da, db),
            offset: (self.offset.0 + da, self.offset.1 + db),
            cache: Arc::clone(&self.cache),
        }
    }
}

/// Plain q-weights at an exact rational q; q = 1 gives trivial weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactQ {
    pub q: BigRational,
}

impl ExactQ {
    pub fn new(q: BigRational) -> Self {
        ExactQ { q }
    }

    pub fn trivial() -> Self {
        ExactQ { q: BigRational::one() }
    }
}

impl WeightSystem for ExactQ {
    type Value = BigRational;

    fn small_weight(&self, _k: i64) -> Result<BigRational> {
        Ok(self.q.clone())
    }

    fn big_weight(&self, k: i64) -> Result<BigRational> {
        Ok(ipow(&self.q, k))
    }

    fn number(&self, n: i64) -> Result<BigRational> {
        Ok(q_number(&self.q, n))
    }

    fn binomial(&self, n: i64, k: i64) -> Result<BigRational> {
        Ok(q_binomial(&self.q, n, k))
    }

    fn rescaled(&self, _da: i64, _db: i64) -> Self {
        self.clone()
    }
}

/// Integer power in any ring; negative exponents invert.
pub fn ipow<V: Scalar>(x: &V, k: i64) -> V {
    let mut acc = V::one();
    for _ in 0..k.unsigned_abs() {
        acc = acc * x.clone();
    }
    if k < 0 {
        V::one() / acc
    } else {
        acc
    }
}

/// `[n]_q` as the polynomial sum, valid at q = 1; `[-m]_q = -q^{-m} [m]_q`.
pub fn q_number<V: Scalar>(q: &V, n: i64) -> V {
    if n < 0 {
        return -(ipow(q, n) * q_number(q, -n));
    }
    let mut acc = V::zero();
    let mut pw = V::one();
    for _ in 0..n {
        acc = acc + pw.clone();
        pw = pw * q.clone();
    }
    acc
}

pub fn q_factorial<V: Scalar>(q: &V, n: i64) -> V {
    (1..=n).fold(V::one(), |acc, j| acc * q_number(q, j))
}

/// `[n]_q [n-1]_q ... [n-k+1]_q`.
pub fn q_falling<V: Scalar>(q: &V, n: i64, k: i64) -> V {
    (0..k).fold(V::one(), |acc, j| acc * q_number(q, n - j))
}

pub fn q_binomial<V: Scalar>(q: &V, n: i64, k: i64) -> V {
    if k < 0 || k > n {
        return V::zero();
    }
    q_falling(q, n, k) / q_factorial(q, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ell() -> WeightFamily {
        WeightFamily::Elliptic { a: c(0.8, 0.5), b: c(-0.6, 1.1), q: c(0.55, 0.5), p: Nome::new(c(0.1, 0.2)).unwrap() }
    }

    fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
        (x - y).norm() <= tol * x.norm().max(y.norm()).max(1e-30)
    }

    #[test]
    fn cached_weights_match_direct() {
        let fam = ell();
        let cached = CachedWeights::new(fam);
        for _ in 0..2 {
            for (da, db) in [(0, 0), (-4, -2), (2, 1), (3, -1)] {
                let (s, d) = (cached.rescaled(da, db), fam.rescaled(da, db));
                for k in -3..4 {
                    assert_eq!(s.small_weight(k).unwrap(), d.small_weight(k).unwrap());
                    assert_eq!(s.big_weight(k).unwrap(), d.big_weight(k).unwrap());
                }
            }
        }
        assert_eq!(cached.shifted(1).shifted(-1).small_weight(2).unwrap(), fam.small_weight(2).unwrap());
    }

    #[test]
    fn plain_q_weights() {
        let q = c(0.4, 0.3);
        let fam = WeightFamily::PlainQ { q };
        for k in -3..4 {
            assert_eq!(fam.small_weight(k).unwrap(), q);
        }
    }

    #[test]
    fn small_weight_shift() {
        let fam = ell();
        let lhs = fam.small_weight(5).unwrap();
        let rhs = fam.shifted(2).small_weight(3).unwrap();
        assert!(close(lhs, rhs, 1e-12));
        let lhs = fam.small_weight(5).unwrap();
        let rhs = fam.shifted(1).small_weight(4).unwrap();
        assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn aq_limit_hand_value() {
        let fam = WeightFamily::Aq { a: c(0.3, 0.0), q: c(0.7, 0.0) };
        let expected = (1.0 - 0.3 * 0.7f64.powi(9)) / (1.0 - 0.3 * 0.7f64.powi(7)) / 0.7;
        let got = fam.small_weight(4).unwrap();
        assert!((got.re - expected).abs() < 1e-12 * expected && got.im == 0.0);
    }

    #[test]
    fn big_weight_basics() {
        let fam = ell();
        assert_eq!(fam.big_weight(0).unwrap(), Complex64::one());
        let prod = (1..=5).fold(c1(), |acc, j| acc * fam.small_weight(j).unwrap());
        assert!(close(fam.big_weight(5).unwrap(), prod, 1e-11));
        let lhs = fam.big_weight(5).unwrap();
        let rhs = fam.big_weight(3).unwrap() * fam.shifted(3).big_weight(2).unwrap();
        assert!(close(lhs, rhs, 1e-11));
    }

    #[test]
    fn number_basics() {
        let fam = ell();
        assert_eq!(fam.number(0).unwrap(), Complex64::zero());
        assert_eq!(fam.number(1).unwrap(), Complex64::one());
        let z = c(3.7, 0.2);
        let y = 2;
        let lhs = fam.number_at(z).unwrap();
        let rhs = fam.number(y).unwrap() + fam.big_weight(y).unwrap() * fam.shifted(y).number_at(z - y as f64).unwrap();
        assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn shift_params_arithmetic() {
        let (a, b) = shift_params(c(0.3, 0.1), c(2.0, 0.0), c(0.5, 0.5), 0);
        assert_eq!((a, b), (c(0.3, 0.1), c(2.0, 0.0)));
        let (a, b) = shift_params(c1(), c1(), c(2.0, 0.0), 1);
        assert_eq!((a, b), (c(4.0, 0.0), c(2.0, 0.0)));
    }

    #[test]
    fn binomial_edges_and_recursion() {
        let fam = ell();
        assert_eq!(fam.binomial(0, 0).unwrap(), Complex64::one());
        assert_eq!(fam.binomial(3, 5).unwrap(), Complex64::zero());
        let (n, k) = (3, 2);
        let lhs = fam.binomial(n + 1, k).unwrap();
        let rhs = fam.binomial(n, k).unwrap()
            + fam.binomial(n, k - 1).unwrap() * fam.rescaled(k - 1, 2 * k - 2).big_weight(n + 1 - k).unwrap();
        assert!(close(lhs, rhs, 1e-10));
        assert!(close(fam.binomial(6, 1).unwrap(), fam.number(6).unwrap(), 1e-12));
    }

    #[test]
    fn p_zero_matches_abq() {
        let (a, b, q) = (c(0.8, 0.5), c(-0.6, 1.1), c(0.55, 0.5));
        let e = WeightFamily::Elliptic { a, b, q, p: Nome::zero() };
        let d = WeightFamily::ABq { a, b, q };
        for k in -4..5 {
            assert_eq!(e.small_weight(k).unwrap(), d.small_weight(k).unwrap());
            assert_eq!(e.big_weight(k).unwrap(), d.big_weight(k).unwrap());
            assert_eq!(e.number(k).unwrap(), d.number(k).unwrap());
        }
    }

    #[test]
    fn frak_matches_abq_at_ratio() {
        let (a, b, q, fp) = (c(0.8, 0.5), c(-0.6, 1.1), c(0.55, 0.5), c(0.9, -0.2));
        let f = WeightFamily::FrakPQ { a, b, q, frak_p: fp };
        let d = WeightFamily::ABq { a, b, q: q / fp };
        for k in -4..5 {
            assert!(close(f.small_weight(k).unwrap(), d.small_weight(k).unwrap(), 1e-12));
            assert!(close(f.number(k).unwrap(), d.number(k).unwrap(), 1e-12));
        }
        let z = c(1.3, 0.4);
        assert!(close(f.number_at(z).unwrap(), d.number_at(z).unwrap(), 1e-12));
    }

    #[test]
    fn pole_detected() {
        // denominator theta(a q^{2k-1}) vanishes when a q^{2k-1} = 1
        let q = c(0.5, 0.0);
        let fam = WeightFamily::ABq { a: c(2.0, 0.0), b: c(0.3, 0.0), q };
        assert!(matches!(fam.small_weight(1), Err(Error::PoleEncountered(_))));
    }

    #[test]
    fn q_analogues() {
        let two = BigRational::from_integer(BigInt::from(2));
        assert_eq!(q_number(&two, 3), BigRational::from_integer(BigInt::from(7)));
        let one = BigRational::one();
        assert_eq!(q_factorial(&one, 3), BigRational::from_integer(BigInt::from(6)));
        assert_eq!(q_falling(&one, 4, 2), BigRational::from_integer(BigInt::from(12)));
        assert_eq!(q_binomial(&one, 5, 2), BigRational::from_integer(BigInt::from(10)));
        // [-m]_q = (1 - q^{-m}) / (1 - q)
        let q = c(0.3, 0.4);
        let direct = (c1::<f64>() - powi(q, -3)) / (c1::<f64>() - q);
        assert!(close(q_number(&q, -3), direct, 1e-13));
    }

    #[test]
    fn degenerate_binomials_recursion() {
        let q = c(0.55, 0.5);
        for fam in
            [WeightFamily::Aq { a: c(0.8, 0.5), q }, WeightFamily::ZeroBq { b: c(-0.6, 1.1), q }, WeightFamily::PlainQ { q }]
        {
            for n in 0..5 {
                for k in 0..=n + 1 {
                    let lhs = fam.binomial(n + 1, k).unwrap();
                    let rhs = fam.binomial(n, k).unwrap()
                        + fam.binomial(n, k - 1).unwrap() * fam.rescaled(k - 1, 2 * k - 2).big_weight(n + 1 - k).unwrap();
                    assert!(close(lhs, rhs, 1e-11), "{fam:?} n={n} k={k}");
                }
            }
        }
    }
}
