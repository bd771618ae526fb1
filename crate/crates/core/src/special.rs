//! Elliptic Stirling, Lah and Abel numbers as rook and file numbers of
//! particular boards, with their recursions, closed forms and q-oracles.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::boards::SkylineBoard;
use crate::error::{Error, Result};
use crate::file::{file_numbers, FileWeighting};
use crate::rook::rook_numbers;
use crate::scalar::{pow, Real, Scalar};
use crate::theta::{powi, qp_shifted_factorial, Nome};
use crate::weights::{ipow, q_binomial, q_factorial, q_number, WeightSystem};

/// Reads `vals[n - k]` as the `k`-th entry for `k = 0..=n`.
fn reversed<V: Scalar>(vals: &[V], n: usize) -> Vec<V> {
    (0..=n).map(|k| vals.get(n - k).cloned().unwrap_or_else(V::zero)).collect()
}

fn entry<V: Scalar>(row: Vec<V>, k: i64) -> V {
    usize::try_from(k).ok().and_then(|k| row.get(k).cloned()).unwrap_or_else(V::zero)
}

/// `S(n, k)` for `k = 0..=n`: rook numbers of the staircase `St_n`.
pub fn stirling2_row<S: WeightSystem>(n: usize, sys: &S) -> Result<Vec<S::Value>> {
    stirling2_r_row(n, 1, sys)
}

pub fn stirling2<S: WeightSystem>(n: usize, k: i64, sys: &S) -> Result<S::Value> {
    Ok(entry(stirling2_row(n, sys)?, k))
}

/// r-restricted `S^{(r)}(n, k)` on the cut-off staircase `St_n^{(r)}`.
pub fn stirling2_r_row<S: WeightSystem>(n: usize, r: usize, sys: &S) -> Result<Vec<S::Value>> {
    let b = SkylineBoard::staircase_r(n, r);
    Ok(reversed(&rook_numbers(&b, sys)?, n))
}

pub fn stirling2_r<S: WeightSystem>(n: usize, k: i64, r: usize, sys: &S) -> Result<S::Value> {
    Ok(entry(stirling2_r_row(n, r, sys)?, k))
}

/// Rows `n = 0..=n_max` grown by `row(n, prev)`, starting from `base` at `n = start`.
/// Rows below `start` are zero.
fn grow<V, F>(start: usize, n_max: usize, mut step: F) -> Result<Vec<Vec<V>>>
where
    V: Scalar,
    F: FnMut(usize, &[V]) -> Result<Vec<V>>,
{
    let mut rows: Vec<Vec<V>> = (0..start.min(n_max + 1)).map(|n| vec![V::zero(); n + 1]).collect();
    if start > n_max {
        return Ok(rows);
    }
    let mut base = vec![V::zero(); start + 1];
    base[start] = V::one();
    rows.push(base);
    for n in start..n_max {
        let next = step(n, &rows[n])?;
        rows.push(next);
    }
    Ok(rows)
}

/// Two-term recursion `X(n+1, k) = A(n, k) X(n, k-1) + B(n, k) X(n, k)`.
fn two_term<V, FA, FB>(start: usize, n_max: usize, a: FA, b: FB) -> Result<Vec<Vec<V>>>
where
    V: Scalar,
    FA: Fn(usize, usize) -> Result<V>,
    FB: Fn(usize, usize) -> Result<V>,
{
    grow(start, n_max, |n, prev: &[V]| {
        let mut next = vec![V::zero(); n + 2];
        for (k, slot) in next.iter_mut().enumerate() {
            let mut v = V::zero();
            if k >= 1 && !prev[k - 1].is_zero() {
                v = v + a(n, k)? * prev[k - 1].clone();
            }
            if k <= n && !prev[k].is_zero() {
                v = v + b(n, k)? * prev[k].clone();
            }
            *slot = v;
        }
        Ok(next)
    })
}

/// `S^{(r)}` rows from `S(n+1, k) = W(k-1) S(n, k-1) + [k] S(n, k)`, seeded
/// with the single entry `S^{(r)}(r, r) = 1`.
pub fn stirling2_r_via_recursion<S: WeightSystem>(n_max: usize, r: usize, sys: &S) -> Result<Vec<Vec<S::Value>>> {
    let start = if r <= 1 { 0 } else { r };
    two_term(start, n_max, |_, k| sys.big_weight(k as i64 - 1), |_, k| sys.number(k as i64))
}

pub fn stirling2_via_recursion<S: WeightSystem>(n_max: usize, sys: &S) -> Result<Vec<Vec<S::Value>>> {
    stirling2_r_via_recursion(n_max, 1, sys)
}

/// Explicit `S(n, k)` for `k <= 3`.
pub fn stirling2_small_k<S: WeightSystem>(n: usize, k: usize, sys: &S) -> Result<S::Value> {
    if k > n {
        return Ok(S::Value::zero());
    }
    let e = n as i64 - 1;
    match k {
        0 => Ok(if n == 0 { S::Value::one() } else { S::Value::zero() }),
        1 => Ok(S::Value::one()),
        2 => Ok(ipow(&sys.number(2)?, e) - S::Value::one()),
        3 => {
            let two_shift = sys.shifted(1).number(2)?;
            let top = ipow(&sys.number(3)?, e) - two_shift.clone() * ipow(&sys.number(2)?, e) + sys.small_weight(2)?;
            Ok(top / two_shift)
        }
        _ => Err(Error::InvalidParameter(format!("no explicit formula for k = {k}"))),
    }
}

/// Carlitz' q-Stirling number of the second kind.
pub fn carlitz_stirling2_q<V: Scalar>(n: usize, k: usize, q: &V) -> V {
    let k = k as i64;
    let mut sum = V::zero();
    for j in 0..=k {
        let term = ipow(q, j * (j - 1) / 2) * q_binomial(q, k, j) * pow(&q_number(q, k - j), n as u32);
        sum = if j % 2 == 0 { sum + term } else { sum - term };
    }
    sum / q_factorial(q, k)
}

/// `L_{n,k}` for `k = 0..=n` on `L_n = [n] x [n-1]`.
pub fn lah_row<S: WeightSystem>(n: usize, sys: &S) -> Result<Vec<S::Value>> {
    lah_r_row(n, 1, sys)
}

pub fn lah<S: WeightSystem>(n: usize, k: i64, sys: &S) -> Result<S::Value> {
    Ok(entry(lah_row(n, sys)?, k))
}

/// `L^{(r)}_{n,k}`: rook numbers of `[n+r-1] x [n-r]` at `(a q^{2(1-r)}, b q^{1-r})`.
pub fn lah_r_row<S: WeightSystem>(n: usize, r: usize, sys: &S) -> Result<Vec<S::Value>> {
    lah_r_row_unshifted(n, r, &sys.shifted(1 - r as i64))
}

/// Same board without the parameter shift.
pub fn lah_r_row_unshifted<S: WeightSystem>(n: usize, r: usize, sys: &S) -> Result<Vec<S::Value>> {
    if n == 0 {
        return Ok(vec![S::Value::one()]);
    }
    if r == 0 || r > n {
        return Err(Error::InvalidParameter(format!("r-restricted Lah needs 1 <= r <= n, got r={r}, n={n}")));
    }
    Ok(reversed(&rook_numbers(&SkylineBoard::lah_r(n, r), sys)?, n))
}

pub fn lah_r<S: WeightSystem>(n: usize, k: i64, r: usize, sys: &S) -> Result<S::Value> {
    Ok(entry(lah_r_row(n, r, sys)?, k))
}

/// `L^{(r)}` rows from `L(n+1, k) = W_{n}(n+k-1) L(n, k-1) + [n+k]_{n} L(n, k)`,
/// subscripts meaning parameters `(a q^{-2n}, b q^{-n})`, seeded with `L(r, r) = 1`.
pub fn lah_r_via_recursion<S: WeightSystem>(n_max: usize, r: usize, sys: &S) -> Result<Vec<Vec<S::Value>>> {
    let start = if r <= 1 { 0 } else { r };
    two_term(
        start,
        n_max,
        |n, k| sys.shifted(-(n as i64)).big_weight((n + k) as i64 - 1),
        |n, k| sys.shifted(-(n as i64)).number((n + k) as i64),
    )
}

pub fn lah_via_recursion<S: WeightSystem>(n_max: usize, sys: &S) -> Result<Vec<Vec<S::Value>>> {
    lah_r_via_recursion(n_max, 1, sys)
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

fn poch<T: Real>(x: Complex<T>, base: Complex<T>, n: i64) -> Complex<T> {
    qp_shifted_factorial(x, base, Nome::zero(), n).expect("p = 0 path has no poles for n >= 0")
}

/// Closed form of the a;q Lah numbers.
pub fn lah_aq_closed<T: Real>(n: i64, k: i64, a: Complex<T>, q: Complex<T>) -> Complex<T> {
    lah_r_aq_closed(n, k, 1, a, q)
}

/// q-Lah numbers `q^{k(k-1)} [n choose k]_q [n-1]_q! / [k-1]_q!`.
pub fn lah_q_closed<V: Scalar>(n: i64, k: i64, q: &V) -> V {
    lah_r_q_closed(n, k, 1, q)
}

/// Closed form of the a;q r-restricted Lah numbers.
pub fn lah_r_aq_closed<T: Real>(n: i64, k: i64, r: i64, a: Complex<T>, q: Complex<T>) -> Complex<T> {
    if n == 0 && k == 0 {
        return Complex::one();
    }
    if k < r || k > n {
        return Complex::zero();
    }
    let q2 = q * q;
    powi(q, binom2(k) - binom2(n) - n * (k - 1) + 2 * binom2(r)) * q_binomial(&q, n + r - 1, k + r - 1) * q_factorial(&q, n - r)
        / q_factorial(&q, k - r)
        * poch(a * powi(q, 1 - n + k), q, n - k)
        * poch(a * powi(q, 1 + 2 * r), q2, k - r)
        / poch(a * powi(q, 3 - 2 * n), q2, n - r)
}

/// `q^{k(k-1) - r(r-1)} [n+r-1 choose k+r-1]_q [n-r]_q! / [k-r]_q!`.
pub fn lah_r_q_closed<V: Scalar>(n: i64, k: i64, r: i64, q: &V) -> V {
    if n == 0 && k == 0 {
        return V::one();
    }
    if k < r || k > n {
        return V::zero();
    }
    ipow(q, k * (k - 1) - r * (r - 1)) * q_binomial(q, n + r - 1, k + r - 1) * q_factorial(q, n - r) / q_factorial(q, k - r)
}

/// `c(n, k)` for `k = 0..=n`: row-only file numbers of `St_n`.
pub fn stirling1_row<S: WeightSystem>(n: usize, sys: &S) -> Result<Vec<S::Value>> {
    stirling1_r_row(n, 1, sys)
}

pub fn stirling1<S: WeightSystem>(n: usize, k: i64, sys: &S) -> Result<S::Value> {
    Ok(entry(stirling1_row(n, sys)?, k))
}

pub fn stirling1_r_row<S: WeightSystem>(n: usize, r: usize, sys: &S) -> Result<Vec<S::Value>> {
    let f = file_numbers(&SkylineBoard::staircase_r(n, r), sys, FileWeighting::RowOnly)?;
    Ok(reversed(&f, n))
}

pub fn stirling1_r<S: WeightSystem>(n: usize, k: i64, r: usize, sys: &S) -> Result<S::Value> {
    Ok(entry(stirling1_r_row(n, r, sys)?, k))
}

/// `c(n+1, k) = [n]_{n} c(n, k) + W_{n}(n) c(n, k-1)`, seeded with `c(r, r) = 1`.
pub fn stirling1_r_via_recursion<S: WeightSystem>(n_max: usize, r: usize, sys: &S) -> Result<Vec<Vec<S::Value>>> {
    let start = if r <= 1 { 0 } else { r };
    two_term(start, n_max, |n, _| sys.shifted(-(n as i64)).big_weight(n as i64), |n, _| sys.shifted(-(n as i64)).number(n as i64))
}

pub fn stirling1_via_recursion<S: WeightSystem>(n_max: usize, sys: &S) -> Result<Vec<Vec<S::Value>>> {
    stirling1_r_via_recursion(n_max, 1, sys)
}

/// `t_{n,k}` for `k = 0..=n`: row-only file numbers of the Abel board.
pub fn abel_row<S: WeightSystem>(n: usize, sys: &S) -> Result<Vec<S::Value>> {
    abel_gen_row(n, n, 1, sys)
}

pub fn abel<S: WeightSystem>(n: usize, k: i64, sys: &S) -> Result<S::Value> {
    Ok(entry(abel_row(n, sys)?, k))
}

/// File numbers of `r` zero columns followed by `n - r` columns of height `m`.
pub fn abel_gen_row<S: WeightSystem>(m: usize, n: usize, r: usize, sys: &S) -> Result<Vec<S::Value>> {
    let f = file_numbers(&SkylineBoard::abel_gen(m, n, r), sys, FileWeighting::RowOnly)?;
    Ok(reversed(&f, n))
}

pub fn abel_gen<S: WeightSystem>(m: usize, n: usize, k: i64, r: usize, sys: &S) -> Result<S::Value> {
    Ok(entry(abel_gen_row(m, n, r, sys)?, k))
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, j| acc * (n - j) / (j + 1))
}

/// `C(n-r, k-r) W_{m}(m)^{k-r} [m]_{m}^{n-k}` with parameters `(a q^{-2m}, b q^{-m})`.
pub fn abel_gen_closed<S: WeightSystem>(m: usize, n: usize, k: i64, r: usize, sys: &S) -> Result<S::Value> {
    let (m, n, r) = (m as i64, n as i64, r as i64);
    let c = binomial(n - r, k - r);
    if c == 0 {
        return Ok(S::Value::zero());
    }
    let s = sys.shifted(-m);
    Ok(S::Value::from_i64(c) * ipow(&s.big_weight(m)?, k - r) * ipow(&s.number(m)?, n - k))
}

pub fn abel_closed<S: WeightSystem>(n: usize, k: i64, sys: &S) -> Result<S::Value> {
    abel_gen_closed(n, n, k, 1, sys)
}

pub fn abel_r_closed<S: WeightSystem>(n: usize, k: i64, r: usize, sys: &S) -> Result<S::Value> {
    abel_gen_closed(n, n, k, r, sys)
}

/// Families of special numbers that can be tabulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialFamily {
    Stirling2,
    Stirling2R(usize),
    Lah,
    LahR(usize),
    Stirling1,
    Stirling1R(usize),
    Abel,
    AbelR(usize),
    AbelGen(usize),
    AbelGenR(usize, usize),
}

impl SpecialFamily {
    /// `stirling2`, `stirling2-r`, `lah`, ..., with `r` and `m` supplied separately.
    pub fn parse(name: &str, r: Option<usize>, m: Option<usize>) -> Result<Self> {
        let need = |v: Option<usize>, what: &str| {
            v.filter(|&x| x >= 1).ok_or_else(|| Error::InvalidParameter(format!("table {name} needs --{what} >= 1")))
        };
        Ok(match name {
            "stirling2" => SpecialFamily::Stirling2,
            "stirling2-r" => SpecialFamily::Stirling2R(need(r, "r")?),
            "lah" => SpecialFamily::Lah,
            "lah-r" => SpecialFamily::LahR(need(r, "r")?),
            "stirling1" => SpecialFamily::Stirling1,
            "stirling1-r" => SpecialFamily::Stirling1R(need(r, "r")?),
            "abel" => SpecialFamily::Abel,
            "abel-r" => SpecialFamily::AbelR(need(r, "r")?),
            "abel-gen" => SpecialFamily::AbelGen(need(m, "m")?),
            "abel-gen-r" => SpecialFamily::AbelGenR(need(m, "m")?, need(r, "r")?),
            other => return Err(Error::InvalidParameter(format!("unknown table family {other:?}"))),
        })
    }

    pub fn name(&self) -> String {
        match self {
            SpecialFamily::Stirling2 => "stirling2".into(),
            SpecialFamily::Stirling2R(r) => format!("stirling2-r{r}"),
            SpecialFamily::Lah => "lah".into(),
            SpecialFamily::LahR(r) => format!("lah-r{r}"),
            SpecialFamily::Stirling1 => "stirling1".into(),
            SpecialFamily::Stirling1R(r) => format!("stirling1-r{r}"),
            SpecialFamily::Abel => "abel".into(),
            SpecialFamily::AbelR(r) => format!("abel-r{r}"),
            SpecialFamily::AbelGen(m) => format!("abel-gen-m{m}"),
            SpecialFamily::AbelGenR(m, r) => format!("abel-gen-m{m}-r{r}"),
        }
    }

    /// Smallest `n` for which the family's board is defined.
    pub fn first_n(&self) -> usize {
        match *self {
            SpecialFamily::Stirling2 | SpecialFamily::Lah | SpecialFamily::Stirling1 => 0,
            SpecialFamily::Abel | SpecialFamily::AbelGen(_) => 1,
            SpecialFamily::Stirling2R(r)
            | SpecialFamily::LahR(r)
            | SpecialFamily::Stirling1R(r)
            | SpecialFamily::AbelR(r)
            | SpecialFamily::AbelGenR(_, r) => r,
        }
    }

    /// Row `n` (entries `k = 0..=n`) by enumeration.
    pub fn row<S: WeightSystem>(&self, n: usize, sys: &S) -> Result<Vec<S::Value>> {
        match *self {
            SpecialFamily::Stirling2 => stirling2_row(n, sys),
            SpecialFamily::Stirling2R(r) => stirling2_r_row(n, r, sys),
            SpecialFamily::Lah => lah_row(n, sys),
            SpecialFamily::LahR(r) => lah_r_row(n, r, sys),
            SpecialFamily::Stirling1 => stirling1_row(n, sys),
            SpecialFamily::Stirling1R(r) => stirling1_r_row(n, r, sys),
            SpecialFamily::Abel => abel_row(n, sys),
            SpecialFamily::AbelR(r) => abel_gen_row(n, n, r, sys),
            SpecialFamily::AbelGen(m) => abel_gen_row(m, n, 1, sys),
            SpecialFamily::AbelGenR(m, r) => abel_gen_row(m, n, r, sys),
        }
    }

    /// Rows `0..=n_max` from the family's recursion or closed form.
    pub fn rows_by_formula<S: WeightSystem>(&self, n_max: usize, sys: &S) -> Result<Vec<Vec<S::Value>>> {
        let closed = |m: Option<usize>, r: usize| -> Result<Vec<Vec<S::Value>>> {
            (0..=n_max)
                .map(|n| {
                    (0..=n as i64)
                        .map(|k| if n < r.max(1) { Ok(S::Value::zero()) } else { abel_gen_closed(m.unwrap_or(n), n, k, r, sys) })
                        .collect()
                })
                .collect()
        };
        match *self {
            SpecialFamily::Stirling2 => stirling2_via_recursion(n_max, sys),
            SpecialFamily::Stirling2R(r) => stirling2_r_via_recursion(n_max, r, sys),
            SpecialFamily::Lah => lah_via_recursion(n_max, sys),
            SpecialFamily::LahR(r) => lah_r_via_recursion(n_max, r, sys),
            SpecialFamily::Stirling1 => stirling1_via_recursion(n_max, sys),
            SpecialFamily::Stirling1R(r) => stirling1_r_via_recursion(n_max, r, sys),
            SpecialFamily::Abel => closed(None, 1),
            SpecialFamily::AbelR(r) => closed(None, r),
            SpecialFamily::AbelGen(m) => closed(Some(m), 1),
            SpecialFamily::AbelGenR(m, r) => closed(Some(m), r),
        }
    }
}

/// Triangular table of a special family, rows `first_n..=n_max`.
#[derive(Clone, Debug)]
pub struct SpecialNumberTable<V> {
    pub family: SpecialFamily,
    pub n_max: usize,
    pub rows: Vec<(usize, Vec<V>)>,
}

pub fn special_table<S: WeightSystem>(family: SpecialFamily, n_max: usize, sys: &S) -> Result<SpecialNumberTable<S::Value>> {
    let rows = (family.first_n()..=n_max).map(|n| Ok((n, family.row(n, sys)?))).collect::<Result<Vec<_>>>()?;
    Ok(SpecialNumberTable { family, n_max, rows })
}
