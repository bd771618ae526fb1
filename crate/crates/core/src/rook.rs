//! Elliptic rook numbers on Ferrers boards: enumeration, recursion, the
//! product formula and closed forms.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::boards::{uncancelled_cells, ExtendedBoard, Placement, SkylineBoard};
use crate::error::Result;
use crate::scalar::{Real, Scalar};
use crate::theta::{powi, qp_shifted_factorial, Nome};
use crate::weights::{q_binomial, q_factorial, Family, WeightSystem, WeightTable};

/// Weighted sums over nonattacking placements on an extended board, indexed
/// by the number of rooks.  `full_only` keeps only placements with a rook in
/// every column.
pub fn weighted_rook_sums<S: WeightSystem>(board: &ExtendedBoard, sys: &S, full_only: bool) -> Result<Vec<S::Value>> {
    let n = board.n() as i64;
    let top = board.base.heights().iter().copied().max().unwrap_or(0) as i64;
    // i - j - r ranges over [1 - top - (n - 1), n - lowest]
    let table = WeightTable::small(sys, 1 - top - n, n - board.lowest_row())?;
    let mut totals = vec![S::Value::zero(); board.n() + 1];
    let mut used = Vec::new();
    rook_rec(board, &table, 1, &mut used, S::Value::one(), &mut totals, full_only);
    Ok(totals)
}

fn rook_rec<V: Scalar>(
    board: &ExtendedBoard,
    table: &WeightTable<V>,
    col: usize,
    used: &mut Vec<i64>,
    partial: V,
    totals: &mut [V],
    full_only: bool,
) {
    if col > board.n() {
        let k = used.len();
        totals[k] = totals[k].clone() + partial;
        return;
    }
    let top = board.top(col);
    let mut nw = used.iter().filter(|&&y| y > top).count() as i64;
    let mut above = V::one();
    for row in board.rows_desc(col) {
        if used.contains(&row) {
            nw += 1;
            continue;
        }
        used.push(row);
        rook_rec(board, table, col + 1, used, partial.clone() * above.clone(), totals, full_only);
        used.pop();
        above = above * table.get(col as i64 - row - nw).clone();
    }
    if !full_only {
        rook_rec(board, table, col + 1, used, partial * above, totals, full_only);
    }
}

/// `r_k` for `k = 0..=n` on a Ferrers board.
pub fn rook_numbers<S: WeightSystem>(board: &SkylineBoard, sys: &S) -> Result<Vec<S::Value>> {
    board.require_ferrers()?;
    weighted_rook_sums(&board.extended(0), sys, false)
}

/// `r_k(B)`; zero outside `0..=n`.
pub fn rook_number<S: WeightSystem>(board: &SkylineBoard, k: i64, sys: &S) -> Result<S::Value> {
    let rs = rook_numbers(board, sys)?;
    Ok(usize::try_from(k).ok().and_then(|k| rs.get(k).cloned()).unwrap_or_else(S::Value::zero))
}

/// Weight of a single placement straight from its uncancelled cells.
pub fn placement_weight<S: WeightSystem>(p: &Placement, sys: &S) -> Result<S::Value> {
    uncancelled_cells(p)
        .into_iter()
        .try_fold(S::Value::one(), |acc, (c, nw)| Ok(acc * sys.small_weight(c.col as i64 - c.row - nw as i64)?))
}

/// `r_k` for all `k` built column by column from the recursion.
pub fn rook_numbers_via_recursion<S: WeightSystem>(board: &SkylineBoard, sys: &S) -> Result<Vec<S::Value>> {
    board.require_ferrers()?;
    let mut r = vec![S::Value::one()];
    for (l, &m) in board.heights().iter().enumerate() {
        let (l, m) = (l as i64, m as i64);
        let s = sys.shifted(l - m);
        let mut next = Vec::with_capacity(r.len() + 1);
        for k in 0..=(l + 1) {
            let keep = match r.get(k as usize) {
                Some(v) => s.big_weight(m - k)? * v.clone(),
                None => S::Value::zero(),
            };
            let add = match k {
                0 => S::Value::zero(),
                _ => match r.get(k as usize - 1) {
                    Some(v) => s.number(m - k + 1)? * v.clone(),
                    None => S::Value::zero(),
                },
            };
            next.push(keep + add);
        }
        r = next;
    }
    Ok(r)
}

pub fn rook_number_via_recursion<S: WeightSystem>(board: &SkylineBoard, k: i64, sys: &S) -> Result<S::Value> {
    let rs = rook_numbers_via_recursion(board, sys)?;
    Ok(usize::try_from(k).ok().and_then(|k| rs.get(k).cloned()).unwrap_or_else(S::Value::zero))
}

/// Both sides of the factorization theorem; `number(s, d)` must return
/// `[z + d]` for the weight system `s`.
pub fn product_formula_sides_with<S, F>(board: &SkylineBoard, sys: &S, number: F) -> Result<(S::Value, S::Value)>
where
    S: WeightSystem,
    F: Fn(&S, i64) -> Result<S::Value>,
{
    let rs = rook_numbers(board, sys)?;
    let n = board.n() as i64;
    let mut lhs = S::Value::zero();
    for k in 0..=n {
        let mut term = rs[(n - k) as usize].clone();
        for j in 1..=k {
            term = term * number(&sys.shifted(j - 1), 1 - j)?;
        }
        lhs = lhs + term;
    }
    let mut rhs = S::Value::one();
    for (i, &b) in board.heights().iter().enumerate() {
        let (i, b) = (i as i64 + 1, b as i64);
        rhs = rhs * number(&sys.shifted(i - 1 - b), b - i + 1)?;
    }
    Ok((lhs, rhs))
}

/// Factorization theorem at complex `z`.
pub fn product_formula_sides<T: Real>(board: &SkylineBoard, fam: &Family<T>, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    product_formula_sides_with(board, fam, |s, d| s.number_at(z + T::lift(d as f64)))
}

/// `prod_i [b_i - i + 1]` at the shifted parameters.
pub fn full_placement_product<S: WeightSystem>(board: &SkylineBoard, sys: &S, extra: i64) -> Result<S::Value> {
    board.heights().iter().enumerate().try_fold(S::Value::one(), |acc, (i, &b)| {
        let (i, b) = (i as i64 + 1, b as i64);
        Ok(acc * sys.shifted(i - 1 - b).number(extra + b - i + 1)?)
    })
}

/// Sum of weights of full placements on `B_k` versus `prod_i [k + b_i - i + 1]`.
pub fn max_identity_sides<S: WeightSystem>(board: &SkylineBoard, sys: &S, k: usize) -> Result<(S::Value, S::Value)> {
    board.require_ferrers()?;
    let sums = weighted_rook_sums(&board.extended(k), sys, true)?;
    let lhs = sums[board.n()].clone();
    Ok((lhs, full_placement_product(board, sys, k as i64)?))
}

/// q-rook number: `sum_P q^{#uncancelled cells}`.
pub fn q_rook_number<V: Scalar>(board: &SkylineBoard, k: usize, q: &V) -> Result<V> {
    let mut total = V::zero();
    let ext = board.extended(0);
    crate::boards::for_each_placement(&ext, crate::boards::PlacementKind::NonattackingRook, Some(k), |rows| {
        let p = Placement { kind: crate::boards::PlacementKind::NonattackingRook, board: ext.clone(), rows: rows.to_vec() };
        let u = uncancelled_cells(&p).len();
        total = total.clone() + crate::scalar::pow(q, u as u32);
    })?;
    Ok(total)
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Closed form of `r_k(a;q; [l] x [m])` (`l` columns of height `m`).
pub fn rect_rook_number_aq<T: Real>(l: i64, m: i64, k: i64, a: Complex<T>, q: Complex<T>) -> Complex<T> {
    if k < 0 || k > l.min(m) {
        return Complex::zero();
    }
    let z = Nome::zero();
    let poch = |x: Complex<T>, base: Complex<T>, n: i64| qp_shifted_factorial(x, base, z, n).expect("p = 0 path");
    let q2 = q * q;
    powi(q, binom2(k + 1) - l * m) * q_binomial(&q, l, k) * q_factorial(&q, m) / q_factorial(&q, m - k)
        * poch(a * powi(q, l - m - k), q, k)
        * poch(a * powi(q, 1 + 2 * l - 2 * m), q2, m - k)
        / poch(a * powi(q, 1 - 2 * m), q2, m)
}
