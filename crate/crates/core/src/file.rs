//! Elliptic file numbers on skyline boards under the row-only and the
//! above-rook weightings.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::boards::{cells_above_rooks, file_uncancelled_cells, Placement, SkylineBoard};
use crate::error::Result;
use crate::scalar::Real;
use crate::weights::{Family, WeightSystem, WeightTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileWeighting {
    /// Uncancelled cell `(i, j)` weighs `w(1 - j)`.
    RowOnly,
    /// Cell `(i, j)` strictly above a rook weighs `w(i - j)`.
    AboveRook,
}

/// Row-only and above-rook file numbers `f_k`, `k = 0..=n`, from one pass.
/// Row-only and above-rook sequences side by side.
type Pair<V> = (Vec<V>, Vec<V>);

pub fn file_numbers_both<S: WeightSystem>(board: &SkylineBoard, sys: &S) -> Result<Pair<S::Value>> {
    let n = board.n();
    let top = board.heights().iter().copied().max().unwrap_or(0) as i64;
    let table = WeightTable::small(sys, 1 - top, n as i64)?;
    // per column: weights of the cells above row y, from the top down
    let columns: Vec<Pair<S::Value>> = board
        .heights()
        .iter()
        .enumerate()
        .map(|(i, &h)| {
            let h = h as i64;
            let mut row_only = vec![S::Value::one()];
            let mut above = vec![S::Value::one()];
            for j in (1..=h).rev() {
                let r = row_only.last().unwrap().clone() * table.get(1 - j).clone();
                let a = above.last().unwrap().clone() * table.get(i as i64 + 1 - j).clone();
                row_only.push(r);
                above.push(a);
            }
            (row_only, above)
        })
        .collect();
    // both weightings factor over columns: a column either stays empty or
    // holds its rook in one of its h rows
    let mut row_tot = vec![S::Value::one()];
    let mut above_tot = vec![S::Value::one()];
    for (&h, (row_only, above)) in board.heights().iter().zip(&columns) {
        let row_rook = row_only[..h].iter().fold(S::Value::zero(), |acc, v| acc + v.clone());
        let above_rook = above[..h].iter().fold(S::Value::zero(), |acc, v| acc + v.clone());
        row_tot = times_linear(&row_tot, &row_only[h], &row_rook);
        above_tot = times_linear(&above_tot, &S::Value::one(), &above_rook);
    }
    Ok((row_tot, above_tot))
}

/// `poly * (c0 + c1 x)`.
fn times_linear<V: crate::scalar::Scalar>(poly: &[V], c0: &V, c1: &V) -> Vec<V> {
    let mut out = vec![V::zero(); poly.len() + 1];
    for (k, v) in poly.iter().enumerate() {
        out[k] = out[k].clone() + v.clone() * c0.clone();
        out[k + 1] = out[k + 1].clone() + v.clone() * c1.clone();
    }
    out
}

pub fn file_numbers<S: WeightSystem>(board: &SkylineBoard, sys: &S, weighting: FileWeighting) -> Result<Vec<S::Value>> {
    let (r, a) = file_numbers_both(board, sys)?;
    Ok(match weighting {
        FileWeighting::RowOnly => r,
        FileWeighting::AboveRook => a,
    })
}

pub fn file_number<S: WeightSystem>(board: &SkylineBoard, k: i64, sys: &S, weighting: FileWeighting) -> Result<S::Value> {
    let fs = file_numbers(board, sys, weighting)?;
    Ok(usize::try_from(k).ok().and_then(|k| fs.get(k).cloned()).unwrap_or_else(S::Value::zero))
}

/// Weight of one file placement straight from its cell sets.
pub fn file_placement_weight<S: WeightSystem>(q: &Placement, sys: &S, weighting: FileWeighting) -> Result<S::Value> {
    match weighting {
        FileWeighting::RowOnly => {
            file_uncancelled_cells(q).into_iter().try_fold(S::Value::one(), |acc, c| Ok(acc * sys.small_weight(1 - c.row)?))
        }
        FileWeighting::AboveRook => {
            cells_above_rooks(q).into_iter().try_fold(S::Value::one(), |acc, c| Ok(acc * sys.small_weight(c.col as i64 - c.row)?))
        }
    }
}

/// Row-only `f_k` for all `k`, adding columns one at a time.
pub fn file_numbers_via_recursion<S: WeightSystem>(board: &SkylineBoard, sys: &S) -> Result<Vec<S::Value>> {
    let mut f = vec![S::Value::one()];
    for &m in board.heights() {
        let m = m as i64;
        let s = sys.shifted(-m);
        let (big, num) = (s.big_weight(m)?, s.number(m)?);
        let mut next = vec![S::Value::zero(); f.len() + 1];
        for (k, v) in f.iter().enumerate() {
            next[k] = next[k].clone() + big.clone() * v.clone();
            next[k + 1] = next[k + 1].clone() + num.clone() * v.clone();
        }
        f = next;
    }
    Ok(f)
}

pub fn file_number_via_recursion<S: WeightSystem>(board: &SkylineBoard, k: i64, sys: &S) -> Result<S::Value> {
    let fs = file_numbers_via_recursion(board, sys)?;
    Ok(usize::try_from(k).ok().and_then(|k| fs.get(k).cloned()).unwrap_or_else(S::Value::zero))
}

/// `prod_i [z + c_i]` at shifted parameters versus `sum_k f_{n-k} [z]^k`;
/// `number(s, d)` returns `[z + d]` for system `s`.
pub fn file_product_sides_with<S, F>(board: &SkylineBoard, sys: &S, number: F) -> Result<(S::Value, S::Value)>
where
    S: WeightSystem,
    F: Fn(&S, i64) -> Result<S::Value>,
{
    let f = file_numbers(board, sys, FileWeighting::RowOnly)?;
    let mut lhs = S::Value::one();
    for &c in board.heights() {
        let c = c as i64;
        lhs = lhs * number(&sys.shifted(-c), c)?;
    }
    Ok((lhs, power_sum(&f, number(sys, 0)?)))
}

/// `prod_i ([z] + [c_i]_{shifted})` versus `sum_k f~_{n-k} [z]^k`.
pub fn file_above_product_sides_with<S, F>(board: &SkylineBoard, sys: &S, number: F) -> Result<(S::Value, S::Value)>
where
    S: WeightSystem,
    F: Fn(&S, i64) -> Result<S::Value>,
{
    let f = file_numbers(board, sys, FileWeighting::AboveRook)?;
    let z = number(sys, 0)?;
    let mut lhs = S::Value::one();
    for (i, &c) in board.heights().iter().enumerate() {
        let (i, c) = (i as i64 + 1, c as i64);
        lhs = lhs * (z.clone() + sys.shifted(i - 1 - c).number(c)?);
    }
    Ok((lhs, power_sum(&f, z)))
}

/// `sum_k f[n-k] x^k`.
fn power_sum<V: crate::scalar::Scalar>(f: &[V], x: V) -> V {
    let n = f.len() - 1;
    let mut acc = V::zero();
    let mut pw = V::one();
    for k in 0..=n {
        acc = acc + f[n - k].clone() * pw.clone();
        pw = pw * x.clone();
    }
    acc
}

pub fn file_product_sides<T: Real>(board: &SkylineBoard, fam: &Family<T>, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    file_product_sides_with(board, fam, |s, d| s.number_at(z + T::lift(d as f64)))
}

pub fn file_above_product_sides<T: Real>(
    board: &SkylineBoard,
    fam: &Family<T>,
    z: Complex<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    file_above_product_sides_with(board, fam, |s, d| s.number_at(z + T::lift(d as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boards::{enumerate_placements, PlacementKind};
    use crate::scalar::rel_err;
    use crate::theta::Nome;
    use crate::weights::WeightFamily;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ell() -> WeightFamily {
        WeightFamily::Elliptic { a: c(1.3, -0.4), b: c(0.5, 0.9), q: c(-0.3, 0.7), p: Nome::new(c(0.15, -0.1)).unwrap() }
    }

    #[test]
    fn engine_matches_definition() {
        let fam = ell();
        let b = SkylineBoard::new(vec![4, 2, 1, 5, 3]);
        let (row, above) = file_numbers_both(&b, &fam).unwrap();
        for k in 0..=5 {
            let ps = enumerate_placements(&b.extended(0), PlacementKind::File, k).unwrap();
            let r: Complex64 = ps.iter().map(|p| file_placement_weight(p, &fam, FileWeighting::RowOnly).unwrap()).sum();
            let a: Complex64 = ps.iter().map(|p| file_placement_weight(p, &fam, FileWeighting::AboveRook).unwrap()).sum();
            assert!(rel_err(&row[k], &r) < 1e-10, "{k} {} {}", row[k], r);
            assert!(rel_err(&above[k], &a) < 1e-10, "{k} {} {}", above[k], a);
        }
    }

    #[test]
    fn small_values() {
        let fam = ell();
        let b = SkylineBoard::new(vec![1, 1]);
        let f1 = file_number(&b, 1, &fam, FileWeighting::RowOnly).unwrap();
        assert!(rel_err(&f1, &(fam.small_weight(0).unwrap() * 2.0)) < 1e-14);
        let b = SkylineBoard::new(vec![2, 3]);
        let f0 = file_number(&b, 0, &fam, FileWeighting::RowOnly).unwrap();
        let w = |k| fam.small_weight(k).unwrap();
        assert!(rel_err(&f0, &(w(0) * w(-1) * w(0) * w(-1) * w(-2))) < 1e-13);
        assert_eq!(file_number(&b, 0, &fam, FileWeighting::AboveRook).unwrap(), Complex64::one());
        assert_eq!(file_number(&b, -1, &fam, FileWeighting::RowOnly).unwrap(), Complex64::zero());
    }

    #[test]
    fn recursion_small_board() {
        let fam = ell();
        let b = SkylineBoard::new(vec![2, 3]);
        let e = file_number(&b, 1, &fam, FileWeighting::RowOnly).unwrap();
        let r = file_number_via_recursion(&b, 1, &fam).unwrap();
        assert!(rel_err(&e, &r) < 1e-10);
        let empty = SkylineBoard::new(vec![]);
        assert_eq!(file_number_via_recursion(&empty, 0, &fam).unwrap(), Complex64::one());
        assert_eq!(file_number_via_recursion(&empty, -1, &fam).unwrap(), Complex64::zero());
    }

    #[test]
    fn product_formulas() {
        let fam = ell();
        let z = c(1.7, -0.3);
        let (l, r) = file_product_sides(&SkylineBoard::new(vec![4, 2, 1, 5, 3]), &fam, z).unwrap();
        assert!(rel_err(&l, &r) < 1e-8);
        let (l, r) = file_above_product_sides(&SkylineBoard::new(vec![1, 2, 2]), &fam, z).unwrap();
        assert!(rel_err(&l, &r) < 1e-8);
        let (l, r) = file_above_product_sides(&SkylineBoard::new(vec![0, 0, 0]), &fam, z).unwrap();
        assert!(rel_err(&l, &r) < 1e-12);
    }
}
