//! J-attacking rook numbers, generalized Stirling numbers of both kinds and
//! the coloured restricted growth words with the bijection onto placements.

use std::collections::BTreeSet;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::boards::{attack_rows, j_uncancelled_cells, ExtendedBoard, Placement, PlacementKind, SkylineBoard};
use crate::error::{Error, Result};
use crate::file::{file_numbers, FileWeighting};
use crate::scalar::{Real, Scalar};
use crate::weights::{Family, WeightSystem, WeightTable};

/// Weighted sums of J-nonattacking placements indexed by rook count.
pub fn weighted_jump_sums<S: WeightSystem>(board: &ExtendedBoard, j: usize, sys: &S, full_only: bool) -> Result<Vec<S::Value>> {
    board.base.require_j_attacking(j)?;
    let n = board.n() as i64;
    let jj = j as i64;
    let top = board.base.heights().iter().copied().max().unwrap_or(0) as i64;
    let table = WeightTable::small(sys, 1 - top - jj * (n - 1).max(0), jj * (n - 1).max(0) + 1 - board.lowest_row())?;
    let mut totals = vec![S::Value::zero(); board.n() + 1];
    let mut ctx = JumpCtx { board, j, table: &table, full_only };
    let mut rooks = Vec::new();
    ctx.rec(1, &BTreeSet::new(), &mut rooks, S::Value::one(), &mut totals);
    Ok(totals)
}

struct JumpCtx<'a, V> {
    board: &'a ExtendedBoard,
    j: usize,
    table: &'a WeightTable<V>,
    full_only: bool,
}

impl<V: Scalar> JumpCtx<'_, V> {
    fn rec(&mut self, col: usize, attacked: &BTreeSet<i64>, rooks: &mut Vec<i64>, partial: V, totals: &mut [V]) {
        if col > self.board.n() {
            let k = rooks.len();
            totals[k] = totals[k].clone() + partial;
            return;
        }
        let jj = self.j as i64;
        let top = self.board.top(col);
        let mut nw = rooks.iter().filter(|&&y| y > top).count() as i64;
        let mut above = V::one();
        for row in self.board.rows_desc(col) {
            if attacked.contains(&row) {
                if rooks.contains(&row) {
                    nw += 1;
                }
                continue;
            }
            let mut next = attacked.clone();
            next.extend(attack_rows(attacked, row, self.j));
            rooks.push(row);
            self.rec(col + 1, &next, rooks, partial.clone() * above.clone(), totals);
            rooks.pop();
            let k = jj * (col as i64 - 1) + 1 - row - jj * nw;
            above = above * self.table.get(k).clone();
        }
        if !self.full_only {
            self.rec(col + 1, attacked, rooks, partial * above, totals);
        }
    }
}

/// `r^J_k(B)` for `k = 0..=n`.
pub fn rook_numbers_j<S: WeightSystem>(board: &SkylineBoard, j: usize, sys: &S) -> Result<Vec<S::Value>> {
    weighted_jump_sums(&board.extended(0), j, sys, false)
}

pub fn rook_number_j<S: WeightSystem>(board: &SkylineBoard, k: i64, j: usize, sys: &S) -> Result<S::Value> {
    let rs = rook_numbers_j(board, j, sys)?;
    Ok(usize::try_from(k).ok().and_then(|k| rs.get(k).cloned()).unwrap_or_else(S::Value::zero))
}

/// `wt^J(P)` from the uncancelled cells of `P`.
pub fn placement_weight_j<S: WeightSystem>(p: &Placement, j: usize, sys: &S) -> Result<S::Value> {
    let jj = j as i64;
    j_uncancelled_cells(p, j).into_iter().try_fold(S::Value::one(), |acc, (c, nw)| {
        Ok(acc * sys.small_weight(jj * (c.col as i64 - 1) + 1 - c.row - jj * nw as i64)?)
    })
}

/// `prod_i [z + b_i - J(i-1)]` at shifted parameters.
pub fn jump_product_lhs_with<S, F>(board: &SkylineBoard, j: usize, sys: &S, number: &F) -> Result<S::Value>
where
    S: WeightSystem,
    F: Fn(&S, i64) -> Result<S::Value>,
{
    let jj = j as i64;
    board.heights().iter().enumerate().try_fold(S::Value::one(), |acc, (i, &b)| {
        let (i, b) = (i as i64, b as i64);
        Ok(acc * number(&sys.shifted(jj * i - b), b - jj * i)?)
    })
}

/// `sum_k r^J_{n-k} prod_{j<=k} [z - J(j-1)]` at shifted parameters.
pub fn jump_product_rhs_with<S, F>(board: &SkylineBoard, j: usize, sys: &S, number: &F) -> Result<S::Value>
where
    S: WeightSystem,
    F: Fn(&S, i64) -> Result<S::Value>,
{
    let rs = rook_numbers_j(board, j, sys)?;
    let n = board.n();
    let jj = j as i64;
    let mut sum = S::Value::zero();
    for k in 0..=n {
        let mut term = rs[n - k].clone();
        for t in 0..k as i64 {
            term = term * number(&sys.shifted(jj * t), -jj * t)?;
        }
        sum = sum + term;
    }
    Ok(sum)
}

pub fn jump_product_sides<T: Real>(
    board: &SkylineBoard,
    j: usize,
    fam: &Family<T>,
    z: Complex<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    let number = |s: &Family<T>, d: i64| s.number_at(z + T::lift(d as f64));
    Ok((jump_product_lhs_with(board, j, fam, &number)?, jump_product_rhs_with(board, j, fam, &number)?))
}

/// Full J-nonattacking placements on `B_z` summed by weight, against both
/// sides of the product formula at the integer `z`.
pub fn jump_product_enumerated<S: WeightSystem>(board: &SkylineBoard, j: usize, sys: &S, z: usize) -> Result<[S::Value; 3]> {
    let sums = weighted_jump_sums(&board.extended(z), j, sys, true)?;
    let number = |s: &S, d: i64| s.number(z as i64 + d);
    Ok([sums[board.n()].clone(), jump_product_lhs_with(board, j, sys, &number)?, jump_product_rhs_with(board, j, sys, &number)?])
}

/// `S~^{I,J}_{n,k}` for `k = 0..=n` by enumeration on `B_{I,J,n}`.
pub fn gen_stirling2_row<S: WeightSystem>(i: usize, j: usize, n: usize, sys: &S) -> Result<Vec<S::Value>> {
    let r = rook_numbers_j(&SkylineBoard::jump(i, j, n), j, sys)?;
    Ok((0..=n).map(|k| r[n - k].clone()).collect())
}

pub fn gen_stirling2<S: WeightSystem>(i: usize, j: usize, n: usize, k: i64, sys: &S) -> Result<S::Value> {
    if k < 0 || k as usize > n {
        return Ok(S::Value::zero());
    }
    Ok(gen_stirling2_row(i, j, n, sys)?[k as usize].clone())
}

/// Rows `0..=n_max` of `S~^{I,J}` from the recursion.
pub fn gen_stirling2_via_recursion<S: WeightSystem>(i: usize, j: usize, n_max: usize, sys: &S) -> Result<Vec<Vec<S::Value>>> {
    let (ii, jj) = (i as i64, j as i64);
    let s = sys.shifted(-ii);
    let mut rows = vec![vec![S::Value::one()]];
    for n in 0..n_max {
        let prev = &rows[n];
        let mut next = vec![S::Value::zero(); n + 2];
        for k in 0..=n + 1 {
            let kk = k as i64;
            if k >= 1 {
                next[k] = next[k].clone() + s.big_weight(ii + (kk - 1) * jj)? * prev[k - 1].clone();
            }
            if k <= n {
                next[k] = next[k].clone() + s.number(ii + kk * jj)? * prev[k].clone();
            }
        }
        rows.push(next);
    }
    Ok(rows)
}

/// `prod_{t=1}^k W_{aq^{-2I}, bq^{-I}}(I + (t-1)J)`.
pub fn gen_stirling2_prefactor<S: WeightSystem>(i: usize, j: usize, k: usize, sys: &S) -> Result<S::Value> {
    let s = sys.shifted(-(i as i64));
    (0..k).try_fold(S::Value::one(), |acc, t| Ok(acc * s.big_weight((i + t * j) as i64)?))
}

/// `S^{I,J}_{n,k} = S~^{I,J}_{n,k} / prefactor`.
pub fn gen_stirling2_normalized<S: WeightSystem>(i: usize, j: usize, n: usize, k: i64, sys: &S) -> Result<S::Value> {
    if k < 0 || k as usize > n {
        return Ok(S::Value::zero());
    }
    Ok(gen_stirling2(i, j, n, k, sys)? / gen_stirling2_prefactor(i, j, k as usize, sys)?)
}

/// `c^{I,J}_{n,k}` for `k = 0..=n`: above-rook file numbers of `B_{I,J,n}`.
pub fn gen_stirling1_row<S: WeightSystem>(i: usize, j: usize, n: usize, sys: &S) -> Result<Vec<S::Value>> {
    let f = file_numbers(&SkylineBoard::jump(i, j, n), sys, FileWeighting::AboveRook)?;
    Ok((0..=n).map(|k| f[n - k].clone()).collect())
}

pub fn gen_stirling1<S: WeightSystem>(i: usize, j: usize, n: usize, k: i64, sys: &S) -> Result<S::Value> {
    if k < 0 || k as usize > n {
        return Ok(S::Value::zero());
    }
    Ok(gen_stirling1_row(i, j, n, sys)?[k as usize].clone())
}

pub fn gen_stirling1_via_recursion<S: WeightSystem>(i: usize, j: usize, n_max: usize, sys: &S) -> Result<Vec<Vec<S::Value>>> {
    let (ii, jj) = (i as i64, j as i64);
    let mut rows = vec![vec![S::Value::one()]];
    for n in 0..n_max {
        let nn = n as i64;
        let num = sys.shifted(-(ii + nn * (jj - 1))).number(ii + nn * jj)?;
        let prev = &rows[n];
        let mut next = vec![S::Value::zero(); n + 2];
        for k in 0..=n + 1 {
            if k >= 1 {
                next[k] = next[k].clone() + prev[k - 1].clone();
            }
            if k <= n {
                next[k] = next[k].clone() + num.clone() * prev[k].clone();
            }
        }
        rows.push(next);
    }
    Ok(rows)
}

/// Largest deviation of `sum_k S_{n,k} s_{k,r}` from the identity for `n <= n_max`,
/// with `S = S^{0,1}` and `s_{k,r} = (-1)^{k-r} c^{0,1}_{k,r}`.
#[allow(clippy::needless_range_loop)]
pub fn matrix_inverse_residual<S: WeightSystem>(n_max: usize, sys: &S) -> Result<f64> {
    let mut big = Vec::new();
    let mut small = Vec::new();
    for n in 0..=n_max {
        let mut row = Vec::new();
        for k in 0..=n {
            row.push(gen_stirling2_normalized(0, 1, n, k as i64, sys)?);
        }
        big.push(row);
        let c = gen_stirling1_row(0, 1, n, sys)?;
        small.push(c.into_iter().enumerate().map(|(k, v)| if (n - k) % 2 == 1 { -v } else { v }).collect::<Vec<_>>());
    }
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        for r in 0..=n {
            let mut acc = S::Value::zero();
            for k in r..=n {
                acc = acc + big[n][k].clone() * small[k][r].clone();
            }
            let target = if r == n { S::Value::one() } else { S::Value::zero() };
            worst = worst.max((acc - target).to_complex().norm());
        }
    }
    Ok(worst)
}

/// Coloured restricted growth word `(w : e)` with `w_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RgWord {
    pub i: usize,
    pub j: usize,
    /// `w_0, ..., w_n`.
    pub w: Vec<usize>,
    /// `e_1, ..., e_n`.
    pub e: Vec<usize>,
}

impl RgWord {
    pub fn n(&self) -> usize {
        self.e.len()
    }

    /// Number of nonzero blocks.
    pub fn k(&self) -> usize {
        self.w.iter().copied().max().unwrap_or(0)
    }

    /// Running maxima `m_s = max(w_0..w_{s-1})` for `s = 1..=n`.
    fn prefix_max(&self) -> Vec<usize> {
        let mut m = 0;
        self.w[..self.n()]
            .iter()
            .map(|&x| {
                m = m.max(x);
                m
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("rg word {self}: {msg}")));
        if self.i > self.j || self.j == 0 {
            return bad("need 0 <= I <= J and J >= 1");
        }
        if self.w.len() != self.e.len() + 1 || self.w[0] != 0 {
            return bad("shape");
        }
        for (s, &m) in self.prefix_max().iter().enumerate() {
            let (w, e) = (self.w[s + 1], self.e[s]);
            let ok = if w > m {
                w == m + 1 && e == 0
            } else if w == 0 {
                e < self.i
            } else {
                e < self.j
            };
            if !ok {
                return bad("letter or colour out of range");
            }
        }
        Ok(())
    }

    pub fn parse(i: usize, j: usize, text: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("rg word {text:?}"));
        let (w, e) = text.split_once(':').ok_or_else(bad)?;
        let digits = |s: &str| -> Result<Vec<usize>> {
            s.trim().chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect()
        };
        let word = RgWord { i, j, w: digits(w)?, e: digits(e)? };
        word.validate()?;
        Ok(word)
    }
}

impl std::fmt::Display for RgWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let w: String = self.w.iter().map(|d| d.to_string()).collect();
        let e: String = self.e.iter().map(|d| d.to_string()).collect();
        write!(f, "({w} : {e})")
    }
}

/// All words of `RG^{I,J}_{n,k}`.
pub fn enumerate_rg_words(i: usize, j: usize, n: usize, k: usize) -> Result<Vec<RgWord>> {
    if i > j || j == 0 {
        return Err(Error::InvalidParameter(format!("rg words need 0 <= I <= J, J >= 1; got I={i}, J={j}")));
    }
    let mut out = Vec::new();
    let mut w = vec![0];
    let mut e = Vec::new();
    rg_rec(i, j, n, k, 0, &mut w, &mut e, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn rg_rec(i: usize, j: usize, n: usize, k: usize, m: usize, w: &mut Vec<usize>, e: &mut Vec<usize>, out: &mut Vec<RgWord>) {
    if e.len() == n {
        if m == k {
            out.push(RgWord { i, j, w: w.clone(), e: e.clone() });
        }
        return;
    }
    if m + (n - e.len()) < k || m > k {
        return;
    }
    for letter in 0..=m + 1 {
        let colours = if letter > m {
            1
        } else if letter == 0 {
            i
        } else {
            j
        };
        for c in 0..colours {
            w.push(letter);
            e.push(c);
            rg_rec(i, j, n, k, m.max(letter), w, e, out);
            w.pop();
            e.pop();
        }
    }
}

/// Unattacked rows of column `col` given the rows attacked so far, bottom up.
fn available_rows(board: &SkylineBoard, col: usize, attacked: &BTreeSet<i64>) -> Vec<i64> {
    (1..=board.heights()[col - 1] as i64).filter(|r| !attacked.contains(r)).collect()
}

/// The word-to-placement bijection onto `N^J_{n-k}(B_{I,J,n})`.
pub fn phi(word: &RgWord) -> Result<Placement> {
    word.validate()?;
    let (i, j, n) = (word.i, word.j, word.n());
    let board = SkylineBoard::jump(i, j, n);
    let mut p = Placement::empty(PlacementKind::JNonattacking(j), board.extended(0));
    let mut attacked = BTreeSet::new();
    for (s, &m) in word.prefix_max().iter().enumerate() {
        let (w, e) = (word.w[s + 1], word.e[s]);
        let avail = available_rows(&board, s + 1, &attacked);
        debug_assert_eq!(avail.len(), i + j * m);
        if w > m {
            continue;
        }
        let row = avail[i + w * j - e - 1];
        p.rows[s] = Some(row);
        let new = attack_rows(&attacked, row, j);
        attacked.extend(new);
    }
    Ok(p)
}

/// Inverse of [`phi`].
pub fn phi_inverse(p: &Placement, i: usize, j: usize) -> Result<RgWord> {
    let n = p.board.n();
    let board = SkylineBoard::jump(i, j, n);
    if p.board.base != board || p.board.depth != 0 {
        return Err(Error::InvalidPlacement(format!("placement is not on {board}")));
    }
    let mut w = vec![0];
    let mut e = Vec::new();
    let mut m = 0;
    let mut attacked = BTreeSet::new();
    for s in 1..=n {
        let avail = available_rows(&board, s, &attacked);
        if avail.len() != i + j * m {
            return Err(Error::InvalidPlacement(format!("column {s} has {} free cells", avail.len())));
        }
        match p.rows[s - 1] {
            None => {
                m += 1;
                w.push(m);
                e.push(0);
            }
            Some(row) => {
                let idx = avail
                    .iter()
                    .position(|&r| r == row)
                    .ok_or_else(|| Error::InvalidPlacement(format!("rook ({s},{row}) is attacked")))?
                    + 1;
                if idx <= i {
                    w.push(0);
                    e.push(i - idx);
                } else {
                    let t = idx - i;
                    let letter = t.div_ceil(j);
                    w.push(letter);
                    e.push(letter * j - t);
                }
                let new = attack_rows(&attacked, row, j);
                attacked.extend(new);
            }
        }
    }
    let word = RgWord { i, j, w, e };
    word.validate()?;
    Ok(word)
}

/// `prod_s W_{aq^{-2I}, bq^{-I}}(J |{t < s : t in MAX, w_t > w_s}| + e_s)`.
pub fn word_weight<S: WeightSystem>(word: &RgWord, sys: &S) -> Result<S::Value> {
    let s_sys = sys.shifted(-(word.i as i64));
    let mut acc = S::Value::one();
    let mut maxima: Vec<usize> = Vec::new();
    let mut m = 0;
    for s in 1..=word.n() {
        let w = word.w[s];
        if w > m {
            m = w;
            maxima.push(w);
            continue;
        }
        let bigger = maxima.iter().filter(|&&x| x > w).count();
        acc = acc * s_sys.big_weight((word.j * bigger + word.e[s - 1]) as i64)?;
    }
    Ok(acc)
}

/// `D^{I,J}_{n,k}`: sum of word weights over `RG^{I,J}_{n,k}`.
pub fn statistic_d<S: WeightSystem>(i: usize, j: usize, n: usize, k: usize, sys: &S) -> Result<S::Value> {
    enumerate_rg_words(i, j, n, k)?.iter().try_fold(S::Value::zero(), |acc, w| Ok(acc + word_weight(w, sys)?))
}
