//! Skyline boards, extended boards below the ground, placements and the three
//! cancellation rules (rook, file, J-attacking).

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// `B(c_1, ..., c_n)`: column `i` holds rows `1..=c_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SkylineBoard {
    heights: Vec<usize>,
}

impl SkylineBoard {
    pub fn new(heights: Vec<usize>) -> Self {
        SkylineBoard { heights }
    }

    /// Comma separated heights, e.g. `"0,2,3,5,5"`; the empty string is the empty board.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(SkylineBoard::new(vec![]));
        }
        spec.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::BadBoardSpec(format!("bad height {t:?} in {spec:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(SkylineBoard::new)
    }

    /// `[cols] x [rows]`.
    pub fn rectangle(cols: usize, rows: usize) -> Self {
        SkylineBoard::new(vec![rows; cols])
    }

    /// `B(0, 1, ..., n-1)`.
    pub fn staircase(n: usize) -> Self {
        Self::staircase_r(n, 1)
    }

    /// `B(0, ..., 0, r, r+1, ..., n-1)` with `r` leading zero columns.
    pub fn staircase_r(n: usize, r: usize) -> Self {
        SkylineBoard::new((1..=n).map(|i| if i <= r { 0 } else { i - 1 }).collect())
    }

    /// `[n] x [n-1]`.
    pub fn lah(n: usize) -> Self {
        Self::lah_r(n, 1)
    }

    /// `[n+r-1] x [n-r]`.
    pub fn lah_r(n: usize, r: usize) -> Self {
        SkylineBoard::rectangle(n + r - 1, n.saturating_sub(r))
    }

    /// `B(0, n, ..., n)`.
    pub fn abel(n: usize) -> Self {
        Self::abel_gen(n, n, 1)
    }

    /// `r` zero columns followed by `n - r` columns of height `m`.
    pub fn abel_gen(m: usize, n: usize, r: usize) -> Self {
        SkylineBoard::new((1..=n).map(|i| if i <= r { 0 } else { m }).collect())
    }

    /// `B(I, I+J, ..., I+(n-1)J)`.
    pub fn jump(i: usize, j: usize, n: usize) -> Self {
        SkylineBoard::new((0..n).map(|t| i + t * j).collect())
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn n(&self) -> usize {
        self.heights.len()
    }

    pub fn area(&self) -> usize {
        self.heights.iter().sum()
    }

    pub fn is_ferrers(&self) -> bool {
        self.heights.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_j_attacking(&self, j: usize) -> bool {
        self.heights.windows(2).all(|w| w[0] == 0 || w[1] + 1 >= w[0] + j)
    }

    pub fn extended(&self, depth: usize) -> ExtendedBoard {
        ExtendedBoard { base: self.clone(), depth }
    }

    pub fn require_ferrers(&self) -> Result<()> {
        if self.is_ferrers() {
            Ok(())
        } else {
            Err(Error::NotFerrers(self.heights.clone()))
        }
    }

    pub fn require_j_attacking(&self, j: usize) -> Result<()> {
        if j >= 1 && self.is_j_attacking(j) {
            Ok(())
        } else {
            Err(Error::NotJAttackingBoard { heights: self.heights.clone(), j })
        }
    }
}

impl fmt::Display for SkylineBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hs: Vec<String> = self.heights.iter().map(|h| h.to_string()).collect();
        write!(f, "B({})", hs.join(","))
    }
}

/// A skyline board with `depth` rows `0, -1, ..., 1-depth` appended below the ground.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExtendedBoard {
    pub base: SkylineBoard,
    pub depth: usize,
}

impl ExtendedBoard {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn lowest_row(&self) -> i64 {
        1 - self.depth as i64
    }

    pub fn top(&self, col: usize) -> i64 {
        self.base.heights[col - 1] as i64
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.col >= 1 && cell.col <= self.n() && cell.row >= self.lowest_row() && cell.row <= self.top(cell.col)
    }

    /// Rows of column `col`, top to bottom.
    pub fn rows_desc(&self, col: usize) -> impl Iterator<Item = i64> {
        (self.lowest_row()..=self.top(col)).rev()
    }
}

impl From<&SkylineBoard> for ExtendedBoard {
    fn from(b: &SkylineBoard) -> Self {
        b.extended(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub col: usize,
    pub row: i64,
}

impl Cell {
    pub fn new(col: usize, row: i64) -> Self {
        Cell { col, row }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PlacementKind {
    NonattackingRook,
    File,
    JNonattacking(usize),
}

/// Rooks recorded as the row of the rook in each column (or `None`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Placement {
    pub kind: PlacementKind,
    pub board: ExtendedBoard,
    pub rows: Vec<Option<i64>>,
}

impl Placement {
    pub fn empty(kind: PlacementKind, board: ExtendedBoard) -> Self {
        let n = board.n();
        Placement { kind, board, rows: vec![None; n] }
    }

    /// Builds a placement from cells, checking the kind's invariants.
    pub fn from_cells(kind: PlacementKind, board: ExtendedBoard, cells: &[Cell]) -> Result<Self> {
        let mut p = Placement::empty(kind, board);
        for &c in cells {
            if !p.board.contains(c) {
                return Err(Error::InvalidPlacement(format!("cell {c:?} not on the board")));
            }
            if p.rows[c.col - 1].replace(c.row).is_some() {
                return Err(Error::InvalidPlacement(format!("two rooks in column {}", c.col)));
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.len() != self.board.n() {
            return Err(Error::InvalidPlacement("row vector length".into()));
        }
        for c in self.cells() {
            if !self.board.contains(c) {
                return Err(Error::InvalidPlacement(format!("cell {c:?} not on the board")));
            }
        }
        match self.kind {
            PlacementKind::File => Ok(()),
            PlacementKind::NonattackingRook => {
                let mut seen = BTreeSet::new();
                for c in self.cells() {
                    if !seen.insert(c.row) {
                        return Err(Error::InvalidPlacement(format!("two rooks in row {}", c.row)));
                    }
                }
                Ok(())
            }
            PlacementKind::JNonattacking(j) => {
                let mut attacked = BTreeSet::new();
                for c in self.cells() {
                    if attacked.contains(&c.row) {
                        return Err(Error::InvalidPlacement(format!("rook {c:?} is {j}-attacked")));
                    }
                    attacked.extend(attack_rows(&attacked, c.row, j));
                }
                Ok(())
            }
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.rows.iter().enumerate().filter_map(|(i, r)| r.map(|row| Cell::new(i + 1, row))).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Rows attacked by a rook in row `y` given rows already attacked further left.
/// Above ground: the first `j` free rows weakly above `y`.  Below ground: free
/// rows from `y` up to the ground, then the remaining ones going down from `y - 1`.
pub fn attack_rows(attacked: &BTreeSet<i64>, y: i64, j: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(j);
    if y >= 1 {
        let mut row = y;
        while out.len() < j {
            if !attacked.contains(&row) {
                out.push(row);
            }
            row += 1;
        }
        return out;
    }
    let mut row = y;
    while out.len() < j && row <= 0 {
        if !attacked.contains(&row) {
            out.push(row);
        }
        row += 1;
    }
    let mut row = y - 1;
    while out.len() < j {
        if !attacked.contains(&row) {
            out.push(row);
        }
        row -= 1;
    }
    out
}

#[derive(Clone)]
enum State {
    Rook(BTreeSet<i64>),
    File,
    Jump(usize, BTreeSet<i64>),
}

impl State {
    fn candidates(&self, board: &ExtendedBoard, col: usize) -> Vec<i64> {
        let rows = board.rows_desc(col);
        match self {
            State::Rook(used) | State::Jump(_, used) => rows.filter(|r| !used.contains(r)).collect(),
            State::File => rows.collect(),
        }
    }
}

/// Calls `f` with the row vector of every placement of the given kind, in
/// column-major backtracking order.  `count = None` visits all sizes.
pub fn for_each_placement<F>(board: &ExtendedBoard, kind: PlacementKind, count: Option<usize>, mut f: F) -> Result<()>
where
    F: FnMut(&[Option<i64>]),
{
    let state = match kind {
        PlacementKind::NonattackingRook => State::Rook(BTreeSet::new()),
        PlacementKind::File => State::File,
        PlacementKind::JNonattacking(j) => {
            board.base.require_j_attacking(j)?;
            State::Jump(j, BTreeSet::new())
        }
    };
    let mut rows = Vec::with_capacity(board.n());
    visit(board, state, count, 0, &mut rows, &mut f);
    Ok(())
}

fn visit<F>(board: &ExtendedBoard, state: State, count: Option<usize>, placed: usize, rows: &mut Vec<Option<i64>>, f: &mut F)
where
    F: FnMut(&[Option<i64>]),
{
    let col = rows.len() + 1;
    let remaining = board.n() + 1 - col;
    if let Some(k) = count {
        if placed > k || placed + remaining < k {
            return;
        }
    }
    if col > board.n() {
        f(rows);
        return;
    }
    let cands = state.candidates(board, col);
    rows.push(None);
    visit(board, state.clone(), count, placed, rows, f);
    for y in cands {
        *rows.last_mut().unwrap() = Some(y);
        let next = match &state {
            State::Rook(used) => {
                let mut u = used.clone();
                u.insert(y);
                State::Rook(u)
            }
            State::File => State::File,
            State::Jump(j, att) => {
                let mut a = att.clone();
                let new = attack_rows(att, y, *j);
                a.extend(new);
                State::Jump(*j, a)
            }
        };
        visit(board, next, count, placed + 1, rows, f);
    }
    rows.pop();
}

pub fn enumerate_placements(board: &ExtendedBoard, kind: PlacementKind, k: usize) -> Result<Vec<Placement>> {
    let mut out = Vec::new();
    for_each_placement(board, kind, Some(k), |rows| out.push(Placement { kind, board: board.clone(), rows: rows.to_vec() }))?;
    Ok(out)
}

pub fn count_placements(board: &ExtendedBoard, kind: PlacementKind, k: usize) -> Result<usize> {
    let mut n = 0;
    for_each_placement(board, kind, Some(k), |_| n += 1)?;
    Ok(n)
}

/// Number of rooks of `rows` strictly north-west of `(col, row)`.
fn north_west(rows: &[Option<i64>], col: usize, row: i64) -> usize {
    rows[..col - 1].iter().filter(|r| matches!(r, Some(y) if *y > row)).count()
}

/// Uncancelled cells of a nonattacking placement with their north-west rook counts.
pub fn uncancelled_cells(p: &Placement) -> Vec<(Cell, usize)> {
    let mut out = Vec::new();
    for col in 1..=p.board.n() {
        let own = p.rows[col - 1];
        for row in p.board.rows_desc(col) {
            if let Some(y) = own {
                if row <= y {
                    break;
                }
            }
            let cancelled_by_row = p.rows[..col - 1].contains(&Some(row));
            if !cancelled_by_row {
                out.push((Cell::new(col, row), north_west(&p.rows, col, row)));
            }
        }
    }
    out.sort();
    out
}

/// Cells neither occupied nor below a rook of a file placement.
pub fn file_uncancelled_cells(q: &Placement) -> Vec<Cell> {
    let mut out = Vec::new();
    for col in 1..=q.board.n() {
        let own = q.rows[col - 1];
        for row in q.board.rows_desc(col) {
            if matches!(own, Some(y) if row <= y) {
                break;
            }
            out.push(Cell::new(col, row));
        }
    }
    out.sort();
    out
}

/// Cells strictly above some rook of a file placement.
pub fn cells_above_rooks(q: &Placement) -> Vec<Cell> {
    let mut out = Vec::new();
    for c in q.cells() {
        for row in (c.row + 1)..=q.board.top(c.col) {
            out.push(Cell::new(c.col, row));
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackSet {
    pub rook: Cell,
    pub rows: Vec<i64>,
    /// Board cells in the attacked rows, strictly right of the rook.
    pub cells: Vec<Cell>,
}

/// Attack sets of `rooks` (one per column, processed left to right).
pub fn j_attacked_cells(board: &ExtendedBoard, rooks: &[Cell], j: usize) -> Vec<AttackSet> {
    let mut rooks = rooks.to_vec();
    rooks.sort();
    let mut attacked = BTreeSet::new();
    let mut out = Vec::new();
    for rook in rooks {
        let mut rows = attack_rows(&attacked, rook.row, j);
        attacked.extend(rows.iter().copied());
        rows.sort();
        let cells = ((rook.col + 1)..=board.n())
            .flat_map(|c| rows.iter().map(move |&r| Cell::new(c, r)))
            .filter(|&cell| board.contains(cell))
            .collect();
        out.push(AttackSet { rook, rows, cells });
    }
    out
}

/// Uncancelled cells of a J-nonattacking placement with their north-west rook counts.
pub fn j_uncancelled_cells(p: &Placement, j: usize) -> Vec<(Cell, usize)> {
    let mut attacked = BTreeSet::new();
    let mut out = Vec::new();
    for col in 1..=p.board.n() {
        let own = p.rows[col - 1];
        for row in p.board.rows_desc(col) {
            if matches!(own, Some(y) if row <= y) {
                break;
            }
            if !attacked.contains(&row) {
                out.push((Cell::new(col, row), north_west(&p.rows, col, row)));
            }
        }
        if let Some(y) = own {
            let new = attack_rows(&attacked, y, j);
            attacked.extend(new);
        }
    }
    out.sort();
    out
}

/// Depth of the lowest rook below the ground, 0 if none.
pub fn max_stat(p: &Placement) -> usize {
    p.rows.iter().flatten().map(|&y| if y >= 1 { 0 } else { (1 - y) as usize }).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(h: &[usize]) -> ExtendedBoard {
        SkylineBoard::new(h.to_vec()).extended(0)
    }

    #[test]
    fn simple_counts() {
        let sq = ext(&[3, 3, 3]);
        assert_eq!(count_placements(&sq, PlacementKind::NonattackingRook, 3).unwrap(), 6);
        assert_eq!(count_placements(&ext(&[0, 2, 3, 5, 5]), PlacementKind::NonattackingRook, 0).unwrap(), 1);
        assert_eq!(count_placements(&ext(&[2, 2]), PlacementKind::File, 2).unwrap(), 4);
    }

    #[test]
    fn parse_boards() {
        assert_eq!(SkylineBoard::parse("0,2,3,5,5").unwrap().heights(), &[0, 2, 3, 5, 5]);
        assert_eq!(SkylineBoard::parse("").unwrap().n(), 0);
        assert!(SkylineBoard::parse("1,x").is_err());
        assert!(SkylineBoard::parse("1,-2").is_err());
    }

    #[test]
    fn named_boards() {
        assert_eq!(SkylineBoard::staircase(4).heights(), &[0, 1, 2, 3]);
        assert_eq!(SkylineBoard::staircase_r(6, 3).heights(), &[0, 0, 0, 3, 4, 5]);
        assert_eq!(SkylineBoard::lah_r(8, 2).heights(), &[6; 9]);
        assert_eq!(SkylineBoard::abel(4).heights(), &[0, 4, 4, 4]);
        assert_eq!(SkylineBoard::jump(2, 3, 3).heights(), &[2, 5, 8]);
        assert!(SkylineBoard::jump(2, 3, 4).is_j_attacking(3));
        assert!(!SkylineBoard::new(vec![2, 3]).is_j_attacking(3));
        assert!(SkylineBoard::new(vec![0, 1]).is_j_attacking(3));
    }

    #[test]
    fn rook_cancellation_figure() {
        let b = ext(&[0, 2, 3, 5, 5]);
        let cells = [Cell::new(2, 2), Cell::new(3, 1), Cell::new(4, 4), Cell::new(5, 3)];
        let p = Placement::from_cells(PlacementKind::NonattackingRook, b.clone(), &cells).unwrap();
        let u: Vec<Cell> = uncancelled_cells(&p).into_iter().map(|(c, _)| c).collect();
        assert_eq!(u, vec![Cell::new(3, 3), Cell::new(4, 5), Cell::new(5, 5)]);
        assert_eq!(b.base.area() - u.len() - cells.len(), 8);
    }

    #[test]
    fn rook_cancellation_square() {
        let b = ext(&[3, 3, 3]);
        let p = Placement::from_cells(PlacementKind::NonattackingRook, b, &[Cell::new(1, 3), Cell::new(3, 1)]).unwrap();
        let u = uncancelled_cells(&p);
        assert_eq!(u, vec![(Cell::new(2, 1), 1), (Cell::new(2, 2), 1), (Cell::new(3, 2), 1)]);
        let e = Placement::empty(PlacementKind::NonattackingRook, ext(&[1, 1]));
        assert_eq!(uncancelled_cells(&e), vec![(Cell::new(1, 1), 0), (Cell::new(2, 1), 0)]);
    }

    #[test]
    fn invalid_placements() {
        let b = ext(&[3, 3]);
        assert!(Placement::from_cells(PlacementKind::NonattackingRook, b.clone(), &[Cell::new(1, 2), Cell::new(2, 2)]).is_err());
        assert!(Placement::from_cells(PlacementKind::File, b.clone(), &[Cell::new(1, 2), Cell::new(2, 2)]).is_ok());
        assert!(Placement::from_cells(PlacementKind::File, b, &[Cell::new(1, 4)]).is_err());
    }

    #[test]
    fn file_cancellation() {
        let b = ext(&[2, 2]);
        let q = Placement::from_cells(PlacementKind::File, b.clone(), &[Cell::new(1, 2), Cell::new(2, 1)]).unwrap();
        assert_eq!(file_uncancelled_cells(&q), vec![Cell::new(2, 2)]);
        let q = Placement::from_cells(PlacementKind::File, ext(&[2]), &[Cell::new(1, 1)]).unwrap();
        assert_eq!(file_uncancelled_cells(&q), vec![Cell::new(1, 2)]);
        assert_eq!(cells_above_rooks(&q), vec![Cell::new(1, 2)]);
        let e = Placement::empty(PlacementKind::File, b);
        assert_eq!(file_uncancelled_cells(&e).len(), 4);
    }

    #[test]
    fn j_attack_figure() {
        let b = ext(&[1, 2, 3, 5, 7, 8, 9]);
        let rooks = [Cell::new(2, 2), Cell::new(4, 1), Cell::new(6, 6)];
        let sets = j_attacked_cells(&b, &rooks, 2);
        assert_eq!(sets[0].rows, vec![2, 3]);
        assert_eq!(sets[1].rows, vec![1, 4]);
        assert_eq!(sets[2].rows, vec![6, 7]);
        assert!(sets[0].cells.iter().all(|c| (3..=7).contains(&c.col)));
        assert!(sets[1].cells.iter().all(|c| (5..=7).contains(&c.col)));
        assert!(sets[2].cells.iter().all(|c| c.col == 7));
        assert!(Placement::from_cells(PlacementKind::JNonattacking(2), b, &rooks).is_ok());
    }

    #[test]
    fn j_one_is_row_cancellation() {
        let b = ext(&[1, 2, 3, 3]);
        for k in 0..=4 {
            let rook = enumerate_placements(&b, PlacementKind::NonattackingRook, k).unwrap();
            let jump = enumerate_placements(&b, PlacementKind::JNonattacking(1), k).unwrap();
            assert_eq!(rook.len(), jump.len());
            for (p, q) in rook.iter().zip(&jump) {
                assert_eq!(p.rows, q.rows);
                assert_eq!(uncancelled_cells(p), j_uncancelled_cells(q, 1));
            }
        }
    }

    #[test]
    fn wrap_rule_below_ground() {
        let mut att = BTreeSet::new();
        att.insert(-1);
        assert_eq!(attack_rows(&att, -2, 3), vec![-2, 0, -3]);
        assert_eq!(attack_rows(&BTreeSet::new(), 0, 2), vec![0, -1]);
        assert_eq!(attack_rows(&BTreeSet::new(), 2, 2), vec![2, 3]);
    }

    #[test]
    fn not_j_attacking_rejected() {
        let b = ext(&[2, 3]);
        assert!(matches!(count_placements(&b, PlacementKind::JNonattacking(3), 1), Err(Error::NotJAttackingBoard { .. })));
    }

    #[test]
    fn max_statistic() {
        let b = SkylineBoard::new(vec![1, 2]).extended(3);
        let mut p = Placement::empty(PlacementKind::NonattackingRook, b);
        assert_eq!(max_stat(&p), 0);
        p.rows[0] = Some(1);
        assert_eq!(max_stat(&p), 0);
        p.rows[1] = Some(0);
        assert_eq!(max_stat(&p), 1);
        p.rows[1] = Some(-2);
        assert_eq!(max_stat(&p), 3);
    }
}
