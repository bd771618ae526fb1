//! Explicit bijections between placements and set partitions, permutations,
//! rooted forests and tube placements.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::boards::{Cell, Placement, PlacementKind, SkylineBoard};
use crate::error::{Error, Result};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidPlacement(msg.into())
}

fn require_board(p: &Placement, expected: &SkylineBoard, kind: PlacementKind) -> Result<()> {
    if p.board.depth != 0 || p.board.base != *expected {
        return Err(bad(format!("placement lives on {}, expected {expected}", p.board.base)));
    }
    if p.kind != kind {
        return Err(bad(format!("expected a {kind:?} placement, got {:?}", p.kind)));
    }
    p.validate()
}

fn rook_cells(p: &Placement) -> Vec<(usize, usize)> {
    p.cells().into_iter().map(|c| (c.col, c.row as usize)).collect()
}

/// Blocks sorted internally and by their minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        SetPartition { blocks }
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

fn check_support<'a>(elements: impl Iterator<Item = &'a usize>, n: usize) -> Result<()> {
    let mut seen = vec![false; n + 1];
    let mut count = 0;
    for &x in elements {
        if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
            return Err(bad(format!("element {x} is repeated or outside 1..={n}")));
        }
        count += 1;
    }
    if count != n {
        return Err(bad(format!("expected every element of 1..={n}")));
    }
    Ok(())
}

/// A rook in cell `(i, j)` of `St_n` puts `i` and `j` in the same block.
pub fn rooks_to_partition(p: &Placement) -> Result<SetPartition> {
    let n = p.board.n();
    require_board(p, &SkylineBoard::staircase(n), PlacementKind::NonattackingRook)?;
    let mut block_of: Vec<usize> = (0..=n).collect();
    for (i, j) in rook_cells(p) {
        // each i has at most one j < i, so pointers form chains
        block_of[i] = j;
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 1..=n {
        // walk to the chain head; heads point to themselves
        let mut h = x;
        while block_of[h] != h {
            h = block_of[h];
        }
        blocks.entry(h).or_default().push(x);
    }
    Ok(SetPartition::new(blocks.into_values().collect()))
}

/// Consecutive elements `j < i` of each sorted block give the rook `(i, j)`.
pub fn partition_to_rooks(part: &SetPartition, n: usize) -> Result<Placement> {
    check_support(part.blocks.iter().flatten(), n)?;
    let mut cells = Vec::new();
    for b in &SetPartition::new(part.blocks.clone()).blocks {
        for w in b.windows(2) {
            cells.push(Cell::new(w[1], w[0] as i64));
        }
    }
    Placement::from_cells(PlacementKind::NonattackingRook, SkylineBoard::staircase(n).extended(0), &cells)
}

/// Cycles, each rotated to end in its minimum and sorted by minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationCycles {
    pub cycles: Vec<Vec<usize>>,
}

impl PermutationCycles {
    pub fn new(cycles: Vec<Vec<usize>>) -> Self {
        let mut cycles: Vec<Vec<usize>> = cycles
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|mut c| {
                let at = c.iter().enumerate().min_by_key(|(_, &x)| x).map(|(i, _)| i).unwrap();
                c.rotate_left(at + 1);
                c
            })
            .collect();
        cycles.sort_by_key(|c| *c.last().unwrap());
        PermutationCycles { cycles }
    }

    pub fn n(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// Parses `(6 7 4 1)(5 2)(8 3)`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        for part in s.split('(').map(str::trim).filter(|p| !p.is_empty()) {
            let body = part.strip_suffix(')').ok_or_else(|| Error::InvalidParameter(format!("unbalanced cycle in {s:?}")))?;
            let cycle = body
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidParameter(format!("bad element {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
        }
        Ok(PermutationCycles::new(cycles))
    }
}

impl fmt::Display for PermutationCycles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            write!(f, "({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))?;
        }
        Ok(())
    }
}

/// File placement on `St_n^{(r)}` to a permutation, scanning rooks from the
/// right-most column leftwards.
pub fn file_to_cycles(q: &Placement, r: usize) -> Result<PermutationCycles> {
    let n = q.board.n();
    require_board(q, &SkylineBoard::staircase_r(n, r), PlacementKind::File)?;
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let take = |chains: &mut Vec<Vec<usize>>, x: usize| match chains.iter().position(|c| c.last() == Some(&x)) {
        Some(at) => chains.swap_remove(at),
        None => vec![x],
    };
    let mut rooks = rook_cells(q);
    rooks.sort_by_key(|&(col, _)| std::cmp::Reverse(col));
    for (col, row) in rooks {
        let mut joined = take(&mut chains, col);
        joined.extend(take(&mut chains, row));
        chains.push(joined);
    }
    let used: BTreeSet<usize> = chains.iter().flatten().copied().collect();
    chains.extend((1..=n).filter(|x| !used.contains(x)).map(|x| vec![x]));
    Ok(PermutationCycles::new(chains))
}

/// Each non-minimal element `a` of a cycle ending in its minimum gives the
/// rook `(a, b)`, `b` the first smaller element to the right of `a`.
pub fn cycles_to_file(perm: &PermutationCycles, n: usize, r: usize) -> Result<Placement> {
    check_support(perm.cycles.iter().flatten(), n)?;
    let perm = PermutationCycles::new(perm.cycles.clone());
    for c in &perm.cycles {
        if c.iter().filter(|&&x| x <= r).count() > 1 {
            return Err(bad(format!("elements 1..={r} must lie in distinct cycles")));
        }
    }
    let mut cells = Vec::new();
    for c in &perm.cycles {
        for (at, &a) in c.iter().enumerate() {
            if let Some(&b) = c[at + 1..].iter().find(|&&b| b < a) {
                cells.push(Cell::new(a, b as i64));
            }
        }
    }
    Placement::from_cells(PlacementKind::File, SkylineBoard::staircase_r(n, r).extended(0), &cells)
}

/// Column heights `0 (r times), m, ..., m` on `n` columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbelShape {
    pub m: usize,
    pub n: usize,
    pub r: usize,
}

impl AbelShape {
    pub fn new(m: usize, n: usize, r: usize) -> Result<Self> {
        if n == 0 || m == 0 || r == 0 || r > n {
            return Err(Error::InvalidParameter(format!("Abel shape needs m, n >= 1 and 1 <= r <= n, got m={m}, n={n}, r={r}")));
        }
        Ok(AbelShape { m, n, r })
    }

    pub fn plain(n: usize) -> Result<Self> {
        AbelShape::new(n, n, 1)
    }

    pub fn board(&self) -> SkylineBoard {
        SkylineBoard::abel_gen(self.m, self.n, self.r)
    }

    pub fn top_color(&self) -> usize {
        self.m.div_ceil(self.n)
    }

    pub fn is_colored(&self) -> bool {
        self.m != self.n
    }

    fn row(&self, parent: usize, color: usize) -> usize {
        (color - 1) * self.n + parent
    }

    fn split_row(&self, row: usize) -> (usize, usize) {
        ((row - 1) % self.n + 1, (row - 1) / self.n + 1)
    }
}

/// Parent map plus root set; colors are present for generalized Abel boards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedForest {
    pub n: usize,
    pub parent: BTreeMap<usize, usize>,
    pub roots: BTreeSet<usize>,
    pub colors: Option<BTreeMap<usize, usize>>,
}

impl RootedForest {
    pub fn tree_count(&self) -> usize {
        self.roots.len()
    }

    fn color(&self, v: usize) -> usize {
        self.colors.as_ref().and_then(|c| c.get(&v).copied()).unwrap_or(1)
    }

    fn root_of(&self, mut v: usize) -> usize {
        while let Some(&p) = self.parent.get(&v) {
            v = p;
        }
        v
    }

    /// Checks support, acyclicity, root set and colors against `shape`.
    pub fn validate(&self, shape: &AbelShape) -> Result<()> {
        if self.n != shape.n {
            return Err(bad(format!("forest on {} vertices, shape has {}", self.n, shape.n)));
        }
        let in_range = |v: usize| (1..=self.n).contains(&v);
        for (&v, &p) in &self.parent {
            if !in_range(v) || !in_range(p) {
                return Err(bad(format!("edge {p} -> {v} outside 1..={}", self.n)));
            }
        }
        let roots: BTreeSet<usize> = (1..=self.n).filter(|v| !self.parent.contains_key(v)).collect();
        if roots != self.roots {
            return Err(bad("root set disagrees with parent map"));
        }
        for v in 1..=self.n {
            let mut u = v;
            for _ in 0..=self.n {
                match self.parent.get(&u) {
                    Some(&p) => u = p,
                    None => break,
                }
            }
            if self.parent.contains_key(&u) {
                return Err(bad(format!("vertex {v} lies on a cycle")));
            }
        }
        match (&self.colors, shape.is_colored()) {
            (None, true) => return Err(bad("colored shape needs vertex colors")),
            (Some(_), false) => return Err(bad("uncolored shape carries colors")),
            _ => {}
        }
        for v in 1..=self.n {
            let c = self.color(v);
            match self.parent.get(&v) {
                None if c != 1 => return Err(bad(format!("root {v} must have color 1"))),
                // the designated parents are read before the 1 <-> r swap
                Some(&p) if c == 0 || shape.row(swap_label(p, 1, shape.r), c) > shape.m => {
                    return Err(bad(format!("vertex {v} below {p} cannot take color {c}")))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

impl fmt::Display for RootedForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&v, &p) in &self.parent {
            children.entry(p).or_default().push(v);
        }
        fn tree(
            f: &mut fmt::Formatter<'_>,
            v: usize,
            forest: &RootedForest,
            children: &BTreeMap<usize, Vec<usize>>,
        ) -> fmt::Result {
            write!(f, "{v}")?;
            if forest.colors.is_some() && forest.color(v) > 1 {
                write!(f, "'{}", forest.color(v))?;
            }
            if let Some(kids) = children.get(&v) {
                write!(f, "[")?;
                for (at, &k) in kids.iter().enumerate() {
                    if at > 0 {
                        write!(f, " ")?;
                    }
                    tree(f, k, forest, children)?;
                }
                write!(f, "]")?;
            }
            Ok(())
        }
        for (at, &root) in self.roots.iter().enumerate() {
            if at > 0 {
                write!(f, " ")?;
            }
            tree(f, root, self, &children)?;
        }
        Ok(())
    }
}

fn swap_label(v: usize, a: usize, b: usize) -> usize {
    if v == a {
        b
    } else if v == b {
        a
    } else {
        v
    }
}

fn relabel(forest: &RootedForest, a: usize, b: usize) -> RootedForest {
    let s = |v| swap_label(v, a, b);
    RootedForest {
        n: forest.n,
        parent: forest.parent.iter().map(|(&v, &p)| (s(v), s(p))).collect(),
        roots: forest.roots.iter().map(|&v| s(v)).collect(),
        colors: forest.colors.as_ref().map(|c| c.iter().map(|(&v, &col)| (s(v), col)).collect()),
    }
}

/// File placement on a (generalized, r-restricted) Abel board to a forest.
///
/// A rook in cell `(i, (c-1)n + j)` is the edge `j -> i` with `i` colored `c`.
/// The resulting functional graph has chains and cycles; the cycles, listed
/// from their minima in decreasing order of minima, are strung into a path
/// ending at vertex 1.
pub fn file_to_forest(q: &Placement, shape: &AbelShape) -> Result<RootedForest> {
    require_board(q, &shape.board(), PlacementKind::File)?;
    let mut parent = BTreeMap::new();
    let mut color = BTreeMap::new();
    for (i, row) in rook_cells(q) {
        let (j, c) = shape.split_row(row);
        parent.insert(i, j);
        color.insert(i, c);
    }
    // cycles of the functional graph, each listed from its minimum along the edges
    let mut on_cycle = BTreeSet::new();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 1..=shape.n {
        let mut path = vec![start];
        let mut u = start;
        while let Some(&p) = parent.get(&u) {
            if on_cycle.contains(&p) {
                break;
            }
            if let Some(at) = path.iter().position(|&x| x == p) {
                let mut cyc: Vec<usize> = path[at..].to_vec();
                // path follows parents, edges run the other way
                cyc.reverse();
                let m = *cyc.iter().min().unwrap();
                let k = cyc.iter().position(|&x| x == m).unwrap();
                cyc.rotate_left(k);
                on_cycle.extend(cyc.iter().copied());
                cycles.push(cyc);
                break;
            }
            path.push(p);
            u = p;
        }
    }
    cycles.sort_by_key(|c| c[0]);
    let old_color = color.clone();
    let l = cycles.len();
    if l > 0 {
        for i in 0..l {
            let m_i = cycles[i][0];
            if i + 1 < l {
                parent.insert(m_i, *cycles[i + 1].last().unwrap());
                color.insert(m_i, old_color[&cycles[i + 1][0]]);
            } else {
                parent.remove(&m_i);
                color.insert(m_i, 1);
            }
        }
        parent.insert(1, *cycles[0].last().unwrap());
        color.insert(1, old_color[&cycles[0][0]]);
    }
    for v in 1..=shape.n {
        if !parent.contains_key(&v) {
            color.insert(v, 1);
        }
    }
    let roots = (1..=shape.n).filter(|v| !parent.contains_key(v)).collect();
    let forest = RootedForest { n: shape.n, parent, roots, colors: shape.is_colored().then_some(color) };
    Ok(if shape.r > 1 { relabel(&forest, 1, shape.r) } else { forest })
}

/// Inverse of [`file_to_forest`]: the path from the root of vertex 1's tree
/// down to 1 splits at its left-to-right minima into the cycles.
pub fn forest_to_file(forest: &RootedForest, shape: &AbelShape) -> Result<Placement> {
    forest.validate(shape)?;
    let forest = if shape.r > 1 { relabel(forest, 1, shape.r) } else { forest.clone() };
    for v in 2..=shape.r {
        if forest.parent.contains_key(&v) {
            return Err(bad(format!("vertices 1..{} must be roots", shape.r)));
        }
    }
    if forest.root_of(1) <= shape.r && forest.root_of(1) != 1 {
        return Err(bad(format!("vertices 1..={} must lie in distinct trees", shape.r)));
    }
    let mut parent = forest.parent.clone();
    let mut color: BTreeMap<usize, usize> = (1..=shape.n).map(|v| (v, forest.color(v))).collect();
    // path from the root down to the parent of 1
    let mut path = Vec::new();
    let mut u = 1;
    while let Some(&p) = forest.parent.get(&u) {
        path.push(p);
        u = p;
    }
    path.reverse();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for &v in &path {
        match cycles.last_mut() {
            Some(c) if v > c[0] => c.push(v),
            _ => cycles.push(vec![v]),
        }
    }
    cycles.reverse();
    let new_color = color.clone();
    for (i, cyc) in cycles.iter().enumerate() {
        parent.insert(cyc[0], *cyc.last().unwrap());
        let from = if i == 0 { 1 } else { cycles[i - 1][0] };
        color.insert(cyc[0], new_color[&from]);
    }
    parent.remove(&1);
    let mut cells = Vec::new();
    for (&v, &p) in &parent {
        cells.push(Cell::new(v, shape.row(p, color[&v]) as i64));
    }
    Placement::from_cells(PlacementKind::File, shape.board().extended(0), &cells)
}

/// Tubes listed bottom to top: tubes containing `1..=r` first, by that
/// element, then the rest by bottom element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubePlacement {
    pub tubes: Vec<Vec<usize>>,
}

impl TubePlacement {
    pub fn new(tubes: Vec<Vec<usize>>, r: usize) -> Self {
        let mut tubes: Vec<Vec<usize>> = tubes.into_iter().filter(|t| !t.is_empty()).collect();
        let key = |t: &Vec<usize>| match t.iter().copied().filter(|&x| x <= r).min() {
            Some(x) => (0, x),
            None => (1, t[0]),
        };
        tubes.sort_by_key(key);
        TubePlacement { tubes }
    }

    pub fn n(&self) -> usize {
        self.tubes.iter().map(Vec::len).sum()
    }

    /// Parses `{(8,1),(3,2,4),(5),(7,6)}`.
    pub fn parse(s: &str, r: usize) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidParameter(format!("tubes must be wrapped in braces: {s:?}")))?;
        let mut tubes = Vec::new();
        for part in inner.split(')').map(|p| p.trim().trim_start_matches(',').trim()).filter(|p| !p.is_empty()) {
            let body = part.strip_prefix('(').ok_or_else(|| Error::InvalidParameter(format!("bad tube {part:?}")))?;
            let tube = body
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidParameter(format!("bad element {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            tubes.push(tube);
        }
        Ok(TubePlacement::new(tubes, r))
    }
}

impl fmt::Display for TubePlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.tubes.iter().map(|t| format!("({})", t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    OnTop(usize),
    Below(usize),
}

/// Insertion slots: on top of every element in tube order (each tube bottom
/// to top), then below each of the first `r` tubes.
fn slots(tubes: &[Vec<usize>], r: usize) -> Vec<Slot> {
    let mut out: Vec<Slot> = tubes.iter().flatten().map(|&x| Slot::OnTop(x)).collect();
    out.extend((0..r).map(Slot::Below));
    out
}

fn insert(tubes: &mut [Vec<usize>], slot: Slot, x: usize) {
    match slot {
        Slot::Below(t) => tubes[t].insert(0, x),
        Slot::OnTop(y) => {
            for t in tubes.iter_mut() {
                if let Some(at) = t.iter().position(|&z| z == y) {
                    t.insert(at + 1, x);
                    return;
                }
            }
        }
    }
}

/// One step of the insertion: chosen slot index and number of legal slots.
pub type TubeChoice = (usize, usize);

/// Nonattacking placement on `L_n^{(r)} = [n+r-1] x [n-r]` to tubes, with the
/// sequence of choices made from the top row down.
pub fn rooks_to_tubes(p: &Placement, n: usize, r: usize) -> Result<(TubePlacement, Vec<TubeChoice>)> {
    if r == 0 || r > n {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= n, got r={r}, n={n}")));
    }
    require_board(p, &SkylineBoard::lah_r(n, r), PlacementKind::NonattackingRook)?;
    let cols = n + r - 1;
    let mut col_of_row = vec![None; n - r + 1];
    for (col, row) in rook_cells(p) {
        col_of_row[row] = Some(col);
    }
    let mut tubes: Vec<Vec<usize>> = (1..=r).map(|x| vec![x]).collect();
    for l in (1..=n - r).rev() {
        if col_of_row[l].is_none() {
            tubes.push(vec![n + 1 - l]);
        }
    }
    let mut choices = Vec::new();
    for l in (1..=n - r).rev() {
        let Some(col) = col_of_row[l] else { continue };
        let blocked: BTreeSet<usize> = (1..l).filter_map(|y| col_of_row[y]).collect();
        let free: Vec<usize> = (1..=cols).filter(|c| !blocked.contains(c)).collect();
        let pos = free.iter().position(|&c| c == col).expect("rook column is free");
        let legal = slots(&tubes, r);
        debug_assert_eq!(legal.len(), free.len());
        insert(&mut tubes, legal[pos], n + 1 - l);
        choices.push((pos, legal.len()));
    }
    Ok((TubePlacement::new(tubes, r), choices))
}

/// Inverse of [`rooks_to_tubes`]: removes inserted elements from the largest down.
pub fn tubes_to_rooks(t: &TubePlacement, n: usize, r: usize) -> Result<Placement> {
    if r == 0 || r > n {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= n, got r={r}, n={n}")));
    }
    check_support(t.tubes.iter().flatten(), n)?;
    let mut tubes = TubePlacement::new(t.tubes.clone(), r).tubes;
    if tubes.len() < r || (0..r).any(|i| !tubes[i].contains(&(i + 1)) || tubes[i].iter().filter(|&&x| x <= r).count() != 1) {
        return Err(bad(format!("elements 1..={r} must lie in distinct tubes")));
    }
    let leaders: BTreeSet<usize> = tubes[r..].iter().map(|t| t[0]).collect();
    let inserted: Vec<usize> = (r + 1..=n).filter(|x| !leaders.contains(x)).rev().collect();
    let cols = n + r - 1;
    let mut col_of_row = vec![None; n - r + 1];
    for x in inserted {
        let (ti, at) = tubes.iter().enumerate().find_map(|(ti, t)| t.iter().position(|&y| y == x).map(|at| (ti, at))).unwrap();
        tubes[ti].remove(at);
        let slot = if at > 0 { Slot::OnTop(tubes[ti][at - 1]) } else { Slot::Below(ti) };
        let pos = slots(&tubes, r).iter().position(|&s| s == slot).unwrap();
        let l = n + 1 - x;
        let blocked: BTreeSet<usize> = (1..l).filter_map(|y| col_of_row[y]).collect();
        let free: Vec<usize> = (1..=cols).filter(|c| !blocked.contains(c)).collect();
        col_of_row[l] = Some(free[pos]);
    }
    let cells: Vec<Cell> = (1..=n - r).filter_map(|l| col_of_row[l].map(|c| Cell::new(c, l as i64))).collect();
    Placement::from_cells(PlacementKind::NonattackingRook, SkylineBoard::lah_r(n, r).extended(0), &cells)
}
