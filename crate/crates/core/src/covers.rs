//! Monochromatic rectangles and exact minimum covers.
//!
//! Rectangles are stored as row and column bitmasks (row index `x` is bit
//! `x` of `rows`). The canonical key of a rectangle is the pair
//! `(rows, cols)` compared lexicographically, which equals the integer
//! formed by writing the row mask above the column mask. Covers are kept
//! sorted by key and compared as sequences.
//!
//! The minimum cover is searched among inclusion-maximal rectangles only.
//! Any minimum cover can be grown into one made of maximal rectangles of
//! the same size, so the cover number is unaffected.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::boolfun::BoolFunction;

/// Masks are 64 bits wide, so n=6 is a hard ceiling.
pub const HARD_COVER_LIMIT: usize = 6;
pub const DEFAULT_COVER_LIMIT: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("n={n} exceeds the cover limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("cover limit {0} exceeds the supported maximum {HARD_COVER_LIMIT}")]
    LimitUnsupported(usize),
    #[error("function has no {}-cells", *.0 as u8)]
    EmptySide(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rectangle {
    pub rows: u64,
    pub cols: u64,
    pub color: bool,
}

impl Rectangle {
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.has_row(x) && self.has_col(y)
    }

    pub fn has_row(&self, x: usize) -> bool {
        self.rows >> x & 1 == 1
    }

    pub fn has_col(&self, y: usize) -> bool {
        self.cols >> y & 1 == 1
    }

    pub fn key(&self) -> (u64, u64) {
        (self.rows, self.cols)
    }

    /// Height times width.
    pub fn area(&self) -> usize {
        (self.rows.count_ones() * self.cols.count_ones()) as usize
    }

    pub fn is_monochromatic_in(&self, f: &BoolFunction) -> bool {
        let side = f.side();
        (0..side)
            .filter(|&x| self.has_row(x))
            .all(|x| (0..side).filter(|&y| self.has_col(y)).all(|y| f.get(x, y) == self.color))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub color: bool,
    pub rectangles: Vec<Rectangle>,
}

impl Cover {
    pub fn empty(color: bool) -> Self {
        Cover {
            color,
            rectangles: Vec::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.rectangles.len()
    }

    pub fn is_empty_side(&self) -> bool {
        self.rectangles.is_empty()
    }

    /// The rectangle whose column set is exactly `cols`. Maximal rectangles
    /// are determined by their column set, so there is at most one.
    pub fn find_by_cols(&self, cols: u64) -> Option<(usize, &Rectangle)> {
        self.rectangles.iter().enumerate().find(|(_, r)| r.cols == cols)
    }

    pub fn first_containing(&self, x: usize, y: usize) -> Option<usize> {
        self.rectangles.iter().position(|r| r.contains(x, y))
    }

    pub fn report(&self) -> CoverReport {
        CoverReport {
            color: self.color as u8,
            m: self.m(),
            rectangles: self
                .rectangles
                .iter()
                .map(|r| RectReport {
                    rows: format!("{:#x}", r.rows),
                    cols: format!("{:#x}", r.cols),
                })
                .collect(),
            empty_side: self.is_empty_side(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RectReport {
    pub rows: String,
    pub cols: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CoverReport {
    pub color: u8,
    pub m: usize,
    pub rectangles: Vec<RectReport>,
    pub empty_side: bool,
}

/// Canonical 0-cover and 1-cover of one function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPair {
    pub zero: Cover,
    pub one: Cover,
}

impl CoverPair {
    pub fn compute(f: &BoolFunction, limit: usize) -> Result<Self, CoverError> {
        Ok(CoverPair {
            zero: min_cover_with_limit(f, false, limit)?,
            one: min_cover_with_limit(f, true, limit)?,
        })
    }

    pub fn side(&self, z: bool) -> &Cover {
        if z {
            &self.one
        } else {
            &self.zero
        }
    }

    /// s = canonical 0-cover followed by canonical 1-cover.
    pub fn combined(&self) -> Vec<Rectangle> {
        self.zero.rectangles.iter().chain(&self.one.rectangles).copied().collect()
    }

    pub fn combined_len(&self) -> usize {
        self.zero.m() + self.one.m()
    }

    pub fn combined_get(&self, i: usize) -> Option<&Rectangle> {
        if i < self.zero.m() {
            self.zero.rectangles.get(i)
        } else {
            self.one.rectangles.get(i - self.zero.m())
        }
    }
}

fn check_limit(f: &BoolFunction, limit: usize) -> Result<(), CoverError> {
    if limit > HARD_COVER_LIMIT {
        return Err(CoverError::LimitUnsupported(limit));
    }
    if f.n() > limit {
        return Err(CoverError::TooLarge { n: f.n(), limit });
    }
    if limit > DEFAULT_COVER_LIMIT && f.n() > DEFAULT_COVER_LIMIT {
        log::warn!(
            "covering a {}x{} matrix; the exact search grows exponentially",
            f.side(),
            f.side()
        );
    }
    Ok(())
}

fn row_masks(f: &BoolFunction, z: bool) -> Vec<u64> {
    let side = f.side();
    (0..side)
        .map(|x| (0..side).filter(|&y| f.get(x, y) == z).fold(0u64, |m, y| m | 1 << y))
        .collect()
}

pub fn maximal_rectangles(f: &BoolFunction, z: bool) -> Result<Vec<Rectangle>, CoverError> {
    maximal_rectangles_with_limit(f, z, DEFAULT_COVER_LIMIT)
}

/// Every inclusion-maximal z-rectangle, sorted by key.
///
/// Column sets of maximal rectangles are exactly the non-empty
/// intersections of row masks; the row set is then every row whose mask
/// contains the column set.
pub fn maximal_rectangles_with_limit(
    f: &BoolFunction,
    z: bool,
    limit: usize,
) -> Result<Vec<Rectangle>, CoverError> {
    check_limit(f, limit)?;
    let masks = row_masks(f, z);
    let mut closed: BTreeSet<u64> = BTreeSet::new();
    for &m in masks.iter().filter(|&&m| m != 0) {
        let meets: Vec<u64> = closed.iter().map(|&s| s & m).filter(|&s| s != 0).collect();
        closed.insert(m);
        closed.extend(meets);
    }
    let mut rects: Vec<Rectangle> = closed
        .into_iter()
        .map(|cols| {
            let rows = masks
                .iter()
                .enumerate()
                .filter(|(_, &m)| m & cols == cols)
                .fold(0u64, |acc, (x, _)| acc | 1 << x);
            Rectangle { rows, cols, color: z }
        })
        .collect();
    rects.sort();
    Ok(rects)
}

pub fn min_cover(f: &BoolFunction, z: bool) -> Result<Cover, CoverError> {
    min_cover_with_limit(f, z, DEFAULT_COVER_LIMIT)
}

/// Lexicographically least minimum-size cover by maximal z-rectangles.
/// A function with no z-cell yields the empty cover.
pub fn min_cover_with_limit(f: &BoolFunction, z: bool, limit: usize) -> Result<Cover, CoverError> {
    let rects = maximal_rectangles_with_limit(f, z, limit)?;
    if rects.is_empty() {
        return Ok(Cover::empty(z));
    }
    let mut solver = CoverSolver::new(f, &rects, z);
    let chosen = solver.lex_least_minimum();
    Ok(Cover {
        color: z,
        rectangles: chosen.into_iter().map(|i| rects[i]).collect(),
    })
}

pub fn cover_number(f: &BoolFunction, z: bool) -> Result<usize, CoverError> {
    Ok(min_cover(f, z)?.m())
}

/// ceil(log2 m) for a side with m rectangles.
pub fn size_bits(m: usize) -> Result<usize, CoverError> {
    if m == 0 {
        Err(CoverError::EmptySide(false))
    } else {
        Ok(crate::bits::index_width(m))
    }
}

pub fn protocol_size_bits(f: &BoolFunction, z: bool) -> Result<usize, CoverError> {
    let m = cover_number(f, z)?;
    size_bits(m).map_err(|_| CoverError::EmptySide(z))
}

pub fn combined_sequence(f: &BoolFunction) -> Result<(Vec<Rectangle>, usize, usize), CoverError> {
    let pair = CoverPair::compute(f, DEFAULT_COVER_LIMIT)?;
    Ok((pair.combined(), pair.zero.m(), pair.one.m()))
}

/// log2(2^k0 + 2^k1); an absent side contributes nothing.
pub fn log_sum_bits(k0: Option<usize>, k1: Option<usize>) -> Option<f64> {
    match (k0, k1) {
        (Some(a), Some(b)) if a == b => Some(a as f64 + 1.0),
        (Some(a), Some(b)) => Some(((a as f64).exp2() + (b as f64).exp2()).log2()),
        (Some(k), None) | (None, Some(k)) => Some(k as f64),
        (None, None) => None,
    }
}

pub fn n_of_f_bits(pair: &CoverPair) -> f64 {
    let k = |c: &Cover| size_bits(c.m()).ok();
    log_sum_bits(k(&pair.zero), k(&pair.one)).expect("a table always has some cell")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverCheck {
    pub uncovered: Vec<(usize, usize)>,
    /// Positions of rectangles that are empty, miscolored or not monochromatic.
    pub bad_rectangles: Vec<usize>,
    pub unsorted: bool,
}

impl CoverCheck {
    pub fn ok(&self) -> bool {
        self.uncovered.is_empty() && self.bad_rectangles.is_empty() && !self.unsorted
    }
}

pub fn check_cover(f: &BoolFunction, cover: &Cover) -> CoverCheck {
    let side = f.side();
    let valid_mask = if side >= 64 { u64::MAX } else { (1u64 << side) - 1 };
    let mut check = CoverCheck::default();
    for (i, r) in cover.rectangles.iter().enumerate() {
        let in_range = r.rows & !valid_mask == 0 && r.cols & !valid_mask == 0;
        if r.rows == 0 || r.cols == 0 || !in_range || r.color != cover.color || !r.is_monochromatic_in(f) {
            check.bad_rectangles.push(i);
        }
    }
    check.unsorted = cover.rectangles.windows(2).any(|w| w[0].key() >= w[1].key());
    for x in 0..side {
        for y in 0..side {
            if f.get(x, y) == cover.color && !cover.rectangles.iter().any(|r| r.contains(x, y)) {
                check.uncovered.push((x, y));
            }
        }
    }
    check
}

pub fn verify_cover(f: &BoolFunction, cover: &Cover) -> bool {
    check_cover(f, cover).ok()
}

type CellSet = Vec<u64>;

fn cells_clear(s: &CellSet) -> bool {
    s.iter().all(|&w| w == 0)
}

fn cells_count(s: &CellSet) -> usize {
    s.iter().map(|w| w.count_ones() as usize).sum()
}

fn cells_minus(a: &CellSet, b: &CellSet) -> CellSet {
    a.iter().zip(b).map(|(x, y)| x & !y).collect()
}

fn cells_meet_count(a: &CellSet, b: &CellSet) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

fn cells_first(s: &CellSet) -> Option<usize> {
    s.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn cells_iter(s: &CellSet) -> impl Iterator<Item = usize> + '_ {
    s.iter().enumerate().flat_map(|(i, &w)| {
        (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
    })
}

/// Branch-and-bound set cover over a fixed rectangle list.
struct CoverSolver {
    rect_cells: Vec<CellSet>,
    /// For each cell, indices of rectangles covering it, ascending.
    cell_rects: Vec<Vec<usize>>,
    target: CellSet,
    /// Largest budget proven infeasible per (uncovered, first allowed index).
    failed: HashMap<(CellSet, usize), usize>,
}

impl CoverSolver {
    fn new(f: &BoolFunction, rects: &[Rectangle], z: bool) -> Self {
        let side = f.side();
        let cells = side * side;
        let words = cells.div_ceil(64);
        let mut target = vec![0u64; words];
        let mut cell_rects = vec![Vec::new(); cells];
        let mut rect_cells = Vec::with_capacity(rects.len());
        for x in 0..side {
            for y in 0..side {
                if f.get(x, y) == z {
                    let c = x * side + y;
                    target[c / 64] |= 1 << (c % 64);
                }
            }
        }
        for (i, r) in rects.iter().enumerate() {
            let mut set = vec![0u64; words];
            for x in (0..side).filter(|&x| r.has_row(x)) {
                for y in (0..side).filter(|&y| r.has_col(y)) {
                    let c = x * side + y;
                    set[c / 64] |= 1 << (c % 64);
                    cell_rects[c].push(i);
                }
            }
            rect_cells.push(set);
        }
        CoverSolver {
            rect_cells,
            cell_rects,
            target,
            failed: HashMap::new(),
        }
    }

    fn allowed<'a>(&'a self, cell: usize, from: usize) -> impl Iterator<Item = usize> + 'a {
        self.cell_rects[cell].iter().copied().filter(move |&i| i >= from)
    }

    /// Cells pairwise sharing no allowed rectangle; each needs its own.
    fn packing_bound(&self, uncovered: &CellSet, from: usize, cap: usize) -> usize {
        let mut avail = uncovered.clone();
        let mut count = 0;
        while let Some(c) = cells_first(&avail) {
            count += 1;
            if count > cap {
                break;
            }
            avail[c / 64] &= !(1 << (c % 64));
            for r in self.allowed(c, from) {
                for (a, b) in avail.iter_mut().zip(&self.rect_cells[r]) {
                    *a &= !b;
                }
            }
        }
        count
    }

    fn greedy_size(&self) -> usize {
        let mut uncovered = self.target.clone();
        let mut used = 0;
        while !cells_clear(&uncovered) {
            let best = (0..self.rect_cells.len())
                .max_by_key(|&i| (cells_meet_count(&uncovered, &self.rect_cells[i]), std::cmp::Reverse(i)))
                .expect("rectangles exist");
            uncovered = cells_minus(&uncovered, &self.rect_cells[best]);
            used += 1;
        }
        used
    }

    /// Can `uncovered` be covered by at most `budget` rectangles with index
    /// at least `from`?
    fn feasible(&mut self, uncovered: &CellSet, from: usize, budget: usize) -> bool {
        if cells_clear(uncovered) {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let key = (uncovered.clone(), from);
        if let Some(&bad) = self.failed.get(&key) {
            if budget <= bad {
                return false;
            }
        }
        let mut branch_cell = None;
        let mut fewest = usize::MAX;
        let mut widest = 0;
        for c in cells_iter(uncovered) {
            let mut k = 0;
            for r in self.allowed(c, from) {
                k += 1;
                widest = widest.max(cells_meet_count(uncovered, &self.rect_cells[r]));
            }
            if k < fewest {
                fewest = k;
                branch_cell = Some(c);
            }
        }
        let ok = fewest > 0
            && budget * widest >= cells_count(uncovered)
            && self.packing_bound(uncovered, from, budget) <= budget
            && {
                let c = branch_cell.expect("uncovered is non-empty");
                let options: Vec<usize> = self.allowed(c, from).collect();
                options.into_iter().any(|r| {
                    let rest = cells_minus(uncovered, &self.rect_cells[r]);
                    self.feasible(&rest, from, budget - 1)
                })
            };
        if !ok {
            let entry = self.failed.entry(key).or_insert(0);
            *entry = (*entry).max(budget);
        }
        ok
    }

    fn minimum_size(&mut self) -> usize {
        let upper = self.greedy_size();
        let target = self.target.clone();
        let lower = self.packing_bound(&target, 0, upper).max(1);
        (lower..upper).find(|&k| self.feasible(&target, 0, k)).unwrap_or(upper)
    }

    /// Indices (ascending) of the lexicographically least minimum cover.
    fn lex_least_minimum(&mut self) -> Vec<usize> {
        let m = self.minimum_size();
        let mut uncovered = self.target.clone();
        let mut chosen = Vec::with_capacity(m);
        let mut from = 0;
        for pos in 0..m {
            let remaining = m - pos - 1;
            let candidates: Vec<usize> = (from..self.rect_cells.len())
                .filter(|&r| cells_meet_count(&uncovered, &self.rect_cells[r]) > 0)
                .collect();
            let pick = candidates
                .into_iter()
                .find(|&r| {
                    let rest = cells_minus(&uncovered, &self.rect_cells[r]);
                    self.feasible(&rest, r + 1, remaining)
                })
                .expect("a cover of size m exists");
            uncovered = cells_minus(&uncovered, &self.rect_cells[pick]);
            chosen.push(pick);
            from = pick + 1;
        }
        debug_assert!(cells_clear(&uncovered));
        chosen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(name: &str, n: usize) -> BoolFunction {
        BoolFunction::generate_named(name, n, None).unwrap()
    }

    /// All rectangles with non-empty row and column sets, by brute force.
    fn brute_force_maximal(f: &BoolFunction, z: bool) -> Vec<Rectangle> {
        let side = f.side();
        let full = (1u64 << side) - 1;
        let mono: Vec<Rectangle> = (1..=full)
            .flat_map(|rows| (1..=full).map(move |cols| Rectangle { rows, cols, color: z }))
            .filter(|r| r.is_monochromatic_in(f))
            .collect();
        let mut out: Vec<Rectangle> = mono
            .iter()
            .filter(|r| {
                !mono.iter().any(|s| {
                    s != *r && s.rows & r.rows == r.rows && s.cols & r.cols == r.cols
                })
            })
            .copied()
            .collect();
        out.sort();
        out
    }

    #[test]
    fn maximal_rectangles_small_examples() {
        let c1 = named("CONST1", 1);
        assert_eq!(
            maximal_rectangles(&c1, true).unwrap(),
            vec![Rectangle { rows: 0b11, cols: 0b11, color: true }]
        );
        assert!(maximal_rectangles(&c1, false).unwrap().is_empty());
        let neq = named("NEQ", 1);
        assert_eq!(
            maximal_rectangles(&neq, true).unwrap(),
            vec![
                Rectangle { rows: 0b01, cols: 0b10, color: true },
                Rectangle { rows: 0b10, cols: 0b01, color: true },
            ]
        );
    }

    #[test]
    fn maximal_rectangles_match_brute_force() {
        for id in 0..16 {
            let f = BoolFunction::one_bit_table(id);
            for z in [false, true] {
                assert_eq!(maximal_rectangles(&f, z).unwrap(), brute_force_maximal(&f, z), "T1_{id} z={z}");
            }
        }
        for seed in 0..20 {
            let f = BoolFunction::generate_named("RANDOM", 2, Some(seed)).unwrap();
            for z in [false, true] {
                assert_eq!(maximal_rectangles(&f, z).unwrap(), brute_force_maximal(&f, z));
            }
        }
    }

    #[test]
    fn cover_limit_enforced() {
        let f = named("EQ", 5);
        assert_eq!(
            maximal_rectangles(&f, true),
            Err(CoverError::TooLarge { n: 5, limit: 4 })
        );
        assert!(maximal_rectangles_with_limit(&f, true, 5).is_ok());
        assert_eq!(
            maximal_rectangles_with_limit(&f, true, 7),
            Err(CoverError::LimitUnsupported(7))
        );
    }

    #[test]
    fn cover_numbers_of_named_functions() {
        assert_eq!(cover_number(&named("NEQ", 1), true).unwrap(), 2);
        assert_eq!(cover_number(&named("NEQ", 2), true).unwrap(), 4);
        assert_eq!(cover_number(&named("EQ", 2), true).unwrap(), 4);
        assert_eq!(cover_number(&named("EQ", 3), true).unwrap(), 8);
        assert_eq!(cover_number(&named("CONST0", 2), true).unwrap(), 0);
        assert_eq!(cover_number(&named("NEQ", 2), false).unwrap(), 4);
        assert_eq!(protocol_size_bits(&named("CONST1", 2), true).unwrap(), 0);
        assert_eq!(protocol_size_bits(&named("NEQ", 2), true).unwrap(), 2);
        assert_eq!(protocol_size_bits(&named("EQ", 3), true).unwrap(), 3);
        assert_eq!(
            protocol_size_bits(&named("CONST1", 1), false),
            Err(CoverError::EmptySide(false))
        );
    }

    /// C1(NEQ_n) is the least k whose middle binomial reaches 2^n: the
    /// 1-rectangles of NEQ are contained in S x S^c, and a cover is a family
    /// of sets separating every ordered pair, i.e. an antichain embedding.
    #[test]
    fn neq_cover_matches_sperner_bound() {
        fn binom(n: u64, k: u64) -> u64 {
            (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
        }
        for n in 1..=3 {
            let expected = (1..).find(|&k| binom(k, k / 2) >= 1 << n).unwrap() as usize;
            assert_eq!(cover_number(&named("NEQ", n), true).unwrap(), expected, "n={n}");
        }
    }

    #[test]
    fn covers_are_valid_and_distinct_by_columns() {
        let mut fs: Vec<BoolFunction> = (0..16).map(BoolFunction::one_bit_table).collect();
        for seed in 0..30 {
            fs.push(BoolFunction::generate_named("RANDOM", 2, Some(seed)).unwrap());
        }
        for seed in 0..5 {
            fs.push(BoolFunction::generate_named("RANDOM", 3, Some(seed)).unwrap());
        }
        fs.push(named("DISJ", 3));
        for f in &fs {
            for z in [false, true] {
                let c = min_cover(f, z).unwrap();
                assert!(verify_cover(f, &c), "{} z={z}", f.label());
                let mut cols: Vec<u64> = c.rectangles.iter().map(|r| r.cols).collect();
                cols.dedup();
                assert_eq!(cols.len(), c.m());
            }
        }
    }

    #[test]
    fn min_cover_is_deterministic() {
        let f = BoolFunction::generate_named("RANDOM", 3, Some(11)).unwrap();
        assert_eq!(min_cover(&f, true).unwrap(), min_cover(&f, true).unwrap());
    }

    #[test]
    fn verify_cover_reports_violations() {
        let neq = named("NEQ", 1);
        let good = min_cover(&neq, true).unwrap();
        assert!(verify_cover(&neq, &good));
        let missing = Cover {
            color: true,
            rectangles: vec![Rectangle { rows: 0b01, cols: 0b10, color: true }],
        };
        assert_eq!(check_cover(&neq, &missing).uncovered, vec![(1, 0)]);
        let whole = Cover {
            color: true,
            rectangles: vec![Rectangle { rows: 0b11, cols: 0b11, color: true }],
        };
        let check = check_cover(&neq, &whole);
        assert!(!check.ok());
        assert_eq!(check.bad_rectangles, vec![0]);
    }

    #[test]
    fn combined_sequence_orders_zero_side_first() {
        let (s, m0, m1) = combined_sequence(&named("NEQ", 1)).unwrap();
        assert_eq!((m0, m1), (2, 2));
        assert!(s[..2].iter().all(|r| !r.color) && s[2..].iter().all(|r| r.color));
        assert_eq!(s[0], Rectangle { rows: 0b01, cols: 0b01, color: false });
        assert_eq!(s[1], Rectangle { rows: 0b10, cols: 0b10, color: false });
        let (s, m0, m1) = combined_sequence(&named("CONST1", 1)).unwrap();
        assert_eq!((m0, m1, s.len()), (0, 1, 1));
        let (_, m0, m1) = combined_sequence(&named("EQ", 1)).unwrap();
        assert_eq!((m0, m1), (2, 2));
    }

    #[test]
    fn log_sum_identities() {
        assert_eq!(log_sum_bits(Some(2), Some(2)), Some(3.0));
        assert_eq!(log_sum_bits(Some(0), Some(0)), Some(1.0));
        assert_eq!(log_sum_bits(None, Some(4)), Some(4.0));
        let v = log_sum_bits(Some(1), Some(3)).unwrap();
        assert!((v - 10f64.log2()).abs() < 1e-12);
        // C0(NEQ_2) = 4 (diagonal cells are pairwise incompatible), C1 = 4.
        let pair = CoverPair::compute(&named("NEQ", 2), 4).unwrap();
        assert_eq!(pair.zero.m(), 4);
        assert_eq!(n_of_f_bits(&pair), 3.0);
    }
}
