//! Boolean functions f: {0,1}^n x {0,1}^n -> {0,1} stored as truth tables.
//!
//! Row index `x` and column index `y` are n-bit strings read big-endian:
//! character 0 of the string is the most significant bit of the index.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bits::Bits;

pub const MAX_N: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FunctionError {
    #[error("input length n={0} outside [1, {MAX_N}]")]
    BadLength(usize),
    #[error("unknown function name {0:?}")]
    UnknownName(String),
    #[error("RANDOM requires a seed")]
    MissingSeed,
    #[error("index {index} out of range for n={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("query argument has length {got}, expected {n}")]
    WrongQueryLength { got: usize, n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Dense set of indices in `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    universe: usize,
    words: Vec<u64>,
}

impl IndexSet {
    pub fn empty(universe: usize) -> Self {
        IndexSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(universe: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in items {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn complement(&self) -> Self {
        let mut s = Self::empty(self.universe);
        for i in 0..self.universe {
            if !self.contains(i) {
                s.insert(i);
            }
        }
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(|&i| self.contains(i))
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Low 64 members as a mask; universe must be at most 64.
    pub fn to_mask(&self) -> u64 {
        assert!(self.universe <= 64);
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowColSets {
    pub zeros: Vec<usize>,
    pub ones: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolFunction {
    n: usize,
    /// Row-major, one bit per cell; row x occupies `words_per_row` words.
    table: Vec<u64>,
    words_per_row: usize,
    pub name: Option<String>,
    pub seed: Option<u64>,
}

impl BoolFunction {
    fn blank(n: usize) -> Result<Self, FunctionError> {
        if !(1..=MAX_N).contains(&n) {
            return Err(FunctionError::BadLength(n));
        }
        let side = 1usize << n;
        let words_per_row = side.div_ceil(64);
        Ok(BoolFunction {
            n,
            table: vec![0; side * words_per_row],
            words_per_row,
            name: None,
            seed: None,
        })
    }

    pub fn from_fn(n: usize, mut cell: impl FnMut(usize, usize) -> bool) -> Result<Self, FunctionError> {
        let mut f = Self::blank(n)?;
        let side = f.side();
        for x in 0..side {
            for y in 0..side {
                if cell(x, y) {
                    f.set(x, y, true);
                }
            }
        }
        Ok(f)
    }

    /// Builds a function from explicit rows; each row must have 2^n entries.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self, FunctionError> {
        let side = rows.len();
        if !side.is_power_of_two() || side < 2 {
            return Err(FunctionError::BadLength(side));
        }
        let n = side.trailing_zeros() as usize;
        if rows.iter().any(|r| r.len() != side) {
            return Err(FunctionError::BadLength(n));
        }
        Self::from_fn(n, |x, y| rows[x][y])
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 2^n, the number of rows (and of columns).
    pub fn side(&self) -> usize {
        1 << self.n
    }

    pub fn cell_count(&self) -> usize {
        self.side() * self.side()
    }

    pub fn label(&self) -> String {
        match (&self.name, self.seed) {
            (Some(name), Some(seed)) => format!("{name}#{seed}"),
            (Some(name), None) => name.clone(),
            (None, _) => "anonymous".to_string(),
        }
    }

    fn set(&mut self, x: usize, y: usize, v: bool) {
        let w = x * self.words_per_row + y / 64;
        if v {
            self.table[w] |= 1 << (y % 64);
        } else {
            self.table[w] &= !(1 << (y % 64));
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.side() && y < self.side());
        self.table[x * self.words_per_row + y / 64] >> (y % 64) & 1 == 1
    }

    pub fn value(&self, x: usize, y: usize) -> Result<bool, FunctionError> {
        self.check_index(x)?;
        self.check_index(y)?;
        Ok(self.get(x, y))
    }

    fn check_index(&self, i: usize) -> Result<(), FunctionError> {
        if i < self.side() {
            Ok(())
        } else {
            Err(FunctionError::IndexOutOfRange { index: i, n: self.n })
        }
    }

    pub fn count(&self, z: bool) -> usize {
        let ones: usize = self.table.iter().map(|w| w.count_ones() as usize).sum();
        if z {
            ones
        } else {
            self.cell_count() - ones
        }
    }

    /// Y1(x) = {y : f(x,y)=1}.
    pub fn y_set(&self, x: usize, z: bool) -> IndexSet {
        IndexSet::from_indices(self.side(), (0..self.side()).filter(|&y| self.get(x, y) == z))
    }

    /// X1(y) = {x : f(x,y)=1}.
    pub fn x_set(&self, y: usize, z: bool) -> IndexSet {
        IndexSet::from_indices(self.side(), (0..self.side()).filter(|&x| self.get(x, y) == z))
    }

    /// Y0(x) and Y1(x) for a fixed row.
    pub fn row_sets(&self, x: usize) -> Result<RowColSets, FunctionError> {
        self.check_index(x)?;
        Ok(RowColSets {
            zeros: self.y_set(x, false).iter().collect(),
            ones: self.y_set(x, true).iter().collect(),
        })
    }

    /// X0(y) and X1(y) for a fixed column.
    pub fn col_sets(&self, y: usize) -> Result<RowColSets, FunctionError> {
        self.check_index(y)?;
        Ok(RowColSets {
            zeros: self.x_set(y, false).iter().collect(),
            ones: self.x_set(y, true).iter().collect(),
        })
    }

    pub fn oracle(&self) -> Oracle<'_> {
        Oracle {
            f: self,
            queries: AtomicU64::new(0),
        }
    }

    /// Index `i` as an n-bit string.
    pub fn index_bits(&self, i: usize) -> Bits {
        Bits::from_uint(i as u64, self.n)
    }

    pub fn parse_index(&self, s: &str) -> Result<usize, FunctionError> {
        let bits = Bits::parse_prefixed(s)
            .map_err(|_| FunctionError::WrongQueryLength { got: s.len(), n: self.n })?;
        if bits.len() != self.n {
            return Err(FunctionError::WrongQueryLength { got: bits.len(), n: self.n });
        }
        Ok(bits.to_uint() as usize)
    }

    pub fn generate_named(name: &str, n: usize, seed: Option<u64>) -> Result<Self, FunctionError> {
        let upper = name.to_ascii_uppercase();
        let f = match upper.as_str() {
            "NEQ" => Self::from_fn(n, |x, y| x != y)?,
            "EQ" => Self::from_fn(n, |x, y| x == y)?,
            "CONST0" => Self::from_fn(n, |_, _| false)?,
            "CONST1" => Self::from_fn(n, |_, _| true)?,
            "DISJ" => Self::from_fn(n, |x, y| x & y == 0)?,
            "RANDOM" => {
                let seed = seed.ok_or(FunctionError::MissingSeed)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut f = Self::from_fn(n, |_, _| rng.gen::<bool>())?;
                f.seed = Some(seed);
                f
            }
            _ => return Err(FunctionError::UnknownName(name.to_string())),
        };
        Ok(f.with_name(upper))
    }

    /// The `id`-th of the 16 functions on one-bit inputs: bit `2x+y` of `id`
    /// is f(x,y).
    pub fn one_bit_table(id: u8) -> Self {
        assert!(id < 16);
        Self::from_fn(1, |x, y| id >> (2 * x + y) & 1 == 1)
            .expect("n=1 is valid")
            .with_name(format!("T1_{id:02}"))
    }

    pub fn parse_bfn(text: &str) -> Result<Self, ParseError> {
        let err = |line: usize, column: usize, message: String| ParseError { line, column, message };
        let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));
        let header = lines.next().unwrap_or("");
        let n_text = header
            .strip_prefix("n=")
            .ok_or_else(|| err(1, 1, format!("expected header \"n=<decimal>\", found {header:?}")))?;
        let n: usize = n_text
            .parse()
            .map_err(|_| err(1, 3, format!("invalid length {n_text:?}")))?;
        if !(1..=MAX_N).contains(&n) {
            return Err(err(1, 3, format!("n={n} outside [1, {MAX_N}]")));
        }
        let side = 1usize << n;
        let mut f = BoolFunction::blank(n).expect("n checked");
        let mut rows = 0usize;
        for (k, line) in lines.enumerate() {
            let line_no = k + 2;
            if line.is_empty() && rows == side {
                continue;
            }
            if rows == side {
                return Err(err(line_no, 1, format!("expected {side} rows, found extra row")));
            }
            let mut cols = 0usize;
            for (c, ch) in line.chars().enumerate() {
                if c >= side {
                    return Err(err(line_no, c + 1, format!("row longer than {side} characters")));
                }
                match ch {
                    '0' => {}
                    '1' => f.set(rows, c, true),
                    other => return Err(err(line_no, c + 1, format!("invalid symbol {other:?}"))),
                }
                cols += 1;
            }
            if cols != side {
                return Err(err(line_no, cols + 1, format!("row has {cols} characters, expected {side}")));
            }
            rows += 1;
        }
        if rows != side {
            return Err(err(rows + 2, 1, format!("expected {side} rows, found {rows}")));
        }
        Ok(f)
    }

    pub fn to_bfn(&self) -> String {
        let side = self.side();
        let mut out = String::with_capacity(side * (side + 1) + 8);
        out.push_str(&format!("n={}\n", self.n));
        for x in 0..side {
            for y in 0..side {
                out.push(if self.get(x, y) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, LoadError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut f = Self::parse_bfn(&text)?;
        if let Some(stem) = path.file_stem() {
            f.name = Some(stem.to_string_lossy().into_owned());
        }
        Ok(f)
    }

    pub fn to_file(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        fs::write(path, self.to_bfn())
    }

    /// Same truth table, ignoring labels.
    pub fn same_table(&self, other: &BoolFunction) -> bool {
        self.n == other.n && self.table == other.table
    }
}

/// Query access to f for programs; counts every query.
pub struct Oracle<'a> {
    f: &'a BoolFunction,
    queries: AtomicU64,
}

impl<'a> Oracle<'a> {
    pub fn n(&self) -> usize {
        self.f.n
    }

    pub fn query(&self, a: &Bits, b: &Bits) -> Result<bool, FunctionError> {
        let n = self.f.n;
        for arg in [a, b] {
            if arg.len() != n {
                return Err(FunctionError::WrongQueryLength { got: arg.len(), n });
            }
        }
        Ok(self.query_index(a.to_uint() as usize, b.to_uint() as usize))
    }

    pub fn query_index(&self, x: usize, y: usize) -> bool {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.f.get(x, y)
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// Reads the whole table through the oracle, one query per cell.
    pub fn read_all(&self) -> BoolFunction {
        let mut copy = BoolFunction::from_fn(self.f.n, |x, y| self.query_index(x, y)).expect("same n");
        copy.name = self.f.name.clone();
        copy.seed = self.f.seed;
        copy
    }
}
