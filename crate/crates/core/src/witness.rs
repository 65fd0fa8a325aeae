//! Structured witness programs: encoding, bounded execution with oracle
//! access, and the consistency / correspondence predicates.
//!
//! # Encoding
//!
//! Every program starts with a 2-bit tag; integers are MSB first.
//!
//! | tag  | program   | payload                                            |
//! |------|-----------|----------------------------------------------------|
//! | `00` | CONSTBOT  | nothing (the string is exactly `00`)               |
//! | `00` | COMBINE   | non-empty, see below                               |
//! | `01` | BITTEST   | `ceil(log2 n)` bits of `i`, then the bit `b`       |
//! | `10` | RECT1     | `ceil(log2 m)` bits of the 1-cover index           |
//! | `11` | RECT2     | `ceil(log2(m+m'))` bits of the index into `s`      |
//!
//! COMBINE(p, p') payload: a swap bit `s`, then one of the two programs is
//! length-delimited (`p` when `s=0`, `p'` when `s=1`). Let `L >= 2` be the
//! delimited length and `k` its number of binary digits. The header is
//! `k-2` ones and a zero, then the `k-1` digits of `L` after its leading 1.
//! The delimited program follows, then the other one fills the rest of the
//! string. Only the canonical form decodes: `s=1` exactly when `|p'| < |p|`.
//! The total length is `2 + 1 + 2(k-1) + |p| + |p'|` with
//! `k = ceil(log2(1 + min(|p|, |p'|)))`.
//!
//! A string decodes only if it is consumed exactly; everything else is an
//! [`InvalidGuess`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{bit_length, index_width, Bits};
use crate::boolfun::{BoolFunction, FunctionError, IndexSet};
use crate::covers::{CoverError, CoverPair, DEFAULT_COVER_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Output {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "bot")]
    Bot,
}

impl Output {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Output::One
        } else {
            Output::Zero
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Output::Zero => Some(false),
            Output::One => Some(true),
            Output::Bot => None,
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Output::Zero => "0",
            Output::One => "1",
            Output::Bot => "⊥",
        })
    }
}

/// Which instance complexity a program is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// ic_yes: outputs in {1, ⊥}, must accept members.
    Yes,
    /// ic_no: outputs in {0, ⊥}, must reject non-members.
    No,
    /// ic: any output, must decide the instance.
    Two,
}

impl Mode {
    pub fn allows(self, out: Output) -> bool {
        match (self, out) {
            (_, Output::Bot) | (Mode::Two, _) => true,
            (Mode::Yes, o) => o == Output::One,
            (Mode::No, o) => o == Output::Zero,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Yes => "yes",
            Mode::No => "no",
            Mode::Two => "two",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Rect1,
    Rect2,
    BitTest,
    ConstBot,
    Combine,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WitnessProgram {
    /// Index into the canonical 1-cover; outputs 1 on its column set.
    Rect1(usize),
    /// Index into the combined sequence s; outputs the rectangle's color on
    /// its column set.
    Rect2(usize),
    /// Outputs 1 when `y_index != reference`.
    BitTest { index: usize, reference: bool },
    ConstBot,
    /// 1 if the first outputs 1, else 0 if the second outputs 0, else ⊥.
    Combine(Box<WitnessProgram>, Box<WitnessProgram>),
}

impl WitnessProgram {
    pub fn combine(p: WitnessProgram, q: WitnessProgram) -> Self {
        WitnessProgram::Combine(Box::new(p), Box::new(q))
    }

    pub fn family(&self) -> Family {
        match self {
            WitnessProgram::Rect1(_) => Family::Rect1,
            WitnessProgram::Rect2(_) => Family::Rect2,
            WitnessProgram::BitTest { .. } => Family::BitTest,
            WitnessProgram::ConstBot => Family::ConstBot,
            WitnessProgram::Combine(..) => Family::Combine,
        }
    }

    pub fn encode(&self, ctx: &Context) -> Bits {
        let mut out = Bits::new();
        self.encode_into(ctx, &mut out);
        out
    }

    fn encode_into(&self, ctx: &Context, out: &mut Bits) {
        match self {
            WitnessProgram::ConstBot => out.push_uint(0b00, 2),
            WitnessProgram::BitTest { index, reference } => {
                out.push_uint(0b01, 2);
                out.push_uint(*index as u64, index_width(ctx.n()));
                out.push(*reference);
            }
            WitnessProgram::Rect1(i) => {
                out.push_uint(0b10, 2);
                out.push_uint(*i as u64, index_width(ctx.one_cover_len()));
            }
            WitnessProgram::Rect2(i) => {
                out.push_uint(0b11, 2);
                out.push_uint(*i as u64, index_width(ctx.combined_len()));
            }
            WitnessProgram::Combine(p, q) => {
                let (pb, qb) = (p.encode(ctx), q.encode(ctx));
                let swap = qb.len() < pb.len();
                let (first, second) = if swap { (&qb, &pb) } else { (&pb, &qb) };
                let len = first.len();
                let k = bit_length(len);
                out.push_uint(0b00, 2);
                out.push(swap);
                for _ in 0..k - 2 {
                    out.push(true);
                }
                out.push(false);
                out.push_uint((len - (1 << (k - 1))) as u64, k - 1);
                out.extend_from(first);
                out.extend_from(second);
            }
        }
    }

    pub fn bit_length(&self, ctx: &Context) -> usize {
        match self {
            WitnessProgram::ConstBot => 2,
            WitnessProgram::BitTest { .. } => 2 + index_width(ctx.n()) + 1,
            WitnessProgram::Rect1(_) => 2 + index_width(ctx.one_cover_len()),
            WitnessProgram::Rect2(_) => 2 + index_width(ctx.combined_len()),
            WitnessProgram::Combine(p, q) => {
                let (a, b) = (p.bit_length(ctx), q.bit_length(ctx));
                3 + 2 * (bit_length(a.min(b)) - 1) + a + b
            }
        }
    }

    /// Runs on column `y` with a step budget.
    ///
    /// Steps: each oracle query and each test on `y` costs one. A RECT
    /// program rebuilds the canonical covers from the oracle, which costs a
    /// full read of the table, then performs one membership test.
    pub fn execute(&self, y: usize, ctx: &Context, budget: u64) -> ExecutionResult {
        let mut meter = Meter { budget, used: 0 };
        match self.run(y, ctx, &mut meter) {
            Ok(out) => ExecutionResult {
                output: Some(out),
                steps: meter.used,
                timed_out: false,
            },
            Err(TimedOut) => ExecutionResult {
                output: None,
                steps: meter.budget,
                timed_out: true,
            },
        }
    }

    /// Same as [`execute`](Self::execute) with `y` given as an n-bit string.
    pub fn execute_bits(&self, y: &Bits, ctx: &Context, budget: u64) -> Result<ExecutionResult, FunctionError> {
        let n = ctx.n();
        if y.len() != n {
            return Err(FunctionError::WrongQueryLength { got: y.len(), n });
        }
        Ok(self.execute(y.to_uint() as usize, ctx, budget))
    }

    fn run(&self, y: usize, ctx: &Context, meter: &mut Meter) -> Result<Output, TimedOut> {
        match self {
            WitnessProgram::ConstBot => {
                meter.charge(1)?;
                Ok(Output::Bot)
            }
            WitnessProgram::BitTest { index, reference } => {
                meter.charge(1)?;
                let bit = y >> (ctx.n() - 1 - index) & 1 == 1;
                Ok(if bit != *reference { Output::One } else { Output::Bot })
            }
            WitnessProgram::Rect1(i) => {
                meter.charge(ctx.read_cost)?;
                meter.charge(1)?;
                let rect = ctx.covers().and_then(|c| c.one.rectangles.get(*i));
                Ok(match rect {
                    Some(r) if r.has_col(y) => Output::One,
                    _ => Output::Bot,
                })
            }
            WitnessProgram::Rect2(i) => {
                meter.charge(ctx.read_cost)?;
                meter.charge(1)?;
                let rect = ctx.covers().and_then(|c| c.combined_get(*i));
                Ok(match rect {
                    Some(r) if r.has_col(y) => Output::from_bool(r.color),
                    _ => Output::Bot,
                })
            }
            WitnessProgram::Combine(p, q) => {
                if p.run(y, ctx, meter)? == Output::One {
                    return Ok(Output::One);
                }
                Ok(match q.run(y, ctx, meter)? {
                    Output::Zero => Output::Zero,
                    _ => Output::Bot,
                })
            }
        }
    }

    /// Outputs and step counts on every column, without a budget.
    pub fn profile(&self, ctx: &Context) -> Profile {
        match self {
            WitnessProgram::Combine(p, q) => Profile::combine(&p.profile(ctx), &q.profile(ctx)),
            _ => {
                let (outputs, steps) = (0..ctx.side())
                    .map(|y| {
                        let r = self.execute(y, ctx, u64::MAX);
                        (r.output.expect("unbounded run finishes"), r.steps)
                    })
                    .unzip();
                Profile { outputs, steps }
            }
        }
    }
}

impl fmt::Display for WitnessProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessProgram::Rect1(i) => write!(f, "RECT1{{i={i}}}"),
            WitnessProgram::Rect2(i) => write!(f, "RECT2{{i={i}}}"),
            WitnessProgram::BitTest { index, reference } => {
                write!(f, "BITTEST{{i={index},b={}}}", *reference as u8)
            }
            WitnessProgram::ConstBot => f.write_str("CONSTBOT"),
            WitnessProgram::Combine(p, q) => write!(f, "COMBINE({p}, {q})"),
        }
    }
}

struct TimedOut;

struct Meter {
    budget: u64,
    used: u64,
}

impl Meter {
    fn charge(&mut self, k: u64) -> Result<(), TimedOut> {
        match self.used.checked_add(k) {
            Some(total) if total <= self.budget => {
                self.used = total;
                Ok(())
            }
            _ => {
                self.used = self.budget;
                Err(TimedOut)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExecutionResult {
    /// `None` exactly when the run timed out.
    pub output: Option<Output>,
    pub steps: u64,
    pub timed_out: bool,
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum InvalidGuess {
    #[error("guess shorter than the 2-bit tag")]
    MissingTag,
    #[error("payload truncated")]
    Truncated,
    #[error("trailing bits after the program")]
    Trailing,
    #[error("index out of range")]
    IndexOutOfRange,
    #[error("rectangle programs need covers, which are unavailable here")]
    NoCovers,
    #[error("non-canonical COMBINE delimiter")]
    NonCanonical,
}

/// Decodes a guess; any string either decodes to exactly one program or is
/// invalid.
pub fn decode_guess(bits: &Bits, ctx: &Context) -> Result<WitnessProgram, InvalidGuess> {
    let b = bits.as_slice();
    if b.len() < 2 {
        return Err(InvalidGuess::MissingTag);
    }
    let payload = &b[2..];
    let read_uint = |width: usize| -> Result<usize, InvalidGuess> {
        match payload.len().cmp(&width) {
            std::cmp::Ordering::Less => Err(InvalidGuess::Truncated),
            std::cmp::Ordering::Greater => Err(InvalidGuess::Trailing),
            std::cmp::Ordering::Equal => Ok(payload.iter().fold(0usize, |acc, &x| acc << 1 | x as usize)),
        }
    };
    match (b[0], b[1]) {
        (false, false) if payload.is_empty() => Ok(WitnessProgram::ConstBot),
        (false, false) => decode_combine(payload, ctx),
        (false, true) => {
            let width = index_width(ctx.n());
            if payload.len() < width + 1 {
                return Err(InvalidGuess::Truncated);
            }
            if payload.len() > width + 1 {
                return Err(InvalidGuess::Trailing);
            }
            let index = payload[..width].iter().fold(0usize, |acc, &x| acc << 1 | x as usize);
            if index >= ctx.n() {
                return Err(InvalidGuess::IndexOutOfRange);
            }
            Ok(WitnessProgram::BitTest {
                index,
                reference: payload[width],
            })
        }
        (true, false) => {
            ctx.covers().ok_or(InvalidGuess::NoCovers)?;
            let m = ctx.one_cover_len();
            if m == 0 {
                return Err(InvalidGuess::IndexOutOfRange);
            }
            let i = read_uint(index_width(m))?;
            if i < m {
                Ok(WitnessProgram::Rect1(i))
            } else {
                Err(InvalidGuess::IndexOutOfRange)
            }
        }
        (true, true) => {
            ctx.covers().ok_or(InvalidGuess::NoCovers)?;
            let total = ctx.combined_len();
            let i = read_uint(index_width(total))?;
            if i < total {
                Ok(WitnessProgram::Rect2(i))
            } else {
                Err(InvalidGuess::IndexOutOfRange)
            }
        }
    }
}

fn decode_combine(payload: &[bool], ctx: &Context) -> Result<WitnessProgram, InvalidGuess> {
    let mut pos = 0;
    let mut take = || -> Result<bool, InvalidGuess> {
        let bit = *payload.get(pos).ok_or(InvalidGuess::Truncated)?;
        pos += 1;
        Ok(bit)
    };
    let swap = take()?;
    let mut ones = 0;
    while take()? {
        ones += 1;
        if ones > 32 {
            return Err(InvalidGuess::Truncated);
        }
    }
    let k = ones + 2;
    let mut len = 1usize;
    for _ in 0..k - 1 {
        len = len << 1 | take()? as usize;
    }
    if payload.len() < pos + len {
        return Err(InvalidGuess::Truncated);
    }
    let first = decode_guess(&Bits::from_bools(payload[pos..pos + len].to_vec()), ctx)?;
    let second = decode_guess(&Bits::from_bools(payload[pos + len..].to_vec()), ctx)?;
    let second_len = payload.len() - pos - len;
    let canonical = if swap { len < second_len } else { len <= second_len };
    if !canonical {
        return Err(InvalidGuess::NonCanonical);
    }
    Ok(if swap {
        WitnessProgram::combine(second, first)
    } else {
        WitnessProgram::combine(first, second)
    })
}

/// Everything a witness program may consult: the function as seen through
/// its oracle and the canonical covers rebuilt from it.
#[derive(Clone, Debug)]
pub struct Context {
    f: BoolFunction,
    covers: Option<CoverPair>,
    /// Oracle queries needed to rebuild the covers (one full table read).
    read_cost: u64,
}

impl Context {
    /// Builds covers when n is within the default cover limit.
    pub fn new(f: BoolFunction) -> Result<Self, CoverError> {
        if f.n() <= DEFAULT_COVER_LIMIT {
            Self::with_cover_limit(f, DEFAULT_COVER_LIMIT)
        } else {
            Ok(Self::without_covers(f))
        }
    }

    pub fn with_cover_limit(f: BoolFunction, limit: usize) -> Result<Self, CoverError> {
        let oracle = f.oracle();
        let seen = oracle.read_all();
        let read_cost = oracle.queries();
        let covers = CoverPair::compute(&seen, limit)?;
        Ok(Context {
            f,
            covers: Some(covers),
            read_cost,
        })
    }

    /// RECT programs are invalid in this context.
    pub fn without_covers(f: BoolFunction) -> Self {
        let read_cost = f.cell_count() as u64;
        Context {
            f,
            covers: None,
            read_cost,
        }
    }

    pub fn function(&self) -> &BoolFunction {
        &self.f
    }

    pub fn covers(&self) -> Option<&CoverPair> {
        self.covers.as_ref()
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn side(&self) -> usize {
        self.f.side()
    }

    pub fn read_cost(&self) -> u64 {
        self.read_cost
    }

    pub fn one_cover_len(&self) -> usize {
        self.covers.as_ref().map_or(0, |c| c.one.m())
    }

    pub fn zero_cover_len(&self) -> usize {
        self.covers.as_ref().map_or(0, |c| c.zero.m())
    }

    pub fn combined_len(&self) -> usize {
        self.covers.as_ref().map_or(0, |c| c.combined_len())
    }

    /// Every non-COMBINE program valid here, in encoding order.
    pub fn elementary_programs(&self) -> Vec<WitnessProgram> {
        let mut out = vec![WitnessProgram::ConstBot];
        for index in 0..self.n() {
            for reference in [false, true] {
                out.push(WitnessProgram::BitTest { index, reference });
            }
        }
        if self.covers.is_some() {
            out.extend((0..self.one_cover_len()).map(WitnessProgram::Rect1));
            out.extend((0..self.combined_len()).map(WitnessProgram::Rect2));
        }
        out
    }

    /// 2 x the largest step count of any elementary program on any column,
    /// which leaves room for a COMBINE of two of them.
    pub fn compute_budget(&self) -> u64 {
        let worst = self
            .elementary_programs()
            .iter()
            .map(|p| p.profile(self).max_steps())
            .max()
            .unwrap_or(1)
            .max(1);
        2 * worst
    }

    /// Default guess-length cap for exhaustive protocol sweeps.
    pub fn default_wmax(&self) -> usize {
        let bittest = index_width(self.n()) + 1;
        let rects = if self.covers.is_some() {
            index_width(self.one_cover_len()).max(index_width(self.combined_len()))
        } else {
            0
        };
        2 + bittest.max(rects) + 2
    }
}

/// What a program does on every column of the function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub outputs: Vec<Output>,
    pub steps: Vec<u64>,
}

impl Profile {
    pub fn combine(p: &Profile, q: &Profile) -> Profile {
        let (outputs, steps) = p
            .outputs
            .iter()
            .zip(&q.outputs)
            .zip(p.steps.iter().zip(&q.steps))
            .map(|((&a, &b), (&sa, &sb))| match (a, b) {
                (Output::One, _) => (Output::One, sa),
                (_, Output::Zero) => (Output::Zero, sa + sb),
                _ => (Output::Bot, sa + sb),
            })
            .unzip();
        Profile { outputs, steps }
    }

    pub fn max_steps(&self) -> u64 {
        self.steps.iter().copied().max().unwrap_or(0)
    }

    pub fn total_within(&self, budget: u64) -> bool {
        self.max_steps() <= budget
    }

    pub fn output(&self, y: usize) -> Output {
        self.outputs[y]
    }

    pub fn alphabet_ok(&self, mode: Mode) -> bool {
        self.outputs.iter().all(|&o| mode.allows(o))
    }

    pub fn consistent_with(&self, a: &IndexSet) -> bool {
        self.outputs.iter().enumerate().all(|(y, &o)| match o {
            Output::One => a.contains(y),
            Output::Zero => !a.contains(y),
            Output::Bot => true,
        })
    }

    /// C4 for the given mode.
    pub fn decides(&self, y: usize, a: &IndexSet, mode: Mode) -> bool {
        let out = self.outputs[y];
        match mode {
            Mode::Yes => !a.contains(y) || out == Output::One,
            Mode::No => a.contains(y) || out == Output::Zero,
            Mode::Two => out != Output::Bot,
        }
    }

    pub fn corresponds(&self, y: usize, a: &IndexSet, mode: Mode, budget: u64) -> bool {
        self.total_within(budget) && self.alphabet_ok(mode) && self.consistent_with(a) && self.decides(y, a, mode)
    }
}

pub fn is_total_within(p: &WitnessProgram, ctx: &Context, budget: u64) -> bool {
    (0..ctx.side()).all(|y| !p.execute(y, ctx, budget).timed_out)
}

/// Never outputs 1 outside `a` nor 0 inside it. False if `p` is not total
/// within `budget`.
pub fn is_consistent(p: &WitnessProgram, a: &IndexSet, ctx: &Context, budget: u64) -> bool {
    (0..ctx.side()).all(|y| match p.execute(y, ctx, budget).output {
        None => false,
        Some(Output::One) => a.contains(y),
        Some(Output::Zero) => !a.contains(y),
        Some(Output::Bot) => true,
    })
}

/// Conditions C1-C4 of the chosen instance complexity for instance `y`.
pub fn corresponds(p: &WitnessProgram, y: usize, a: &IndexSet, mode: Mode, ctx: &Context, budget: u64) -> bool {
    let runs: Vec<ExecutionResult> = (0..ctx.side()).map(|v| p.execute(v, ctx, budget)).collect();
    if runs.iter().any(|r| r.timed_out) {
        return false;
    }
    let outputs: Vec<Output> = runs.iter().map(|r| r.output.expect("not timed out")).collect();
    if !outputs.iter().all(|&o| mode.allows(o)) || !is_consistent(p, a, ctx, budget) {
        return false;
    }
    match mode {
        Mode::Yes => !a.contains(y) || outputs[y] == Output::One,
        Mode::No => a.contains(y) || outputs[y] == Output::Zero,
        Mode::Two => outputs[y] != Output::Bot,
    }
}
