//! Alice/Bob simulations of the guess-and-verify protocols over a channel
//! that counts every bit sent.
//!
//! The guess `w` reaches Alice for free. It is counted once she forwards it
//! to Bob. A failed test ends the run at once: no further messages, and both
//! parties output ⊥.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::Bits;
use crate::boolfun::IndexSet;
use crate::covers::log_sum_bits;
use crate::icomplex::StructuredClass;
use crate::witness::{decode_guess, Context, InvalidGuess, Mode, Output, WitnessProgram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    /// One-sided: the guess must name a rectangle of the canonical 1-cover.
    Fig1,
    /// One-sided: any program consistent with Alice's row.
    Fig3,
    /// Two-sided: the guess must name a rectangle of the combined sequence.
    Fig4,
    /// One-sided, bit-test guesses only.
    Neq,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 4] = [ProtocolKind::Fig1, ProtocolKind::Fig3, ProtocolKind::Fig4, ProtocolKind::Neq];

    pub fn is_two_sided(self) -> bool {
        self == ProtocolKind::Fig4
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProtocolKind::Fig1 => "fig1",
            ProtocolKind::Fig3 => "fig3",
            ProtocolKind::Fig4 => "fig4",
            ProtocolKind::Neq => "neq",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub from: Party,
    pub bits: Bits,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub protocol: ProtocolKind,
    pub n: usize,
    pub x: Bits,
    pub y: Bits,
    pub guess: Bits,
    pub messages: Vec<Message>,
    pub conversation_bits: usize,
    pub verdict: Output,
    pub output_alice: Output,
    pub output_bob: Output,
    pub guess_bits: usize,
    /// Conversation plus the guess itself, for the convention that charges w.
    pub bits_with_guess: usize,
    pub rejected: Option<String>,
}

impl Transcript {
    pub fn accepted(&self) -> bool {
        self.verdict != Output::Bot
    }
}

/// What Alice (and Bob) can work out from a guess before seeing any input.
#[derive(Clone, Debug)]
struct Facts {
    total: bool,
    outputs: Vec<Output>,
    ones: IndexSet,
    zeros: IndexSet,
    is_bittest: bool,
    /// Rows of the 1-cover rectangle whose column set equals `ones`.
    fig1_rows: Option<IndexSet>,
    /// Color and rows of the combined-sequence rectangle matching the
    /// decided set.
    fig4: Option<(bool, IndexSet)>,
}

#[derive(Clone, Debug)]
pub struct PreparedGuess {
    pub bits: Bits,
    pub program: Result<WitnessProgram, InvalidGuess>,
    facts: Option<Facts>,
}

impl PreparedGuess {
    pub fn new(bits: Bits, ctx: &Context, budget: u64) -> Self {
        let program = decode_guess(&bits, ctx);
        let facts = program.as_ref().ok().map(|p| facts(p, ctx, budget));
        PreparedGuess { bits, program, facts }
    }
}

fn facts(p: &WitnessProgram, ctx: &Context, budget: u64) -> Facts {
    let profile = p.profile(ctx);
    let side = ctx.side();
    let ones = IndexSet::from_indices(side, (0..side).filter(|&y| profile.outputs[y] == Output::One));
    let zeros = IndexSet::from_indices(side, (0..side).filter(|&y| profile.outputs[y] == Output::Zero));
    let mut decided = ones.clone();
    zeros.iter().for_each(|y| decided.insert(y));
    let rows = |mask: u64| IndexSet::from_indices(side, (0..side).filter(|&x| mask >> x & 1 == 1));
    let fig1_rows = ctx.covers().and_then(|c| {
        if ones.is_empty() {
            return None;
        }
        c.one.find_by_cols(ones.to_mask()).map(|(_, r)| rows(r.rows))
    });
    let fig4 = ctx.covers().and_then(|c| {
        let color = match (ones.is_empty(), zeros.is_empty()) {
            (false, true) => true,
            (true, false) => false,
            _ => return None,
        };
        c.side(color).find_by_cols(decided.to_mask()).map(|(_, r)| (color, rows(r.rows)))
    });
    Facts {
        total: profile.total_within(budget),
        outputs: profile.outputs,
        ones,
        zeros,
        is_bittest: matches!(p, WitnessProgram::BitTest { .. }),
        fig1_rows,
        fig4,
    }
}

/// Every bitstring up to `wmax`, decoded and evaluated once.
pub struct GuessCache {
    pub wmax: usize,
    pub budget: u64,
    pub guesses: Vec<PreparedGuess>,
}

impl GuessCache {
    pub fn new(ctx: &Context, budget: u64, wmax: usize) -> Self {
        let all: Vec<Bits> = Bits::all_up_to(wmax).collect();
        let guesses = all.into_par_iter().map(|b| PreparedGuess::new(b, ctx, budget)).collect();
        GuessCache { wmax, budget, guesses }
    }
}

struct Channel {
    messages: Vec<Message>,
}

impl Channel {
    fn send(&mut self, from: Party, bits: Bits) {
        self.messages.push(Message { from, bits });
    }
}

fn bit(b: bool) -> Bits {
    Bits::from_bools(vec![b])
}

/// Runs one protocol with guess `w`.
pub fn run(kind: ProtocolKind, ctx: &Context, x: usize, y: usize, w: &Bits, budget: u64) -> Transcript {
    run_prepared(kind, ctx, x, y, &PreparedGuess::new(w.clone(), ctx, budget))
}

pub fn run_prepared(kind: ProtocolKind, ctx: &Context, x: usize, y: usize, g: &PreparedGuess) -> Transcript {
    run_with_row(kind, ctx, &ctx.function().y_set(x, true), x, y, g)
}

/// `a` must be Y1(x); lets sweeps compute it once per row.
fn run_with_row(kind: ProtocolKind, ctx: &Context, a: &IndexSet, x: usize, y: usize, g: &PreparedGuess) -> Transcript {
    let f = ctx.function();
    let mut ch = Channel { messages: Vec::new() };
    let outcome = alice_and_bob(kind, a, x, y, g, &mut ch);
    let (output_alice, output_bob, rejected) = match outcome {
        Ok((oa, ob)) => (oa, ob, None),
        Err(reason) => (Output::Bot, Output::Bot, Some(reason)),
    };
    let verdict = if output_alice == output_bob { output_alice } else { Output::Bot };
    let conversation_bits = ch.messages.iter().map(|m| m.bits.len()).sum();
    Transcript {
        protocol: kind,
        n: f.n(),
        x: f.index_bits(x),
        y: f.index_bits(y),
        guess: g.bits.clone(),
        messages: ch.messages,
        conversation_bits,
        verdict,
        output_alice,
        output_bob,
        guess_bits: g.bits.len(),
        bits_with_guess: conversation_bits + g.bits.len(),
        rejected,
    }
}

fn fail<T>(reason: &str) -> Result<T, String> {
    Err(reason.to_string())
}

fn alice_and_bob(
    kind: ProtocolKind,
    a: &IndexSet,
    x: usize,
    y: usize,
    g: &PreparedGuess,
    ch: &mut Channel,
) -> Result<(Output, Output), String> {
    let facts = match (&g.program, &g.facts) {
        (Ok(_), Some(fs)) => fs,
        (Err(e), _) => return Err(format!("invalid guess: {e}")),
        _ => unreachable!("valid guesses carry facts"),
    };
    if !facts.total {
        return fail("guess does not halt within the budget");
    }
    // Alice's checks.
    let color = match kind {
        ProtocolKind::Fig1 => {
            if !facts.zeros.is_empty() {
                return fail("guess outputs 0");
            }
            let Some(rows) = &facts.fig1_rows else {
                return fail("no 1-cover rectangle has this column set");
            };
            if !rows.contains(x) {
                return fail("x is not in the rectangle's rows");
            }
            true
        }
        ProtocolKind::Fig3 | ProtocolKind::Neq => {
            if kind == ProtocolKind::Neq && !facts.is_bittest {
                return fail("guess is not a bit test");
            }
            if !facts.zeros.is_empty() {
                return fail("guess outputs 0");
            }
            if !facts.ones.is_subset(a) {
                return fail("guess is inconsistent with Y1(x)");
            }
            true
        }
        ProtocolKind::Fig4 => {
            let Some((color, rows)) = &facts.fig4 else {
                return fail("decided set is not the column set of a monochromatic rectangle");
            };
            if !rows.contains(x) {
                return fail("x is not in the rectangle's rows");
            }
            *color
        }
    };
    ch.send(Party::Alice, g.bits.clone());
    // Bob decodes the same guess and runs it on y.
    let bob_sees = facts.outputs[y];
    let decided = match kind {
        ProtocolKind::Fig4 => bob_sees != Output::Bot,
        _ => bob_sees == Output::One,
    };
    ch.send(Party::Bob, bit(decided));
    if !decided {
        return fail("guess does not decide y");
    }
    if kind == ProtocolKind::Fig3 {
        ch.send(Party::Alice, bit(true));
    }
    Ok((Output::from_bool(color), bob_sees))
}

/// The protocol's own canonical witness for a pair, or `None` when the
/// pair has no witness of that shape.
pub fn canonical_guess(kind: ProtocolKind, ctx: &Context, x: usize, y: usize, budget: u64) -> Option<Bits> {
    let f = ctx.function();
    let program = match kind {
        ProtocolKind::Fig1 => {
            let i = ctx.covers()?.one.first_containing(x, y)?;
            WitnessProgram::Rect1(i)
        }
        ProtocolKind::Fig4 => {
            let c = ctx.covers()?;
            let i = if f.get(x, y) {
                c.zero.m() + c.one.first_containing(x, y)?
            } else {
                c.zero.first_containing(x, y)?
            };
            WitnessProgram::Rect2(i)
        }
        ProtocolKind::Fig3 => {
            let class = StructuredClass::new(ctx);
            class.ic_pair(x, y, Mode::Yes, budget).witness?
        }
        ProtocolKind::Neq => {
            let n = ctx.n();
            let index = (0..n).find(|&i| (x ^ y) >> (n - 1 - i) & 1 == 1)?;
            WitnessProgram::BitTest {
                index,
                reference: x >> (n - 1 - index) & 1 == 1,
            }
        }
    };
    Some(program.encode(ctx))
}

/// The guess used by `--guess auto`: the exact ic witness (mode yes, or
/// two for the two-sided protocol) when the protocol accepts it, otherwise
/// the protocol's canonical witness.
pub fn auto_guess(kind: ProtocolKind, ctx: &Context, x: usize, y: usize, budget: u64) -> Option<Bits> {
    let mode = if kind.is_two_sided() { Mode::Two } else { Mode::Yes };
    if ctx.covers().is_some() {
        let class = StructuredClass::new(ctx);
        if let Some(w) = class.ic_pair(x, y, mode, budget).witness_encoding {
            if run(kind, ctx, x, y, &w, budget).accepted() {
                return Some(w);
            }
        }
    }
    canonical_guess(kind, ctx, x, y, budget)
}

fn target(kind: ProtocolKind, fxy: bool) -> Option<Output> {
    match (kind, fxy) {
        (ProtocolKind::Fig4, z) => Some(Output::from_bool(z)),
        (_, true) => Some(Output::One),
        (_, false) => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub protocol: ProtocolKind,
    pub function: String,
    pub n: usize,
    pub wmax: usize,
    pub budget: u64,
    pub guesses: usize,
    pub runs: usize,
    pub completeness_violations: Vec<(usize, usize)>,
    pub soundness_violations: Vec<(usize, usize, Bits)>,
    pub agreement_violations: Vec<(usize, usize, Bits)>,
    pub canonical_rejected: Vec<(usize, usize)>,
    pub pass: bool,
}

/// Exhaustive completeness, soundness and agreement over every pair and
/// every guess in the cache.
pub fn verify_conditions(kind: ProtocolKind, ctx: &Context, cache: &GuessCache) -> ConditionReport {
    let f = ctx.function();
    let side = f.side();
    let per_pair: Vec<_> = (0..side * side)
        .into_par_iter()
        .map(|k| {
            let (x, y) = (k / side, k % side);
            let want = target(kind, f.get(x, y));
            let mut complete = false;
            let mut unsound = Vec::new();
            let mut disagree = Vec::new();
            let a = f.y_set(x, true);
            for g in &cache.guesses {
                let t = run_with_row(kind, ctx, &a, x, y, g);
                if t.output_alice != t.output_bob {
                    disagree.push((x, y, g.bits.clone()));
                }
                if t.verdict == Output::Bot {
                    continue;
                }
                if Some(t.verdict) == want {
                    complete = true;
                } else {
                    unsound.push((x, y, g.bits.clone()));
                }
            }
            let canonical_ok = want.is_none()
                || canonical_guess(kind, ctx, x, y, cache.budget)
                    .is_some_and(|w| w.len() <= cache.wmax && run(kind, ctx, x, y, &w, cache.budget).verdict == want.unwrap());
            (x, y, want.is_none() || complete, unsound, disagree, canonical_ok)
        })
        .collect();
    let mut report = ConditionReport {
        protocol: kind,
        function: f.label(),
        n: f.n(),
        wmax: cache.wmax,
        budget: cache.budget,
        guesses: cache.guesses.len(),
        runs: side * side * cache.guesses.len(),
        completeness_violations: Vec::new(),
        soundness_violations: Vec::new(),
        agreement_violations: Vec::new(),
        canonical_rejected: Vec::new(),
        pass: false,
    };
    for (x, y, complete, unsound, disagree, canonical_ok) in per_pair {
        if !complete {
            report.completeness_violations.push((x, y));
        }
        if !canonical_ok {
            report.canonical_rejected.push((x, y));
        }
        report.soundness_violations.extend(unsound);
        report.agreement_violations.extend(disagree);
    }
    report.pass = report.completeness_violations.is_empty()
        && report.soundness_violations.is_empty()
        && report.agreement_violations.is_empty()
        && report.canonical_rejected.is_empty();
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Individual {
    /// Fewest conversation bits over accepted guesses; `None` when nothing
    /// up to wmax is accepted.
    pub bits: Option<usize>,
    pub witness: Option<Bits>,
}

/// Restricted individual complexity: the cheapest accepting run for the
/// pair's own value. Guesses are tried shortest first.
pub fn individual_complexity(kind: ProtocolKind, ctx: &Context, x: usize, y: usize, cache: &GuessCache) -> Individual {
    let want = target(kind, ctx.function().get(x, y)).unwrap_or(Output::One);
    let mut best: Option<(usize, &Bits)> = None;
    let a = ctx.function().y_set(x, true);
    for g in &cache.guesses {
        // Conversation cost is |w| plus at most 2, so longer guesses cannot win.
        if best.is_some_and(|(b, _)| g.bits.len() >= b) {
            break;
        }
        let t = run_with_row(kind, ctx, &a, x, y, g);
        if t.verdict == want && best.is_none_or(|(b, _)| t.conversation_bits < b) {
            best = Some((t.conversation_bits, &g.bits));
        }
    }
    Individual {
        bits: best.map(|(b, _)| b),
        witness: best.map(|(_, w)| w.clone()),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SideComplexity {
    pub pairs: usize,
    pub max_bits: Option<usize>,
    pub argmax: Option<(usize, usize)>,
    pub undefined: Vec<(usize, usize)>,
}

impl SideComplexity {
    /// Defined iff the side is non-empty and every pair has a witness.
    pub fn value(&self) -> Option<usize> {
        if self.pairs > 0 && self.undefined.is_empty() {
            self.max_bits
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolComplexity {
    pub protocol: ProtocolKind,
    pub function: String,
    pub n: usize,
    pub one: SideComplexity,
    pub zero: Option<SideComplexity>,
    /// log2(2^N0 + 2^N1) for the two-sided protocol, N1 otherwise.
    pub bits: Option<f64>,
    pub cover_bits: Option<usize>,
}

fn side_complexity(kind: ProtocolKind, ctx: &Context, cache: &GuessCache, z: bool) -> SideComplexity {
    let f = ctx.function();
    let side = f.side();
    let pairs: Vec<(usize, usize)> = (0..side)
        .flat_map(|x| (0..side).map(move |y| (x, y)))
        .filter(|&(x, y)| f.get(x, y) == z)
        .collect();
    let values: Vec<Option<usize>> = pairs
        .par_iter()
        .map(|&(x, y)| individual_complexity(kind, ctx, x, y, cache).bits)
        .collect();
    let mut out = SideComplexity {
        pairs: pairs.len(),
        ..SideComplexity::default()
    };
    for (&pair, v) in pairs.iter().zip(values) {
        match v {
            None => out.undefined.push(pair),
            Some(b) if out.max_bits.is_none_or(|m| b > m) => {
                out.max_bits = Some(b);
                out.argmax = Some(pair);
            }
            Some(_) => {}
        }
    }
    out
}

pub fn protocol_complexity(kind: ProtocolKind, ctx: &Context, cache: &GuessCache) -> ProtocolComplexity {
    let f = ctx.function();
    let one = side_complexity(kind, ctx, cache, true);
    let zero = kind.is_two_sided().then(|| side_complexity(kind, ctx, cache, false));
    let bits = match &zero {
        None => one.value().map(|v| v as f64),
        Some(z) => {
            let empty_ok = |s: &SideComplexity| s.pairs == 0 || s.value().is_some();
            if empty_ok(&one) && empty_ok(z) {
                log_sum_bits(z.value(), one.value())
            } else {
                None
            }
        }
    };
    let cover_bits = ctx.covers().and_then(|c| crate::covers::size_bits(c.one.m()).ok());
    ProtocolComplexity {
        protocol: kind,
        function: f.label(),
        n: f.n(),
        one,
        zero,
        bits,
        cover_bits,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndividualBound {
    pub x: Bits,
    pub y: Bits,
    pub applicable: bool,
    /// Minimum over the implemented one-sided protocols.
    pub restricted_bits: Option<usize>,
    pub best_protocol: Option<ProtocolKind>,
    pub ic_yes_bits: Option<usize>,
    /// restricted minus ic_yes.
    pub gap: Option<i64>,
    pub protocol_bits: Option<f64>,
    pub tolerance: u32,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl IndividualBound {
    pub fn holds(&self) -> bool {
        !self.applicable || (self.lower_holds && self.upper_holds)
    }
}

/// Per-function inputs to [`individual_bound_check`] computed once.
pub struct IndividualSetup<'a> {
    ctx: &'a Context,
    cache: GuessCache,
    class: StructuredClass<'a>,
    budget: u64,
    protocols: Vec<ProtocolKind>,
    upper: Option<f64>,
}

impl<'a> IndividualSetup<'a> {
    /// Uses FIG1 and FIG3 always, and NEQ when it is complete for f. The
    /// upper comparison is N1 of FIG1.
    pub fn new(ctx: &'a Context, budget: u64, wmax: usize) -> Self {
        let cache = GuessCache::new(ctx, budget, wmax);
        let mut protocols = vec![ProtocolKind::Fig1, ProtocolKind::Fig3];
        let neq = side_complexity(ProtocolKind::Neq, ctx, &cache, true);
        if neq.undefined.is_empty() {
            protocols.push(ProtocolKind::Neq);
        }
        let upper = protocol_complexity(ProtocolKind::Fig1, ctx, &cache).bits;
        IndividualSetup {
            ctx,
            cache,
            class: StructuredClass::new(ctx),
            budget,
            protocols,
            upper,
        }
    }

    pub fn protocols(&self) -> &[ProtocolKind] {
        &self.protocols
    }

    pub fn upper_bits(&self) -> Option<f64> {
        self.upper
    }
}

pub fn individual_bound_check(setup: &IndividualSetup<'_>, x: usize, y: usize, tolerance: u32) -> IndividualBound {
    let ctx = setup.ctx;
    let f = ctx.function();
    let mut out = IndividualBound {
        x: f.index_bits(x),
        y: f.index_bits(y),
        applicable: f.get(x, y),
        restricted_bits: None,
        best_protocol: None,
        ic_yes_bits: None,
        gap: None,
        protocol_bits: setup.upper,
        tolerance,
        lower_holds: false,
        upper_holds: false,
    };
    if !out.applicable {
        return out;
    }
    for &kind in &setup.protocols {
        if let Some(b) = individual_complexity(kind, ctx, x, y, &setup.cache).bits {
            if out.restricted_bits.is_none_or(|r| b < r) {
                out.restricted_bits = Some(b);
                out.best_protocol = Some(kind);
            }
        }
    }
    out.ic_yes_bits = setup.class.ic_pair(x, y, Mode::Yes, setup.budget).value_bits;
    if let (Some(r), Some(ic)) = (out.restricted_bits, out.ic_yes_bits) {
        let gap = r as i64 - ic as i64;
        out.gap = Some(gap);
        out.lower_holds = gap >= -(tolerance as i64);
        out.upper_holds = setup.upper.is_some_and(|u| r as f64 <= u);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::BoolFunction;
    use crate::witness::corresponds;

    fn ctx(name: &str, n: usize) -> Context {
        Context::new(BoolFunction::generate_named(name, n, None).unwrap()).unwrap()
    }

    fn setup(c: &Context) -> (u64, GuessCache) {
        let t = c.compute_budget();
        (t, GuessCache::new(c, t, c.default_wmax()))
    }

    #[test]
    fn neq_special_examples() {
        let c = Context::without_covers(BoolFunction::generate_named("NEQ", 3, None).unwrap());
        let t = c.compute_budget();
        let w = WitnessProgram::BitTest { index: 2, reference: true }.encode(&c);
        let r = run(ProtocolKind::Neq, &c, 0b101, 0b100, &w, t);
        assert_eq!(r.verdict, Output::One);
        assert_eq!(r.conversation_bits, w.len() + 1);
        assert_eq!(w.len(), 5);
        let w = WitnessProgram::BitTest { index: 0, reference: false }.encode(&c);
        let r = run(ProtocolKind::Neq, &c, 0b101, 0b100, &w, t);
        assert_eq!(r.verdict, Output::Bot);
        assert!(r.messages.is_empty() && r.conversation_bits == 0);
    }

    #[test]
    fn invalid_guess_is_bot() {
        let c = ctx("NEQ", 2);
        let t = c.compute_budget();
        for kind in ProtocolKind::ALL {
            let r = run(kind, &c, 0, 1, &"1".parse().unwrap(), t);
            assert_eq!((r.verdict, r.output_alice, r.output_bob), (Output::Bot, Output::Bot, Output::Bot));
            assert!(r.rejected.unwrap().starts_with("invalid guess"));
        }
    }

    #[test]
    fn one_sided_rejects_zero_pairs() {
        let f = BoolFunction::generate_named("RANDOM", 2, Some(4)).unwrap();
        let c = Context::new(f).unwrap();
        let (t, cache) = setup(&c);
        for kind in [ProtocolKind::Fig1, ProtocolKind::Fig3, ProtocolKind::Neq] {
            for x in 0..4 {
                for y in (0..4).filter(|&y| !c.function().get(x, y)) {
                    assert!(cache.guesses.iter().all(|g| run_prepared(kind, &c, x, y, g).verdict != Output::One));
                }
            }
        }
        let _ = t;
    }

    #[test]
    fn conditions_on_small_functions() {
        for c in [ctx("NEQ", 2), ctx("CONST0", 1), ctx("EQ", 1), ctx("DISJ", 2)] {
            let (_, cache) = setup(&c);
            for kind in [ProtocolKind::Fig1, ProtocolKind::Fig3, ProtocolKind::Fig4] {
                let r = verify_conditions(kind, &c, &cache);
                assert!(r.pass, "{kind} {}: {r:?}", c.function().label());
            }
        }
        let c = ctx("NEQ", 2);
        let (_, cache) = setup(&c);
        assert!(verify_conditions(ProtocolKind::Neq, &c, &cache).pass);
        // Bit tests cannot certify EQ.
        let c = ctx("EQ", 2);
        let (_, cache) = setup(&c);
        let r = verify_conditions(ProtocolKind::Neq, &c, &cache);
        assert!(!r.completeness_violations.is_empty() && r.soundness_violations.is_empty());
    }

    #[test]
    fn conversation_laws() {
        let c = ctx("DISJ", 2);
        let (_, cache) = setup(&c);
        for x in 0..4 {
            for y in 0..4 {
                for g in &cache.guesses {
                    for kind in ProtocolKind::ALL {
                        let t = run_prepared(kind, &c, x, y, g);
                        let sum: usize = t.messages.iter().map(|m| m.bits.len()).sum();
                        assert_eq!(sum, t.conversation_bits);
                        assert_eq!(t.output_alice, t.output_bob);
                        if t.accepted() {
                            let extra = if kind == ProtocolKind::Fig3 { 2 } else { 1 };
                            assert_eq!(t.conversation_bits, g.bits.len() + extra);
                            assert_eq!(t.bits_with_guess, 2 * g.bits.len() + extra);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fig3_accepts_exactly_corresponding_programs() {
        let f = BoolFunction::generate_named("RANDOM", 2, Some(11)).unwrap();
        let c = Context::new(f).unwrap();
        let (t, cache) = setup(&c);
        for x in 0..4 {
            let a = c.function().y_set(x, true);
            for y in 0..4 {
                for g in &cache.guesses {
                    let accepted = run_prepared(ProtocolKind::Fig3, &c, x, y, g).accepted();
                    let expected = c.function().get(x, y)
                        && g.program.as_ref().is_ok_and(|p| corresponds(p, y, &a, Mode::Yes, &c, t));
                    assert_eq!(accepted, expected, "x={x} y={y} w={}", g.bits);
                }
            }
        }
    }

    #[test]
    fn fig4_witness_length() {
        let c = ctx("NEQ", 2);
        let t = c.compute_budget();
        let mm = c.combined_len();
        for x in 0..4 {
            for y in 0..4 {
                let w = canonical_guess(ProtocolKind::Fig4, &c, x, y, t).unwrap();
                assert_eq!(w.len(), 2 + crate::bits::index_width(mm));
                let r = run(ProtocolKind::Fig4, &c, x, y, &w, t);
                assert_eq!(r.verdict, Output::from_bool(x != y));
            }
        }
    }

    #[test]
    fn individual_examples() {
        let c = ctx("CONST1", 1);
        let (_, cache) = setup(&c);
        let r = individual_complexity(ProtocolKind::Fig1, &c, 0, 1, &cache);
        assert_eq!(r.bits, Some(WitnessProgram::Rect1(0).bit_length(&c) + 1));
        let c = ctx("NEQ", 2);
        let (_, cache) = setup(&c);
        assert_eq!(individual_complexity(ProtocolKind::Fig1, &c, 1, 1, &cache).bits, None);
        let c = Context::without_covers(BoolFunction::generate_named("NEQ", 3, None).unwrap());
        let t = c.compute_budget();
        let cache = GuessCache::new(&c, t, c.default_wmax());
        assert_eq!(individual_complexity(ProtocolKind::Neq, &c, 0b101, 0b100, &cache).bits, Some(6));
    }

    #[test]
    fn complexity_figures() {
        let c = ctx("CONST1", 2);
        let (_, cache) = setup(&c);
        let p = protocol_complexity(ProtocolKind::Fig1, &c, &cache);
        assert_eq!(p.bits, Some(3.0));
        assert_eq!(p.cover_bits, Some(0));
        let c = Context::without_covers(BoolFunction::generate_named("NEQ", 4, None).unwrap());
        let t = c.compute_budget();
        let cache = GuessCache::new(&c, t, c.default_wmax());
        assert_eq!(protocol_complexity(ProtocolKind::Neq, &c, &cache).bits, Some(6.0));
        let c = ctx("EQ", 1);
        let (_, cache) = setup(&c);
        let p = protocol_complexity(ProtocolKind::Fig4, &c, &cache);
        // A bit test names a single diagonal column; only RECT2 yields 0.
        assert_eq!((p.one.value(), p.zero.as_ref().unwrap().value()), (Some(4), Some(5)));
        assert_eq!(p.bits, Some(48f64.log2()));
    }

    #[test]
    fn individual_bounds() {
        for c in [ctx("NEQ", 2), ctx("CONST1", 1)] {
            let t = c.compute_budget();
            let s = IndividualSetup::new(&c, t, c.default_wmax());
            for x in 0..c.side() {
                for y in 0..c.side() {
                    let r = individual_bound_check(&s, x, y, 3);
                    assert_eq!(r.applicable, c.function().get(x, y));
                    assert!(r.holds(), "{r:?}");
                }
            }
        }
        let c = ctx("NEQ", 2);
        let s = IndividualSetup::new(&c, c.compute_budget(), c.default_wmax());
        assert!(s.protocols().contains(&ProtocolKind::Neq));
        assert!(!individual_bound_check(&s, 2, 2, 3).applicable);
    }

    #[test]
    fn auto_guess_is_accepted() {
        let c = ctx("NEQ", 3);
        let t = c.compute_budget();
        for kind in [ProtocolKind::Fig1, ProtocolKind::Fig3, ProtocolKind::Fig4, ProtocolKind::Neq] {
            let w = auto_guess(kind, &c, 0b101, 0b100, t).unwrap();
            assert_eq!(run(kind, &c, 0b101, 0b100, &w, t).verdict, Output::One, "{kind}");
        }
    }
}
