//! Time-bounded instance complexity over the structured witness family, and
//! the cover-side quantities it is compared against.

use serde::Serialize;

use crate::bits::{index_width, Bits};
use crate::boolfun::IndexSet;
use crate::covers::{n_of_f_bits, size_bits};
use crate::witness::{Context, Mode, Profile, WitnessProgram};

/// Extra steps charged for running two programs back to back. Our COMBINE
/// dispatch is free, so the combined bound is exactly T1 + T2.
pub const SIMULATION_SLACK: u64 = 0;

pub const DEFAULT_TOLERANCE: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IcResult {
    pub model: &'static str,
    pub mode: Mode,
    pub budget: u64,
    /// `None` means no structured program corresponds (infinite).
    pub value_bits: Option<usize>,
    #[serde(skip)]
    pub witness: Option<WitnessProgram>,
    pub witness_name: Option<String>,
    pub witness_encoding: Option<Bits>,
}

impl IcResult {
    pub fn is_finite(&self) -> bool {
        self.value_bits.is_some()
    }
}

struct Candidate {
    program: WitnessProgram,
    encoding: Bits,
    profile: Profile,
}

/// The structured program class of one context, with every elementary
/// program evaluated once on all columns.
pub struct StructuredClass<'a> {
    ctx: &'a Context,
    elementary: Vec<Candidate>,
}

impl<'a> StructuredClass<'a> {
    pub fn new(ctx: &'a Context) -> Self {
        let mut elementary: Vec<Candidate> = ctx
            .elementary_programs()
            .into_iter()
            .map(|program| Candidate {
                encoding: program.encode(ctx),
                profile: program.profile(ctx),
                program,
            })
            .collect();
        elementary.sort_by(|a, b| a.encoding.cmp(&b.encoding));
        StructuredClass { ctx, elementary }
    }

    pub fn context(&self) -> &Context {
        self.ctx
    }

    pub fn budget(&self) -> u64 {
        self.ctx.compute_budget()
    }

    /// Shortest corresponding program; ties go to the numerically smallest
    /// encoding. Mode `two` also considers COMBINE of two elementary programs.
    pub fn ic(&self, y: usize, a: &IndexSet, mode: Mode, budget: u64) -> IcResult {
        let mut best: Option<(Bits, WitnessProgram)> = self
            .elementary
            .iter()
            .find(|c| c.profile.corresponds(y, a, mode, budget))
            .map(|c| (c.encoding.clone(), c.program.clone()));
        if mode == Mode::Two {
            for p in &self.elementary {
                for q in &self.elementary {
                    let len = combine_length(p.encoding.len(), q.encoding.len());
                    if best.as_ref().is_some_and(|(b, _)| b.len() < len) {
                        continue;
                    }
                    let program = WitnessProgram::combine(p.program.clone(), q.program.clone());
                    let encoding = program.encode(self.ctx);
                    if best.as_ref().is_some_and(|(b, _)| *b <= encoding) {
                        continue;
                    }
                    if Profile::combine(&p.profile, &q.profile).corresponds(y, a, mode, budget) {
                        best = Some((encoding, program));
                    }
                }
            }
        }
        IcResult {
            model: "structured",
            mode,
            budget,
            value_bits: best.as_ref().map(|(e, _)| e.len()),
            witness_name: best.as_ref().map(|(_, p)| p.to_string()),
            witness_encoding: best.as_ref().map(|(e, _)| e.clone()),
            witness: best.map(|(_, p)| p),
        }
    }

    /// ic for instance `y` against `A = Y1(x)`.
    pub fn ic_pair(&self, x: usize, y: usize, mode: Mode, budget: u64) -> IcResult {
        let a = self.ctx.function().y_set(x, true);
        self.ic(y, &a, mode, budget)
    }

    /// Maximum over the pairs the theorem ranges over: f(x,y)=1 for `yes`,
    /// f(x,y)=0 for `no`, all pairs for `two`; always with A = Y1(x).
    pub fn max_over_pairs(&self, mode: Mode, budget: u64) -> MaxIc {
        let f = self.ctx.function();
        let side = f.side();
        let mut out = MaxIc::default();
        for x in 0..side {
            let a = f.y_set(x, true);
            for y in 0..side {
                let qualifies = match mode {
                    Mode::Yes => f.get(x, y),
                    Mode::No => !f.get(x, y),
                    Mode::Two => true,
                };
                if !qualifies {
                    continue;
                }
                out.pairs += 1;
                let r = self.ic(y, &a, mode, budget);
                match r.value_bits {
                    None => out.infinite_pairs.push((x, y)),
                    Some(v) if out.max_bits.is_none_or(|m| v > m) => {
                        out.max_bits = Some(v);
                        out.argmax = Some((x, y));
                        out.witness = r.witness_encoding;
                    }
                    Some(_) => {}
                }
            }
        }
        out
    }
}

/// Bit length of COMBINE(p, q) from the operand lengths.
pub fn combine_length(p: usize, q: usize) -> usize {
    3 + 2 * (crate::bits::bit_length(p.min(q)) - 1) + p + q
}

/// |p| + |p'| + 2 ceil(log2(1 + min)) + 2.
pub fn combination_bound(yes: usize, no: usize) -> usize {
    yes + no + 2 * index_width(1 + yes.min(no)) + 2
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MaxIc {
    pub pairs: usize,
    pub max_bits: Option<usize>,
    pub argmax: Option<(usize, usize)>,
    pub witness: Option<Bits>,
    pub infinite_pairs: Vec<(usize, usize)>,
}

impl MaxIc {
    pub fn is_empty(&self) -> bool {
        self.pairs == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub function: String,
    pub n: usize,
    pub mode: Mode,
    pub lhs_bits: Option<f64>,
    pub rhs_bits: Option<usize>,
    /// rhs minus ceil(lhs).
    pub gap: Option<i64>,
    pub argmax_pair: Option<(String, String)>,
    pub witness_encoding: Option<Bits>,
    pub budget: u64,
    pub tolerance: u32,
    pub empty_side: bool,
    pub pass: bool,
}

/// Compares the cover side with the maximal instance complexity.
///
/// `yes`: ceil(log2 C1) against max ic_yes over 1-pairs. `no`: the same for
/// the 0 side. `two`: log2(2^k0 + 2^k1) against max ic over all pairs.
pub fn verify_theorem(class: &StructuredClass<'_>, mode: Mode, budget: u64, tolerance: u32) -> TheoremReport {
    let ctx = class.context();
    let f = ctx.function();
    let covers = ctx.covers().expect("theorem checks need covers");
    let lhs = match mode {
        Mode::Yes => size_bits(covers.one.m()).ok().map(|k| k as f64),
        Mode::No => size_bits(covers.zero.m()).ok().map(|k| k as f64),
        Mode::Two => Some(n_of_f_bits(covers)),
    };
    let max = class.max_over_pairs(mode, budget);
    let empty_side = max.is_empty();
    let gap = match (lhs, max.max_bits) {
        (Some(l), Some(r)) if max.infinite_pairs.is_empty() => Some(r as i64 - l.ceil() as i64),
        _ => None,
    };
    let pass = if empty_side {
        lhs.is_none()
    } else {
        gap.is_some_and(|g| g.unsigned_abs() <= tolerance as u64)
    };
    TheoremReport {
        function: f.label(),
        n: f.n(),
        mode,
        lhs_bits: lhs,
        rhs_bits: max.max_bits,
        gap,
        argmax_pair: max.argmax.map(|(x, y)| (f.index_bits(x).to_string(), f.index_bits(y).to_string())),
        witness_encoding: max.witness,
        budget,
        tolerance,
        empty_side,
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombinationReport {
    pub y: usize,
    pub applicable: bool,
    pub yes_bits: Option<usize>,
    pub no_bits: Option<usize>,
    pub combined_bits: Option<usize>,
    pub combined_encoding: Option<Bits>,
    pub combined_corresponds: bool,
    pub two_bits: Option<usize>,
    pub bound: Option<usize>,
    pub combined_budget: u64,
    pub holds: bool,
}

/// Builds COMBINE of the exact ic_yes and ic_no witnesses and checks it
/// against ic at the combined budget T + T + slack.
pub fn combination_check(class: &StructuredClass<'_>, y: usize, a: &IndexSet, budget: u64) -> CombinationReport {
    let ctx = class.context();
    let yes = class.ic(y, a, Mode::Yes, budget);
    let no = class.ic(y, a, Mode::No, budget);
    let combined_budget = budget + budget + SIMULATION_SLACK;
    let (Some(p), Some(q)) = (yes.witness.clone(), no.witness.clone()) else {
        return CombinationReport {
            y,
            applicable: false,
            yes_bits: yes.value_bits,
            no_bits: no.value_bits,
            combined_bits: None,
            combined_encoding: None,
            combined_corresponds: false,
            two_bits: None,
            bound: None,
            combined_budget,
            holds: true,
        };
    };
    let r = WitnessProgram::combine(p, q);
    let encoding = r.encode(ctx);
    let corresponds = r.profile(ctx).corresponds(y, a, Mode::Two, combined_budget);
    let two = class.ic(y, a, Mode::Two, combined_budget);
    let (yb, nb) = (yes.value_bits.unwrap(), no.value_bits.unwrap());
    let bound = combination_bound(yb, nb);
    let holds = corresponds && encoding.len() <= bound && two.value_bits.is_some_and(|t| t <= bound);
    CombinationReport {
        y,
        applicable: true,
        yes_bits: Some(yb),
        no_bits: Some(nb),
        combined_bits: Some(encoding.len()),
        combined_encoding: Some(encoding),
        combined_corresponds: corresponds,
        two_bits: two.value_bits,
        bound: Some(bound),
        combined_budget,
        holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::BoolFunction;
    use crate::witness::corresponds;

    fn ctx(name: &str, n: usize) -> Context {
        Context::new(BoolFunction::generate_named(name, n, None).unwrap()).unwrap()
    }

    /// Brute force over every bitstring up to `max_len`, decoding and
    /// checking correspondence directly.
    fn brute_ic(c: &Context, y: usize, a: &IndexSet, mode: Mode, t: u64, max_len: usize) -> Option<usize> {
        Bits::all_up_to(max_len)
            .filter_map(|s| crate::witness::decode_guess(&s, c).ok().map(|p| (s, p)))
            .filter(|(_, p)| {
                let nested_ok = match p {
                    WitnessProgram::Combine(l, r) => {
                        mode == Mode::Two
                            && !matches!(**l, WitnessProgram::Combine(..))
                            && !matches!(**r, WitnessProgram::Combine(..))
                    }
                    _ => true,
                };
                nested_ok && corresponds(p, y, a, mode, c, t)
            })
            .map(|(s, _)| s.len())
            .next()
    }

    #[test]
    fn vacuous_yes_is_constbot() {
        let c = ctx("NEQ", 2);
        let class = StructuredClass::new(&c);
        let r = class.ic_pair(1, 1, Mode::Yes, class.budget());
        assert_eq!(r.value_bits, Some(2));
        assert_eq!(r.witness, Some(WitnessProgram::ConstBot));
    }

    #[test]
    fn neq1_yes_uses_bittest() {
        let c = ctx("NEQ", 1);
        let class = StructuredClass::new(&c);
        let r = class.ic_pair(0, 1, Mode::Yes, class.budget());
        assert_eq!(r.value_bits, Some(3));
        assert_eq!(r.witness, Some(WitnessProgram::BitTest { index: 0, reference: false }));
    }

    #[test]
    fn const1_two_is_two_bits() {
        let c = ctx("CONST1", 1);
        let class = StructuredClass::new(&c);
        for x in 0..2 {
            for y in 0..2 {
                let r = class.ic_pair(x, y, Mode::Two, class.budget());
                assert_eq!(r.value_bits, Some(2));
                // RECT1{0} = "10" and RECT2{0} = "11" both correspond; the
                // smaller encoding wins.
                assert_eq!(r.witness, Some(WitnessProgram::Rect1(0)));
                assert!(corresponds(&WitnessProgram::Rect2(0), y, &c.function().y_set(x, true), Mode::Two, &c, class.budget()));
            }
        }
    }

    #[test]
    fn max_over_pairs_examples() {
        let c = ctx("CONST1", 2);
        let class = StructuredClass::new(&c);
        assert_eq!(class.max_over_pairs(Mode::Yes, class.budget()).max_bits, Some(2));
        let c = ctx("NEQ", 2);
        let class = StructuredClass::new(&c);
        let m = class.max_over_pairs(Mode::Yes, class.budget());
        assert_eq!((m.pairs, m.max_bits), (12, Some(4)));
        let c = ctx("CONST0", 1);
        let class = StructuredClass::new(&c);
        assert!(class.max_over_pairs(Mode::Yes, class.budget()).is_empty());
    }

    #[test]
    fn theorem_reports() {
        let c = ctx("NEQ", 2);
        let class = StructuredClass::new(&c);
        let r = verify_theorem(&class, Mode::Yes, class.budget(), 3);
        assert_eq!((r.lhs_bits, r.rhs_bits, r.gap, r.pass), (Some(2.0), Some(4), Some(2), true));
        let c = ctx("CONST1", 2);
        let class = StructuredClass::new(&c);
        let r = verify_theorem(&class, Mode::Yes, class.budget(), 3);
        assert_eq!((r.lhs_bits, r.rhs_bits, r.gap, r.pass), (Some(0.0), Some(2), Some(2), true));
        let c = ctx("EQ", 3);
        let class = StructuredClass::new(&c);
        let r = verify_theorem(&class, Mode::Yes, class.budget(), 3);
        assert_eq!(r.lhs_bits, Some(3.0));
        assert!(r.pass && r.gap.unwrap().abs() <= 3);
        let c = ctx("CONST0", 1);
        let class = StructuredClass::new(&c);
        let r = verify_theorem(&class, Mode::Yes, class.budget(), 3);
        assert!(r.empty_side && r.pass);
    }

    #[test]
    fn structured_min_matches_brute_force() {
        for c in [ctx("NEQ", 1), ctx("EQ", 2), ctx("NEQ", 2), ctx("DISJ", 2)] {
            let class = StructuredClass::new(&c);
            let t = class.budget();
            for x in 0..c.side() {
                let a = c.function().y_set(x, true);
                for y in 0..c.side() {
                    for mode in [Mode::Yes, Mode::No, Mode::Two] {
                        let fast = class.ic(y, &a, mode, t).value_bits;
                        assert_eq!(fast, brute_ic(&c, y, &a, mode, t, 12), "{} x={x} y={y} {mode}", c.function().label());
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_recheck_and_order() {
        let f = BoolFunction::generate_named("RANDOM", 2, Some(9)).unwrap();
        let c = Context::new(f).unwrap();
        let class = StructuredClass::new(&c);
        let t = class.budget();
        for x in 0..4 {
            let a = c.function().y_set(x, true);
            for y in 0..4 {
                let two = class.ic(y, &a, Mode::Two, t);
                for mode in [Mode::Yes, Mode::No, Mode::Two] {
                    let r = class.ic(y, &a, mode, t);
                    let w = r.witness.as_ref().unwrap();
                    assert!(corresponds(w, y, &a, mode, &c, t));
                    assert_eq!(w.bit_length(&c), r.value_bits.unwrap());
                    assert!(r.value_bits <= two.value_bits);
                }
            }
        }
    }

    #[test]
    fn infinite_when_nothing_fits() {
        // A = {0} at NEQ_2 is not any Y1(x); deciding y=0 needs a program
        // outputting 1 only on {0}, which the family lacks.
        let c = ctx("NEQ", 2);
        let class = StructuredClass::new(&c);
        let a = IndexSet::from_indices(4, [0]);
        assert_eq!(class.ic(0, &a, Mode::Yes, class.budget()).value_bits, None);
    }

    #[test]
    fn budget_monotonicity() {
        let c = ctx("DISJ", 2);
        let class = StructuredClass::new(&c);
        let t = class.budget();
        for x in 0..4 {
            let a = c.function().y_set(x, true);
            for y in 0..4 {
                for mode in [Mode::Yes, Mode::No, Mode::Two] {
                    let at = |b: u64| class.ic(y, &a, mode, b).value_bits.unwrap_or(usize::MAX);
                    assert_eq!(at(2 * t), at(t));
                    assert!(at(t / 4) >= at(t));
                    assert!(at(0) >= at(t / 4));
                }
            }
        }
    }

    #[test]
    fn combination_examples() {
        let c = ctx("NEQ", 2);
        let class = StructuredClass::new(&c);
        let t = class.budget();
        let a = c.function().y_set(0b00, true);
        let r = combination_check(&class, 0b11, &a, t);
        assert!(r.applicable && r.holds && r.combined_corresponds);
        assert_eq!((r.yes_bits, r.no_bits), (Some(4), Some(2)));
        assert_eq!(r.bound, Some(4 + 2 + 2 * 2 + 2));
        assert_eq!(r.combined_bits, Some(combine_length(4, 2)));
        // y outside A: the no side carries the instance.
        let r = combination_check(&class, 0b00, &a, t);
        assert_eq!(r.yes_bits, Some(2));
        assert!(r.holds);
    }
}
