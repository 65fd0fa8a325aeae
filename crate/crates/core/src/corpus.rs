//! The fixed test corpus and the per-function checks a sweep runs on it.

use rayon::prelude::*;
use serde::Serialize;

use crate::boolfun::BoolFunction;
use crate::covers::CoverError;
use crate::icomplex::{combination_check, verify_theorem, StructuredClass};
use crate::protocols::{individual_bound_check, verify_conditions, GuessCache, IndividualSetup, ProtocolKind};
use crate::witness::{Context, Mode};

/// Seeds of the sampled n=2 functions.
pub const RANDOM_SEEDS: std::ops::Range<u64> = 0..100;

/// All 16 functions at n=1; NEQ, EQ, DISJ, CONST0, CONST1 and 100 seeded
/// RANDOM at n=2; NEQ and EQ at n=3. Pass `n` to keep one size.
pub fn corpus(n: Option<usize>) -> Vec<BoolFunction> {
    let mut out = Vec::new();
    if n.is_none_or(|n| n == 1) {
        out.extend((0..16).map(BoolFunction::one_bit_table));
    }
    if n.is_none_or(|n| n == 2) {
        for name in ["NEQ", "EQ", "DISJ", "CONST0", "CONST1"] {
            out.push(BoolFunction::generate_named(name, 2, None).expect("named generator"));
        }
        out.extend(RANDOM_SEEDS.map(|s| BoolFunction::generate_named("RANDOM", 2, Some(s)).expect("seeded generator")));
    }
    if n.is_none_or(|n| n == 3) {
        for name in ["NEQ", "EQ"] {
            out.push(BoolFunction::generate_named(name, 3, None).expect("named generator"));
        }
    }
    out
}

/// One CSV row. Column order is fixed:
/// `function,n,check,lhs_bits,rhs_bits,gap,min_gap,max_gap,instances,violations,budget,pass`.
///
/// `gap` is rhs - ceil(lhs) for the theorem checks; `min_gap`/`max_gap`
/// summarise per-instance gaps (combination: ic - bound; individual:
/// restricted - ic_yes; conditions: unused).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub function: String,
    pub n: usize,
    pub check: String,
    pub lhs_bits: Option<f64>,
    pub rhs_bits: Option<f64>,
    pub gap: Option<i64>,
    pub min_gap: Option<i64>,
    pub max_gap: Option<i64>,
    pub instances: usize,
    pub violations: usize,
    pub budget: u64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub budget: Option<u64>,
    pub wmax: Option<usize>,
    pub tolerance: u32,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            budget: None,
            wmax: None,
            tolerance: crate::icomplex::DEFAULT_TOLERANCE,
        }
    }
}

fn blank(f: &BoolFunction, check: &str, budget: u64) -> SweepRow {
    SweepRow {
        function: f.label(),
        n: f.n(),
        check: check.to_string(),
        lhs_bits: None,
        rhs_bits: None,
        gap: None,
        min_gap: None,
        max_gap: None,
        instances: 0,
        violations: 0,
        budget,
        pass: true,
    }
}

fn spread(row: &mut SweepRow, gaps: impl IntoIterator<Item = i64>) {
    for g in gaps {
        row.min_gap = Some(row.min_gap.map_or(g, |m| m.min(g)));
        row.max_gap = Some(row.max_gap.map_or(g, |m| m.max(g)));
    }
}

pub fn theorem_row(class: &StructuredClass<'_>, mode: Mode, budget: u64, tolerance: u32) -> SweepRow {
    let r = verify_theorem(class, mode, budget, tolerance);
    let mut row = blank(class.context().function(), &format!("theorem_{mode}"), budget);
    row.lhs_bits = r.lhs_bits;
    row.rhs_bits = r.rhs_bits.map(|v| v as f64);
    row.gap = r.gap;
    spread(&mut row, r.gap);
    row.instances = 1;
    row.violations = usize::from(!r.pass);
    row.pass = r.pass;
    row
}

/// Every (y, A = Y1(x)) instance.
pub fn combination_row(class: &StructuredClass<'_>, budget: u64) -> SweepRow {
    let f = class.context().function();
    let mut row = blank(f, "combination", budget);
    for x in 0..f.side() {
        let a = f.y_set(x, true);
        for y in 0..f.side() {
            let r = combination_check(class, y, &a, budget);
            if !r.applicable {
                continue;
            }
            row.instances += 1;
            row.violations += usize::from(!r.holds);
            if let (Some(t), Some(b)) = (r.two_bits, r.bound) {
                spread(&mut row, [t as i64 - b as i64]);
            }
        }
    }
    row.pass = row.violations == 0;
    row
}

pub fn individual_row(ctx: &Context, budget: u64, wmax: usize, tolerance: u32) -> SweepRow {
    let f = ctx.function();
    let setup = IndividualSetup::new(ctx, budget, wmax);
    let mut row = blank(f, "individual", budget);
    row.rhs_bits = setup.upper_bits();
    for x in 0..f.side() {
        for y in 0..f.side() {
            let r = individual_bound_check(&setup, x, y, tolerance);
            if !r.applicable {
                continue;
            }
            row.instances += 1;
            row.violations += usize::from(!r.holds());
            spread(&mut row, r.gap);
        }
    }
    row.pass = row.violations == 0;
    row
}

pub fn conditions_row(kind: ProtocolKind, ctx: &Context, cache: &GuessCache) -> SweepRow {
    let r = verify_conditions(kind, ctx, cache);
    let mut row = blank(ctx.function(), &format!("conditions_{kind}"), cache.budget);
    row.instances = ctx.side() * ctx.side();
    row.violations = r.completeness_violations.len()
        + r.soundness_violations.len()
        + r.agreement_violations.len()
        + r.canonical_rejected.len();
    row.pass = r.pass;
    row
}

/// All checks for one function, in a fixed order.
pub fn function_rows(f: &BoolFunction, opts: SweepOptions) -> Result<Vec<SweepRow>, CoverError> {
    let ctx = Context::new(f.clone())?;
    let budget = opts.budget.unwrap_or_else(|| ctx.compute_budget());
    let wmax = opts.wmax.unwrap_or_else(|| ctx.default_wmax());
    let class = StructuredClass::new(&ctx);
    let cache = GuessCache::new(&ctx, budget, wmax);
    let mut rows = vec![
        theorem_row(&class, Mode::Yes, budget, opts.tolerance),
        theorem_row(&class, Mode::Two, budget, opts.tolerance),
        combination_row(&class, budget),
        individual_row(&ctx, budget, wmax, opts.tolerance),
    ];
    for kind in [ProtocolKind::Fig1, ProtocolKind::Fig3, ProtocolKind::Fig4] {
        rows.push(conditions_row(kind, &ctx, &cache));
    }
    Ok(rows)
}

pub fn sweep(functions: &[BoolFunction], opts: SweepOptions) -> Result<Vec<SweepRow>, CoverError> {
    let per: Vec<Result<Vec<SweepRow>, CoverError>> = functions.par_iter().map(|f| function_rows(f, opts)).collect();
    let mut rows = Vec::new();
    for r in per {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[SweepRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
