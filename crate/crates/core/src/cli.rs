//! Command-line front end. Exit codes: 0 pass, 1 gap or condition failure,
//! 2 usage or input error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::bits::{Bits, BitsParseError};
use crate::boolfun::{BoolFunction, FunctionError, LoadError};
use crate::corpus::{self, SweepOptions, SweepRow};
use crate::covers::{CoverError, CoverPair, CoverReport, DEFAULT_COVER_LIMIT};
use crate::icomplex::{combination_check, verify_theorem, CombinationReport, StructuredClass, DEFAULT_TOLERANCE};
use crate::protocols::{self, individual_bound_check, IndividualBound, IndividualSetup, ProtocolKind, Transcript};
use crate::witness::{Context, Mode};

#[derive(Debug, Parser)]
#[command(name = "ccic", version, about = "Rectangle covers, guess-and-verify protocols and instance complexity")]
pub struct Cli {
    /// Step budget T; defaults to the calibrated budget of each function.
    #[arg(long, global = true, env = "CCIC_BUDGET")]
    pub budget: Option<u64>,
    /// Longest guess tried in exhaustive protocol sweeps.
    #[arg(long, global = true)]
    pub wmax: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FunctionSpec {
    /// NEQ, EQ, CONST0, CONST1, DISJ or RANDOM.
    #[arg(long = "fn", conflicts_with = "file")]
    pub name: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// A .bfn truth table.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Yes,
    No,
    Two,
    Combination,
    Individual,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical minimum covers.
    Covers {
        #[command(flatten)]
        spec: FunctionSpec,
        /// Color to cover; both when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        z: Option<u8>,
        /// Largest n to solve; above 4 the search grows very quickly.
        #[arg(long, default_value_t = DEFAULT_COVER_LIMIT)]
        cover_limit: usize,
    },
    /// Gap report for one function.
    Verify {
        #[command(flatten)]
        spec: FunctionSpec,
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: u32,
    },
    /// One protocol run.
    Run {
        #[command(flatten)]
        spec: FunctionSpec,
        #[arg(long, value_enum)]
        protocol: ProtocolKind,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// `auto` or a bitstring such as 0b0110.
        #[arg(long, default_value = "auto")]
        guess: String,
    },
    /// All checks over the corpus.
    Sweep {
        /// Only this input length.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: u32,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("bad guess: {0}")]
    Guess(#[from] BitsParseError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// A rendered report and whether every check in it passed.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

fn load(spec: &FunctionSpec) -> Result<BoolFunction, CliError> {
    match (&spec.file, &spec.name) {
        (Some(path), _) => Ok(BoolFunction::from_file(path)?),
        (None, Some(name)) => {
            let n = spec.n.ok_or_else(|| CliError::Usage("--n is required with --fn".into()))?;
            Ok(BoolFunction::generate_named(name, n, spec.seed)?)
        }
        (None, None) => Err(CliError::Usage("give --fn NAME --n N or --file PATH".into())),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_of<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct CoverBoth {
    function: String,
    n: usize,
    zero: CoverReport,
    one: CoverReport,
}

#[derive(Serialize)]
struct CoverRow {
    function: String,
    n: usize,
    color: u8,
    m: usize,
    index: Option<usize>,
    rows: Option<String>,
    cols: Option<String>,
}

fn cover_rows(f: &BoolFunction, r: &CoverReport) -> Vec<CoverRow> {
    if r.rectangles.is_empty() {
        return vec![CoverRow {
            function: f.label(),
            n: f.n(),
            color: r.color,
            m: 0,
            index: None,
            rows: None,
            cols: None,
        }];
    }
    r.rectangles
        .iter()
        .enumerate()
        .map(|(i, rect)| CoverRow {
            function: f.label(),
            n: f.n(),
            color: r.color,
            m: r.m,
            index: Some(i),
            rows: Some(rect.rows.clone()),
            cols: Some(rect.cols.clone()),
        })
        .collect()
}

#[derive(Serialize)]
struct CombinationSummary {
    function: String,
    n: usize,
    budget: u64,
    instances: Vec<CombinationReport>,
    violations: usize,
    pass: bool,
}

#[derive(Serialize)]
struct IndividualSummary {
    function: String,
    n: usize,
    budget: u64,
    protocols: Vec<ProtocolKind>,
    upper_bits: Option<f64>,
    pairs: Vec<IndividualBound>,
    violations: usize,
    pass: bool,
}

#[derive(Serialize)]
struct RunRow<'a> {
    protocol: ProtocolKind,
    n: usize,
    x: &'a Bits,
    y: &'a Bits,
    guess: &'a Bits,
    conversation_bits: usize,
    verdict: String,
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Covers { spec, z, cover_limit } => {
            let f = load(spec)?;
            if *cover_limit > DEFAULT_COVER_LIMIT {
                log::warn!("cover limit {cover_limit} above {DEFAULT_COVER_LIMIT}: exact search may take very long");
            }
            let pair = CoverPair::compute(&f, *cover_limit)?;
            let reports: Vec<CoverReport> = match z {
                Some(z) => vec![pair.side(*z == 1).report()],
                None => vec![pair.zero.report(), pair.one.report()],
            };
            let text = match cli.format {
                Format::Csv => csv_of(&reports.iter().flat_map(|r| cover_rows(&f, r)).collect::<Vec<_>>())?,
                Format::Json if reports.len() == 1 => json(&reports[0])?,
                Format::Json => json(&CoverBoth {
                    function: f.label(),
                    n: f.n(),
                    zero: reports[0].clone(),
                    one: reports[1].clone(),
                })?,
            };
            Ok(Outcome { text, pass: true })
        }
        Command::Verify { spec, theorem, tol } => {
            let f = load(spec)?;
            let ctx = Context::new(f)?;
            if ctx.covers().is_none() {
                return Err(CoverError::TooLarge {
                    n: ctx.n(),
                    limit: DEFAULT_COVER_LIMIT,
                }
                .into());
            }
            let budget = cli.budget.unwrap_or_else(|| ctx.compute_budget());
            let wmax = cli.wmax.unwrap_or_else(|| ctx.default_wmax());
            verify(&ctx, *theorem, budget, wmax, *tol, cli.format)
        }
        Command::Run {
            spec,
            protocol,
            x,
            y,
            guess,
        } => {
            let f = load(spec)?;
            let (xi, yi) = (f.parse_index(x)?, f.parse_index(y)?);
            let ctx = Context::new(f)?;
            let budget = cli.budget.unwrap_or_else(|| ctx.compute_budget());
            let w = if guess == "auto" {
                protocols::auto_guess(*protocol, &ctx, xi, yi, budget).unwrap_or_else(|| {
                    log::warn!("no witness for this pair; running with the empty guess");
                    Bits::new()
                })
            } else {
                Bits::parse_prefixed(guess)?
            };
            let t: Transcript = protocols::run(*protocol, &ctx, xi, yi, &w, budget);
            let text = match cli.format {
                Format::Json => json(&t)?,
                Format::Csv => csv_of(&[RunRow {
                    protocol: t.protocol,
                    n: t.n,
                    x: &t.x,
                    y: &t.y,
                    guess: &t.guess,
                    conversation_bits: t.conversation_bits,
                    verdict: t.verdict.to_string(),
                }])?,
            };
            Ok(Outcome { text, pass: true })
        }
        Command::Sweep { n, tol } => {
            let functions = corpus::corpus(*n);
            if functions.is_empty() {
                return Err(CliError::Usage("the corpus only has n = 1, 2, 3".into()));
            }
            let rows: Vec<SweepRow> = corpus::sweep(
                &functions,
                SweepOptions {
                    budget: cli.budget,
                    wmax: cli.wmax,
                    tolerance: *tol,
                },
            )?;
            let pass = rows.iter().all(|r| r.pass);
            let text = match cli.format {
                Format::Json => json(&rows)?,
                Format::Csv => csv_of(&rows)?,
            };
            Ok(Outcome { text, pass })
        }
    }
}

fn verify(ctx: &Context, theorem: Theorem, budget: u64, wmax: usize, tol: u32, format: Format) -> Result<Outcome, CliError> {
    let f = ctx.function();
    let class = StructuredClass::new(ctx);
    let row = |r: SweepRow| -> Result<Outcome, CliError> {
        Ok(Outcome {
            pass: r.pass,
            text: csv_of(&[r])?,
        })
    };
    match theorem {
        Theorem::Yes | Theorem::No | Theorem::Two => {
            let mode = match theorem {
                Theorem::Yes => Mode::Yes,
                Theorem::No => Mode::No,
                _ => Mode::Two,
            };
            if format == Format::Csv {
                return row(corpus::theorem_row(&class, mode, budget, tol));
            }
            let r = verify_theorem(&class, mode, budget, tol);
            if r.empty_side {
                eprintln!("empty side: {} has no qualifying pairs for mode {mode}", f.label());
            }
            Ok(Outcome {
                text: json(&r)?,
                pass: r.pass,
            })
        }
        Theorem::Combination => {
            if format == Format::Csv {
                return row(corpus::combination_row(&class, budget));
            }
            let mut instances = Vec::new();
            for x in 0..f.side() {
                let a = f.y_set(x, true);
                instances.extend((0..f.side()).map(|y| combination_check(&class, y, &a, budget)));
            }
            let violations = instances.iter().filter(|r| !r.holds).count();
            Ok(Outcome {
                text: json(&CombinationSummary {
                    function: f.label(),
                    n: f.n(),
                    budget,
                    instances,
                    violations,
                    pass: violations == 0,
                })?,
                pass: violations == 0,
            })
        }
        Theorem::Individual => {
            if format == Format::Csv {
                return row(corpus::individual_row(ctx, budget, wmax, tol));
            }
            let setup = IndividualSetup::new(ctx, budget, wmax);
            let mut pairs = Vec::new();
            for x in 0..f.side() {
                pairs.extend((0..f.side()).map(|y| individual_bound_check(&setup, x, y, tol)));
            }
            let violations = pairs.iter().filter(|p| !p.holds()).count();
            Ok(Outcome {
                text: json(&IndividualSummary {
                    function: f.label(),
                    n: f.n(),
                    budget,
                    protocols: setup.protocols().to_vec(),
                    upper_bits: setup.upper_bits(),
                    pairs,
                    violations,
                    pass: violations == 0,
                })?,
                pass: violations == 0,
            })
        }
    }
}

/// Parses, executes and writes the report; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = execute(&cli).and_then(|o| {
        match &cli.out {
            Some(path) => std::fs::write(path, &o.text)?,
            None => std::io::stdout().write_all(o.text.as_bytes())?,
        }
        Ok(o)
    });
    match outcome {
        Ok(o) => o.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
