//! A loop-free decision-clause language used as an independent, fully
//! enumerable program class for instance complexity.
//!
//! A program is a bitstring read as a sequence of clauses:
//!
//! ```text
//! kind (1) | operand | polarity (1) | out (2)
//! ```
//!
//! `kind = 0` tests a bit of `y`: the operand is `ceil(log2 n)` bits of an
//! index and the guard holds when `y_i == polarity`. `kind = 1` queries the
//! oracle: the operand is an n-bit row literal `x'` and the guard holds when
//! `f(x', y) == polarity`. Out codes: `00` and `11` give ⊥, `01` gives 0,
//! `10` gives 1. The first clause whose guard holds decides the output; no
//! match gives ⊥. Trailing bits too short for a clause are ignored but
//! still count toward the length. A bit index `>= n` never matches.

use serde::Serialize;

use crate::bits::{index_width, Bits};
use crate::boolfun::{BoolFunction, IndexSet, Oracle};
use crate::witness::{Mode, Output};

pub const MAX_VM_LENGTH: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guard {
    Bit(usize),
    Row(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Clause {
    pub guard: Guard,
    pub polarity: bool,
    pub out: Output,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VmProgram {
    pub bits: Bits,
    pub clauses: Vec<Clause>,
}

fn read_uint(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

impl VmProgram {
    /// Total on every bitstring.
    pub fn decode(bits: &Bits, n: usize) -> Self {
        let b = bits.as_slice();
        let mut clauses = Vec::new();
        let mut pos = 0;
        while pos < b.len() {
            let operand = if b[pos] { n } else { index_width(n) };
            let need = 1 + operand + 1 + 2;
            if pos + need > b.len() {
                break;
            }
            let value = read_uint(&b[pos + 1..pos + 1 + operand]);
            let guard = if b[pos] { Guard::Row(value) } else { Guard::Bit(value) };
            let polarity = b[pos + 1 + operand];
            let out = match (b[pos + 2 + operand], b[pos + 3 + operand]) {
                (false, true) => Output::Zero,
                (true, false) => Output::One,
                _ => Output::Bot,
            };
            clauses.push(Clause { guard, polarity, out });
            pos += need;
        }
        VmProgram {
            bits: bits.clone(),
            clauses,
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VmRun {
    pub output: Output,
    /// Clauses evaluated.
    pub steps: usize,
}

pub fn vm_execute(p: &VmProgram, y: usize, oracle: &Oracle<'_>) -> VmRun {
    let n = oracle.n();
    for (k, clause) in p.clauses.iter().enumerate() {
        let holds = match clause.guard {
            Guard::Bit(i) => i < n && (y >> (n - 1 - i) & 1 == 1) == clause.polarity,
            Guard::Row(x) => oracle.query_index(x, y) == clause.polarity,
        };
        if holds {
            return VmRun {
                output: clause.out,
                steps: k + 1,
            };
        }
    }
    VmRun {
        output: Output::Bot,
        steps: p.clauses.len(),
    }
}

/// Checks C2-C4 for a VM program; C1 holds for every VM program.
pub fn vm_corresponds(p: &VmProgram, y: usize, a: &IndexSet, mode: Mode, f: &BoolFunction) -> bool {
    let oracle = f.oracle();
    let outs: Vec<Output> = (0..f.side()).map(|v| vm_execute(p, v, &oracle).output).collect();
    let consistent = outs.iter().enumerate().all(|(v, &o)| match o {
        Output::One => a.contains(v),
        Output::Zero => !a.contains(v),
        Output::Bot => true,
    });
    let decided = match mode {
        Mode::Yes => !a.contains(y) || outs[y] == Output::One,
        Mode::No => a.contains(y) || outs[y] == Output::Zero,
        Mode::Two => outs[y] != Output::Bot,
    };
    outs.iter().all(|&o| mode.allows(o)) && consistent && decided
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VmIcResult {
    pub model: &'static str,
    /// `None` when nothing up to `max_len` corresponds.
    pub value_bits: Option<usize>,
    pub witness: Option<Bits>,
    pub max_len: usize,
}

/// Shortest VM program up to `max_len` bits corresponding to (y, A, mode);
/// the first in enumeration order wins ties.
pub fn vm_ic(y: usize, a: &IndexSet, mode: Mode, f: &BoolFunction, max_len: usize) -> VmIcResult {
    assert!(max_len <= MAX_VM_LENGTH, "VM enumeration capped at {MAX_VM_LENGTH} bits");
    let found = Bits::all_up_to(max_len).find(|bits| {
        let p = VmProgram::decode(bits, f.n());
        vm_corresponds(&p, y, a, mode, f)
    });
    VmIcResult {
        model: "vm",
        value_bits: found.as_ref().map(Bits::len),
        witness: found,
        max_len,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn empty_program_is_bot() {
        let f = BoolFunction::generate_named("NEQ", 2, None).unwrap();
        let o = f.oracle();
        let p = VmProgram::decode(&Bits::new(), 2);
        assert!((0..4).all(|y| vm_execute(&p, y, &o).output == Output::Bot));
    }

    #[test]
    fn row_clause_reads_y1() {
        let f = BoolFunction::generate_named("RANDOM", 2, Some(5)).unwrap();
        let o = f.oracle();
        for x in 0..4 {
            let p = VmProgram::decode(&bits(&format!("1{x:02b}110")), 2);
            assert_eq!(p.clauses.len(), 1);
            for y in 0..4 {
                let expected = if f.get(x, y) { Output::One } else { Output::Bot };
                assert_eq!(vm_execute(&p, y, &o).output, expected);
            }
        }
        assert_eq!(o.queries(), 16);
    }

    #[test]
    fn bit_clause() {
        let f = BoolFunction::generate_named("NEQ", 2, None).unwrap();
        let p = VmProgram::decode(&bits("00110"), 2);
        assert_eq!(p.clauses[0], Clause { guard: Guard::Bit(0), polarity: true, out: Output::One });
        assert_eq!(vm_execute(&p, 0b10, &f.oracle()).output, Output::One);
        assert_eq!(vm_execute(&p, 0b01, &f.oracle()).output, Output::Bot);
    }

    #[test]
    fn trailing_bits_are_ignored() {
        let p = VmProgram::decode(&bits("0110101"), 1);
        assert_eq!(p.clauses.len(), 1);
        assert_eq!(p.len(), 7);
        // Out-of-range bit index at n=3 never matches.
        let f = BoolFunction::generate_named("CONST1", 3, None).unwrap();
        let q = VmProgram::decode(&bits("011010"), 3);
        assert_eq!(q.clauses[0].guard, Guard::Bit(3));
        assert!((0..8).all(|y| vm_execute(&q, y, &f.oracle()).output == Output::Bot));
    }

    #[test]
    fn decoding_is_total_and_deterministic() {
        for n in 1..=2 {
            let f = BoolFunction::generate_named("RANDOM", n, Some(1)).unwrap();
            let o = f.oracle();
            for s in Bits::all_up_to(12) {
                let p = VmProgram::decode(&s, n);
                assert_eq!(p, VmProgram::decode(&s, n));
                for y in 0..f.side() {
                    let r = vm_execute(&p, y, &o);
                    assert!(r.steps <= p.clauses.len());
                    assert_eq!(r, vm_execute(&p, y, &o));
                }
            }
        }
    }

    #[test]
    fn vm_ic_examples() {
        let f = BoolFunction::generate_named("NEQ", 1, None).unwrap();
        let a = f.y_set(0, true);
        assert_eq!(vm_ic(0, &a, Mode::Yes, &f, 10).value_bits, Some(0));
        let r = vm_ic(1, &a, Mode::Yes, &f, 10);
        assert_eq!(r.value_bits, Some(4));
        assert_eq!(r.witness.unwrap().to_string(), "0110");
        assert_eq!(vm_ic(1, &a, Mode::Two, &f, 10).value_bits, Some(4));
        assert_eq!(vm_ic(1, &a, Mode::Yes, &f, 3).value_bits, None);
    }

    #[test]
    fn vm_ic_monotone_in_cap() {
        let f = BoolFunction::generate_named("RANDOM", 1, Some(3)).unwrap();
        for x in 0..2 {
            let a = f.y_set(x, true);
            for y in 0..2 {
                for mode in [Mode::Yes, Mode::No, Mode::Two] {
                    let mut last: Option<usize> = None;
                    for cap in 0..=10 {
                        let v = vm_ic(y, &a, mode, &f, cap).value_bits;
                        if let (Some(prev), Some(cur)) = (last, v) {
                            assert!(cur <= prev);
                        }
                        if last.is_some() {
                            assert!(v.is_some());
                        }
                        last = v.or(last);
                    }
                }
            }
        }
    }
}
