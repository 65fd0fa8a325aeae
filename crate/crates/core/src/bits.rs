//! Owned bitstrings used for guesses, programs and n-bit inputs.
//!
//! Index 0 is the leftmost character of the string form. Integers are
//! written most-significant bit first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Bits(Vec<bool>);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid bit character {found:?} at position {pos}")]
pub struct BitsParseError {
    pub pos: usize,
    pub found: char,
}

impl Bits {
    pub fn new() -> Self {
        Bits(Vec::new())
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    /// The `width` low-order bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        let mut out = Bits(Vec::with_capacity(width));
        out.push_uint(value, width);
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn push_uint(&mut self, value: u64, width: usize) {
        for k in (0..width).rev() {
            self.0.push((value >> k) & 1 == 1);
        }
    }

    pub fn extend_from(&mut self, other: &Bits) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    /// Big-endian value of the whole string. Panics above 64 bits.
    pub fn to_uint(&self) -> u64 {
        assert!(self.0.len() <= 64, "bitstring too long for u64");
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn slice(&self, start: usize, end: usize) -> Bits {
        Bits(self.0[start..end].to_vec())
    }

    /// Every bitstring of length exactly `len`, in increasing numeric order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Bits> {
        assert!(len < 64, "enumeration length too large");
        (0..(1u64 << len)).map(move |v| Bits::from_uint(v, len))
    }

    /// Every bitstring of length `0..=max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Bits> {
        (0..=max_len).flat_map(Bits::all_of_length)
    }

    /// "0b"-prefixed text form used in reports.
    pub fn to_prefixed(&self) -> String {
        format!("0b{self}")
    }

    pub fn parse_prefixed(s: &str) -> Result<Bits, BitsParseError> {
        s.strip_prefix("0b").unwrap_or(s).parse()
    }
}

impl Ord for Bits {
    /// Shorter strings first, then numeric order.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits(0b{self})")
    }
}

impl FromStr for Bits {
    type Err = BitsParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(pos, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(BitsParseError { pos, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bits)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_prefixed())
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Bits::parse_prefixed(&s).map_err(serde::de::Error::custom)
    }
}

/// Number of bits needed to write an index below `count`: ceil(log2 count),
/// and 0 when `count <= 1`.
pub fn index_width(count: usize) -> usize {
    if count <= 1 {
        0
    } else {
        (usize::BITS - (count - 1).leading_zeros()) as usize
    }
}

/// Number of binary digits of `value` (0 for 0).
pub fn bit_length(value: usize) -> usize {
    (usize::BITS - value.leading_zeros()) as usize
}
