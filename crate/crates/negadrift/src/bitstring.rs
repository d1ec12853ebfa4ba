//! Packed bit strings and ordered populations.
//!
//! Search points live in `{0,1}^n`. Bits are packed into `u64` words so the
//! Hamming distance in the simulation inner loop is a handful of XOR +
//! popcount instructions.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// A fixed-length binary search point.
///
/// The length is fixed at construction; all unused high bits of the last
/// word are kept at zero so popcount-based operations stay exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    n: usize,
}

impl BitString {
    /// The all-zero string of length `n`.
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::argument("bit string length must be positive"));
        }
        Ok(BitString {
            words: vec![0; n.div_ceil(WORD_BITS)],
            n,
        })
    }

    /// The all-one string of length `n`.
    pub fn ones(n: usize) -> Result<Self> {
        let mut s = Self::zeros(n)?;
        for w in &mut s.words {
            *w = u64::MAX;
        }
        s.mask_tail();
        Ok(s)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut s = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set(i, true);
            }
        }
        Ok(s)
    }

    /// Uniform random string of length `n`.
    pub fn random(n: usize, rng: &mut impl Rng) -> Result<Self> {
        let mut s = Self::zeros(n)?;
        for w in &mut s.words {
            *w = rng.next_u64();
        }
        s.mask_tail();
        Ok(s)
    }

    fn mask_tail(&mut self) {
        let rem = self.n % WORD_BITS;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << rem) - 1;
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.n,
            "bit index {i} out of range for length {}",
            self.n
        );
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.n,
            "bit index {i} out of range for length {}",
            self.n
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.n,
            "bit index {i} out of range for length {}",
            self.n
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Bitwise complement.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.n).map(move |i| self.get(i))
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::argument(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        BitString::from_bits(&bits)
    }
}

/// Number of positions at which `x` and `y` differ.
pub fn hamming(x: &BitString, y: &BitString) -> Result<usize> {
    if x.n != y.n {
        return Err(Error::argument(format!(
            "hamming distance needs equal lengths, got {} and {}",
            x.n, y.n
        )));
    }
    Ok(x.words
        .iter()
        .zip(&y.words)
        .map(|(a, b)| (a ^ b).count_ones() as usize)
        .sum())
}

/// Number of one-bits in `x`.
pub fn onemax(x: &BitString) -> usize {
    x.count_ones()
}

/// An ordered tuple of `lambda` search points, all of the same length.
///
/// Order is significant: selection outcomes are index tuples into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Population {
    members: Vec<BitString>,
}

impl Population {
    pub fn new(members: Vec<BitString>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::argument("population must have at least one member"))?;
        let n = first.len();
        if members.iter().any(|m| m.len() != n) {
            return Err(Error::argument("population members must share one length"));
        }
        Ok(Population { members })
    }

    pub fn lambda(&self) -> usize {
        self.members.len()
    }

    pub fn n(&self) -> usize {
        self.members[0].len()
    }

    pub fn member(&self, i: usize) -> &BitString {
        &self.members[i]
    }

    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BitString> {
        self.members.iter()
    }
}
