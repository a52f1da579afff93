//! Binary vectors and GF(2) linear algebra.
//!
//! Coordinates are 1-based on the public surface. Internally coordinate `i`
//! lives at bit `(i - 1) % 64` of word `(i - 1) / 64`, so every vector of
//! length at most 64 occupies a single inline machine word.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 1]>;

/// A binary word of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Words,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

fn tail_mask(len: usize) -> u64 {
    match len % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl BitVector {
    /// The all-zero vector `e`.
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: smallvec::smallvec![0; word_count(len)],
        }
    }

    /// The all-one vector `u`.
    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: smallvec::smallvec![u64::MAX; word_count(len)],
        };
        v.clear_tail();
        v
    }

    /// The alternating vector `(1,0,...,1,0)`.
    pub fn alternating(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in (1..=len).step_by(2) {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector of length `len <= 64` from a word whose bit `i - 1`
    /// holds coordinate `i`.
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= 64, "from_word needs len <= 64, got {len}");
        let mut v = Self {
            len,
            words: smallvec::smallvec![word],
        };
        if len == 0 {
            v.words.clear();
        }
        v.clear_tail();
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i + 1, true);
            }
        }
        v
    }

    /// Single-word form; `None` for lengths above 64.
    pub fn as_word(&self) -> Option<u64> {
        match self.len {
            0 => Some(0),
            1..=64 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Coordinate `i`, 1-based.
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len, "coordinate {i} out of range 1..={}", self.len);
        let k = i - 1;
        (self.words[k / 64] >> (k % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i >= 1 && i <= self.len, "coordinate {i} out of range 1..={}", self.len);
        let k = i - 1;
        let bit = 1u64 << (k % 64);
        if value {
            self.words[k / 64] |= bit;
        } else {
            self.words[k / 64] &= !bit;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |i| self.get(i))
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_all_ones(&self) -> bool {
        self.weight() == self.len
    }

    /// Hamming distance; fails on a length mismatch.
    pub fn distance(&self, other: &Self) -> Result<usize> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn complement(&self) -> Self {
        let mut v = self.clone();
        for w in v.words.iter_mut() {
            *w = !*w;
        }
        v.clear_tail();
        v
    }

    /// Coordinatewise sum over GF(2).
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let mut v = self.clone();
        v.add_assign(other);
        Ok(v)
    }

    /// In-place sum. Panics on a length mismatch.
    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Position of the first 1, 1-based.
    pub fn leading_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize + 1)
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = Self::zeros(self.len + other.len);
        for (i, b) in self.iter().chain(other.iter()).enumerate() {
            if b {
                v.set(i + 1, true);
            }
        }
        v
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    fn clear_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }
}

impl Ord for BitVector {
    /// Lexicographic order of the textual form, coordinate 1 first.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            match a.reverse_bits().cmp(&b.reverse_bits()) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty bitstring".into()));
        }
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i + 1, true),
                other => {
                    return Err(Error::Parse(format!(
                        "invalid character {other:?} in bitstring at position {}",
                        i + 1
                    )))
                }
            }
        }
        Ok(v)
    }
}

impl serde::Serialize for BitVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for BitVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rows of equal length.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn new(rows: Vec<BitVector>) -> Result<Self> {
        if let Some(first) = rows.first() {
            if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
                return Err(Error::LengthMismatch {
                    expected: first.len(),
                    found: bad.len(),
                });
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl FromIterator<BitVector> for BitMatrix {
    /// Panics if the rows are not all of one length.
    fn from_iter<I: IntoIterator<Item = BitVector>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect()).expect("ragged rows")
    }
}

/// Incremental echelon basis keyed by leading coordinate.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    basis: Vec<BitVector>,
}

impl Echelon {
    /// Reduces `v` against the basis; inserts the residue if nonzero.
    /// Returns whether the rank grew.
    pub(crate) fn insert(&mut self, v: &BitVector) -> bool {
        let mut r = v.clone();
        for b in &self.basis {
            let lead = b.leading_one().expect("basis rows are nonzero");
            if r.get(lead) {
                r.add_assign(b);
            }
        }
        if r.is_zero() {
            return false;
        }
        let lead = r.leading_one().unwrap();
        for b in self.basis.iter_mut() {
            if b.get(lead) {
                b.add_assign(&r);
            }
        }
        self.basis.push(r);
        true
    }

    pub(crate) fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Reduced basis ordered by leading coordinate.
    pub(crate) fn into_sorted(mut self) -> Vec<BitVector> {
        self.basis.sort_by_key(|b| b.leading_one());
        self.basis
    }
}

/// Row rank over GF(2).
pub fn rank_gf2(m: &BitMatrix) -> usize {
    rank_of(m.rows())
}

pub(crate) fn rank_of(rows: &[BitVector]) -> usize {
    let mut e = Echelon::default();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Reduced row-echelon basis of the row space.
pub fn row_space_basis(m: &BitMatrix) -> BitMatrix {
    BitMatrix {
        rows: basis_of(m.rows()),
    }
}

pub(crate) fn basis_of(rows: &[BitVector]) -> Vec<BitVector> {
    let mut e = Echelon::default();
    for r in rows {
        e.insert(r);
    }
    e.into_sorted()
}

pub fn weight(v: &BitVector) -> usize {
    v.weight()
}

pub fn distance(v: &BitVector, w: &BitVector) -> Result<usize> {
    v.distance(w)
}

pub fn complement(v: &BitVector) -> BitVector {
    v.complement()
}
