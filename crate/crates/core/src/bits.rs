//! Fixed-length bit vectors packed into machine words.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

type Word = u64;
const WORD_BITS: usize = Word::BITS as usize;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A length-`n` vector over GF(2).
///
/// Bits past `len` in the last word are always zero, so derived equality and
/// hashing compare only the logical contents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<Word>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![Word::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    /// Vector with exactly the listed positions set. Repeated indices toggle.
    ///
    /// Panics if an index is out of range.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.toggle(i);
        }
        v
    }

    /// The low `len` bits of `mask`, bit `i` of the mask becoming position `i`.
    /// `len` is at most 64.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD_BITS, "mask vectors hold at most {WORD_BITS} bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask;
            v.clear_tail();
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_all_ones(&self) -> bool {
        *self == Self::ones(self.len)
    }

    /// Parity of the number of positions set in both vectors.
    pub fn dot(&self, other: &Self) -> bool {
        self.assert_same_len(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn and(&self, other: &Self) -> Self {
        self.assert_same_len(other);
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn not(&self) -> Self {
        let mut v = Self {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.clear_tail();
        v
    }

    /// Index of the lowest set position at or after `from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from / WORD_BITS;
        let mut word = self.words[wi] & (Word::MAX << (from % WORD_BITS));
        loop {
            if word != 0 {
                return Some(wi * WORD_BITS + word.trailing_zeros() as usize);
            }
            wi += 1;
            if wi == self.words.len() {
                return None;
            }
            word = self.words[wi];
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.next_one(0)
    }

    /// Ascending iterator over set positions.
    pub fn iter_ones(&self) -> Ones<'_> {
        Ones { bits: self, next: 0 }
    }

    /// The vector as `0`/`1` characters, position 0 leftmost.
    pub fn to_bitstring(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    /// Order of the vectors read as binary integers with position 0 the least
    /// significant bit: the highest differing position decides.
    pub fn cmp_as_integer(&self, other: &Self) -> Ordering {
        self.assert_same_len(other);
        self.words.iter().rev().cmp(other.words.iter().rev())
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1 << rem) - 1;
            }
        }
    }

    fn assert_same_len(&self, other: &Self) {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        self.assert_same_len(rhs);
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_bitstring())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl FromStr for BitVector {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut v = Self::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(ParseError::BadBit {
                        position: i,
                        found: other,
                    })
                }
            }
        }
        Ok(v)
    }
}

/// Serialized as its 0/1 string.
impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bitstring())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub struct Ones<'a> {
    bits: &'a BitVector,
    next: usize,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let i = self.bits.next_one(self.next)?;
        self.next = i + 1;
        Some(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_clears_tail_bits() {
        let v = BitVector::ones(70);
        assert_eq!(v.count_ones(), 70);
        assert_eq!(v.not(), BitVector::zeros(70));
    }

    #[test]
    fn next_one_crosses_words() {
        let v = BitVector::from_indices(200, [3, 64, 130, 199]);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![3, 64, 130, 199]);
        assert_eq!(v.next_one(4), Some(64));
        assert_eq!(v.next_one(200), None);
    }

    #[test]
    fn bitstring_round_trip() {
        let v: BitVector = "1011".parse().unwrap();
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(v.to_string(), "1011");
        assert!("10x1".parse::<BitVector>().is_err());
        assert!("".parse::<BitVector>().unwrap().is_empty());
    }

    #[test]
    fn integer_order_puts_low_positions_last() {
        let a: BitVector = "1000".parse().unwrap();
        let b: BitVector = "0001".parse().unwrap();
        assert_eq!(a.cmp_as_integer(&b), Ordering::Less);
        let c: BitVector = "0110".parse().unwrap();
        let d: BitVector = "1001".parse().unwrap();
        assert_eq!(c.cmp_as_integer(&d), Ordering::Less);
        assert_eq!(c.cmp_as_integer(&c), Ordering::Equal);
        let wide_a = BitVector::from_indices(100, [70]);
        let wide_b = BitVector::from_indices(100, [3, 99]);
        assert_eq!(wide_a.cmp_as_integer(&wide_b), Ordering::Less);
    }
}
