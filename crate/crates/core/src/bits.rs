//! Fixed-length bit strings.
//!
//! A [`BitWord`] of length `n` stores bit `i` as bit `i % 64` of limb `i / 64`.
//! When a word is read as an element of GF(2^n), bit `i` is the coefficient of
//! `z^i`, so the limb layout doubles as the field representation.
//!
//! Two textual forms exist. The binary form (`Display`, [`BitWord::parse_binary`])
//! lists bit 0 first. The hex form reads the word as the integer `sum b_i 2^i`
//! and prints it most-significant nibble first, zero padded to `ceil(n / 4)`
//! digits.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BitWord {
    len: usize,
    limbs: Vec<u64>,
}

pub(crate) fn limbs_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        BitWord {
            len,
            limbs: vec![0; limbs_for(len)],
        }
    }

    /// Builds a word from its limbs, clearing anything above `len`.
    pub fn from_limbs(mut limbs: Vec<u64>, len: usize) -> Self {
        limbs.resize(limbs_for(len), 0);
        let mut w = BitWord { len, limbs };
        w.mask_top();
        w
    }

    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 takes at most 64 bits");
        Self::from_limbs(vec![value], len)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut w = BitWord::zeros(0);
        for b in bits {
            if w.len.is_multiple_of(64) {
                w.limbs.push(0);
            }
            w.len += 1;
            w.set(w.len - 1, b);
        }
        w
    }

    /// Parses a string of `0`/`1` characters, bit 0 first.
    pub fn parse_binary(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid binary digit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let limbs = (0..limbs_for(len)).map(|_| rng.random::<u64>()).collect();
        Self::from_limbs(limbs, len)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.limbs[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % 64);
        if bit {
            self.limbs[i / 64] |= mask;
        } else {
            self.limbs[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.limbs[i / 64] ^= 1u64 << (i % 64);
    }

    /// The word as an integer; only for words of at most 64 bits.
    pub fn as_u64(&self) -> u64 {
        assert!(self.len <= 64, "as_u64 on a {}-bit word", self.len);
        self.limbs.first().copied().unwrap_or(0)
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn xor(&self, other: &BitWord) -> Result<BitWord> {
        self.check_len(other.len)?;
        let limbs = self
            .limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitWord {
            len: self.len,
            limbs,
        })
    }

    /// The `len` lowest-order bits.
    pub fn truncated(&self, len: usize) -> BitWord {
        assert!(
            len <= self.len,
            "cannot truncate {} bits to {len}",
            self.len
        );
        Self::from_limbs(self.limbs[..limbs_for(len)].to_vec(), len)
    }

    pub fn check_len(&self, expected: usize) -> Result<()> {
        if self.len == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected,
                found: self.len,
            })
        }
    }

    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (self.limbs[d / 16] >> ((d % 16) * 4)) & 0xf;
                char::from_digit(nibble as u32, 16).unwrap()
            })
            .collect()
    }

    /// Inverse of [`BitWord::to_hex`]; the digit count must be exactly
    /// `ceil(len / 4)` and no bit at or above `len` may be set.
    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let digits = len.div_ceil(4);
        if s.len() != digits {
            return Err(Error::Parse(format!(
                "expected {digits} hex digits for a {len}-bit word, found {}",
                s.len()
            )));
        }
        let mut limbs = vec![0u64; limbs_for(len)];
        for (pos, c) in s.chars().rev().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))?;
            limbs[pos / 16] |= (v as u64) << ((pos % 16) * 4);
        }
        let w = Self::from_limbs(limbs.clone(), len);
        if w.limbs != limbs {
            return Err(Error::Parse(format!("hex value exceeds {len} bits")));
        }
        Ok(w)
    }

    fn mask_top(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 64 {
            write!(f, "BitWord({self})")
        } else {
            write!(
                f,
                "BitWord(len={}, hex={}..)",
                self.len,
                &self.to_hex()[..16]
            )
        }
    }
}
