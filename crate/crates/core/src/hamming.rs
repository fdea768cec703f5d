//! Packed binary words and the Hamming metric.
//!
//! Positions are 1-based `t = 1..=n` in the serialized form and 0-based in
//! the API. A word serializes as `n=<len>:0x<hex>` where the hex digits read
//! big-endian: the most significant bit is position t = 1.

use rand::Rng;
use thiserror::Error;

/// Largest length for which exhaustive enumeration is offered. Oracles refuse
/// larger inputs instead of silently truncating.
pub const ENUMERATION_MAX_N: u32 = 24;

/// Largest supported word length.
pub const MAX_N: u32 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HammingError {
    #[error("word length must lie in 1..={MAX_N}, got {0}")]
    LengthRange(u32),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(u32, u32),
    #[error("exhaustive enumeration supports n <= {ENUMERATION_MAX_N}, got {0}")]
    EnumerationTooLarge(u32),
    #[error("malformed word literal: {0}")]
    Format(String),
}

/// A fixed-length packed binary word. Bits beyond the length are kept zero,
/// so derived equality and hashing see exactly the first n bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    n: u32,
    blocks: Box<[u64]>,
}

impl Word {
    pub fn zero(n: u32) -> Result<Self, HammingError> {
        if n == 0 || n > MAX_N {
            return Err(HammingError::LengthRange(n));
        }
        let nblocks = (n as usize).div_ceil(64);
        Ok(Self { n, blocks: vec![0u64; nblocks].into_boxed_slice() })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, HammingError> {
        let mut w = Self::zero(bits.len() as u32)?;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                w.set(i as u32, true);
            }
        }
        Ok(w)
    }

    /// Word of length n <= 64 holding `value`, position t = 1 at the 2^{n-1} place.
    pub fn from_value(value: u64, n: u32) -> Result<Self, HammingError> {
        if n == 0 || n > 64 {
            return Err(HammingError::LengthRange(n));
        }
        if n < 64 && value >> n != 0 {
            return Err(HammingError::Format(format!("value {value:#x} needs more than {n} bits")));
        }
        let mut w = Self::zero(n)?;
        for t in 1..=n {
            if value >> (n - t) & 1 == 1 {
                w.set(t - 1, true);
            }
        }
        Ok(w)
    }

    /// Inverse of [`Word::from_value`]; only for n <= 64.
    pub fn to_value(&self) -> u64 {
        assert!(self.n <= 64, "to_value requires n <= 64");
        let mut v = 0u64;
        for t in 1..=self.n {
            if self.get(t - 1) {
                v |= 1 << (self.n - t);
            }
        }
        v
    }

    pub fn len(&self) -> u32 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: u32) -> bool {
        assert!(i < self.n, "bit index out of range");
        self.blocks[i as usize / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn set(&mut self, i: u32, bit: bool) {
        assert!(i < self.n, "bit index out of range");
        let mask = 1u64 << (i % 64);
        if bit {
            self.blocks[i as usize / 64] |= mask;
        } else {
            self.blocks[i as usize / 64] &= !mask;
        }
    }

    pub(crate) fn flip(&mut self, i: u32) {
        assert!(i < self.n, "bit index out of range");
        self.blocks[i as usize / 64] ^= 1u64 << (i % 64);
    }

    /// Number of ones.
    pub fn weight(&self) -> u64 {
        self.blocks.iter().map(|b| b.count_ones() as u64).sum()
    }

    /// Hamming distance. Panics on length mismatch; fallible callers should
    /// check lengths at their boundary.
    pub fn distance(&self, other: &Word) -> u64 {
        assert_eq!(self.n, other.n, "Hamming distance needs equal lengths");
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum()
    }

    /// i.i.d. Bernoulli(bias) bits from the supplied generator.
    pub fn sample_bernoulli(n: u32, bias: f64, rng: &mut impl Rng) -> Result<Self, HammingError> {
        let mut w = Self::zero(n)?;
        if bias <= 0.0 {
            return Ok(w);
        }
        for i in 0..n {
            if rng.random_bool(bias.min(1.0)) {
                w.set(i, true);
            }
        }
        Ok(w)
    }

    /// `n=<len>:0x<hex>` with exactly ceil(n/4) hex digits, big-endian.
    pub fn to_hex(&self) -> String {
        let digits = (self.n as usize).div_ceil(4);
        let mut chars = vec![b'0'; digits];
        for nib_idx in 0..digits {
            let mut nib = 0u8;
            for j in 0..4u32 {
                let vbit = nib_idx as u32 * 4 + j;
                if vbit >= self.n {
                    continue;
                }
                let t = self.n - vbit; // 1-based position
                if self.get(t - 1) {
                    nib |= 1 << j;
                }
            }
            chars[digits - 1 - nib_idx] = b"0123456789abcdef"[nib as usize];
        }
        format!("n={}:0x{}", self.n, String::from_utf8(chars).expect("hex is ascii"))
    }

    pub fn from_hex(s: &str) -> Result<Self, HammingError> {
        let rest = s
            .strip_prefix("n=")
            .ok_or_else(|| HammingError::Format(format!("missing n= prefix in {s:?}")))?;
        let (len_str, hex) = rest
            .split_once(":0x")
            .ok_or_else(|| HammingError::Format(format!("missing :0x separator in {s:?}")))?;
        let n: u32 = len_str
            .parse()
            .map_err(|_| HammingError::Format(format!("bad length in {s:?}")))?;
        if n == 0 || n > MAX_N {
            return Err(HammingError::LengthRange(n));
        }
        let digits = (n as usize).div_ceil(4);
        if hex.len() != digits {
            return Err(HammingError::Format(format!(
                "expected {digits} hex digits for n={n}, got {} in {s:?}",
                hex.len()
            )));
        }
        let mut w = Self::zero(n)?;
        for (pos, ch) in hex.bytes().enumerate() {
            let nib = match ch {
                b'0'..=b'9' => ch - b'0',
                b'a'..=b'f' => ch - b'a' + 10,
                b'A'..=b'F' => ch - b'A' + 10,
                _ => return Err(HammingError::Format(format!("bad hex digit in {s:?}"))),
            };
            let nib_idx = (digits - 1 - pos) as u32;
            for j in 0..4u32 {
                if nib >> j & 1 == 0 {
                    continue;
                }
                let vbit = nib_idx * 4 + j;
                if vbit >= n {
                    return Err(HammingError::Format(format!(
                        "padding bits must be zero in {s:?}"
                    )));
                }
                w.set(n - vbit - 1, true);
            }
        }
        Ok(w)
    }

    /// First storage block; handy for n <= 64 hot paths. Storage order is
    /// internal, but XOR+popcount over equal-length words is order-agnostic.
    pub(crate) fn block0(&self) -> u64 {
        self.blocks[0]
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

/// All words of length n with weight <= wmax, in lexicographic order
/// (position t = 1 most significant). The order is part of the contract:
/// oracles and exhaustive codebooks must be reproducible.
pub fn enumerate_weight_bounded(
    n: u32,
    wmax: u64,
) -> Result<impl Iterator<Item = Word>, HammingError> {
    if n == 0 {
        return Err(HammingError::LengthRange(n));
    }
    if n > ENUMERATION_MAX_N {
        return Err(HammingError::EnumerationTooLarge(n));
    }
    Ok((0u64..1 << n)
        .filter(move |v| (v.count_ones() as u64) <= wmax)
        .map(move |v| Word::from_value(v, n).expect("enumerated value fits")))
}

/// All words within distance r of the center, in lexicographic order.
pub fn enumerate_ball(
    center: &Word,
    r: u64,
) -> Result<impl Iterator<Item = Word>, HammingError> {
    let n = center.len();
    if n > ENUMERATION_MAX_N {
        return Err(HammingError::EnumerationTooLarge(n));
    }
    let c = center.to_value();
    Ok((0u64..1 << n)
        .filter(move |v| ((v ^ c).count_ones() as u64) <= r)
        .map(move |v| Word::from_value(v, n).expect("enumerated value fits")))
}
