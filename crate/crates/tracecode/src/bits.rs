//! Basic string types shared by the channel models and codecs.
//!
//! Bits are stored unpacked (one byte per bit, values 0 or 1) since every
//! hot loop in this crate is a dynamic program over positions, not words.
//! Hex-packed forms (MSB-first within each byte) are used only at
//! serialization boundaries.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An unpacked binary string. Every element is 0 or 1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(pub Vec<u8>);

impl BitString {
    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0 or 1");
        BitString(bits.to_vec())
    }

    /// Parses an ASCII string of '0'/'1' characters.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Format(format!("invalid bit character {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BitString)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// Packs MSB-first into bytes and hex-encodes. A final partial byte is
    /// zero-padded on the right; the caller must record the bit length.
    pub fn to_hex(&self) -> String {
        let mut bytes = vec![0u8; self.0.len().div_ceil(8)];
        for (i, &b) in self.0.iter().enumerate() {
            if b != 0 {
                bytes[i / 8] |= 0x80 >> (i % 8);
            }
        }
        hex::encode(bytes)
    }

    /// Inverse of [`to_hex`](Self::to_hex) given the original bit length.
    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::Format(format!("bad hex: {e}")))?;
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Format(format!(
                "hex length {} does not match bit length {len}",
                bytes.len()
            )));
        }
        let mut bits = Vec::with_capacity(len);
        for i in 0..len {
            bits.push((bytes[i / 8] >> (7 - i % 8)) & 1);
        }
        // Padding bits beyond `len` must be zero.
        for i in len..bytes.len() * 8 {
            if (bytes[i / 8] >> (7 - i % 8)) & 1 != 0 {
                return Err(Error::Format("nonzero padding bits".into()));
            }
        }
        Ok(BitString(bits))
    }
}

impl std::fmt::Debug for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl std::fmt::Display for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

impl std::ops::Deref for BitString {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

/// A string over the alphabet `[0, alphabet_size)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolString {
    pub symbols: Vec<u32>,
    pub alphabet_size: u32,
}

impl SymbolString {
    pub fn new(symbols: Vec<u32>, alphabet_size: u32) -> Result<Self> {
        if symbols.iter().any(|&s| s >= alphabet_size) {
            return Err(Error::InvalidParameter(format!(
                "symbol out of range for alphabet {alphabet_size}"
            )));
        }
        Ok(SymbolString { symbols, alphabet_size })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// The set of positions a deletion channel kept, strictly increasing.
///
/// Instrumented channel applications record one of these next to the trace
/// so tests can compare decoder output against ground truth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionPattern {
    pub kept: Vec<usize>,
}

impl DeletionPattern {
    pub fn new(kept: Vec<usize>) -> Result<Self> {
        if kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "kept positions must be strictly increasing".into(),
            ));
        }
        Ok(DeletionPattern { kept })
    }

    /// Restricts `x` to the kept positions. Panics if a position is out of
    /// range; patterns are only produced against strings of matching length.
    pub fn apply_bits(&self, x: &BitString) -> BitString {
        BitString(self.kept.iter().map(|&i| x.0[i]).collect())
    }

    pub fn apply_symbols(&self, x: &SymbolString) -> SymbolString {
        SymbolString {
            symbols: self.kept.iter().map(|&i| x.symbols[i]).collect(),
            alphabet_size: x.alphabet_size,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_roundtrip_msb_first() {
        let x = BitString::parse("10110011101").unwrap();
        let h = x.to_hex();
        assert_eq!(h, "b3a0"); // 10110011 101_00000
        assert_eq!(BitString::from_hex(&h, 11).unwrap(), x);
    }

    #[test]
    fn hex_rejects_nonzero_padding() {
        assert!(BitString::from_hex("b3a1", 11).is_err());
        assert!(BitString::from_hex("b3", 11).is_err());
    }

    #[test]
    fn pattern_must_increase() {
        assert!(DeletionPattern::new(vec![0, 2, 5]).is_ok());
        assert!(DeletionPattern::new(vec![0, 2, 2]).is_err());
        assert!(DeletionPattern::new(vec![3, 2]).is_err());
    }

    #[test]
    fn pattern_restricts() {
        let x = BitString::parse("110").unwrap();
        // Keeping positions {1,2} deletes exactly one of the first two bits.
        let p = DeletionPattern::new(vec![1, 2]).unwrap();
        assert_eq!(p.apply_bits(&x), BitString::parse("10").unwrap());
        let p = DeletionPattern::new(vec![0, 2]).unwrap();
        assert_eq!(p.apply_bits(&x), BitString::parse("10").unwrap());
    }

    #[test]
    fn symbol_string_checks_alphabet() {
        assert!(SymbolString::new(vec![0, 3], 4).is_ok());
        assert!(SymbolString::new(vec![0, 4], 4).is_err());
    }
}
