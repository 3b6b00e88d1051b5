//! Fixed-length bit strings.
//!
//! Bits are addressed 1-based, matching `K[i]` notation. Bit `i` lives at
//! bit position `(i - 1) % 8` (least-significant first) of byte `(i - 1) / 8`.
//! Unused trailing bits of the last byte are always zero. This is the single
//! packing convention for key files, messages and subset masks.
//!
//! Two other views exist for interchange:
//!
//! * [`BitString::to_be_bytes`] treats the string as an unsigned integer whose
//!   most significant bit is bit 1, written big-endian with zero left-padding.
//!   The oracle query encoding uses this.
//! * [`BitString::from_hex`] / [`BitString::to_hex`] use the same integer view
//!   for the CLI message format.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    len: usize,
    bytes: Vec<u8>,
}

#[inline]
fn byte_len(bits: usize) -> usize {
    bits.div_ceil(8)
}

impl BitString {
    /// All-zero string of `len` bits.
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            bytes: vec![0; byte_len(len)],
        }
    }

    /// Wraps a packed payload. Fails if the payload size does not match
    /// `len` or if any pad bit is set.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        let malformed = || Error::MalformedPayload {
            bits: len,
            bytes: bytes.len(),
        };
        if bytes.len() != byte_len(len) {
            return Err(malformed());
        }
        if let Some(&last) = bytes.last() {
            if last & !last_byte_mask(len) != 0 {
                return Err(malformed());
            }
        }
        Ok(BitString {
            len,
            bytes: bytes.to_vec(),
        })
    }

    /// Like [`from_bytes`](Self::from_bytes) but clears pad bits instead of
    /// rejecting them. `bytes` must still hold exactly `ceil(len / 8)` bytes.
    pub fn from_bytes_masked(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() != byte_len(len) {
            return Err(Error::MalformedPayload {
                bits: len,
                bytes: bytes.len(),
            });
        }
        let mut bytes = bytes.to_vec();
        if let Some(last) = bytes.last_mut() {
            *last &= last_byte_mask(len);
        }
        Ok(BitString { len, bytes })
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut out = BitString::default();
        for b in bits {
            out.push(b);
        }
        out
    }

    /// The low `len` bits of `value`, with bit 1 the most significant.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        BitString::from_bits((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1))
    }

    /// Inverse of [`from_u64`](Self::from_u64). Panics above 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64);
        self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.bytes.clone()
    }

    /// Bit `i`, 1-based.
    pub fn get(&self, i: usize) -> Result<bool> {
        self.check(i)?;
        Ok(self.bit0(i - 1))
    }

    /// Sets bit `i`, 1-based.
    pub fn set(&mut self, i: usize, bit: bool) -> Result<()> {
        self.check(i)?;
        let (byte, shift) = ((i - 1) / 8, (i - 1) % 8);
        if bit {
            self.bytes[byte] |= 1 << shift;
        } else {
            self.bytes[byte] &= !(1 << shift);
        }
        Ok(())
    }

    pub fn with_bit(&self, i: usize, bit: bool) -> Result<Self> {
        let mut out = self.clone();
        out.set(i, bit)?;
        Ok(out)
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        self.len += 1;
        if bit {
            let i = self.len - 1;
            self.bytes[i / 8] |= 1 << (i % 8);
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit0(i))
    }

    /// Splits into the leading bit and the remaining `len - 1` bits.
    pub fn split_lr(&self) -> Result<(bool, BitString)> {
        if self.len < 2 {
            return Err(Error::DomainTooSmall(self.len));
        }
        let rest = BitString::from_bits(self.iter().skip(1));
        Ok((self.bit0(0), rest))
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        for b in other.iter() {
            out.push(b);
        }
        out
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        let bytes = self
            .bytes
            .iter()
            .zip(&other.bytes)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitString {
            len: self.len,
            bytes,
        })
    }

    pub fn count_ones(&self) -> u64 {
        self.bytes.iter().map(|b| b.count_ones() as u64).sum()
    }

    /// Big-endian integer view: bit 1 is the most significant bit, zero
    /// left-padded into `ceil(len / 8)` bytes.
    pub fn to_be_bytes(&self) -> Vec<u8> {
        let n = byte_len(self.len);
        let mut out = vec![0u8; n];
        for (i, bit) in self.iter().enumerate() {
            if bit {
                let weight = self.len - 1 - i;
                out[n - 1 - weight / 8] |= 1 << (weight % 8);
            }
        }
        out
    }

    /// Inverse of [`to_be_bytes`](Self::to_be_bytes). Any number of bytes is
    /// accepted as long as the integer fits in `len` bits.
    pub fn from_be_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        let weight_of = |byte: usize, shift: usize| (bytes.len() - 1 - byte) * 8 + shift;
        let mut out = BitString::zeros(len);
        for (byte, &v) in bytes.iter().enumerate() {
            for shift in 0..8 {
                if v >> shift & 1 == 0 {
                    continue;
                }
                let weight = weight_of(byte, shift);
                if weight >= len {
                    return Err(Error::InvalidHex(format!(
                        "value has bits set above the {len}-bit message width"
                    )));
                }
                let i = len - weight;
                out.set(i, true)?;
            }
        }
        Ok(out)
    }

    /// Parses big-endian hex (optional `0x` prefix, any number of digits) as
    /// an `len`-bit message. Bits above `len` must be zero. No digits is
    /// accepted only for `len = 0`, the inverse of [`to_hex`](Self::to_hex).
    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let digits = hex
            .trim()
            .strip_prefix("0x")
            .or_else(|| hex.trim().strip_prefix("0X"))
            .unwrap_or(hex.trim());
        if digits.is_empty() && len > 0 {
            return Err(Error::InvalidHex("empty input".into()));
        }
        let mut nibbles = Vec::with_capacity(digits.len() + 1);
        if digits.len() % 2 == 1 {
            nibbles.push(0u8);
        }
        for c in digits.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidHex(format!("non-hex character {c:?}")))?;
            nibbles.push(v as u8);
        }
        let bytes: Vec<u8> = nibbles.chunks(2).map(|p| p[0] << 4 | p[1]).collect();
        Self::from_be_bytes(&bytes, len)
    }

    /// Lowercase big-endian hex with exactly `ceil(len / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let full: String = self
            .to_be_bytes()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        full[full.len() - digits..].to_string()
    }

    #[inline]
    fn bit0(&self, i: usize) -> bool {
        self.bytes[i / 8] >> (i % 8) & 1 == 1
    }

    fn check(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len {
            return Err(Error::Addressing {
                index: i as u64,
                len: self.len as u64,
            });
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn last_byte_mask(len: usize) -> u8 {
    match len % 8 {
        0 => 0xff,
        r => (1u8 << r) - 1,
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

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

/// Parses a literal such as `"0110"`, first character = bit 1.
impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from_bits)
    }
}
