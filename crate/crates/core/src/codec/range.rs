//! Binary range coder with a 48-bit window and byte-wise carry propagation.
//!
//! Probabilities are 32-bit fixed point: `q` is the chance of a 1 in units of
//! `2⁻³²`, `1 ≤ q < 2³²`. The range is kept in `[2⁴⁰, 2⁴⁸)`, so both halves
//! of every split are at least 256 wide. A stream that codes `N` byte shifts
//! is exactly `N + 7` bytes long and starts with a zero byte.

use crate::error::{Error, Result};

const WINDOW_BITS: u32 = 48;
const TOP: u64 = 1 << 40;
const MASK: u64 = (1 << WINDOW_BITS) - 1;
const FLUSH_BYTES: usize = 7;

#[inline]
fn split(range: u64, q: u32) -> u64 {
    ((range as u128 * q as u128) >> 32) as u64
}

pub struct RangeEncoder {
    low: u64,
    range: u64,
    cache: u8,
    cache_size: u64,
    out: Vec<u8>,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        Self {
            low: 0,
            range: MASK,
            cache: 0,
            cache_size: 1,
            out: Vec::new(),
        }
    }

    fn shift_low(&mut self) {
        let carry = (self.low >> WINDOW_BITS) as u8;
        if self.low & MASK < 0xFF << 40 || carry != 0 {
            let mut byte = self.cache;
            while self.cache_size > 0 {
                self.out.push(byte.wrapping_add(carry));
                byte = 0xFF;
                self.cache_size -= 1;
            }
            self.cache = (self.low >> 40) as u8;
        }
        self.cache_size += 1;
        self.low = (self.low & (TOP - 1)) << 8;
    }

    #[inline]
    pub fn encode(&mut self, bit: bool, q: u32) {
        let bound = split(self.range, q);
        if bit {
            self.range = bound;
        } else {
            self.low += bound;
            self.range -= bound;
        }
        while self.range < TOP {
            self.range <<= 8;
            self.shift_low();
        }
    }

    pub fn finish(mut self) -> Vec<u8> {
        for _ in 0..FLUSH_BYTES {
            self.shift_low();
        }
        self.out
    }
}

pub struct RangeDecoder<'a> {
    input: &'a [u8],
    next: usize,
    code: u64,
    range: u64,
}

impl<'a> RangeDecoder<'a> {
    pub fn new(input: &'a [u8]) -> Result<Self> {
        if input.len() < FLUSH_BYTES {
            return Err(Error::CorruptPayload(format!(
                "payload of {} bytes is shorter than the {FLUSH_BYTES}-byte minimum",
                input.len()
            )));
        }
        if input[0] != 0 {
            return Err(Error::CorruptPayload(
                "payload must start with a zero byte".into(),
            ));
        }
        let code = input[1..FLUSH_BYTES]
            .iter()
            .fold(0u64, |acc, &b| acc << 8 | b as u64);
        Ok(Self {
            input,
            next: FLUSH_BYTES,
            code,
            range: MASK,
        })
    }

    #[inline]
    pub fn decode(&mut self, q: u32) -> Result<bool> {
        if self.code >= self.range {
            return Err(Error::CorruptPayload(
                "range coder lost synchronisation".into(),
            ));
        }
        let bound = split(self.range, q);
        let bit = if self.code < bound {
            self.range = bound;
            true
        } else {
            self.code -= bound;
            self.range -= bound;
            false
        };
        while self.range < TOP {
            let Some(&byte) = self.input.get(self.next) else {
                return Err(Error::CorruptPayload("payload truncated".into()));
            };
            self.next += 1;
            self.range <<= 8;
            self.code = (self.code << 8 | byte as u64) & MASK;
        }
        Ok(bit)
    }

    /// Fails unless every payload byte was consumed.
    pub fn finish(self) -> Result<()> {
        if self.code >= self.range {
            return Err(Error::CorruptPayload(
                "range coder lost synchronisation".into(),
            ));
        }
        if self.next != self.input.len() {
            return Err(Error::CorruptPayload(format!(
                "{} trailing payload bytes",
                self.input.len() - self.next
            )));
        }
        Ok(())
    }
}
