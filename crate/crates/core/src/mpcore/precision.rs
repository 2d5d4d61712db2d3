use serde::{Deserialize, Serialize};

/// Bits per allocation word. Working precision always rises in whole words.
pub const WORD_BITS: u32 = 64;

/// log₂ 10, used to turn decimal digits into mantissa bits.
pub const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// log₁₀ 2, used to turn mantissa bits into decimal digits.
pub const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// Requested decimal precision together with the mantissa width actually used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionSpec {
    /// Intended precision P in decimal digits.
    pub decimal_digits: u32,
    /// Mantissa width M in bits, a multiple of [`WORD_BITS`].
    pub bit_precision: u32,
}

impl PrecisionSpec {
    /// Smallest whole-word mantissa holding `digits` decimal digits.
    ///
    /// `digits == 0` is treated as 1.
    pub fn from_digits(digits: u32) -> Self {
        let digits = digits.max(1);
        let needed = (f64::from(digits) * LOG2_10).ceil() as u32;
        let words = needed.div_ceil(WORD_BITS).max(1);
        PrecisionSpec {
            decimal_digits: digits,
            bit_precision: words * WORD_BITS,
        }
    }

    /// Precision with an explicit bit width, rounded up to whole words.
    pub fn from_bits(bits: u32) -> Self {
        let bit_precision = bits.div_ceil(WORD_BITS).max(1) * WORD_BITS;
        PrecisionSpec {
            decimal_digits: digits_of_bits(bit_precision),
            bit_precision,
        }
    }

    /// Decimal digits actually carried by the mantissa (≥ `decimal_digits`).
    pub fn actual_digits(&self) -> f64 {
        f64::from(self.bit_precision) * LOG10_2
    }

    /// Same request raised by `words` whole words.
    pub fn raised_by_words(&self, words: u32) -> Self {
        let bit_precision = self.bit_precision + words * WORD_BITS;
        PrecisionSpec {
            decimal_digits: digits_of_bits(bit_precision),
            bit_precision,
        }
    }
}

/// Convenience wrapper matching the library's naming elsewhere.
pub fn digits_to_bits(digits: u32) -> PrecisionSpec {
    PrecisionSpec::from_digits(digits)
}

/// Whole decimal digits representable in `bits` of mantissa.
pub fn digits_of_bits(bits: u32) -> u32 {
    (f64::from(bits) * LOG10_2).floor() as u32
}
