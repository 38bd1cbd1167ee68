//! Binary words and their on-track representation.
//!
//! A word is written with one track cell per *half* data cell: each bit
//! occupies `1 + g` half-cells — a leading half-cell that carries the pulse
//! for a 1 (and stays at baseline for a 0) followed by `g` baseline guard
//! half-cells — and the whole train is bracketed by one extra baseline
//! half-cell on each side. With the default `g = 1` this is the classic
//! doubled encoding (0 -> 00, 1 -> 11) seen from the field's point of view:
//! every 1-bit contributes an isolated return-to-baseline pulse whose two
//! edges land at known half-cell boundaries.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Errors from word parsing, encoding, and window geometry.
#[derive(Debug, Error, PartialEq)]
pub enum EncodeError {
    #[error("word must contain at least one bit")]
    EmptyWord,
    #[error("invalid word symbol '{0}'; expected '0' or '1'")]
    InvalidSymbol(char),
    #[error("bit value {0} is not 0 or 1")]
    InvalidBit(u8),
    #[error("doubled word has odd length {0}")]
    OddDoubledLength(usize),
    #[error("doubled word has mismatched pair at bit {0}")]
    MismatchedPair(usize),
    #[error("guard length must be at least 1, got {0}")]
    GuardTooSmall(usize),
    #[error("bit index {index} out of range for a {bit_count}-bit word")]
    BitIndexOutOfRange { index: usize, bit_count: usize },
    #[error("pulse amplitude must be finite and non-negative, got {0}")]
    BadAmplitude(f64),
}

/// A non-empty binary word, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    bits: Vec<u8>,
}

impl Word {
    /// Build a word from explicit bits (each 0 or 1, MSB first).
    pub fn new(bits: Vec<u8>) -> Result<Self, EncodeError> {
        if bits.is_empty() {
            return Err(EncodeError::EmptyWord);
        }
        if let Some(&bad) = bits.iter().find(|b| **b > 1) {
            return Err(EncodeError::InvalidBit(bad));
        }
        Ok(Self { bits })
    }

    /// The all-zero word of width `n >= 1`.
    pub fn zeros(n: usize) -> Result<Self, EncodeError> {
        Self::new(vec![0; n])
    }

    /// The all-one word of width `n >= 1`.
    pub fn ones(n: usize) -> Result<Self, EncodeError> {
        Self::new(vec![1; n])
    }

    pub fn bits(&self) -> &[u8] {
        self.bits.as_slice()
    }

    pub fn bit_count(&self) -> usize {
        self.bits.len()
    }

    /// The word left-padded with zeros to `width`; wider inputs are returned
    /// unchanged.
    pub fn pad_left(&self, width: usize) -> Word {
        if self.bits.len() >= width {
            return self.clone();
        }
        let mut bits = vec![0; width - self.bits.len()];
        bits.extend_from_slice(&self.bits);
        Word { bits }
    }

    /// The word with leading zeros removed, always keeping at least one bit.
    pub fn trim_leading_zeros(&self) -> Word {
        let first_one = self.bits.iter().position(|b| *b == 1);
        match first_one {
            Some(i) => Word {
                bits: self.bits[i..].to_vec(),
            },
            None => Word { bits: vec![0] },
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.bits.iter().all(|b| *b == 0)
    }

    /// The word's value as an integer; widths beyond 64 bits are rejected by
    /// the caller's context (words that wide are not produced here).
    pub fn to_u64(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, b| (acc << 1) | u64::from(*b)))
    }

    /// The narrowest word holding `value` (a single 0 bit for zero).
    pub fn from_u64(value: u64) -> Word {
        if value == 0 {
            return Word { bits: vec![0] };
        }
        let width = 64 - value.leading_zeros() as usize;
        let bits = (0..width)
            .rev()
            .map(|i| ((value >> i) & 1) as u8)
            .collect();
        Word { bits }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(EncodeError::EmptyWord);
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(EncodeError::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Ok(Self { bits })
    }
}

/// Polarity of a write train: which field direction carries the pulses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Baseline -1, pulses +1.
    Positive,
    /// Baseline +1, pulses -1 (the elementwise negation of `Positive`).
    Negative,
}

impl Polarity {
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    /// The field direction of this polarity's baseline half-cells.
    pub fn baseline_sign(self) -> i8 {
        match self {
            Polarity::Positive => -1,
            Polarity::Negative => 1,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Positive => write!(f, "positive"),
            Polarity::Negative => write!(f, "negative"),
        }
    }
}

impl FromStr for Polarity {
    type Err = EncodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(Polarity::Positive),
            "negative" => Ok(Polarity::Negative),
            _ => Err(EncodeError::InvalidSymbol(s.chars().next().unwrap_or('?'))),
        }
    }
}

/// One write pass over a track: a field direction per half-cell at a fixed
/// amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseTrain {
    signs: Vec<i8>,
    amplitude: f64,
    guard: usize,
    bit_count: usize,
    polarity: Polarity,
}

impl PulseTrain {
    pub fn signs(&self) -> &[i8] {
        self.signs.as_slice()
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn bit_count(&self) -> usize {
        self.bit_count
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn half_cell_count(&self) -> usize {
        self.signs.len()
    }

    /// The same train with every field direction reversed — what the
    /// opposite polarity produces for the same word.
    pub fn negated(&self) -> PulseTrain {
        PulseTrain {
            signs: self.signs.iter().map(|s| -s).collect(),
            amplitude: self.amplitude,
            guard: self.guard,
            bit_count: self.bit_count,
            polarity: self.polarity.flipped(),
        }
    }
}

/// The doubled representation of a word: 0 -> 00, 1 -> 11.
pub fn double_bits(word: &Word) -> Word {
    let bits = word
        .bits()
        .iter()
        .flat_map(|b| [*b, *b])
        .collect();
    Word { bits }
}

/// Invert [`double_bits`]: halve a word of equal pairs back to its source.
/// Odd lengths and pairs like `10` are rejected.
pub fn undouble_bits(doubled: &Word) -> Result<Word, EncodeError> {
    let bits = doubled.bits();
    if !bits.len().is_multiple_of(2) {
        return Err(EncodeError::OddDoubledLength(bits.len()));
    }
    let mut halved = Vec::with_capacity(bits.len() / 2);
    for (i, pair) in bits.chunks_exact(2).enumerate() {
        if pair[0] != pair[1] {
            return Err(EncodeError::MismatchedPair(i));
        }
        halved.push(pair[0]);
    }
    Word::new(halved)
}

/// Lay a word out as a return-to-baseline pulse train.
///
/// Each bit occupies `1 + guard` half-cells: the first carries the pulse
/// direction when the bit is 1 (baseline otherwise) and the remaining
/// `guard` stay at baseline. One extra baseline half-cell is added at each
/// end, so the train spans `bit_count * (1 + guard) + 2` half-cells.
pub fn to_pulse_train(
    word: &Word,
    polarity: Polarity,
    guard: usize,
    amplitude: f64,
) -> Result<PulseTrain, EncodeError> {
    if guard == 0 {
        return Err(EncodeError::GuardTooSmall(guard));
    }
    if !amplitude.is_finite() || amplitude < 0.0 {
        return Err(EncodeError::BadAmplitude(amplitude));
    }
    let baseline = polarity.baseline_sign();
    let pulse = -baseline;
    let mut signs = Vec::with_capacity(word.bit_count() * (1 + guard) + 2);
    signs.push(baseline);
    for bit in word.bits() {
        signs.push(if *bit == 1 { pulse } else { baseline });
        signs.extend(std::iter::repeat_n(baseline, guard));
    }
    signs.push(baseline);
    Ok(PulseTrain {
        signs,
        amplitude,
        guard,
        bit_count: word.bit_count(),
        polarity,
    })
}

/// The two half-cell edges bracketing bit `bit_index`'s pulse half-cell.
///
/// Edge `e` is the boundary at the left side of half-cell `e`. Bit `k` of a
/// train with guard `g` pulses in half-cell `1 + k * (1 + g)`, so its edges
/// are `(1 + k * (1 + g), 2 + k * (1 + g))`.
pub fn window_boundaries(
    bit_index: usize,
    bit_count: usize,
    guard: usize,
) -> Result<(usize, usize), EncodeError> {
    if guard == 0 {
        return Err(EncodeError::GuardTooSmall(guard));
    }
    if bit_index >= bit_count {
        return Err(EncodeError::BitIndexOutOfRange {
            index: bit_index,
            bit_count,
        });
    }
    let start = 1 + bit_index * (1 + guard);
    Ok((start, start + 1))
}
