//! Boolean gates and addition built from superimposed writes.
//!
//! Writing word A at full amplitude and word B at partial amplitude leaves a
//! track whose full-swing peaks mark positions where A and B agree on 1 and
//! whose half-swing peaks mark positions where they disagree. Reading that
//! one track through different class filters therefore computes
//! OR (any peak), AND (full swings only), and XOR (half swings only) in a
//! single pair of passes; NOT is XOR against all-ones, and the remaining
//! gates compose. Repeated XOR/AND rounds with a shifted carry implement a
//! ripple-free adder.

use thiserror::Error;

use crate::channel::{run_superimposition, ChannelError, PassSpec, ReadbackSignal, Track};
use crate::detector::{decode_signal, DetectorConfig, DetectorError, DetectorMode};
use crate::encode::{EncodeError, Polarity, Word};
use crate::medium::Medium;

/// Errors from gate evaluation and addition.
#[derive(Debug, Error)]
pub enum LogicError {
    #[error("gate {0} takes one operand, but two were given")]
    UnaryGateWithTwoOperands(&'static str),
    #[error("gate {0} takes two operands, but one was given")]
    BinaryGateWithOneOperand(&'static str),
    #[error("unknown gate '{0}'")]
    UnknownGate(String),
    #[error("addition failed to settle after {0} rounds; carries should vanish by then")]
    NonTermination(usize),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// The supported gates. The first five run in one elementary write/read
/// operation; the last three compose two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Or,
    And,
    Xor,
    /// XOR computed by writing B with reversed polarity and reading every
    /// peak — same truth table as `Xor`, different physical route.
    XorNeg,
    Not,
    Nand,
    Nor,
    Xnor,
}

impl GateKind {
    pub fn is_unary(self) -> bool {
        self == GateKind::Not
    }

    /// Gates that chain two elementary operations.
    pub fn is_composed(self) -> bool {
        matches!(self, GateKind::Nand | GateKind::Nor | GateKind::Xnor)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Or => "or",
            GateKind::And => "and",
            GateKind::Xor => "xor",
            GateKind::XorNeg => "xorneg",
            GateKind::Not => "not",
            GateKind::Nand => "nand",
            GateKind::Nor => "nor",
            GateKind::Xnor => "xnor",
        }
    }

    pub fn parse(name: &str) -> Result<Self, LogicError> {
        match name {
            "or" => Ok(GateKind::Or),
            "and" => Ok(GateKind::And),
            "xor" => Ok(GateKind::Xor),
            "xorneg" => Ok(GateKind::XorNeg),
            "not" => Ok(GateKind::Not),
            "nand" => Ok(GateKind::Nand),
            "nor" => Ok(GateKind::Nor),
            "xnor" => Ok(GateKind::Xnor),
            other => Err(LogicError::UnknownGate(other.to_string())),
        }
    }
}

/// A gate together with its operands, validated for arity and width.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub a: Word,
    pub b: Option<Word>,
}

impl GateSpec {
    pub fn unary(kind: GateKind, a: Word) -> Result<Self, LogicError> {
        if !kind.is_unary() {
            return Err(LogicError::BinaryGateWithOneOperand(kind.name()));
        }
        Ok(Self { kind, a, b: None })
    }

    pub fn binary(kind: GateKind, a: Word, b: Word) -> Result<Self, LogicError> {
        if kind.is_unary() {
            return Err(LogicError::UnaryGateWithTwoOperands(kind.name()));
        }
        if a.bit_count() != b.bit_count() {
            return Err(ChannelError::WordWidthMismatch {
                a: a.bit_count(),
                b: b.bit_count(),
            }
            .into());
        }
        Ok(Self { kind, a, b: Some(b) })
    }

    /// Elementary write/read operations this gate costs.
    pub fn elementary_ops(&self) -> u64 {
        if self.kind.is_composed() {
            2
        } else {
            1
        }
    }
}

/// Result of an addition, with the work it took.
#[derive(Debug, Clone, PartialEq)]
pub struct AddOutcome {
    pub sum: Word,
    /// XOR/AND rounds run, including the final one that found no carries.
    pub iterations: usize,
    /// Elementary write/read operations consumed (two per round).
    pub elementary_ops: u64,
}

/// A configured gate evaluator: medium, track geometry, write amplitudes,
/// and detector thresholds. The default is the analytic longitudinal medium
/// at guard 1 with the standard amplitudes and thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct Processor {
    medium: Medium,
    guard: usize,
    detector: DetectorConfig,
    full_amplitude: f64,
    partial_amplitude: f64,
}

impl Default for Processor {
    fn default() -> Self {
        Self::new(Medium::default(), 1).expect("default processor configuration is valid")
    }
}

impl Processor {
    /// A processor over `medium` with write amplitudes taken from the
    /// medium's own operating points.
    pub fn new(medium: Medium, guard: usize) -> Result<Self, LogicError> {
        if guard == 0 {
            return Err(EncodeError::GuardTooSmall(guard).into());
        }
        Ok(Self {
            medium,
            guard,
            detector: DetectorConfig::default(),
            full_amplitude: medium.full_write_amplitude(),
            partial_amplitude: medium.partial_write_amplitude(),
        })
    }

    pub fn with_detector(mut self, detector: DetectorConfig) -> Self {
        self.detector = detector;
        self
    }

    pub fn medium(&self) -> &Medium {
        &self.medium
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn detector(&self) -> &DetectorConfig {
        &self.detector
    }

    /// Write A (full pass) and B (partial pass, `polarity_b`) onto a fresh
    /// track and return it with its readback.
    pub fn superimpose(
        &self,
        a: &Word,
        b: &Word,
        polarity_b: Polarity,
    ) -> Result<(Track, ReadbackSignal), LogicError> {
        let (track, signal) = run_superimposition(
            &self.medium,
            a,
            PassSpec {
                polarity: Polarity::Positive,
                amplitude: self.full_amplitude,
            },
            b,
            PassSpec {
                polarity: polarity_b,
                amplitude: self.partial_amplitude,
            },
            self.guard,
        )?;
        Ok((track, signal))
    }

    fn superimpose_and_decode(
        &self,
        a: &Word,
        b: &Word,
        polarity_b: Polarity,
        mode: DetectorMode,
    ) -> Result<Word, LogicError> {
        let (_, signal) = self.superimpose(a, b, polarity_b)?;
        let config = self.detector.with_mode(mode);
        Ok(decode_signal(&signal, a.bit_count(), self.guard, &config)?)
    }

    /// OR: every peak counts, so any position where either word pulsed
    /// decodes as 1.
    pub fn or(&self, a: &Word, b: &Word) -> Result<Word, LogicError> {
        self.check_widths(a, b)?;
        self.superimpose_and_decode(a, b, Polarity::Positive, DetectorMode::Any)
    }

    /// AND: only full swings count, and those need both passes pulsing the
    /// same half-cell.
    pub fn and(&self, a: &Word, b: &Word) -> Result<Word, LogicError> {
        self.check_widths(a, b)?;
        self.superimpose_and_decode(a, b, Polarity::Positive, DetectorMode::LargeOnly)
    }

    /// XOR: only half swings count — positions where exactly one pass
    /// pulsed.
    pub fn xor(&self, a: &Word, b: &Word) -> Result<Word, LogicError> {
        self.check_widths(a, b)?;
        self.superimpose_and_decode(a, b, Polarity::Positive, DetectorMode::MediumOnly)
    }

    /// XOR via the reversed-polarity route: writing B inverted makes
    /// agreements cancel outright, so every surviving peak marks a
    /// disagreement and the ANY filter suffices.
    pub fn xor_neg(&self, a: &Word, b: &Word) -> Result<Word, LogicError> {
        self.check_widths(a, b)?;
        self.superimpose_and_decode(a, b, Polarity::Negative, DetectorMode::Any)
    }

    /// NOT: XOR against the all-ones word of the same width.
    pub fn not(&self, a: &Word) -> Result<Word, LogicError> {
        let ones = Word::ones(a.bit_count())?;
        self.superimpose_and_decode(a, &ones, Polarity::Positive, DetectorMode::MediumOnly)
    }

    /// Evaluate any gate, composing NOT onto AND/OR/XOR where needed.
    pub fn run(&self, spec: &GateSpec) -> Result<Word, LogicError> {
        match (spec.kind, spec.b.as_ref()) {
            (GateKind::Or, Some(b)) => self.or(&spec.a, b),
            (GateKind::And, Some(b)) => self.and(&spec.a, b),
            (GateKind::Xor, Some(b)) => self.xor(&spec.a, b),
            (GateKind::XorNeg, Some(b)) => self.xor_neg(&spec.a, b),
            (GateKind::Not, None) => self.not(&spec.a),
            (GateKind::Nand, Some(b)) => {
                let and = self.and(&spec.a, b)?;
                self.not(&and)
            }
            (GateKind::Nor, Some(b)) => {
                let or = self.or(&spec.a, b)?;
                self.not(&or)
            }
            (GateKind::Xnor, Some(b)) => {
                let xor = self.xor(&spec.a, b)?;
                self.not(&xor)
            }
            (kind, None) => Err(LogicError::BinaryGateWithOneOperand(kind.name())),
            (kind, Some(_)) => Err(LogicError::UnaryGateWithTwoOperands(kind.name())),
        }
    }

    /// Add two equal-width words by carry iteration.
    ///
    /// Each round replaces (A, B) with (A XOR B, carries (A AND B) shifted
    /// left one place); the shift widens the words by one bit, and the loop
    /// ends when no carries remain. n-bit inputs settle within n + 1
    /// rounds, so exceeding that bound is reported as an error rather than
    /// looping forever.
    pub fn add(&self, a: &Word, b: &Word) -> Result<AddOutcome, LogicError> {
        self.check_widths(a, b)?;
        let input_width = a.bit_count();
        let mut acc = a.clone();
        let mut carry_in = b.clone();
        for round in 1..=(input_width + 1) {
            let sum = self.xor(&acc, &carry_in)?;
            let carries = self.and(&acc, &carry_in)?;
            if carries.is_all_zero() {
                return Ok(AddOutcome {
                    sum: sum.trim_leading_zeros(),
                    iterations: round,
                    elementary_ops: 2 * round as u64,
                });
            }
            acc = sum.pad_left(sum.bit_count() + 1);
            carry_in = left_shift(&carries);
        }
        Err(LogicError::NonTermination(input_width + 1))
    }

    fn check_widths(&self, a: &Word, b: &Word) -> Result<(), LogicError> {
        if a.bit_count() != b.bit_count() {
            return Err(ChannelError::WordWidthMismatch {
                a: a.bit_count(),
                b: b.bit_count(),
            }
            .into());
        }
        Ok(())
    }
}

/// Shift a word one place left, widening it by one bit: `11` becomes `110`,
/// written alongside the zero-padded original as carries for the next round.
pub fn left_shift(word: &Word) -> Word {
    let mut bits = word.bits().to_vec();
    bits.push(0);
    Word::new(bits).expect("shifting a non-empty word keeps it non-empty")
}

/// Plain bitwise reference for every gate, used to cross-check the
/// write/read pipeline.
pub fn boolean_reference(
    kind: GateKind,
    a: &Word,
    b: Option<&Word>,
) -> Result<Word, LogicError> {
    let bit = |x: u8, y: u8| -> u8 {
        match kind {
            GateKind::Or => x | y,
            GateKind::And => x & y,
            GateKind::Xor | GateKind::XorNeg => x ^ y,
            GateKind::Nand => 1 - (x & y),
            GateKind::Nor => 1 - (x | y),
            GateKind::Xnor => 1 - (x ^ y),
            GateKind::Not => 1 - x,
        }
    };
    match (kind.is_unary(), b) {
        (true, None) => {
            let bits = a.bits().iter().map(|x| bit(*x, 0)).collect();
            Ok(Word::new(bits)?)
        }
        (false, Some(b)) => {
            if a.bit_count() != b.bit_count() {
                return Err(ChannelError::WordWidthMismatch {
                    a: a.bit_count(),
                    b: b.bit_count(),
                }
                .into());
            }
            let bits = a
                .bits()
                .iter()
                .zip(b.bits())
                .map(|(x, y)| bit(*x, *y))
                .collect();
            Ok(Word::new(bits)?)
        }
        (true, Some(_)) => Err(LogicError::UnaryGateWithTwoOperands(kind.name())),
        (false, None) => Err(LogicError::BinaryGateWithOneOperand(kind.name())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Word {
        s.parse().expect("test word should parse")
    }

    fn p() -> Processor {
        Processor::default()
    }

    #[test]
    fn the_three_basic_gates_come_from_one_track() {
        let a = word("1010");
        let b = word("1001");
        assert_eq!(p().or(&a, &b).unwrap(), word("1011"));
        assert_eq!(p().and(&a, &b).unwrap(), word("1000"));
        assert_eq!(p().xor(&a, &b).unwrap(), word("0011"));
    }

    #[test]
    fn reversed_polarity_xor_matches_the_filtered_one() {
        let a = word("1010");
        let b = word("1001");
        assert_eq!(p().xor_neg(&a, &b).unwrap(), word("0011"));
        // A word against itself at reversed polarity cancels completely.
        assert_eq!(p().xor_neg(&b, &b).unwrap(), word("0000"));
    }

    #[test]
    fn not_inverts_and_respects_edge_words() {
        assert_eq!(p().not(&word("1010")).unwrap(), word("0101"));
        assert_eq!(p().not(&word("1111")).unwrap(), word("0000"));
        assert_eq!(p().not(&word("0")).unwrap(), word("1"));
    }

    #[test]
    fn composed_gates_chain_not_onto_the_basics() {
        let a = word("1010");
        let b = word("1001");
        let run = |kind| {
            p().run(&GateSpec::binary(kind, a.clone(), b.clone()).unwrap())
                .unwrap()
                .to_string()
        };
        assert_eq!(run(GateKind::Nand), "0111");
        assert_eq!(run(GateKind::Nor), "0100");
        assert_eq!(run(GateKind::Xnor), "1100");
    }

    #[test]
    fn gate_identities_hold() {
        let w = word("10110");
        let zeros = Word::zeros(5).unwrap();
        let ones = Word::ones(5).unwrap();
        assert_eq!(p().or(&w, &zeros).unwrap(), w);
        assert_eq!(p().and(&w, &ones).unwrap(), w);
        assert_eq!(p().xor(&w, &w).unwrap(), zeros);
    }

    #[test]
    fn arity_and_width_are_enforced() {
        assert!(matches!(
            GateSpec::binary(GateKind::Not, word("1"), word("1")),
            Err(LogicError::UnaryGateWithTwoOperands("not"))
        ));
        assert!(matches!(
            GateSpec::unary(GateKind::Or, word("1")),
            Err(LogicError::BinaryGateWithOneOperand("or"))
        ));
        assert!(matches!(
            p().or(&word("10"), &word("100")),
            Err(LogicError::Channel(ChannelError::WordWidthMismatch {
                a: 2,
                b: 3
            }))
        ));
    }

    #[test]
    fn left_shift_widens_instead_of_truncating() {
        assert_eq!(left_shift(&word("11")).to_string(), "110");
        assert_eq!(left_shift(&word("1000")).to_string(), "10000");
        assert_eq!(left_shift(&word("0")).to_string(), "00");
    }

    #[test]
    fn addition_follows_the_carry_iteration() {
        // 1010 + 1001 = 10011: one carry round then a clean XOR.
        let outcome = p().add(&word("1010"), &word("1001")).unwrap();
        assert_eq!(outcome.sum, word("10011"));
        assert_eq!(outcome.iterations, 2);
        assert_eq!(outcome.elementary_ops, 4);
    }

    #[test]
    fn addition_handles_the_carry_chain_worst_case() {
        // 1111 + 0001 ripples a carry through every position.
        let outcome = p().add(&word("1111"), &word("0001")).unwrap();
        assert_eq!(outcome.sum, word("10000"));
        assert_eq!(outcome.iterations, 5, "width + 1 rounds exactly");
    }

    #[test]
    fn addition_of_zeros_terminates_immediately() {
        let outcome = p().add(&word("0"), &word("0")).unwrap();
        assert_eq!(outcome.sum, word("0"));
        assert_eq!(outcome.iterations, 1);
    }

    #[test]
    fn addition_matches_integer_arithmetic_on_samples() {
        let cases = [
            ("1", "1", 2),
            ("101", "011", 8),
            ("111111", "111111", 126),
            ("100000", "000001", 33),
        ];
        for (a, b, expected) in cases {
            let outcome = p().add(&word(a), &word(b)).unwrap();
            assert_eq!(
                outcome.sum.to_u64(),
                Some(expected),
                "{a} + {b} should be {expected}"
            );
        }
    }

    #[test]
    fn gate_parsing_covers_all_names() {
        for kind in [
            GateKind::Or,
            GateKind::And,
            GateKind::Xor,
            GateKind::XorNeg,
            GateKind::Not,
            GateKind::Nand,
            GateKind::Nor,
            GateKind::Xnor,
        ] {
            assert_eq!(GateKind::parse(kind.name()).unwrap(), kind);
        }
        assert!(matches!(
            GateKind::parse("nope"),
            Err(LogicError::UnknownGate(_))
        ));
    }

    #[test]
    fn boolean_reference_matches_hand_truth_tables() {
        let a = word("1100");
        let b = word("1010");
        let check = |kind, expected: &str| {
            assert_eq!(
                boolean_reference(kind, &a, Some(&b)).unwrap(),
                word(expected)
            );
        };
        check(GateKind::Or, "1110");
        check(GateKind::And, "1000");
        check(GateKind::Xor, "0110");
        check(GateKind::Nand, "0111");
        check(GateKind::Nor, "0001");
        check(GateKind::Xnor, "1001");
        assert_eq!(
            boolean_reference(GateKind::Not, &a, None).unwrap(),
            word("0011")
        );
    }
}
