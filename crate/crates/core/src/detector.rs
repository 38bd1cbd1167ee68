//! Amplitude-discriminating peak detection.
//!
//! The readback of a doubly-written track carries boundary pulses of two
//! distinct magnitudes: full swings (magnitude 2) where both passes pulsed
//! together, and half swings (magnitude 1) where exactly one did. Sorting
//! peaks into MEDIUM and LARGE classes and asking, per bit window, "was
//! there any peak of the class I care about?" evaluates a Boolean function
//! of the two written words — which function depends only on the class
//! filter.

use thiserror::Error;

use crate::channel::ReadbackSignal;
use crate::encode::{window_boundaries, EncodeError, Word};

/// Errors from detector configuration and decoding.
#[derive(Debug, Error, PartialEq)]
pub enum DetectorError {
    #[error("detector thresholds must satisfy 0 < low < high, got low={low}, high={high}")]
    BadThresholds { low: f64, high: f64 },
    #[error("window {window} has mixed edge flags ({start}, {end}); the track is inconsistent")]
    TornWindow {
        window: usize,
        start: u8,
        end: u8,
    },
    #[error("no windows to decode")]
    NoWindows,
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

/// Peak magnitude class: half swing or full swing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakClass {
    Medium,
    Large,
}

/// Which peak classes count when raising window flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetectorMode {
    /// Any peak counts (full swings or half swings).
    #[default]
    Any,
    /// Only full swings count.
    LargeOnly,
    /// Only half swings count.
    MediumOnly,
}

impl DetectorMode {
    fn admits(self, class: PeakClass) -> bool {
        match self {
            DetectorMode::Any => true,
            DetectorMode::LargeOnly => class == PeakClass::Large,
            DetectorMode::MediumOnly => class == PeakClass::Medium,
        }
    }
}

/// Classification thresholds and the class filter to decode with.
///
/// A peak of absolute amplitude `a` is MEDIUM when `low <= a < high` and
/// LARGE when `a >= high`; anything below `low` is noise and dropped. The
/// defaults (0.5 and 1.5) sit halfway between the ideal amplitudes 0, 1,
/// and 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    pub theta_low: f64,
    pub theta_high: f64,
    pub mode: DetectorMode,
}

impl DetectorConfig {
    pub fn new(theta_low: f64, theta_high: f64, mode: DetectorMode) -> Result<Self, DetectorError> {
        if !(theta_low.is_finite() && theta_high.is_finite())
            || theta_low <= 0.0
            || theta_low >= theta_high
        {
            return Err(DetectorError::BadThresholds {
                low: theta_low,
                high: theta_high,
            });
        }
        Ok(Self {
            theta_low,
            theta_high,
            mode,
        })
    }

    pub fn with_mode(self, mode: DetectorMode) -> Self {
        Self { mode, ..self }
    }

    fn classify(&self, amplitude: f64) -> Option<PeakClass> {
        let a = amplitude.abs();
        if a >= self.theta_high {
            Some(PeakClass::Large)
        } else if a >= self.theta_low {
            Some(PeakClass::Medium)
        } else {
            None
        }
    }
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            theta_low: 0.5,
            theta_high: 1.5,
            mode: DetectorMode::Any,
        }
    }
}

/// One detected readback peak. Boundary indices count transitions: peak `i`
/// sits between half-cells `i` and `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakEvent {
    pub boundary_index: usize,
    /// Signed peak amplitude; classification and decoding use only its
    /// magnitude, so both pulse directions decode identically.
    pub amplitude: f64,
    pub class: PeakClass,
}

/// Find and classify every above-threshold peak of a readback signal.
///
/// Without a shaped waveform each nonzero transition is its own candidate
/// peak. With one, candidates are the waveform's local extrema, and each is
/// assigned to the nearest boundary. Classification thresholds come from
/// `config`; its `mode` is ignored here (all classes are reported) and only
/// matters when flags are raised.
pub fn detect_peaks(signal: &ReadbackSignal, config: &DetectorConfig) -> Vec<PeakEvent> {
    match &signal.waveform {
        None => signal
            .transitions
            .iter()
            .enumerate()
            .filter_map(|(i, amp)| {
                config.classify(*amp).map(|class| PeakEvent {
                    boundary_index: i,
                    amplitude: *amp,
                    class,
                })
            })
            .collect(),
        Some(samples) => {
            let mut events = Vec::new();
            let boundary_count = signal.transitions.len();
            for i in 1..samples.len().saturating_sub(1) {
                let (x, v) = samples[i];
                let prev = samples[i - 1].1;
                let next = samples[i + 1].1;
                let is_max = v > prev && v >= next && v > 0.0;
                let is_min = v < prev && v <= next && v < 0.0;
                if !(is_max || is_min) {
                    continue;
                }
                let Some(class) = config.classify(v) else {
                    continue;
                };
                // Boundary b sits at position b + 1 in half-cell units.
                let nearest = (x - 1.0).round();
                if nearest < 0.0 {
                    continue;
                }
                let boundary_index = (nearest as usize).min(boundary_count.saturating_sub(1));
                events.push(PeakEvent {
                    boundary_index,
                    amplitude: v,
                    class,
                });
            }
            events
        }
    }
}

/// Raise one `(start, end)` flag pair per bit window: a flag is set when
/// some peak admitted by `mode` sits on that edge of the window.
///
/// Edge `e` of the window geometry is boundary `e - 1` of the transitions
/// array (boundary `i` separates half-cells `i` and `i + 1`).
pub fn window_flags(
    events: &[PeakEvent],
    bit_count: usize,
    guard: usize,
    mode: DetectorMode,
) -> Result<Vec<(u8, u8)>, DetectorError> {
    let mut flags = vec![(0u8, 0u8); bit_count];
    for (k, pair) in flags.iter_mut().enumerate() {
        let (start_edge, end_edge) = window_boundaries(k, bit_count, guard)?;
        for event in events {
            if !mode.admits(event.class) {
                continue;
            }
            if event.boundary_index + 1 == start_edge {
                pair.0 = 1;
            }
            if event.boundary_index + 1 == end_edge {
                pair.1 = 1;
            }
        }
    }
    Ok(flags)
}

/// Collapse flag pairs into a word: `(1, 1)` reads as 1, `(0, 0)` as 0.
/// A pulse always produces two edges, so a mixed pair means the signal and
/// the window grid have fallen out of step.
pub fn decode_word(flags: &[(u8, u8)]) -> Result<Word, DetectorError> {
    if flags.is_empty() {
        return Err(DetectorError::NoWindows);
    }
    let mut bits = Vec::with_capacity(flags.len());
    for (window, &(start, end)) in flags.iter().enumerate() {
        match (start, end) {
            (1, 1) => bits.push(1),
            (0, 0) => bits.push(0),
            _ => {
                return Err(DetectorError::TornWindow { window, start, end });
            }
        }
    }
    Ok(Word::new(bits)?)
}

/// Detect, flag, and decode in one step — the usual read path.
pub fn decode_signal(
    signal: &ReadbackSignal,
    bit_count: usize,
    guard: usize,
    config: &DetectorConfig,
) -> Result<Word, DetectorError> {
    let events = detect_peaks(signal, config);
    let flags = window_flags(&events, bit_count, guard, config.mode)?;
    decode_word(&flags)
}
