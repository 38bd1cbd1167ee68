//! The track and its write/read channel.
//!
//! A track is a row of half-cells over a chosen medium. Writing applies a
//! pulse train's per-half-cell field directions at the train's amplitude;
//! superimposing a full-strength pass with a partial-strength pass leaves
//! each half-cell at -1, 0, or +1, and reading back differentiates that
//! profile so that the boundary amplitudes fall in {0, +/-1, +/-2}. An
//! optional shaped readback renders the same transitions as a sampled sum
//! of unit-height Lorentzian pulses.

use thiserror::Error;

use crate::encode::{to_pulse_train, Polarity, PulseTrain, Word};
use crate::medium::{
    balanced_field, Medium, MediumError, MediumMode, ParticleEnsemble, PopulationPair,
};

/// Errors from track construction, writing, and readback.
#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("train spans {train} half-cells but the track has {track}")]
    LengthMismatch { train: usize, track: usize },
    #[error("words must share one width, got {a} and {b} bits")]
    WordWidthMismatch { a: usize, b: usize },
    #[error(
        "first pass amplitude {amplitude} cannot erase the track; it must reach {required}"
    )]
    WeakErase { amplitude: f64, required: f64 },
    #[error("track was loaded from an image and is read-only")]
    ReadOnlyTrack,
    #[error("{count} half-cells do not fit guard {guard}: expected n*(1+guard)+2")]
    BadCellCount { count: usize, guard: usize },
    #[error("pulse width pw50 must be positive and finite, got {0}")]
    BadPulseWidth(f64),
    #[error("samples per half-cell must be at least 4, got {0}")]
    TooFewSamples(usize),
    #[error("magnetization {value} at half-cell {index} outside [-1, 1]")]
    MagnetizationOutOfRange { index: usize, value: f64 },
    #[error(transparent)]
    Medium(#[from] MediumError),
    #[error(transparent)]
    Encode(#[from] crate::encode::EncodeError),
}

/// One completed write pass, for provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassRecord {
    pub amplitude: f64,
    pub polarity: Polarity,
}

/// Amplitude and polarity for one pass of [`run_superimposition`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassSpec {
    pub polarity: Polarity,
    pub amplitude: f64,
}

/// Per-half-cell state storage, depending on how the track was built.
#[derive(Debug, Clone)]
enum CellBank {
    /// Hard/soft population signs with their switching amplitudes.
    TwoPopulation {
        cells: Vec<PopulationPair>,
        hard_threshold: f64,
        soft_threshold: f64,
    },
    /// A sampled particle ensemble per half-cell.
    Ensemble(Vec<ParticleEnsemble>),
    /// Magnetizations restored from a saved image; population detail is
    /// gone, so the bank cannot be written again.
    Frozen(Vec<f64>),
}

/// A row of half-cells plus the geometry needed to map bits onto them.
#[derive(Debug, Clone)]
pub struct Track {
    bank: CellBank,
    guard: usize,
    pass_log: Vec<PassRecord>,
}

impl Track {
    /// A fresh track over `medium`, sized for `bit_count` bits at guard
    /// `guard` and saturated in the negative direction.
    pub fn new(medium: &Medium, bit_count: usize, guard: usize) -> Result<Self, ChannelError> {
        if guard == 0 {
            return Err(crate::encode::EncodeError::GuardTooSmall(guard).into());
        }
        if bit_count == 0 {
            return Err(crate::encode::EncodeError::EmptyWord.into());
        }
        let count = bit_count * (1 + guard) + 2;
        let bank = match medium {
            Medium::Longitudinal(long) => match long.mode() {
                MediumMode::Analytic => CellBank::TwoPopulation {
                    cells: vec![PopulationPair { hard: -1, soft: -1 }; count],
                    hard_threshold: 1.0,
                    soft_threshold: balanced_field(),
                },
                MediumMode::MonteCarlo {
                    particles_per_cell,
                    seed,
                } => {
                    let mut cells = Vec::with_capacity(count);
                    for i in 0..count {
                        let mut ens =
                            ParticleEnsemble::sample(particles_per_cell, seed.wrapping_add(i as u64))?;
                        ens.apply_field(1.0, -1)?;
                        cells.push(ens);
                    }
                    CellBank::Ensemble(cells)
                }
            },
            Medium::Perpendicular(perp) => CellBank::TwoPopulation {
                cells: vec![PopulationPair { hard: -1, soft: -1 }; count],
                hard_threshold: perp.hk1(),
                soft_threshold: perp.hk2(),
            },
        };
        Ok(Self {
            bank,
            guard,
            pass_log: Vec::new(),
        })
    }

    /// Rebuild a track from stored magnetizations. The populations behind
    /// each value are not recoverable, so the result is read-only.
    pub fn from_magnetizations(
        cells: Vec<f64>,
        guard: usize,
        pass_log: Vec<PassRecord>,
    ) -> Result<Self, ChannelError> {
        if guard == 0 {
            return Err(crate::encode::EncodeError::GuardTooSmall(guard).into());
        }
        let count = cells.len();
        if count < 2 + (1 + guard) || !(count - 2).is_multiple_of(1 + guard) {
            return Err(ChannelError::BadCellCount { count, guard });
        }
        for (index, value) in cells.iter().enumerate() {
            if !value.is_finite() || value.abs() > 1.0 {
                return Err(ChannelError::MagnetizationOutOfRange {
                    index,
                    value: *value,
                });
            }
        }
        Ok(Self {
            bank: CellBank::Frozen(cells),
            guard,
            pass_log,
        })
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn half_cell_count(&self) -> usize {
        match &self.bank {
            CellBank::TwoPopulation { cells, .. } => cells.len(),
            CellBank::Ensemble(cells) => cells.len(),
            CellBank::Frozen(cells) => cells.len(),
        }
    }

    pub fn bit_count(&self) -> usize {
        (self.half_cell_count() - 2) / (1 + self.guard)
    }

    pub fn pass_log(&self) -> &[PassRecord] {
        self.pass_log.as_slice()
    }

    /// Whether the track still holds writable population state.
    pub fn is_writable(&self) -> bool {
        !matches!(self.bank, CellBank::Frozen(_))
    }

    /// Magnetization of every half-cell, in [-1, 1].
    pub fn magnetizations(&self) -> Vec<f64> {
        match &self.bank {
            CellBank::TwoPopulation { cells, .. } => {
                cells.iter().map(PopulationPair::magnetization).collect()
            }
            CellBank::Ensemble(cells) => {
                cells.iter().map(ParticleEnsemble::net_magnetization).collect()
            }
            CellBank::Frozen(cells) => cells.clone(),
        }
    }

    /// Apply one pulse train across the whole track. The train must span
    /// exactly the track's half-cells; tracks restored from images reject
    /// all writes.
    pub fn write_pass(&mut self, train: &PulseTrain) -> Result<(), ChannelError> {
        let track_len = self.half_cell_count();
        if train.half_cell_count() != track_len {
            return Err(ChannelError::LengthMismatch {
                train: train.half_cell_count(),
                track: track_len,
            });
        }
        let h = train.amplitude();
        match &mut self.bank {
            CellBank::TwoPopulation {
                cells,
                hard_threshold,
                soft_threshold,
            } => {
                for (cell, &direction) in cells.iter_mut().zip(train.signs()) {
                    if h >= *hard_threshold {
                        cell.hard = direction;
                    }
                    if h >= *soft_threshold {
                        cell.soft = direction;
                    }
                }
            }
            CellBank::Ensemble(cells) => {
                for (ens, &direction) in cells.iter_mut().zip(train.signs()) {
                    ens.apply_field(h, direction)?;
                }
            }
            CellBank::Frozen(_) => return Err(ChannelError::ReadOnlyTrack),
        }
        self.pass_log.push(PassRecord {
            amplitude: h,
            polarity: train.polarity(),
        });
        Ok(())
    }

    /// Ideal differentiating readback: transition `i` is the magnetization
    /// step from half-cell `i` to half-cell `i + 1`.
    pub fn read_ideal(&self) -> ReadbackSignal {
        let m = self.magnetizations();
        let transitions = m.windows(2).map(|pair| pair[1] - pair[0]).collect();
        ReadbackSignal {
            transitions,
            waveform: None,
        }
    }

    /// Readback with Lorentzian pulse shaping.
    ///
    /// Each nonzero transition `i` contributes a unit-height Lorentzian
    /// centred on its boundary position `i + 1` (in half-cell units) with
    /// half-amplitude width `pw50`, scaled by the transition amplitude; the
    /// waveform is sampled `samples_per_half_cell` times per half-cell from
    /// one end of the track to the other. Peak heights therefore stay
    /// directly comparable to the ideal transition amplitudes.
    pub fn read_shaped(
        &self,
        pw50: f64,
        samples_per_half_cell: usize,
    ) -> Result<ReadbackSignal, ChannelError> {
        if !pw50.is_finite() || pw50 <= 0.0 {
            return Err(ChannelError::BadPulseWidth(pw50));
        }
        if samples_per_half_cell < 4 {
            return Err(ChannelError::TooFewSamples(samples_per_half_cell));
        }
        let ideal = self.read_ideal();
        let active: Vec<(f64, f64)> = ideal
            .transitions
            .iter()
            .enumerate()
            .filter(|(_, amp)| **amp != 0.0)
            .map(|(i, amp)| ((i + 1) as f64, *amp))
            .collect();
        let steps = self.half_cell_count() * samples_per_half_cell;
        let dx = 1.0 / samples_per_half_cell as f64;
        let waveform = (0..=steps)
            .map(|j| {
                let x = j as f64 * dx;
                let v = active
                    .iter()
                    .map(|(center, amp)| {
                        let u = 2.0 * (x - center) / pw50;
                        amp / (1.0 + u * u)
                    })
                    .sum();
                (x, v)
            })
            .collect();
        Ok(ReadbackSignal {
            transitions: ideal.transitions,
            waveform: Some(waveform),
        })
    }
}

/// What the read head delivers: per-boundary transition amplitudes, plus the
/// sampled waveform when pulse shaping was requested.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadbackSignal {
    /// `transitions[i]` is the magnetization change across the boundary
    /// between half-cells `i` and `i + 1`.
    pub transitions: Vec<f64>,
    /// `(position, voltage)` samples in half-cell units, if shaped.
    pub waveform: Option<Vec<(f64, f64)>>,
}

/// Write two same-width words onto a fresh track — the first pass at an
/// erasing amplitude, the second superimposed on top — then read it back.
///
/// The first pass must be strong enough to rewrite every half-cell
/// (otherwise stale state would leak through); the second is typically a
/// partial-amplitude pass so that agreements saturate and disagreements
/// cancel to the intermediate state.
pub fn run_superimposition(
    medium: &Medium,
    word_a: &Word,
    pass_a: PassSpec,
    word_b: &Word,
    pass_b: PassSpec,
    guard: usize,
) -> Result<(Track, ReadbackSignal), ChannelError> {
    if word_a.bit_count() != word_b.bit_count() {
        return Err(ChannelError::WordWidthMismatch {
            a: word_a.bit_count(),
            b: word_b.bit_count(),
        });
    }
    let required = medium.full_write_amplitude();
    if pass_a.amplitude < required {
        return Err(ChannelError::WeakErase {
            amplitude: pass_a.amplitude,
            required,
        });
    }
    let mut track = Track::new(medium, word_a.bit_count(), guard)?;
    let train_a = to_pulse_train(word_a, pass_a.polarity, guard, pass_a.amplitude)?;
    track.write_pass(&train_a)?;
    let train_b = to_pulse_train(word_b, pass_b.polarity, guard, pass_b.amplitude)?;
    track.write_pass(&train_b)?;
    let signal = track.read_ideal();
    Ok((track, signal))
}
