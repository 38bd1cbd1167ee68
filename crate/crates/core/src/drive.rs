//! Drive-level concerns: rotation costs, throughput, program execution, and
//! track persistence.
//!
//! Every gate reduces to elementary write/read operations, and each
//! elementary operation costs a fixed number of disk rotations: three with a
//! standard single head (write A, write B, read), one with a tandem
//! write/write/read head assembly that does all three in a single pass.
//! Tracks can be saved to and restored from a plain-text image; restored
//! tracks keep their exact cell values but lose the population detail needed
//! to accept further writes.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::channel::{ChannelError, PassRecord, Track};
use crate::encode::{Polarity, Word};
use crate::logic::{AddOutcome, GateSpec, LogicError, Processor};

/// Current track-image format version.
pub const IMAGE_VERSION: u32 = 1;

const IMAGE_MAGIC: &str = "MAGTRACK";

/// Errors from drive configuration, program execution, and persistence.
#[derive(Debug, Error)]
pub enum DriveError {
    #[error("revolutions per second must be positive and finite, got {0}")]
    BadRotationRate(f64),
    #[error("bits per track must be at least 1")]
    BadTrackCapacity,
    #[error("program step {index} failed")]
    StepFailed {
        index: usize,
        #[source]
        source: LogicError,
    },
    #[error("track image line {line}: {reason}")]
    MalformedImage { line: usize, reason: String },
    #[error("track image version {0} is not supported (expected {IMAGE_VERSION})")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Read/write head arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeadKind {
    /// One head: each elementary operation takes separate write, write, and
    /// read rotations.
    #[default]
    Standard,
    /// Two write heads and a read head in tandem: one rotation does all
    /// three jobs.
    Tandem,
}

impl HeadKind {
    /// Rotations one elementary write/write/read operation costs.
    pub fn base_rotations(self) -> u64 {
        match self {
            HeadKind::Standard => 3,
            HeadKind::Tandem => 1,
        }
    }
}

/// Rotations a gate costs: composed gates chain two elementary operations.
pub fn rotations_for_op(head: HeadKind, composed: bool) -> u64 {
    head.base_rotations() * if composed { 2 } else { 1 }
}

/// Mechanical parameters that set the logic throughput.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveGeometry {
    pub revolutions_per_second: f64,
    pub bits_per_track: u64,
    pub head: HeadKind,
}

impl DriveGeometry {
    pub fn new(
        revolutions_per_second: f64,
        bits_per_track: u64,
        head: HeadKind,
    ) -> Result<Self, DriveError> {
        if !revolutions_per_second.is_finite() || revolutions_per_second <= 0.0 {
            return Err(DriveError::BadRotationRate(revolutions_per_second));
        }
        if bits_per_track == 0 {
            return Err(DriveError::BadTrackCapacity);
        }
        Ok(Self {
            revolutions_per_second,
            bits_per_track,
            head,
        })
    }
}

impl Default for DriveGeometry {
    fn default() -> Self {
        Self {
            revolutions_per_second: 100.0,
            bits_per_track: 1_000_000,
            head: HeadKind::Standard,
        }
    }
}

/// Sustained elementary-gate throughput in bit-operations per second: every
/// elementary operation processes a full track of bits and takes the head's
/// base rotation count.
pub fn throughput_bits_per_second(geometry: &DriveGeometry) -> f64 {
    geometry.revolutions_per_second * geometry.bits_per_track as f64
        / geometry.head.base_rotations() as f64
}

/// Accumulated mechanical cost of a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostLedger {
    /// Disk rotations spent.
    pub rotations: u64,
    /// Elementary write/write/read operations executed.
    pub operations: u64,
}

impl CostLedger {
    fn charge(&mut self, head: HeadKind, elementary_ops: u64) {
        self.operations += elementary_ops;
        self.rotations += head.base_rotations() * elementary_ops;
    }
}

/// One instruction of a drive program.
#[derive(Debug, Clone, PartialEq)]
pub enum ProgramStep {
    Gate(GateSpec),
    Add(Word, Word),
}

/// Results of a completed program: one output word per step, plus costs.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgramOutcome {
    pub results: Vec<Word>,
    pub cost: CostLedger,
}

/// A drive: mechanical geometry plus the processor its head writes with.
#[derive(Debug, Clone, PartialEq)]
pub struct Drive {
    geometry: DriveGeometry,
    processor: Processor,
}

impl Drive {
    pub fn new(geometry: DriveGeometry, processor: Processor) -> Self {
        Self {
            geometry,
            processor,
        }
    }

    pub fn geometry(&self) -> &DriveGeometry {
        &self.geometry
    }

    pub fn processor(&self) -> &Processor {
        &self.processor
    }

    /// Run the steps in order, collecting one result word per step and the
    /// total rotation bill. The first failing step aborts the program and
    /// reports its index.
    pub fn run_program(&self, steps: &[ProgramStep]) -> Result<ProgramOutcome, DriveError> {
        let mut results = Vec::with_capacity(steps.len());
        let mut cost = CostLedger::default();
        for (index, step) in steps.iter().enumerate() {
            match step {
                ProgramStep::Gate(spec) => {
                    let word = self
                        .processor
                        .run(spec)
                        .map_err(|source| DriveError::StepFailed { index, source })?;
                    cost.charge(self.geometry.head, spec.elementary_ops());
                    results.push(word);
                }
                ProgramStep::Add(a, b) => {
                    let AddOutcome {
                        sum,
                        elementary_ops,
                        ..
                    } = self
                        .processor
                        .add(a, b)
                        .map_err(|source| DriveError::StepFailed { index, source })?;
                    cost.charge(self.geometry.head, elementary_ops);
                    results.push(sum);
                }
            }
        }
        Ok(ProgramOutcome { results, cost })
    }
}

impl Default for Drive {
    fn default() -> Self {
        Self::new(DriveGeometry::default(), Processor::default())
    }
}

/// Serialize a track as a plain-text image.
///
/// The layout is line-oriented: the magic string, a format version, the
/// guard length, the half-cell count, one magnetization per line (shortest
/// decimal form, so values round-trip exactly), then the pass log. Example:
///
/// ```text
/// MAGTRACK
/// version 1
/// guard 1
/// cells 10
/// -1
/// 1
/// ...
/// passes 2
/// pass 1 positive
/// pass 0.8660254037844386 positive
/// ```
pub fn write_image<W: Write>(track: &Track, mut out: W) -> Result<(), DriveError> {
    writeln!(out, "{IMAGE_MAGIC}")?;
    writeln!(out, "version {IMAGE_VERSION}")?;
    writeln!(out, "guard {}", track.guard())?;
    let cells = track.magnetizations();
    writeln!(out, "cells {}", cells.len())?;
    for value in &cells {
        writeln!(out, "{value}")?;
    }
    writeln!(out, "passes {}", track.pass_log().len())?;
    for pass in track.pass_log() {
        writeln!(out, "pass {} {}", pass.amplitude, pass.polarity)?;
    }
    Ok(())
}

/// Restore a track from an image produced by [`write_image`]. The result is
/// read-only: the image stores net magnetizations, not population state.
pub fn read_image<R: Read>(input: R) -> Result<Track, DriveError> {
    let mut lines = BufReader::new(input).lines();
    let mut line_no = 0usize;
    let mut next_line = |expect: &str| -> Result<String, DriveError> {
        line_no += 1;
        match lines.next() {
            Some(Ok(line)) => Ok(line),
            Some(Err(e)) => Err(DriveError::Io(e)),
            None => Err(DriveError::MalformedImage {
                line: line_no,
                reason: format!("unexpected end of image; expected {expect}"),
            }),
        }
    };

    let magic = next_line("magic string")?;
    if magic != IMAGE_MAGIC {
        return Err(DriveError::MalformedImage {
            line: 1,
            reason: format!("bad magic string {magic:?}"),
        });
    }

    let version = parse_field(&next_line("version")?, "version", 2)?;
    let version: u32 = version.parse().map_err(|_| DriveError::MalformedImage {
        line: 2,
        reason: format!("unreadable version {version:?}"),
    })?;
    if version != IMAGE_VERSION {
        return Err(DriveError::UnsupportedVersion(version));
    }

    let guard_text = parse_field(&next_line("guard")?, "guard", 3)?;
    let guard: usize = guard_text.parse().map_err(|_| DriveError::MalformedImage {
        line: 3,
        reason: format!("unreadable guard {guard_text:?}"),
    })?;

    let count_text = parse_field(&next_line("cells")?, "cells", 4)?;
    let count: usize = count_text.parse().map_err(|_| DriveError::MalformedImage {
        line: 4,
        reason: format!("unreadable cell count {count_text:?}"),
    })?;

    let mut cells = Vec::with_capacity(count);
    for i in 0..count {
        let line = 5 + i;
        let text = next_line("a cell value")?;
        let value: f64 = text.parse().map_err(|_| DriveError::MalformedImage {
            line,
            reason: format!("unreadable magnetization {text:?}"),
        })?;
        cells.push(value);
    }

    let passes_line = 5 + count;
    let pass_count_text = parse_field(&next_line("passes")?, "passes", passes_line)?;
    let pass_count: usize = pass_count_text
        .parse()
        .map_err(|_| DriveError::MalformedImage {
            line: passes_line,
            reason: format!("unreadable pass count {pass_count_text:?}"),
        })?;

    let mut pass_log = Vec::with_capacity(pass_count);
    for i in 0..pass_count {
        let line = passes_line + 1 + i;
        let text = next_line("a pass record")?;
        let mut parts = text.split_whitespace();
        let (tag, amp, pol) = (parts.next(), parts.next(), parts.next());
        let record = match (tag, amp, pol, parts.next()) {
            (Some("pass"), Some(amp), Some(pol), None) => {
                let amplitude: f64 = amp.parse().map_err(|_| DriveError::MalformedImage {
                    line,
                    reason: format!("unreadable pass amplitude {amp:?}"),
                })?;
                let polarity: Polarity =
                    pol.parse().map_err(|_| DriveError::MalformedImage {
                        line,
                        reason: format!("unreadable pass polarity {pol:?}"),
                    })?;
                PassRecord {
                    amplitude,
                    polarity,
                }
            }
            _ => {
                return Err(DriveError::MalformedImage {
                    line,
                    reason: format!("unreadable pass record {text:?}"),
                });
            }
        };
        pass_log.push(record);
    }

    if let Some(extra) = lines.next() {
        let extra = extra?;
        if !extra.trim().is_empty() {
            return Err(DriveError::MalformedImage {
                line: passes_line + pass_count + 1,
                reason: format!("trailing content {extra:?}"),
            });
        }
    }

    Ok(Track::from_magnetizations(cells, guard, pass_log)?)
}

fn parse_field(line: &str, key: &str, line_no: usize) -> Result<String, DriveError> {
    match line.split_once(' ') {
        Some((k, v)) if k == key => Ok(v.trim().to_string()),
        _ => Err(DriveError::MalformedImage {
            line: line_no,
            reason: format!("expected \"{key} <value>\", got {line:?}"),
        }),
    }
}

/// Write a track image to `path`.
pub fn save_track<P: AsRef<Path>>(track: &Track, path: P) -> Result<(), DriveError> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    write_image(track, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Load a (read-only) track image from `path`.
pub fn load_track<P: AsRef<Path>>(path: P) -> Result<Track, DriveError> {
    let file = File::open(path)?;
    read_image(file)
}
