//! Simulation of a spinning magnetic track used as a logic unit.
//!
//! Two binary words are written onto one track — the first at full field
//! strength, the second at a partial strength chosen so that opposed
//! half-cells cancel — leaving a three-state magnetization profile. Reading
//! the track back and sorting the boundary peaks by size recovers OR, AND,
//! and XOR of the two words from that single profile; NOT, the composed
//! gates, and a carry-iteration adder follow from there.
//!
//! The crate is layered bottom-up:
//!
//! - [`medium`]: particle ensembles and switching rules (longitudinal and
//!   perpendicular).
//! - [`encode`]: binary words, the doubled pulse representation, and window
//!   geometry.
//! - [`channel`]: tracks, write passes, and ideal or pulse-shaped readback.
//! - [`detector`]: peak classification and word decoding.
//! - [`logic`]: the gate processor and the adder.
//! - [`drive`]: rotation costs, throughput, programs, and track images.

pub mod channel;
pub mod detector;
pub mod drive;
pub mod encode;
pub mod logic;
pub mod medium;

pub use channel::{run_superimposition, PassSpec, ReadbackSignal, Track};
pub use detector::{DetectorConfig, DetectorMode, PeakClass, PeakEvent};
pub use drive::{Drive, DriveGeometry, HeadKind};
pub use encode::{Polarity, Word};
pub use logic::{GateKind, GateSpec, Processor};
pub use medium::{balanced_field, Medium, MediumMode};
