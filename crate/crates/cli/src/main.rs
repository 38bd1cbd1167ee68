//! Command-line front end: gates, addition, remanence sweeps, throughput
//! figures, track images, and small programs, all through the library's
//! write/read pipeline.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use magtrack::channel::Track;
use magtrack::detector::{detect_peaks, DetectorConfig, DetectorMode, PeakClass};
use magtrack::drive::{
    load_track, rotations_for_op, save_track, throughput_bits_per_second, Drive, DriveGeometry,
    HeadKind, ProgramStep,
};
use magtrack::encode::{Polarity, Word};
use magtrack::logic::{GateKind, GateSpec, Processor};
use magtrack::medium::{
    balanced_field, remanence_after_opposed, LongitudinalMedium, Medium, MediumMode,
    ParticleEnsemble, PerpendicularMedium,
};

#[derive(Parser)]
#[command(
    name = "magtrack",
    about = "Boolean logic on a simulated magnetic track",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one gate over one or two binary words.
    Gate {
        /// or, and, xor, xorneg, not, nand, nor, xnor
        kind: String,
        /// First operand, e.g. 1010
        a: String,
        /// Second operand (omit for `not`)
        b: Option<String>,
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        detector: DetectorArgs,
        /// Also print the track profile, detected peaks, and rotation cost
        #[arg(long)]
        verbose: bool,
        #[arg(long, value_enum, default_value_t)]
        head: HeadArg,
    },
    /// Add two binary words by repeated XOR/AND rounds.
    Add {
        a: String,
        b: String,
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        detector: DetectorArgs,
        /// Also print the rotation cost
        #[arg(long)]
        verbose: bool,
        #[arg(long, value_enum, default_value_t)]
        head: HeadArg,
    },
    /// Sweep the opposed-pass field and compare sampled remanence with the
    /// closed form.
    PhysicsSweep {
        /// Comma-separated normalized field values (default: 0 to 1 in
        /// steps of 0.1 plus the balanced point)
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1_000_000)]
        particles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the sustained logic throughput of a drive.
    Throughput {
        /// Platter revolutions per second
        #[arg(long, default_value_t = 100.0)]
        rps: f64,
        /// Bits stored on one track
        #[arg(long, default_value_t = 1_000_000)]
        bits: u64,
        #[arg(long, value_enum, default_value_t)]
        head: HeadArg,
        /// Also print the unrounded value
        #[arg(long)]
        exact: bool,
    },
    /// Save, inspect, or reload track images.
    Track {
        #[command(subcommand)]
        action: TrackAction,
    },
    /// Run a program file: one `<gate> <a> [b]` or `add <a> <b>` per line.
    Run {
        file: PathBuf,
        #[command(flatten)]
        physics: PhysicsArgs,
        #[command(flatten)]
        detector: DetectorArgs,
        #[arg(long, value_enum, default_value_t)]
        head: HeadArg,
    },
}

#[derive(Subcommand)]
enum TrackAction {
    /// Superimpose two words and write the track image to a file.
    Save {
        path: PathBuf,
        a: String,
        b: String,
        /// Write the second word with reversed polarity
        #[arg(long)]
        negative_b: bool,
        #[command(flatten)]
        physics: PhysicsArgs,
    },
    /// Parse a track image and print its geometry.
    Load { path: PathBuf },
    /// Print a track image's profile, peaks, and decoded words.
    Show {
        path: PathBuf,
        #[command(flatten)]
        detector: DetectorArgs,
    },
}

#[derive(Args)]
struct PhysicsArgs {
    /// Baseline half-cells after each pulse slot
    #[arg(long, default_value_t = 1)]
    guard: usize,
    #[arg(long, value_enum, default_value_t)]
    medium: MediumArg,
    /// Hard-population switching field (perpendicular medium)
    #[arg(long, default_value_t = 1.0)]
    hk1: f64,
    /// Soft-population switching field (perpendicular medium)
    #[arg(long, default_value_t = 0.75)]
    hk2: f64,
    /// Sample explicit particle ensembles instead of the exact two-population model
    #[arg(long)]
    mc: bool,
    /// Particles per half-cell in sampled mode
    #[arg(long, default_value_t = 10_000)]
    particles: usize,
    /// Base seed for sampled mode (each half-cell offsets it by its index)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DetectorArgs {
    /// Smallest peak magnitude that counts at all
    #[arg(long, default_value_t = 0.5)]
    theta_low: f64,
    /// Smallest peak magnitude classified as a full swing
    #[arg(long, default_value_t = 1.5)]
    theta_high: f64,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum MediumArg {
    #[default]
    Longitudinal,
    Perpendicular,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum HeadArg {
    #[default]
    Standard,
    Tandem,
}

impl From<HeadArg> for HeadKind {
    fn from(head: HeadArg) -> Self {
        match head {
            HeadArg::Standard => HeadKind::Standard,
            HeadArg::Tandem => HeadKind::Tandem,
        }
    }
}

impl PhysicsArgs {
    fn medium(&self) -> Result<Medium> {
        match self.medium {
            MediumArg::Longitudinal => {
                let mode = if self.mc {
                    MediumMode::MonteCarlo {
                        particles_per_cell: self.particles,
                        seed: self.seed,
                    }
                } else {
                    MediumMode::Analytic
                };
                Ok(Medium::Longitudinal(LongitudinalMedium::new(1.0, mode)?))
            }
            MediumArg::Perpendicular => {
                if self.mc {
                    bail!("sampled mode applies to the longitudinal medium only");
                }
                Ok(Medium::Perpendicular(PerpendicularMedium::new(
                    self.hk1, self.hk2,
                )?))
            }
        }
    }

    fn processor(&self, detector: &DetectorArgs) -> Result<Processor> {
        let config = DetectorConfig::new(detector.theta_low, detector.theta_high, DetectorMode::Any)?;
        Ok(Processor::new(self.medium()?, self.guard)?.with_detector(config))
    }
}

fn parse_word(text: &str) -> Result<Word> {
    text.parse::<Word>()
        .with_context(|| format!("cannot parse word {text:?}"))
}

fn class_name(class: PeakClass) -> &'static str {
    match class {
        PeakClass::Medium => "medium",
        PeakClass::Large => "large",
    }
}

fn render_profile(track: &Track, out: &mut String) {
    out.push_str("profile:\n");
    for (i, m) in track.magnetizations().iter().enumerate() {
        let _ = writeln!(out, "{i} {m}");
    }
}

fn render_peaks(track: &Track, config: &DetectorConfig, out: &mut String) {
    out.push_str("peaks:\n");
    let events = detect_peaks(&track.read_ideal(), config);
    for event in events {
        let _ = writeln!(
            out,
            "{} {} {}",
            event.boundary_index,
            event.amplitude,
            class_name(event.class)
        );
    }
}

fn cmd_gate(
    kind: &str,
    a: &str,
    b: Option<&str>,
    physics: &PhysicsArgs,
    detector: &DetectorArgs,
    verbose: bool,
    head: HeadKind,
) -> Result<String> {
    let kind = GateKind::parse(kind)?;
    let a = parse_word(a)?;
    let spec = match (kind.is_unary(), b) {
        (true, None) => GateSpec::unary(kind, a.clone())?,
        (false, Some(b)) => GateSpec::binary(kind, a.clone(), parse_word(b)?)?,
        (true, Some(_)) => bail!("gate {} takes one operand", kind.name()),
        (false, None) => bail!("gate {} takes two operands", kind.name()),
    };
    let processor = physics.processor(detector)?;
    let result = processor.run(&spec)?;

    let mut out = format!("{result}\n");
    if verbose {
        // Re-run the underlying superimposition to show what the head saw.
        // Composed gates chain two; the profile shown is the first stage's.
        let (b_for_track, polarity) = match spec.kind {
            GateKind::XorNeg => (spec.b.clone().expect("binary"), Polarity::Negative),
            GateKind::Not => (Word::ones(a.bit_count())?, Polarity::Positive),
            _ => (spec.b.clone().expect("binary"), Polarity::Positive),
        };
        let (track, _) = processor.superimpose(&a, &b_for_track, polarity)?;
        render_profile(&track, &mut out);
        render_peaks(&track, processor.detector(), &mut out);
        let _ = writeln!(out, "rotations: {}", rotations_for_op(head, kind.is_composed()));
    }
    Ok(out)
}

fn cmd_add(
    a: &str,
    b: &str,
    physics: &PhysicsArgs,
    detector: &DetectorArgs,
    verbose: bool,
    head: HeadKind,
) -> Result<String> {
    let a = parse_word(a)?;
    let b = parse_word(b)?;
    let processor = physics.processor(detector)?;
    let outcome = processor.add(&a, &b)?;
    let mut out = format!("{}\niterations: {}\n", outcome.sum, outcome.iterations);
    if verbose {
        let _ = writeln!(
            out,
            "rotations: {}",
            head.base_rotations() * outcome.elementary_ops
        );
    }
    Ok(out)
}

fn cmd_physics_sweep(grid: Option<Vec<f64>>, particles: usize, seed: u64) -> Result<String> {
    let grid = match grid {
        Some(g) if !g.is_empty() => g,
        _ => {
            // 0 to 1 in steps of 0.1, with the balanced point inserted where
            // it belongs so the zero crossing shows up exactly.
            let mut g: Vec<f64> = (0..=10).map(|i| f64::from(i) / 10.0).collect();
            g.push(balanced_field());
            g.sort_by(|x, y| x.partial_cmp(y).expect("grid values are finite"));
            g
        }
    };
    if let Some(bad) = grid.iter().find(|h| !(0.0..=1.0).contains(*h)) {
        bail!("grid value {bad} is outside [0, 1]");
    }

    let saturated = {
        let mut e = ParticleEnsemble::sample(particles, seed)?;
        e.apply_field(1.0, 1)?;
        e
    };

    let mut rows = Vec::with_capacity(grid.len());
    for &h in &grid {
        let analytic = remanence_after_opposed(h)?;
        let mut ens = saturated.clone();
        ens.apply_field(h, -1)?;
        let sampled = ens.net_magnetization();
        rows.push((h, analytic, sampled));
    }

    // Flag the grid point nearest the zero crossing of the closed form.
    let crossing = rows
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            a.1.abs()
                .partial_cmp(&b.1.abs())
                .expect("remanence values are finite")
        })
        .map(|(i, _)| i);

    let mut out = String::from("h analytic sampled abs_error\n");
    for (i, (h, analytic, sampled)) in rows.iter().enumerate() {
        let _ = write!(
            out,
            "{h} {analytic:.3} {sampled:.3} {:.6}",
            (analytic - sampled).abs()
        );
        if Some(i) == crossing {
            out.push_str(" <- zero crossing");
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_throughput(rps: f64, bits: u64, head: HeadKind, exact: bool) -> Result<String> {
    let geometry = DriveGeometry::new(rps, bits, head)?;
    let value = throughput_bits_per_second(&geometry);
    let mut out = format!("{}\n", value.floor() as u128);
    if exact {
        let _ = writeln!(out, "exact: {value}");
    }
    Ok(out)
}

fn describe(track: &Track) -> String {
    format!(
        "{} half-cells, guard {}, {} passes, {} bits",
        track.half_cell_count(),
        track.guard(),
        track.pass_log().len(),
        track.bit_count()
    )
}

fn cmd_track_save(
    path: &PathBuf,
    a: &str,
    b: &str,
    negative_b: bool,
    physics: &PhysicsArgs,
) -> Result<String> {
    let a = parse_word(a)?;
    let b = parse_word(b)?;
    let processor = physics.processor(&DetectorArgs {
        theta_low: 0.5,
        theta_high: 1.5,
    })?;
    let polarity = if negative_b {
        Polarity::Negative
    } else {
        Polarity::Positive
    };
    let (track, _) = processor.superimpose(&a, &b, polarity)?;
    save_track(&track, path).with_context(|| format!("cannot save {}", path.display()))?;
    Ok(format!("saved {}: {}\n", path.display(), describe(&track)))
}

fn cmd_track_load(path: &PathBuf) -> Result<String> {
    let track = load_track(path).with_context(|| format!("cannot load {}", path.display()))?;
    Ok(format!("{}: {}\n", path.display(), describe(&track)))
}

fn cmd_track_show(path: &PathBuf, detector: &DetectorArgs) -> Result<String> {
    let track = load_track(path).with_context(|| format!("cannot load {}", path.display()))?;
    let config = DetectorConfig::new(detector.theta_low, detector.theta_high, DetectorMode::Any)?;

    let mut out = format!("{}\n", describe(&track));
    render_profile(&track, &mut out);
    render_peaks(&track, &config, &mut out);
    let signal = track.read_ideal();
    for (label, mode) in [
        ("any", DetectorMode::Any),
        ("large", DetectorMode::LargeOnly),
        ("medium", DetectorMode::MediumOnly),
    ] {
        let decoded = magtrack::detector::decode_signal(
            &signal,
            track.bit_count(),
            track.guard(),
            &config.with_mode(mode),
        );
        match decoded {
            Ok(word) => {
                let _ = writeln!(out, "decode {label}: {word}");
            }
            Err(e) => {
                let _ = writeln!(out, "decode {label}: undecodable ({e})");
            }
        }
    }
    Ok(out)
}

fn parse_program(text: &str) -> Result<Vec<ProgramStep>> {
    let mut steps = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let op = parts.next().expect("non-empty line has a first token");
        let operands: Vec<&str> = parts.collect();
        let step = (|| -> Result<ProgramStep> {
            if op == "add" {
                let [a, b] = operands.as_slice() else {
                    bail!("add takes two operands");
                };
                return Ok(ProgramStep::Add(parse_word(a)?, parse_word(b)?));
            }
            let kind = GateKind::parse(op)?;
            let spec = match (kind.is_unary(), operands.as_slice()) {
                (true, [a]) => GateSpec::unary(kind, parse_word(a)?)?,
                (false, [a, b]) => GateSpec::binary(kind, parse_word(a)?, parse_word(b)?)?,
                (true, _) => bail!("gate {} takes one operand", kind.name()),
                (false, _) => bail!("gate {} takes two operands", kind.name()),
            };
            Ok(ProgramStep::Gate(spec))
        })()
        .with_context(|| format!("program line {}: {line:?}", line_no + 1))?;
        steps.push(step);
    }
    Ok(steps)
}

fn cmd_run(
    file: &PathBuf,
    physics: &PhysicsArgs,
    detector: &DetectorArgs,
    head: HeadKind,
) -> Result<String> {
    let text = std::fs::read_to_string(file)
        .with_context(|| format!("cannot read program {}", file.display()))?;
    let steps = parse_program(&text)?;
    let geometry = DriveGeometry {
        head,
        ..DriveGeometry::default()
    };
    let drive = Drive::new(geometry, physics.processor(detector)?);
    let outcome = drive.run_program(&steps)?;
    let mut out = String::new();
    for word in &outcome.results {
        let _ = writeln!(out, "{word}");
    }
    let _ = writeln!(out, "rotations: {}", outcome.cost.rotations);
    let _ = writeln!(out, "operations: {}", outcome.cost.operations);
    Ok(out)
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Gate {
            kind,
            a,
            b,
            physics,
            detector,
            verbose,
            head,
        } => cmd_gate(
            &kind,
            &a,
            b.as_deref(),
            &physics,
            &detector,
            verbose,
            head.into(),
        ),
        Command::Add {
            a,
            b,
            physics,
            detector,
            verbose,
            head,
        } => cmd_add(&a, &b, &physics, &detector, verbose, head.into()),
        Command::PhysicsSweep {
            grid,
            particles,
            seed,
        } => cmd_physics_sweep(grid, particles, seed),
        Command::Throughput {
            rps,
            bits,
            head,
            exact,
        } => cmd_throughput(rps, bits, head.into(), exact),
        Command::Track { action } => match action {
            TrackAction::Save {
                path,
                a,
                b,
                negative_b,
                physics,
            } => cmd_track_save(&path, &a, &b, negative_b, &physics),
            TrackAction::Load { path } => cmd_track_load(&path),
            TrackAction::Show { path, detector } => cmd_track_show(&path, &detector),
        },
        Command::Run {
            file,
            physics,
            detector,
            head,
        } => cmd_run(&file, &physics, &detector, head.into()),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => print!("{output}"),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
