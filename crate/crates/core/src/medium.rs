//! Recording-medium models: random-axis particle ensembles for longitudinal
//! media and a two-population model for perpendicular media.
//!
//! A longitudinal medium is a collection of single-domain particles whose
//! easy axes are spread over (-pi/2, pi/2] relative to the track direction.
//! A particle opposed to an applied field of normalized amplitude `h`
//! (units of the anisotropy field) reverses iff `h >= cos(phi)`, so a full
//! pass (`h >= 1`) aligns everything while a weaker pass reverses only the
//! off-axis fraction. Writing two passes at different amplitudes therefore
//! leaves each cell in one of three net states: -1, an intermediate value,
//! or +1. The perpendicular model reaches the same three states with two
//! discrete populations switching at different absolute thresholds.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors from medium construction and field application.
#[derive(Debug, Error, PartialEq)]
pub enum MediumError {
    #[error("ensemble needs at least one particle")]
    EmptyEnsemble,
    #[error("field direction must be -1 or +1, got {0}")]
    BadDirection(i8),
    #[error("field amplitude must be a finite non-negative number, got {0}")]
    BadFieldAmplitude(f64),
    #[error("threshold angle is undefined for normalized field {0}; expected 0 < h <= 1")]
    ThresholdFieldOutOfRange(f64),
    #[error("opposed-pass remanence is undefined for normalized field {0}; expected 0 <= h <= 1")]
    RemanenceFieldOutOfRange(f64),
    #[error("anisotropy field must be positive and finite, got {0}")]
    BadAnisotropyField(f64),
    #[error("population sign must be -1 or +1, got {0}")]
    BadPopulationSign(i8),
    #[error("perpendicular medium requires hk1 > hk2 > 0, got hk1={hk1}, hk2={hk2}")]
    BadPopulationThresholds { hk1: f64, hk2: f64 },
    #[error("particle count must be at least 1")]
    BadParticleCount,
}

/// Normalized weak-field amplitude at which a single opposed pass over a
/// saturated longitudinal medium leaves exactly zero net magnetization:
/// `sqrt(3)/2`, the point where the reversed and retained populations carry
/// equal weight.
pub fn balanced_field() -> f64 {
    3.0_f64.sqrt() / 2.0
}

/// Largest easy-axis angle that *resists* an opposed pass of normalized
/// amplitude `h`: particles with `|angle| >= acos(h)` reverse, the rest hold.
///
/// Requires `0 < h <= 1`; at `h = 1` the angle is 0 (nothing resists) and as
/// `h -> 0` it approaches pi/2 (everything resists).
pub fn threshold_angle(h: f64) -> Result<f64, MediumError> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(MediumError::ThresholdFieldOutOfRange(h));
    }
    Ok(h.acos())
}

/// Closed-form cell state after a full-strength pass of sign `s1` followed
/// by a balanced partial pass of sign `s2`: the holding half keeps `s1`, the
/// reversible half takes `s2`, so the cell reads `(s1 + s2) / 2` — exactly
/// -1, 0, or +1.
pub fn analytic_cell_write(s1: i8, s2: i8) -> Result<f64, MediumError> {
    for sign in [s1, s2] {
        if sign != 1 && sign != -1 {
            return Err(MediumError::BadPopulationSign(sign));
        }
    }
    Ok(f64::from(s1 + s2) / 2.0)
}

/// Net magnetization left by one opposed pass of normalized amplitude `h`
/// over a saturated medium, in units of the saturation value:
/// `2*sqrt(1 - h^2) - 1`.
///
/// This is the closed form the random-axis ensemble converges to: the
/// retained fraction carries weight `sin(acos(h)) = sqrt(1 - h^2)` and the
/// reversed fraction the complement, so the net is their difference. It is
/// `1` at `h = 0`, `-1` at `h = 1`, and crosses zero at [`balanced_field`].
pub fn remanence_after_opposed(h: f64) -> Result<f64, MediumError> {
    if !(0.0..=1.0).contains(&h) {
        return Err(MediumError::RemanenceFieldOutOfRange(h));
    }
    Ok(2.0 * (1.0 - h * h).sqrt() - 1.0)
}

/// A finite sample of single-domain particles: easy-axis angles in
/// (-pi/2, pi/2] and a +/-1 orientation sign per particle.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleEnsemble {
    angles: Vec<f64>,
    signs: Vec<i8>,
    seed: u64,
}

impl ParticleEnsemble {
    /// Draw `n` particles with uniformly distributed easy-axis angles, all
    /// initially oriented +1.
    ///
    /// Sampling is fully reproducible: a ChaCha8 stream is keyed from `seed`
    /// and particle `i`'s angle is the `i`-th `f64` draw `u` in [0, 1),
    /// mapped to `(0.5 - u) * pi` so the angles cover (-pi/2, pi/2].
    pub fn sample(n: usize, seed: u64) -> Result<Self, MediumError> {
        if n == 0 {
            return Err(MediumError::EmptyEnsemble);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let angles = (0..n)
            .map(|_| (0.5 - rng.gen::<f64>()) * std::f64::consts::PI)
            .collect();
        Ok(Self {
            angles,
            signs: vec![1; n],
            seed,
        })
    }

    pub fn particle_count(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        self.angles.as_slice()
    }

    pub fn signs(&self) -> &[i8] {
        self.signs.as_slice()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Apply one field pass of normalized amplitude `h >= 0` along
    /// `direction` (+1 or -1). A particle opposed to the field reverses iff
    /// `h >= cos(angle)`; aligned particles never change, so a repeated pass
    /// is a no-op and `h >= 1` saturates the ensemble.
    pub fn apply_field(&mut self, h: f64, direction: i8) -> Result<(), MediumError> {
        if direction != 1 && direction != -1 {
            return Err(MediumError::BadDirection(direction));
        }
        if !h.is_finite() || h < 0.0 {
            return Err(MediumError::BadFieldAmplitude(h));
        }
        for (sign, angle) in self.signs.iter_mut().zip(&self.angles) {
            if *sign != direction && h >= angle.cos() {
                *sign = direction;
            }
        }
        Ok(())
    }

    /// Net magnetization in [-1, 1]: the signed sum of each particle's axis
    /// projection `cos(angle)`, normalized by the total projection so a
    /// saturated ensemble reads exactly +/-1.
    pub fn net_magnetization(&self) -> f64 {
        let mut signed = 0.0;
        let mut total = 0.0;
        for (sign, angle) in self.signs.iter().zip(&self.angles) {
            let w = angle.cos();
            signed += f64::from(*sign) * w;
            total += w;
        }
        if total == 0.0 {
            return 0.0;
        }
        signed / total
    }

    /// Projection weight carried by particles that hold against an opposed
    /// pass (`|angle| < phi0`) versus those that reverse (`|angle| >= phi0`),
    /// as fractions of the total. At `phi0 = threshold_angle(balanced_field())`
    /// the two fractions converge to 1/2 each.
    pub fn weight_split(&self, phi0: f64) -> (f64, f64) {
        let mut holding = 0.0;
        let mut total = 0.0;
        for angle in &self.angles {
            let w = angle.cos();
            if angle.abs() < phi0 {
                holding += w;
            }
            total += w;
        }
        if total == 0.0 {
            return (0.0, 0.0);
        }
        (holding / total, (total - holding) / total)
    }
}

/// How a longitudinal track evaluates cell magnetization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MediumMode {
    /// Closed-form two-population bookkeeping; exact three-state outputs.
    Analytic,
    /// Explicit particle ensembles per cell; outputs carry sampling noise.
    MonteCarlo { particles_per_cell: usize, seed: u64 },
}

/// Longitudinal medium: switching thresholds are expressed in units of the
/// anisotropy field `hk`, so a full pass is `h = 1` and the zero-remanence
/// weak pass is `h = balanced_field()`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongitudinalMedium {
    hk: f64,
    mode: MediumMode,
}

impl LongitudinalMedium {
    pub fn new(hk: f64, mode: MediumMode) -> Result<Self, MediumError> {
        if !hk.is_finite() || hk <= 0.0 {
            return Err(MediumError::BadAnisotropyField(hk));
        }
        if let MediumMode::MonteCarlo {
            particles_per_cell, ..
        } = mode
        {
            if particles_per_cell == 0 {
                return Err(MediumError::BadParticleCount);
            }
        }
        Ok(Self { hk, mode })
    }

    pub fn hk(&self) -> f64 {
        self.hk
    }

    pub fn mode(&self) -> MediumMode {
        self.mode
    }
}

impl Default for LongitudinalMedium {
    fn default() -> Self {
        Self {
            hk: 1.0,
            mode: MediumMode::Analytic,
        }
    }
}

/// Perpendicular medium: two equal-weight populations with distinct absolute
/// switching fields `hk1 > hk2`. A pass at `h >= hk1` writes both, a pass in
/// `[hk2, hk1)` writes only the soft population, and the cell magnetization
/// is the mean of the two signs — the same -1 / 0 / +1 alphabet the
/// longitudinal medium produces at its balanced operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerpendicularMedium {
    hk1: f64,
    hk2: f64,
}

impl PerpendicularMedium {
    pub fn new(hk1: f64, hk2: f64) -> Result<Self, MediumError> {
        if !(hk1.is_finite() && hk2.is_finite() && hk1 > hk2 && hk2 > 0.0) {
            return Err(MediumError::BadPopulationThresholds { hk1, hk2 });
        }
        Ok(Self { hk1, hk2 })
    }

    pub fn hk1(&self) -> f64 {
        self.hk1
    }

    pub fn hk2(&self) -> f64 {
        self.hk2
    }

    /// Apply one pass of absolute amplitude `h` along `direction` to a cell.
    /// Populations aligned with the field never change; an opposed population
    /// switches iff `h` reaches its threshold.
    pub fn apply_field(
        &self,
        cell: PopulationPair,
        h: f64,
        direction: i8,
    ) -> Result<PopulationPair, MediumError> {
        if direction != 1 && direction != -1 {
            return Err(MediumError::BadDirection(direction));
        }
        if !h.is_finite() || h < 0.0 {
            return Err(MediumError::BadFieldAmplitude(h));
        }
        let mut next = cell;
        if h >= self.hk1 {
            next.hard = direction;
        }
        if h >= self.hk2 {
            next.soft = direction;
        }
        Ok(next)
    }
}

impl Default for PerpendicularMedium {
    fn default() -> Self {
        Self { hk1: 1.0, hk2: 0.75 }
    }
}

/// Orientation signs of the two equal-weight populations of one cell.
/// `hard` switches at the higher threshold, `soft` at the lower one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PopulationPair {
    pub hard: i8,
    pub soft: i8,
}

impl PopulationPair {
    pub fn new(hard: i8, soft: i8) -> Result<Self, MediumError> {
        for sign in [hard, soft] {
            if sign != 1 && sign != -1 {
                return Err(MediumError::BadPopulationSign(sign));
            }
        }
        Ok(Self { hard, soft })
    }

    /// Cell magnetization: the mean of the two population signs, one of
    /// exactly -1.0, 0.0, or +1.0.
    pub fn magnetization(&self) -> f64 {
        f64::from(self.hard + self.soft) / 2.0
    }
}

/// A recording medium a track can be built on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Medium {
    Longitudinal(LongitudinalMedium),
    Perpendicular(PerpendicularMedium),
}

impl Medium {
    /// Amplitude a pass must reach to rewrite every cell outright — the
    /// hard-population threshold (1 in normalized units for longitudinal
    /// media, `hk1` for perpendicular ones).
    pub fn full_write_amplitude(&self) -> f64 {
        match self {
            Medium::Longitudinal(_) => 1.0,
            Medium::Perpendicular(p) => p.hk1,
        }
    }

    /// Amplitude of the partial pass that flips only the soft half of each
    /// opposed cell: the balanced field for longitudinal media, the midpoint
    /// of the two thresholds for perpendicular ones.
    pub fn partial_write_amplitude(&self) -> f64 {
        match self {
            Medium::Longitudinal(_) => balanced_field(),
            Medium::Perpendicular(p) => (p.hk1 + p.hk2) / 2.0,
        }
    }
}

impl Default for Medium {
    fn default() -> Self {
        Medium::Longitudinal(LongitudinalMedium::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

    #[test]
    fn balanced_field_is_root_three_over_two() {
        let b = balanced_field();
        assert!((b - 0.866_025_403_784_438_6).abs() < 1e-15);
        assert!((b * b - 0.75).abs() < 1e-15, "square should be 3/4");
    }

    #[test]
    fn threshold_angle_known_points() {
        assert!((threshold_angle(balanced_field()).unwrap() - FRAC_PI_6).abs() < 1e-15);
        assert!((threshold_angle(0.5).unwrap() - FRAC_PI_3).abs() < 1e-15);
        assert_eq!(threshold_angle(1.0).unwrap(), 0.0);
    }

    #[test]
    fn threshold_angle_rejects_out_of_range_fields() {
        assert!(matches!(
            threshold_angle(0.0),
            Err(MediumError::ThresholdFieldOutOfRange(_))
        ));
        assert!(threshold_angle(1.2).is_err());
        assert!(threshold_angle(-0.1).is_err());
        assert!(threshold_angle(f64::NAN).is_err());
    }

    #[test]
    fn remanence_known_points() {
        assert_eq!(remanence_after_opposed(0.0).unwrap(), 1.0);
        assert_eq!(remanence_after_opposed(1.0).unwrap(), -1.0);
        assert!(remanence_after_opposed(balanced_field()).unwrap().abs() < 1e-12);
        // 2*sqrt(3)/2 - 1 at h = 1/2.
        let m = remanence_after_opposed(0.5).unwrap();
        assert!((m - 0.732_050_807_568_877_2).abs() < 1e-15);
    }

    #[test]
    fn remanence_rejects_out_of_range_fields() {
        assert!(matches!(
            remanence_after_opposed(-0.01),
            Err(MediumError::RemanenceFieldOutOfRange(_))
        ));
        assert!(remanence_after_opposed(1.01).is_err());
        assert!(remanence_after_opposed(f64::NAN).is_err());
    }

    #[test]
    fn analytic_cell_write_covers_the_three_states() {
        assert_eq!(analytic_cell_write(1, 1).unwrap(), 1.0);
        assert_eq!(analytic_cell_write(1, -1).unwrap(), 0.0);
        assert_eq!(analytic_cell_write(-1, 1).unwrap(), 0.0);
        assert_eq!(analytic_cell_write(-1, -1).unwrap(), -1.0);
        assert!(analytic_cell_write(0, 1).is_err());
    }

    #[test]
    fn perpendicular_passes_agree_with_the_closed_form_cell() {
        // Full pass at s1 then partial pass at s2 must land on the
        // (s1 + s2) / 2 state whichever medium bookkeeping is used.
        let medium = PerpendicularMedium::new(1.25, 0.75).expect("medium");
        let partial = (1.25 + 0.75) / 2.0;
        for s1 in [-1i8, 1] {
            for s2 in [-1i8, 1] {
                let erased = medium
                    .apply_field(PopulationPair::new(-1, -1).unwrap(), 1.25, s1)
                    .expect("full pass");
                let written = medium
                    .apply_field(erased, partial, s2)
                    .expect("partial pass");
                assert_eq!(
                    written.magnetization(),
                    analytic_cell_write(s1, s2).unwrap(),
                    "(s1, s2) = ({s1}, {s2})"
                );
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let a = ParticleEnsemble::sample(64, 7).expect("sample");
        let b = ParticleEnsemble::sample(64, 7).expect("sample");
        assert_eq!(a, b);
        let c = ParticleEnsemble::sample(64, 8).expect("sample");
        assert_ne!(a.angles(), c.angles(), "different seeds should differ");
    }

    #[test]
    fn sampling_covers_the_half_open_angle_range() {
        let ens = ParticleEnsemble::sample(10_000, 3).expect("sample");
        assert!(ens
            .angles()
            .iter()
            .all(|a| *a > -PI / 2.0 && *a <= PI / 2.0));
        assert!(ens.signs().iter().all(|s| *s == 1));
    }

    #[test]
    fn sampling_rejects_empty_ensembles() {
        assert_eq!(
            ParticleEnsemble::sample(0, 1).unwrap_err(),
            MediumError::EmptyEnsemble
        );
    }

    #[test]
    fn sample_mean_angle_is_near_zero() {
        // Uniform on (-pi/2, pi/2] has mean 0 and stdev pi/sqrt(12); with
        // n = 1e6 the sample mean should sit well inside 4 sigma.
        let n = 1_000_000;
        let ens = ParticleEnsemble::sample(n, 1).expect("sample");
        let mean: f64 = ens.angles().iter().sum::<f64>() / n as f64;
        let sigma = PI / 12.0_f64.sqrt() / (n as f64).sqrt();
        assert!(mean.abs() < 4.0 * sigma, "mean {mean} vs sigma {sigma}");
    }

    #[test]
    fn full_pass_saturates_exactly() {
        let mut ens = ParticleEnsemble::sample(10_000, 11).expect("sample");
        ens.apply_field(1.0, -1).expect("apply");
        assert!(ens.signs().iter().all(|s| *s == -1));
        assert_eq!(ens.net_magnetization(), -1.0);
        ens.apply_field(1.0, 1).expect("apply");
        assert_eq!(ens.net_magnetization(), 1.0);
    }

    #[test]
    fn aligned_pass_changes_nothing() {
        let mut ens = ParticleEnsemble::sample(5_000, 13).expect("sample");
        ens.apply_field(1.0, 1).expect("apply");
        let before = ens.clone();
        ens.apply_field(0.9, 1).expect("apply");
        assert_eq!(ens, before);
    }

    #[test]
    fn opposed_pass_follows_the_switching_rule_particle_by_particle() {
        let h = balanced_field();
        let mut ens = ParticleEnsemble::sample(2_000, 17).expect("sample");
        ens.apply_field(1.0, 1).expect("saturate");
        ens.apply_field(h, -1).expect("weak opposed pass");
        for (angle, sign) in ens.angles().iter().zip(ens.signs()) {
            if h >= angle.cos() {
                assert_eq!(*sign, -1, "angle {angle} should have reversed");
            } else {
                assert_eq!(*sign, 1, "angle {angle} should have held");
            }
        }
    }

    #[test]
    fn opposed_pass_is_idempotent() {
        let mut once = ParticleEnsemble::sample(2_000, 19).expect("sample");
        once.apply_field(1.0, 1).expect("saturate");
        once.apply_field(0.7, -1).expect("pass");
        let mut twice = once.clone();
        twice.apply_field(0.7, -1).expect("repeat pass");
        assert_eq!(once, twice);
    }

    #[test]
    fn balanced_opposed_pass_leaves_near_zero_magnetization() {
        let mut ens = ParticleEnsemble::sample(1_000_000, 42).expect("sample");
        ens.apply_field(1.0, 1).expect("saturate");
        ens.apply_field(balanced_field(), -1).expect("balanced pass");
        let m = ens.net_magnetization();
        assert!(m.abs() <= 0.005, "net magnetization {m} should vanish");
    }

    #[test]
    fn monte_carlo_remanence_tracks_the_closed_form() {
        // One shared ensemble re-used across the sweep keeps this cheap.
        let base = {
            let mut e = ParticleEnsemble::sample(200_000, 23).expect("sample");
            e.apply_field(1.0, 1).expect("saturate");
            e
        };
        let mut last = f64::INFINITY;
        for i in 0..=10 {
            let h = f64::from(i) / 10.0;
            let mut ens = base.clone();
            ens.apply_field(h, -1).expect("opposed pass");
            let m = ens.net_magnetization();
            let expected = remanence_after_opposed(h).unwrap();
            assert!(
                (m - expected).abs() <= 0.01,
                "h={h}: sampled {m} vs closed form {expected}"
            );
            assert!(m < last, "remanence should fall strictly as h grows");
            last = m;
        }
    }

    #[test]
    fn weight_split_is_even_at_the_balanced_threshold() {
        let ens = ParticleEnsemble::sample(1_000_000, 5).expect("sample");
        let phi0 = threshold_angle(balanced_field()).unwrap();
        let (holding, reversing) = ens.weight_split(phi0);
        assert!((holding - 0.5).abs() <= 0.005, "holding weight {holding}");
        assert!((holding + reversing - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_field_rejects_bad_arguments() {
        let mut ens = ParticleEnsemble::sample(8, 1).expect("sample");
        assert_eq!(
            ens.apply_field(0.5, 0).unwrap_err(),
            MediumError::BadDirection(0)
        );
        assert_eq!(
            ens.apply_field(-0.5, 1).unwrap_err(),
            MediumError::BadFieldAmplitude(-0.5)
        );
        assert!(ens.apply_field(f64::NAN, 1).is_err());
    }

    #[test]
    fn perpendicular_passes_switch_populations_by_threshold() {
        let medium = PerpendicularMedium::new(1.0, 0.75).expect("medium");
        let down = PopulationPair::new(-1, -1).expect("pair");

        // Full-strength pass writes both populations.
        let full = medium.apply_field(down, 1.0, 1).expect("full pass");
        assert_eq!(full, PopulationPair { hard: 1, soft: 1 });
        assert_eq!(full.magnetization(), 1.0);

        // Intermediate pass flips only the soft population.
        let partial = medium.apply_field(down, 0.9, 1).expect("partial pass");
        assert_eq!(partial, PopulationPair { hard: -1, soft: 1 });
        assert_eq!(partial.magnetization(), 0.0);

        // Sub-threshold pass leaves the cell alone.
        let untouched = medium.apply_field(down, 0.5, 1).expect("weak pass");
        assert_eq!(untouched, down);
        assert_eq!(untouched.magnetization(), -1.0);
    }

    #[test]
    fn perpendicular_medium_validates_thresholds() {
        assert!(PerpendicularMedium::new(0.75, 1.0).is_err());
        assert!(PerpendicularMedium::new(1.0, 1.0).is_err());
        assert!(PerpendicularMedium::new(1.0, 0.0).is_err());
        assert!(PerpendicularMedium::new(1.0, -0.5).is_err());
    }

    #[test]
    fn population_pair_validates_signs() {
        assert!(PopulationPair::new(2, 1).is_err());
        assert!(PopulationPair::new(1, 0).is_err());
        assert!(PopulationPair::new(-1, 1).is_ok());
    }

    #[test]
    fn medium_amplitudes_cover_both_geometries() {
        let long = Medium::default();
        assert_eq!(long.full_write_amplitude(), 1.0);
        assert_eq!(long.partial_write_amplitude(), balanced_field());

        let perp = Medium::Perpendicular(PerpendicularMedium::new(2.0, 1.0).expect("medium"));
        assert_eq!(perp.full_write_amplitude(), 2.0);
        assert_eq!(perp.partial_write_amplitude(), 1.5);
    }

    #[test]
    fn longitudinal_medium_validates_parameters() {
        assert!(LongitudinalMedium::new(0.0, MediumMode::Analytic).is_err());
        assert!(LongitudinalMedium::new(-1.0, MediumMode::Analytic).is_err());
        assert!(LongitudinalMedium::new(
            1.0,
            MediumMode::MonteCarlo {
                particles_per_cell: 0,
                seed: 0
            }
        )
        .is_err());
    }
}
