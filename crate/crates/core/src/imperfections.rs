//! Hardware and estimation non-idealities.
//!
//! Three independent effects, each a pure transformation:
//!
//! * [`apply_realistic_ris`]: real reflection hardware: sub-unity
//!   amplitude and a limited achievable phase range. Requested phases are
//!   clamped to the nearest achievable phase on the circle (a hardware
//!   range is a saturation, not a modulus).
//! * [`apply_doppler_error`]: the controller is fed erroneous Doppler
//!   shifts for every reflector while the dominant LOS shift stays exact.
//!   Only the controller's view changes; synthesis keeps the true scenario.
//! * [`apply_hold`]: discrete-time reconfiguration: phases refresh every
//!   Q samples and stay frozen in between.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::envelope::PhasePlan;
use crate::error::{Result, SimError};
use crate::geometry::{wrap_angle, SamplingGrid, Scenario, TWO_PI};

use std::f64::consts::PI;

/// Achievable reflection amplitude and phase range of a practical surface.
#[derive(Debug, Clone, PartialEq)]
pub struct RealisticRisModel {
    /// Reflection amplitude in dB (≤ 0; field amplitude is 10^(dB/20)).
    pub amplitude_db: f64,
    /// Lower phase bound (rad).
    pub phase_min_rad: f64,
    /// Upper phase bound (rad).
    pub phase_max_rad: f64,
}

impl Default for RealisticRisModel {
    /// −1 dB amplitude, phases restricted to [−150°, +140°].
    fn default() -> Self {
        Self {
            amplitude_db: -1.0,
            phase_min_rad: -150f64.to_radians(),
            phase_max_rad: 140f64.to_radians(),
        }
    }
}

impl RealisticRisModel {
    pub fn new(amplitude_db: f64, phase_min_rad: f64, phase_max_rad: f64) -> Result<Self> {
        if amplitude_db > 0.0 {
            return Err(SimError::Domain(format!(
                "reflection amplitude cannot exceed 0 dB, got {amplitude_db}"
            )));
        }
        if !(phase_min_rad < phase_max_rad) {
            return Err(SimError::Domain(format!(
                "phase range is empty: [{phase_min_rad}, {phase_max_rad}]"
            )));
        }
        Ok(Self {
            amplitude_db,
            phase_min_rad,
            phase_max_rad,
        })
    }

    /// Field amplitude 10^(dB/20).
    pub fn amplitude(&self) -> f64 {
        10f64.powf(self.amplitude_db / 20.0)
    }

    /// Nearest achievable phase, distances measured on the circle.
    pub fn clamp_phase(&self, requested_rad: f64) -> f64 {
        // Work in a frame centered on the allowed arc's midpoint so the
        // forbidden arc is a contiguous interval of the wrapped angle.
        let mid = (self.phase_min_rad + self.phase_max_rad) / 2.0;
        let half_span = (self.phase_max_rad - self.phase_min_rad) / 2.0;
        let mut offset = wrap_angle(requested_rad - mid);
        if offset >= PI {
            offset -= TWO_PI; // (-pi, pi] around the midpoint
        }
        if offset.abs() <= half_span {
            return requested_rad;
        }
        if offset > 0.0 {
            wrap_angle(self.phase_max_rad)
        } else {
            wrap_angle(self.phase_min_rad)
        }
    }
}

/// Map every requested phase to the nearest achievable one and set every
/// amplitude to the hardware value. Idempotent.
pub fn apply_realistic_ris(plan: &PhasePlan, model: &RealisticRisModel) -> PhasePlan {
    let mut out = plan.clone();
    for row in out.phases_mut() {
        for p in row {
            *p = model.clamp_phase(*p);
        }
    }
    out.set_amplitudes(vec![model.amplitude(); plan.ris_count()]);
    out
}

/// Uniform Doppler estimation error bound U (Hz) with its draw seed.
#[derive(Debug, Clone, PartialEq)]
pub struct DopplerErrorModel {
    pub bound_u_hz: f64,
    pub seed: u64,
}

impl DopplerErrorModel {
    pub fn new(bound_u_hz: f64, seed: u64) -> Result<Self> {
        if !(bound_u_hz >= 0.0) {
            return Err(SimError::Domain(format!(
                "error bound must be non-negative, got {bound_u_hz}"
            )));
        }
        Ok(Self { bound_u_hz, seed })
    }
}

/// Controller's view of the scenario: every reflector Doppler perturbed by
/// an i.i.d. error in [−U, U]; the LOS Doppler (the mobile's own f_D) is
/// untouched. The returned scenario is for plan generation only; envelope
/// synthesis must keep using the true one.
///
/// Draws are unit offsets in [−1, 1] scaled by U, so one seed yields
/// errors that grow proportionally with the bound.
pub fn apply_doppler_error(scenario: &Scenario, model: &DopplerErrorModel) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let mut view = scenario.clone();
    for io in &mut view.interactors {
        let offset: f64 = rng.gen_range(-1.0..=1.0);
        io.doppler_hz += model.bound_u_hz * offset;
    }
    view
}

/// Reconfiguration interval: a whole number of grid samples, or a duration
/// resolved against the grid.
#[derive(Debug, Clone, PartialEq)]
pub enum HoldModel {
    /// Hold for Q samples.
    Samples(usize),
    /// Hold for t_r seconds.
    Interval(f64),
}

impl HoldModel {
    /// Number of samples the phases stay frozen. A duration that is not an
    /// exact multiple of t_s rounds down with a warning.
    pub fn resolve_samples(&self, grid: &SamplingGrid) -> Result<usize> {
        match *self {
            HoldModel::Samples(q) => {
                if q == 0 {
                    Err(SimError::Domain("hold length must be >= 1 sample".into()))
                } else {
                    Ok(q)
                }
            }
            HoldModel::Interval(t_r) => {
                if !(t_r > 0.0) {
                    return Err(SimError::Domain(format!(
                        "hold interval must be positive, got {t_r}"
                    )));
                }
                let ratio = t_r / grid.sample_interval_s;
                let q = ratio.floor() as usize;
                if q == 0 {
                    return Err(SimError::Domain(format!(
                        "hold interval {t_r} s is shorter than one sample ({} s)",
                        grid.sample_interval_s
                    )));
                }
                if (ratio - q as f64).abs() > 1e-9 * ratio {
                    log::warn!(
                        "hold interval {} s is not a multiple of t_s = {} s; holding for {} samples",
                        t_r,
                        grid.sample_interval_s,
                        q
                    );
                }
                Ok(q)
            }
        }
    }
}

/// Zero-order hold: keep the plan's phases at sample indices ≡ 0 (mod Q)
/// and freeze them in between.
pub fn apply_hold(plan: &PhasePlan, hold: &HoldModel, grid: &SamplingGrid) -> Result<PhasePlan> {
    let q = hold.resolve_samples(grid)?;
    if q == 1 {
        return Ok(plan.clone());
    }
    let mut out = plan.clone();
    for row in out.phases_mut() {
        for k in 0..row.len() {
            row[k] = row[k - k % q];
        }
    }
    Ok(out)
}

/// Largest reconfiguration interval that keeps the held two-ray envelope
/// effectively constant: t_r < 1/(40π·f_D).
pub fn hold_criterion(max_doppler_hz: f64) -> Result<f64> {
    if !(max_doppler_hz > 0.0) {
        return Err(SimError::Domain(format!(
            "Doppler shift must be positive, got {max_doppler_hz}"
        )));
    }
    Ok(1.0 / (40.0 * PI * max_doppler_hz))
}
