//! Scenario construction: carriers, Doppler shifts, reflectors.
//!
//! Geometry follows a flat 2D layout. The mobile station (MS) travels along
//! the +x axis at constant speed; the base station (BS) sits behind it on
//! the same axis. Every reflector is summarized by four derived quantities:
//! its arrival angle relative to the route, its initial radio path distance
//! (BS → reflector → MS), the constant phase 2π·d̃/λ that distance implies,
//! and its Doppler shift f_D·cos(angle). Rays are treated as parallel over
//! the whole (short) route, so path lengths change linearly with time and
//! amplitudes stay frozen at their initial values.
//!
//! Sign convention: the direct BS–MS path recedes, contributing −f_D, while
//! a reflector dead ahead (arrival angle 0) contributes +f_D.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Result, SimError};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

pub const TWO_PI: f64 = 2.0 * PI;

/// Name of the seeded generator used everywhere randomness appears; recorded
/// in run manifests so results can be reproduced.
pub const RNG_NAME: &str = "chacha8";

/// Wrap an angle to [0, 2π).
pub fn wrap_angle(rad: f64) -> f64 {
    let w = rad.rem_euclid(TWO_PI);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if w >= TWO_PI {
        0.0
    } else {
        w
    }
}

/// Carrier frequency and wavelength.
///
/// The wavelength is normally derived as λ = c/f_c, but it can also be
/// pinned exactly (presets use f_c = 3 GHz with λ pinned to 0.1 m so that
/// f_D = V/λ comes out at round numbers).
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierConfig {
    /// Carrier frequency f_c (Hz).
    pub carrier_frequency_hz: f64,
    /// Wavelength λ (m).
    pub wavelength_m: f64,
}

impl CarrierConfig {
    /// Derive the wavelength from the carrier frequency.
    pub fn from_frequency(carrier_frequency_hz: f64) -> Result<Self> {
        if !(carrier_frequency_hz > 0.0) {
            return Err(SimError::Domain(format!(
                "carrier frequency must be positive, got {carrier_frequency_hz}"
            )));
        }
        Ok(Self {
            carrier_frequency_hz,
            wavelength_m: SPEED_OF_LIGHT / carrier_frequency_hz,
        })
    }

    /// Pin the wavelength explicitly instead of deriving it.
    pub fn with_pinned_wavelength(carrier_frequency_hz: f64, wavelength_m: f64) -> Result<Self> {
        if !(carrier_frequency_hz > 0.0) || !(wavelength_m > 0.0) {
            return Err(SimError::Domain(format!(
                "carrier frequency and wavelength must be positive, got f_c={carrier_frequency_hz}, lambda={wavelength_m}"
            )));
        }
        Ok(Self {
            carrier_frequency_hz,
            wavelength_m,
        })
    }
}

/// Mobile speed and the maximum Doppler shift f_D = V/λ it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct MobileConfig {
    /// Speed V along the route (m/s).
    pub speed_mps: f64,
    /// Maximum Doppler shift f_D = V/λ (Hz).
    pub max_doppler_hz: f64,
}

impl MobileConfig {
    pub fn new(speed_mps: f64, carrier: &CarrierConfig) -> Result<Self> {
        if !(speed_mps >= 0.0) {
            return Err(SimError::Domain(format!(
                "mobile speed must be non-negative, got {speed_mps}"
            )));
        }
        Ok(Self {
            speed_mps,
            max_doppler_hz: speed_mps / carrier.wavelength_m,
        })
    }
}

/// Whether a reflector is a plain specular surface or carries an RIS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteractorKind {
    /// Fixed reflection coefficient −1.
    PlainIo,
    /// Time-varying reflection coefficient a·e^{jθ(t)} supplied by a
    /// [`crate::envelope::PhasePlan`].
    Ris,
}

/// One reflector in the propagation environment.
#[derive(Debug, Clone, PartialEq)]
pub struct Interactor {
    pub kind: InteractorKind,
    /// Arrival angle of the reflected ray relative to the route (rad);
    /// 0 for boresight paths.
    pub arrival_angle_rad: f64,
    /// Initial radio path distance d̃ = BS → reflector → MS (m).
    pub initial_radio_path_m: f64,
    /// Constant phase 2π·d̃/λ, wrapped to [0, 2π).
    pub constant_phase_rad: f64,
    /// Doppler shift f_D·cos(arrival angle) (Hz).
    pub doppler_hz: f64,
    /// Baseline reflection coefficient: exactly −1 for a plain reflector,
    /// +1 for an RIS (the phase plan multiplies on top).
    pub plain_reflection: Complex64,
}

impl Interactor {
    /// Build a reflector, deriving the constant phase from the radio path.
    pub fn new(
        kind: InteractorKind,
        arrival_angle_rad: f64,
        initial_radio_path_m: f64,
        carrier: &CarrierConfig,
        mobile: &MobileConfig,
    ) -> Result<Self> {
        let psi = wrap_angle(TWO_PI * initial_radio_path_m / carrier.wavelength_m);
        Self::with_constant_phase(kind, arrival_angle_rad, initial_radio_path_m, psi, mobile)
    }

    /// Build a reflector with an explicit constant phase (presets that
    /// mirror the idealized figures zero it).
    pub fn with_constant_phase(
        kind: InteractorKind,
        arrival_angle_rad: f64,
        initial_radio_path_m: f64,
        constant_phase_rad: f64,
        mobile: &MobileConfig,
    ) -> Result<Self> {
        if !(initial_radio_path_m > 0.0) {
            return Err(SimError::Domain(format!(
                "radio path distance must be positive, got {initial_radio_path_m}"
            )));
        }
        if !arrival_angle_rad.is_finite() || !constant_phase_rad.is_finite() {
            return Err(SimError::Domain(
                "arrival angle and constant phase must be finite".into(),
            ));
        }
        let plain_reflection = match kind {
            InteractorKind::PlainIo => Complex64::new(-1.0, 0.0),
            InteractorKind::Ris => Complex64::new(1.0, 0.0),
        };
        Ok(Self {
            kind,
            arrival_angle_rad,
            initial_radio_path_m,
            constant_phase_rad: wrap_angle(constant_phase_rad),
            doppler_hz: mobile.max_doppler_hz * arrival_angle_rad.cos(),
            plain_reflection,
        })
    }

    pub fn is_ris(&self) -> bool {
        self.kind == InteractorKind::Ris
    }
}

/// Direct BS–MS path. Its Doppler is always −f_D (the MS recedes from the
/// BS along the route).
#[derive(Debug, Clone, PartialEq)]
pub struct LosPath {
    pub distance_m: f64,
}

/// Full propagation geometry for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub carrier: CarrierConfig,
    pub mobile: MobileConfig,
    pub los: Option<LosPath>,
    pub interactors: Vec<Interactor>,
}

impl Scenario {
    pub fn new(
        carrier: CarrierConfig,
        mobile: MobileConfig,
        los_distance_m: Option<f64>,
        interactors: Vec<Interactor>,
    ) -> Result<Self> {
        let los = match los_distance_m {
            Some(d) if d > 0.0 => Some(LosPath { distance_m: d }),
            Some(d) => {
                return Err(SimError::Domain(format!(
                    "LOS distance must be positive, got {d}"
                )))
            }
            None => None,
        };
        if los.is_none() && interactors.is_empty() {
            return Err(SimError::Contract(
                "a scenario needs a LOS path or at least one interactor".into(),
            ));
        }
        Ok(Self {
            carrier,
            mobile,
            los,
            interactors,
        })
    }

    /// Number of RIS-kind interactors (N).
    pub fn n_ris(&self) -> usize {
        self.interactors.iter().filter(|i| i.is_ris()).count()
    }

    /// Number of plain reflectors (M).
    pub fn n_plain(&self) -> usize {
        self.interactors.len() - self.n_ris()
    }

    /// Indices (into `interactors`) of the RIS-kind entries, in list order.
    pub fn ris_indices(&self) -> Vec<usize> {
        self.interactors
            .iter()
            .enumerate()
            .filter(|(_, i)| i.is_ris())
            .map(|(k, _)| k)
            .collect()
    }

    /// Indices of the plain reflectors, in list order.
    pub fn plain_indices(&self) -> Vec<usize> {
        self.interactors
            .iter()
            .enumerate()
            .filter(|(_, i)| !i.is_ris())
            .map(|(k, _)| k)
            .collect()
    }

    /// The same scenario with the direct path removed.
    pub fn without_los(&self) -> Result<Self> {
        if self.interactors.is_empty() {
            return Err(SimError::Contract(
                "cannot drop the LOS path of a scenario with no interactors".into(),
            ));
        }
        let mut s = self.clone();
        s.los = None;
        Ok(s)
    }
}

/// Discrete time axis shared by traces, plans, and spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingGrid {
    /// Number of samples n_s.
    pub sample_count: usize,
    /// Sampling interval t_s (s).
    pub sample_interval_s: f64,
    /// FFT size used for Doppler spectra; must be a power of two.
    pub fft_size: usize,
}

impl SamplingGrid {
    pub fn new(sample_count: usize, sample_interval_s: f64, fft_size: usize) -> Result<Self> {
        if sample_count == 0 {
            return Err(SimError::Domain("sample count must be >= 1".into()));
        }
        if !(sample_interval_s > 0.0) {
            return Err(SimError::Domain(format!(
                "sample interval must be positive, got {sample_interval_s}"
            )));
        }
        if !fft_size.is_power_of_two() {
            return Err(SimError::Domain(format!(
                "FFT size must be a power of two, got {fft_size}"
            )));
        }
        Ok(Self {
            sample_count,
            sample_interval_s,
            fft_size,
        })
    }

    /// Sampling rate f_s = 1/t_s (Hz).
    pub fn sample_rate_hz(&self) -> f64 {
        1.0 / self.sample_interval_s
    }

    /// Sample instants k·t_s.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.sample_count).map(move |k| k as f64 * self.sample_interval_s)
    }
}

/// Axis-aligned placement region for random reflector layouts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) || !(self.y_min < self.y_max) {
            return Err(SimError::Domain(format!(
                "degenerate placement rectangle {self:?}"
            )));
        }
        Ok(())
    }
}

/// Reflector directly ahead on the route: the ray travels BS → reflector →
/// MS along the axis, giving d̃ = d_LOS + 2·d_1 and Doppler +f_D.
pub fn derive_two_ray_interactor(
    kind: InteractorKind,
    d_los_m: f64,
    d1_m: f64,
    carrier: &CarrierConfig,
    mobile: &MobileConfig,
) -> Result<Interactor> {
    if !(d_los_m > 0.0) || !(d1_m > 0.0) {
        return Err(SimError::Domain(format!(
            "two-ray distances must be positive, got d_los={d_los_m}, d1={d1_m}"
        )));
    }
    Interactor::new(kind, 0.0, d_los_m + 2.0 * d1_m, carrier, mobile)
}

/// Reflector whose ray arrives at angle α to the route, offset d_2 ahead of
/// the MS: d̃ = sqrt(d_2²·tan²α + (d_LOS + d_2)²) + d_2/(cos α).
pub fn derive_angled_interactor(
    kind: InteractorKind,
    d_los_m: f64,
    d2_m: f64,
    alpha_rad: f64,
    carrier: &CarrierConfig,
    mobile: &MobileConfig,
) -> Result<Interactor> {
    if !(d_los_m > 0.0) || !(d2_m > 0.0) {
        return Err(SimError::Domain(format!(
            "distances must be positive, got d_los={d_los_m}, d2={d2_m}"
        )));
    }
    if !(alpha_rad > 0.0 && alpha_rad < PI / 2.0) {
        return Err(SimError::Domain(format!(
            "arrival angle must lie in (0, pi/2), got {alpha_rad} rad"
        )));
    }
    let tan_a = alpha_rad.tan();
    let d_tilde =
        (d2_m * d2_m * tan_a * tan_a + (d_los_m + d2_m) * (d_los_m + d2_m)).sqrt()
            + d2_m / alpha_rad.cos();
    Interactor::new(kind, alpha_rad, d_tilde, carrier, mobile)
}

/// Drop `r_count` reflectors uniformly into `rect` (seeded and reproducible)
/// and derive their angles and radio paths from the BS/MS positions. The
/// first `n_ris` of them carry RISs; the rest are plain. The MS route runs
/// along +x from `ms_pos`.
#[allow(clippy::too_many_arguments)]
pub fn random_scenario(
    bs_pos: [f64; 2],
    ms_pos: [f64; 2],
    rect: &Rect,
    r_count: usize,
    n_ris: usize,
    seed: u64,
    carrier: &CarrierConfig,
    mobile: &MobileConfig,
) -> Result<Scenario> {
    rect.validate()?;
    if n_ris > r_count {
        return Err(SimError::Domain(format!(
            "RIS count {n_ris} exceeds reflector count {r_count}"
        )));
    }
    let d_los = ((bs_pos[0] - ms_pos[0]).powi(2) + (bs_pos[1] - ms_pos[1]).powi(2)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut interactors = Vec::with_capacity(r_count);
    for idx in 0..r_count {
        let x = rng.gen_range(rect.x_min..rect.x_max);
        let y = rng.gen_range(rect.y_min..rect.y_max);
        let to_ms = ((x - ms_pos[0]).powi(2) + (y - ms_pos[1]).powi(2)).sqrt();
        let to_bs = ((x - bs_pos[0]).powi(2) + (y - bs_pos[1]).powi(2)).sqrt();
        // Angle between the +x route direction and the MS -> reflector ray.
        let cos_alpha = ((x - ms_pos[0]) / to_ms).clamp(-1.0, 1.0);
        let alpha = cos_alpha.acos();
        let kind = if idx < n_ris {
            InteractorKind::Ris
        } else {
            InteractorKind::PlainIo
        };
        interactors.push(Interactor::new(kind, alpha, to_bs + to_ms, carrier, mobile)?);
    }
    Scenario::new(carrier.clone(), mobile.clone(), Some(d_los), interactors)
}
