//! Received complex-envelope synthesis.
//!
//! The received low-pass envelope is a phasor sum over the direct path and
//! every reflector:
//!
//! ```text
//! r(t) = (λ/4π)·[ e^{-j2πf_D t}/d_LOS
//!                 + Σ_RIS   a_i·e^{j(2πf_{R,i}t − ψ_i + θ_i(t))}/d̃_{R,i}
//!                 − Σ_plain e^{j(2πf_{I,k}t − φ_k)}/d̃_{I,k} ]
//! ```
//!
//! with the LOS term absent for blocked-LOS scenarios. Amplitudes stay
//! frozen at their initial values over the short route; only phases evolve.
//! Phases are reduced mod 2π when stored in a plan, never inside the phasor
//! accumulation.
//!
//! The two-ray closed-form magnitude expressions double as independent
//! oracles for the sampled synthesis and are kept deliberately separate
//! from it.

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::geometry::{wrap_angle, CarrierConfig, Scenario, SamplingGrid, TWO_PI};

const FOUR_PI: f64 = 2.0 * TWO_PI;

/// Magnitude in dB under this crate's convention: 10·log10(|r|).
/// (Power in dB is 10·log10(|r|²), i.e. twice this value.)
pub fn magnitude_db(mag: f64) -> f64 {
    10.0 * mag.log10()
}

/// Per-RIS, per-sample reflection phases θ_i(t_k) plus a per-RIS amplitude
/// (1.0 for an ideal surface, less under realistic-hardware models).
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePlan {
    phases: Vec<Vec<f64>>,
    amplitudes: Vec<f64>,
}

impl PhasePlan {
    /// Wraps every phase to [0, 2π) on the way in.
    pub fn new(phases: Vec<Vec<f64>>, amplitudes: Vec<f64>) -> Result<Self> {
        if phases.len() != amplitudes.len() {
            return Err(SimError::Contract(format!(
                "{} phase rows but {} amplitudes",
                phases.len(),
                amplitudes.len()
            )));
        }
        if let Some(n) = phases.first().map(Vec::len) {
            if phases.iter().any(|row| row.len() != n) {
                return Err(SimError::Contract("ragged phase rows".into()));
            }
        }
        for row in &phases {
            if row.iter().any(|p| !p.is_finite()) {
                return Err(SimError::Domain("non-finite phase".into()));
            }
        }
        for &a in &amplitudes {
            if !(a > 0.0 && a <= 1.0) {
                return Err(SimError::Domain(format!(
                    "reflection amplitude must lie in (0, 1], got {a}"
                )));
            }
        }
        let phases = phases
            .into_iter()
            .map(|row| row.into_iter().map(wrap_angle).collect())
            .collect();
        Ok(Self { phases, amplitudes })
    }

    /// Plan for a scenario without RISs.
    pub fn empty() -> Self {
        Self {
            phases: Vec::new(),
            amplitudes: Vec::new(),
        }
    }

    /// Build a unit-amplitude plan by evaluating `theta(ris_ordinal, t)` on
    /// the grid.
    pub fn from_fn(
        ris_count: usize,
        grid: &SamplingGrid,
        theta: impl Fn(usize, f64) -> f64,
    ) -> Self {
        let phases = (0..ris_count)
            .map(|i| grid.times().map(|t| wrap_angle(theta(i, t))).collect())
            .collect();
        Self {
            phases,
            amplitudes: vec![1.0; ris_count],
        }
    }

    pub fn ris_count(&self) -> usize {
        self.phases.len()
    }

    pub fn sample_count(&self) -> usize {
        self.phases.first().map_or(0, Vec::len)
    }

    pub fn phase(&self, ris_ordinal: usize, sample: usize) -> f64 {
        self.phases[ris_ordinal][sample]
    }

    pub fn amplitude(&self, ris_ordinal: usize) -> f64 {
        self.amplitudes[ris_ordinal]
    }

    pub fn phases(&self) -> &[Vec<f64>] {
        &self.phases
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub(crate) fn set_amplitudes(&mut self, amplitudes: Vec<f64>) {
        debug_assert_eq!(amplitudes.len(), self.phases.len());
        self.amplitudes = amplitudes;
    }

    pub(crate) fn phases_mut(&mut self) -> &mut Vec<Vec<f64>> {
        &mut self.phases
    }
}

/// Sampled received complex envelope on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeTrace {
    pub samples: Vec<Complex64>,
    pub grid: SamplingGrid,
    /// Start time of the first sample (s).
    pub t0: f64,
}

impl EnvelopeTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time of sample `k`.
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.grid.sample_interval_s
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.norm()).collect()
    }

    pub fn magnitudes_db(&self) -> Vec<f64> {
        self.samples.iter().map(|s| magnitude_db(s.norm())).collect()
    }
}

/// One phasor-sum sample of the received envelope at time `t`, with the i-th
/// RIS reflecting with amplitude `ris_state(i).0` and phase `ris_state(i).1`.
///
/// This is the single evaluation path shared by [`synthesize`] and the
/// closed-loop searches in [`crate::control`], so a plan re-synthesized
/// offline reproduces the controller's in-loop samples bit for bit.
pub fn sample_envelope_with(
    scenario: &Scenario,
    mut ris_state: impl FnMut(usize) -> (f64, f64),
    t: f64,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    if let Some(los) = &scenario.los {
        let (s, c) = (-TWO_PI * scenario.mobile.max_doppler_hz * t).sin_cos();
        acc += Complex64::new(c, s) / los.distance_m;
    }
    let mut ris_ordinal = 0usize;
    for io in &scenario.interactors {
        let (amp, theta) = if io.is_ris() {
            let st = ris_state(ris_ordinal);
            ris_ordinal += 1;
            st
        } else {
            (1.0, 0.0)
        };
        let phase = TWO_PI * io.doppler_hz * t - io.constant_phase_rad + theta;
        let (s, c) = phase.sin_cos();
        acc += io.plain_reflection * Complex64::new(c, s) * (amp / io.initial_radio_path_m);
    }
    acc * (scenario.carrier.wavelength_m / FOUR_PI)
}

/// Synthesize the full envelope trace of `scenario` under `plan`.
pub fn synthesize(
    scenario: &Scenario,
    plan: &PhasePlan,
    grid: &SamplingGrid,
) -> Result<EnvelopeTrace> {
    let n_ris = scenario.n_ris();
    if plan.ris_count() != n_ris {
        return Err(SimError::Contract(format!(
            "plan covers {} RISs but the scenario has {}",
            plan.ris_count(),
            n_ris
        )));
    }
    if n_ris > 0 && plan.sample_count() != grid.sample_count {
        return Err(SimError::Contract(format!(
            "plan has {} samples but the grid has {}",
            plan.sample_count(),
            grid.sample_count
        )));
    }
    let samples = (0..grid.sample_count)
        .map(|k| {
            let t = k as f64 * grid.sample_interval_s;
            sample_envelope_with(scenario, |i| (plan.amplitude(i), plan.phase(i, k)), t)
        })
        .collect();
    Ok(EnvelopeTrace {
        samples,
        grid: grid.clone(),
        t0: 0.0,
    })
}

/// Closed-form two-ray envelope magnitude
/// (λ/4π)·(1/d_LOS² + 1/d_R² − 2cos(4πf_D t)/(d_LOS·d_R))^{1/2} with
/// d_R = d_LOS + 2·d_1. Independent of the sampled synthesis path.
///
/// Evaluated as (A−B)² + 4AB·sin²(2πf_D t), which is the same radical
/// without the cancellation that the textbook form suffers near the nulls.
pub fn two_ray_magnitude_closed_form(
    d_los_m: f64,
    d1_m: f64,
    max_doppler_hz: f64,
    wavelength_m: f64,
    t: f64,
) -> Result<f64> {
    check_two_ray(d_los_m, d1_m, wavelength_m)?;
    let a = 1.0 / d_los_m;
    let b = 1.0 / (d_los_m + 2.0 * d1_m);
    let s = (TWO_PI * max_doppler_hz * t).sin();
    let sq = (a - b) * (a - b) + 4.0 * a * b * s * s;
    Ok(wavelength_m / FOUR_PI * sq.sqrt())
}

/// Constant magnitudes of the co-phased (max) and out-phased (min) two-ray
/// envelope: (λ/4π)·(1/d_LOS ± 1/(d_LOS + 2·d_1)).
pub fn max_min_magnitude(d_los_m: f64, d1_m: f64, wavelength_m: f64) -> Result<(f64, f64)> {
    check_two_ray(d_los_m, d1_m, wavelength_m)?;
    let d_r = d_los_m + 2.0 * d1_m;
    let scale = wavelength_m / FOUR_PI;
    Ok((
        scale * (1.0 / d_los_m + 1.0 / d_r),
        scale * (1.0 / d_los_m - 1.0 / d_r),
    ))
}

/// Two-ray envelope magnitude when the RIS phase was last refreshed Δt ago
/// (the stale-phase expression; Δt = 0 recovers the co-phased maximum).
pub fn stale_phase_magnitude(
    d_los_m: f64,
    d1_m: f64,
    max_doppler_hz: f64,
    wavelength_m: f64,
    delta_t: f64,
) -> Result<f64> {
    check_two_ray(d_los_m, d1_m, wavelength_m)?;
    if !(delta_t >= 0.0) {
        return Err(SimError::Domain(format!(
            "phase age must be non-negative, got {delta_t}"
        )));
    }
    // (A−B)² + 4AB·cos²(2πf_D·Δt): the + variant of the stable radical.
    let a = 1.0 / d_los_m;
    let b = 1.0 / (d_los_m + 2.0 * d1_m);
    let c = (TWO_PI * max_doppler_hz * delta_t).cos();
    let sq = (a - b) * (a - b) + 4.0 * a * b * c * c;
    Ok(wavelength_m / FOUR_PI * sq.sqrt())
}

fn check_two_ray(d_los_m: f64, d1_m: f64, wavelength_m: f64) -> Result<()> {
    if !(d_los_m > 0.0) || !(d1_m > 0.0) || !(wavelength_m > 0.0) {
        return Err(SimError::Domain(format!(
            "two-ray parameters must be positive, got d_los={d_los_m}, d1={d1_m}, lambda={wavelength_m}"
        )));
    }
    Ok(())
}

/// Many-element RIS replacing the single specular reflector of the two-ray
/// setup: a square planar grid of elements at λ/2 spacing, broadside to the
/// incident ray, all sharing the far-field path loss while keeping their
/// individual path lengths in the phase terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementWiseRis {
    /// Element gain G_e.
    pub element_gain: f64,
    /// (y, z) offsets of each element from the grid center (m).
    pub element_offsets: Vec<[f64; 2]>,
}

impl ElementWiseRis {
    /// `side`×`side` grid centered on the boresight axis.
    pub fn square_grid(side: usize, element_gain: f64, carrier: &CarrierConfig) -> Result<Self> {
        if side == 0 {
            return Err(SimError::Domain("element grid side must be >= 1".into()));
        }
        if !(element_gain > 0.0) {
            return Err(SimError::Domain(format!(
                "element gain must be positive, got {element_gain}"
            )));
        }
        let spacing = carrier.wavelength_m / 2.0;
        let center = (side as f64 - 1.0) / 2.0;
        let mut element_offsets = Vec::with_capacity(side * side);
        for row in 0..side {
            for col in 0..side {
                element_offsets.push([
                    (col as f64 - center) * spacing,
                    (row as f64 - center) * spacing,
                ]);
            }
        }
        Ok(Self {
            element_gain,
            element_offsets,
        })
    }

    pub fn element_count(&self) -> usize {
        self.element_offsets.len()
    }

    /// Path length BS → element n → MS(t) for the boresight two-ray layout
    /// (BS at −d_LOS, element plane at +d_1, MS at V·t).
    pub fn element_path(&self, n: usize, d_los_m: f64, d1_m: f64, speed_mps: f64, t: f64) -> f64 {
        let [y, z] = self.element_offsets[n];
        let lateral = y * y + z * z;
        let bs_leg = ((d_los_m + d1_m) * (d_los_m + d1_m) + lateral).sqrt();
        let ms_x = d1_m - speed_mps * t;
        let ms_leg = (ms_x * ms_x + lateral).sqrt();
        bs_leg + ms_leg
    }
}

/// Per-element phase policy for [`element_wise_synthesize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementPhases {
    /// θ_n(t) = 2π(d_{R_n}(t) − d_LOS(t))/λ: every element phasor lands on
    /// the LOS phasor.
    AlignToLos,
    /// θ_n(t) = 0: uncontrolled elements, the fade pattern reappears.
    Zero,
}

/// Element-wise envelope for the two-ray scenario (LOS plus one boresight
/// RIS):
///
/// ```text
/// r(t) = (λ/4π d_LOS)·e^{−j2π d_LOS(t)/λ}
///        + Σ_n (λ²G_e/((4π)²(d_LOS+d_1)(d_1−Vt)))·e^{j(θ_n(t) − 2π d_{R_n}(t)/λ)}
/// ```
///
/// The element amplitude keeps its 1/(d_1 − V·t) factor, so the mobile must
/// stay short of the surface over the whole grid.
pub fn element_wise_synthesize(
    scenario: &Scenario,
    ris: &ElementWiseRis,
    policy: ElementPhases,
    grid: &SamplingGrid,
) -> Result<EnvelopeTrace> {
    let los = scenario.los.as_ref().ok_or_else(|| {
        SimError::Contract("element-wise synthesis needs the two-ray LOS scenario".into())
    })?;
    if scenario.interactors.len() != 1 || !scenario.interactors[0].is_ris() {
        return Err(SimError::Contract(
            "element-wise synthesis needs exactly one RIS-kind interactor".into(),
        ));
    }
    let io = &scenario.interactors[0];
    let d_los = los.distance_m;
    let d1 = (io.initial_radio_path_m - d_los) / 2.0;
    if !(d1 > 0.0) {
        return Err(SimError::Domain(format!(
            "boresight offset derived from the radio path is not positive: {d1}"
        )));
    }
    let lambda = scenario.carrier.wavelength_m;
    let speed = scenario.mobile.speed_mps;
    let t_end = (grid.sample_count - 1) as f64 * grid.sample_interval_s;
    if d1 - speed * t_end <= 0.0 {
        return Err(SimError::Domain(
            "mobile passes the surface within the sampling grid".into(),
        ));
    }
    let los_amp = lambda / (FOUR_PI * d_los);
    let elem_scale = lambda * lambda * ris.element_gain / (FOUR_PI * FOUR_PI * (d_los + d1));
    let samples = grid
        .times()
        .map(|t| {
            let d_los_t = d_los + speed * t;
            let (s, c) = (-TWO_PI * d_los_t / lambda).sin_cos();
            let mut acc = Complex64::new(c, s) * los_amp;
            let elem_amp = elem_scale / (d1 - speed * t);
            for n in 0..ris.element_count() {
                let d_rn = ris.element_path(n, d_los, d1, speed, t);
                let theta = match policy {
                    ElementPhases::AlignToLos => TWO_PI * (d_rn - d_los_t) / lambda,
                    ElementPhases::Zero => 0.0,
                };
                let (s, c) = (theta - TWO_PI * d_rn / lambda).sin_cos();
                acc += Complex64::new(c, s) * elem_amp;
            }
            acc
        })
        .collect();
    Ok(EnvelopeTrace {
        samples,
        grid: grid.clone(),
        t0: 0.0,
    })
}
