//! RIS phase control strategies.
//!
//! Every strategy produces a [`PhasePlan`]: one reflection phase per RIS
//! per grid sample. The closed-form plans (alignment, out-phasing, Doppler
//! synthesis, elimination) write the phase trajectory directly; the
//! assignment searches enumerate, at every sample, all injective pairings
//! of RISs with plain reflectors, score each pairing on the resulting
//! envelope sample, and keep the winner.
//!
//! The searches separate the controller from the plant: phases and
//! candidate estimates come from the controller's view of the scenario
//! (which may carry erroneous Doppler shifts), while the realized samples
//! that feed the smoothing criterion always come from the true scenario.

use itertools::Itertools;
use num_complex::Complex64;

use crate::envelope::{sample_envelope_with, PhasePlan};
use crate::error::{Result, SimError};
use crate::geometry::{wrap_angle, Interactor, SamplingGrid, Scenario, TWO_PI};

use std::f64::consts::PI;

/// Ceiling on the per-sample permutation count of the assignment searches.
pub const DEFAULT_PERMUTATION_CAP: u64 = 1_000_000;

/// Phase-control policy selector.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Rotate every RIS phasor onto the direct path.
    AlignToLos,
    /// Two-ray single RIS rotated opposite the direct path: pins the
    /// envelope at its minimum.
    OutPhaseLos,
    /// Single RIS out-phased with one plain reflector (interactor index).
    CancelIo { target: usize },
    /// Closed-form per-sample optimum for the LOS + one RIS + one plain
    /// reflector layout.
    OptimalSingleRis,
    /// Fresh uniform phase in [0, 2π) every sample.
    RandomPhase { seed: u64 },
    /// Move the reflected tone to a chosen Doppler frequency.
    DopplerSynthesis { f_tilde_hz: f64 },
    /// Blocked LOS, RIS-only environment: cancel every Doppler shift.
    NlosDopplerEliminate,
    /// Both reflectors of the two-reflector layout carry RISs; align both
    /// to the direct path.
    TwoRisAlign,
    /// Per-sample assignment search maximizing |r|.
    PermSearchMax,
    /// Per-sample assignment search minimizing ||r| − |r_prev||.
    PermSearchSmooth,
    /// Blocked LOS: align every RIS to the strongest path.
    AlignToStrongest,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::AlignToLos => write!(f, "align-to-los"),
            Strategy::OutPhaseLos => write!(f, "out-phase-los"),
            Strategy::CancelIo { target } => write!(f, "cancel-io:{target}"),
            Strategy::OptimalSingleRis => write!(f, "optimal-single-ris"),
            Strategy::RandomPhase { seed } => write!(f, "random:{seed}"),
            Strategy::DopplerSynthesis { f_tilde_hz } => {
                write!(f, "doppler-synthesis:{f_tilde_hz}")
            }
            Strategy::NlosDopplerEliminate => write!(f, "nlos-eliminate"),
            Strategy::TwoRisAlign => write!(f, "two-ris-align"),
            Strategy::PermSearchMax => write!(f, "perm-search-max"),
            Strategy::PermSearchSmooth => write!(f, "perm-search-smooth"),
            Strategy::AlignToStrongest => write!(f, "align-to-strongest"),
        }
    }
}

/// Assignment-search flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Align every RIS to the LOS (or strongest) path; no search.
    M1,
    /// Search maximizing the envelope sample.
    M2,
    /// Search minimizing sample-to-sample envelope variation.
    M3,
}

/// Whether the direct path participates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LosMode {
    Los,
    Nlos,
}

/// One sample's RIS-to-reflector pairing.
///
/// Ordinals index the RIS-kind (respectively plain-kind) interactors in
/// scenario list order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    /// (ris_ordinal, plain_ordinal) cancellation pairs.
    pub pairs: Vec<(usize, usize)>,
    /// RIS ordinals aligned to the LOS/strongest path instead.
    pub remainder: Vec<usize>,
}

/// Per-sample record of what the search chose.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchLog {
    pub assignments: Vec<Assignment>,
    /// Controller's estimate of |r| under the applied phases, per sample.
    pub estimates_mag: Vec<f64>,
}

/// A materialized search plan plus its per-sample log.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodPlan {
    pub plan: PhasePlan,
    pub log: SearchLog,
}

/// Number of injective assignments of the smaller group onto the larger:
/// P(n, k) = n!/(n−k)!.
pub fn permutation_count(n: usize, k: usize) -> u128 {
    let mut count: u128 = 1;
    for i in 0..k {
        count = count.saturating_mul((n - i) as u128);
    }
    count
}

fn unit(phase: f64) -> Complex64 {
    let (s, c) = phase.sin_cos();
    Complex64::new(c, s)
}

/// θ_i(t) = −2πf_{R,i}·t + ψ_i − 2πf_D·t: every RIS phasor co-rotates with
/// the direct path.
pub fn plan_align_to_los(scenario: &Scenario, grid: &SamplingGrid) -> Result<PhasePlan> {
    if scenario.los.is_none() {
        return Err(SimError::Contract(
            "align-to-los needs a LOS path (use align-to-strongest instead)".into(),
        ));
    }
    let ris: Vec<&Interactor> = scenario.interactors.iter().filter(|i| i.is_ris()).collect();
    let f_d = scenario.mobile.max_doppler_hz;
    Ok(PhasePlan::from_fn(ris.len(), grid, |i, t| {
        -TWO_PI * ris[i].doppler_hz * t + ris[i].constant_phase_rad - TWO_PI * f_d * t
    }))
}

/// Alignment plus π: the reflected ray cancels against the direct one and
/// the envelope sits at its minimum.
pub fn plan_out_phase_los(scenario: &Scenario, grid: &SamplingGrid) -> Result<PhasePlan> {
    if scenario.los.is_none() || scenario.n_ris() != 1 || scenario.n_plain() != 0 {
        return Err(SimError::Contract(
            "out-phase-los needs the two-ray shape: LOS plus exactly one RIS".into(),
        ));
    }
    let ris = scenario.interactors.iter().find(|i| i.is_ris()).unwrap();
    let f_d = scenario.mobile.max_doppler_hz;
    Ok(PhasePlan::from_fn(1, grid, |_, t| {
        -TWO_PI * ris.doppler_hz * t + ris.constant_phase_rad - TWO_PI * f_d * t + PI
    }))
}

/// θ_i(t) = 2π(f̃_D − f_{R,i})·t + ψ_i: every RIS phasor lands on the
/// synthesized Doppler frequency f̃_D.
pub fn plan_doppler_synthesis(
    scenario: &Scenario,
    f_tilde_hz: f64,
    grid: &SamplingGrid,
) -> Result<PhasePlan> {
    let nyquist = 0.5 * grid.sample_rate_hz();
    if !(f_tilde_hz.abs() < nyquist) {
        return Err(SimError::Domain(format!(
            "synthesized Doppler {f_tilde_hz} Hz exceeds half the sampling rate {nyquist} Hz"
        )));
    }
    let ris: Vec<&Interactor> = scenario.interactors.iter().filter(|i| i.is_ris()).collect();
    Ok(PhasePlan::from_fn(ris.len(), grid, |i, t| {
        TWO_PI * (f_tilde_hz - ris[i].doppler_hz) * t + ris[i].constant_phase_rad
    }))
}

/// Fresh i.i.d. uniform phase in [0, 2π) per RIS per sample, drawn row by
/// row from a seeded generator.
pub fn plan_random(scenario: &Scenario, grid: &SamplingGrid, seed: u64) -> PhasePlan {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = scenario.n_ris();
    let phases = (0..n)
        .map(|_| {
            (0..grid.sample_count)
                .map(|_| rng.gen::<f64>() * TWO_PI)
                .collect()
        })
        .collect();
    PhasePlan::new(phases, vec![1.0; n]).expect("uniform draws are valid phases")
}

/// θ_i(t) = −2πf_{R,i}·t + ψ_i: with no LOS and no plain reflectors, every
/// phasor freezes and the trace is a single constant complex value.
pub fn plan_nlos_eliminate(scenario: &Scenario, grid: &SamplingGrid) -> Result<PhasePlan> {
    if scenario.los.is_some() || scenario.n_plain() != 0 {
        return Err(SimError::Contract(
            "doppler elimination needs a blocked LOS and RIS-only reflectors".into(),
        ));
    }
    let ris: Vec<&Interactor> = scenario.interactors.iter().filter(|i| i.is_ris()).collect();
    Ok(PhasePlan::from_fn(ris.len(), grid, |i, t| {
        -TWO_PI * ris[i].doppler_hz * t + ris[i].constant_phase_rad
    }))
}

/// Single RIS out-phased with the plain reflector at interactor index
/// `target`: θ(t) = −2πf_R·t + ψ + 2πf_I·t − φ.
pub fn plan_cancel_io(
    scenario: &Scenario,
    target: usize,
    grid: &SamplingGrid,
) -> Result<PhasePlan> {
    if scenario.n_ris() != 1 {
        return Err(SimError::Contract(format!(
            "cancel-io drives exactly one RIS, the scenario has {}",
            scenario.n_ris()
        )));
    }
    let io = scenario.interactors.get(target).ok_or_else(|| {
        SimError::Contract(format!("cancel-io target {target} is out of range"))
    })?;
    if io.is_ris() {
        return Err(SimError::Contract(format!(
            "cancel-io target {target} must be a plain reflector"
        )));
    }
    let ris = scenario.interactors.iter().find(|i| i.is_ris()).unwrap();
    let (f_i, phi) = (io.doppler_hz, io.constant_phase_rad);
    Ok(PhasePlan::from_fn(1, grid, |_, t| {
        -TWO_PI * ris.doppler_hz * t + ris.constant_phase_rad + TWO_PI * f_i * t - phi
    }))
}

fn single_ris_shape(scenario: &Scenario) -> Result<(&Interactor, &Interactor, f64)> {
    let d_los = match &scenario.los {
        Some(los) if scenario.n_ris() == 1 && scenario.n_plain() == 1 => los.distance_m,
        _ => {
            return Err(SimError::Contract(
                "the optimal phase applies to LOS plus one RIS plus one plain reflector".into(),
            ))
        }
    };
    let ris = scenario.interactors.iter().find(|i| i.is_ris()).unwrap();
    let plain = scenario.interactors.iter().find(|i| !i.is_ris()).unwrap();
    Ok((ris, plain, d_los))
}

/// Reflection phase maximizing |r(t)| at one instant for the LOS + one RIS
/// + one plain reflector layout.
///
/// Maximizing A·cosθ + B·sinθ with
///
/// ```text
/// A =  (1/d_LOS)·cos(2π(f_R+f_D)t − ψ) − (1/d̃_I)·cos(2π(f_R−f_I)t − ψ + φ)
/// B = −(1/d_LOS)·sin(2π(f_R+f_D)t − ψ) + (1/d̃_I)·sin(2π(f_R−f_I)t − ψ + φ)
/// ```
///
/// gives θ = atan2(B, A), the harmonic-addition maximizer. When A = 0 this
/// degenerates to ±π/2 with the sign of B, which is exactly the larger of
/// the two stationary candidates.
pub fn optimal_single_ris_phase(scenario: &Scenario, t: f64) -> Result<f64> {
    let (ris, plain, d_los) = single_ris_shape(scenario)?;
    let f_d = scenario.mobile.max_doppler_hz;
    let (f_r, psi) = (ris.doppler_hz, ris.constant_phase_rad);
    let (f_i, phi) = (plain.doppler_hz, plain.constant_phase_rad);
    let r_los = 1.0 / d_los;
    let r_2 = 1.0 / plain.initial_radio_path_m;
    let los_arg = TWO_PI * (f_r + f_d) * t - psi;
    let io_arg = TWO_PI * (f_r - f_i) * t - psi + phi;
    let a = r_los * los_arg.cos() - r_2 * io_arg.cos();
    let b = -r_los * los_arg.sin() + r_2 * io_arg.sin();
    Ok(wrap_angle(b.atan2(a)))
}

/// [`optimal_single_ris_phase`] evaluated over the whole grid.
pub fn plan_optimal_single_ris(scenario: &Scenario, grid: &SamplingGrid) -> Result<PhasePlan> {
    single_ris_shape(scenario)?;
    let phases: Vec<f64> = grid
        .times()
        .map(|t| optimal_single_ris_phase(scenario, t))
        .collect::<Result<_>>()?;
    PhasePlan::new(vec![phases], vec![1.0])
}

/// Which path the no-search method aligns to when the LOS is blocked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Strongest {
    Ris(usize),
    Plain(usize),
}

fn strongest_path(ris: &[&Interactor], plain: &[&Interactor]) -> Strongest {
    let arg_min = |list: &[&Interactor]| -> Option<(usize, f64)> {
        list.iter()
            .enumerate()
            .map(|(i, io)| (i, io.initial_radio_path_m))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    };
    let best_ris = arg_min(ris);
    match (best_ris, arg_min(plain)) {
        (Some((i, dr)), Some((_, di))) if dr < di => Strongest::Ris(i),
        (Some(_), Some((k, _))) => Strongest::Plain(k),
        (Some((i, _)), None) => Strongest::Ris(i),
        (None, _) => unreachable!("methods need at least one RIS"),
    }
}

/// Assignment-search methods with the controller driven by `scenario`
/// itself, no hold, and the default permutation cap.
pub fn plan_method(
    scenario: &Scenario,
    grid: &SamplingGrid,
    method: Method,
    mode: LosMode,
) -> Result<MethodPlan> {
    plan_method_with_views(
        scenario,
        scenario,
        grid,
        method,
        mode,
        1,
        DEFAULT_PERMUTATION_CAP,
    )
}

/// Full-control entry point for the search methods.
///
/// `controller` is the scenario as the phase controller believes it to be
/// (possibly with erroneous Doppler shifts); `plant` is the true scenario
/// that realizes the received samples. Phases are recomputed every
/// `hold_samples` samples and held in between; the hold covers the whole
/// controller, assignment searches included.
pub fn plan_method_with_views(
    controller: &Scenario,
    plant: &Scenario,
    grid: &SamplingGrid,
    method: Method,
    mode: LosMode,
    hold_samples: usize,
    permutation_cap: u64,
) -> Result<MethodPlan> {
    let n = controller.n_ris();
    let m = controller.n_plain();
    if n == 0 {
        return Err(SimError::Contract(
            "no RIS in the scenario: none of the methods are applicable".into(),
        ));
    }
    if hold_samples == 0 {
        return Err(SimError::Contract("hold length must be >= 1 sample".into()));
    }
    if plant.n_ris() != n || plant.n_plain() != m || plant.los.is_some() != controller.los.is_some()
    {
        return Err(SimError::Contract(
            "controller and plant scenarios disagree in shape".into(),
        ));
    }
    match mode {
        LosMode::Los if controller.los.is_none() => {
            return Err(SimError::Contract("LOS mode on a scenario without a LOS path".into()))
        }
        LosMode::Nlos if controller.los.is_some() => {
            return Err(SimError::Contract(
                "NLOS mode on a scenario with a LOS path (drop it first)".into(),
            ))
        }
        _ => {}
    }
    if method != Method::M1 {
        let count = permutation_count(n.max(m), n.min(m));
        if count > permutation_cap as u128 {
            return Err(SimError::Resource(format!(
                "assignment search needs {count} permutations per sample, cap is {permutation_cap}"
            )));
        }
    }

    let ris: Vec<&Interactor> = controller.interactors.iter().filter(|i| i.is_ris()).collect();
    let plain: Vec<&Interactor> = controller
        .interactors
        .iter()
        .filter(|i| !i.is_ris())
        .collect();
    let f_d = controller.mobile.max_doppler_hz;
    let d_los = controller.los.as_ref().map(|l| l.distance_m);
    let scale = controller.carrier.wavelength_m / (2.0 * TWO_PI);
    let inv_dr: Vec<f64> = ris.iter().map(|io| 1.0 / io.initial_radio_path_m).collect();
    let inv_di: Vec<f64> = plain.iter().map(|io| 1.0 / io.initial_radio_path_m).collect();
    let sum_inv_dr: f64 = inv_dr.iter().sum();
    let strongest = strongest_path(&ris, &plain);
    // RIS ordinals sorted by path length: first unused entry is the
    // strongest remaining one.
    let ris_by_path: Vec<usize> = {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| ris[a].initial_radio_path_m.total_cmp(&ris[b].initial_radio_path_m));
        order
    };

    let n_s = grid.sample_count;
    let mut phases = vec![vec![0.0; n_s]; n];
    let mut assignments = Vec::with_capacity(n_s);
    let mut estimates = Vec::with_capacity(n_s);
    let mut col = vec![0.0; n];
    let mut current_assignment = Assignment {
        pairs: Vec::new(),
        remainder: (0..n).collect(),
    };
    let mut prev_realized_mag = 0.0;

    let align_to_los = |i: usize, t: f64| -> f64 {
        wrap_angle(-TWO_PI * ris[i].doppler_hz * t + ris[i].constant_phase_rad - TWO_PI * f_d * t)
    };
    let cancel_phase = |i: usize, k: usize, t: f64| -> f64 {
        wrap_angle(
            -TWO_PI * ris[i].doppler_hz * t + ris[i].constant_phase_rad
                + TWO_PI * plain[k].doppler_hz * t
                - plain[k].constant_phase_rad,
        )
    };
    let align_to_ris = |i: usize, a: usize, t: f64| -> f64 {
        if i == a {
            0.0
        } else {
            wrap_angle(
                -TWO_PI * ris[i].doppler_hz * t + ris[i].constant_phase_rad
                    + TWO_PI * ris[a].doppler_hz * t
                    - ris[a].constant_phase_rad,
            )
        }
    };
    let align_to_plain = |i: usize, k: usize, t: f64| -> f64 {
        wrap_angle(
            -TWO_PI * ris[i].doppler_hz * t + ris[i].constant_phase_rad
                + TWO_PI * plain[k].doppler_hz * t
                - plain[k].constant_phase_rad
                + PI,
        )
    };

    for sample in 0..n_s {
        let t = sample as f64 * grid.sample_interval_s;
        if sample % hold_samples == 0 {
            match method {
                Method::M1 => {
                    for (i, c) in col.iter_mut().enumerate() {
                        *c = match (mode, strongest) {
                            (LosMode::Los, _) => align_to_los(i, t),
                            (LosMode::Nlos, Strongest::Ris(a)) => align_to_ris(i, a, t),
                            (LosMode::Nlos, Strongest::Plain(k)) => align_to_plain(i, k, t),
                        };
                    }
                    current_assignment = Assignment {
                        pairs: Vec::new(),
                        remainder: (0..n).collect(),
                    };
                }
                Method::M2 | Method::M3 => {
                    // Unit phasors under the controller's model.
                    let los_u = unit(-TWO_PI * f_d * t);
                    let ris_nat: Vec<Complex64> = ris
                        .iter()
                        .map(|io| unit(TWO_PI * io.doppler_hz * t - io.constant_phase_rad))
                        .collect();
                    let io_u: Vec<Complex64> = plain
                        .iter()
                        .map(|io| unit(TWO_PI * io.doppler_hz * t - io.constant_phase_rad))
                        .collect();
                    let mut base = match (mode, d_los) {
                        (LosMode::Los, Some(d)) => los_u / d,
                        _ => Complex64::new(0.0, 0.0),
                    };
                    for (u, &inv) in io_u.iter().zip(&inv_di) {
                        base -= u * inv;
                    }

                    // Strict improvement keeps the lexicographically first
                    // permutation on ties.
                    let mut best_perm: Vec<usize> = Vec::new();
                    let mut best_score = f64::NEG_INFINITY;
                    let mut consider = |perm: &[usize], est: Complex64| {
                        let mag = scale * est.norm();
                        let score = if method == Method::M2 || sample == 0 {
                            mag
                        } else {
                            -(mag - prev_realized_mag).abs()
                        };
                        if score > best_score {
                            best_score = score;
                            best_perm = perm.to_vec();
                        }
                    };

                    if n <= m {
                        // Every RIS cancels one reflector.
                        for perm in (0..m).permutations(n) {
                            let mut est = base;
                            for (i, &k) in perm.iter().enumerate() {
                                est += io_u[k] * inv_dr[i];
                            }
                            consider(&perm, est);
                        }
                    } else if m == 0 {
                        // Nothing to cancel: the single (empty) assignment
                        // aligns every RIS.
                        let all = match mode {
                            LosMode::Los => los_u * sum_inv_dr,
                            LosMode::Nlos => ris_nat[ris_by_path[0]] * sum_inv_dr,
                        };
                        consider(&[], base + all);
                    } else {
                        let mut used = vec![false; n];
                        for perm in (0..n).permutations(m) {
                            let mut est = base;
                            let mut assigned_inv = 0.0;
                            for (k, &i) in perm.iter().enumerate() {
                                est += io_u[k] * inv_dr[i];
                                assigned_inv += inv_dr[i];
                                used[i] = true;
                            }
                            let rem_inv = sum_inv_dr - assigned_inv;
                            est += match mode {
                                LosMode::Los => los_u * rem_inv,
                                LosMode::Nlos => {
                                    let a = *ris_by_path
                                        .iter()
                                        .find(|&&i| !used[i])
                                        .expect("N > M leaves at least one RIS unassigned");
                                    ris_nat[a] * rem_inv
                                }
                            };
                            consider(&perm, est);
                            for &i in &perm {
                                used[i] = false;
                            }
                        }
                    }

                    // Materialize the winning assignment.
                    let mut pairs = Vec::new();
                    let mut remainder = Vec::new();
                    if n <= m {
                        for (i, &k) in best_perm.iter().enumerate() {
                            col[i] = cancel_phase(i, k, t);
                            pairs.push((i, k));
                        }
                    } else {
                        let mut assigned = vec![false; n];
                        for (k, &i) in best_perm.iter().enumerate() {
                            col[i] = cancel_phase(i, k, t);
                            pairs.push((i, k));
                            assigned[i] = true;
                        }
                        remainder = (0..n).filter(|&i| !assigned[i]).collect();
                        match mode {
                            LosMode::Los => {
                                for &i in &remainder {
                                    col[i] = align_to_los(i, t);
                                }
                            }
                            LosMode::Nlos => {
                                let a = *ris_by_path
                                    .iter()
                                    .find(|&&i| !assigned[i])
                                    .expect("N > M leaves at least one RIS unassigned");
                                for &i in &remainder {
                                    col[i] = align_to_ris(i, a, t);
                                }
                            }
                        }
                        pairs.sort_unstable();
                    }
                    current_assignment = Assignment { pairs, remainder };
                }
            }
        }
        for (row, &theta) in phases.iter_mut().zip(&col) {
            row[sample] = theta;
        }
        assignments.push(current_assignment.clone());
        estimates.push(
            sample_envelope_with(controller, |i| (1.0, col[i]), t).norm(),
        );
        prev_realized_mag = sample_envelope_with(plant, |i| (1.0, col[i]), t).norm();
    }

    Ok(MethodPlan {
        plan: PhasePlan::new(phases, vec![1.0; n])?,
        log: SearchLog {
            assignments,
            estimates_mag: estimates,
        },
    })
}

/// Route a [`Strategy`] to its planner. Search-backed strategies also
/// return their per-sample log.
pub fn plan_for_strategy(
    strategy: &Strategy,
    scenario: &Scenario,
    grid: &SamplingGrid,
) -> Result<(PhasePlan, Option<SearchLog>)> {
    let mode = if scenario.los.is_some() {
        LosMode::Los
    } else {
        LosMode::Nlos
    };
    match strategy {
        Strategy::AlignToLos => Ok((plan_align_to_los(scenario, grid)?, None)),
        Strategy::OutPhaseLos => Ok((plan_out_phase_los(scenario, grid)?, None)),
        Strategy::CancelIo { target } => Ok((plan_cancel_io(scenario, *target, grid)?, None)),
        Strategy::OptimalSingleRis => Ok((plan_optimal_single_ris(scenario, grid)?, None)),
        Strategy::RandomPhase { seed } => Ok((plan_random(scenario, grid, *seed), None)),
        Strategy::DopplerSynthesis { f_tilde_hz } => {
            Ok((plan_doppler_synthesis(scenario, *f_tilde_hz, grid)?, None))
        }
        Strategy::NlosDopplerEliminate => Ok((plan_nlos_eliminate(scenario, grid)?, None)),
        Strategy::TwoRisAlign => {
            if scenario.los.is_none() || scenario.n_ris() != 2 || scenario.n_plain() != 0 {
                return Err(SimError::Contract(
                    "two-ris-align needs LOS plus exactly two RISs".into(),
                ));
            }
            Ok((plan_align_to_los(scenario, grid)?, None))
        }
        Strategy::PermSearchMax => {
            let mp = plan_method(scenario, grid, Method::M2, mode)?;
            Ok((mp.plan, Some(mp.log)))
        }
        Strategy::PermSearchSmooth => {
            let mp = plan_method(scenario, grid, Method::M3, mode)?;
            Ok((mp.plan, Some(mp.log)))
        }
        Strategy::AlignToStrongest => {
            if scenario.los.is_some() {
                return Err(SimError::Contract(
                    "align-to-strongest is the blocked-LOS method; use align-to-los".into(),
                ));
            }
            let mp = plan_method(scenario, grid, Method::M1, LosMode::Nlos)?;
            Ok((mp.plan, Some(mp.log)))
        }
    }
}
