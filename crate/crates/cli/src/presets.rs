//! Built-in figure presets.
//!
//! Every preset pins its full configuration: scenario geometry, sampling
//! grid, strategy, and any imperfection parameters. The common baseline is
//! a 3 GHz carrier with the wavelength pinned to 0.1 m and a 10 m/s mobile
//! (f_D = 100 Hz), sampled every λ/32 of travel (t_s = 0.3125 ms) over a
//! 6λ route (192 samples, FFT 256). The multi-reflector presets extend the
//! route to 30λ (960 samples, FFT 1024); the high-mobility presets resample
//! at 3.125 µs. Sweep presets expand into several labelled runs.

use ris_sim::control::Strategy;
use ris_sim::error::Result;
use ris_sim::geometry::{
    derive_angled_interactor, derive_two_ray_interactor, random_scenario, CarrierConfig,
    Interactor, InteractorKind, MobileConfig, Rect, SamplingGrid, Scenario,
};
use ris_sim::imperfections::{HoldModel, RealisticRisModel};

/// One fully resolved simulation (a preset may expand to several).
#[derive(Debug, Clone)]
pub struct PresetRun {
    /// Sub-run label; files go to `<out>/<label>/` when present.
    pub label: Option<String>,
    pub scenario: Scenario,
    pub grid: SamplingGrid,
    pub strategy: Option<Strategy>,
    /// Doppler-estimate error bound fed to the controller (0 = perfect).
    pub u_hz: f64,
    pub doppler_seed: u64,
    pub hold: Option<HoldModel>,
    pub realistic: Option<RealisticRisModel>,
    /// Also sweep the reflection phase and emit the (t, θ, |r|) surface.
    pub surface: bool,
}

impl PresetRun {
    fn new(scenario: Scenario, grid: SamplingGrid, strategy: Option<Strategy>) -> Self {
        Self {
            label: None,
            scenario,
            grid,
            strategy,
            u_hz: 0.0,
            doppler_seed: 0,
            hold: None,
            realistic: None,
            surface: false,
        }
    }

    fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// `(name, summary)` table backing `list-presets` and name validation.
pub fn catalog() -> &'static [(&'static str, &'static str)] {
    &[
        ("fig2-a", "two-ray fade pattern, d_LOS = 1000 m, d1 = 1000 m, no RIS, 6-wavelength route"),
        ("fig2-b", "two-ray fade pattern, d_LOS = 1250 m, d1 = 750 m, no RIS"),
        ("fig2-c", "two-ray fade pattern, d_LOS = 1500 m, d1 = 500 m, no RIS"),
        ("fig2-d", "two-ray fade pattern, d_LOS = 1750 m, d1 = 250 m, no RIS"),
        ("fig3", "two-ray Doppler spectrum, d_LOS = 1500 m, d1 = 500 m, FFT 256, t_s = 0.3125 ms (sampling distance lambda/32)"),
        ("fig4", "single-RIS LOS alignment pins the envelope at its maximum, d_LOS = 1500 m, d1 = 500 m"),
        ("fig5", "single-RIS out-phasing pins the envelope at its minimum, d_LOS = 1750 m, d1 = 250 m"),
        ("fig6-200", "RIS Doppler synthesis moves the reflected tone to +200 Hz, d_LOS = 1500 m, d1 = 500 m"),
        ("fig6-400", "RIS Doppler synthesis moves the reflected tone to +400 Hz, d_LOS = 1500 m, d1 = 500 m"),
        ("fig7", "random per-sample RIS phases, d_LOS = 1500 m, d1 = 500 m"),
        ("fig9-noris", "blocked LOS, one plain reflector: flat magnitude, tone at +100 Hz; 256 samples, FFT 256"),
        ("fig9", "blocked LOS, one RIS with Doppler elimination: tone moves to 0 Hz; 256 samples, FFT 256"),
        ("fig11", "direct path plus two plain reflectors (second at 60 deg), d_LOS = d1 = 1000 m, d2 = 500 m"),
        ("fig12-m1", "RIS on the boresight reflector aligned to the LOS path (two-reflector layout)"),
        ("fig12-m3", "RIS on the boresight reflector cancelling the 60-deg reflector (two-reflector layout)"),
        ("fig13", "envelope magnitude surface over time x reflection phase for the two-reflector layout (global max -48.69 dB)"),
        ("fig14", "closed-form optimal reflection phase for the two-reflector layout"),
        ("fig17-noris", "10 random plain reflectors, no RIS, 30-wavelength route, 960 samples, FFT 1024"),
        ("fig17-allris", "10 random reflectors all carrying RISs, aligned to LOS: constant envelope benchmark"),
        ("fig18", "random layout N = 3 RIS, M = 7 plain, methods m1/m2/m3 sweep"),
        ("fig19", "random layout N = 5 RIS, M = 5 plain, methods m1/m2/m3 sweep"),
        ("fig20", "random layout N = 7 RIS, M = 3 plain, methods m1/m2/m3 sweep"),
        ("fig21", "blocked LOS, N = 3 RIS, M = 7 plain, methods m1/m2/m3 sweep"),
        ("fig22", "blocked LOS, N = 7 RIS, M = 3 plain, methods m1/m2/m3 sweep"),
        ("fig23", "perfect vs realistic RIS (-1 dB, phases in [-150 deg, +140 deg]) on the two-ray and two-reflector layouts"),
        ("fig24", "erroneous Doppler feedback U in {0, 1, 4} Hz x methods m1/m2/m3 on the N = 7, M = 3 layout"),
        ("fig25a", "held phases with Q = 1, 20, and 50 samples at V = 100 m/s (t_s = 3.125 us) plus the no-RIS benchmark"),
        ("fig25b", "fixed 12.5 us reconfiguration interval under f_D = 500, 2000, 4000 Hz (V = 50, 200, 400 m/s)"),
        ("table1", "fade metrics sweep over (N, M) in {(3,7), (5,5), (7,3)} x methods m1/m2/m3, n_s = 960, t_s = 0.3125 ms"),
    ]
}

pub fn is_preset(name: &str) -> bool {
    catalog().iter().any(|(n, _)| *n == name)
}

fn pinned_carrier() -> CarrierConfig {
    CarrierConfig::with_pinned_wavelength(3.0e9, 0.1).expect("pinned carrier is valid")
}

fn mobile(speed: f64, carrier: &CarrierConfig) -> MobileConfig {
    MobileConfig::new(speed, carrier).expect("preset speeds are valid")
}

/// 6λ route at V = 10 m/s: 192 samples of 0.3125 ms, FFT 256.
fn short_grid() -> SamplingGrid {
    SamplingGrid::new(192, 0.3125e-3, 256).expect("valid grid")
}

/// 30λ route: 960 samples of 0.3125 ms, FFT 1024.
fn long_grid() -> SamplingGrid {
    SamplingGrid::new(960, 0.3125e-3, 1024).expect("valid grid")
}

/// High-mobility grid: 960 samples of 3.125 µs, FFT 1024.
fn fast_grid() -> SamplingGrid {
    SamplingGrid::new(960, 3.125e-6, 1024).expect("valid grid")
}

/// Two-ray scenario in the idealized configuration the closed-form
/// expressions assume: constant phases zeroed (whole turns).
fn two_ray_ideal(d_los: f64, d1: f64, kind: InteractorKind) -> Scenario {
    let carrier = pinned_carrier();
    let mob = mobile(10.0, &carrier);
    let io = Interactor::with_constant_phase(kind, 0.0, d_los + 2.0 * d1, 0.0, &mob)
        .expect("preset geometry is valid");
    Scenario::new(carrier, mob, Some(d_los), vec![io]).expect("preset scenario is valid")
}

/// Direct path + boresight reflector (d1) + 60° reflector (d2), constant
/// phases retained.
fn two_reflector(d_los: f64, d1: f64, d2: f64, first_kind: InteractorKind) -> Scenario {
    let carrier = pinned_carrier();
    let mob = mobile(10.0, &carrier);
    let io1 = derive_two_ray_interactor(first_kind, d_los, d1, &carrier, &mob)
        .expect("preset geometry is valid");
    let io2 = derive_angled_interactor(
        InteractorKind::PlainIo,
        d_los,
        d2,
        60f64.to_radians(),
        &carrier,
        &mob,
    )
    .expect("preset geometry is valid");
    Scenario::new(carrier, mob, Some(d_los), vec![io1, io2]).expect("preset scenario is valid")
}

/// Placement region for the random multi-reflector layouts (the layout
/// region is an implementation choice documented in the README).
pub fn layout_rect() -> Rect {
    Rect {
        x_min: 200.0,
        x_max: 800.0,
        y_min: -300.0,
        y_max: 300.0,
    }
}

/// Seeded 10-reflector layout with the first `n_ris` carrying RISs; BS at
/// (−1000, 0), MS at the origin.
pub fn random_layout(n_ris: usize, seed: u64) -> Result<Scenario> {
    let carrier = pinned_carrier();
    let mob = mobile(10.0, &carrier);
    random_scenario(
        [-1000.0, 0.0],
        [0.0, 0.0],
        &layout_rect(),
        10,
        n_ris,
        seed,
        &carrier,
        &mob,
    )
}

/// Blocked-LOS two-ray scenario (single reflector, radio path d_LOS+2·d1).
fn nlos_single(d_los: f64, d1: f64, kind: InteractorKind) -> Scenario {
    let carrier = pinned_carrier();
    let mob = mobile(10.0, &carrier);
    let io = derive_two_ray_interactor(kind, d_los, d1, &carrier, &mob)
        .expect("preset geometry is valid");
    Scenario::new(carrier, mob, None, vec![io]).expect("preset scenario is valid")
}

/// High-mobility two-ray scenario at `speed` m/s (f_D = speed/λ·... = 10·speed Hz).
fn fast_two_ray(speed: f64, kind: InteractorKind) -> Scenario {
    let carrier = pinned_carrier();
    let mob = mobile(speed, &carrier);
    let io = Interactor::with_constant_phase(kind, 0.0, 3000.0, 0.0, &mob)
        .expect("preset geometry is valid");
    Scenario::new(carrier, mob, Some(1000.0), vec![io]).expect("preset scenario is valid")
}

fn methods() -> [(&'static str, Strategy, Strategy); 3] {
    // (label, LOS-variant, NLOS-variant)
    [
        ("m1", Strategy::AlignToLos, Strategy::AlignToStrongest),
        ("m2", Strategy::PermSearchMax, Strategy::PermSearchMax),
        ("m3", Strategy::PermSearchSmooth, Strategy::PermSearchSmooth),
    ]
}

fn method_sweep(n_ris: usize, seed: u64, nlos: bool, label_prefix: &str) -> Result<Vec<PresetRun>> {
    let mut runs = Vec::new();
    for (label, los_strategy, nlos_strategy) in methods() {
        let scenario = random_layout(n_ris, seed)?;
        let (scenario, strategy) = if nlos {
            (scenario.without_los()?, nlos_strategy)
        } else {
            (scenario, los_strategy)
        };
        runs.push(
            PresetRun::new(scenario, long_grid(), Some(strategy))
                .labelled(format!("{label_prefix}{label}")),
        );
    }
    Ok(runs)
}

/// Expand a preset into its runs. `seed` steers the random geometry and
/// the random-phase strategy.
pub fn build(name: &str, seed: u64) -> Result<Option<Vec<PresetRun>>> {
    let runs = match name {
        "fig2-a" => vec![PresetRun::new(
            two_ray_ideal(1000.0, 1000.0, InteractorKind::PlainIo),
            short_grid(),
            None,
        )],
        "fig2-b" => vec![PresetRun::new(
            two_ray_ideal(1250.0, 750.0, InteractorKind::PlainIo),
            short_grid(),
            None,
        )],
        "fig2-c" | "fig3" => vec![PresetRun::new(
            two_ray_ideal(1500.0, 500.0, InteractorKind::PlainIo),
            short_grid(),
            None,
        )],
        "fig2-d" => vec![PresetRun::new(
            two_ray_ideal(1750.0, 250.0, InteractorKind::PlainIo),
            short_grid(),
            None,
        )],
        "fig4" => vec![PresetRun::new(
            two_ray_ideal(1500.0, 500.0, InteractorKind::Ris),
            short_grid(),
            Some(Strategy::AlignToLos),
        )],
        "fig5" => vec![PresetRun::new(
            two_ray_ideal(1750.0, 250.0, InteractorKind::Ris),
            short_grid(),
            Some(Strategy::OutPhaseLos),
        )],
        "fig6-200" => vec![PresetRun::new(
            two_ray_ideal(1500.0, 500.0, InteractorKind::Ris),
            short_grid(),
            Some(Strategy::DopplerSynthesis { f_tilde_hz: 200.0 }),
        )],
        "fig6-400" => vec![PresetRun::new(
            two_ray_ideal(1500.0, 500.0, InteractorKind::Ris),
            short_grid(),
            Some(Strategy::DopplerSynthesis { f_tilde_hz: 400.0 }),
        )],
        "fig7" => vec![PresetRun::new(
            two_ray_ideal(1500.0, 500.0, InteractorKind::Ris),
            short_grid(),
            Some(Strategy::RandomPhase { seed }),
        )],
        // The eliminated-Doppler spectrum must be leakage-free, so this
        // grid fills the FFT window exactly (n_s = FFT size).
        "fig9-noris" => vec![PresetRun::new(
            nlos_single(1000.0, 1000.0, InteractorKind::PlainIo),
            SamplingGrid::new(256, 0.3125e-3, 256)?,
            None,
        )],
        "fig9" => vec![PresetRun::new(
            nlos_single(1000.0, 1000.0, InteractorKind::Ris),
            SamplingGrid::new(256, 0.3125e-3, 256)?,
            Some(Strategy::NlosDopplerEliminate),
        )],
        "fig11" => vec![PresetRun::new(
            two_reflector(1000.0, 1000.0, 500.0, InteractorKind::PlainIo),
            short_grid(),
            None,
        )],
        "fig12-m1" => vec![PresetRun::new(
            two_reflector(1000.0, 1000.0, 500.0, InteractorKind::Ris),
            short_grid(),
            Some(Strategy::AlignToLos),
        )],
        "fig12-m3" => vec![PresetRun::new(
            two_reflector(1000.0, 1000.0, 500.0, InteractorKind::Ris),
            short_grid(),
            Some(Strategy::CancelIo { target: 1 }),
        )],
        "fig13" => {
            let mut run = PresetRun::new(
                two_reflector(1000.0, 1000.0, 500.0, InteractorKind::Ris),
                short_grid(),
                Some(Strategy::OptimalSingleRis),
            );
            run.surface = true;
            vec![run]
        }
        "fig14" => vec![PresetRun::new(
            two_reflector(1000.0, 1000.0, 500.0, InteractorKind::Ris),
            short_grid(),
            Some(Strategy::OptimalSingleRis),
        )],
        "fig17-noris" => vec![PresetRun::new(random_layout(0, seed)?, long_grid(), None)],
        "fig17-allris" => vec![PresetRun::new(
            random_layout(10, seed)?,
            long_grid(),
            Some(Strategy::AlignToLos),
        )],
        "fig18" => method_sweep(3, seed, false, "")?,
        "fig19" => method_sweep(5, seed, false, "")?,
        "fig20" => method_sweep(7, seed, false, "")?,
        "fig21" => method_sweep(3, seed, true, "")?,
        "fig22" => method_sweep(7, seed, true, "")?,
        "fig23" => {
            let mut runs = Vec::new();
            for (scenario_label, scenario) in [
                ("two-ray", two_ray_ideal(1000.0, 1000.0, InteractorKind::Ris)),
                (
                    "two-reflector",
                    two_reflector(1000.0, 1000.0, 500.0, InteractorKind::Ris),
                ),
            ] {
                for (ris_label, realistic) in [
                    ("p-ris", None),
                    ("i-ris", Some(RealisticRisModel::default())),
                ] {
                    let mut run = PresetRun::new(
                        scenario.clone(),
                        short_grid(),
                        Some(Strategy::AlignToLos),
                    )
                    .labelled(format!("{scenario_label}-{ris_label}"));
                    run.realistic = realistic;
                    runs.push(run);
                }
            }
            runs
        }
        "fig24" => {
            let mut runs = Vec::new();
            for u in [0.0, 1.0, 4.0] {
                for (label, los_strategy, _) in methods() {
                    let mut run = PresetRun::new(
                        random_layout(7, seed)?,
                        long_grid(),
                        Some(los_strategy),
                    )
                    .labelled(format!("u{}-{}", u as u32, label));
                    run.u_hz = u;
                    run.doppler_seed = 7;
                    runs.push(run);
                }
            }
            runs
        }
        "fig25a" => {
            let mut runs = Vec::new();
            for q in [1usize, 20, 50] {
                let mut run = PresetRun::new(
                    fast_two_ray(100.0, InteractorKind::Ris),
                    fast_grid(),
                    Some(Strategy::AlignToLos),
                )
                .labelled(format!("q{q}"));
                run.hold = Some(HoldModel::Samples(q));
                runs.push(run);
            }
            runs.push(
                PresetRun::new(fast_two_ray(100.0, InteractorKind::PlainIo), fast_grid(), None)
                    .labelled("no-ris"),
            );
            runs
        }
        "fig25b" => {
            let mut runs = Vec::new();
            for speed in [50.0, 200.0, 400.0] {
                let f_d = speed * 10.0;
                let mut run = PresetRun::new(
                    fast_two_ray(speed, InteractorKind::Ris),
                    fast_grid(),
                    Some(Strategy::AlignToLos),
                )
                .labelled(format!("fd{}", f_d as u32));
                run.hold = Some(HoldModel::Interval(12.5e-6));
                runs.push(run);
            }
            runs
        }
        "table1" => {
            let mut runs = Vec::new();
            for (n, m) in [(3usize, 7usize), (5, 5), (7, 3)] {
                for (label, los_strategy, _) in methods() {
                    runs.push(
                        PresetRun::new(random_layout(n, seed)?, long_grid(), Some(los_strategy))
                            .labelled(format!("n{n}m{m}-{label}")),
                    );
                }
            }
            runs
        }
        _ => return Ok(None),
    };
    Ok(Some(runs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_names_are_unique_and_buildable() {
        let names: Vec<&str> = catalog().iter().map(|(n, _)| *n).collect();
        let mut dedup = names.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
        for name in names {
            let runs = build(name, 1).unwrap().unwrap_or_else(|| {
                panic!("catalog preset {name} does not build");
            });
            assert!(!runs.is_empty());
            // Multi-run presets label every run; single-run presets none.
            if runs.len() > 1 {
                assert!(runs.iter().all(|r| r.label.is_some()), "{name}");
            }
        }
        assert!(build("no-such-preset", 1).unwrap().is_none());
    }

    #[test]
    fn sweeps_have_expected_sizes() {
        assert_eq!(build("table1", 1).unwrap().unwrap().len(), 9);
        assert_eq!(build("fig24", 1).unwrap().unwrap().len(), 9);
        assert_eq!(build("fig25a", 1).unwrap().unwrap().len(), 4);
        assert_eq!(build("fig23", 1).unwrap().unwrap().len(), 4);
    }

    #[test]
    fn every_preset_scenario_round_trips_through_json() {
        use ris_sim::scenario_io::ScenarioSpec;
        for (name, _) in catalog() {
            for run in build(name, 1).unwrap().unwrap() {
                let spec = ScenarioSpec::from_scenario(&run.scenario, Some(1));
                let back = ScenarioSpec::from_json(&spec.to_json())
                    .unwrap()
                    .to_scenario()
                    .unwrap();
                assert_eq!(back, run.scenario, "preset {name}");
            }
        }
    }
}
