//! The run pipeline: resolve a preset or scenario file into concrete runs,
//! generate each phase plan, synthesize, analyze, and write data files plus
//! a manifest that pins everything needed to reproduce the run.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;

use ris_sim::control::{
    plan_for_strategy, plan_method_with_views, LosMode, Method, SearchLog, Strategy,
    DEFAULT_PERMUTATION_CAP,
};
use ris_sim::envelope::{sample_envelope_with, synthesize, PhasePlan};
use ris_sim::error::SimError;
use ris_sim::geometry::{SamplingGrid, Scenario, RNG_NAME, TWO_PI};
use ris_sim::imperfections::{
    apply_doppler_error, apply_hold, apply_realistic_ris, DopplerErrorModel, HoldModel,
    RealisticRisModel,
};
use ris_sim::scenario_io::ScenarioSpec;
use ris_sim::spectrum::{doppler_spectrum, fade_metrics, FadeMetrics};

use crate::output;
use crate::presets::{self, PresetRun};

/// Seed used when neither the CLI nor a scenario file provides one.
pub const DEFAULT_SEED: u64 = 1;

/// Number of phase steps in the (t × θ) surface export.
const SURFACE_THETA_STEPS: usize = 512;

/// Command-line errors that should exit with the usage code.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone)]
pub enum Source {
    Preset(String),
    ScenarioFile(PathBuf),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: Source,
    pub strategy: Option<String>,
    pub seed: Option<u64>,
    pub fft: Option<usize>,
    pub out_dir: PathBuf,
    pub u_hz: Option<f64>,
    pub hold_q: Option<usize>,
    pub hold_tr_us: Option<f64>,
    pub realistic_ris: bool,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    /// Seeded generator behind every random draw.
    pub rng: String,
    pub source: String,
    pub seed: u64,
    pub duration_ms: u64,
    pub runs: Vec<RunRecord>,
}

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub label: Option<String>,
    pub scenario: ScenarioSpec,
    pub grid: GridRecord,
    pub strategy: Option<String>,
    pub u_hz: f64,
    pub doppler_seed: u64,
    pub hold_samples: Option<usize>,
    pub realistic_ris: bool,
    pub fft_size: usize,
    pub outputs: Vec<String>,
    pub metrics: FadeMetrics,
}

#[derive(Debug, Serialize)]
pub struct GridRecord {
    pub sample_count: usize,
    pub sample_interval_s: f64,
    pub fft_size: usize,
}

#[derive(Serialize)]
struct MetricsFile {
    delta_r_db: f64,
    r_bar_db: f64,
    n_s: usize,
    t_s: f64,
}

/// Strategy names accepted on the command line.
pub const STRATEGY_NAMES: &[&str] = &[
    "none",
    "m1",
    "m2",
    "m3",
    "align-to-los",
    "align-to-strongest",
    "out-phase-los",
    "cancel-io:<index>",
    "optimal-single-ris",
    "random",
    "doppler-synthesis:<hz>",
    "nlos-eliminate",
    "two-ris-align",
    "perm-search-max",
    "perm-search-smooth",
];

/// Parsed `--strategy` value. `m1` stays symbolic until the scenario is
/// known (it aligns to the LOS path when one exists, to the strongest path
/// otherwise).
#[derive(Debug, Clone, PartialEq)]
pub enum StrategyChoice {
    None,
    M1Auto,
    Fixed(Strategy),
}

pub fn parse_strategy(name: &str, seed: u64) -> Result<StrategyChoice, UsageError> {
    let unknown = || {
        UsageError(format!(
            "unknown strategy '{name}'; valid strategies: {}",
            STRATEGY_NAMES.join(", ")
        ))
    };
    if let Some(rest) = name.strip_prefix("cancel-io:") {
        let target: usize = rest.parse().map_err(|_| unknown())?;
        return Ok(StrategyChoice::Fixed(Strategy::CancelIo { target }));
    }
    if let Some(rest) = name.strip_prefix("doppler-synthesis:") {
        let f: f64 = rest.parse().map_err(|_| unknown())?;
        return Ok(StrategyChoice::Fixed(Strategy::DopplerSynthesis {
            f_tilde_hz: f,
        }));
    }
    Ok(match name {
        "none" => StrategyChoice::None,
        "m1" => StrategyChoice::M1Auto,
        "m2" | "perm-search-max" => StrategyChoice::Fixed(Strategy::PermSearchMax),
        "m3" | "perm-search-smooth" => StrategyChoice::Fixed(Strategy::PermSearchSmooth),
        "align-to-los" => StrategyChoice::Fixed(Strategy::AlignToLos),
        "align-to-strongest" => StrategyChoice::Fixed(Strategy::AlignToStrongest),
        "out-phase-los" => StrategyChoice::Fixed(Strategy::OutPhaseLos),
        "optimal-single-ris" | "optimal" => StrategyChoice::Fixed(Strategy::OptimalSingleRis),
        "random" => StrategyChoice::Fixed(Strategy::RandomPhase { seed }),
        "nlos-eliminate" => StrategyChoice::Fixed(Strategy::NlosDopplerEliminate),
        "two-ris-align" => StrategyChoice::Fixed(Strategy::TwoRisAlign),
        _ => return Err(unknown()),
    })
}

fn resolve_choice(choice: StrategyChoice, scenario: &Scenario) -> Option<Strategy> {
    match choice {
        StrategyChoice::None => None,
        StrategyChoice::M1Auto => Some(if scenario.los.is_some() {
            Strategy::AlignToLos
        } else {
            Strategy::AlignToStrongest
        }),
        StrategyChoice::Fixed(s) => Some(s),
    }
}

/// `list-presets` body: one line per preset.
pub fn preset_listing() -> String {
    let mut out = String::new();
    for (name, summary) in presets::catalog() {
        out.push_str(&format!("{name:14} {summary}\n"));
    }
    out
}

/// Default grid when a scenario file does not imply one: samples every
/// λ/32 of travel over a 6λ route, FFT 256.
fn default_grid(scenario: &Scenario) -> Result<SamplingGrid, SimError> {
    let v = scenario.mobile.speed_mps;
    let t_s = if v > 0.0 {
        scenario.carrier.wavelength_m / (32.0 * v)
    } else {
        0.3125e-3
    };
    SamplingGrid::new(192, t_s, 256)
}

fn scenario_file_runs(path: &Path, cfg: &RunConfig) -> anyhow::Result<(Vec<PresetRun>, u64)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read scenario file {}", path.display()))?;
    let spec = ScenarioSpec::from_json(&text)?;
    let scenario = spec.to_scenario()?;
    let seed = cfg.seed.or(spec.seed).unwrap_or(DEFAULT_SEED);
    let mut run = PresetRun {
        label: None,
        grid: default_grid(&scenario)?,
        scenario,
        strategy: None,
        u_hz: 0.0,
        doppler_seed: seed,
        hold: None,
        realistic: None,
        surface: false,
    };
    if let Some(imp) = &spec.imperfections {
        if let Some(u) = imp.u_hz {
            run.u_hz = u;
        }
        if let Some(s) = imp.doppler_seed {
            run.doppler_seed = s;
        }
        match (imp.hold_q, imp.hold_tr_us) {
            (Some(q), None) => run.hold = Some(HoldModel::Samples(q)),
            (None, Some(us)) => run.hold = Some(HoldModel::Interval(us * 1e-6)),
            (None, None) => {}
            (Some(_), Some(_)) => {
                return Err(SimError::Contract(
                    "scenario imperfections give both hold_q and hold_tr_us".into(),
                )
                .into())
            }
        }
        if let Some(r) = imp.realistic_ris {
            run.realistic = Some(RealisticRisModel::new(
                r.amplitude_db,
                r.phase_min_deg.to_radians(),
                r.phase_max_deg.to_radians(),
            )?);
        }
    }
    Ok((vec![run], seed))
}

/// Execute a configuration: expand it into runs, simulate each, write the
/// data files and the manifest.
pub fn run(cfg: &RunConfig) -> anyhow::Result<RunManifest> {
    let started = Instant::now();
    let (mut runs, seed, source_label) = match &cfg.source {
        Source::Preset(name) => {
            let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
            let runs = presets::build(name, seed)?.ok_or_else(|| {
                UsageError(format!(
                    "unknown preset '{name}'; valid presets:\n{}",
                    preset_listing()
                ))
            })?;
            (runs, seed, format!("preset:{name}"))
        }
        Source::ScenarioFile(path) => {
            let (runs, seed) = scenario_file_runs(path, cfg)?;
            (runs, seed, format!("scenario:{}", path.display()))
        }
    };

    // CLI flags override whatever the preset or file chose.
    let strategy_override = match &cfg.strategy {
        Some(name) => Some(parse_strategy(name, seed)?),
        None => None,
    };
    for run in &mut runs {
        if let Some(choice) = &strategy_override {
            run.strategy = resolve_choice(choice.clone(), &run.scenario);
        }
        if let Some(u) = cfg.u_hz {
            run.u_hz = u;
        }
        match (cfg.hold_q, cfg.hold_tr_us) {
            (Some(q), None) => run.hold = Some(HoldModel::Samples(q)),
            (None, Some(us)) => run.hold = Some(HoldModel::Interval(us * 1e-6)),
            (None, None) => {}
            (Some(_), Some(_)) => unreachable!("clap forbids both hold flags"),
        }
        if cfg.realistic_ris {
            run.realistic = Some(RealisticRisModel::default());
        }
    }

    fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("cannot create {}", cfg.out_dir.display()))?;
    let mut records = Vec::with_capacity(runs.len());
    for run in &runs {
        records.push(execute_run(run, cfg, seed)?);
    }

    let manifest = RunManifest {
        tool: format!("ris-sim {}", env!("CARGO_PKG_VERSION")),
        rng: RNG_NAME.into(),
        source: source_label,
        seed,
        duration_ms: started.elapsed().as_millis() as u64,
        runs: records,
    };
    let manifest_json =
        serde_json::to_string_pretty(&manifest).context("manifest serialization")?;
    output::write_atomic(&cfg.out_dir.join("manifest.json"), &(manifest_json + "\n"))?;
    Ok(manifest)
}

fn build_plan(
    strategy: &Strategy,
    controller: &Scenario,
    plant: &Scenario,
    grid: &SamplingGrid,
    hold_q: usize,
) -> Result<(PhasePlan, Option<SearchLog>), SimError> {
    match strategy {
        Strategy::PermSearchMax | Strategy::PermSearchSmooth => {
            let method = if *strategy == Strategy::PermSearchMax {
                Method::M2
            } else {
                Method::M3
            };
            let mode = if plant.los.is_some() {
                LosMode::Los
            } else {
                LosMode::Nlos
            };
            let mp = plan_method_with_views(
                controller,
                plant,
                grid,
                method,
                mode,
                hold_q,
                DEFAULT_PERMUTATION_CAP,
            )?;
            Ok((mp.plan, Some(mp.log)))
        }
        other => {
            let (plan, log) = plan_for_strategy(other, controller, grid)?;
            let plan = if hold_q > 1 {
                apply_hold(&plan, &HoldModel::Samples(hold_q), grid)?
            } else {
                plan
            };
            Ok((plan, log))
        }
    }
}

fn execute_run(run: &PresetRun, cfg: &RunConfig, seed: u64) -> anyhow::Result<RunRecord> {
    let grid = &run.grid;
    let dir = match &run.label {
        Some(label) => cfg.out_dir.join(label),
        None => cfg.out_dir.clone(),
    };
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;

    let hold_q = match &run.hold {
        Some(h) => h.resolve_samples(grid)?,
        None => 1,
    };
    let controller = if run.u_hz > 0.0 {
        apply_doppler_error(
            &run.scenario,
            &DopplerErrorModel::new(run.u_hz, run.doppler_seed)?,
        )
    } else {
        run.scenario.clone()
    };

    let (plan, log) = match &run.strategy {
        Some(strategy) => build_plan(strategy, &controller, &run.scenario, grid, hold_q)?,
        None => {
            if run.scenario.n_ris() > 0 {
                return Err(UsageError(format!(
                    "the scenario has {} RIS(s); pick a strategy ({})",
                    run.scenario.n_ris(),
                    STRATEGY_NAMES.join(", ")
                ))
                .into());
            }
            (PhasePlan::empty(), None)
        }
    };
    let plan = match &run.realistic {
        Some(model) => apply_realistic_ris(&plan, model),
        None => plan,
    };

    let trace = synthesize(&run.scenario, &plan, grid)?;
    let fft = cfg.fft.unwrap_or(grid.fft_size);
    let spectrum = doppler_spectrum(&trace, fft)?;
    let metrics = fade_metrics(&trace)?;

    let mut outputs = Vec::new();
    let mut emit = |name: &str, contents: String| -> anyhow::Result<()> {
        output::write_atomic(&dir.join(name), &contents)?;
        outputs.push(match &run.label {
            Some(label) => format!("{label}/{name}"),
            None => name.to_string(),
        });
        Ok(())
    };
    emit("trace.csv", output::trace_csv(&trace))?;
    emit("spectrum.csv", output::spectrum_csv(&spectrum))?;
    emit(
        "metrics.json",
        serde_json::to_string_pretty(&MetricsFile {
            delta_r_db: metrics.delta_r_db,
            r_bar_db: metrics.r_bar_db,
            n_s: grid.sample_count,
            t_s: grid.sample_interval_s,
        })? + "\n",
    )?;
    if let Some(log) = &log {
        emit("assignments.csv", output::assignments_csv(grid, log))?;
    }
    if run.surface {
        emit("surface.csv", output::surface_csv(&phase_surface(&run.scenario, grid)?))?;
    }

    Ok(RunRecord {
        label: run.label.clone(),
        scenario: ScenarioSpec::from_scenario(&run.scenario, Some(seed)),
        grid: GridRecord {
            sample_count: grid.sample_count,
            sample_interval_s: grid.sample_interval_s,
            fft_size: grid.fft_size,
        },
        strategy: run.strategy.as_ref().map(|s| s.to_string()),
        u_hz: run.u_hz,
        doppler_seed: run.doppler_seed,
        hold_samples: (hold_q > 1).then_some(hold_q),
        realistic_ris: run.realistic.is_some(),
        fft_size: fft,
        outputs,
        metrics,
    })
}

/// |r| over (time × reflection phase) for a single-RIS scenario.
fn phase_surface(
    scenario: &Scenario,
    grid: &SamplingGrid,
) -> Result<Vec<(f64, f64, f64)>, SimError> {
    if scenario.n_ris() != 1 {
        return Err(SimError::Contract(
            "the phase surface sweeps a single RIS".into(),
        ));
    }
    let mut rows = Vec::with_capacity(grid.sample_count * SURFACE_THETA_STEPS);
    for t in grid.times() {
        for j in 0..SURFACE_THETA_STEPS {
            let theta = TWO_PI * j as f64 / SURFACE_THETA_STEPS as f64;
            let mag = sample_envelope_with(scenario, |_| (1.0, theta), t).norm();
            rows.push((t, theta, mag));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names_parse() {
        assert_eq!(parse_strategy("none", 1).unwrap(), StrategyChoice::None);
        assert_eq!(parse_strategy("m1", 1).unwrap(), StrategyChoice::M1Auto);
        assert_eq!(
            parse_strategy("m2", 1).unwrap(),
            StrategyChoice::Fixed(Strategy::PermSearchMax)
        );
        assert_eq!(
            parse_strategy("cancel-io:1", 1).unwrap(),
            StrategyChoice::Fixed(Strategy::CancelIo { target: 1 })
        );
        assert_eq!(
            parse_strategy("doppler-synthesis:200", 1).unwrap(),
            StrategyChoice::Fixed(Strategy::DopplerSynthesis { f_tilde_hz: 200.0 })
        );
        assert_eq!(
            parse_strategy("random", 9).unwrap(),
            StrategyChoice::Fixed(Strategy::RandomPhase { seed: 9 })
        );
        assert!(parse_strategy("warp-drive", 1).is_err());
        assert!(parse_strategy("cancel-io:x", 1).is_err());
    }

    #[test]
    fn listing_mentions_required_parameters() {
        let listing = preset_listing();
        assert!(listing.contains("fig3"));
        assert!(listing.contains("FFT 256"));
        assert!(listing.contains("0.3125 ms"));
        assert!(listing.contains("table1"));
        assert!(listing.contains("(3,7), (5,5), (7,3)"));
        assert!(listing.contains("fig25a"));
        assert!(listing.contains("Q = 1, 20, and 50"));
        assert!(listing.contains("V = 100 m/s"));
    }
}
