//! JSON schema for scenarios.
//!
//! ```json
//! {
//!   "carrier_hz": 3e9,
//!   "wavelength_m": 0.1,
//!   "speed_mps": 10.0,
//!   "d_los_m": 1500.0,
//!   "seed": 42,
//!   "interactors": [
//!     { "kind": "ris", "alpha_rad": 0.0, "d_tilde_m": 2500.0, "psi_rad": 0.0 },
//!     { "kind": "plain", "two_ray": { "d1_m": 500.0 } },
//!     { "kind": "plain", "angled": { "d2_m": 500.0, "alpha_rad": 1.0471975511965976 } }
//!   ],
//!   "imperfections": {
//!     "u_hz": 1.0, "doppler_seed": 7,
//!     "hold_q": 50,
//!     "realistic_ris": { "amplitude_db": -1.0, "phase_min_deg": -150.0, "phase_max_deg": 140.0 }
//!   }
//! }
//! ```
//!
//! All angles are radians (except the degree-valued realistic-RIS bounds),
//! all distances meters. An interactor is given either directly
//! (`alpha_rad` + `d_tilde_m`, with `psi_rad` optional and otherwise
//! derived as 2π·d̃/λ) or through one of the derived-geometry forms
//! `two_ray`/`angled`, which require `d_los_m`. `wavelength_m` overrides
//! the value derived from the carrier; `seed` is recall metadata for
//! generated layouts.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::geometry::{
    derive_angled_interactor, derive_two_ray_interactor, CarrierConfig, Interactor,
    InteractorKind, MobileConfig, Scenario,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub carrier_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength_m: Option<f64>,
    pub speed_mps: f64,
    pub d_los_m: Option<f64>,
    pub interactors: Vec<InteractorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imperfections: Option<ImperfectionsSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractorSpec {
    pub kind: KindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_rad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_tilde_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_rad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_ray: Option<TwoRaySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angled: Option<AngledSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindSpec {
    Ris,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoRaySpec {
    pub d1_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngledSpec {
    pub d2_m: f64,
    pub alpha_rad: f64,
}

/// Optional run non-idealities carried with a scenario file. CLI flags
/// override these.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ImperfectionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doppler_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hold_q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hold_tr_us: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realistic_ris: Option<RealisticRisSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealisticRisSpec {
    pub amplitude_db: f64,
    pub phase_min_deg: f64,
    pub phase_max_deg: f64,
}

impl From<KindSpec> for InteractorKind {
    fn from(k: KindSpec) -> Self {
        match k {
            KindSpec::Ris => InteractorKind::Ris,
            KindSpec::Plain => InteractorKind::PlainIo,
        }
    }
}

impl ScenarioSpec {
    /// Exact (field-for-field) spec of an in-memory scenario: the direct
    /// interactor form round-trips losslessly through JSON.
    pub fn from_scenario(scenario: &Scenario, seed: Option<u64>) -> Self {
        Self {
            carrier_hz: scenario.carrier.carrier_frequency_hz,
            wavelength_m: Some(scenario.carrier.wavelength_m),
            speed_mps: scenario.mobile.speed_mps,
            d_los_m: scenario.los.as_ref().map(|l| l.distance_m),
            interactors: scenario
                .interactors
                .iter()
                .map(|io| InteractorSpec {
                    kind: if io.is_ris() {
                        KindSpec::Ris
                    } else {
                        KindSpec::Plain
                    },
                    alpha_rad: Some(io.arrival_angle_rad),
                    d_tilde_m: Some(io.initial_radio_path_m),
                    psi_rad: Some(io.constant_phase_rad),
                    two_ray: None,
                    angled: None,
                })
                .collect(),
            seed,
            imperfections: None,
        }
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        let carrier = match self.wavelength_m {
            Some(lambda) => CarrierConfig::with_pinned_wavelength(self.carrier_hz, lambda)?,
            None => CarrierConfig::from_frequency(self.carrier_hz)?,
        };
        let mobile = MobileConfig::new(self.speed_mps, &carrier)?;
        let mut interactors = Vec::with_capacity(self.interactors.len());
        for (idx, spec) in self.interactors.iter().enumerate() {
            interactors.push(spec.build(idx, self.d_los_m, &carrier, &mobile)?);
        }
        Scenario::new(carrier, mobile, self.d_los_m, interactors)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario specs are plain data")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| SimError::Contract(format!("malformed scenario JSON: {e}")))
    }
}

impl InteractorSpec {
    fn build(
        &self,
        idx: usize,
        d_los_m: Option<f64>,
        carrier: &CarrierConfig,
        mobile: &MobileConfig,
    ) -> Result<Interactor> {
        let kind: InteractorKind = self.kind.into();
        let forms = [
            self.d_tilde_m.is_some() || self.alpha_rad.is_some(),
            self.two_ray.is_some(),
            self.angled.is_some(),
        ];
        if forms.iter().filter(|&&f| f).count() != 1 {
            return Err(SimError::Contract(format!(
                "interactor {idx}: give exactly one of (alpha_rad + d_tilde_m), two_ray, angled"
            )));
        }
        if let Some(two_ray) = self.two_ray {
            let d_los = d_los_m.ok_or_else(|| {
                SimError::Contract(format!("interactor {idx}: two_ray geometry needs d_los_m"))
            })?;
            return derive_two_ray_interactor(kind, d_los, two_ray.d1_m, carrier, mobile);
        }
        if let Some(angled) = self.angled {
            let d_los = d_los_m.ok_or_else(|| {
                SimError::Contract(format!("interactor {idx}: angled geometry needs d_los_m"))
            })?;
            return derive_angled_interactor(
                kind,
                d_los,
                angled.d2_m,
                angled.alpha_rad,
                carrier,
                mobile,
            );
        }
        let (alpha, d_tilde) = match (self.alpha_rad, self.d_tilde_m) {
            (Some(a), Some(d)) => (a, d),
            _ => {
                return Err(SimError::Contract(format!(
                    "interactor {idx}: the direct form needs both alpha_rad and d_tilde_m"
                )))
            }
        };
        match self.psi_rad {
            Some(psi) => Interactor::with_constant_phase(kind, alpha, d_tilde, psi, mobile),
            None => Interactor::new(kind, alpha, d_tilde, carrier, mobile),
        }
    }
}
