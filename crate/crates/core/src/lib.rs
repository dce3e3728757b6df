//! Complex-envelope simulation of RIS-assisted mobile radio links.
//!
//! Models a mobile receiver moving through a multipath environment made of
//! plain specular reflectors and reconfigurable intelligent surfaces (RISs)
//! whose reflection phases are tuned in real time. The crate covers:
//!
//! * [`geometry`]: scenario construction: carrier, mobile speed, Doppler
//!   shifts, radio path distances, seeded random reflector layouts.
//! * [`envelope`]: phasor-sum synthesis of the received complex envelope
//!   plus the closed-form two-ray magnitude expressions used as oracles.
//! * [`spectrum`]: FFT-based Doppler spectra and fade-pattern metrics.
//! * [`control`]: RIS phase strategies: LOS alignment, out-phasing,
//!   Doppler synthesis, the closed-form optimal single-RIS phase, and the
//!   per-sample permutation searches that assign RISs to reflectors.
//! * [`imperfections`]: realistic reflection hardware, erroneous Doppler
//!   estimates, and discrete-time (held) phase updates.
//! * [`scenario_io`]: the JSON schema for scenarios.

// `!(x > 0.0)` is deliberate in validations: unlike `x <= 0.0` it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod envelope;
pub mod error;
pub mod geometry;
pub mod imperfections;
pub mod scenario_io;
pub mod spectrum;

pub use error::{Result, SimError};

/// Complex sample type used throughout the public API.
pub use num_complex::Complex64;
