//! Command-line front end: figure presets, the run pipeline, and the
//! plot-ready CSV/JSON writers.

pub mod output;
pub mod presets;
pub mod run;
