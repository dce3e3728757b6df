//! Plot-ready data files.
//!
//! All floating-point columns carry 17 significant digits (`{:.16e}`) so a
//! written value parses back to the identical f64. Files are written to a
//! temporary sibling first and renamed into place.

use std::fs;
use std::io;
use std::path::Path;

use ris_sim::control::SearchLog;
use ris_sim::envelope::{magnitude_db, EnvelopeTrace};
use ris_sim::geometry::SamplingGrid;
use ris_sim::spectrum::DopplerSpectrum;

/// Write-then-rename so readers never observe a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Columns: t_s (s), re, im, mag, mag_db (10·log10 |r|).
pub fn trace_csv(trace: &EnvelopeTrace) -> String {
    let mut out = String::with_capacity(96 * trace.len());
    out.push_str("t_s,re,im,mag,mag_db\n");
    for (k, s) in trace.samples.iter().enumerate() {
        let mag = s.norm();
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            trace.time(k),
            s.re,
            s.im,
            mag,
            magnitude_db(mag),
        ));
    }
    out
}

/// Columns: freq_hz, norm_mag (peak = 1), norm_mag_db (10·log10).
pub fn spectrum_csv(spec: &DopplerSpectrum) -> String {
    let mut out = String::with_capacity(64 * spec.frequencies.len());
    out.push_str("freq_hz,norm_mag,norm_mag_db\n");
    for (f, m) in spec.frequencies.iter().zip(&spec.normalized_magnitude) {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            f,
            m,
            magnitude_db(*m),
        ));
    }
    out
}

/// Per-sample assignment log of the search methods. The `assignment`
/// column lists `ris>io` cancellation pairs and `ris>*` for RISs aligned
/// to the LOS/strongest path, semicolon-separated; `est_mag_db` is the
/// controller's envelope estimate under the applied phases.
pub fn assignments_csv(grid: &SamplingGrid, log: &SearchLog) -> String {
    let mut out = String::with_capacity(48 * log.assignments.len());
    out.push_str("t_s,assignment,est_mag_db\n");
    for (k, (a, est)) in log
        .assignments
        .iter()
        .zip(&log.estimates_mag)
        .enumerate()
    {
        let mut parts: Vec<String> = a.pairs.iter().map(|(i, k)| format!("{i}>{k}")).collect();
        parts.extend(a.remainder.iter().map(|i| format!("{i}>*")));
        out.push_str(&format!(
            "{:.16e},{},{:.16e}\n",
            k as f64 * grid.sample_interval_s,
            parts.join(";"),
            magnitude_db(*est),
        ));
    }
    out
}

/// Envelope magnitude over (time × reflection phase): rows of
/// (t_s, theta_rad, mag, mag_db).
pub fn surface_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::with_capacity(72 * rows.len());
    out.push_str("t_s,theta_rad,mag,mag_db\n");
    for &(t, theta, mag) in rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            t,
            theta,
            mag,
            magnitude_db(mag),
        ));
    }
    out
}
