//! Doppler spectra and fade-pattern metrics.
//!
//! Spectra are rectangular-windowed (unwindowed) DFTs of the complex trace,
//! zero-padded up to the FFT size, with the frequency axis shifted so 0 Hz
//! sits in the middle and the magnitude normalized to a unit peak. Raw
//! magnitudes are kept alongside the normalized ones.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::envelope::{magnitude_db, EnvelopeTrace};
use crate::error::{Result, SimError};

/// Centered, peak-normalized Doppler spectrum of a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DopplerSpectrum {
    /// Bin center frequencies from −f_s/2 up to +f_s/2 − Δf (Hz).
    pub frequencies: Vec<f64>,
    /// Bin magnitudes scaled so the peak bin is 1.
    pub normalized_magnitude: Vec<f64>,
    /// Unnormalized bin magnitudes.
    pub raw_magnitude: Vec<f64>,
}

impl DopplerSpectrum {
    pub fn bin_width_hz(&self) -> f64 {
        self.frequencies[1] - self.frequencies[0]
    }

    /// Frequency of the strongest bin.
    pub fn peak_frequency_hz(&self) -> f64 {
        let (k, _) = self
            .normalized_magnitude
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("spectrum is never empty");
        self.frequencies[k]
    }

    /// Bin index closest to `freq_hz`.
    pub fn bin_at(&self, freq_hz: f64) -> usize {
        let df = self.bin_width_hz();
        let idx = ((freq_hz - self.frequencies[0]) / df).round();
        (idx.max(0.0) as usize).min(self.frequencies.len() - 1)
    }
}

/// Peak-to-peak and time-average envelope magnitude, both in dB.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FadeMetrics {
    /// Δ_r = 10·log10(max|r|) − 10·log10(min|r|); +∞ when a sample has zero
    /// magnitude.
    pub delta_r_db: f64,
    /// r̄ = 10·log10 of the linear time-average of |r|.
    pub r_bar_db: f64,
}

/// Rectangular-windowed, centered, peak-normalized DFT of `trace`.
///
/// Traces shorter than `fft_size` are zero-padded; longer traces are
/// rejected rather than silently truncated.
pub fn doppler_spectrum(trace: &EnvelopeTrace, fft_size: usize) -> Result<DopplerSpectrum> {
    if trace.is_empty() {
        return Err(SimError::Contract("cannot take the spectrum of an empty trace".into()));
    }
    if !fft_size.is_power_of_two() {
        return Err(SimError::Domain(format!(
            "FFT size must be a power of two, got {fft_size}"
        )));
    }
    if trace.len() > fft_size {
        return Err(SimError::Contract(format!(
            "trace has {} samples, more than the FFT size {}; pick a larger FFT",
            trace.len(),
            fft_size
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); fft_size];
    buf[..trace.len()].copy_from_slice(&trace.samples);
    FftPlanner::new().plan_fft_forward(fft_size).process(&mut buf);

    let f_s = trace.grid.sample_rate_hz();
    let df = f_s / fft_size as f64;
    let half = fft_size / 2;
    // fftshift: bin k of the raw DFT holds frequency k·df for k < N/2 and
    // (k − N)·df above.
    let mut frequencies = Vec::with_capacity(fft_size);
    let mut raw_magnitude = Vec::with_capacity(fft_size);
    for i in 0..fft_size {
        let k = (i + half) % fft_size;
        frequencies.push((i as f64 - half as f64) * df);
        raw_magnitude.push(buf[k].norm());
    }
    let peak = raw_magnitude.iter().copied().fold(0.0f64, f64::max);
    let normalized_magnitude = if peak > 0.0 {
        raw_magnitude.iter().map(|&m| m / peak).collect()
    } else {
        raw_magnitude.clone()
    };
    Ok(DopplerSpectrum {
        frequencies,
        normalized_magnitude,
        raw_magnitude,
    })
}

/// Peak-to-peak Δ_r and linear-average-then-dB r̄ of the envelope magnitude.
pub fn fade_metrics(trace: &EnvelopeTrace) -> Result<FadeMetrics> {
    if trace.is_empty() {
        return Err(SimError::Contract("cannot compute metrics of an empty trace".into()));
    }
    let mags = trace.magnitudes();
    let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for &m in &mags {
        lo = lo.min(m);
        hi = hi.max(m);
        sum += m;
    }
    let delta_r_db = if lo == 0.0 {
        f64::INFINITY
    } else {
        magnitude_db(hi) - magnitude_db(lo)
    };
    Ok(FadeMetrics {
        delta_r_db,
        r_bar_db: magnitude_db(sum / mags.len() as f64),
    })
}
