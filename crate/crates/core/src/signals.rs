//! 1-D experiments on periodic backgrounds with an embedded salient segment.
//!
//! A periodic signal has a spiky amplitude spectrum, and the more cycles it
//! has the sharper the spikes. A short deviant segment contributes only
//! broad, rounded lobes. Smoothing the amplitude spectrum therefore flattens
//! the background spikes and leaves the segment standing out after
//! reconstruction with the original phase.

use std::f64::consts::PI;

use crate::error::{param, Error, Result};
use crate::filter::blur_1d;
use crate::spectral::{one_d, DEFAULT_SHARPNESS_SIGMA};

/// Frame length used by [`sharpness_curve`].
pub const SHARPNESS_FRAME: usize = 1024;
/// Largest window-to-duration ratio a composite may use.
pub const MAX_WINDOW_FRACTION: f64 = 0.25;

/// Uniformly sampled real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl Signal1D {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::Shape(format!(
                "signal needs at least 4 samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: 0, col: i });
        }
        if !(sample_rate > 0.0) || !sample_rate.is_finite() {
            return param(format!("sample rate must be positive, got {sample_rate}"));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time of sample `i`.
    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.sample_rate
    }

    /// Unnormalized DFT magnitudes.
    pub fn amplitude_spectrum(&self) -> Vec<f64> {
        one_d::dft(&self.samples).iter().map(|z| z.norm()).collect()
    }
}

/// One sinusoidal component: `amplitude * cos(2 pi frequency t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tone {
    /// Cycles per unit time.
    pub frequency: f64,
    pub amplitude: f64,
    pub phase: f64,
}

impl Tone {
    pub fn at(&self, t: f64) -> f64 {
        self.amplitude * (2.0 * PI * self.frequency * t + self.phase).cos()
    }
}

/// Periodic background over `(0, duration)` whose stretch
/// `(window_start, window_start + window_width)` is replaced by a second
/// periodic component, all on top of a constant offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeSpec {
    pub duration: f64,
    pub background: Tone,
    pub salient: Tone,
    pub window_start: f64,
    pub window_width: f64,
    pub dc_offset: f64,
}

impl CompositeSpec {
    /// Background of 20 cycles over a unit offset with a 60-cycle segment
    /// occupying a tenth of the duration.
    pub fn deviant_segment() -> Self {
        Self {
            duration: 1.0,
            background: Tone {
                frequency: 20.0,
                amplitude: 1.0,
                phase: 0.0,
            },
            salient: Tone {
                frequency: 60.0,
                amplitude: 1.0,
                phase: 0.0,
            },
            window_start: 0.45,
            window_width: 0.1,
            dc_offset: 1.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) {
            return param("duration must be positive");
        }
        if !(self.window_width >= 0.0) {
            return param("window width must be nonnegative");
        }
        if self.window_width > 0.0 {
            let end = self.window_start + self.window_width;
            if !(self.window_start > 0.0 && end < self.duration) {
                return param(format!(
                    "window ({}, {end}) is not inside (0, {})",
                    self.window_start, self.duration
                ));
            }
            if self.window_width / self.duration > MAX_WINDOW_FRACTION {
                return param(format!(
                    "window covers {:.3} of the duration (limit {MAX_WINDOW_FRACTION})",
                    self.window_width / self.duration
                ));
            }
        }
        Ok(())
    }

    /// Whether `t` falls strictly inside the window.
    pub fn in_window(&self, t: f64) -> bool {
        self.window_width > 0.0
            && t > self.window_start
            && t < self.window_start + self.window_width
    }
}

/// Sample the composite at `t_i = i * duration / n_samples`.
pub fn synthesize_composite(spec: &CompositeSpec, n_samples: usize) -> Result<Signal1D> {
    spec.validate()?;
    if n_samples < 16 {
        return param(format!("need at least 16 samples, got {n_samples}"));
    }
    let rate = n_samples as f64 / spec.duration;
    let samples = (0..n_samples)
        .map(|i| {
            let t = i as f64 / rate;
            let part = if spec.in_window(t) {
                spec.salient.at(t)
            } else {
                spec.background.at(t)
            };
            part + spec.dc_offset
        })
        .collect();
    Signal1D::new(samples, rate)
}

/// `cycles` periods of a unit sinusoid at `frequency` cycles per frame,
/// starting at `t = 0` in a frame of `frame_len` samples and zero after.
pub fn repeated_cycles(frequency: usize, cycles: usize, frame_len: usize) -> Result<Signal1D> {
    if frequency == 0 || 2 * frequency >= frame_len {
        return param(format!(
            "frequency {frequency} must lie in 1..{} for a {frame_len}-sample frame",
            frame_len / 2
        ));
    }
    if cycles > frequency {
        return param(format!(
            "{cycles} cycles at {frequency} per frame overflow the frame"
        ));
    }
    let active = cycles * frame_len / frequency;
    let samples = (0..frame_len)
        .map(|i| {
            if i < active {
                (2.0 * PI * frequency as f64 * i as f64 / frame_len as f64).cos()
            } else {
                0.0
            }
        })
        .collect();
    Signal1D::new(samples, frame_len as f64)
}

/// Sharpness at the fundamental bin for each cycle count.
///
/// Each entry is `N` repetitions of a period of `frame / f_bg` samples in a
/// fixed [`SHARPNESS_FRAME`]-sample frame, so longer runs of the same
/// pattern give narrower spectral peaks at bin `f_bg`.
pub fn sharpness_curve(
    f_bg: usize,
    cycle_counts: &[usize],
    h_sigma: f64,
) -> Result<Vec<(usize, f64)>> {
    cycle_counts
        .iter()
        .map(|&n| {
            if n < 2 {
                return param(format!("cycle count must be at least 2, got {n}"));
            }
            let sig = repeated_cycles(f_bg, n, SHARPNESS_FRAME)?;
            let p = one_d::sharpness(&sig.amplitude_spectrum(), h_sigma)?;
            Ok((n, p[f_bg]))
        })
        .collect()
}

/// [`sharpness_curve`] with the default sharpness kernel.
pub fn default_sharpness_curve(f_bg: usize, cycle_counts: &[usize]) -> Result<Vec<(usize, f64)>> {
    sharpness_curve(f_bg, cycle_counts, DEFAULT_SHARPNESS_SIGMA)
}

/// Result of [`suppress_and_reconstruct_1d`].
#[derive(Debug, Clone, PartialEq)]
pub struct Suppression {
    pub reconstruction: Signal1D,
    pub saliency: Signal1D,
}

/// Default post-blur, as a fraction of the signal length.
pub const DEFAULT_POST_SIGMA_FRACTION_1D: f64 = 0.01;

/// Smooth the (log-)amplitude spectrum with a circular Gaussian of `sigma`
/// bins, reconstruct with the original phase, then square, blur by
/// `post_sigma` samples and min-max normalize. `sigma == 0` is the identity.
pub fn suppress_and_reconstruct_1d(
    sig: &Signal1D,
    sigma: f64,
    use_log: bool,
    post_sigma: f64,
) -> Result<Suppression> {
    if !(post_sigma >= 0.0) {
        return param(format!("post sigma must be nonnegative, got {post_sigma}"));
    }
    let spec = one_d::forward(sig.samples())?;
    let smoothed = one_d::smooth_amplitude(&spec.amplitude, sigma, use_log)?;
    let recon = one_d::reconstruct(&smoothed, &spec.phase)?;
    let energy = blur_1d(&recon.iter().map(|v| v * v).collect::<Vec<_>>(), post_sigma);
    let lo = energy.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = energy.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let saliency = if hi - lo > 1e-12 * hi.abs() {
        energy.iter().map(|v| (v - lo) / (hi - lo)).collect()
    } else {
        vec![0.0; energy.len()]
    };
    Ok(Suppression {
        reconstruction: Signal1D::new(recon, sig.sample_rate())?,
        saliency: Signal1D::new(saliency, sig.sample_rate())?,
    })
}

/// What the suppression removed.
#[derive(Debug, Clone, PartialEq)]
pub struct Removed {
    pub spatial: Signal1D,
    pub spectral: Vec<f64>,
}

/// `original - reconstruction` and its amplitude spectrum.
pub fn removed_components(original: &Signal1D, reconstruction: &Signal1D) -> Result<Removed> {
    if original.len() != reconstruction.len() {
        return Err(Error::Shape(format!(
            "original has {} samples, reconstruction {}",
            original.len(),
            reconstruction.len()
        )));
    }
    let diff: Vec<f64> = original
        .samples()
        .iter()
        .zip(reconstruction.samples())
        .map(|(a, b)| a - b)
        .collect();
    let spatial = Signal1D::new(diff, original.sample_rate())?;
    let spectral = spatial.amplitude_spectrum();
    Ok(Removed { spatial, spectral })
}

/// Share of total spectral energy (squared amplitude) held by `bins`.
pub fn energy_share(spectrum: &[f64], bins: &[usize]) -> f64 {
    let total: f64 = spectrum.iter().map(|a| a * a).sum();
    if total == 0.0 {
        return 0.0;
    }
    bins.iter().map(|&b| spectrum[b] * spectrum[b]).sum::<f64>() / total
}

/// Mean saliency inside the window divided by the mean outside.
pub fn window_contrast(spec: &CompositeSpec, saliency: &Signal1D) -> f64 {
    let (mut inside, mut n_in, mut outside, mut n_out) = (0.0, 0usize, 0.0, 0usize);
    for (i, &v) in saliency.samples().iter().enumerate() {
        if spec.in_window(saliency.time(i)) {
            inside += v;
            n_in += 1;
        } else {
            outside += v;
            n_out += 1;
        }
    }
    (inside / n_in.max(1) as f64) / (outside / n_out.max(1) as f64)
}
