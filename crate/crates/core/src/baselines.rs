//! Reference single-map detectors: phase-only (PFT), spectral residual (SR)
//! and frequency-tuned (FT).
//!
//! These follow the one-line descriptions of the original methods and are
//! meant as comparators, not faithful ports.

use crate::error::{param, Result};
use crate::field::{Field, InputImage};
use crate::filter::gaussian_blur;
use crate::scale_space::{enhance_saliency, reconstruct_saliency, SaliencyMap};
use crate::spectral::{self, LOG_EPS};

/// Default local-average window of the spectral residual.
pub const DEFAULT_SR_WINDOW: usize = 3;

/// Unit amplitude wherever the spectrum is nonzero, zero elsewhere.
pub fn flattened_amplitude(amplitude: &Field) -> Field {
    amplitude.map(|a| if a > 0.0 { 1.0 } else { 0.0 })
}

/// Phase-only reconstruction, squared, blurred and normalized.
pub fn pft_saliency(img: &Field, post_sigma: f64) -> Result<SaliencyMap> {
    let spec = spectral::forward_transform(img)?;
    let raw = reconstruct_saliency(&flattened_amplitude(spec.amplitude()), spec.phase())?;
    enhance_saliency(&raw, post_sigma)
}

/// `n x n` box mean with wrap-around (the spectrum is periodic).
fn local_mean(field: &Field, n: usize) -> Field {
    let (h, w) = field.shape();
    let r = (n / 2) as i64;
    let area = (n * n) as f64;
    Field::from_fn(h, w, |y, x| {
        let mut acc = 0.0;
        for dy in -r..=r {
            let yy = (y as i64 + dy).rem_euclid(h as i64) as usize;
            for dx in -r..=r {
                acc += field.get(yy, (x as i64 + dx).rem_euclid(w as i64) as usize);
            }
        }
        acc / area
    })
}

/// Spectral residual: log amplitude minus its `n x n` local mean.
pub fn sr_saliency(img: &Field, n: usize, post_sigma: f64) -> Result<SaliencyMap> {
    if n < 3 || n.is_multiple_of(2) {
        return param(format!(
            "spectral residual window must be odd and >= 3, got {n}"
        ));
    }
    let spec = spectral::forward_transform(img)?;
    let log_amp = spec.amplitude().map(|a| (a + LOG_EPS).ln());
    let mean = local_mean(&log_amp, n);
    let residual = Field::new(
        log_amp.height(),
        log_amp.width(),
        log_amp
            .as_slice()
            .iter()
            .zip(mean.as_slice())
            .map(|(l, m)| (l - m).exp())
            .collect(),
    )?;
    let raw = reconstruct_saliency(&residual, spec.phase())?;
    enhance_saliency(&raw, post_sigma)
}

/// Frequency-tuned: distance of each (optionally blurred) opponent-space
/// pixel to the image mean.
pub fn ft_saliency(img: &InputImage, blur_sigma: f64) -> Result<SaliencyMap> {
    if !(blur_sigma >= 0.0) {
        return param(format!("blur sigma must be nonnegative, got {blur_sigma}"));
    }
    let channels: Vec<Field> = match img {
        InputImage::Gray(g) => vec![g.field().clone()],
        InputImage::Color(c) => c.opponent().into(),
    };
    let (h, w) = img.shape();
    let mut dist2 = Field::zeros(h, w);
    for ch in &channels {
        let mean = ch.sum() / ch.len() as f64;
        let blurred = gaussian_blur(ch, blur_sigma);
        for (d, v) in dist2.as_mut_slice().iter_mut().zip(blurred.as_slice()) {
            *d += (v - mean) * (v - mean);
        }
    }
    Ok(SaliencyMap::normalize(&dist2.map(f64::sqrt), 0))
}

/// The three detectors by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Pft,
    Sr,
    Ft,
}

impl Baseline {
    pub const ALL: [Baseline; 3] = [Baseline::Pft, Baseline::Sr, Baseline::Ft];

    pub fn name(self) -> &'static str {
        match self {
            Baseline::Pft => "pft",
            Baseline::Sr => "sr",
            Baseline::Ft => "ft",
        }
    }

    /// Run with default parameters; `post_sigma` applies to PFT and SR.
    pub fn run(self, img: &InputImage, post_sigma: f64) -> Result<SaliencyMap> {
        match self {
            Baseline::Pft => pft_saliency(&img.luma(), post_sigma),
            Baseline::Sr => sr_saliency(&img.luma(), DEFAULT_SR_WINDOW, post_sigma),
            Baseline::Ft => ft_saliency(img, 0.0),
        }
    }
}
