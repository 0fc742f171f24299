//! Spectrum scale space and the coarse-to-fine saliency sequence.
//!
//! Layer `k` smooths the amplitude spectrum with a Gaussian of
//! `sigma_k = 2^(k-1) t0` bins. Every layer is recombined with the single
//! original phase and inverted; light smoothing (small `k`) leaves large
//! salient regions, heavy smoothing (large `k`) brings out fine detail.

use crate::error::{param, Error, Result};
use crate::field::{ChannelMode, Field, InputImage};
use crate::filter::gaussian_blur;
use crate::spectral::{self, ComplexSpectrum, FrequencyKernel};

/// Base scale of the kernel family.
pub const DEFAULT_T0: f64 = 0.5;
/// Post-blur scale as a fraction of the shorter image side.
pub const DEFAULT_POST_SIGMA_FRACTION: f64 = 0.03;

/// Relative range below which a map counts as constant.
const FLAT_REL: f64 = 1e-12;

/// Number of layers for a `height x width` image:
/// `ceil(log2(min(height, width))) + 1`.
pub fn scale_count(height: usize, width: usize) -> usize {
    let m = height.min(width);
    if m <= 1 {
        return 1;
    }
    (usize::BITS - (m - 1).leading_zeros()) as usize + 1
}

pub fn default_post_sigma(height: usize, width: usize) -> f64 {
    DEFAULT_POST_SIGMA_FRACTION * height.min(width) as f64
}

/// A family of smoothed amplitude spectra sharing one phase.
#[derive(Debug, Clone)]
pub struct SpectrumScaleSpace {
    layers: Vec<Field>,
    phase: Field,
    t0: f64,
}

impl SpectrumScaleSpace {
    /// Layers `1..=K`.
    pub fn build(spec: &ComplexSpectrum, t0: f64, use_log: bool) -> Result<Self> {
        let (h, w) = spec.shape();
        if h < 2 || w < 2 {
            return Err(Error::Shape(format!(
                "image must be at least 2x2, got {h}x{w}"
            )));
        }
        let layers = (1..=scale_count(h, w))
            .map(|k| scale_layer(spec, k, t0, use_log))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            layers,
            phase: spec.phase().clone(),
            t0,
        })
    }

    /// `K`.
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn phase(&self) -> &Field {
        &self.phase
    }

    /// Layer of 1-based scale index `k`.
    pub fn layer(&self, k: usize) -> Option<&Field> {
        k.checked_sub(1).and_then(|i| self.layers.get(i))
    }

    pub fn layers(&self) -> &[Field] {
        &self.layers
    }
}

/// Free-function form of [`SpectrumScaleSpace::build`].
pub fn build_scale_space(
    spec: &ComplexSpectrum,
    t0: f64,
    use_log: bool,
) -> Result<SpectrumScaleSpace> {
    SpectrumScaleSpace::build(spec, t0, use_log)
}

/// A single layer without building the whole family.
pub fn scale_layer(spec: &ComplexSpectrum, k: usize, t0: f64, use_log: bool) -> Result<Field> {
    let kernel = spectral::gaussian_frequency_kernel(k, t0)?;
    spectral::smooth_amplitude(spec, &kernel, use_log)
}

/// Real part of the inverse transform of `layer * exp(i phase)`.
pub fn reconstruct_saliency(layer: &Field, phase: &Field) -> Result<Field> {
    spectral::reconstruct(layer, phase)
}

/// A saliency map normalized to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    values: Field,
    scale_index: usize,
    raw_max: f64,
}

impl SaliencyMap {
    /// Min-max normalize `raw`; a constant field becomes all zeros.
    pub fn normalize(raw: &Field, scale_index: usize) -> Self {
        let (lo, hi) = (raw.min(), raw.max());
        let span = hi - lo;
        let values = if !(span > FLAT_REL * hi.abs().max(lo.abs())) {
            Field::zeros(raw.height(), raw.width())
        } else {
            raw.map(|v| ((v - lo) / span).clamp(0.0, 1.0))
        };
        Self {
            values,
            scale_index,
            raw_max: hi,
        }
    }

    pub(crate) fn empty(height: usize, width: usize, scale_index: usize) -> Self {
        Self {
            values: Field::zeros(height, width),
            scale_index,
            raw_max: 0.0,
        }
    }

    /// Wrap already-normalized values (e.g. maps read back from disk).
    pub fn from_normalized(values: Field, scale_index: usize) -> Result<Self> {
        values.check_finite()?;
        if values.min() < 0.0 || values.max() > 1.0 {
            return param("saliency values must lie in [0, 1]");
        }
        let raw_max = values.max();
        Ok(Self {
            values,
            scale_index,
            raw_max,
        })
    }

    pub fn values(&self) -> &Field {
        &self.values
    }

    pub fn into_values(self) -> Field {
        self.values
    }

    /// Scale that produced the map; 0 for single-map detectors.
    pub fn scale_index(&self) -> usize {
        self.scale_index
    }

    /// Maximum of the map before normalization.
    pub fn raw_max(&self) -> f64 {
        self.raw_max
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values.shape()
    }

    /// Pixelwise maximum, keeping the larger raw peak.
    pub fn fuse_max(&self, other: &SaliencyMap) -> Result<SaliencyMap> {
        self.values.same_shape(&other.values, "fused maps")?;
        let data = self
            .values
            .as_slice()
            .iter()
            .zip(other.values.as_slice())
            .map(|(a, b)| a.max(*b))
            .collect();
        Ok(SaliencyMap {
            values: Field::new(self.values.height(), self.values.width(), data)?,
            scale_index: self.scale_index,
            raw_max: self.raw_max.max(other.raw_max),
        })
    }
}

/// Square, blur spatially with `post_sigma`, then min-max normalize.
pub fn enhance_saliency(raw: &Field, post_sigma: f64) -> Result<SaliencyMap> {
    enhance_with_index(raw, post_sigma, 0)
}

pub(crate) fn enhance_with_index(
    raw: &Field,
    post_sigma: f64,
    scale_index: usize,
) -> Result<SaliencyMap> {
    if !(post_sigma >= 0.0) || !post_sigma.is_finite() {
        return param(format!("post_sigma must be nonnegative, got {post_sigma}"));
    }
    let energy = gaussian_blur(&raw.map(|v| v * v), post_sigma);
    Ok(SaliencyMap::normalize(&energy, scale_index))
}

/// Coarse-to-fine list of maps.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencySequence {
    maps: Vec<SaliencyMap>,
    scale_count: usize,
}

impl SaliencySequence {
    pub fn maps(&self) -> &[SaliencyMap] {
        &self.maps
    }

    pub fn into_maps(self) -> Vec<SaliencyMap> {
        self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `K` of the generating image, even when only some scales were kept.
    pub fn scale_count(&self) -> usize {
        self.scale_count
    }

    pub fn get(&self, k: usize) -> Option<&SaliencyMap> {
        self.maps.iter().find(|m| m.scale_index == k)
    }

    pub fn first(&self) -> Option<&SaliencyMap> {
        self.maps.first()
    }

    pub fn last(&self) -> Option<&SaliencyMap> {
        self.maps.last()
    }
}

/// Which layers of the scale space to turn into maps.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum ScaleSelection {
    #[default]
    All,
    /// 1-based scale indices, each within `1..=K`.
    Indices(Vec<usize>),
    /// Raw kernel widths in bins (0 leaves the amplitude untouched); maps are
    /// numbered 1, 2, ... in the given order, which must be increasing.
    Sigmas(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceOptions {
    pub t0: f64,
    /// `None` selects [`default_post_sigma`].
    pub post_sigma: Option<f64>,
    pub use_log: bool,
    pub channel_mode: ChannelMode,
    pub scales: ScaleSelection,
}

impl Default for SequenceOptions {
    fn default() -> Self {
        Self {
            t0: DEFAULT_T0,
            post_sigma: None,
            use_log: true,
            channel_mode: ChannelMode::Gray,
            scales: ScaleSelection::All,
        }
    }
}

/// Resolve the selection into `(scale_index, kernel)` pairs.
pub fn resolve_scales(
    selection: &ScaleSelection,
    height: usize,
    width: usize,
    t0: f64,
) -> Result<Vec<(usize, FrequencyKernel)>> {
    let k_total = scale_count(height, width);
    match selection {
        ScaleSelection::All => (1..=k_total)
            .map(|k| Ok((k, spectral::gaussian_frequency_kernel(k, t0)?)))
            .collect(),
        ScaleSelection::Indices(ks) => {
            if ks.is_empty() {
                return param("empty scale selection");
            }
            if ks.windows(2).any(|p| p[0] >= p[1]) {
                return param("scale indices must be strictly increasing");
            }
            ks.iter()
                .map(|&k| {
                    if k < 1 || k > k_total {
                        return param(format!(
                            "scale {k} outside 1..={k_total} for a {height}x{width} image"
                        ));
                    }
                    Ok((k, spectral::gaussian_frequency_kernel(k, t0)?))
                })
                .collect()
        }
        ScaleSelection::Sigmas(sigmas) => {
            if sigmas.is_empty() {
                return param("empty scale selection");
            }
            if sigmas.windows(2).any(|p| !(p[0] < p[1])) {
                return param("kernel widths must be strictly increasing");
            }
            sigmas
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let kernel = if s == 0.0 {
                        FrequencyKernel::identity()
                    } else {
                        FrequencyKernel::gaussian(s)?
                    };
                    Ok((i + 1, kernel))
                })
                .collect()
        }
    }
}

fn is_flat(field: &Field) -> bool {
    field.max() - field.min() <= FLAT_REL
}

/// Maps of a single channel for the given kernels.
fn channel_maps(
    channel: &Field,
    kernels: &[(usize, FrequencyKernel)],
    use_log: bool,
    post_sigma: f64,
) -> Result<Vec<SaliencyMap>> {
    let (h, w) = channel.shape();
    if is_flat(channel) {
        // No spatial contrast at all: nothing is salient.
        return Ok(kernels
            .iter()
            .map(|(k, _)| SaliencyMap::empty(h, w, *k))
            .collect());
    }
    let spec = spectral::forward_transform(channel)?;
    kernels
        .iter()
        .map(|(k, kernel)| {
            let layer = spectral::smooth_amplitude(&spec, kernel, use_log)?;
            let raw = reconstruct_saliency(&layer, spec.phase())?;
            enhance_with_index(&raw, post_sigma, *k)
        })
        .collect()
}

/// Full pipeline: channels, transform, smoothing per scale, reconstruction,
/// enhancement and max-fusion across channels.
pub fn saliency_sequence(img: &InputImage, opts: &SequenceOptions) -> Result<SaliencySequence> {
    let (h, w) = img.shape();
    if h < 2 || w < 2 {
        return Err(Error::Shape(format!(
            "image must be at least 2x2, got {h}x{w}"
        )));
    }
    let post_sigma = opts.post_sigma.unwrap_or_else(|| default_post_sigma(h, w));
    let kernels = resolve_scales(&opts.scales, h, w, opts.t0)?;

    let mut fused: Option<Vec<SaliencyMap>> = None;
    for channel in img.channels(opts.channel_mode) {
        let maps = channel_maps(&channel, &kernels, opts.use_log, post_sigma)?;
        fused = Some(match fused {
            None => maps,
            Some(prev) => prev
                .iter()
                .zip(&maps)
                .map(|(a, b)| a.fuse_max(b))
                .collect::<Result<_>>()?,
        });
    }
    Ok(SaliencySequence {
        maps: fused.unwrap_or_default(),
        scale_count: scale_count(h, w),
    })
}
