//! Spectrum scale-space saliency.
//!
//! Repeated image structure shows up as sharp spikes in the Fourier
//! amplitude spectrum. Smoothing the amplitude (while keeping the phase)
//! suppresses those patterns, and sweeping the smoothing width over a dyadic
//! family of Gaussians yields a sequence of saliency maps that runs from
//! large salient regions to fine detail.
//!
//! Modules:
//! - [`spectral`]: transforms, frequency kernels, amplitude smoothing, sharpness
//! - [`scale_space`]: the layered spectrum and the saliency sequence
//! - [`signals`]: 1-D periodic-plus-salient signal experiments
//! - [`baselines`]: PFT, SR and FT comparators
//! - [`fixation`]: fixation ingestion, time slicing, ROC/AUC cross-validation
//! - [`io`]: PFM, PNG/PGM and heatmap output

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod error;
pub mod field;
pub mod filter;
pub mod fixation;
pub mod fourier;
pub mod io;
pub mod scale_space;
pub mod signals;
pub mod spectral;
pub mod synthetic;

pub use error::{Error, Result};
pub use field::{ChannelMode, ColorImage, Field, Image2D, InputImage};
pub use scale_space::{
    build_scale_space, enhance_saliency, reconstruct_saliency, saliency_sequence, scale_count,
    SaliencyMap, SaliencySequence, ScaleSelection, SequenceOptions, SpectrumScaleSpace,
};
pub use spectral::{
    forward_transform, gaussian_frequency_kernel, inverse_transform, sharpness, smooth_amplitude,
    ComplexSpectrum, FrequencyKernel,
};
