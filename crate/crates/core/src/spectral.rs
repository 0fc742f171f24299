//! Amplitude/phase decomposition, frequency-plane Gaussian kernels and
//! amplitude-spectrum smoothing.
//!
//! All spectra are unnormalized DFTs with the zero-frequency bin at index
//! `(0, 0)`. Smoothing is a circular convolution over the (periodic)
//! frequency plane; the phase is never touched.

use std::f64::consts::PI;

use crate::error::{param, Error, Result};
use crate::field::Field;
use crate::fourier::{self, Complex};

/// Offset inside the logarithm for log-amplitude smoothing.
pub const LOG_EPS: f64 = 1e-8;
/// Floor of the denominator of [`sharpness`].
pub const SHARPNESS_EPS: f64 = 1e-12;
/// Default scale (in bins) of the sharpness kernel.
pub const DEFAULT_SHARPNESS_SIGMA: f64 = 2.0;

/// Bins whose magnitude is at most this fraction of the largest magnitude
/// are canonicalized to amplitude 0, phase 0.
const ZERO_AMPLITUDE_REL: f64 = 1e-13;

/// Amplitude and phase of a 2-D DFT.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    amplitude: Field,
    phase: Field,
}

impl ComplexSpectrum {
    /// Validates shapes, non-negativity of the amplitude, the phase range
    /// and the zero-amplitude phase convention.
    pub fn new(amplitude: Field, phase: Field) -> Result<Self> {
        amplitude.same_shape(&phase, "amplitude and phase")?;
        amplitude.check_finite()?;
        phase.check_finite()?;
        let w = amplitude.width();
        for (i, (&a, &p)) in amplitude
            .as_slice()
            .iter()
            .zip(phase.as_slice())
            .enumerate()
        {
            let (row, col) = (i / w, i % w);
            if a < 0.0 {
                return param(format!("negative amplitude {a} at ({row}, {col})"));
            }
            if !(p > -PI && p <= PI) {
                return param(format!("phase {p} at ({row}, {col}) outside (-pi, pi]"));
            }
            if a == 0.0 && p != 0.0 {
                return param(format!("zero-amplitude bin ({row}, {col}) has phase {p}"));
            }
        }
        Ok(Self { amplitude, phase })
    }

    fn from_complex(height: usize, width: usize, bins: &[Complex]) -> Self {
        let (amplitude, phase) = polar_canonical(bins);
        Self {
            amplitude: Field::new(height, width, amplitude).expect("shape"),
            phase: Field::new(height, width, phase).expect("shape"),
        }
    }

    pub fn amplitude(&self) -> &Field {
        &self.amplitude
    }

    pub fn phase(&self) -> &Field {
        &self.phase
    }

    pub fn shape(&self) -> (usize, usize) {
        self.amplitude.shape()
    }

    /// Same phase, different amplitude.
    pub fn with_amplitude(&self, amplitude: Field) -> Result<Self> {
        Self::new(amplitude, self.phase.clone())
    }

    pub fn to_complex(&self) -> Vec<Complex> {
        recombine(self.amplitude.as_slice(), self.phase.as_slice())
    }
}

pub(crate) fn polar_canonical(bins: &[Complex]) -> (Vec<f64>, Vec<f64>) {
    let peak = bins.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = peak * ZERO_AMPLITUDE_REL;
    bins.iter()
        .map(|z| {
            let a = z.norm();
            if a <= floor {
                (0.0, 0.0)
            } else {
                let p = z.arg();
                (a, if p <= -PI { PI } else { p })
            }
        })
        .unzip()
}

pub(crate) fn recombine(amplitude: &[f64], phase: &[f64]) -> Vec<Complex> {
    amplitude
        .iter()
        .zip(phase)
        .map(|(&a, &p)| Complex::from_polar(a, p))
        .collect()
}

/// Unnormalized 2-D DFT of a real field, split into amplitude and phase.
pub fn forward_transform(img: &Field) -> Result<ComplexSpectrum> {
    img.check_finite()?;
    let (h, w) = img.shape();
    let mut buf = fourier::to_complex(img.as_slice());
    fourier::fft2(&mut buf, h, w, false);
    Ok(ComplexSpectrum::from_complex(h, w, &buf))
}

/// Real part of the inverse DFT of `spec` (not clamped).
pub fn inverse_transform(spec: &ComplexSpectrum) -> Result<Field> {
    reconstruct(spec.amplitude(), spec.phase())
}

/// Real part of `F^-1{ amplitude * exp(i phase) }`.
pub fn reconstruct(amplitude: &Field, phase: &Field) -> Result<Field> {
    amplitude.same_shape(phase, "amplitude and phase")?;
    let (h, w) = amplitude.shape();
    let mut buf = recombine(amplitude.as_slice(), phase.as_slice());
    fourier::fft2(&mut buf, h, w, true);
    Field::new(h, w, buf.iter().map(|z| z.re).collect())
}

/// A truncated, renormalized, radially symmetric 2-D Gaussian over frequency
/// bins.
///
/// Support is the disk of radius `ceil(4 sigma)` around the centre. The
/// analytic prefactor `1 / (2 pi sigma^2)` cancels in the renormalization, so
/// only the sampled exponential is stored (as a separable 1-D profile).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyKernel {
    sigma: f64,
    radius: usize,
    profile: Vec<f64>,
    norm: f64,
}

impl FrequencyKernel {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return param(format!("kernel sigma must be positive, got {sigma}"));
        }
        let radius = (4.0 * sigma).ceil() as usize;
        let denom = 2.0 * sigma * sigma;
        let profile: Vec<f64> = (0..=radius)
            .map(|d| (-((d * d) as f64) / denom).exp())
            .collect();
        let mut kernel = Self {
            sigma,
            radius,
            profile,
            norm: 1.0,
        };
        let mut norm = 0.0;
        kernel.for_each_tap(|_, _, v| norm += v);
        kernel.norm = norm;
        Ok(kernel)
    }

    /// The single-tap kernel (the `sigma -> 0` limit).
    pub fn identity() -> Self {
        Self {
            sigma: 0.0,
            radius: 0,
            profile: vec![1.0],
            norm: 1.0,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn truncation_radius(&self) -> usize {
        self.radius
    }

    pub fn is_identity(&self) -> bool {
        self.radius == 0
    }

    /// Weight at offset (`dy`, `dx`) from the centre.
    pub fn weight(&self, dy: i64, dx: i64) -> f64 {
        let r = self.radius as i64;
        if dy * dy + dx * dx > r * r {
            return 0.0;
        }
        self.profile[dy.unsigned_abs() as usize] * self.profile[dx.unsigned_abs() as usize]
            / self.norm
    }

    /// Dense `(2r + 1) x (2r + 1)` weight matrix, centre at `(r, r)`.
    pub fn weights(&self) -> Field {
        let r = self.radius as i64;
        let n = 2 * self.radius + 1;
        Field::from_fn(n, n, |y, x| self.weight(y as i64 - r, x as i64 - r))
    }

    fn for_each_tap(&self, mut f: impl FnMut(i64, i64, f64)) {
        let r = self.radius as i64;
        for dy in -r..=r {
            let reach = ((r * r - dy * dy) as u64).isqrt() as i64;
            let py = self.profile[dy.unsigned_abs() as usize] / self.norm;
            for dx in -reach..=reach {
                f(dy, dx, py * self.profile[dx.unsigned_abs() as usize]);
            }
        }
    }

    /// The kernel folded onto a periodic `height x width` grid with its
    /// centre at `(0, 0)`. Taps that alias onto the same bin are summed.
    pub fn wrapped(&self, height: usize, width: usize) -> Field {
        let mut out = Field::zeros(height, width);
        let (h, w) = (height as i64, width as i64);
        self.for_each_tap(|dy, dx, v| {
            let r = dy.rem_euclid(h) as usize;
            let c = dx.rem_euclid(w) as usize;
            let cur = out.get(r, c);
            out.set(r, c, cur + v);
        });
        out
    }
}

/// Kernel of scale index `k` (1-based) with base scale `t0`:
/// `sigma_k = 2^(k-1) * t0`, so that `2 sigma_k^2 = 2^(2k-1) t0^2`.
pub fn gaussian_frequency_kernel(k: usize, t0: f64) -> Result<FrequencyKernel> {
    if k < 1 {
        return param("scale index k must be at least 1");
    }
    if !(t0 > 0.0) || !t0.is_finite() {
        return param(format!("base scale t0 must be positive, got {t0}"));
    }
    FrequencyKernel::gaussian(scale_sigma(k, t0))
}

/// Standard deviation (in bins) of scale `k`.
pub fn scale_sigma(k: usize, t0: f64) -> f64 {
    2f64.powi(k as i32 - 1) * t0
}

/// Circular convolution of `field` with `kernel` via the frequency domain.
pub fn circular_convolve(field: &Field, kernel: &FrequencyKernel) -> Field {
    if kernel.is_identity() {
        return field.clone();
    }
    let (h, w) = field.shape();
    let mut a = fourier::to_complex(field.as_slice());
    let mut k = fourier::to_complex(kernel.wrapped(h, w).as_slice());
    fourier::fft2(&mut a, h, w, false);
    fourier::fft2(&mut k, h, w, false);
    a.iter_mut().zip(&k).for_each(|(x, y)| *x *= y);
    fourier::fft2(&mut a, h, w, true);
    Field::new(h, w, a.iter().map(|z| z.re).collect()).expect("shape")
}

/// Smoothed amplitude spectrum.
///
/// With `use_log`, smooths `ln(A + eps)` and maps back with `exp(.) - eps`;
/// otherwise smooths `A` directly. Results are clamped at zero.
pub fn smooth_amplitude(
    spec: &ComplexSpectrum,
    kernel: &FrequencyKernel,
    use_log: bool,
) -> Result<Field> {
    Ok(smooth_field(spec.amplitude(), kernel, use_log))
}

pub(crate) fn smooth_field(amplitude: &Field, kernel: &FrequencyKernel, use_log: bool) -> Field {
    if use_log {
        let logs = amplitude.map(|a| (a + LOG_EPS).ln());
        circular_convolve(&logs, kernel).map(|v| (v.exp() - LOG_EPS).max(0.0))
    } else {
        circular_convolve(amplitude, kernel).map(|v| v.max(0.0))
    }
}

/// Spike sharpness `X / (X * h)` with `h` a Gaussian of scale `h_sigma` bins.
pub fn sharpness(field: &Field, h_sigma: f64) -> Result<Field> {
    if let Some(v) = field.as_slice().iter().find(|v| !(**v >= 0.0)) {
        return param(format!("sharpness needs a nonnegative field, found {v}"));
    }
    let kernel = FrequencyKernel::gaussian(h_sigma)?;
    let smoothed = circular_convolve(field, &kernel);
    let data = field
        .as_slice()
        .iter()
        .zip(smoothed.as_slice())
        .map(|(&x, &s)| x / s.max(SHARPNESS_EPS))
        .collect();
    Field::new(field.height(), field.width(), data)
}

/// One-dimensional counterparts used by the signal demonstrations.
pub mod one_d {
    use super::*;

    /// Amplitude and phase of a 1-D DFT.
    #[derive(Debug, Clone, PartialEq)]
    pub struct Spectrum1d {
        pub amplitude: Vec<f64>,
        pub phase: Vec<f64>,
    }

    pub fn forward(samples: &[f64]) -> Result<Spectrum1d> {
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: 0, col: i });
        }
        let mut buf = fourier::to_complex(samples);
        fourier::fft1(&mut buf, false);
        let (amplitude, phase) = polar_canonical(&buf);
        Ok(Spectrum1d { amplitude, phase })
    }

    /// Complex DFT (no canonicalization).
    pub fn dft(samples: &[f64]) -> Vec<Complex> {
        let mut buf = fourier::to_complex(samples);
        fourier::fft1(&mut buf, false);
        buf
    }

    pub fn reconstruct(amplitude: &[f64], phase: &[f64]) -> Result<Vec<f64>> {
        if amplitude.len() != phase.len() {
            return Err(Error::Shape(format!(
                "amplitude has {} bins, phase {}",
                amplitude.len(),
                phase.len()
            )));
        }
        let mut buf = recombine(amplitude, phase);
        fourier::fft1(&mut buf, true);
        Ok(buf.iter().map(|z| z.re).collect())
    }

    /// Normalized Gaussian taps for offsets `-r..=r`, `r = ceil(4 sigma)`;
    /// `sigma == 0` gives the identity.
    pub fn kernel(sigma: f64) -> Result<Vec<f64>> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return param(format!("kernel sigma must be nonnegative, got {sigma}"));
        }
        Ok(crate::filter::gaussian_taps(sigma))
    }

    /// Circular convolution with a centred tap vector.
    pub fn circular_convolve(values: &[f64], taps: &[f64]) -> Vec<f64> {
        let n = values.len();
        if taps.len() == 1 {
            return values.iter().map(|v| v * taps[0]).collect();
        }
        let r = (taps.len() / 2) as i64;
        let mut wrapped = vec![0.0; n];
        for (j, t) in taps.iter().enumerate() {
            wrapped[(j as i64 - r).rem_euclid(n as i64) as usize] += t;
        }
        let mut a = fourier::to_complex(values);
        let mut k = fourier::to_complex(&wrapped);
        fourier::fft1(&mut a, false);
        fourier::fft1(&mut k, false);
        a.iter_mut().zip(&k).for_each(|(x, y)| *x *= y);
        fourier::fft1(&mut a, true);
        a.iter().map(|z| z.re).collect()
    }

    pub fn smooth_amplitude(amplitude: &[f64], sigma: f64, use_log: bool) -> Result<Vec<f64>> {
        let taps = kernel(sigma)?;
        if taps.len() == 1 {
            return Ok(amplitude.to_vec());
        }
        Ok(if use_log {
            let logs: Vec<f64> = amplitude.iter().map(|a| (a + LOG_EPS).ln()).collect();
            circular_convolve(&logs, &taps)
                .into_iter()
                .map(|v| (v.exp() - LOG_EPS).max(0.0))
                .collect()
        } else {
            circular_convolve(amplitude, &taps)
                .into_iter()
                .map(|v| v.max(0.0))
                .collect()
        })
    }

    pub fn sharpness(values: &[f64], h_sigma: f64) -> Result<Vec<f64>> {
        if !(h_sigma > 0.0) {
            return param(format!("sharpness sigma must be positive, got {h_sigma}"));
        }
        let smoothed = circular_convolve(values, &kernel(h_sigma)?);
        Ok(values
            .iter()
            .zip(&smoothed)
            .map(|(&x, &s)| x / s.max(SHARPNESS_EPS))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct circular convolution over the kernel's disk support.
    fn direct_convolve(field: &Field, kernel: &FrequencyKernel) -> Field {
        let (h, w) = field.shape();
        let r = kernel.truncation_radius() as i64;
        Field::from_fn(h, w, |y, x| {
            let mut acc = 0.0;
            for dy in -r..=r {
                for dx in -r..=r {
                    let yy = (y as i64 - dy).rem_euclid(h as i64) as usize;
                    let xx = (x as i64 - dx).rem_euclid(w as i64) as usize;
                    acc += kernel.weight(dy, dx) * field.get(yy, xx);
                }
            }
            acc
        })
    }

    #[test]
    fn constant_image_spectrum_is_dc_only() {
        let img = Field::filled(4, 4, 0.5);
        let s = forward_transform(&img).unwrap();
        assert_eq!(s.amplitude().get(0, 0), 8.0);
        assert_eq!(s.amplitude().sum(), 8.0);
        assert!(s.phase().as_slice().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn impulse_spectrum_is_flat() {
        let mut img = Field::zeros(4, 4);
        img.set(0, 0, 1.0);
        let s = forward_transform(&img).unwrap();
        assert!(s
            .amplitude()
            .as_slice()
            .iter()
            .all(|&a| (a - 1.0).abs() < 1e-15));
        assert!(s.phase().as_slice().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn inverse_of_dc_spike_and_flat_amplitude() {
        let mut amp = Field::zeros(4, 4);
        amp.set(0, 0, 8.0);
        let spec = ComplexSpectrum::new(amp, Field::zeros(4, 4)).unwrap();
        let out = inverse_transform(&spec).unwrap();
        assert!(out.max_abs_diff(&Field::filled(4, 4, 0.5)) < 1e-12);

        let spec = ComplexSpectrum::new(Field::filled(4, 4, 1.0), Field::zeros(4, 4)).unwrap();
        let out = inverse_transform(&spec).unwrap();
        let mut impulse = Field::zeros(4, 4);
        impulse.set(0, 0, 1.0);
        assert!(out.max_abs_diff(&impulse) < 1e-9);
    }

    #[test]
    fn spectrum_validation() {
        assert!(matches!(
            ComplexSpectrum::new(Field::zeros(2, 2), Field::zeros(2, 3)),
            Err(Error::Shape(_))
        ));
        assert!(ComplexSpectrum::new(Field::filled(2, 2, -1.0), Field::zeros(2, 2)).is_err());
        assert!(ComplexSpectrum::new(Field::zeros(2, 2), Field::filled(2, 2, 0.3)).is_err());
        assert!(ComplexSpectrum::new(Field::filled(2, 2, 1.0), Field::filled(2, 2, -PI)).is_err());
        let mut bad = Field::zeros(2, 2);
        bad.set(1, 1, f64::INFINITY);
        assert!(matches!(
            forward_transform(&bad),
            Err(Error::NonFinite { row: 1, col: 1 })
        ));
    }

    #[test]
    fn kernel_scales_and_normalization() {
        assert!(gaussian_frequency_kernel(0, 0.5).is_err());
        assert!(gaussian_frequency_kernel(1, 0.0).is_err());
        assert!(gaussian_frequency_kernel(1, -1.0).is_err());
        assert_eq!(gaussian_frequency_kernel(1, 0.5).unwrap().sigma(), 0.5);
        assert_eq!(gaussian_frequency_kernel(4, 0.5).unwrap().sigma(), 4.0);
        for k in 1..=6 {
            let kern = gaussian_frequency_kernel(k, 0.5).unwrap();
            let r = kern.truncation_radius();
            assert_eq!(r, (4.0 * kern.sigma()).ceil() as usize);
            let w = kern.weights();
            assert!((w.sum() - 1.0).abs() < 1e-12, "k={k}");
            assert_eq!(w.argmax(), (r, r));
            for (dy, dx) in [(1i64, 2i64), (0, 3), (2, 2)] {
                let a = kern.weight(dy, dx);
                for (y, x) in [(-dy, dx), (dx, dy), (-dx, -dy), (dy, -dx)] {
                    assert_eq!(kern.weight(y, x), a);
                }
            }
        }
    }

    #[test]
    fn wrapped_kernel_conserves_mass() {
        let kern = FrequencyKernel::gaussian(5.0).unwrap();
        let w = kern.wrapped(6, 8);
        assert!((w.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fft_convolution_matches_direct() {
        let f = Field::from_fn(7, 9, |r, c| ((r * 13 + c * 7) % 11) as f64);
        for sigma in [0.5, 1.3, 3.0] {
            let kern = FrequencyKernel::gaussian(sigma).unwrap();
            let d = circular_convolve(&f, &kern).max_abs_diff(&direct_convolve(&f, &kern));
            assert!(d < 1e-10, "sigma={sigma} diff={d}");
        }
    }

    #[test]
    fn identity_kernel_is_exact() {
        let img = Field::from_fn(5, 6, |r, c| ((r * 5 + c) % 4) as f64 / 4.0);
        let s = forward_transform(&img).unwrap();
        let out = smooth_amplitude(&s, &FrequencyKernel::identity(), false).unwrap();
        assert_eq!(&out, s.amplitude());
    }

    #[test]
    fn constants_survive_smoothing_in_both_modes() {
        let amp = Field::filled(8, 8, 3.25);
        let spec = ComplexSpectrum::new(amp.clone(), Field::zeros(8, 8)).unwrap();
        let kern = FrequencyKernel::gaussian(1.7).unwrap();
        for use_log in [true, false] {
            let out = smooth_amplitude(&spec, &kern, use_log).unwrap();
            assert!(out.max_abs_diff(&amp) < 1e-9);
        }
    }

    #[test]
    fn spike_is_spread_and_sum_conserved() {
        let mut amp = Field::filled(16, 16, 1.0);
        amp.set(5, 9, 100.0);
        let spec = ComplexSpectrum::new(amp.clone(), Field::zeros(16, 16)).unwrap();
        let kern = FrequencyKernel::gaussian(2.0).unwrap();
        let out = smooth_amplitude(&spec, &kern, false).unwrap();
        assert!(out.max() < 100.0);
        assert!((out.sum() - amp.sum()).abs() < 1e-6);
        let oracle = direct_convolve(&amp, &kern);
        assert!(out.max_abs_diff(&oracle) < 1e-9);
    }

    #[test]
    fn sharpness_of_constant_and_spike() {
        let c = sharpness(&Field::filled(6, 6, 2.0), 2.0).unwrap();
        assert!(c.as_slice().iter().all(|v| (v - 1.0).abs() < 1e-9));
        let mut spike = Field::zeros(9, 9);
        spike.set(4, 4, 1.0);
        assert!(sharpness(&spike, 1.0).unwrap().get(4, 4) > 1.0);
        assert!(sharpness(&Field::filled(2, 2, -1.0), 1.0).is_err());
    }

    #[test]
    fn one_d_round_trip_and_identity() {
        let x: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).sin()).collect();
        let s = one_d::forward(&x).unwrap();
        let same = one_d::smooth_amplitude(&s.amplitude, 0.0, true).unwrap();
        let y = one_d::reconstruct(&same, &s.phase).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
        let smooth = one_d::smooth_amplitude(&s.amplitude, 1.0, false).unwrap();
        let total: f64 = s.amplitude.iter().sum();
        assert!((smooth.iter().sum::<f64>() - total).abs() < 1e-9);
    }
}
