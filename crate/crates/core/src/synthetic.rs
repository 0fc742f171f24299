//! Deterministic test stimuli.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, Image2D};
use crate::fourier::{self, Complex};

/// A filled disk: centre `(row, col)` and radius in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub row: f64,
    pub col: f64,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, row: usize, col: usize) -> bool {
        let (dr, dc) = (row as f64 - self.row, col as f64 - self.col);
        dr * dr + dc * dc <= self.radius * self.radius
    }

    /// Row-major indices of the disk's pixels on a `height x width` grid.
    pub fn support(&self, height: usize, width: usize) -> Vec<usize> {
        (0..height * width)
            .filter(|&i| self.contains(i / width, i % width))
            .collect()
    }
}

/// Disks of equal `intensity` on a uniform `background`.
pub fn disks(
    height: usize,
    width: usize,
    items: &[Disk],
    intensity: f64,
    background: f64,
) -> Image2D {
    let f = Field::from_fn(height, width, |r, c| {
        if items.iter().any(|d| d.contains(r, c)) {
            intensity
        } else {
            background
        }
    });
    Image2D::from_field(f).expect("intensities in [0, 1]")
}

/// The two-disk stimulus: a large and a small disk of identical intensity.
pub fn two_disks(size: usize) -> (Image2D, Disk, Disk) {
    let s = size as f64;
    let large = Disk {
        row: 0.36 * s,
        col: 0.34 * s,
        radius: 0.19 * s,
    };
    let small = Disk {
        row: 0.70 * s,
        col: 0.74 * s,
        radius: 0.05 * s,
    };
    (disks(size, size, &[large, small], 0.8, 0.2), large, small)
}

/// Natural-looking test image: `1/f` noise plus a few soft objects, scaled
/// to [0, 1].
pub fn natural_like(size: usize, seed: u64) -> Image2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = size;
    let mut buf = vec![Complex::new(0.0, 0.0); n * n];
    for u in 0..n {
        for v in 0..n {
            let fu = if u <= n / 2 { u as f64 } else { (n - u) as f64 };
            let fv = if v <= n / 2 { v as f64 } else { (n - v) as f64 };
            let f = (fu * fu + fv * fv).sqrt();
            if f > 0.0 {
                let phase = rng.gen::<f64>() * 2.0 * PI;
                buf[u * n + v] = Complex::from_polar(1.0 / f, phase);
            }
        }
    }
    fourier::fft2(&mut buf, n, n, true);
    let noise: Vec<f64> = buf.iter().map(|z| z.re).collect();
    let (lo, hi) = noise
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });

    let blobs: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(0.15..0.85) * n as f64,
                rng.gen_range(0.15..0.85) * n as f64,
                rng.gen_range(0.04..0.15) * n as f64,
                rng.gen_range(-0.5..0.5),
            )
        })
        .collect();

    let raw = Field::from_fn(n, n, |r, c| {
        let mut v = 0.6 * (noise[r * n + c] - lo) / (hi - lo);
        for &(br, bc, rad, amp) in &blobs {
            let d2 = (r as f64 - br).powi(2) + (c as f64 - bc).powi(2);
            v += amp * (-d2 / (2.0 * rad * rad)).exp();
        }
        v
    });
    let (lo, hi) = (raw.min(), raw.max());
    Image2D::from_field(raw.map(|v| (v - lo) / (hi - lo))).expect("rescaled to [0, 1]")
}

/// Pearson correlation of two equally sized fields.
pub fn pearson(a: &Field, b: &Field) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.sum() / n, b.sum() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.as_slice().iter().zip(b.as_slice()) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

/// Mean of `field` over row-major `indices`.
pub fn mean_over(field: &Field, indices: &[usize]) -> f64 {
    indices.iter().map(|&i| field.as_slice()[i]).sum::<f64>() / indices.len() as f64
}
