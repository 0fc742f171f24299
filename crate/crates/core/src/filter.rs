//! Spatial-domain Gaussian blurs with reflective borders.

use crate::field::Field;

/// Normalized 1-D Gaussian taps for offsets `-r..=r`, `r = ceil(4 sigma)`.
pub fn gaussian_taps(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let r = (4.0 * sigma).ceil() as i64;
    let denom = 2.0 * sigma * sigma;
    let mut taps: Vec<f64> = (-r..=r).map(|d| (-(d * d) as f64 / denom).exp()).collect();
    let total: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= total);
    taps
}

/// Fold an out-of-range index back into `0..n` by mirror reflection
/// (`d c b a | a b c d | d c b a`).
#[inline]
pub fn reflect_index(i: i64, n: usize) -> usize {
    let n = n as i64;
    let period = 2 * n;
    let m = i.rem_euclid(period);
    (if m < n { m } else { period - 1 - m }) as usize
}

/// 1-D blur, reflective borders. `sigma == 0` returns the input.
pub fn blur_1d(values: &[f64], sigma: f64) -> Vec<f64> {
    let taps = gaussian_taps(sigma);
    if taps.len() == 1 {
        return values.to_vec();
    }
    let r = (taps.len() / 2) as i64;
    let n = values.len();
    (0..n as i64)
        .map(|i| {
            taps.iter()
                .enumerate()
                .map(|(j, t)| t * values[reflect_index(i + j as i64 - r, n)])
                .sum()
        })
        .collect()
}

/// Separable 2-D blur, reflective borders. `sigma == 0` returns the input.
pub fn gaussian_blur(field: &Field, sigma: f64) -> Field {
    let taps = gaussian_taps(sigma);
    if taps.len() == 1 {
        return field.clone();
    }
    let (h, w) = field.shape();
    let r = (taps.len() / 2) as i64;

    let mut rows = Field::zeros(h, w);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (j, t) in taps.iter().enumerate() {
                acc += t * field.get(y, reflect_index(x as i64 + j as i64 - r, w));
            }
            rows.set(y, x, acc);
        }
    }

    let mut out = Field::zeros(h, w);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (j, t) in taps.iter().enumerate() {
                acc += t * rows.get(reflect_index(y as i64 + j as i64 - r, h), x);
            }
            out.set(y, x, acc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_matches_mirror_convention() {
        let got: Vec<usize> = (-5..9).map(|i| reflect_index(i, 4)).collect();
        assert_eq!(got, vec![3, 3, 2, 1, 0, 0, 1, 2, 3, 3, 2, 1, 0, 0]);
    }

    #[test]
    fn blur_preserves_mass_of_interior_impulse() {
        let mut f = Field::zeros(21, 21);
        f.set(10, 10, 1.0);
        let b = gaussian_blur(&f, 1.5);
        assert!((b.sum() - 1.0).abs() < 1e-12);
        assert_eq!(b.argmax(), (10, 10));
        assert!((b.get(10, 8) - b.get(8, 10)).abs() < 1e-15);
    }

    #[test]
    fn blur_keeps_constants() {
        let f = Field::filled(5, 7, 0.3);
        let b = gaussian_blur(&f, 3.0);
        assert!(b.max_abs_diff(&f) < 1e-12);
        assert_eq!(blur_1d(&[1.0, 2.0], 0.0), vec![1.0, 2.0]);
    }
}
