//! Thin complex FFT wrappers over `rustfft` for row-major buffers.
//!
//! Forward transforms are unnormalized; inverse transforms divide by the
//! number of samples so that `inverse(forward(x)) == x`.

use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

pub use rustfft::num_complex::Complex64 as Complex;

/// In-place 1-D transform.
pub fn fft1(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    if n == 0 {
        return;
    }
    let dir = if inverse {
        FftDirection::Inverse
    } else {
        FftDirection::Forward
    };
    FftPlanner::new().plan_fft(n, dir).process(buf);
    if inverse {
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
    }
}

/// In-place 2-D transform of a `height x width` row-major buffer.
pub fn fft2(buf: &mut [Complex64], height: usize, width: usize, inverse: bool) {
    assert_eq!(buf.len(), height * width, "buffer/shape mismatch");
    let dir = if inverse {
        FftDirection::Inverse
    } else {
        FftDirection::Forward
    };
    let mut planner = FftPlanner::new();

    let row_fft = planner.plan_fft(width, dir);
    let mut scratch = vec![Complex64::default(); row_fft.get_inplace_scratch_len()];
    for row in buf.chunks_exact_mut(width) {
        row_fft.process_with_scratch(row, &mut scratch);
    }

    let col_fft = planner.plan_fft(height, dir);
    scratch.resize(col_fft.get_inplace_scratch_len(), Complex64::default());
    let mut column = vec![Complex64::default(); height];
    for c in 0..width {
        for r in 0..height {
            column[r] = buf[r * width + c];
        }
        col_fft.process_with_scratch(&mut column, &mut scratch);
        for r in 0..height {
            buf[r * width + c] = column[r];
        }
    }

    if inverse {
        let scale = 1.0 / (height * width) as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
    }
}

pub(crate) fn to_complex(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}
