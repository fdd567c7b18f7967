//! Multidimensional discrete Fourier transform over row-major arrays.

use rustfft::FftPlanner;

use crate::C64;

/// In-place unnormalised `n`-dimensional DFT of `data` with the given
/// row-major `shape` (last axis fastest). Forward uses `exp(-2 pi i k x / N)`.
pub fn fftn(data: &mut [C64], shape: &[usize], inverse: bool) {
    let total: usize = shape.iter().product();
    assert_eq!(total, data.len(), "shape does not match data length");
    let mut planner = FftPlanner::<f64>::new();
    let mut stride = 1;
    for axis in (0..shape.len()).rev() {
        let len = shape[axis];
        if len > 1 {
            let fft = if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            };
            let mut line = vec![C64::new(0.0, 0.0); len];
            let block = stride * len;
            for outer in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for (k, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + k * stride];
                    }
                    fft.process(&mut line);
                    for (k, v) in line.iter().enumerate() {
                        data[base + k * stride] = *v;
                    }
                }
            }
        }
        stride *= len;
    }
}

/// Signed frequency index of bin `k` of an `n`-point transform.
pub fn signed_index(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Multi-index of flat position `flat` in a row-major array of `shape`.
pub fn unravel(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for axis in (0..shape.len()).rev() {
        idx[axis] = flat % shape[axis];
        flat /= shape[axis];
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn matches_naive_2d() {
        let shape = [3, 4];
        let data: Vec<C64> = (0..12)
            .map(|k| C64::new((k as f64).sin(), (k as f64 * 0.3).cos()))
            .collect();
        let mut fast = data.clone();
        fftn(&mut fast, &shape, false);
        for a in 0..3 {
            for b in 0..4 {
                let mut acc = C64::new(0.0, 0.0);
                for x in 0..3 {
                    for y in 0..4 {
                        let ph = -2.0 * PI * ((a * x) as f64 / 3.0 + (b * y) as f64 / 4.0);
                        acc += data[x * 4 + y] * C64::from_polar(1.0, ph);
                    }
                }
                assert!((acc - fast[a * 4 + b]).norm() < 1e-12);
            }
        }
        fftn(&mut fast, &shape, true);
        for (u, v) in fast.iter().zip(&data) {
            assert!((u / 12.0 - v).norm() < 1e-13);
        }
    }

    #[test]
    fn index_helpers() {
        assert_eq!(signed_index(0, 8), 0);
        assert_eq!(signed_index(4, 8), 4);
        assert_eq!(signed_index(5, 8), -3);
        assert_eq!(unravel(7, &[2, 4]), vec![1, 3]);
    }
}
