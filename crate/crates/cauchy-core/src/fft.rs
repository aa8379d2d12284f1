//! Discrete Fourier transforms with the normalization used throughout:
//! the forward transform carries the `1/N` factor, so Parseval reads
//! `sum_k |c_k|^2 = (1/N) sum_j |f_j|^2`, matching the normalized
//! arc-length norm on the circle.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan_forward(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn plan_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// `c_k = (1/N) sum_j f_j e^{-2 pi i jk / N}`, raw index order
/// (indices above `N/2 - 1` alias the negative frequencies).
pub fn forward(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    plan_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// `f_j = sum_k c_k e^{+2 pi i jk / N}` — the exact inverse of [`forward`].
pub fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    plan_inverse(buf.len()).process(&mut buf);
    buf
}

/// In-place 2-D forward transform of a row-major `n x n` grid, normalized
/// by `1/n^2` (rows first, then columns).
pub fn forward_2d(grid: &mut [Complex64], n: usize) {
    assert_eq!(grid.len(), n * n);
    let plan = plan_forward(n);
    for row in grid.chunks_exact_mut(n) {
        plan.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            col[i] = grid[i * n + j];
        }
        plan.process(&mut col);
        for i in 0..n {
            grid[i * n + j] = col[i];
        }
    }
    let scale = 1.0 / (n * n) as f64;
    for c in grid.iter_mut() {
        *c *= scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn forward_of_pure_mode_is_unit_coefficient() {
        let n = 16;
        let samples: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
            .collect();
        let coeffs = forward(&samples);
        for (k, ck) in coeffs.iter().enumerate() {
            let expect = if k == 1 { 1.0 } else { 0.0 };
            assert!((ck - c(expect, 0.0)).norm() < 1e-14, "bin {k}");
        }
    }

    #[test]
    fn inverse_round_trips() {
        let samples: Vec<Complex64> =
            (0..32).map(|j| c((j as f64).sin(), (j as f64 * 0.7).cos())).collect();
        let back = inverse(&forward(&samples));
        for (a, b) in back.iter().zip(&samples) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn forward_2d_of_separable_modes() {
        // f(j,k) = u^j v^k with u, v unit roots -> single (1,2) bin.
        let n = 8;
        let tau = 2.0 * std::f64::consts::PI / n as f64;
        let mut grid = vec![c(0.0, 0.0); n * n];
        for j in 0..n {
            for k in 0..n {
                grid[j * n + k] =
                    Complex64::from_polar(1.0, tau * j as f64) * Complex64::from_polar(1.0, 2.0 * tau * k as f64);
            }
        }
        forward_2d(&mut grid, n);
        for j in 0..n {
            for k in 0..n {
                let expect = if (j, k) == (1, 2) { 1.0 } else { 0.0 };
                assert!((grid[j * n + k] - c(expect, 0.0)).norm() < 1e-13, "bin ({j},{k})");
            }
        }
    }
}
