//! 2-D FFT plumbing and Fourier multipliers shared by the spectral
//! differentiation and the grid Beltrami solver.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Planned 2-D transform on an nx × ny row-major array (row = constant y).
pub(crate) struct Fft2 {
    pub nx: usize,
    pub ny: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    col: Vec<Complex64>,
}

impl Fft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            nx,
            ny,
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
            col: vec![Complex64::new(0.0, 0.0); ny],
        }
    }

    fn rows(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        for j in 0..self.ny {
            fft.process(&mut data[j * self.nx..(j + 1) * self.nx]);
        }
    }

    fn cols(&mut self, data: &mut [Complex64], forward: bool) {
        for i in 0..self.nx {
            for j in 0..self.ny {
                self.col[j] = data[j * self.nx + i];
            }
            if forward {
                self.fwd_y.process(&mut self.col);
            } else {
                self.inv_y.process(&mut self.col);
            }
            for j in 0..self.ny {
                data[j * self.nx + i] = self.col[j];
            }
        }
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        let fwd = self.fwd_x.clone();
        self.rows(data, &fwd);
        self.cols(data, true);
    }

    /// Inverse transform, normalized so that inverse(forward(x)) = x.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        let inv = self.inv_x.clone();
        self.rows(data, &inv);
        self.cols(data, false);
        let scale = 1.0 / (self.nx * self.ny) as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Angular wavenumbers 2π·k/length in FFT order, with the Nyquist mode zeroed.
///
/// Zeroing Nyquist keeps derivative multipliers odd and the Beurling
/// multiplier a contraction on even-length grids.
pub(crate) fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let mut k = vec![0.0; n];
    for (i, ki) in k.iter_mut().enumerate() {
        let f = if 2 * i < n {
            i as isize
        } else if 2 * i == n {
            0 // Nyquist
        } else {
            i as isize - n as isize
        };
        *ki = std::f64::consts::TAU * f as f64 / length;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let (nx, ny) = (16, 12);
        let mut fft = Fft2::new(nx, ny);
        let orig: Vec<Complex64> = (0..nx * ny)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        fft.forward(&mut data);
        fft.inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn wavenumber_layout() {
        let k = wavenumbers(8, std::f64::consts::TAU);
        assert_eq!(k[0], 0.0);
        assert_eq!(k[1], 1.0);
        assert_eq!(k[3], 3.0);
        assert_eq!(k[4], 0.0); // Nyquist zeroed
        assert_eq!(k[5], -3.0);
        assert_eq!(k[7], -1.0);
    }
}
