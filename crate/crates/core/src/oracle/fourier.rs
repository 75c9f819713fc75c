//! Fourier differentiation on uniform periodic grids with explicit band tracking.
//!
//! Grid data is stored row-major with the first parameter varying fastest
//! (`index = i0 + n * i1`). Every differentiated field carries an upper bound
//! on its Fourier support; modes above it are zeroed after the transform, so
//! round-off that the FFT spreads into high modes is not amplified by `ik`.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::OracleError;

/// Per-axis bound on the largest Fourier mode present.
pub type Band = [usize; 2];

pub fn band_sum(a: Band, b: Band) -> Band {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn band_max(a: Band, b: Band) -> Band {
    [a[0].max(b[0]), a[1].max(b[1])]
}

#[derive(Clone)]
pub struct Spectral {
    n: usize,
    dims: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).field("dims", &self.dims).finish()
    }
}

impl Spectral {
    pub fn new(n: usize, dims: usize) -> Result<Self, OracleError> {
        if n < 16 || !n.is_power_of_two() {
            return Err(OracleError::Resolution(format!(
                "grid must be a power of two >= 16, got {n}"
            )));
        }
        if dims != 1 && dims != 2 {
            return Err(OracleError::Resolution(format!("1 or 2 periodic parameters, got {dims}")));
        }
        let mut planner = FftPlanner::new();
        Ok(Spectral { n, dims, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.n as f64
    }

    /// Parameter values of flat index `idx`.
    pub fn coords(&self, idx: usize) -> [f64; 2] {
        if self.dims == 1 {
            [self.node(idx), 0.0]
        } else {
            [self.node(idx % self.n), self.node(idx / self.n)]
        }
    }

    /// Largest mode that can be differentiated without aliasing.
    pub fn capacity(&self) -> usize {
        self.n / 2 - 1
    }

    pub fn check_band(&self, band: Band) -> Result<(), OracleError> {
        for (axis, &b) in band.iter().enumerate().take(self.dims) {
            if b > self.capacity() {
                return Err(OracleError::Aliasing { axis, band: b, capacity: self.capacity() });
            }
        }
        Ok(())
    }

    fn wavenumber(&self, j: usize) -> i64 {
        if j <= self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// `order`-th derivative along `axis` of data band-limited to `band`.
    pub fn diff(&self, data: &[f64], axis: usize, order: u32, band: Band) -> Result<Vec<f64>, OracleError> {
        debug_assert_eq!(data.len(), self.len());
        self.check_band(band)?;
        let n = self.n;
        let cut = band[axis] as i64;
        let (stride, lines, line_step) = match (self.dims, axis) {
            (1, 0) => (1, 1, 0),
            (2, 0) => (1, n, n),
            (2, 1) => (n, n, 1),
            _ => unreachable!("axis out of range"),
        };
        let mut factor = vec![Complex64::new(0.0, 0.0); n];
        for (j, slot) in factor.iter_mut().enumerate() {
            let k = self.wavenumber(j);
            if k.abs() <= cut && j != n / 2 {
                *slot = Complex64::new(0.0, k as f64).powu(order) / n as f64;
            }
        }
        let mut out = vec![0.0; data.len()];
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.forward.get_inplace_scratch_len()];
        for line in 0..lines {
            let base = line * line_step;
            for (i, b) in buf.iter_mut().enumerate() {
                *b = Complex64::new(data[base + i * stride], 0.0);
            }
            self.forward.process_with_scratch(&mut buf, &mut scratch);
            for (b, f) in buf.iter_mut().zip(&factor) {
                *b *= f;
            }
            self.inverse.process_with_scratch(&mut buf, &mut scratch);
            for (i, b) in buf.iter().enumerate() {
                out[base + i * stride] = b.re;
            }
        }
        Ok(out)
    }
}

/// Sum in a fixed binary-tree order, independent of thread count.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    match x.len() {
        0 => 0.0,
        1 => x[0],
        2..=8 => x.iter().sum(),
        n => {
            let (a, b) = x.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_trigonometric_data_exactly() {
        let s = Spectral::new(32, 2).unwrap();
        let f: Vec<f64> = (0..s.len())
            .map(|i| {
                let [u, v] = s.coords(i);
                (3.0 * u).sin() * (2.0 * v).cos()
            })
            .collect();
        let fu = s.diff(&f, 0, 1, [3, 2]).unwrap();
        let fvv = s.diff(&f, 1, 2, [3, 2]).unwrap();
        for i in 0..s.len() {
            let [u, v] = s.coords(i);
            assert!((fu[i] - 3.0 * (3.0 * u).cos() * (2.0 * v).cos()).abs() < 1e-12);
            assert!((fvv[i] + 4.0 * (3.0 * u).sin() * (2.0 * v).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bands_beyond_capacity() {
        let s = Spectral::new(16, 1).unwrap();
        let f = vec![0.0; 16];
        assert!(matches!(s.diff(&f, 0, 1, [8, 0]), Err(OracleError::Aliasing { .. })));
        assert!(Spectral::new(24, 1).is_err());
        assert!(Spectral::new(8, 1).is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let x: Vec<f64> = (0..1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&x), 499_500.0);
    }
}
