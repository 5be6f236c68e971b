//! Separable 3D FFT on x-fastest complex arrays, backed by rustfft.
//!
//! The forward transform is unnormalised; [`Fft3::inverse`] divides by the
//! point count so that `inverse(forward(x)) == x` up to roundoff.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::par;

/// Lines per parallel work item when transforming along strided axes.
const LINES_PER_TASK: usize = 64;

pub struct Fft3 {
    dims: [usize; 3],
    forward: [Arc<dyn Fft<f64>>; 3],
    inverse: [Arc<dyn Fft<f64>>; 3],
}

impl Fft3 {
    pub fn new(nx: usize, ny: usize, nz: usize) -> Self {
        let mut planner = FftPlanner::new();
        let mut plan = |n, dir| planner.plan_fft(n, dir);
        Fft3 {
            dims: [nx, ny, nz],
            forward: [
                plan(nx, FftDirection::Forward),
                plan(ny, FftDirection::Forward),
                plan(nz, FftDirection::Forward),
            ],
            inverse: [
                plan(nx, FftDirection::Inverse),
                plan(ny, FftDirection::Inverse),
                plan(nz, FftDirection::Inverse),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
        let scale = 1.0 / self.len() as f64;
        par::for_each_mut(data, |_, v| *v *= scale);
    }

    fn run(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>; 3]) {
        let [nx, ny, nz] = self.dims;
        assert_eq!(data.len(), nx * ny * nz, "FFT buffer length mismatch");
        let plane = nx * ny;

        // x: contiguous lines, one z-plane per task
        par::for_each_chunk_mut(data, plane, |_, chunk| plans[0].process(chunk));

        // y: transpose each z-plane so y lines become contiguous
        par::for_each_chunk_mut(data, plane, |_, chunk| {
            let mut tmp: Vec<Complex64> = (0..plane)
                .map(|t| {
                    let (i, j) = (t / ny, t % ny);
                    chunk[i + nx * j]
                })
                .collect();
            plans[1].process(&mut tmp);
            for (t, v) in tmp.into_iter().enumerate() {
                let (i, j) = (t / ny, t % ny);
                chunk[i + nx * j] = v;
            }
        });

        // z: gather into a z-contiguous scratch buffer
        if nz > 1 {
            let src: &[Complex64] = data;
            let mut scratch = par::map_range(plane * nz, |t| {
                let (p, k) = (t / nz, t % nz);
                src[p + plane * k]
            });
            par::for_each_chunk_mut(&mut scratch, nz * LINES_PER_TASK, |_, chunk| {
                plans[2].process(chunk)
            });
            par::for_each_mut(data, |idx, v| {
                let (p, k) = (idx % plane, idx / plane);
                *v = scratch[p * nz + k];
            });
        }
    }
}

/// Angular wavenumber of FFT bin `m` on an axis with `n` points and spacing
/// `d`, using the usual `fftfreq` ordering (bins above `n/2` are negative;
/// the Nyquist bin of an even axis maps to `-n/2`).
pub fn wavenumber(m: usize, n: usize, d: f64) -> f64 {
    let signed = if m < n.div_ceil(2) {
        m as f64
    } else {
        m as f64 - n as f64
    };
    2.0 * std::f64::consts::PI * signed / (n as f64 * d)
}
