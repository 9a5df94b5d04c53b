//! Fast Beurling transform on the sampling grid.
//!
//! The principal-value convolution with `-1/(pi zeta^2)` acts in Fourier as
//! multiplication by `conj(xi)/xi` (zero at `xi = 0`). We zero-pad the
//! `m x m` core by a factor of 4 before the FFT so the periodic images of
//! the slowly decaying kernel stay far from the window.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::par;

use super::Grid;

const PAD_FACTOR: usize = 4;

/// Reusable transform with cached FFT plans and padded scratch buffers.
pub struct BeurlingTransform {
    m: usize,
    p: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl BeurlingTransform {
    pub fn new(m: usize) -> Self {
        let p = PAD_FACTOR * m;
        let mut planner = FftPlanner::new();
        BeurlingTransform {
            m,
            p,
            fft: planner.plan_fft_forward(p),
            ifft: planner.plan_fft_inverse(p),
            buf: vec![Complex64::default(); p * p],
            tmp: vec![Complex64::default(); p * p],
        }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// Transform of the window samples, returned on the same window.
    pub fn apply(&mut self, g: &Grid) -> Grid {
        assert_eq!(g.size(), self.m, "grid size does not match the plan");
        self.run(g);
        let m = self.m;
        let p = self.p;
        let mut out = vec![Complex64::default(); m * m];
        for i in 0..m {
            out[i * m..(i + 1) * m].copy_from_slice(&self.buf[i * p..i * p + m]);
        }
        Grid::from_samples(m, out)
    }

    /// Transform returned on the full padded domain (window at the corner),
    /// for diagnostics like the isometry check.
    pub fn apply_padded(&mut self, g: &Grid) -> (Vec<Complex64>, usize) {
        assert_eq!(g.size(), self.m, "grid size does not match the plan");
        self.run(g);
        (self.buf.clone(), self.p)
    }

    fn run(&mut self, g: &Grid) {
        let m = self.m;
        let p = self.p;
        self.buf.iter_mut().for_each(|c| *c = Complex64::default());
        for i in 0..m {
            self.buf[i * p..i * p + m].copy_from_slice(&g.samples()[i * m..(i + 1) * m]);
        }

        fft_rows(&self.fft, &mut self.buf, p);
        transpose(&self.buf, &mut self.tmp, p);
        fft_rows(&self.fft, &mut self.tmp, p);

        // after the two passes the tmp layout is (x-frequency row, y-frequency column)
        let p_i = p as i64;
        par::for_each_row_mut(&mut self.tmp, p, |kc, row| {
            let fx = signed_frequency(kc as i64, p_i);
            for (kr, cell) in row.iter_mut().enumerate() {
                let fy = signed_frequency(kr as i64, p_i);
                if fx == 0 && fy == 0 {
                    *cell = Complex64::default();
                } else {
                    let xi = Complex64::new(fx as f64, fy as f64);
                    *cell *= xi.conj() / xi;
                }
            }
        });

        fft_rows(&self.ifft, &mut self.tmp, p);
        transpose(&self.tmp, &mut self.buf, p);
        fft_rows(&self.ifft, &mut self.buf, p);

        let scale = 1.0 / (p * p) as f64;
        par::for_each_row_mut(&mut self.buf, p, |_, row| {
            for cell in row.iter_mut() {
                *cell *= scale;
            }
        });
    }
}

fn signed_frequency(k: i64, p: i64) -> i64 {
    if k <= p / 2 {
        k
    } else {
        k - p
    }
}

fn fft_rows(fft: &Arc<dyn Fft<f64>>, data: &mut [Complex64], width: usize) {
    // one scratch per band of rows; process_with_scratch transforms every
    // width-sized chunk of the band in a single call
    const BAND: usize = 32;
    let scratch_len = fft.get_inplace_scratch_len();
    par::for_each_row_mut(data, width * BAND, move |_, band| {
        let mut scratch = vec![Complex64::default(); scratch_len];
        fft.process_with_scratch(band, &mut scratch);
    });
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], p: usize) {
    const BLOCK: usize = 64;
    par::for_each_row_mut(dst, p * BLOCK, |band, rows| {
        let i0 = band * BLOCK;
        let height = rows.len() / p;
        for jb in (0..p).step_by(BLOCK) {
            let jend = (jb + BLOCK).min(p);
            for di in 0..height {
                let i = i0 + di;
                for j in jb..jend {
                    rows[di * p + j] = src[j * p + i];
                }
            }
        }
    });
}

/// One-shot Beurling transform; builds and discards the padded plan.
pub fn beurling_transform(g: &Grid) -> Grid {
    BeurlingTransform::new(g.size()).apply(g)
}
