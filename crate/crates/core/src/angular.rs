//! Per-ring angular transforms: cosine (even sector), sine (odd sector), Fourier (full disc).
//!
//! `sums` computes the unweighted Σ_j x_j φ_m(j) over one ring; the same sum is its own
//! synthesis, Σ_m c_m φ_m(j). Mode m has phase φ_m (angle step times wavenumber) and
//! weighted norm N_m = Σ_j w_j φ_m(j)².

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::discretization::{SectorGrid, Symmetry};

pub struct RingFft {
    symmetry: Symmetry,
    q: usize,
    nf: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl RingFft {
    pub fn new(grid: &SectorGrid) -> Self {
        let nf = grid.full_intervals();
        let len = match grid.symmetry {
            Symmetry::Full => nf,
            _ => 2 * grid.q,
        };
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let ifft = planner.plan_fft_inverse(len);
        let s = fft.get_inplace_scratch_len().max(ifft.get_inplace_scratch_len());
        RingFft {
            symmetry: grid.symmetry,
            q: grid.q,
            nf,
            fft,
            ifft,
            buf: vec![Complex64::new(0.0, 0.0); len],
            scratch: vec![Complex64::new(0.0, 0.0); s],
        }
    }

    /// Stored modes: q+1 cosines, q-1 sines, or nf/2+1 Fourier modes.
    pub fn n_modes(&self) -> usize {
        match self.symmetry {
            Symmetry::Even => self.q + 1,
            Symmetry::Odd => self.q - 1,
            Symmetry::Full => self.nf / 2 + 1,
        }
    }

    /// Phase φ_m ∈ [0, π] of stored mode m.
    pub fn phase(&self, m: usize) -> f64 {
        match self.symmetry {
            Symmetry::Even => m as f64 * PI / self.q as f64,
            Symmetry::Odd => (m + 1) as f64 * PI / self.q as f64,
            Symmetry::Full => 2.0 * PI * m as f64 / self.nf as f64,
        }
    }

    pub fn norm(&self, m: usize) -> f64 {
        match self.symmetry {
            Symmetry::Even if m == 0 || m == self.q => self.q as f64,
            Symmetry::Even | Symmetry::Odd => self.q as f64 / 2.0,
            Symmetry::Full => self.nf as f64,
        }
    }

    /// Unweighted cosine or sine sums of one sector ring (DCT-I / DST-I via a 2q FFT).
    pub fn sums(&mut self, ring: &[f64], out: &mut [f64]) {
        let q = self.q;
        let buf = &mut self.buf;
        buf.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        match self.symmetry {
            Symmetry::Even => {
                for j in 0..=q {
                    buf[j].re = ring[j];
                }
                for j in 1..q {
                    buf[2 * q - j].re = ring[j];
                }
                self.fft.process_with_scratch(buf, &mut self.scratch);
                for m in 0..=q {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    out[m] = 0.5 * (buf[m].re + ring[0] + sign * ring[q]);
                }
            }
            Symmetry::Odd => {
                for j in 1..q {
                    buf[j].re = ring[j - 1];
                    buf[2 * q - j].re = -ring[j - 1];
                }
                self.fft.process_with_scratch(buf, &mut self.scratch);
                for m in 1..q {
                    out[m - 1] = -0.5 * buf[m].im;
                }
            }
            Symmetry::Full => panic!("sums is defined for sector rings only"),
        }
    }

    /// Forward DFT of a full ring into (re, im) of modes 0..=nf/2.
    pub fn forward_full(&mut self, ring: &[f64], re: &mut [f64], im: &mut [f64]) {
        for (b, &x) in self.buf.iter_mut().zip(ring) {
            *b = Complex64::new(x, 0.0);
        }
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        for m in 0..=self.nf / 2 {
            re[m] = self.buf[m].re;
            im[m] = self.buf[m].im;
        }
    }

    /// Σ_m c_m e^{2πi m j/nf} over all m, given modes 0..=nf/2 of a real sequence.
    pub fn inverse_full(&mut self, re: &[f64], im: &[f64], ring: &mut [f64]) {
        let nf = self.nf;
        for m in 0..=nf / 2 {
            let c = Complex64::new(re[m], if m == 0 || 2 * m == nf { 0.0 } else { im[m] });
            self.buf[m] = c;
            if m > 0 && 2 * m < nf {
                self.buf[nf - m] = c.conj();
            }
        }
        self.ifft.process_with_scratch(&mut self.buf, &mut self.scratch);
        for (r, b) in ring.iter_mut().zip(&self.buf) {
            *r = b.re;
        }
    }

    /// out = Φ diag(s_m / N_m) Φᵀ x on one ring, Φᵀ the unweighted sums.
    pub fn apply_symbol(&mut self, x: &[f64], out: &mut [f64], symbol: &[f64], coef: &mut [f64], coef_im: &mut [f64]) {
        match self.symmetry {
            Symmetry::Full => {
                self.forward_full(x, coef, coef_im);
                for m in 0..=self.nf / 2 {
                    let s = symbol[m] / self.norm(m);
                    coef[m] *= s;
                    coef_im[m] *= s;
                }
                self.inverse_full(coef, coef_im, out);
            }
            _ => {
                let nm = self.n_modes();
                self.sums(x, &mut coef[..nm]);
                for m in 0..nm {
                    coef[m] *= symbol[m] / self.norm(m);
                }
                self.sums(&coef[..nm], out);
            }
        }
    }
}
