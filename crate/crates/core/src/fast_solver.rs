//! Exact inverse of S + M·(V(ρ) + σ) on a polar grid for radial V.
//!
//! The angular part diagonalizes in cosine (even sector), sine (odd sector) or Fourier
//! (full disc) modes; each mode leaves a tridiagonal radial system. Only mode 0 couples
//! to the origin. Used as the SPD preconditioner of every Krylov solve.

use std::sync::Mutex;

use crate::angular::RingFft;
use crate::discretization::{SectorGrid, Symmetry};

/// Thomas factorization of a tridiagonal matrix.
#[derive(Debug, Clone)]
struct Tridiag {
    sub: Vec<f64>,
    cp: Vec<f64>,
    inv: Vec<f64>,
}

impl Tridiag {
    fn factor(sub: Vec<f64>, diag: &[f64], sup: &[f64]) -> Tridiag {
        let n = diag.len();
        let mut cp = vec![0.0; n];
        let mut inv = vec![0.0; n];
        inv[0] = 1.0 / diag[0];
        cp[0] = if n > 1 { sup[0] * inv[0] } else { 0.0 };
        for i in 1..n {
            let den = diag[i] - sub[i] * cp[i - 1];
            inv[i] = 1.0 / den;
            cp[i] = if i + 1 < n { sup[i] * inv[i] } else { 0.0 };
        }
        Tridiag { sub, cp, inv }
    }

    /// In-place solve.
    fn solve(&self, x: &mut [f64]) {
        let n = self.inv.len();
        x[0] *= self.inv[0];
        for i in 1..n {
            x[i] = (x[i] - self.sub[i] * x[i - 1]) * self.inv[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.cp[i] * x[i + 1];
        }
    }
}

pub struct PolarPreconditioner {
    grid: SectorGrid,
    /// Per-mode radial systems; mode 0 includes the origin as its first unknown.
    modes: Vec<Tridiag>,
    norms: Vec<f64>,
    fft: Mutex<RingFft>,
}

impl std::fmt::Debug for PolarPreconditioner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolarPreconditioner").field("grid", &self.grid).finish()
    }
}

impl PolarPreconditioner {
    /// `v_radial(ρ)` is the radial potential; `shift` is added to it.
    pub fn new(grid: &SectorGrid, v_radial: impl Fn(f64) -> f64, shift: f64) -> Self {
        let g = *grid;
        let (h, ht) = (g.h, g.h_theta);
        let nr = g.m - 1;
        let fft = RingFft::new(&g);
        let n_modes = fft.n_modes();
        let norms: Vec<f64> = (0..n_modes).map(|m| fft.norm(m)).collect();
        let mut modes = Vec::with_capacity(n_modes);
        for m in 0..n_modes {
            let mu = g.angular_symbol(fft.phase(m));
            let with_origin = m == 0 && g.has_origin();
            let off = usize::from(with_origin);
            let n = nr + off;
            let (mut sub, mut diag, mut sup) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
            let c_o = 0.5 * ht;
            if with_origin {
                let vol0 = std::f64::consts::PI * h * h / 4.0 * g.disc_fraction();
                let n0 = norms[0];
                diag[0] = c_o * n0 + vol0 * (v_radial(0.0) + shift);
                sup[0] = -c_o * n0;
            }
            for i in 1..g.m {
                let row = i - 1 + off;
                let rho = g.rho(i);
                let c_in = if i == 1 { c_o } else { (rho - 0.5 * h) * ht / h };
                let c_out = (rho + 0.5 * h) * ht / h;
                let c_a = h / (rho * ht);
                diag[row] = c_in + c_out + c_a * mu + rho * h * ht * (v_radial(rho) + shift);
                if i > 1 || with_origin {
                    sub[row] = -c_in;
                }
                if i + 1 < g.m {
                    sup[row] = -c_out;
                }
            }
            modes.push(Tridiag::factor(sub, &diag, &sup));
        }
        PolarPreconditioner { grid: g, modes, norms, fft: Mutex::new(fft) }
    }

    pub fn grid(&self) -> &SectorGrid {
        &self.grid
    }

    /// z = (S + M(V + σ))⁻¹ r.
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        let mut fft = match self.fft.try_lock() {
            Ok(guard) => guard,
            Err(_) => {
                // Concurrent callers get a private transform.
                let mut own = RingFft::new(&self.grid);
                return self.apply_with(&mut own, r, z);
            }
        };
        self.apply_with(&mut fft, r, z)
    }

    fn apply_with(&self, fft: &mut RingFft, r: &[f64], z: &mut [f64]) {
        let g = &self.grid;
        let na = g.n_ang();
        let nr = g.m - 1;
        let off = g.origin_offset();
        let nm = self.modes.len();
        let full = g.symmetry == Symmetry::Full;
        let origin_row = |m: usize| usize::from(m == 0 && g.has_origin());
        let mut re: Vec<Vec<f64>> = (0..nm).map(|m| vec![0.0; nr + origin_row(m)]).collect();
        let mut im: Vec<Vec<f64>> = if full { re.clone() } else { Vec::new() };
        let (mut c_re, mut c_im) = (vec![0.0; nm.max(na)], vec![0.0; nm.max(na)]);
        for i in 1..g.m {
            let ring = &r[off + (i - 1) * na..off + i * na];
            if full {
                fft.forward_full(ring, &mut c_re, &mut c_im);
            } else {
                fft.sums(ring, &mut c_re[..nm]);
            }
            for m in 0..nm {
                let row = i - 1 + origin_row(m);
                re[m][row] = c_re[m] / self.norms[m];
                if full {
                    im[m][row] = c_im[m] / self.norms[m];
                }
            }
        }
        if g.has_origin() {
            re[0][0] = r[0];
        }
        for m in 0..nm {
            self.modes[m].solve(&mut re[m]);
            if full && m > 0 {
                self.modes[m].solve(&mut im[m]);
            }
        }
        for i in 1..g.m {
            for m in 0..nm {
                let row = i - 1 + origin_row(m);
                c_re[m] = re[m][row];
                if full {
                    c_im[m] = im[m][row];
                }
            }
            let out = &mut z[off + (i - 1) * na..off + i * na];
            if full {
                fft.inverse_full(&c_re, &c_im, out);
            } else {
                fft.sums(&c_re[..nm], out);
            }
        }
        if g.has_origin() {
            z[0] = re[0][0];
        }
    }
}
