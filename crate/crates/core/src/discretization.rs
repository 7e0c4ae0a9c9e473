//! Finite-volume polar grid on the symmetry sector θ ∈ [0, π/k] and fields on it.
//!
//! Node (i, j) sits at ρ_i = i h, θ_j = j h_θ. Ring nodes own the cell
//! [ρ_i ± h/2] × [θ_j ± h_θ/2]; edge nodes of a sector own half a cell. The origin owns
//! the disc of radius h/2 (restricted to the sector). The stiffness S is the symmetric
//! five-point flux operator, so -Δ_h = M⁻¹S with M the diagonal of cell areas.
//! ρ = R_out is a homogeneous Dirichlet boundary and carries no unknowns.
//!
//! Three symmetry variants share a geometry:
//! * `Even`: even reflection across both sector edges (the class H_s).
//! * `Odd`: odd reflection across both edges; edge nodes and the origin are zero.
//! * `Full`: the whole disc, periodic in θ with 2kq intervals.
//!
//! The angular part of S is either the three-point difference or its Fourier-spectral
//! counterpart (same cell weights, symbol φ² instead of 2 - 2cos φ). The three-point
//! form has an angular error that grows with the ring radius, which acts as a spurious
//! radial force on the bumps of the same size as the physical one; spectral is the default.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::angular::RingFft;
use crate::error::{Error, Result};
use crate::model::RingConfig;
use crate::numerics::smooth_ceil;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    Even,
    Odd,
    Full,
}

/// Discretization of the angular second derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AngularScheme {
    ThreePoint,
    #[default]
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorGrid {
    pub k: usize,
    /// Radial step h_ρ.
    pub h: f64,
    /// Number of radial intervals; ρ_m = R_out.
    pub m: usize,
    /// Angular intervals on [0, π/k].
    pub q: usize,
    pub h_theta: f64,
    pub symmetry: Symmetry,
    #[serde(default)]
    pub angular: AngularScheme,
}

/// Grid resolution limits that resolve the unit bump scale.
pub const MAX_H: f64 = 0.1;
pub const MIN_MARGIN: f64 = 12.0;

/// Even sector grid for the ring `cfg`: R_out >= r + margin, h_θ r ≈ h_θ_scale·h_ρ.
pub fn build_grid(cfg: &RingConfig, h_rho: f64, h_theta_scale: f64, margin: f64) -> Result<SectorGrid> {
    build_grid_spanning(cfg.k, cfg.r, cfg.r, h_rho, h_theta_scale, margin)
}

/// Even sector grid resolving every ring radius in [r_ref, r_hi]; the angular step is sized at r_hi.
pub fn build_grid_spanning(
    k: usize,
    r_ref: f64,
    r_hi: f64,
    h_rho: f64,
    h_theta_scale: f64,
    margin: f64,
) -> Result<SectorGrid> {
    if k < 2 {
        return Err(Error::InvalidParameter { key: "k", reason: "sector grid needs k >= 2".into() });
    }
    if !(h_rho > 0.0 && h_rho <= MAX_H) {
        return Err(Error::GridTooCoarse(format!("h_rho = {h_rho} outside (0, {MAX_H}]")));
    }
    if !(margin >= MIN_MARGIN) {
        return Err(Error::GridTooCoarse(format!("margin {margin} < {MIN_MARGIN}")));
    }
    if !(h_theta_scale > 0.0) {
        return Err(Error::InvalidParameter { key: "h_theta_scale", reason: "must be positive".into() });
    }
    let r_hi = r_hi.max(r_ref);
    let m = ((r_hi + margin) / h_rho).ceil() as usize;
    let wedge = PI / k as f64;
    let q = smooth_ceil((wedge * r_hi / (h_rho * h_theta_scale)).ceil().max(4.0) as usize);
    let h_theta = wedge / q as f64;
    if h_theta * r_hi > MAX_H * (1.0 + 1e-12) {
        return Err(Error::GridTooCoarse(format!("h_theta·r = {} > {MAX_H}", h_theta * r_hi)));
    }
    Ok(SectorGrid { k, h: h_rho, m, q, h_theta, symmetry: Symmetry::Even, angular: AngularScheme::default() })
}

impl SectorGrid {
    /// Unchecked constructor for arbitrary resolutions.
    pub fn new(k: usize, h: f64, m: usize, q: usize, symmetry: Symmetry) -> Self {
        SectorGrid { k, h, m, q, h_theta: PI / (k as f64 * q as f64), symmetry, angular: AngularScheme::default() }
    }

    pub fn with_angular(&self, angular: AngularScheme) -> Self {
        SectorGrid { angular, ..*self }
    }

    /// Eigenvalue of the angular operator (in units of 1/h_θ²·h_θ²) for mode phase φ.
    #[inline]
    pub fn angular_symbol(&self, phi: f64) -> f64 {
        match self.angular {
            AngularScheme::ThreePoint => 2.0 - 2.0 * phi.cos(),
            AngularScheme::Spectral => phi * phi,
        }
    }

    pub fn with_symmetry(&self, symmetry: Symmetry) -> Self {
        SectorGrid { symmetry, ..*self }
    }

    /// Same geometry at half the radial and angular step.
    pub fn refined(&self) -> Self {
        SectorGrid { h: self.h / 2.0, m: 2 * self.m, q: 2 * self.q, h_theta: self.h_theta / 2.0, ..*self }
    }

    pub fn r_out(&self) -> f64 {
        self.m as f64 * self.h
    }

    /// Angular intervals around the full circle.
    pub fn full_intervals(&self) -> usize {
        2 * self.k * self.q
    }

    /// Unknowns per ring.
    pub fn n_ang(&self) -> usize {
        match self.symmetry {
            Symmetry::Even => self.q + 1,
            Symmetry::Odd => self.q - 1,
            Symmetry::Full => self.full_intervals(),
        }
    }

    pub fn has_origin(&self) -> bool {
        self.symmetry != Symmetry::Odd
    }

    #[inline]
    pub fn origin_offset(&self) -> usize {
        usize::from(self.has_origin())
    }

    pub fn len(&self) -> usize {
        self.origin_offset() + (self.m - 1) * self.n_ang()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of ring node (i >= 1, slot j).
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        self.origin_offset() + (i - 1) * self.n_ang() + j
    }

    /// Full-circle angular index of slot j.
    #[inline]
    pub fn angle_index(&self, j: usize) -> usize {
        match self.symmetry {
            Symmetry::Odd => j + 1,
            _ => j,
        }
    }

    #[inline]
    pub fn theta(&self, j: usize) -> f64 {
        self.angle_index(j) as f64 * self.h_theta
    }

    #[inline]
    pub fn rho(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// Angular cell weight of slot j (½ on the edges of an even sector).
    #[inline]
    pub fn ang_weight(&self, j: usize) -> f64 {
        match self.symmetry {
            Symmetry::Even if j == 0 || j == self.q => 0.5,
            _ => 1.0,
        }
    }

    /// Fraction of the full disc represented by one grid copy.
    pub fn disc_fraction(&self) -> f64 {
        match self.symmetry {
            Symmetry::Full => 1.0,
            _ => 1.0 / (2 * self.k) as f64,
        }
    }

    /// Number of sector copies tiling the plane (1 for the full disc).
    pub fn multiplicity(&self) -> f64 {
        1.0 / self.disc_fraction()
    }

    /// Cell areas (diagonal mass matrix).
    pub fn volumes(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.len());
        if self.has_origin() {
            v.push(PI * self.h * self.h / 4.0 * self.disc_fraction());
        }
        for i in 1..self.m {
            let a = self.rho(i) * self.h * self.h_theta;
            for j in 0..self.n_ang() {
                v.push(a * self.ang_weight(j));
            }
        }
        v
    }

    /// (ρ, θ) of every node in index order.
    pub fn polar_nodes(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        if self.has_origin() {
            out.push((0.0, 0.0));
        }
        for i in 1..self.m {
            for j in 0..self.n_ang() {
                out.push((self.rho(i), self.theta(j)));
            }
        }
        out
    }

    /// Cartesian coordinates of every node.
    pub fn cartesian_nodes(&self) -> Vec<[f64; 2]> {
        self.polar_nodes().into_iter().map(|(r, t)| [r * t.cos(), r * t.sin()]).collect()
    }

    /// y = S x for the five-point flux stiffness (positive semidefinite).
    pub fn stiffness_apply(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.len());
        let na = self.n_ang();
        let off = self.origin_offset();
        let (h, ht) = (self.h, self.h_theta);
        y.iter_mut().for_each(|v| *v = 0.0);
        let mut spectral = (self.angular == AngularScheme::Spectral).then(|| {
            let fft = RingFft::new(self);
            let symbol: Vec<f64> = (0..fft.n_modes()).map(|m| self.angular_symbol(fft.phase(m))).collect();
            let nc = fft.n_modes().max(na);
            (fft, symbol, vec![0.0; na], vec![0.0; na], vec![0.0; nc], vec![0.0; nc])
        });
        // Origin to ring 1: face ρ = h/2.
        let c_o = 0.5 * ht;
        for j in 0..na {
            let w = self.ang_weight(j);
            let r1 = off + j;
            let u0 = if self.has_origin() { x[0] } else { 0.0 };
            let flux = c_o * w * (x[r1] - u0);
            y[r1] += flux;
            if self.has_origin() {
                y[0] -= flux;
            }
        }
        for i in 1..self.m {
            let base = off + (i - 1) * na;
            // Radial face ρ_{i+½}.
            let c_r = (self.rho(i) + 0.5 * h) * ht / h;
            if i + 1 < self.m {
                let next = base + na;
                for j in 0..na {
                    let flux = c_r * self.ang_weight(j) * (x[base + j] - x[next + j]);
                    y[base + j] += flux;
                    y[next + j] -= flux;
                }
            } else {
                for j in 0..na {
                    y[base + j] += c_r * self.ang_weight(j) * x[base + j];
                }
            }
            // Angular faces.
            let c_a = h / (self.rho(i) * ht);
            if let Some(sp) = spectral.as_mut() {
                let (fft, symbol, wx, tmp, coef, coef_im) = sp;
                for j in 0..na {
                    wx[j] = self.ang_weight(j) * x[base + j];
                }
                fft.apply_symbol(wx, tmp, symbol, coef, coef_im);
                for j in 0..na {
                    y[base + j] += c_a * self.ang_weight(j) * tmp[j];
                }
                continue;
            }
            let ring = &x[base..base + na];
            let out = &mut y[base..base + na];
            match self.symmetry {
                Symmetry::Even => {
                    for j in 0..na - 1 {
                        let flux = c_a * (ring[j] - ring[j + 1]);
                        out[j] += flux;
                        out[j + 1] -= flux;
                    }
                }
                Symmetry::Odd => {
                    for j in 0..na.saturating_sub(1) {
                        let flux = c_a * (ring[j] - ring[j + 1]);
                        out[j] += flux;
                        out[j + 1] -= flux;
                    }
                    out[0] += c_a * ring[0];
                    out[na - 1] += c_a * ring[na - 1];
                }
                Symmetry::Full => {
                    for j in 0..na {
                        let jn = if j + 1 == na { 0 } else { j + 1 };
                        let flux = c_a * (ring[j] - ring[jn]);
                        out[j] += flux;
                        out[jn] -= flux;
                    }
                }
            }
        }
    }

    /// Value of node (i, full-circle angle index jj) of a field on this grid, unfolding
    /// symmetry; negative i reflects through the origin, i >= m is the Dirichlet boundary.
    #[inline]
    pub fn node_value(&self, values: &[f64], i: isize, jj: isize) -> f64 {
        let n_full = self.full_intervals() as isize;
        let (i, jj) = if i < 0 { (-i, jj + n_full / 2) } else { (i, jj) };
        if i >= self.m as isize {
            return 0.0;
        }
        if i == 0 {
            return if self.has_origin() { values[0] } else { 0.0 };
        }
        let i = i as usize;
        match self.symmetry {
            Symmetry::Full => values[self.idx(i, jj.rem_euclid(n_full) as usize)],
            Symmetry::Even | Symmetry::Odd => {
                let period = 2 * self.q as isize;
                let t = jj.rem_euclid(period);
                let (j, sign) = if t <= self.q as isize { (t, 1.0) } else { (period - t, -1.0) };
                let j = j as usize;
                if self.symmetry == Symmetry::Even {
                    values[self.idx(i, j)]
                } else if j == 0 || j == self.q {
                    0.0
                } else {
                    sign * values[self.idx(i, j - 1)]
                }
            }
        }
    }
}

/// A nodal function on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub grid: SectorGrid,
    pub values: Vec<f64>,
}

/// Four-point Lagrange weights at offset t ∈ [0, 1) for nodes -1, 0, 1, 2.
#[inline]
fn lagrange4(t: f64) -> [f64; 4] {
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

impl Field {
    pub fn zeros(grid: SectorGrid) -> Self {
        Field { grid, values: vec![0.0; grid.len()] }
    }

    pub fn new(grid: SectorGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len());
        Field { grid, values }
    }

    /// Samples f(x, y) at every node.
    pub fn from_fn(grid: SectorGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = grid.cartesian_nodes().into_iter().map(|[x, y]| f(x, y)).collect();
        Field { grid, values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Σ vol·f, the integral over one grid copy.
    pub fn integrate(&self) -> f64 {
        self.grid.volumes().iter().zip(&self.values).map(|(v, f)| v * f).sum()
    }

    /// Σ vol·f·g.
    pub fn inner(&self, other: &Field) -> f64 {
        assert_eq!(self.grid, other.grid);
        self.grid.volumes().iter().zip(self.values.iter().zip(&other.values)).map(|(v, (a, b))| v * a * b).sum()
    }

    /// Pointwise -Δ_h f = M⁻¹ S f.
    pub fn neg_laplacian(&self) -> Field {
        let mut y = vec![0.0; self.values.len()];
        self.grid.stiffness_apply(&self.values, &mut y);
        for (yi, v) in y.iter_mut().zip(self.grid.volumes()) {
            *yi /= v;
        }
        Field { grid: self.grid, values: y }
    }

    /// Value at node (i, full-circle angle index jj).
    #[inline]
    pub fn node(&self, i: isize, jj: isize) -> f64 {
        self.grid.node_value(&self.values, i, jj)
    }

    /// Bicubic Lagrange interpolation in (ρ, θ) at a Cartesian point.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let g = &self.grid;
        let rho = x.hypot(y);
        let theta = y.atan2(x);
        let fi = rho / g.h;
        let fj = theta / g.h_theta;
        let i0 = fi.floor();
        let j0 = fj.floor();
        let wi = lagrange4(fi - i0);
        let wj = lagrange4(fj - j0);
        let (i0, j0) = (i0 as isize, j0 as isize);
        let mut acc = 0.0;
        for (a, wa) in wi.iter().enumerate() {
            let i = i0 - 1 + a as isize;
            let mut row = 0.0;
            for (b, wb) in wj.iter().enumerate() {
                row += wb * self.node(i, j0 - 1 + b as isize);
            }
            acc += wa * row;
        }
        acc
    }

    /// Centred ∂_ρ at ring nodes (origin entry 0), same symmetry.
    pub fn d_rho(&self) -> Field {
        let g = self.grid;
        let mut out = Field::zeros(g);
        for i in 1..g.m {
            for j in 0..g.n_ang() {
                let jj = g.angle_index(j) as isize;
                let (ii, h) = (i as isize, g.h);
                out.values[g.idx(i, j)] = (self.node(ii + 1, jj) - self.node(ii - 1, jj)) / (2.0 * h);
            }
        }
        out
    }

    /// Centred ∂_θ at ring nodes; parity flips between `Even` and `Odd`.
    pub fn d_theta(&self) -> Field {
        let g = self.grid;
        let target = match g.symmetry {
            Symmetry::Even => Symmetry::Odd,
            Symmetry::Odd => Symmetry::Even,
            Symmetry::Full => Symmetry::Full,
        };
        let tg = g.with_symmetry(target);
        let mut out = Field::zeros(tg);
        for i in 1..g.m {
            for j in 0..tg.n_ang() {
                let jj = tg.angle_index(j) as isize;
                let ii = i as isize;
                out.values[tg.idx(i, j)] = (self.node(ii, jj + 1) - self.node(ii, jj - 1)) / (2.0 * g.h_theta);
            }
        }
        out
    }

    /// Gradient at a Cartesian point from interpolated centred differences.
    pub fn gradient_at(dr: &Field, dt: &Field, x: f64, y: f64) -> [f64; 2] {
        let rho = x.hypot(y);
        let (c, s) = (x / rho, y / rho);
        let fr = dr.eval(x, y);
        let ft = dt.eval(x, y) / rho;
        [fr * c - ft * s, fr * s + ft * c]
    }

    /// Re-express on the same geometry with another symmetry (lift or restrict).
    pub fn to_symmetry(&self, symmetry: Symmetry) -> Field {
        let g = self.grid.with_symmetry(symmetry);
        let mut out = Field::zeros(g);
        if g.has_origin() {
            out.values[0] = self.node(0, 0);
        }
        for i in 1..g.m {
            for j in 0..g.n_ang() {
                out.values[g.idx(i, j)] = self.node(i as isize, g.angle_index(j) as isize);
            }
        }
        out
    }

    /// Write `rho,theta,value` rows.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "rho,theta,value")?;
        for ((r, t), v) in self.grid.polar_nodes().into_iter().zip(&self.values) {
            writeln!(w, "{r},{t},{v}")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Weights of the star norm: centres x_j and decay τ.
#[derive(Debug, Clone, PartialEq)]
pub struct StarNormParams {
    pub tau: f64,
    pub centers: Vec<[f64; 2]>,
}

impl StarNormParams {
    /// Centres of the ring `cfg`; τ must lie in (0, min(p-1, 1)).
    pub fn for_ring(cfg: &RingConfig, tau: f64, p: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < (p - 1.0).min(1.0)) {
            return Err(Error::InvalidParameter { key: "tau", reason: format!("{tau} outside (0, min(p-1, 1))") });
        }
        Ok(StarNormParams { tau, centers: (0..cfg.k).map(|j| cfg.center(j)).collect() })
    }

    /// Σ_j e^{-τ|y - x_j|}.
    #[inline]
    pub fn weight(&self, x: f64, y: f64) -> f64 {
        self.centers.iter().map(|c| (-self.tau * (x - c[0]).hypot(y - c[1])).exp()).sum()
    }

    /// Weight at every node of a grid.
    pub fn weights(&self, grid: &SectorGrid) -> Vec<f64> {
        grid.cartesian_nodes().into_iter().map(|[x, y]| self.weight(x, y)).collect()
    }
}

/// max over nodes of |f| / Σ_j e^{-τ|y - x_j|}.
pub fn star_norm(f: &Field, params: &StarNormParams) -> f64 {
    star_norm_weighted(&f.values, &params.weights(&f.grid))
}

/// Star norm with precomputed node weights.
pub fn star_norm_weighted(values: &[f64], weights: &[f64]) -> f64 {
    values.iter().zip(weights).fold(0.0, |m, (v, w)| m.max(v.abs() / w))
}
