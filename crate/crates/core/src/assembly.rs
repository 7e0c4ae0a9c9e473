//! Ring superpositions on a grid: W_r, the radial kernel direction Z, and l_k.

use crate::discretization::{Field, SectorGrid};
use crate::ground_state::GroundState;
use crate::model::{Potential, RingConfig};

/// All bump-sum fields of one ring radius, evaluated in a single pass.
#[derive(Debug, Clone)]
pub struct RingFields {
    /// W = Σ_j U_{x_j}.
    pub w: Field,
    /// Z = Σ_j ∂U_{x_j}/∂r.
    pub z: Field,
    /// Z̃ = Σ_j U_{x_j}^{p-1} ∂U_{x_j}/∂r.
    pub zt: Field,
    /// Σ_j U_{x_j}^p.
    pub sum_up: Field,
}

impl RingFields {
    pub fn assemble(grid: &SectorGrid, cfg: &RingConfig, gs: &GroundState) -> RingFields {
        let p = gs.p();
        let n = grid.len();
        let (mut w, mut z, mut zt, mut sp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let centers: Vec<[f64; 2]> = (0..cfg.k).map(|j| cfg.center(j)).collect();
        let dirs: Vec<[f64; 2]> = (0..cfg.k).map(|j| [cfg.angle(j).cos(), cfg.angle(j).sin()]).collect();
        for (idx, [x, y]) in grid.cartesian_nodes().into_iter().enumerate() {
            for (c, e) in centers.iter().zip(&dirs) {
                let (dx, dy) = (x - c[0], y - c[1]);
                let s = dx.hypot(dy);
                let u = gs.eval_u(s);
                let up1 = u.powf(p - 1.0);
                w[idx] += u;
                sp[idx] += u.powf(p);
                if s > 0.0 {
                    let zj = -gs.eval_du(s) * (dx * e[0] + dy * e[1]) / s;
                    z[idx] += zj;
                    zt[idx] += up1 * zj;
                }
            }
        }
        RingFields {
            w: Field::new(*grid, w),
            z: Field::new(*grid, z),
            zt: Field::new(*grid, zt),
            sum_up: Field::new(*grid, sp),
        }
    }

    /// l_k = (W^p - Σ_j U_{x_j}^p) - (V - 1) W, so that W + ω solves the equation iff
    /// L ω = l_k + R(ω).
    pub fn rhs_l(&self, pot: &Potential, p: f64) -> Field {
        let g = self.w.grid;
        let values = g
            .polar_nodes()
            .into_iter()
            .zip(self.w.values.iter().zip(&self.sum_up.values))
            .map(|((rho, _), (&w, &sp))| (w.powf(p) - sp) - pot.excess(rho) * w)
            .collect();
        Field::new(g, values)
    }
}

pub fn assemble_w(grid: &SectorGrid, cfg: &RingConfig, gs: &GroundState) -> Field {
    RingFields::assemble(grid, cfg, gs).w
}

pub fn assemble_z(grid: &SectorGrid, cfg: &RingConfig, gs: &GroundState) -> Field {
    RingFields::assemble(grid, cfg, gs).z
}

pub fn assemble_l(grid: &SectorGrid, cfg: &RingConfig, gs: &GroundState, pot: &Potential) -> Field {
    RingFields::assemble(grid, cfg, gs).rhs_l(pot, gs.p())
}

/// V at every node of a grid (frozen inside the potential core).
pub fn potential_on_grid(grid: &SectorGrid, pot: &Potential) -> Vec<f64> {
    grid.polar_nodes().into_iter().map(|(rho, _)| pot.v(rho)).collect()
}
