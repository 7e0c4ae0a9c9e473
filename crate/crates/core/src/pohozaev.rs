//! Local Pohozaev identity on a ball around a bump.
//!
//! For u solving the equation and ξ solving its linearization,
//!
//!   -∮ ∂_ν u ∂_i ξ - ∮ ∂_ν ξ ∂_i u + ∮ ⟨∇u, ∇ξ⟩ ν_i + ∮ V u ξ ν_i - ∮ u^p ξ ν_i = ∫_Ω u ξ ∂_i V.
//!
//! Surface integrals use the trapezoidal rule on the circle, the volume integral a polar
//! rule around the ball centre (Gauss-Legendre in radius, trapezoidal in angle). Fields and
//! their centred-difference gradients are interpolated to the quadrature nodes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::discretization::{Field, Symmetry};
use crate::error::{Error, Result};
use crate::ground_state::GroundState;
use crate::model::{bump_spacing, Potential, RingConfig};
use crate::solver::SolutionBundle;

/// Guards the relative residual when both sides vanish.
pub const RESIDUAL_EPS: f64 = 1e-30;

const GAUSS4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PohozaevBall {
    pub center: [f64; 2],
    pub radius: f64,
    /// Trapezoidal nodes on the circle (and per ring of the volume rule).
    pub n_circle: usize,
}

impl PohozaevBall {
    pub fn new(center: [f64; 2], radius: f64, n_circle: usize) -> Result<Self> {
        if !(radius > 2.0) {
            return Err(Error::InvalidParameter { key: "radius", reason: format!("{radius} must exceed 2") });
        }
        if n_circle < 8 {
            return Err(Error::InvalidParameter { key: "n_circle", reason: format!("{n_circle} < 8") });
        }
        Ok(PohozaevBall { center, radius, n_circle })
    }

    /// B(x₁, frac·|x₂ - x₁|) around the first bump of the ring.
    pub fn around_first_bump(cfg: &RingConfig, frac: f64, n_circle: usize) -> Result<Self> {
        PohozaevBall::new(cfg.center(0), frac * bump_spacing(cfg), n_circle)
    }
}

/// A pair (u, ξ) with the centred-difference derivatives needed for the boundary terms.
#[derive(Debug, Clone)]
pub struct FieldPair {
    u: [Field; 3],
    xi: [Field; 3],
}

/// Value and Cartesian gradient at a point.
#[derive(Debug, Clone, Copy)]
struct Jet {
    v: f64,
    g: [f64; 2],
}

/// Centred-difference order of the gradients fed to the boundary terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Stencil {
    Second,
    #[default]
    Fourth,
}

/// Centred ∂_ρ and ∂_θ of a field at its own nodes.
pub fn derivatives(f: &Field, stencil: Stencil) -> [Field; 3] {
    if stencil == Stencil::Second {
        return [f.clone(), f.d_rho(), f.d_theta()];
    }
    let g = f.grid;
    let c = |m2: f64, m1: f64, p1: f64, p2: f64, step: f64| (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * step);
    let mut dr = Field::zeros(g);
    for i in 1..g.m {
        let ii = i as isize;
        for j in 0..g.n_ang() {
            let jj = g.angle_index(j) as isize;
            dr.values[g.idx(i, j)] =
                c(f.node(ii - 2, jj), f.node(ii - 1, jj), f.node(ii + 1, jj), f.node(ii + 2, jj), g.h);
        }
    }
    // ∂_θ flips the reflection parity, as in `Field::d_theta`.
    let tg = g.with_symmetry(match g.symmetry {
        Symmetry::Even => Symmetry::Odd,
        Symmetry::Odd => Symmetry::Even,
        Symmetry::Full => Symmetry::Full,
    });
    let mut dt = Field::zeros(tg);
    for i in 1..g.m {
        let ii = i as isize;
        for j in 0..tg.n_ang() {
            let jj = tg.angle_index(j) as isize;
            dt.values[tg.idx(i, j)] =
                c(f.node(ii, jj - 2), f.node(ii, jj - 1), f.node(ii, jj + 1), f.node(ii, jj + 2), g.h_theta);
        }
    }
    [f.clone(), dr, dt]
}

impl FieldPair {
    pub fn new(u: &Field, xi: &Field) -> Self {
        Self::with_stencil(u, xi, Stencil::default())
    }

    pub fn with_stencil(u: &Field, xi: &Field, stencil: Stencil) -> Self {
        FieldPair { u: derivatives(u, stencil), xi: derivatives(xi, stencil) }
    }

    fn jet(f: &[Field; 3], x: f64, y: f64) -> Jet {
        Jet { v: f[0].eval(x, y), g: Field::gradient_at(&f[1], &f[2], x, y) }
    }

    fn check(&self, ball: &PohozaevBall) -> Result<()> {
        for f in [&self.u[0], &self.xi[0]] {
            let g = &f.grid;
            let reach = ball.center[0].hypot(ball.center[1]) + ball.radius;
            if reach > g.r_out() - 3.0 * g.h {
                return Err(Error::BallOutsideGrid { center: ball.center, radius: ball.radius });
            }
        }
        Ok(())
    }

    /// Trapezoidal circle rule: Σ w · integrand(y, ν, u-jet, ξ-jet).
    fn circle(&self, ball: &PohozaevBall, mut integrand: impl FnMut([f64; 2], [f64; 2], Jet, Jet) -> f64) -> f64 {
        let n = ball.n_circle;
        let ds = 2.0 * PI * ball.radius / n as f64;
        (0..n)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / n as f64;
                let nu = [phi.cos(), phi.sin()];
                let y = [ball.center[0] + ball.radius * nu[0], ball.center[1] + ball.radius * nu[1]];
                integrand(y, nu, Self::jet(&self.u, y[0], y[1]), Self::jet(&self.xi, y[0], y[1]))
            })
            .sum::<f64>()
            * ds
    }

    /// The bilinear boundary form along axis `i` (1-based).
    pub fn boundary_form(&self, ball: &PohozaevBall, i: usize) -> Result<f64> {
        self.check(ball)?;
        let a = axis(i)?;
        Ok(self.circle(ball, |_, nu, u, xi| {
            let dnu_u = u.g[0] * nu[0] + u.g[1] * nu[1];
            let dnu_xi = xi.g[0] * nu[0] + xi.g[1] * nu[1];
            let grad = u.g[0] * xi.g[0] + u.g[1] * xi.g[1];
            -dnu_u * xi.g[a] - dnu_xi * u.g[a] + grad * nu[a] + u.v * xi.v * nu[a]
        }))
    }

    /// ∫_Ω u ξ ∂_i V.
    pub fn volume_term(&self, ball: &PohozaevBall, pot: &Potential, i: usize) -> Result<f64> {
        self.check(ball)?;
        let a = axis(i)?;
        let h = self.u[0].grid.h;
        let panels = (ball.radius / h).ceil() as usize;
        let dr = ball.radius / panels as f64;
        let n = ball.n_circle;
        let dphi = 2.0 * PI / n as f64;
        let mut sum = 0.0;
        for pnl in 0..panels {
            for (t, w) in GAUSS4 {
                let s = (pnl as f64 + 0.5 * (t + 1.0)) * dr;
                let mut ring = 0.0;
                for j in 0..n {
                    let phi = j as f64 * dphi;
                    let (x, y) = (ball.center[0] + s * phi.cos(), ball.center[1] + s * phi.sin());
                    ring += self.u[0].eval(x, y) * self.xi[0].eval(x, y) * pot.grad_component(&[x, y], a);
                }
                sum += 0.5 * w * dr * s * ring * dphi;
            }
        }
        Ok(sum)
    }

    /// Both sides of the identity along axis `i`.
    pub fn identity(&self, ball: &PohozaevBall, pot: &Potential, p: f64, i: usize) -> Result<PohozaevIdentity> {
        let a = axis(i)?;
        let form = self.boundary_form(ball, i)?;
        let extra = self.circle(ball, |y, nu, u, xi| {
            let rho = y[0].hypot(y[1]);
            (pot.excess(rho) * u.v * xi.v - u.v.abs().powf(p - 1.0) * u.v * xi.v) * nu[a]
        });
        let lhs = form + extra;
        let rhs = self.volume_term(ball, pot, i)?;
        Ok(PohozaevIdentity { lhs, rhs, residual: relative_residual(lhs, rhs) })
    }
}

fn axis(i: usize) -> Result<usize> {
    match i {
        1 | 2 => Ok(i - 1),
        _ => Err(Error::InvalidParameter { key: "axis", reason: format!("{i} not in {{1, 2}}") }),
    }
}

pub fn relative_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / (lhs.abs() + rhs.abs() + RESIDUAL_EPS)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PohozaevIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn boundary_form(u: &Field, xi: &Field, ball: &PohozaevBall, i: usize) -> Result<f64> {
    FieldPair::new(u, xi).boundary_form(ball, i)
}

pub fn identity_residual(u: &Field, xi: &Field, ball: &PohozaevBall, pot: &Potential, p: f64, i: usize) -> Result<PohozaevIdentity> {
    FieldPair::new(u, xi).identity(ball, pot, p, i)
}

/// ∫_Ω u ξ ∂₁V against its moment surrogate for a Z-aligned candidate ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PohozaevBalancing {
    pub direct: f64,
    /// -b_m α(α+1) a₁ / r^{α+2} · ∫U U'(|y|) y₁²/|y|. The minus sign comes from
    /// ∂_r U_{x₁} = -∂_{y₁} U_{x₁} at the first bump.
    pub surrogate: f64,
    pub b_m: f64,
}

impl PohozaevBalancing {
    pub fn ratio(&self) -> f64 {
        self.surrogate / self.direct
    }
}

/// Balancing through the volume side of the identity on B(x₁, |x₂ - x₁|/2), for a candidate ξ
/// normalized to star norm 1.
pub fn balancing_via_pohozaev(bundle: &SolutionBundle, xi: &Field, gs: &GroundState, n_circle: usize) -> Result<PohozaevBalancing> {
    let (b_m, _) = crate::spectral::kernel_decompose(xi, bundle, gs);
    let ball = PohozaevBall::around_first_bump(&bundle.cfg, 0.5, n_circle)?;
    let direct = FieldPair::new(&bundle.u, xi).volume_term(&ball, &bundle.pot, 1)?;
    let pot = &bundle.pot;
    let r = bundle.cfg.r;
    let surrogate =
        -b_m * pot.alpha * (pot.alpha + 1.0) * pot.a1 / r.powf(pot.alpha + 2.0) * gs.moments().y1sq_moment;
    Ok(PohozaevBalancing { direct, surrogate, b_m })
}
