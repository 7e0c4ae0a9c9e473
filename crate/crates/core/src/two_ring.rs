//! Reduced energy of a second ring of n bumps in the (y₃, y₄)-plane around a frozen inner ring.
//!
//! F(t) = I(u_k) + nA + n(V(t) - 1)B₁ - B₂ n U(2t sin(π/n)) - B₂ k n U(√(r_k² + t²)).
//!
//! Every inner bump sits at distance exactly √(r_k² + t²) from every outer bump, because the
//! two rings live in orthogonal planes. The inner term does not depend on t.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground_state::GroundState;
use crate::model::{radius_window, Potential, RadiusWindow, RingConfig, TwoRingConfig};
use crate::numerics::golden_max;
use crate::reduced_energy::{balancing_check, find_ring_radius, reduced_energy, BalancingReport, EnergyConstants};

/// Relative widening of the window used as the search bracket.
pub const BRACKET_WIDENING: f64 = 0.25;
/// Relative perturbation of r_k in the decoupling check.
pub const DECOUPLING_PERTURBATION: f64 = 0.01;

const GOLDEN_TOL: f64 = 1e-11;

/// The t-dependent pieces of F, split by origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoRingTerms {
    /// Frozen I(u_k): the inner ring's reduced energy at its own radius.
    pub inner: f64,
    /// nA + n(V(t) - 1)B₁.
    pub outer_self: f64,
    /// -B₂ n U(2t sin(π/n)).
    pub outer_interaction: f64,
    /// -B₂ k n U(√(r_k² + t²)).
    pub cross: f64,
}

impl TwoRingTerms {
    pub fn total(&self) -> f64 {
        self.inner + self.outer_self + self.outer_interaction + self.cross
    }

    /// |cross| / |outer interaction|.
    pub fn cross_ratio(&self) -> f64 {
        self.cross.abs() / self.outer_interaction.abs()
    }
}

fn check_ground_state(gs4: &GroundState, pot: &Potential) -> Result<()> {
    let n = gs4.dim();
    if n < 4 {
        return Err(Error::DimensionError(n));
    }
    let p = gs4.p();
    let critical = (n as f64 + 2.0) / (n as f64 - 2.0);
    if !(p < critical) {
        return Err(Error::InvalidParameter { key: "p", reason: format!("{p} must be below {critical} in dim {n}") });
    }
    let bound = (4.0 / (p - 1.0)).max(2.0);
    if !(pot.alpha > bound) {
        return Err(Error::InvalidParameter { key: "alpha", reason: format!("{} must exceed {bound}", pot.alpha) });
    }
    Ok(())
}

fn outer_spacing(n: usize, t: f64) -> f64 {
    2.0 * t * (PI / n as f64).sin()
}

pub fn two_ring_terms(cfg: &TwoRingConfig, consts: &EnergyConstants, pot: &Potential, gs4: &GroundState) -> Result<TwoRingTerms> {
    check_ground_state(gs4, pot)?;
    let (k, n, r, t) = (cfg.inner.k, cfg.n as f64, cfg.inner.r, cfg.t);
    Ok(TwoRingTerms {
        inner: reduced_energy(k, r, consts, pot, gs4),
        outer_self: n * consts.a + n * pot.excess(t) * consts.b1,
        outer_interaction: -consts.b2_raw * n * gs4.eval_u(outer_spacing(cfg.n, t)),
        cross: -consts.b2_raw * k as f64 * n * gs4.eval_u(r.hypot(t)),
    })
}

pub fn two_ring_energy(cfg: &TwoRingConfig, consts: &EnergyConstants, pot: &Potential, gs4: &GroundState) -> Result<f64> {
    two_ring_terms(cfg, consts, pot, gs4).map(|t| t.total())
}

/// Analytic (F'(t), F''(t)).
pub fn two_ring_derivatives(cfg: &TwoRingConfig, consts: &EnergyConstants, pot: &Potential, gs4: &GroundState) -> (f64, f64) {
    let (n, r, t) = (cfg.n as f64, cfg.inner.r, cfg.t);
    let s = 2.0 * (PI / n).sin();
    let d = t * s;
    let rho = r.hypot(t);
    let kn = cfg.inner.k as f64 * n;
    let f1 = n * pot.dv(t) * consts.b1 - consts.b2_raw * n * gs4.eval_du(d) * s - consts.b2_raw * kn * gs4.eval_du(rho) * t / rho;
    let f2 = n * pot.d2v(t) * consts.b1
        - consts.b2_raw * n * gs4.eval_d2u(d) * s * s
        - consts.b2_raw * kn * (gs4.eval_d2u(rho) * (t / rho).powi(2) + gs4.eval_du(rho) * r * r / rho.powi(3));
    (f1, f2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoRingReport {
    pub k: usize,
    pub n: usize,
    /// Frozen inner radius.
    pub r_k: f64,
    pub t_n: f64,
    /// [t₀ n ln n, t₁ n ln n].
    pub window: RadiusWindow,
    pub bracket: (f64, f64),
    pub f_at_t: f64,
    /// F(t_n) / (k + n).
    pub per_bump_energy: f64,
    pub f_prime: f64,
    pub f_second: f64,
    pub terms: TwoRingTerms,
    pub cross_ratio: f64,
    pub in_window: bool,
    /// Outer-ring force balance at t_n.
    pub balancing: BalancingReport,
}

impl TwoRingReport {
    /// t_n / (n ln n).
    pub fn scaled_radius(&self) -> f64 {
        self.t_n / (self.n as f64 * (self.n as f64).ln())
    }

    /// |F'(t_n)| / (|F''(t_n)| t_n).
    pub fn stationarity(&self) -> f64 {
        self.f_prime.abs() / (self.f_second.abs() * self.t_n)
    }
}

/// Maximizes F over `bracket` with the inner ring frozen at `inner`.
pub fn find_outer_radius_in(
    inner: &RingConfig,
    n: usize,
    consts: &EnergyConstants,
    pot: &Potential,
    gs4: &GroundState,
    beta: f64,
    bracket: (f64, f64),
) -> Result<TwoRingReport> {
    check_ground_state(gs4, pot)?;
    let window = radius_window(n, pot.alpha, beta)?;
    let cfg_at = |t: f64| TwoRingConfig::new(*inner, n, t);
    cfg_at(bracket.0)?;
    let (lo, hi) = bracket;
    // Only the t-dependent terms; the constants would swamp F's variation in round-off.
    let nf = n as f64;
    let kn = inner.k as f64 * nf;
    let objective = |t: f64| {
        nf * pot.excess(t) * consts.b1
            - consts.b2_raw * (nf * gs4.eval_u(outer_spacing(n, t)) + kn * gs4.eval_u(inner.r.hypot(t)))
    };
    let m = golden_max(objective, lo, hi, GOLDEN_TOL, 400);
    if m.at_endpoint {
        return Err(Error::NoInteriorMax { lo, hi, at: m.x });
    }
    let cfg = cfg_at(m.x)?;
    let (f_prime, f_second) = two_ring_derivatives(&cfg, consts, pot, gs4);
    if !(f_second < 0.0) {
        return Err(Error::NoInteriorMax { lo, hi, at: m.x });
    }
    let terms = two_ring_terms(&cfg, consts, pot, gs4)?;
    let total = terms.total();
    Ok(TwoRingReport {
        k: inner.k,
        n,
        r_k: inner.r,
        t_n: m.x,
        window,
        bracket,
        f_at_t: total,
        per_bump_energy: total / (inner.k + n) as f64,
        f_prime,
        f_second,
        terms,
        cross_ratio: terms.cross_ratio(),
        in_window: window.contains(m.x),
        balancing: balancing_check(n, m.x, gs4, pot, consts),
    })
}

/// Inner ring from `find_ring_radius`, then the outer maximizer over the window widened 25%.
pub fn find_outer_radius(
    k: usize,
    n: usize,
    consts: &EnergyConstants,
    pot: &Potential,
    gs4: &GroundState,
    beta: f64,
) -> Result<TwoRingReport> {
    let inner = frozen_inner_ring(k, consts, pot, gs4, beta)?;
    let bracket = radius_window(n, pot.alpha, beta)?.widened(BRACKET_WIDENING);
    find_outer_radius_in(&inner, n, consts, pot, gs4, beta, bracket)
}

pub fn frozen_inner_ring(k: usize, consts: &EnergyConstants, pot: &Potential, gs4: &GroundState, beta: f64) -> Result<RingConfig> {
    check_ground_state(gs4, pot)?;
    let rep = find_ring_radius(k, consts, pot, gs4, &radius_window(k, pot.alpha, beta)?)?;
    RingConfig::new(k, rep.r_k, gs4.dim())
}

/// Largest relative change of t_n when r_k moves by ±1%.
pub fn decoupling_shift(report: &TwoRingReport, consts: &EnergyConstants, pot: &Potential, gs4: &GroundState, beta: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for sign in [-1.0, 1.0] {
        let inner = RingConfig::new(report.k, report.r_k * (1.0 + sign * DECOUPLING_PERTURBATION), gs4.dim())?;
        let moved = find_outer_radius_in(&inner, report.n, consts, pot, gs4, beta, report.bracket)?;
        worst = worst.max((moved.t_n / report.t_n - 1.0).abs());
    }
    Ok(worst)
}
