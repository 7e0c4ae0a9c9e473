//! Energy constants of a single bump, the reduced ring energy and its maximizer.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground_state::GroundState;
use crate::model::{Potential, RadiusWindow};
use crate::numerics::{golden_max, simpson_weights, sphere_area};

/// Quadrature step for the axial two-dimensional integrals.
const AXIAL_STEP: f64 = 0.05;
/// Consecutive plateau ratios must agree to this relative tolerance.
const PLATEAU_TOL: f64 = 0.005;

/// Constants of the single-bump energy expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyConstants {
    /// I(U) for V ≡ 1.
    pub a: f64,
    /// Coefficient of Σ(V(x_j) - 1): ∫U²/2.
    pub b1: f64,
    /// Coefficient of the ordered-pair sum Σ_{i≠j} U(|x_i - x_j|): b2_raw / 2.
    pub b2: f64,
    /// lim ∫U^p U(· - d e1) / U(d).
    pub b2_raw: f64,
    /// Spacing at which the ratio was accepted.
    pub plateau_d: f64,
}

/// Which pair interactions enter the reduced energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PairSum {
    #[default]
    NearestNeighbor,
    AllPairs,
}

/// ∫_{R^N} U(y)^p U(y - d e1) dy, reduced to (y1, |y⊥|).
pub fn interaction_integral(gs: &GroundState, d: f64) -> f64 {
    let p = gs.p();
    let half = gs.r_max();
    let n1 = (2.0 * half / AXIAL_STEP).round() as usize;
    let h1 = 2.0 * half / n1 as f64;
    let w1 = simpson_weights(n1, h1);
    if gs.dim() == 1 {
        return (0..=n1)
            .map(|i| {
                let y = -half + i as f64 * h1;
                w1[i] * gs.eval_u(y.abs()).powf(p) * gs.eval_u((y - d).abs())
            })
            .sum();
    }
    let n2 = (half / AXIAL_STEP).round() as usize;
    let h2 = half / n2 as f64;
    let w2 = simpson_weights(n2, h2);
    let omega = sphere_area(gs.dim() - 1);
    let expo = gs.dim() as i32 - 2;
    let mut total = 0.0;
    for i in 0..=n1 {
        let y1 = -half + i as f64 * h1;
        let mut row = 0.0;
        for j in 0..=n2 {
            let s = j as f64 * h2;
            let a = (y1 * y1 + s * s).sqrt();
            let up = gs.eval_u(a).powf(p);
            if up == 0.0 {
                continue;
            }
            let b = ((y1 - d) * (y1 - d) + s * s).sqrt();
            row += w2[j] * s.powi(expo) * up * gs.eval_u(b);
        }
        total += w1[i] * row;
    }
    omega * total
}

/// A, B1 and the plateau of interaction_integral(d)/U(d) sampled at d = 4, 5, ....
pub fn energy_constants(gs: &GroundState) -> Result<EnergyConstants> {
    let m = gs.moments();
    let a = 0.5 * (m.grad2 + m.mass2) - m.mass_p1 / (gs.p() + 1.0);
    let b1 = 0.5 * m.mass2;
    let mut d = 4.0;
    let mut prev = interaction_integral(gs, d) / gs.eval_u(d);
    loop {
        d += 1.0;
        if d > gs.r_max() {
            return Err(Error::NoPlateau(d));
        }
        let cur = interaction_integral(gs, d) / gs.eval_u(d);
        if (cur - prev).abs() < PLATEAU_TOL * cur.abs() {
            return Ok(EnergyConstants { a, b1, b2: 0.5 * cur, b2_raw: cur, plateau_d: d });
        }
        prev = cur;
    }
}

/// Pair-interaction sum per bump-count convention: k U(d) (nearest) or (k/2) Σ_m U(d_m).
fn pair_terms(gs: &GroundState, k: usize, r: f64, pairs: PairSum) -> (f64, f64, f64) {
    let kf = k as f64;
    let mut sum = (0.0, 0.0, 0.0);
    let mut add = |m: usize, weight: f64| {
        let s = 2.0 * (PI * m as f64 / kf).sin();
        let d = r * s;
        sum.0 += weight * gs.eval_u(d);
        sum.1 += weight * gs.eval_du(d) * s;
        sum.2 += weight * gs.eval_d2u(d) * s * s;
    };
    match pairs {
        PairSum::NearestNeighbor => add(1, kf),
        PairSum::AllPairs => {
            for m in 1..k {
                add(m, 0.5 * kf);
            }
        }
    }
    sum
}

/// F(r) = kA + k(V(r) - 1)B1 - B2_raw k U(2r sin(π/k)).
pub fn reduced_energy(k: usize, r: f64, consts: &EnergyConstants, pot: &Potential, gs: &GroundState) -> f64 {
    reduced_energy_with(k, r, consts, pot, gs, PairSum::NearestNeighbor)
}

pub fn reduced_energy_with(
    k: usize,
    r: f64,
    consts: &EnergyConstants,
    pot: &Potential,
    gs: &GroundState,
    pairs: PairSum,
) -> f64 {
    let kf = k as f64;
    kf * consts.a + kf * pot.excess(r) * consts.b1 - consts.b2_raw * pair_terms(gs, k, r, pairs).0
}

/// Analytic (F'(r), F''(r)).
pub fn reduced_energy_derivatives(
    k: usize,
    r: f64,
    consts: &EnergyConstants,
    pot: &Potential,
    gs: &GroundState,
    pairs: PairSum,
) -> (f64, f64) {
    let kf = k as f64;
    let (_, d1, d2) = pair_terms(gs, k, r, pairs);
    (kf * pot.dv(r) * consts.b1 - consts.b2_raw * d1, kf * pot.d2v(r) * consts.b1 - consts.b2_raw * d2)
}

/// The two sides of the force balance at a bump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalancingReport {
    /// -½∫∂_{y1}V U_{x1}² by quadrature.
    pub lhs_direct: f64,
    /// α a1 ∫U² / (2 r^{α+1}).
    pub lhs_coeff_alpha: f64,
    /// (α+1) a1 ∫U² / (2 r^{α+1}).
    pub lhs_coeff_alpha_plus_one: f64,
    /// B2_raw U(d) 2 sin(π/k).
    pub rhs: f64,
    /// lhs_direct / rhs.
    pub ratio: f64,
    /// True when the α coefficient is closer to the direct integral than α+1.
    pub alpha_variant_matches: bool,
}

/// -½∫∂_{y1}V(y) U(|y - r e1|)² dy.
pub fn potential_force(r: f64, gs: &GroundState, pot: &Potential) -> f64 {
    let half = gs.r_max().min(20.0);
    let step = 0.02;
    let n1 = (2.0 * half / step).round() as usize;
    let h1 = 2.0 * half / n1 as f64;
    let w1 = simpson_weights(n1, h1);
    if gs.dim() == 1 {
        let s: f64 = (0..=n1)
            .map(|i| {
                let z = -half + i as f64 * h1;
                let u = gs.eval_u(z.abs());
                w1[i] * pot.grad_component(&[r + z], 0) * u * u
            })
            .sum();
        return -0.5 * s;
    }
    let n2 = (half / step).round() as usize;
    let h2 = half / n2 as f64;
    let w2 = simpson_weights(n2, h2);
    let omega = sphere_area(gs.dim() - 1);
    let expo = gs.dim() as i32 - 2;
    let mut total = 0.0;
    for i in 0..=n1 {
        let z1 = -half + i as f64 * h1;
        let mut row = 0.0;
        for j in 0..=n2 {
            let s = j as f64 * h2;
            let u = gs.eval_u((z1 * z1 + s * s).sqrt());
            if u == 0.0 {
                continue;
            }
            row += w2[j] * s.powi(expo) * pot.grad_component(&[r + z1, s], 0) * u * u;
        }
        total += w1[i] * row;
    }
    -0.5 * omega * total
}

pub fn balancing_check(k: usize, r: f64, gs: &GroundState, pot: &Potential, consts: &EnergyConstants) -> BalancingReport {
    let lhs_direct = potential_force(r, gs, pot);
    let base = pot.a1 * gs.mass2() / (2.0 * r.powf(pot.alpha + 1.0));
    let lhs_coeff_alpha = pot.alpha * base;
    let lhs_coeff_alpha_plus_one = (pot.alpha + 1.0) * base;
    let s = 2.0 * (PI / k as f64).sin();
    let rhs = consts.b2_raw * gs.eval_u(r * s) * s;
    BalancingReport {
        lhs_direct,
        lhs_coeff_alpha,
        lhs_coeff_alpha_plus_one,
        rhs,
        ratio: lhs_direct / rhs,
        alpha_variant_matches: (lhs_direct - lhs_coeff_alpha).abs() <= (lhs_direct - lhs_coeff_alpha_plus_one).abs(),
    }
}

/// Maximizer of the reduced energy with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub k: usize,
    pub r_k: f64,
    pub window: RadiusWindow,
    pub bracket: (f64, f64),
    pub f_max: f64,
    pub f_prime: f64,
    pub f_second: f64,
    /// r_k inside the asymptotic window.
    pub in_window: bool,
    pub balancing: BalancingReport,
}

impl EnergyReport {
    /// r_k / (k ln k).
    pub fn scaled_radius(&self) -> f64 {
        self.r_k / (self.k as f64 * (self.k as f64).ln())
    }
}

/// Golden-section maximization of the reduced energy over [lo/2, 2 hi].
pub fn find_ring_radius(
    k: usize,
    consts: &EnergyConstants,
    pot: &Potential,
    gs: &GroundState,
    window: &RadiusWindow,
) -> Result<EnergyReport> {
    find_ring_radius_with(k, consts, pot, gs, window, PairSum::NearestNeighbor)
}

pub fn find_ring_radius_with(
    k: usize,
    consts: &EnergyConstants,
    pot: &Potential,
    gs: &GroundState,
    window: &RadiusWindow,
    pairs: PairSum,
) -> Result<EnergyReport> {
    let (lo, hi) = (0.5 * window.lo, 2.0 * window.hi);
    let kf = k as f64;
    // kA is constant; dropping it keeps the objective's round-off at the scale of its variation.
    let objective = |r: f64| kf * pot.excess(r) * consts.b1 - consts.b2_raw * pair_terms(gs, k, r, pairs).0;
    let m = golden_max(objective, lo, hi, 1e-10, 400);
    if m.at_endpoint {
        return Err(Error::NoInteriorMax { lo, hi, at: m.x });
    }
    let (f_prime, f_second) = reduced_energy_derivatives(k, m.x, consts, pot, gs, pairs);
    if !(f_second < 0.0) {
        return Err(Error::NoInteriorMax { lo, hi, at: m.x });
    }
    Ok(EnergyReport {
        k,
        r_k: m.x,
        window: *window,
        bracket: (lo, hi),
        f_max: kf * consts.a + m.f,
        f_prime,
        f_second,
        in_window: window.contains(m.x),
        balancing: balancing_check(k, m.x, gs, pot, consts),
    })
}
