use std::f64::consts::PI;

use multibump_core::error::Error;
use multibump_core::ground_state::{solve_ground_state, GroundState};
use multibump_core::model::{default_beta, radius_window, Potential, RingConfig};
use multibump_core::reduced_energy::*;

fn planar() -> GroundState {
    solve_ground_state(2, 3.0, 30.0, 1e-12).unwrap()
}

fn defaults() -> Potential {
    Potential::new(1.0, 0.0, 3.0, 3.0).unwrap()
}

#[test]
fn one_dimensional_constants_closed_form() {
    let gs = solve_ground_state(1, 3.0, 30.0, 1e-12).unwrap();
    let c = energy_constants(&gs).unwrap();
    assert!((c.a - 4.0 / 3.0).abs() < 1e-8);
    let derrick = (0.5 - 1.0 / 4.0) * gs.mass_p1();
    assert!((c.a - derrick).abs() < 1e-6 * gs.mass_p1());
    assert!((c.b1 - 2.0).abs() < 1e-8);
    // ∫(√2 sech y)³ e^y dy = 2√2 ∫sech² = 4√2, evaluated independently by trapezoid.
    let n = 200_000;
    let h = 60.0 / n as f64;
    let oracle: f64 = (0..=n)
        .map(|i| {
            let y = -30.0 + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            w * h * (2f64.sqrt() / y.cosh()).powi(3) * y.exp()
        })
        .sum();
    assert!((oracle - 4.0 * 2f64.sqrt()).abs() < 1e-8);
    assert!((c.b2_raw - oracle).abs() < 0.005 * oracle, "b2_raw {}", c.b2_raw);
}

#[test]
fn interaction_basic_properties() {
    let gs = planar();
    let i0 = interaction_integral(&gs, 0.0);
    assert!((i0 - gs.mass_p1()).abs() < 1e-6 * gs.mass_p1());
    for d in [0.7, 3.0] {
        assert!((interaction_integral(&gs, d) - interaction_integral(&gs, -d)).abs() < 1e-12);
    }
    let q10 = interaction_integral(&gs, 10.0) / gs.eval_u(10.0);
    let q12 = interaction_integral(&gs, 12.0) / gs.eval_u(12.0);
    assert!((q10 / q12 - 1.0).abs() < 0.02);
    // Frozen from an independent scipy quadrature of the limit ratio.
    let c = energy_constants(&gs).unwrap();
    assert!((c.b2_raw - 17.637).abs() < 0.005 * 17.637);
    assert!(c.plateau_d <= 20.0);
    assert!((c.b1 - gs.mass2() / 2.0).abs() < 1e-12);
    assert!(c.a > 0.0 && c.b1 > 0.0 && c.b2 > 0.0);
}

#[test]
fn ring_radius_matches_dense_scan() {
    let gs = planar();
    let c = energy_constants(&gs).unwrap();
    let pot = defaults();
    // Frozen maximizers from an independent Python prototype of the same energy.
    for (k, frozen) in [(8usize, 13.383), (12, 23.089)] {
        let w = radius_window(k, 3.0, default_beta(3.0)).unwrap();
        let rep = find_ring_radius(k, &c, &pot, &gs, &w).unwrap();
        let mut best = (0.0, f64::NEG_INFINITY);
        let mut r = rep.bracket.0;
        while r <= rep.bracket.1 {
            let f = reduced_energy(k, r, &c, &pot, &gs);
            if f > best.1 {
                best = (r, f);
            }
            r += 1e-3;
        }
        assert!((rep.r_k - best.0).abs() < 2e-3, "k {k}: {} vs scan {}", rep.r_k, best.0);
        assert!((rep.r_k - frozen).abs() < 1e-3 * frozen);
        assert!(rep.f_prime.abs() <= 1e-6 * rep.f_second.abs() * rep.r_k);
        assert!(rep.f_second < 0.0);
        assert!((rep.f_max - reduced_energy(k, rep.r_k, &c, &pot, &gs)).abs() < 1e-9);
    }
}

#[test]
fn analytic_derivatives_match_differences() {
    let gs = planar();
    let c = energy_constants(&gs).unwrap();
    let pot = Potential::new(1.0, 0.3, 3.0, 3.0).unwrap();
    let (k, r) = (12, 21.0);
    let h = 1e-3;
    let f = |r| reduced_energy(k, r, &c, &pot, &gs);
    let (d1, d2) = reduced_energy_derivatives(k, r, &c, &pot, &gs, PairSum::NearestNeighbor);
    assert!(((f(r + h) - f(r - h)) / (2.0 * h) - d1).abs() < 1e-6 * d1.abs().max(1e-6));
    let fd2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
    assert!((fd2 - d2).abs() < 1e-3 * d2.abs());
}

#[test]
fn stronger_potential_pulls_ring_in() {
    let gs = planar();
    let c = energy_constants(&gs).unwrap();
    for k in [8usize, 16, 32] {
        let w = radius_window(k, 3.0, default_beta(3.0)).unwrap();
        let r1 = find_ring_radius(k, &c, &Potential::new(1.0, 0.0, 3.0, 3.0).unwrap(), &gs, &w).unwrap().r_k;
        let r2 = find_ring_radius(k, &c, &Potential::new(2.0, 0.0, 3.0, 3.0).unwrap(), &gs, &w).unwrap().r_k;
        // Balance α a1 B1 / r^{α+1} = B2 |U'(d)| s: a larger a1 needs a larger |U'(d)|, i.e. smaller r.
        assert!(r2 < r1);
    }
}

#[test]
fn degenerate_energies_have_no_interior_max() {
    let gs = planar();
    let c = energy_constants(&gs).unwrap();
    let w = radius_window(12, 3.0, default_beta(3.0)).unwrap();
    let flat = Potential::raw(0.0, 0.0, 3.0);
    assert!(matches!(find_ring_radius(12, &c, &flat, &gs, &w), Err(Error::NoInteriorMax { .. })));
    let no_pull = EnergyConstants { b2_raw: 0.0, b2: 0.0, ..c };
    assert!(matches!(find_ring_radius(12, &no_pull, &defaults(), &gs, &w), Err(Error::NoInteriorMax { .. })));
    let (a, b) = (reduced_energy(12, 20.0, &c, &flat, &gs), reduced_energy(12, 21.0, &c, &flat, &gs));
    assert!(b > a);
}

#[test]
fn all_pairs_differs_by_next_nearest_order() {
    let gs = planar();
    let c = energy_constants(&gs).unwrap();
    let pot = defaults();
    let (k, r) = (12, 23.0);
    let near = reduced_energy(k, r, &c, &pot, &gs);
    let all = reduced_energy_with(k, r, &c, &pot, &gs, PairSum::AllPairs);
    let d2 = 2.0 * r * (2.0 * PI / k as f64).sin();
    let expected = c.b2_raw * k as f64 * gs.eval_u(d2);
    assert!(all < near);
    assert!(((near - all) / expected - 1.0).abs() < 0.05);
}

#[test]
fn balancing_relation_at_maximizers() {
    let gs = planar();
    let c = energy_constants(&gs).unwrap();
    let pot = defaults();
    let mut rows = Vec::new();
    for k in [16usize, 24, 32] {
        let w = radius_window(k, 3.0, default_beta(3.0)).unwrap();
        let rep = find_ring_radius(k, &c, &pot, &gs, &w).unwrap();
        let b = rep.balancing;
        assert!((0.8..=1.25).contains(&b.ratio), "k {k}: ratio {}", b.ratio);
        assert!((b.lhs_direct / b.lhs_coeff_alpha - 1.0).abs() < 0.03);
        assert!(b.alpha_variant_matches);
        let d = 2.0 * rep.r_k * (PI / k as f64).sin();
        rows.push(((rep.r_k).ln(), (gs.eval_u(d) / k as f64).ln()));
    }
    // U(d_k)/k against r_k^{-(α+1)}: log-log slope 1 ± 0.1.
    let slope = (rows[2].1 - rows[0].1) / (-(4.0) * (rows[2].0 - rows[0].0));
    assert!((slope - 1.0).abs() <= 0.1, "slope {slope}");
}

#[test]
fn direct_force_is_linear_in_a1() {
    let gs = planar();
    let c = energy_constants(&gs).unwrap();
    let b1 = balancing_check(16, 30.0, &gs, &Potential::raw(1.0, 0.0, 3.0), &c).lhs_direct;
    let b3 = balancing_check(16, 30.0, &gs, &Potential::raw(3.0, 0.0, 3.0), &c).lhs_direct;
    assert!((b3 - 3.0 * b1).abs() <= 1e-12 * b3.abs());
    let cfg = RingConfig::new(16, 30.0, 2).unwrap();
    assert!(cfg.r > 0.0);
}
