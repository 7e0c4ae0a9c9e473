use std::f64::consts::PI;

use multibump_core::assembly::RingFields;
use multibump_core::discretization::*;
use multibump_core::fast_solver::PolarPreconditioner;
use multibump_core::ground_state::{solve_ground_state, GroundState};
use multibump_core::model::{Potential, RingConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn planar() -> GroundState {
    solve_ground_state(2, 3.0, 30.0, 1e-12).unwrap()
}

fn random_field(grid: SectorGrid, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Field::new(grid, values)
}

fn all_symmetries(k: usize, h: f64, m: usize, q: usize) -> Vec<SectorGrid> {
    [Symmetry::Even, Symmetry::Odd, Symmetry::Full].into_iter().map(|s| SectorGrid::new(k, h, m, q, s)).collect()
}

// Manufactured u = ρ^k cos(kθ) e^{-ρ²/8} + e^{-ρ²/4} with its exact -Δu.
fn manufactured(k: usize) -> (impl Fn(f64, f64) -> f64, impl Fn(f64, f64) -> f64) {
    let kf = k as f64;
    let u = move |x: f64, y: f64| {
        let (r, t) = (x.hypot(y), y.atan2(x));
        r.powf(kf) * (kf * t).cos() * (-r * r / 8.0).exp() + (-r * r / 4.0).exp()
    };
    let minus_lap = move |x: f64, y: f64| {
        let (r, t) = (x.hypot(y), y.atan2(x));
        let harm = r.powf(kf) * (kf * t).cos() * (-r * r / 8.0).exp();
        let lap = harm * (-0.5 + r * r / 16.0 - kf / 2.0) + (-1.0 + r * r / 4.0) * (-r * r / 4.0).exp();
        -lap
    };
    (u, minus_lap)
}

fn truncation_error(grid: SectorGrid) -> f64 {
    let (u, f) = manufactured(grid.k);
    let lap = Field::from_fn(grid, &u).neg_laplacian();
    let exact = Field::from_fn(grid, &f);
    grid.polar_nodes()
        .iter()
        .enumerate()
        .filter(|(_, (r, _))| *r < grid.r_out() - 2.0)
        .map(|(i, _)| (lap.values[i] - exact.values[i]).abs())
        .fold(0.0, f64::max)
}

#[test]
fn laplacian_of_constant_vanishes_away_from_boundary() {
    for g in all_symmetries(4, 0.1, 60, 12) {
        if g.symmetry == Symmetry::Odd {
            continue;
        }
        let lap = Field::from_fn(g, |_, _| 3.0).neg_laplacian();
        for (idx, (r, _)) in g.polar_nodes().into_iter().enumerate() {
            if r < g.r_out() - 1.5 * g.h {
                assert!(lap.values[idx].abs() < 1e-9, "{:?} at rho {r}: {}", g.symmetry, lap.values[idx]);
            }
        }
    }
}

#[test]
fn manufactured_laplacian_is_second_order() {
    for sym in [Symmetry::Even, Symmetry::Full] {
        let coarse = SectorGrid::new(4, 0.1, 160, 16, sym);
        let e1 = truncation_error(coarse);
        let e2 = truncation_error(coarse.refined());
        let order = (e1 / e2).log2();
        assert!(order > 1.8, "{sym:?}: errors {e1} {e2}");
    }
}

#[test]
fn stiffness_is_symmetric_and_nonnegative() {
    for g in all_symmetries(3, 0.2, 30, 7) {
        let (a, b) = (random_field(g, 1), random_field(g, 2));
        let (mut sa, mut sb) = (vec![0.0; g.len()], vec![0.0; g.len()]);
        g.stiffness_apply(&a.values, &mut sa);
        g.stiffness_apply(&b.values, &mut sb);
        let ab: f64 = sa.iter().zip(&b.values).map(|(x, y)| x * y).sum();
        let ba: f64 = sb.iter().zip(&a.values).map(|(x, y)| x * y).sum();
        assert!((ab - ba).abs() < 1e-10 * ab.abs().max(1.0), "{:?}", g.symmetry);
        let aa: f64 = sa.iter().zip(&a.values).map(|(x, y)| x * y).sum();
        assert!(aa > 0.0);
    }
}

#[test]
fn fast_solver_inverts_shifted_operator() {
    let pot = Potential::new(1.0, 0.0, 3.0, 3.0).unwrap();
    for g in all_symmetries(4, 0.1, 50, 10) {
        let shift = 0.3;
        let pc = PolarPreconditioner::new(&g, |r| pot.v(r), shift);
        let x = random_field(g, 7);
        let mut b = vec![0.0; g.len()];
        g.stiffness_apply(&x.values, &mut b);
        let vols = g.volumes();
        let nodes = g.polar_nodes();
        for i in 0..g.len() {
            b[i] += vols[i] * (pot.v(nodes[i].0) + shift) * x.values[i];
        }
        let mut z = vec![0.0; g.len()];
        pc.apply(&b, &mut z);
        let err = z.iter().zip(&x.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{:?}: {err}", g.symmetry);
    }
}

#[test]
fn lift_and_restrict_round_trip() {
    let g = SectorGrid::new(3, 0.1, 40, 8, Symmetry::Even);
    let f = random_field(g, 3);
    let back = f.to_symmetry(Symmetry::Full).to_symmetry(Symmetry::Even);
    assert_eq!(back.values, f.values);
    let go = g.with_symmetry(Symmetry::Odd);
    let o = random_field(go, 4);
    let back = o.to_symmetry(Symmetry::Full).to_symmetry(Symmetry::Odd);
    assert_eq!(back.values, o.values);
    // Integrals over the disc agree between a sector copy and the full grid.
    let full = f.to_symmetry(Symmetry::Full);
    let ratio = full.integrate() / (f.integrate() * g.multiplicity());
    assert!((ratio - 1.0).abs() < 1e-12);
}

#[test]
fn edge_reflection_parity() {
    let g = SectorGrid::new(4, 0.1, 20, 6, Symmetry::Even);
    let f = random_field(g, 5);
    let o = random_field(g.with_symmetry(Symmetry::Odd), 6);
    for i in 1..20isize {
        for j in 1..6isize {
            assert_eq!(f.node(i, -j), f.node(i, j));
            assert_eq!(f.node(i, 12 - j), f.node(i, j));
            assert_eq!(o.node(i, -j), -o.node(i, j));
            assert_eq!(o.node(i, 12 - j), -o.node(i, j));
        }
        assert_eq!(o.node(i, 0), 0.0);
        assert_eq!(o.node(i, 6), 0.0);
    }
}

#[test]
fn gaussian_quadrature_is_at_least_second_order() {
    let cfg = RingConfig::new(4, 5.0, 2).unwrap();
    let centers: Vec<[f64; 2]> = (0..4).map(|j| cfg.center(j)).collect();
    let gauss = move |x: f64, y: f64| centers.iter().map(|c| (-(x - c[0]).powi(2) - (y - c[1]).powi(2)).exp()).sum::<f64>();
    let exact = 4.0 * PI;
    let coarse = build_grid(&cfg, 0.1, 1.0, 12.0).unwrap();
    let err = |g: SectorGrid| (Field::from_fn(g, &gauss).integrate() * g.multiplicity() - exact).abs();
    let (e1, e2) = (err(coarse), err(coarse.refined()));
    // Midpoint-type cells are O(h²); for smooth decaying integrands the sum is far better.
    assert!(e1 < 0.01 * 0.01 * exact, "{e1}");
    assert!(e2 < 0.25 * e1 + 1e-12, "{e1} {e2}");
}

#[test]
fn interpolation_is_fourth_order_accurate_for_smooth_fields() {
    let (u, _) = manufactured(4);
    let worst = |g: SectorGrid| {
        let f = Field::from_fn(g, &u);
        (0..200).fold(0.0f64, |m, s| {
            let r = 0.03 + 0.051 * s as f64;
            let t = 0.37 * s as f64;
            let (x, y) = (r * t.cos(), r * t.sin());
            m.max((f.eval(x, y) - u(x, y)).abs())
        })
    };
    let g = SectorGrid::new(4, 0.1, 120, 20, Symmetry::Even);
    let (e1, e2) = (worst(g), worst(g.refined()));
    assert!(e1 < 1e-3, "{e1}");
    assert!(e1 / e2 > 12.0, "{e1} {e2}");
}

#[test]
fn bump_sum_values_and_kernel_direction() {
    let gs = planar();
    let cfg = RingConfig::new(8, 10.0, 2).unwrap();
    let g = build_grid(&cfg, 0.1, 1.0, 12.0).unwrap();
    let fields = RingFields::assemble(&g, &cfg, &gs);
    // The bump centre x_1 = (r, 0) is a grid node.
    let i = (10.0 / g.h).round() as usize;
    let at_center = fields.w.values[g.idx(i, 0)];
    let expected: f64 = (0..8).map(|j| {
        let c = cfg.center(j);
        gs.eval_u((c[0] - 10.0).hypot(c[1]))
    }).sum();
    assert!((at_center - expected).abs() < 1e-12);
    // Z is the r-derivative of W.
    let dr = 1e-4;
    let wp = RingFields::assemble(&g, &cfg.with_radius(10.0 + dr), &gs).w;
    let wm = RingFields::assemble(&g, &cfg.with_radius(10.0 - dr), &gs).w;
    let err = (0..g.len()).map(|n| ((wp.values[n] - wm.values[n]) / (2.0 * dr) - fields.z.values[n]).abs()).fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
}

#[test]
fn two_bump_midpoint() {
    let gs = planar();
    let cfg = RingConfig::new(2, 6.0, 2).unwrap();
    let g = build_grid(&cfg, 0.1, 1.0, 12.0).unwrap();
    let w = RingFields::assemble(&g, &cfg, &gs).w;
    // θ = π/2 edge node at radius 0 is the midpoint: the origin.
    assert!((w.values[0] - 2.0 * gs.eval_u(6.0)).abs() < 1e-12);
}

#[test]
fn single_bump_in_flat_potential_has_zero_error_term() {
    let gs = planar();
    let cfg = RingConfig::new(1, 8.0, 2).unwrap();
    let g = SectorGrid::new(1, 0.1, 200, 250, Symmetry::Even);
    let l = RingFields::assemble(&g, &cfg, &gs).rhs_l(&Potential::constant(), 3.0);
    assert!(l.max_abs() < 1e-12);
}

#[test]
fn star_norm_of_weight_is_one() {
    let cfg = RingConfig::new(6, 9.0, 2).unwrap();
    let g = build_grid(&cfg, 0.1, 1.0, 12.0).unwrap();
    let params = StarNormParams::for_ring(&cfg, 0.1, 3.0).unwrap();
    let f = Field::new(g, params.weights(&g));
    assert!((star_norm(&f, &params) - 1.0).abs() < 1e-14);
    assert!(StarNormParams::for_ring(&cfg, 1.0, 3.0).is_err());
    assert!(StarNormParams::for_ring(&cfg, 0.6, 1.5).is_err());
}

#[test]
fn grid_validation() {
    let cfg = RingConfig::new(8, 13.0, 2).unwrap();
    assert!(build_grid(&cfg, 0.2, 1.0, 12.0).is_err());
    assert!(build_grid(&cfg, 0.05, 1.0, 6.0).is_err());
    let g = build_grid(&cfg, 0.05, 1.0, 12.0).unwrap();
    assert!(g.r_out() >= 25.0);
    assert!(g.h_theta * cfg.r <= MAX_H);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_norm_is_a_norm(seed in 0u64..1000, c in -5.0f64..5.0) {
        let cfg = RingConfig::new(3, 4.0, 2).unwrap();
        let g = SectorGrid::new(3, 0.2, 60, 8, Symmetry::Even);
        let params = StarNormParams::for_ring(&cfg, 0.3, 3.0).unwrap();
        let w = params.weights(&g);
        let (a, b) = (random_field(g, seed), random_field(g, seed + 1000));
        let na = star_norm_weighted(&a.values, &w);
        let nb = star_norm_weighted(&b.values, &w);
        let sum: Vec<f64> = a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect();
        prop_assert!(star_norm_weighted(&sum, &w) <= na + nb + 1e-12);
        let scaled: Vec<f64> = a.values.iter().map(|x| c * x).collect();
        prop_assert!((star_norm_weighted(&scaled, &w) - c.abs() * na).abs() <= 1e-12 * na.max(1.0));
    }

    #[test]
    fn rotation_by_wedge_preserves_full_grid_integrals(seed in 0u64..1000) {
        let g = SectorGrid::new(2, 0.2, 20, 5, Symmetry::Full);
        let f = random_field(g, seed);
        let n = g.full_intervals();
        let mut rotated = f.clone();
        for i in 1..g.m {
            for j in 0..n {
                rotated.values[g.idx(i, (j + 3) % n)] = f.values[g.idx(i, j)];
            }
        }
        prop_assert!((rotated.integrate() - f.integrate()).abs() < 1e-10);
        prop_assert!((rotated.neg_laplacian().inner(&rotated) - f.neg_laplacian().inner(&f)).abs() < 1e-8);
    }
}
