use std::sync::OnceLock;

use multibump_core::error::Error;
use multibump_core::ground_state::{solve_ground_state, GroundState};
use multibump_core::model::{default_beta, Potential, RingConfig, TwoRingConfig};
use multibump_core::reduced_energy::{energy_constants, EnergyConstants};
use multibump_core::two_ring::*;
use proptest::prelude::*;

fn gs4() -> &'static (GroundState, EnergyConstants) {
    static GS: OnceLock<(GroundState, EnergyConstants)> = OnceLock::new();
    GS.get_or_init(|| {
        let gs = solve_ground_state(4, 2.0, 30.0, 1e-12).unwrap();
        let c = energy_constants(&gs).unwrap();
        (gs, c)
    })
}

fn pot() -> Potential {
    Potential::new(1.0, 0.0, 5.0, 2.0).unwrap()
}

const BETA: f64 = 0.15 * 5.0 / (2.0 * std::f64::consts::PI);

#[test]
fn planar_ground_state_rejected() {
    let gs2 = solve_ground_state(2, 3.0, 30.0, 1e-10).unwrap();
    let c = energy_constants(&gs2).unwrap();
    assert!(matches!(find_outer_radius(8, 32, &c, &Potential::raw(1.0, 0.0, 5.0), &gs2, BETA), Err(Error::DimensionError(2))));
    let (gs, c) = gs4();
    // α must exceed 4/(p - 1) = 4.
    assert!(find_outer_radius(8, 32, c, &Potential::raw(1.0, 0.0, 3.5), gs, BETA).is_err());
    assert!(TwoRingConfig::new(RingConfig::new(8, 20.0, 3).unwrap(), 32, 100.0).is_err());
}

#[test]
fn terms_follow_the_expansion() {
    let (gs, c) = gs4();
    let inner = RingConfig::new(8, 21.0, 4).unwrap();
    let cfg = TwoRingConfig::new(inner, 48, 200.0).unwrap();
    let t = two_ring_terms(&cfg, c, &pot(), gs).unwrap();
    let d = 2.0 * 200.0 * (std::f64::consts::PI / 48.0).sin();
    assert_eq!(t.outer_self, 48.0 * c.a + 48.0 * c.b1 / 200f64.powi(5));
    assert_eq!(t.outer_interaction, -c.b2_raw * 48.0 * gs.eval_u(d));
    assert_eq!(t.cross, -c.b2_raw * 8.0 * 48.0 * gs.eval_u(21f64.hypot(200.0)));
    assert_eq!(two_ring_energy(&cfg, c, &pot(), gs).unwrap(), t.total());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn doubling_n_changes_only_the_spacing_terms(t in 60.0f64..400.0, half in 8usize..40) {
        let (gs, c) = gs4();
        let n = 2 * half;
        let inner = RingConfig::new(8, 21.0, 4).unwrap();
        let one = two_ring_terms(&TwoRingConfig::new(inner, n, t).unwrap(), c, &pot(), gs).unwrap();
        let two = two_ring_terms(&TwoRingConfig::new(inner, 2 * n, t).unwrap(), c, &pot(), gs).unwrap();
        prop_assert!((two.outer_self - 2.0 * one.outer_self).abs() <= 1e-12 * two.outer_self.abs());
        prop_assert!((two.cross - 2.0 * one.cross).abs() <= 1e-12 * two.cross.abs().max(1e-300));
        let s = |m: usize| 2.0 * t * (std::f64::consts::PI / m as f64).sin();
        let spacing = -c.b2_raw * 2.0 * n as f64 * (gs.eval_u(s(2 * n)) - gs.eval_u(s(n)));
        let diff = two.outer_interaction - 2.0 * one.outer_interaction;
        prop_assert!((diff - spacing).abs() <= 1e-12 * spacing.abs(), "{} {}", diff, spacing);
    }

    #[test]
    fn analytic_derivatives_match_differences(t in 80.0f64..300.0) {
        let (gs, c) = gs4();
        let inner = RingConfig::new(8, 21.0, 4).unwrap();
        let f = |t: f64| {
            let tt = two_ring_terms(&TwoRingConfig::new(inner, 48, t).unwrap(), c, &pot(), gs).unwrap();
            48.0 * pot().excess(t) * c.b1 + tt.outer_interaction + tt.cross
        };
        let (f1, f2) = two_ring_derivatives(&TwoRingConfig::new(inner, 48, t).unwrap(), c, &pot(), gs);
        let e = 1e-2;
        let fd1 = (f(t + e) - f(t - e)) / (2.0 * e);
        let fd2 = (f(t + e) - 2.0 * f(t) + f(t - e)) / (e * e);
        prop_assert!((f1 - fd1).abs() <= 1e-5 * (f1.abs() + fd1.abs()) + 1e-18, "{} {}", f1, fd1);
        prop_assert!((f2 - fd2).abs() <= 1e-3 * (f2.abs() + fd2.abs()) + 1e-16, "{} {}", f2, fd2);
    }
}

#[test]
fn no_potential_no_outer_ring() {
    let (gs, c) = gs4();
    let inner = RingConfig::new(8, 21.0, 4).unwrap();
    let flat = Potential::raw(0.0, 0.0, 5.0);
    let r = find_outer_radius_in(&inner, 48, c, &flat, gs, BETA, (50.0, 300.0));
    assert!(matches!(r, Err(Error::NoInteriorMax { .. })), "{r:?}");
    assert!(find_outer_radius(8, 48, c, &flat, gs, BETA).is_err());
}

/// Golden-section-independent oracle: a dense scan of F followed by bisection on F'.
fn scan_maximizer(inner: &RingConfig, n: usize, lo: f64, hi: f64) -> f64 {
    let (gs, c) = gs4();
    let fp = |t: f64| two_ring_derivatives(&TwoRingConfig::new(*inner, n, t).unwrap(), c, &pot(), gs).0;
    let steps = 4000;
    let grid: Vec<f64> = (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect();
    let i = grid.windows(2).position(|w| fp(w[0]) > 0.0 && fp(w[1]) <= 0.0).expect("sign change");
    let (mut a, mut b) = (grid[i], grid[i + 1]);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if fp(m) > 0.0 { a = m } else { b = m }
    }
    0.5 * (a + b)
}

#[test]
fn outer_ring_sweep() {
    let (gs, c) = gs4();
    assert!((default_beta(5.0) - BETA).abs() < 1e-15);
    let inner = frozen_inner_ring(8, c, &pot(), gs, BETA).unwrap();
    let mut prev = 0.0;
    for n in [48, 64] {
        let rep = find_outer_radius(8, n, c, &pot(), gs, BETA).unwrap();
        assert_eq!(rep.r_k, inner.r);
        let oracle = scan_maximizer(&inner, n, 0.3 * rep.window.lo, 3.0 * rep.window.hi);
        assert!((rep.t_n / oracle - 1.0).abs() < 1e-8, "{} vs {oracle}", rep.t_n);
        assert!(rep.stationarity() <= 1e-6, "{rep:?}");
        assert!(rep.f_second < 0.0);
        assert!(rep.bracket.0 < rep.t_n && rep.t_n < rep.bracket.1);
        assert!(rep.t_n > prev);
        prev = rep.t_n;
        assert!(rep.cross_ratio <= 0.05, "{}", rep.cross_ratio);
        assert!(decoupling_shift(&rep, c, &pot(), gs, BETA).unwrap() < 1e-3);
        assert!((0.8..1.25).contains(&rep.balancing.ratio), "{:?}", rep.balancing);
        assert!((rep.per_bump_energy * (8 + n) as f64 - rep.f_at_t).abs() < 1e-9 * rep.f_at_t);
    }
}

#[test]
fn n32_maximizer_sits_just_past_the_widened_window() {
    // The ln ln n correction pushes t_n above the asymptotic window, as for the inner ring.
    let (gs, c) = gs4();
    let inner = frozen_inner_ring(8, c, &pot(), gs, BETA).unwrap();
    let r = find_outer_radius(8, 32, c, &pot(), gs, BETA);
    assert!(matches!(r, Err(Error::NoInteriorMax { .. })), "{r:?}");
    let w = multibump_core::model::radius_window(32, 5.0, BETA).unwrap();
    let wide = find_outer_radius_in(&inner, 32, c, &pot(), gs, BETA, (0.3 * w.lo, 3.0 * w.hi)).unwrap();
    let overshoot = wide.t_n / w.widened(BRACKET_WIDENING).1 - 1.0;
    assert!(overshoot > 0.0 && overshoot < 0.01, "{overshoot}");
    assert!(wide.cross_ratio <= 0.05);
}
