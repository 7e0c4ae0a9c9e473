use multibump_core::discretization::{build_grid, Field, SectorGrid, Symmetry};
use multibump_core::ground_state::{solve_ground_state, GroundState};
use multibump_core::model::{default_beta, radius_window, Potential, RingConfig};
use multibump_core::reduced_energy::{energy_constants, find_ring_radius};
use multibump_core::solver::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn planar() -> GroundState {
    solve_ground_state(2, 3.0, 30.0, 1e-12).unwrap()
}

fn defaults() -> Potential {
    Potential::new(1.0, 0.0, 3.0, 3.0).unwrap()
}

fn reduction(gs: &GroundState, k: usize, r: f64, h: f64) -> Reduction {
    let pot = defaults();
    let cfg = RingConfig::new(k, r, 2).unwrap();
    let grid = build_grid(&cfg, h, 1.0, 12.0).unwrap();
    Reduction::new(GridContext::new(grid, &pot), cfg, gs, &pot, &SolverParams::default(), LForm::Analytic).unwrap()
}

#[test]
fn projected_problem_trivial_right_hand_sides() {
    let gs = planar();
    let red = reduction(&gs, 8, 13.4, 0.1);
    let params = SolverParams::default();
    let n = red.grid().len();
    let zero = red.solve_projected(&vec![0.0; n], &params).unwrap();
    assert_eq!(zero.b, 0.0);
    assert!(zero.v.iter().all(|v| *v == 0.0));
    // f = Z̃ is absorbed entirely by the multiplier: v = 0, b = -1.
    let aligned = red.solve_projected(&red.fields.zt.values, &params).unwrap();
    assert!((aligned.b + 1.0).abs() < 1e-8, "{}", aligned.b);
    let vmax = aligned.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(vmax < 1e-8, "{vmax}");
}

#[test]
fn projected_solution_satisfies_equation_and_constraint() {
    let gs = planar();
    let red = reduction(&gs, 8, 13.4, 0.1);
    let params = SolverParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f: Vec<f64> = red.grid().polar_nodes().iter().map(|(r, _)| rng.gen_range(-1.0..1.0) * (-(r - 13.4f64).abs()).exp()).collect();
    let sol = red.solve_projected(&f, &params).unwrap();
    let res = projected_residual(&red, &sol.v, sol.b, &f);
    let fmax = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // Pointwise residual of a 1e-10 relative Krylov solve, in the M⁻¹-scaled rows.
    assert!(res < 1e-5 * fmax, "{res}");
    let zt_norm = red.constraint(&red.fields.zt.values).sqrt();
    let vnorm = sol.v.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(red.constraint(&sol.v).abs() < 1e-9 * zt_norm * vnorm.max(1.0));
}

#[test]
fn flat_potential_single_bump_needs_no_correction() {
    let gs = planar();
    let cfg = RingConfig::new(1, 8.0, 2).unwrap();
    let grid = SectorGrid::new(1, 0.1, 200, 256, Symmetry::Even);
    let b = solve_correction(&grid, &cfg, &gs, &Potential::constant(), &SolverParams::default()).unwrap();
    assert_eq!(b.b_k, 0.0);
    assert_eq!(b.omega.max_abs(), 0.0);
}

#[test]
fn correction_contracts_and_is_small() {
    let gs = planar();
    let pot = defaults();
    let consts = energy_constants(&gs).unwrap();
    let params = SolverParams::default();
    let mut norms = Vec::new();
    for k in [12usize, 24] {
        let w = radius_window(k, 3.0, default_beta(3.0)).unwrap();
        let rk = find_ring_radius(k, &consts, &pot, &gs, &w).unwrap().r_k;
        let cfg = RingConfig::new(k, rk, 2).unwrap();
        let grid = build_grid(&cfg, 0.1, 1.0, 12.0).unwrap();
        let b = solve_correction(&grid, &cfg, &gs, &pot, &params).unwrap();
        assert!(b.contraction_ratios.iter().all(|r| *r < 0.5), "{:?}", b.contraction_ratios);
        assert!(b.omega_star_norm < 0.05 * gs.u0());
        assert!(b.residual_sup < 1e-6);
        norms.push(b.omega_star_norm);
    }
    assert!(norms[1] < norms[0], "{norms:?}");
}

#[test]
fn energy_gradient_matches_residual() {
    let gs = planar();
    let red = reduction(&gs, 6, 10.0, 0.1);
    let ctx = &red.ctx;
    let u = &red.fields.w.values;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dir: Vec<f64> = (0..u.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let eps = 1e-5;
    let shifted = |s: f64| -> Vec<f64> { u.iter().zip(&dir).map(|(a, d)| a + s * d).collect() };
    let fd = (ctx.energy(&shifted(eps), 3.0) - ctx.energy(&shifted(-eps), 3.0)) / (2.0 * eps);
    let res = ctx.residual(u, 3.0);
    let analytic: f64 =
        ctx.grid.multiplicity() * (0..u.len()).map(|i| ctx.vols[i] * res[i] * dir[i]).sum::<f64>();
    assert!((fd - analytic).abs() < 1e-6 * analytic.abs().max(1.0), "{fd} {analytic}");
}

#[test]
fn full_solve_k8_coarse() {
    let gs = planar();
    let pot = defaults();
    let consts = energy_constants(&gs).unwrap();
    let w = radius_window(8, 3.0, default_beta(3.0)).unwrap();
    let rk = find_ring_radius(8, &consts, &pot, &gs, &w).unwrap().r_k;
    let setup = FullSolveSetup {
        k: 8,
        h: 0.1,
        h_theta_scale: 1.0,
        margin: 12.0,
        r_reduced: rk,
        gs: &gs,
        pot,
        params: SolverParams::default(),
    };
    let (b, trace) = solve_full(&setup).unwrap();
    assert!(b.residual_sup <= 1e-9, "{}", b.residual_sup);
    assert!(b.min_u > 0.0);
    assert!(b.projection_residual <= 1e-8);
    assert!(b.b_k.abs() <= 1e-7);
    assert!(((b.r_star - rk) / rk).abs() <= 0.05, "{} vs {rk}", b.r_star);
    assert!(trace.evaluations.len() > 5);
    // The discrete solution satisfies the equation when re-evaluated from scratch.
    let ctx = GridContext::new(*b.grid(), &pot);
    let res = ctx.residual(&b.u.values, 3.0);
    assert!(res.iter().all(|r| r.abs() <= 1e-9));
    // Lifting to the disc gives an exactly 2π/k-periodic field.
    let full = b.u.to_symmetry(Symmetry::Full);
    let g = full.grid;
    let n = g.full_intervals();
    for i in (1..g.m).step_by(17) {
        for j in 0..n {
            assert_eq!(full.values[g.idx(i, j)], full.values[g.idx(i, (j + 2 * g.q) % n)]);
        }
    }
    // Round trip through the bundle file.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bundle.json");
    b.save(&path).unwrap();
    let back = SolutionBundle::load(&path).unwrap();
    assert!(back.u == b.u, "bundle field changed on reload");
    assert_eq!(back.r_star, b.r_star);
    let files = b.write_outputs(dir.path()).unwrap();
    assert!(files.iter().all(|f| f.exists()));
    let _ = Field::zeros(*b.grid());
}
