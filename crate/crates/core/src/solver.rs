//! Projected linear problem, the correction ω(r), the outer search in r and the final
//! Newton polish.
//!
//! Discrete conventions: every pointwise equation g = f is imposed as A x = M f, with S the
//! stiffness and M the diagonal of cell volumes, so all matrices below are symmetric.
//! The discrete energy is I_h(u) = mult·[½uᵀSu + ½Σ M V u² - Σ M |u|^{p+1}/(p+1)], whose
//! gradient is mult·(S u + M V u - M u^p).

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assembly::RingFields;
use crate::discretization::{build_grid_spanning, star_norm_weighted, Field, SectorGrid, StarNormParams};
use crate::error::{Error, Result};
use crate::fast_solver::PolarPreconditioner;
use crate::ground_state::GroundState;
use crate::krylov::{minres, KrylovInfo};
use crate::model::{bump_spacing, Potential, RingConfig};
use crate::numerics::golden_max;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    /// Sup-norm target for the fixed-point increments and the final residual.
    pub tol_newton: f64,
    /// Bound on the multiplier and the orthogonality defect.
    pub tol_proj: f64,
    /// Relative preconditioned residual of every Krylov solve.
    pub krylov_tol: f64,
    pub krylov_max_iter: usize,
    pub max_fixed_point: usize,
    pub max_newton: usize,
    /// Outer search bracket [1 - f, 1 + f]·r_pred.
    pub bracket_frac: f64,
    /// Relative width at which the golden-section phase hands over to the secant on b(r).
    pub golden_rel_tol: f64,
    /// Star-norm decay exponent τ.
    pub tau: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            tol_newton: 1e-9,
            tol_proj: 1e-8,
            krylov_tol: 1e-10,
            krylov_max_iter: 3000,
            max_fixed_point: 60,
            max_newton: 8,
            bracket_frac: 0.15,
            golden_rel_tol: 2e-3,
            tau: 0.1,
        }
    }
}

#[inline]
fn spow(x: f64, p: f64) -> f64 {
    x.abs().powf(p).copysign(x)
}

/// Grid-level data shared by every radius: volumes, V and the fast preconditioner.
#[derive(Debug, Clone)]
pub struct GridContext {
    pub grid: SectorGrid,
    pub vols: Vec<f64>,
    pub v_nodes: Vec<f64>,
    pub pc: Arc<PolarPreconditioner>,
}

impl GridContext {
    pub fn new(grid: SectorGrid, pot: &Potential) -> Self {
        let vols = grid.volumes();
        let v_nodes = grid.polar_nodes().into_iter().map(|(r, _)| pot.v(r)).collect();
        let pc = Arc::new(PolarPreconditioner::new(&grid, |r| pot.v(r), 0.0));
        GridContext { grid, vols, v_nodes, pc }
    }

    /// y = S x + diag·x.
    pub fn apply_shifted(&self, diag: &[f64], x: &[f64], y: &mut [f64]) {
        self.grid.stiffness_apply(x, y);
        for i in 0..x.len() {
            y[i] += diag[i] * x[i];
        }
    }

    /// Pointwise residual -Δu + Vu - u^p, nodewise (divided by the cell volume).
    pub fn residual(&self, u: &[f64], p: f64) -> Vec<f64> {
        let mut y = vec![0.0; u.len()];
        self.grid.stiffness_apply(u, &mut y);
        for i in 0..u.len() {
            y[i] = y[i] / self.vols[i] + self.v_nodes[i] * u[i] - spow(u[i], p);
        }
        y
    }

    /// Discrete energy over the whole plane.
    pub fn energy(&self, u: &[f64], p: f64) -> f64 {
        let mut su = vec![0.0; u.len()];
        self.grid.stiffness_apply(u, &mut su);
        let mut e = 0.0;
        for i in 0..u.len() {
            e += 0.5 * su[i] * u[i] + self.vols[i] * (0.5 * self.v_nodes[i] * u[i] * u[i] - u[i].abs().powf(p + 1.0) / (p + 1.0));
        }
        self.grid.multiplicity() * e
    }

    /// Solves (S + diag) x = b with MINRES preconditioned by the fast solver.
    pub fn solve_symmetric(&self, diag: &[f64], b: &[f64], params: &SolverParams) -> Result<(Vec<f64>, KrylovInfo)> {
        let mut x = vec![0.0; b.len()];
        let info = minres(
            &mut |v, out| self.apply_shifted(diag, v, out),
            &mut |v, out| self.pc.apply(v, out),
            b,
            &mut x,
            params.krylov_tol,
            params.krylov_max_iter,
        )?;
        Ok((x, info))
    }
}

/// Which right-hand side the projected problem uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LForm {
    /// l_k = (W^p - ΣU^p) - (V - 1)W from the profile equation of U. The resulting ω is
    /// the correction of the continuous reduction, free of the grid error of Δ_h W.
    Analytic,
    /// l_k = -(-Δ_h W + VW - W^p). Differs from `Analytic` by the truncation error of
    /// Δ_h on W (O(h²), larger than ω itself at desk resolutions) and makes W + ω an
    /// exact discrete solution once the multiplier vanishes.
    DiscreteConsistent,
}

/// The reduction at one ring radius: linearization about W_r plus the constraint column.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub ctx: GridContext,
    pub cfg: RingConfig,
    pub p: f64,
    pub fields: RingFields,
    /// l_k at the nodes.
    pub l: Field,
    /// M(V - pW^{p-1}).
    lin_diag: Vec<f64>,
    /// M Z̃, the discrete constraint column.
    g: Vec<f64>,
    /// gᵀ P g, the Schur scaling of the multiplier block.
    gamma: f64,
    star_weights: Vec<f64>,
}

/// Output of one projected linear solve.
#[derive(Debug, Clone)]
pub struct ProjectedSolution {
    pub v: Vec<f64>,
    pub b: f64,
    pub info: KrylovInfo,
}

/// Output of the fixed-point iteration for ω at fixed r.
#[derive(Debug, Clone)]
pub struct Correction {
    pub omega: Vec<f64>,
    pub b: f64,
    pub iterations: usize,
    pub contraction_ratios: Vec<f64>,
    pub krylov_iterations: usize,
}

impl Reduction {
    pub fn new(
        ctx: GridContext,
        cfg: RingConfig,
        gs: &GroundState,
        pot: &Potential,
        params: &SolverParams,
        form: LForm,
    ) -> Result<Self> {
        let p = gs.p();
        let fields = RingFields::assemble(&ctx.grid, &cfg, gs);
        let l = match form {
            LForm::Analytic => fields.rhs_l(pot, p),
            LForm::DiscreteConsistent => {
                Field::new(ctx.grid, ctx.residual(&fields.w.values, p).into_iter().map(|r| -r).collect())
            }
        };
        let n = ctx.grid.len();
        let lin_diag: Vec<f64> =
            (0..n).map(|i| ctx.vols[i] * (ctx.v_nodes[i] - p * fields.w.values[i].powf(p - 1.0))).collect();
        let g: Vec<f64> = (0..n).map(|i| ctx.vols[i] * fields.zt.values[i]).collect();
        let mut pg = vec![0.0; n];
        ctx.pc.apply(&g, &mut pg);
        let gamma: f64 = g.iter().zip(&pg).map(|(a, b)| a * b).sum();
        let star_weights = StarNormParams::for_ring(&cfg, params.tau, p)?.weights(&ctx.grid);
        Ok(Reduction { ctx, cfg, p, fields, l, lin_diag, g, gamma, star_weights })
    }

    pub fn grid(&self) -> &SectorGrid {
        &self.ctx.grid
    }

    pub fn star_norm(&self, values: &[f64]) -> f64 {
        star_norm_weighted(values, &self.star_weights)
    }

    /// Σ M Z̃ v: the orthogonality defect of v on one grid copy.
    pub fn constraint(&self, v: &[f64]) -> f64 {
        self.g.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// L v pointwise, L = -Δ + V - pW^{p-1}.
    pub fn apply_l_pointwise(&self, v: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; v.len()];
        self.ctx.apply_shifted(&self.lin_diag, v, &mut y);
        y.iter_mut().zip(&self.ctx.vols).for_each(|(y, m)| *y /= m);
        y
    }

    /// Solves L v = f + b Z̃ with Σ M Z̃ v = 0 via the symmetric bordered system
    /// [A, -g; -gᵀ, 0][v; b] = [M f; 0].
    pub fn solve_projected(&self, f: &[f64], params: &SolverParams) -> Result<ProjectedSolution> {
        let n = f.len();
        let mut rhs: Vec<f64> = f.iter().zip(&self.ctx.vols).map(|(f, m)| f * m).collect();
        rhs.push(0.0);
        let mut x = vec![0.0; n + 1];
        let gamma = self.gamma;
        let info = minres(
            &mut |v, out| {
                let (vv, b) = (&v[..n], v[n]);
                self.ctx.apply_shifted(&self.lin_diag, vv, &mut out[..n]);
                for i in 0..n {
                    out[i] -= self.g[i] * b;
                }
                out[n] = -self.constraint(vv);
            },
            &mut |v, out| {
                self.ctx.pc.apply(&v[..n], &mut out[..n]);
                out[n] = v[n] / gamma;
            },
            &rhs,
            &mut x,
            params.krylov_tol,
            params.krylov_max_iter,
        )?;
        let b = x.pop().unwrap_or(0.0);
        Ok(ProjectedSolution { v: x, b, info })
    }

    /// R(ω) = (W+ω)^p - W^p - pW^{p-1}ω.
    pub fn remainder(&self, omega: &[f64]) -> Vec<f64> {
        let p = self.p;
        self.fields
            .w
            .values
            .iter()
            .zip(omega)
            .map(|(&w, &o)| spow(w + o, p) - w.powf(p) - p * w.powf(p - 1.0) * o)
            .collect()
    }

    /// Fixed point ω ← L⁻¹_proj(l_k + R(ω)) from ω = 0.
    pub fn correction(&self, params: &SolverParams) -> Result<Correction> {
        let n = self.grid().len();
        let mut omega = vec![0.0; n];
        let mut b;
        let mut ratios = Vec::new();
        let mut prev_diff = f64::INFINITY;
        let mut bad = 0;
        let mut krylov_iterations = 0;
        for it in 1..=params.max_fixed_point {
            let rem = self.remainder(&omega);
            let f: Vec<f64> = self.l.values.iter().zip(&rem).map(|(l, r)| l + r).collect();
            let sol = self.solve_projected(&f, params)?;
            krylov_iterations += sol.info.iterations;
            let diff: Vec<f64> = sol.v.iter().zip(&omega).map(|(a, b)| a - b).collect();
            let d = self.star_norm(&diff);
            omega = sol.v;
            b = sol.b;
            if prev_diff.is_finite() && prev_diff > 0.0 {
                let ratio = d / prev_diff;
                ratios.push(ratio);
                bad = if ratio >= 0.9 { bad + 1 } else { 0 };
                if bad >= 3 {
                    return Err(Error::NoContraction(ratios));
                }
            }
            if d < params.tol_newton {
                return Ok(Correction { omega, b, iterations: it, contraction_ratios: ratios, krylov_iterations });
            }
            prev_diff = d;
        }
        Err(Error::NoContraction(ratios))
    }
}

/// Pointwise sup of L v - f - b Z̃ for a projected solution.
pub fn projected_residual(red: &Reduction, v: &[f64], b: f64, f: &[f64]) -> f64 {
    let lv = red.apply_l_pointwise(v);
    lv.iter()
        .zip(f)
        .zip(&red.fields.zt.values)
        .fold(0.0, |m, ((lv, f), z)| m.max((lv - f - b * z).abs()))
}

/// A converged ring solution u_k = W_{r*} + ω_k on an even sector grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionBundle {
    pub cfg: RingConfig,
    pub p: f64,
    pub pot: Potential,
    pub params: SolverParams,
    pub u: Field,
    pub omega: Field,
    /// Radius of the decomposition u = W_r + ω with Σ M Z̃_r ω = 0.
    pub r_star: f64,
    /// Multiplier of the projected problem at the radius where it was killed.
    pub b_k: f64,
    /// Radius at which the projected multiplier vanishes.
    pub r_multiplier: f64,
    /// Reduced-energy maximizer used to centre the search.
    pub r_reduced: f64,
    /// Sup of the pointwise residual of the full equation.
    pub residual_sup: f64,
    /// Star norm of the reduction correction at r*: the projected fixed point with the
    /// analytic l_k. This is the grid counterpart of the correction of the reduction.
    pub omega_star_norm: f64,
    /// Star norm of u - W_{r*}, which also carries the O(h²) grid error of Δ_h W.
    pub omega_discrete_star_norm: f64,
    /// Star norm of u - W_{r*} - (reduction correction): the grid error part.
    pub discretization_defect: f64,
    /// |Σ M Z̃ ω| over the plane.
    pub projection_residual: f64,
    /// omega_star_norm / (r^{-α} + e^{-min(p/2-τ, 1) d}).
    pub c_est: f64,
    pub contraction_ratios: Vec<f64>,
    pub energy: f64,
    pub newton_steps: usize,
    pub min_u: f64,
}

impl SolutionBundle {
    pub fn grid(&self) -> &SectorGrid {
        &self.u.grid
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_vec(self)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }

    /// Writes the JSON summary and the u, ω field CSVs into `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let k = self.cfg.k;
        let summary = dir.join(format!("solve_k{k}.json"));
        let s = serde_json::json!({
            "k": k,
            "r_star": self.r_star,
            "b_k": self.b_k,
            "residual_sup": self.residual_sup,
            "omega_star_norm": self.omega_star_norm,
            "omega_discrete_star_norm": self.omega_discrete_star_norm,
            "discretization_defect": self.discretization_defect,
            "r_reduced": self.r_reduced,
            "r_multiplier": self.r_multiplier,
            "projection_residual": self.projection_residual,
            "c_est": self.c_est,
            "contraction_ratios": self.contraction_ratios,
            "energy": self.energy,
            "min_u": self.min_u,
            "grid": self.u.grid,
        });
        std::fs::write(&summary, serde_json::to_vec_pretty(&s)?)?;
        let (fu, fo) = (dir.join(format!("u_k{k}.csv")), dir.join(format!("omega_k{k}.csv")));
        self.u.write_csv(&fu)?;
        self.omega.write_csv(&fo)?;
        Ok(vec![summary, fu, fo])
    }
}

/// r^{-α} + e^{-min(p/2 - τ, 1) d}, the shape of the correction bound.
pub fn correction_scale(cfg: &RingConfig, pot: &Potential, p: f64, tau: f64) -> f64 {
    cfg.r.powf(-pot.alpha) + (-(p / 2.0 - tau).min(1.0) * bump_spacing(cfg)).exp()
}

/// Projected fixed point at a single radius, without the Newton polish. `residual_sup`
/// is the residual of the projected equation.
pub fn solve_correction(
    grid: &SectorGrid,
    cfg: &RingConfig,
    gs: &GroundState,
    pot: &Potential,
    params: &SolverParams,
) -> Result<SolutionBundle> {
    let ctx = GridContext::new(*grid, pot);
    let red = Reduction::new(ctx, *cfg, gs, pot, params, LForm::Analytic)?;
    let corr = red.correction(params)?;
    let rem = red.remainder(&corr.omega);
    let f: Vec<f64> = red.l.values.iter().zip(&rem).map(|(l, r)| l + r).collect();
    let residual_sup = projected_residual(&red, &corr.omega, corr.b, &f);
    let u: Vec<f64> = red.fields.w.values.iter().zip(&corr.omega).map(|(w, o)| w + o).collect();
    let omega_star_norm = red.star_norm(&corr.omega);
    let mult = grid.multiplicity();
    Ok(SolutionBundle {
        cfg: *cfg,
        p: gs.p(),
        pot: *pot,
        params: *params,
        energy: red.ctx.energy(&u, gs.p()),
        min_u: interior_min(&u),
        u: Field::new(*grid, u),
        omega: Field::new(*grid, corr.omega.clone()),
        r_star: cfg.r,
        b_k: corr.b,
        r_multiplier: cfg.r,
        r_reduced: f64::NAN,
        residual_sup,
        omega_star_norm,
        omega_discrete_star_norm: omega_star_norm,
        discretization_defect: 0.0,
        projection_residual: (mult * red.constraint(&corr.omega)).abs(),
        c_est: omega_star_norm / correction_scale(cfg, pot, gs.p(), params.tau),
        contraction_ratios: corr.contraction_ratios,
        newton_steps: 0,
    })
}

fn interior_min(u: &[f64]) -> f64 {
    u.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Everything fixed during one outer search.
#[derive(Debug, Clone)]
pub struct FullSolveSetup<'a> {
    pub k: usize,
    pub h: f64,
    pub h_theta_scale: f64,
    pub margin: f64,
    pub r_reduced: f64,
    pub gs: &'a GroundState,
    pub pot: Potential,
    pub params: SolverParams,
}

/// Diagnostics of the outer search, for logging.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SearchTrace {
    /// (r, E(r), b(r)) at every evaluated radius.
    pub evaluations: Vec<(f64, f64, f64)>,
}

/// Outer search: golden section on E(r) = I_h(W_r + ω(r)), then secant on the multiplier
/// b(r) (zero exactly where dE/dr = 0), then Newton on the unprojected equation and a final
/// re-decomposition of u.
pub fn solve_full(setup: &FullSolveSetup) -> Result<(SolutionBundle, SearchTrace)> {
    let (gs, pot, params) = (setup.gs, &setup.pot, &setup.params);
    let p = gs.p();
    let r0 = setup.r_reduced;
    let (lo, hi) = ((1.0 - params.bracket_frac) * r0, (1.0 + params.bracket_frac) * r0);
    let grid = build_grid_spanning(setup.k, r0, hi, setup.h, setup.h_theta_scale, setup.margin)?;
    let ctx = GridContext::new(grid, pot);
    let base = RingConfig::new(setup.k, r0, 2)?;
    let mut trace = SearchTrace::default();

    let eval = |r: f64, trace: &mut SearchTrace| -> Result<(Reduction, Correction, f64)> {
        let red = Reduction::new(ctx.clone(), base.with_radius(r), gs, pot, params, LForm::DiscreteConsistent)?;
        let corr = red.correction(params)?;
        let u: Vec<f64> = red.fields.w.values.iter().zip(&corr.omega).map(|(w, o)| w + o).collect();
        let e = red.ctx.energy(&u, p);
        trace.evaluations.push((r, e, corr.b));
        Ok((red, corr, e))
    };

    let mut failure = None;
    let gm = golden_max(
        |r| match eval(r, &mut trace) {
            Ok((_, _, e)) => e,
            Err(err) => {
                failure.get_or_insert(err);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        params.golden_rel_tol,
        60,
    );
    if let Some(err) = failure {
        return Err(err);
    }
    if gm.at_endpoint {
        return Err(Error::NoInteriorMax { lo, hi, at: gm.x });
    }

    // Secant on b(r).
    let (mut ra, mut rb) = (gm.x, gm.x * (1.0 + 1e-3));
    let (_, ca, _) = eval(ra, &mut trace)?;
    let (mut red, mut corr, _) = eval(rb, &mut trace)?;
    let (mut ba, mut bb) = (ca.b, corr.b);
    for _ in 0..20 {
        if bb.abs() <= params.tol_proj || (rb - ra).abs() < 1e-12 * rb || bb == ba {
            break;
        }
        let rn = rb - bb * (rb - ra) / (bb - ba);
        if !(lo..=hi).contains(&rn) {
            return Err(Error::NoInteriorMax { lo, hi, at: rn });
        }
        let (rd, cn, _) = eval(rn, &mut trace)?;
        (ra, ba) = (rb, bb);
        (rb, bb) = (rn, cn.b);
        red = rd;
        corr = cn;
    }
    let limit = 10.0 * params.tol_proj;
    if bb.abs() > limit {
        return Err(Error::MultiplierNotSmall { b: bb, limit });
    }
    let r_multiplier = rb;
    let b_k = bb;

    // Newton polish on -Δu + Vu - u^p = 0.
    let mut u: Vec<f64> = red.fields.w.values.iter().zip(&corr.omega).map(|(w, o)| w + o).collect();
    let mut res = ctx.residual(&u, p);
    let mut res_sup = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let mut steps = 0;
    while res_sup > 0.01 * params.tol_newton && steps < params.max_newton {
        let diag: Vec<f64> = (0..u.len()).map(|i| ctx.vols[i] * (ctx.v_nodes[i] - p * u[i].abs().powf(p - 1.0))).collect();
        let rhs: Vec<f64> = res.iter().zip(&ctx.vols).map(|(r, m)| -r * m).collect();
        let (du, _) = ctx.solve_symmetric(&diag, &rhs, params)?;
        let trial: Vec<f64> = u.iter().zip(&du).map(|(u, d)| u + d).collect();
        let new_res = ctx.residual(&trial, p);
        let new_sup = new_res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        if new_sup >= res_sup {
            // At the round-off floor of the Krylov solve; keep the better iterate.
            break;
        }
        steps += 1;
        (u, res, res_sup) = (trial, new_res, new_sup);
    }
    if res_sup > params.tol_newton {
        return Err(Error::NewtonFailure(res_sup));
    }

    // Re-decompose: r* with Σ M Z̃_{r*}(u - W_{r*}) = 0.
    let defect = |r: f64| -> (f64, RingFields) {
        let f = RingFields::assemble(&grid, &base.with_radius(r), gs);
        let d: f64 = (0..u.len()).map(|i| ctx.vols[i] * f.zt.values[i] * (u[i] - f.w.values[i])).sum();
        (d, f)
    };
    let (mut sa, mut sb) = (r_multiplier, r_multiplier * (1.0 + 1e-4));
    let (mut da, _) = defect(sa);
    let (mut db, mut fb) = defect(sb);
    for _ in 0..30 {
        if db == da || (sb - sa).abs() < 1e-13 * sb {
            break;
        }
        let sn = sb - db * (sb - sa) / (db - da);
        let (dn, fnew) = defect(sn);
        (sa, da) = (sb, db);
        (sb, db, fb) = (sn, dn, fnew);
    }
    let r_star = sb;
    let cfg = base.with_radius(r_star);
    let omega: Vec<f64> = u.iter().zip(&fb.w.values).map(|(u, w)| u - w).collect();
    let reduction = Reduction::new(ctx.clone(), cfg, gs, pot, params, LForm::Analytic)?;
    let corr = reduction.correction(params)?;
    let omega_star_norm = reduction.star_norm(&corr.omega);
    let omega_discrete_star_norm = reduction.star_norm(&omega);
    let defect_field: Vec<f64> = omega.iter().zip(&corr.omega).map(|(a, b)| a - b).collect();
    let discretization_defect = reduction.star_norm(&defect_field);
    let projection_residual = (grid.multiplicity() * db).abs();
    let bundle = SolutionBundle {
        cfg,
        p,
        pot: *pot,
        params: *params,
        energy: ctx.energy(&u, p),
        min_u: interior_min(&u),
        u: Field::new(grid, u),
        omega: Field::new(grid, omega),
        r_star,
        b_k,
        r_multiplier,
        r_reduced: r0,
        residual_sup: res_sup,
        omega_star_norm,
        omega_discrete_star_norm,
        discretization_defect,
        projection_residual,
        c_est: omega_star_norm / correction_scale(&cfg, pot, p, params.tau),
        contraction_ratios: corr.contraction_ratios,
        newton_steps: steps,
    };
    Ok((bundle, trace))
}
