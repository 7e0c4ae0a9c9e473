//! Radial ground state of -ΔU + U = U^p on R^N by RK4 shooting.
//!
//! Bisection on U(0) separates trajectories that cross zero (U(0) too large) from
//! trajectories that turn back upward while positive (U(0) too small). The forward
//! trajectory is only trusted while the two bracket trajectories still agree; past
//! that matching radius the table is filled by integrating the same ODE inward from
//! r_max, starting on the decaying branch and scaled to meet the forward value.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{simpson_weights, sphere_area};

/// Shooting parameters. Defaults: step 1e-3, r_max 30, bracket width 1e-12.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingParams {
    pub h_ode: f64,
    pub r_max: f64,
    pub tol_shoot: f64,
}

impl Default for ShootingParams {
    fn default() -> Self {
        ShootingParams { h_ode: 1e-3, r_max: 30.0, tol_shoot: 1e-12 }
    }
}

const U0_LOWER: f64 = 1.0;
const U0_UPPER: f64 = 10.0;
const BLOWUP: f64 = 10.0 * U0_UPPER;
/// Relative disagreement of the bracket trajectories tolerated at the matching radius.
const MATCH_SPREAD: f64 = 1e-9;

/// Tabulated ground state with its integrals and decay constant.
#[derive(Debug, Clone)]
pub struct GroundState {
    dim: usize,
    p: f64,
    u0: f64,
    h_ode: f64,
    r_max: f64,
    u: Vec<f64>,
    du: Vec<f64>,
    decay_const: f64,
    mass2: f64,
    mass_p1: f64,
    grad2: f64,
    y1sq_moment: f64,
}

/// Integrals of U over R^N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// ∫U²
    pub mass2: f64,
    /// ∫U^{p+1}
    pub mass_p1: f64,
    /// ∫|∇U|²
    pub grad2: f64,
    /// ∫U U'(|y|) y₁²/|y|, equal to -mass2/2.
    pub y1sq_moment: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    /// U became negative: U(0) above the ground state.
    Crossing,
    /// |U| exceeded the blow-up threshold: treated like a crossing.
    Blowup,
    /// U' > 0 while U > 0: U(0) below the ground state.
    TurnBack,
    /// Reached r_max positive and monotone.
    Survived,
}

impl Fate {
    fn is_over(self) -> bool {
        matches!(self, Fate::Crossing | Fate::Blowup)
    }
}

struct Ode {
    n: f64,
    p: f64,
}

impl Ode {
    #[inline]
    fn rhs(&self, r: f64, u: f64, v: f64) -> (f64, f64) {
        let nl = u.abs().powf(self.p - 1.0) * u;
        if r == 0.0 {
            (v, (u - nl) / self.n)
        } else {
            (v, u - nl - (self.n - 1.0) / r * v)
        }
    }

    #[inline]
    fn step(&self, r: f64, u: f64, v: f64, h: f64) -> (f64, f64) {
        let (k1u, k1v) = self.rhs(r, u, v);
        let (k2u, k2v) = self.rhs(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        let (k3u, k3v) = self.rhs(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        let (k4u, k4v) = self.rhs(r + h, u + h * k3u, v + h * k3v);
        (
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    }

    /// Forward trajectory from U(0) = u0 over `steps` steps; stops at the first event.
    fn forward(&self, u0: f64, h: f64, steps: usize, record: bool) -> Result<(Fate, Vec<f64>, Vec<f64>)> {
        let (mut us, mut vs) = (Vec::new(), Vec::new());
        let (mut u, mut v) = (u0, 0.0);
        if record {
            us.reserve(steps + 1);
            vs.reserve(steps + 1);
            us.push(u);
            vs.push(v);
        }
        for i in 0..steps {
            let r = i as f64 * h;
            (u, v) = self.step(r, u, v, h);
            if !u.is_finite() || !v.is_finite() {
                return Err(Error::StiffFailure(r + h));
            }
            if record {
                us.push(u);
                vs.push(v);
            }
            if u < 0.0 {
                return Ok((Fate::Crossing, us, vs));
            }
            if u.abs() > BLOWUP {
                return Ok((Fate::Blowup, us, vs));
            }
            if v > 0.0 {
                return Ok((Fate::TurnBack, us, vs));
            }
        }
        Ok((Fate::Survived, us, vs))
    }

    /// Inward integration from r_max = steps·h down to index `stop` on the decaying branch
    /// of amplitude `eps`; returns (U, U') on indices stop..=steps.
    fn backward(&self, eps: f64, h: f64, steps: usize, stop: usize) -> (Vec<f64>, Vec<f64>) {
        let m = steps - stop;
        let mut us = vec![0.0; m + 1];
        let mut vs = vec![0.0; m + 1];
        let r_end = steps as f64 * h;
        let g = decay_shape(self.n, r_end);
        let (mut u, mut v) = (eps * g, -eps * g * (1.0 + (self.n - 1.0) / (2.0 * r_end)));
        us[m] = u;
        vs[m] = v;
        for s in (0..m).rev() {
            let r = (stop + s + 1) as f64 * h;
            (u, v) = self.step(r, u, v, -h);
            us[s] = u;
            vs[s] = v;
        }
        (us, vs)
    }
}

/// r^{-(N-1)/2} e^{-r}.
fn decay_shape(n: f64, r: f64) -> f64 {
    r.powf(-(n - 1.0) / 2.0) * (-r).exp()
}

/// Solve for the ground state with default step 1e-3.
pub fn solve_ground_state(dim: usize, p: f64, r_max: f64, tol_shoot: f64) -> Result<GroundState> {
    solve_ground_state_with(dim, p, ShootingParams { r_max, tol_shoot, ..ShootingParams::default() })
}

/// Solve for the ground state with explicit shooting parameters.
pub fn solve_ground_state_with(dim: usize, p: f64, params: ShootingParams) -> Result<GroundState> {
    validate(dim, p, &params)?;
    let ode = Ode { n: dim as f64, p };
    let h = params.h_ode;
    let steps = (params.r_max / h).round() as usize;

    let (mut lo, mut hi) = (U0_LOWER, U0_UPPER);
    if ode.forward(lo, h, steps, false)?.0.is_over() || !ode.forward(hi, h, steps, false)?.0.is_over() {
        return Err(Error::NoBracket { lo, hi });
    }
    while hi - lo > params.tol_shoot {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ode.forward(mid, h, steps, false)?.0.is_over() {
            hi = mid;
        } else {
            lo = mid;
        }
        debug_assert!(!ode.forward(lo, h, steps, false)?.0.is_over());
    }
    let u0 = 0.5 * (lo + hi);

    let (_, ulo, _) = ode.forward(lo, h, steps, true)?;
    let (_, uhi, _) = ode.forward(hi, h, steps, true)?;
    let (_, mut u, mut du) = ode.forward(u0, h, steps, true)?;
    let valid = ulo.len().min(uhi.len()).min(u.len());
    let min_match = (1.0 / h).round() as usize;
    let mut i_m = min_match.min(valid - 1);
    for i in min_match..valid.min(steps / 2) {
        if (uhi[i] - ulo[i]).abs() > MATCH_SPREAD * u[i].abs() {
            break;
        }
        i_m = i;
    }
    u.truncate(i_m + 1);
    du.truncate(i_m + 1);

    let target = u[i_m];
    let shoot_back = |eps: f64| ode.backward(eps, h, steps, i_m).0[0] - target;
    let unit = shoot_back(1.0) + target;
    let mut e0 = target / unit;
    let mut e1 = e0 * (1.0 + 1e-6);
    let mut f0 = shoot_back(e0);
    let mut f1 = shoot_back(e1);
    for _ in 0..60 {
        if f1.abs() <= 1e-15 * target.abs() || f1 == f0 {
            break;
        }
        let e2 = e1 - f1 * (e1 - e0) / (f1 - f0);
        e0 = e1;
        f0 = f1;
        e1 = e2;
        f1 = shoot_back(e1);
    }
    let (ub, vb) = ode.backward(e1, h, steps, i_m);
    u.extend_from_slice(&ub[1..]);
    du.extend_from_slice(&vb[1..]);

    GroundState::from_table(dim, p, u0, h, steps as f64 * h, u, du)
}

fn validate(dim: usize, p: f64, params: &ShootingParams) -> Result<()> {
    if dim < 1 {
        return Err(Error::InvalidParameter { key: "dim", reason: "must be >= 1".into() });
    }
    if !(p > 1.0) {
        return Err(Error::InvalidParameter { key: "p", reason: format!("{p} must exceed 1") });
    }
    if dim >= 3 {
        let crit = (dim as f64 + 2.0) / (dim as f64 - 2.0);
        if p >= crit {
            return Err(Error::InvalidParameter {
                key: "p",
                reason: format!("{p} is not below the critical exponent {crit} for dim {dim}"),
            });
        }
    }
    if !(params.r_max >= 20.0) {
        return Err(Error::InvalidParameter { key: "r_max", reason: "must be >= 20".into() });
    }
    if !(params.tol_shoot > 0.0) || !(params.h_ode > 0.0) {
        return Err(Error::InvalidParameter { key: "tol_shoot", reason: "tolerances and steps must be positive".into() });
    }
    Ok(())
}

impl GroundState {
    fn from_table(dim: usize, p: f64, u0: f64, h_ode: f64, r_max: f64, u: Vec<f64>, du: Vec<f64>) -> Result<Self> {
        let n = u.len() - 1;
        let tail_start = (3 * n) / 4;
        let nf = dim as f64;
        let mut acc = 0.0;
        for i in tail_start..=n {
            let r = i as f64 * h_ode;
            acc += u[i] / decay_shape(nf, r);
        }
        let decay_const = acc / (n - tail_start + 1) as f64;
        let mut gs = GroundState {
            dim,
            p,
            u0,
            h_ode,
            r_max,
            u,
            du,
            decay_const,
            mass2: 0.0,
            mass_p1: 0.0,
            grad2: 0.0,
            y1sq_moment: 0.0,
        };
        let m = gs.compute_moments();
        gs.mass2 = m.mass2;
        gs.mass_p1 = m.mass_p1;
        gs.grad2 = m.grad2;
        gs.y1sq_moment = m.y1sq_moment;
        Ok(gs)
    }

    fn compute_moments(&self) -> Moments {
        let n = self.u.len() - 1;
        let w = simpson_weights(n, self.h_ode);
        let omega = sphere_area(self.dim);
        let nm1 = self.dim as i32 - 1;
        let (mut m2, mut mp, mut g2, mut y1) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..=n {
            let r = i as f64 * self.h_ode;
            let rw = w[i] * r.powi(nm1);
            let u = self.u[i];
            m2 += rw * u * u;
            mp += rw * u.abs().powf(self.p + 1.0);
            g2 += rw * self.du[i] * self.du[i];
            y1 += rw * r * u * self.du[i];
        }
        Moments {
            mass2: omega * m2,
            mass_p1: omega * mp,
            grad2: omega * g2,
            y1sq_moment: omega * y1 / self.dim as f64,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn u0(&self) -> f64 {
        self.u0
    }
    pub fn h_ode(&self) -> f64 {
        self.h_ode
    }
    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    pub fn decay_const(&self) -> f64 {
        self.decay_const
    }
    pub fn u_table(&self) -> &[f64] {
        &self.u
    }
    pub fn du_table(&self) -> &[f64] {
        &self.du
    }
    /// Radius of table node `i`.
    pub fn radius(&self, i: usize) -> f64 {
        i as f64 * self.h_ode
    }
    pub fn moments(&self) -> Moments {
        Moments { mass2: self.mass2, mass_p1: self.mass_p1, grad2: self.grad2, y1sq_moment: self.y1sq_moment }
    }
    pub fn mass2(&self) -> f64 {
        self.mass2
    }
    pub fn mass_p1(&self) -> f64 {
        self.mass_p1
    }
    pub fn grad2(&self) -> f64 {
        self.grad2
    }

    /// Relative Derrick residual |grad2 + mass2 - massP1| / massP1.
    pub fn derrick_residual(&self) -> f64 {
        (self.grad2 + self.mass2 - self.mass_p1).abs() / self.mass_p1
    }

    /// Relative Pohozaev residual |(N-2)/2 grad2 + N/2 mass2 - N/(p+1) massP1| / massP1.
    pub fn pohozaev_residual(&self) -> f64 {
        let n = self.dim as f64;
        ((n - 2.0) / 2.0 * self.grad2 + n / 2.0 * self.mass2 - n / (self.p + 1.0) * self.mass_p1).abs()
            / self.mass_p1
    }

    /// max/min - 1 of U e^r r^{(N-1)/2} over the last quarter of the table.
    pub fn decay_plateau_spread(&self) -> f64 {
        let n = self.u.len() - 1;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in (3 * n) / 4..=n {
            let c = self.u[i] / decay_shape(self.dim as f64, self.radius(i));
            lo = lo.min(c);
            hi = hi.max(c);
        }
        hi / lo - 1.0
    }

    #[inline]
    fn d2u_at(&self, i: usize) -> f64 {
        let u = self.u[i];
        let nl = u.abs().powf(self.p - 1.0) * u;
        let n = self.dim as f64;
        if i == 0 {
            (u - nl) / n
        } else {
            u - nl - (n - 1.0) / self.radius(i) * self.du[i]
        }
    }

    #[inline]
    fn locate(&self, r: f64) -> Option<(usize, f64)> {
        let n = self.u.len() - 1;
        let x = r / self.h_ode;
        if x >= n as f64 {
            return None;
        }
        let i = (x.floor() as usize).min(n - 1);
        Some((i, x - i as f64))
    }

    /// U(r) for r >= 0: cubic Hermite inside the table, fitted decay law beyond r_max.
    #[inline]
    pub fn eval_u(&self, r: f64) -> f64 {
        match self.locate(r) {
            Some((i, t)) => hermite(t, self.h_ode, self.u[i], self.du[i], self.u[i + 1], self.du[i + 1]),
            None => self.decay_const * decay_shape(self.dim as f64, r),
        }
    }

    /// U'(r) for r >= 0: cubic Hermite on (U', U'') inside the table, derivative of the decay law beyond.
    #[inline]
    pub fn eval_du(&self, r: f64) -> f64 {
        match self.locate(r) {
            Some((i, t)) => {
                hermite(t, self.h_ode, self.du[i], self.d2u_at(i), self.du[i + 1], self.d2u_at(i + 1))
            }
            None => {
                let n = self.dim as f64;
                -self.decay_const * decay_shape(n, r) * (1.0 + (n - 1.0) / (2.0 * r))
            }
        }
    }

    /// U''(r) from the ODE.
    #[inline]
    pub fn eval_d2u(&self, r: f64) -> f64 {
        let u = self.eval_u(r);
        let nl = u.abs().powf(self.p - 1.0) * u;
        let n = self.dim as f64;
        if r == 0.0 {
            (u - nl) / n
        } else {
            u - nl - (n - 1.0) / r * self.eval_du(r)
        }
    }

    /// Write the JSON metadata and CSV table into `dir`.
    pub fn save(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let (json, table) = cache_paths(dir, self.dim, self.p);
        let meta = CacheMeta {
            dim: self.dim,
            p: self.p,
            u0: self.u0,
            decay_const: self.decay_const,
            mass2: self.mass2,
            mass_p1: self.mass_p1,
            grad2: self.grad2,
            h_ode: self.h_ode,
            r_max: self.r_max,
        };
        let mut w = csv::Writer::from_path(&table)?;
        w.write_record(["r", "U", "dU"])?;
        for i in 0..self.u.len() {
            w.serialize((self.radius(i), self.u[i], self.du[i]))?;
        }
        w.flush()?;
        fs::write(&json, serde_json::to_string_pretty(&meta)?)?;
        Ok((json, table))
    }

    /// Load a cached profile; `None` unless (dim, p, h_ode, r_max) match exactly.
    pub fn load(dir: &Path, dim: usize, p: f64, params: &ShootingParams) -> Result<Option<GroundState>> {
        let (json, table) = cache_paths(dir, dim, p);
        if !json.exists() || !table.exists() {
            return Ok(None);
        }
        let meta: CacheMeta = serde_json::from_str(&fs::read_to_string(&json)?)?;
        if meta.dim != dim || meta.p != p || meta.h_ode != params.h_ode || meta.r_max != params.r_max {
            return Ok(None);
        }
        let mut rd = csv::Reader::from_path(&table)?;
        let (mut u, mut du) = (Vec::new(), Vec::new());
        for row in rd.deserialize() {
            let (_, ui, dui): (f64, f64, f64) = row?;
            u.push(ui);
            du.push(dui);
        }
        if u.len() < 8 {
            return Err(Error::Format(format!("table {} too short", table.display())));
        }
        let mut gs = GroundState::from_table(dim, p, meta.u0, meta.h_ode, meta.r_max, u, du)?;
        gs.decay_const = meta.decay_const;
        Ok(Some(gs))
    }

    /// Load from `dir` when cached, otherwise solve and store.
    pub fn load_or_solve(dir: &Path, dim: usize, p: f64, params: &ShootingParams) -> Result<GroundState> {
        if let Some(gs) = GroundState::load(dir, dim, p, params)? {
            return Ok(gs);
        }
        let gs = solve_ground_state_with(dim, p, *params)?;
        gs.save(dir)?;
        Ok(gs)
    }
}

#[inline]
fn hermite(t: f64, h: f64, y0: f64, m0: f64, y1: f64, m1: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * h * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * h * m1
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheMeta {
    dim: usize,
    p: f64,
    u0: f64,
    decay_const: f64,
    mass2: f64,
    #[serde(rename = "massP1")]
    mass_p1: f64,
    grad2: f64,
    h_ode: f64,
    r_max: f64,
}

/// Paths of the metadata and table files for (dim, p).
pub fn cache_paths(dir: &Path, dim: usize, p: f64) -> (PathBuf, PathBuf) {
    let stem = format!("ground_dim{dim}_p{p}");
    (dir.join(format!("{stem}.json")), dir.join(format!("{stem}.csv")))
}
