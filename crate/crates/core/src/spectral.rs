//! Edge spectrum of the linearization L_k = -Δ + V - p u_k^{p-1} around a ring solution.
//!
//! The generalized problem A x = λ M x (A = S + M(V - p u^{p-1})) is solved by shift-invert
//! Lanczos in the M-inner product with full reorthogonalization. Spaces:
//! * `Sector`: the even sector, i.e. the symmetric class H_s.
//! * `RotationOdd`: the odd sector, the symmetry block that contains ∂_θ u.
//! * `FullDisk`: the whole disc with no symmetry imposed.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discretization::{star_norm_weighted, Field, SectorGrid, StarNormParams, Symmetry};
use crate::error::{Error, Result};
use crate::fast_solver::PolarPreconditioner;
use crate::krylov::minres;
use crate::model::Potential;
use crate::solver::SolutionBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    Sector,
    RotationOdd,
    FullDisk,
}

impl Space {
    pub fn symmetry(self) -> Symmetry {
        match self {
            Space::Sector => Symmetry::Even,
            Space::RotationOdd => Symmetry::Odd,
            Space::FullDisk => Symmetry::Full,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Space::Sector => "sector",
            Space::RotationOdd => "rotation_odd",
            Space::FullDisk => "full_disk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub max_lanczos: usize,
    /// Relative accuracy of the returned eigenvalues.
    pub eig_tol: f64,
    pub krylov_tol: f64,
    pub krylov_max_iter: usize,
    pub seed: u64,
}

impl Default for SpectralParams {
    fn default() -> Self {
        SpectralParams { max_lanczos: 80, eig_tol: 1e-8, krylov_tol: 1e-12, krylov_max_iter: 600, seed: 7 }
    }
}

/// A = S + diag on one symmetry block, with its mass matrix.
#[derive(Debug)]
pub struct LinearizedOperator {
    pub grid: SectorGrid,
    pub vols: Vec<f64>,
    /// M(V - p u^{p-1}).
    pub diag: Vec<f64>,
    /// u_k lifted to this block's symmetry (for `RotationOdd` the even u on the same rings).
    pub u: Field,
    pc: PolarPreconditioner,
}

impl LinearizedOperator {
    /// y = A x.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.grid.stiffness_apply(x, y);
        for i in 0..x.len() {
            y[i] += self.diag[i] * x[i];
        }
    }

    /// Pointwise L x = M⁻¹ A x.
    pub fn apply_pointwise(&self, x: &Field) -> Field {
        let mut y = vec![0.0; x.values.len()];
        self.apply(&x.values, &mut y);
        y.iter_mut().zip(&self.vols).for_each(|(y, m)| *y /= m);
        Field::new(self.grid, y)
    }

    pub fn m_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.vols.iter().zip(a.iter().zip(b)).map(|(m, (x, y))| m * x * y).sum()
    }

    /// ⟨A x, x⟩ / ⟨M x, x⟩.
    pub fn rayleigh(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; x.len()];
        self.apply(x, &mut y);
        y.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / self.m_inner(x, x)
    }

    /// Solves (A - σM) y = M x.
    fn shifted_solve(&self, sigma: f64, x: &[f64], params: &SpectralParams) -> Result<Vec<f64>> {
        let rhs: Vec<f64> = x.iter().zip(&self.vols).map(|(a, m)| a * m).collect();
        let mut y = vec![0.0; x.len()];
        minres(
            &mut |v, out| {
                self.apply(v, out);
                for i in 0..v.len() {
                    out[i] -= sigma * self.vols[i] * v[i];
                }
            },
            &mut |v, out| self.pc.apply(v, out),
            &rhs,
            &mut y,
            params.krylov_tol,
            params.krylov_max_iter,
        )?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::ShiftSingular(sigma));
        }
        Ok(y)
    }
}

/// Builds L_k around the bundle's solution on the requested symmetry block.
pub fn assemble_linearized(bundle: &SolutionBundle, space: Space) -> LinearizedOperator {
    let u = bundle.u.to_symmetry(Symmetry::Even);
    let u_block = match space {
        Space::Sector => u,
        Space::RotationOdd => {
            // Same rings as the odd grid, but values of the (even) solution.
            let g = u.grid.with_symmetry(Symmetry::Odd);
            let mut values = vec![0.0; g.len()];
            for i in 1..g.m {
                for j in 0..g.n_ang() {
                    values[g.idx(i, j)] = u.node(i as isize, g.angle_index(j) as isize);
                }
            }
            Field::new(g, values)
        }
        Space::FullDisk => u.to_symmetry(Symmetry::Full),
    };
    LinearizedOperator::new(u_block, &bundle.pot, bundle.p)
}

impl LinearizedOperator {
    /// L = -Δ_h + V - p|u|^{p-1} on `u.grid`.
    pub fn new(u: Field, pot: &Potential, p: f64) -> Self {
        let grid = u.grid;
        let vols = grid.volumes();
        let diag = grid
            .polar_nodes()
            .iter()
            .zip(&u.values)
            .zip(&vols)
            .map(|(((rho, _), u), m)| m * (pot.v(*rho) - p * u.abs().powf(p - 1.0)))
            .collect();
        let pc = PolarPreconditioner::new(&grid, |r| pot.v(r), 0.0);
        LinearizedOperator { grid, vols, diag, u, pc }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenPair {
    pub lambda: f64,
    /// Normalized to star norm 1 (if weights are given) or M-norm 1.
    pub field: Field,
    /// Lanczos residual estimate ‖A x - λ M x‖ relative to |λ| ‖x‖.
    pub residual: f64,
}

/// The m eigenpairs of smallest |λ - σ| by shift-invert Lanczos around `sigma`, ordered by |λ|.
pub fn edge_spectrum_at(op: &LinearizedOperator, m: usize, sigma: f64, params: &SpectralParams) -> Result<Vec<EigenPair>> {
    if m == 0 || m > 12 {
        return Err(Error::InvalidParameter { key: "num_eigs", reason: format!("{m} must be in 1..=12") });
    }
    let n = op.grid.len();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nrm = op.m_inner(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    let mut basis: Vec<Vec<f64>> = vec![v];
    let (mut alphas, mut betas): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut sigma = sigma;
    let mut jittered = false;
    loop {
        let j = basis.len() - 1;
        let mut w = match op.shifted_solve(sigma, &basis[j], params) {
            Ok(w) => w,
            Err(Error::KrylovStall { .. }) | Err(Error::ShiftSingular(_)) if !jittered && j == 0 => {
                jittered = true;
                sigma += 1e-6;
                continue;
            }
            Err(Error::KrylovStall { .. }) => return Err(Error::ShiftSingular(sigma)),
            Err(e) => return Err(e),
        };
        let alpha = op.m_inner(&w, &basis[j]);
        // Full reorthogonalization, twice.
        for _ in 0..2 {
            for q in &basis {
                let c = op.m_inner(&w, q);
                w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let beta = op.m_inner(&w, &w).sqrt();
        alphas.push(alpha);
        let steps = alphas.len();
        let t = tridiag_matrix(&alphas, &betas);
        let eig = SymmetricEigen::new(t);
        // Ritz values θ of largest |θ| correspond to λ = σ + 1/θ nearest σ.
        let mut order: Vec<usize> = (0..steps).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].abs().total_cmp(&eig.eigenvalues[a].abs()));
        let converged = steps >= m
            && order.iter().take(m).all(|&i| {
                let theta = eig.eigenvalues[i];
                (beta * eig.eigenvectors[(steps - 1, i)]).abs() <= params.eig_tol * theta.abs()
            });
        if converged || steps >= params.max_lanczos || beta < 1e-14 || steps >= n {
            if !converged && steps >= params.max_lanczos {
                return Err(Error::KrylovStall { iterations: steps, residual: beta });
            }
            let mut pairs: Vec<EigenPair> = order
                .iter()
                .take(m.min(steps))
                .map(|&i| {
                    let theta = eig.eigenvalues[i];
                    let mut x = vec![0.0; n];
                    for (c, q) in basis.iter().enumerate() {
                        let s = eig.eigenvectors[(c, i)];
                        x.iter_mut().zip(q).for_each(|(a, b)| *a += s * b);
                    }
                    let res = (beta * eig.eigenvectors[(steps - 1, i)]).abs() / theta.abs();
                    EigenPair { lambda: sigma + 1.0 / theta, field: Field::new(op.grid, x), residual: res }
                })
                .collect();
            pairs.sort_by(|a, b| a.lambda.abs().total_cmp(&b.lambda.abs()));
            return Ok(pairs);
        }
        betas.push(beta);
        w.iter_mut().for_each(|x| *x /= beta);
        basis.push(w);
    }
}

/// The m smallest-|λ| eigenpairs (shift 0).
pub fn edge_spectrum(op: &LinearizedOperator, m: usize, params: &SpectralParams) -> Result<Vec<EigenPair>> {
    edge_spectrum_at(op, m, 0.0, params)
}

fn tridiag_matrix(alphas: &[f64], betas: &[f64]) -> DMatrix<f64> {
    let n = alphas.len();
    let mut t = DMatrix::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = alphas[i];
        if i + 1 < n {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    t
}

/// Scales a field to star norm 1 for the bundle's ring.
pub fn normalize_star(field: &Field, bundle: &SolutionBundle) -> Result<Field> {
    let w = StarNormParams::for_ring(&bundle.cfg, bundle.params.tau, bundle.p)?.weights(&field.grid);
    let s = star_norm_weighted(&field.values, &w);
    Ok(Field::new(field.grid, field.values.iter().map(|v| v / s).collect()))
}

/// ∂_θ u on the full disc, centred differences.
pub fn rotation_mode(bundle: &SolutionBundle) -> Field {
    bundle.u.to_symmetry(Symmetry::Full).d_theta()
}

/// |⟨a, b⟩_M| / (‖a‖_M ‖b‖_M).
pub fn m_cosine(a: &Field, b: &Field) -> f64 {
    assert_eq!(a.grid, b.grid);
    let ab = a.inner(b);
    (ab / (a.inner(a).sqrt() * b.inner(b).sqrt())).abs()
}

/// ξ = b_m ΣZ_j + ξ* with Σ M Z̃ ξ* = 0 on the even sector of the bundle.
pub fn kernel_decompose(xi: &Field, bundle: &SolutionBundle, gs: &crate::ground_state::GroundState) -> (f64, Field) {
    let fields = crate::assembly::RingFields::assemble(&xi.grid, &bundle.cfg, gs);
    let num = xi.inner(&fields.zt);
    let den = fields.z.inner(&fields.zt);
    let b = num / den;
    let star: Vec<f64> = xi.values.iter().zip(&fields.z.values).map(|(x, z)| x - b * z).collect();
    (b, Field::new(xi.grid, star))
}

/// Summary of a spectral analysis of one bundle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub k: usize,
    pub eigs_sector: Vec<f64>,
    pub eigs_full: Vec<f64>,
    pub full_space: Space,
    /// min |λ| on the symmetric sector.
    pub gap_sector: f64,
    /// min |λ| outside the symmetric class.
    pub full_min: f64,
    pub kernel_overlap: f64,
    pub b_m: f64,
    pub xi_star_norm: f64,
    /// Rayleigh quotient of ΣZ_j on the sector.
    pub rq_z: f64,
    /// |rq_z| / gap_sector.
    pub rq_ratio: f64,
    /// ‖L ∂_θu‖_M / ‖∂_θu‖_M on the full disc (or odd block).
    pub rotation_residual: f64,
}

/// Sector and full-space spectra with the kernel diagnostics.
pub fn analyze(
    bundle: &SolutionBundle,
    gs: &crate::ground_state::GroundState,
    num_eigs: usize,
    full_space: Space,
    params: &SpectralParams,
) -> Result<(SpectrumReport, Vec<EigenPair>, Vec<EigenPair>)> {
    let sector_op = assemble_linearized(bundle, Space::Sector);
    let sector = edge_spectrum(&sector_op, num_eigs, params)?;
    let full_op = assemble_linearized(bundle, full_space);
    let full = edge_spectrum(&full_op, num_eigs, params)?;
    let gap_sector = sector[0].lambda.abs();
    let full_min = full[0].lambda.abs();

    let rot = match full_space {
        Space::FullDisk => rotation_mode(bundle),
        _ => bundle.u.to_symmetry(Symmetry::Even).d_theta(),
    };
    let kernel_overlap = m_cosine(&full[0].field, &rot);
    let lrot = full_op.apply_pointwise(&rot);
    let rotation_residual = (lrot.inner(&lrot) / rot.inner(&rot)).sqrt();

    let mut xi = normalize_star(&sector[0].field, bundle)?;
    let (mut b_m, mut xi_star) = kernel_decompose(&xi, bundle, gs);
    if b_m < 0.0 {
        // Eigenvectors carry no sign; fix it so that b_m >= 0.
        xi.values.iter_mut().for_each(|v| *v = -*v);
        (b_m, xi_star) = kernel_decompose(&xi, bundle, gs);
    }
    let w = StarNormParams::for_ring(&bundle.cfg, bundle.params.tau, bundle.p)?.weights(&xi.grid);
    let xi_star_norm = star_norm_weighted(&xi_star.values, &w);
    let z = crate::assembly::RingFields::assemble(&sector_op.grid, &bundle.cfg, gs).z;
    let rq_z = sector_op.rayleigh(&z.values);
    let mut sector_n = vec![EigenPair { lambda: sector[0].lambda, field: xi, residual: sector[0].residual }];
    for e in &sector[1..] {
        sector_n.push(EigenPair { lambda: e.lambda, field: normalize_star(&e.field, bundle)?, residual: e.residual });
    }
    let report = SpectrumReport {
        k: bundle.cfg.k,
        eigs_sector: sector.iter().map(|e| e.lambda).collect(),
        eigs_full: full.iter().map(|e| e.lambda).collect(),
        full_space,
        gap_sector,
        full_min,
        kernel_overlap,
        b_m,
        xi_star_norm,
        rq_z,
        rq_ratio: rq_z.abs() / gap_sector,
        rotation_residual,
    };
    Ok((report, sector_n, full))
}

/// ∂_θ by trigonometric interpolation on each ring: the exact generator of rotations for the
/// spectral angular operator. Even input gives odd output and vice versa; the Nyquist mode
/// is dropped.
pub fn d_theta_spectral(f: &Field) -> Field {
    let full = f.to_symmetry(Symmetry::Full);
    let g = full.grid;
    let mut fft = crate::angular::RingFft::new(&g);
    let nf = g.n_ang();
    let (mut re, mut im) = (vec![0.0; nf / 2 + 1], vec![0.0; nf / 2 + 1]);
    let mut out = Field::zeros(g);
    for i in 1..g.m {
        let (a, b) = (g.idx(i, 0), g.idx(i, 0) + nf);
        fft.forward_full(&full.values[a..b], &mut re, &mut im);
        for m in 0..=nf / 2 {
            let s = if 2 * m == nf { 0.0 } else { m as f64 / nf as f64 };
            (re[m], im[m]) = (-s * im[m], s * re[m]);
        }
        fft.inverse_full(&re, &im, &mut out.values[a..b]);
    }
    let target = match f.grid.symmetry {
        Symmetry::Even => Symmetry::Odd,
        Symmetry::Odd => Symmetry::Even,
        Symmetry::Full => Symmetry::Full,
    };
    out.to_symmetry(target)
}
