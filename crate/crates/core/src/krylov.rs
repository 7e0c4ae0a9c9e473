//! Preconditioned MINRES for symmetric (possibly indefinite) systems.

use crate::error::{Error, Result};

/// Outcome of a converged solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovInfo {
    pub iterations: usize,
    /// Estimated ‖r‖_{P} / ‖b‖_{P}.
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves A x = b with SPD preconditioner P ≈ A⁻¹ (both symmetric), starting from x = 0.
///
/// `apply_a(v, out)` computes out = A v; `apply_p(v, out)` computes out = P v.
/// Stops when the preconditioned residual estimate drops below `tol`·‖b‖_P.
pub fn minres(
    apply_a: &mut dyn FnMut(&[f64], &mut [f64]),
    apply_p: &mut dyn FnMut(&[f64], &mut [f64]),
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> Result<KrylovInfo> {
    let n = b.len();
    x.iter_mut().for_each(|v| *v = 0.0);
    let mut y = vec![0.0; n];
    apply_p(b, &mut y);
    let beta1_sq = dot(b, &y);
    if beta1_sq < 0.0 {
        return Err(Error::KrylovStall { iterations: 0, residual: f64::NAN });
    }
    if beta1_sq == 0.0 {
        return Ok(KrylovInfo { iterations: 0, relative_residual: 0.0 });
    }
    let beta1 = beta1_sq.sqrt();
    let mut r1 = b.to_vec();
    let mut r2 = b.to_vec();
    let (mut oldb, mut beta) = (0.0, beta1);
    let (mut dbar, mut epsln) = (0.0, 0.0);
    let mut phibar = beta1;
    let (mut cs, mut sn) = (-1.0, 0.0);
    let mut w = vec![0.0; n];
    let mut w2 = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut av = vec![0.0; n];
    for itn in 1..=max_iter {
        let s = 1.0 / beta;
        for i in 0..n {
            v[i] = s * y[i];
        }
        apply_a(&v, &mut av);
        if itn >= 2 {
            let c = beta / oldb;
            for i in 0..n {
                av[i] -= c * r1[i];
            }
        }
        let alfa = dot(&v, &av);
        let c = alfa / beta;
        for i in 0..n {
            av[i] -= c * r2[i];
        }
        std::mem::swap(&mut r1, &mut r2);
        r2.copy_from_slice(&av);
        apply_p(&r2, &mut y);
        oldb = beta;
        let bsq = dot(&r2, &y);
        if bsq < 0.0 {
            return Err(Error::KrylovStall { iterations: itn, residual: phibar / beta1 });
        }
        beta = bsq.sqrt();

        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        let gamma = gbar.hypot(beta).max(f64::MIN_POSITIVE);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        let denom = 1.0 / gamma;
        for i in 0..n {
            let w1 = w2[i];
            w2[i] = w[i];
            w[i] = (v[i] - oldeps * w1 - delta * w2[i]) * denom;
            x[i] += phi * w[i];
        }
        let rel = phibar / beta1;
        if rel <= tol || beta == 0.0 {
            return Ok(KrylovInfo { iterations: itn, relative_residual: rel });
        }
    }
    Err(Error::KrylovStall { iterations: max_iter, residual: phibar / beta1 })
}

/// Preconditioned conjugate gradients for SPD systems, starting from x = 0.
pub fn pcg(
    apply_a: &mut dyn FnMut(&[f64], &mut [f64]),
    apply_p: &mut dyn FnMut(&[f64], &mut [f64]),
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> Result<KrylovInfo> {
    let n = b.len();
    x.iter_mut().for_each(|v| *v = 0.0);
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    apply_p(&r, &mut z);
    let mut d = z.clone();
    let mut rz = dot(&r, &z);
    let rz0 = rz;
    if rz0 == 0.0 {
        return Ok(KrylovInfo { iterations: 0, relative_residual: 0.0 });
    }
    let mut ad = vec![0.0; n];
    for itn in 1..=max_iter {
        apply_a(&d, &mut ad);
        let dad = dot(&d, &ad);
        if dad <= 0.0 {
            return Err(Error::KrylovStall { iterations: itn, residual: (rz / rz0).sqrt() });
        }
        let a = rz / dad;
        for i in 0..n {
            x[i] += a * d[i];
            r[i] -= a * ad[i];
        }
        apply_p(&r, &mut z);
        let rz_new = dot(&r, &z);
        let rel = (rz_new.abs() / rz0).sqrt();
        if rel <= tol {
            return Ok(KrylovInfo { iterations: itn, relative_residual: rel });
        }
        let bta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            d[i] = z[i] + bta * d[i];
        }
    }
    Err(Error::KrylovStall { iterations: max_iter, residual: (rz / rz0).sqrt() })
}
