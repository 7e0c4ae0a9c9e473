//! Potential, ring geometry and the radius window.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// V(r) = 1 + a1/r^α + a2/r^{α+1} for r >= core; frozen at V(core) inside the core.
///
/// Only the far field of V is prescribed; the core keeps V finite at the origin of the
/// PDE grid and in ℝ^N quadratures. Bumps sit at r >= 8 where the core is invisible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    pub a1: f64,
    pub a2: f64,
    pub alpha: f64,
    pub core: f64,
}

/// Default radius below which V is held constant.
pub const DEFAULT_CORE: f64 = 1.0;

impl Potential {
    /// Validated constructor: a1 > 0 and α > max(4/(p-1), 2).
    pub fn new(a1: f64, a2: f64, alpha: f64, p: f64) -> Result<Self> {
        if !(a1 > 0.0) {
            return Err(Error::InvalidParameter { key: "a1", reason: format!("{a1} must be positive") });
        }
        let bound = (4.0 / (p - 1.0)).max(2.0);
        if !(alpha > bound) {
            return Err(Error::InvalidParameter {
                key: "alpha",
                reason: format!("{alpha} must exceed max(4/(p-1), 2) = {bound} for p = {p}"),
            });
        }
        Ok(Potential { a1, a2, alpha, core: DEFAULT_CORE })
    }

    /// Unvalidated constructor for degenerate members (a1 = 0, V ≡ 1) used in checks.
    pub fn raw(a1: f64, a2: f64, alpha: f64) -> Self {
        Potential { a1, a2, alpha, core: DEFAULT_CORE }
    }

    /// The constant potential V ≡ 1.
    pub fn constant() -> Self {
        Potential::raw(0.0, 0.0, 3.0)
    }

    /// V(r); errors for r <= 0.
    pub fn eval_v(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::DomainError(r));
        }
        Ok(self.v(r))
    }

    /// V'(r), the exact derivative of `eval_v`; errors for r <= 0.
    pub fn eval_dv(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::DomainError(r));
        }
        Ok(self.dv(r))
    }

    /// V(r) - 1 for any r >= 0 (the origin maps into the core).
    #[inline]
    pub fn excess(&self, r: f64) -> f64 {
        let r = r.max(self.core);
        self.a1 * r.powf(-self.alpha) + self.a2 * r.powf(-self.alpha - 1.0)
    }

    /// V(r) for any r >= 0.
    #[inline]
    pub fn v(&self, r: f64) -> f64 {
        1.0 + self.excess(r)
    }

    /// V'(r) for any r >= 0 (zero inside the core).
    #[inline]
    pub fn dv(&self, r: f64) -> f64 {
        if r < self.core {
            return 0.0;
        }
        -self.a1 * self.alpha * r.powf(-self.alpha - 1.0) - self.a2 * (self.alpha + 1.0) * r.powf(-self.alpha - 2.0)
    }

    /// V''(r) for any r >= 0 (zero inside the core).
    #[inline]
    pub fn d2v(&self, r: f64) -> f64 {
        if r < self.core {
            return 0.0;
        }
        let a = self.alpha;
        self.a1 * a * (a + 1.0) * r.powf(-a - 2.0) + self.a2 * (a + 1.0) * (a + 2.0) * r.powf(-a - 3.0)
    }

    /// ∂V/∂y_i at a point y.
    #[inline]
    pub fn grad_component(&self, y: &[f64], i: usize) -> f64 {
        let r = y.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r < self.core {
            return 0.0;
        }
        self.dv(r) * y[i] / r
    }
}

/// k bumps on a circle of radius r in the (y1, y2)-plane of R^dim.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingConfig {
    pub k: usize,
    pub r: f64,
    pub dim: usize,
}

impl RingConfig {
    pub fn new(k: usize, r: f64, dim: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter { key: "k", reason: "must be >= 1".into() });
        }
        if !(r > 0.0) {
            return Err(Error::InvalidParameter { key: "r", reason: format!("{r} must be positive") });
        }
        if dim < 2 {
            return Err(Error::InvalidParameter { key: "dim", reason: "ring needs dim >= 2".into() });
        }
        Ok(RingConfig { k, r, dim })
    }

    pub fn with_radius(&self, r: f64) -> Self {
        RingConfig { r, ..*self }
    }

    /// Angle of bump j (0-based).
    #[inline]
    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.k as f64
    }

    /// Planar coordinates of bump j (0-based).
    #[inline]
    pub fn center(&self, j: usize) -> [f64; 2] {
        let t = self.angle(j);
        [self.r * t.cos(), self.r * t.sin()]
    }
}

/// Inner ring in the (y1, y2)-plane plus n bumps of radius t in the (y3, y4)-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoRingConfig {
    pub inner: RingConfig,
    pub n: usize,
    pub t: f64,
}

impl TwoRingConfig {
    pub fn new(inner: RingConfig, n: usize, t: f64) -> Result<Self> {
        if inner.dim < 4 {
            return Err(Error::DimensionError(inner.dim));
        }
        if n < inner.k || n % 2 != 0 {
            return Err(Error::InvalidParameter { key: "n", reason: format!("{n} must be even and >= k") });
        }
        if !(t > 0.0) {
            return Err(Error::InvalidParameter { key: "t", reason: format!("{t} must be positive") });
        }
        Ok(TwoRingConfig { inner, n, t })
    }
}

/// Bump centres x_j = (r cos 2(j-1)π/k, r sin 2(j-1)π/k, 0, ...).
pub fn ring_points(cfg: &RingConfig) -> Vec<Vec<f64>> {
    (0..cfg.k)
        .map(|j| {
            let mut x = vec![0.0; cfg.dim];
            let [a, b] = cfg.center(j);
            x[0] = a;
            x[1] = b;
            x
        })
        .collect()
}

/// Inner ring points followed by p_j = (0, 0, t cos 2(j-1)π/n, t sin 2(j-1)π/n, 0, ...).
pub fn two_ring_points(cfg: &TwoRingConfig) -> Vec<Vec<f64>> {
    let mut pts = ring_points(&cfg.inner);
    for j in 0..cfg.n {
        let th = 2.0 * PI * j as f64 / cfg.n as f64;
        let mut x = vec![0.0; cfg.inner.dim];
        x[2] = cfg.t * th.cos();
        x[3] = cfg.t * th.sin();
        pts.push(x);
    }
    pts
}

/// Nearest-neighbour spacing 2r sin(π/k).
pub fn bump_spacing(cfg: &RingConfig) -> f64 {
    let d = 2.0 * cfg.r * (PI / cfg.k as f64).sin();
    debug_assert!((d - bump_spacing_surrogate(cfg)).abs() <= 2.0 * PI * cfg.r * (PI / cfg.k as f64).powi(2) / 6.0 * 1.01);
    d
}

/// The arc-length surrogate 2πr/k.
pub fn bump_spacing_surrogate(cfg: &RingConfig) -> f64 {
    2.0 * PI * cfg.r / cfg.k as f64
}

/// S_k = [(α/2π - β) k ln k, (α/2π + β) k ln k].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusWindow {
    pub lo: f64,
    pub hi: f64,
    pub beta: f64,
}

impl RadiusWindow {
    pub fn contains(&self, r: f64) -> bool {
        self.lo <= r && r <= self.hi
    }

    /// The window with both ends moved outward by `frac` of themselves.
    pub fn widened(&self, frac: f64) -> (f64, f64) {
        (self.lo * (1.0 - frac), self.hi * (1.0 + frac))
    }
}

/// The default half-width 0.15·α/2π.
pub fn default_beta(alpha: f64) -> f64 {
    0.15 * alpha / (2.0 * PI)
}

pub fn radius_window(k: usize, alpha: f64, beta: f64) -> Result<RadiusWindow> {
    if k < 2 {
        return Err(Error::InvalidParameter { key: "k", reason: "window needs k >= 2".into() });
    }
    let c = alpha / (2.0 * PI);
    if beta >= c {
        return Err(Error::BetaTooLarge { beta, limit: c });
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter { key: "beta", reason: format!("{beta} must be positive") });
    }
    let s = k as f64 * (k as f64).ln();
    Ok(RadiusWindow { lo: (c - beta) * s, hi: (c + beta) * s, beta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_values() {
        let v = Potential::new(1.0, 0.0, 3.0, 3.0).unwrap();
        assert!((v.eval_v(2.0).unwrap() - 1.125).abs() < 1e-15);
        assert!((v.eval_dv(2.0).unwrap() + 0.1875).abs() < 1e-15);
        assert!(v.eval_v(0.0).is_err());
        assert!(v.eval_dv(-1.0).is_err());
        let c = Potential::constant();
        assert_eq!(c.eval_v(3.7).unwrap(), 1.0);
        assert_eq!(c.eval_dv(3.7).unwrap(), 0.0);
    }

    #[test]
    fn potential_validation() {
        assert!(Potential::new(1.0, 0.0, 1.5, 3.0).is_err());
        assert!(Potential::new(1.0, 0.0, 3.9, 2.0).is_err());
        assert!(Potential::new(0.0, 0.0, 3.0, 3.0).is_err());
        assert!(Potential::new(1.0, 0.0, 5.0, 2.0).is_ok());
    }

    #[test]
    fn window_values() {
        let w = radius_window(10, 3.0, 0.1).unwrap();
        assert!((w.lo - 8.69).abs() < 0.01);
        assert!((w.hi - 13.30).abs() < 0.01);
        assert!(radius_window(2, 3.0, 0.1).unwrap().lo > 0.0);
        assert!(matches!(radius_window(8, 3.0, 0.5), Err(Error::BetaTooLarge { .. })));
    }
}
