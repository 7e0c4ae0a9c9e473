//! Run configuration as read from JSON. Missing keys take the defaults below.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground_state::ShootingParams;
use crate::model::{default_beta, radius_window, Potential, RadiusWindow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Radial step h_ρ.
    pub h: f64,
    /// Angular step as a multiple of h_ρ / r.
    pub h_theta_scale: f64,
    /// Distance kept between the outermost bump and the Dirichlet ring.
    pub margin: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { h: 0.05, h_theta_scale: 1.0, margin: 12.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub dim: usize,
    pub p: f64,
    pub alpha: f64,
    pub a1: f64,
    pub a2: f64,
    pub k: usize,
    pub n: usize,
    /// Window half-width; 0.15·α/2π when absent.
    pub beta: Option<f64>,
    pub tau: f64,
    /// Seed of the randomized negative controls.
    pub seed: u64,
    pub num_eigs: usize,
    pub all_pairs: bool,
    pub grid: GridConfig,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            dim: 2,
            p: 3.0,
            alpha: 3.0,
            a1: 1.0,
            a2: 0.0,
            k: 8,
            n: 32,
            beta: None,
            tau: 0.1,
            seed: 7,
            num_eigs: 2,
            all_pairs: false,
            grid: GridConfig::default(),
        }
    }
}

fn invalid(key: &'static str, reason: String) -> Error {
    Error::InvalidParameter { key, reason }
}

impl ModelConfig {
    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or_else(|| default_beta(self.alpha))
    }

    /// The same config with every optional key filled in.
    pub fn resolved(&self) -> ModelConfig {
        ModelConfig { beta: Some(self.beta()), ..self.clone() }
    }

    /// Checks the keys every command depends on: dimension, exponent and grid.
    pub fn validate_base(&self) -> Result<()> {
        if !(1..=6).contains(&self.dim) {
            return Err(invalid("dim", format!("{} not in 1..=6", self.dim)));
        }
        if !(self.p > 1.0) {
            return Err(invalid("p", format!("{} must exceed 1", self.p)));
        }
        if self.dim >= 3 {
            let critical = (self.dim as f64 + 2.0) / (self.dim as f64 - 2.0);
            if !(self.p < critical) {
                return Err(invalid("p", format!("{} must be below {critical} in dim {}", self.p, self.dim)));
            }
        }
        let g = &self.grid;
        if !(g.h > 0.0 && g.h <= 0.1) {
            return Err(invalid("grid.h", format!("{} not in (0, 0.1]", g.h)));
        }
        if !(g.h_theta_scale > 0.0) {
            return Err(invalid("grid.h_theta_scale", format!("{} must be positive", g.h_theta_scale)));
        }
        if !(g.margin >= 6.0) {
            return Err(invalid("grid.margin", format!("{} must be at least 6", g.margin)));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(invalid("tau", format!("{} not in (0, 1)", self.tau)));
        }
        if !(1..=12).contains(&self.num_eigs) {
            return Err(invalid("num_eigs", format!("{} not in 1..=12", self.num_eigs)));
        }
        Ok(())
    }

    /// Base checks plus the potential's admissibility and the window half-width.
    pub fn potential(&self) -> Result<Potential> {
        self.validate_base()?;
        let pot = Potential::new(self.a1, self.a2, self.alpha, self.p)?;
        if !(self.a2 >= 0.0) {
            return Err(invalid("a2", format!("{} must be non-negative", self.a2)));
        }
        radius_window(2, self.alpha, self.beta())?;
        Ok(pot)
    }

    pub fn window(&self, k: usize) -> Result<RadiusWindow> {
        radius_window(k, self.alpha, self.beta())
    }

    pub fn shooting(&self) -> ShootingParams {
        ShootingParams::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let c: ModelConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, ModelConfig::default());
        assert!(c.potential().is_ok());
    }

    #[test]
    fn partial_grid_keeps_other_defaults() {
        let c: ModelConfig = serde_json::from_str(r#"{"k": 12, "grid": {"h": 0.1}}"#).unwrap();
        assert_eq!(c.k, 12);
        assert_eq!(c.grid.h, 0.1);
        assert_eq!(c.grid.margin, 12.0);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(serde_json::from_str::<ModelConfig>(r#"{"kk": 3}"#).is_err());
    }

    #[test]
    fn offending_key_is_named() {
        let c = ModelConfig { alpha: 1.5, ..ModelConfig::default() };
        match c.potential() {
            Err(Error::InvalidParameter { key, .. }) => assert_eq!(key, "alpha"),
            other => panic!("{other:?}"),
        }
        let c = ModelConfig { dim: 4, p: 3.0, ..ModelConfig::default() };
        assert!(matches!(c.validate_base(), Err(Error::InvalidParameter { key: "p", .. })));
    }

    #[test]
    fn resolved_materializes_beta() {
        let c = ModelConfig::default().resolved();
        assert_eq!(c.beta, Some(default_beta(3.0)));
    }
}
