//! Shared state of one run: the resolved config and the ground-state and solution caches.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use anyhow::{bail, Context as _, Result};
use multibump_core::config::ModelConfig;
use multibump_core::ground_state::GroundState;
use multibump_core::model::Potential;
use multibump_core::reduced_energy::{energy_constants, find_ring_radius_with, EnergyConstants, EnergyReport, PairSum};
use multibump_core::solver::{solve_full, FullSolveSetup, SolutionBundle, SolverParams};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "MULTIBUMP_CACHE";

pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".multibump-cache"))
}

type Slot<T> = Arc<Mutex<Option<Arc<T>>>>;

pub struct Context {
    pub cfg: ModelConfig,
    pub cache_dir: PathBuf,
    ground: Mutex<HashMap<(usize, u64), Slot<(GroundState, EnergyConstants)>>>,
    bundles: Mutex<HashMap<String, Slot<SolutionBundle>>>,
}

/// Fetches the slot for `key`, then fills it at most once; other keys proceed in parallel.
fn memo<K: std::hash::Hash + Eq, T>(map: &Mutex<HashMap<K, Slot<T>>>, key: K, make: impl FnOnce() -> Result<T>) -> Result<Arc<T>> {
    let slot = map.lock().unwrap().entry(key).or_default().clone();
    let mut guard = slot.lock().unwrap();
    if let Some(v) = guard.as_ref() {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    *guard = Some(v.clone());
    Ok(v)
}

impl Context {
    pub fn new(cfg: ModelConfig, cache_dir: &Path) -> Self {
        Context { cfg, cache_dir: cache_dir.to_path_buf(), ground: Mutex::default(), bundles: Mutex::default() }
    }

    /// Ground state and energy constants for (dim, p), from the disk cache when present.
    pub fn ground_state(&self, dim: usize, p: f64) -> Result<Arc<(GroundState, EnergyConstants)>> {
        memo(&self.ground, (dim, p.to_bits()), || {
            let gs = GroundState::load_or_solve(&self.cache_dir, dim, p, &self.cfg.shooting())
                .with_context(|| format!("ground state dim {dim}, p {p}"))?;
            let c = energy_constants(&gs)?;
            Ok((gs, c))
        })
    }

    pub fn planar(&self) -> Result<Arc<(GroundState, EnergyConstants)>> {
        self.ground_state(2, self.cfg.p)
    }

    pub fn pairs(&self) -> PairSum {
        if self.cfg.all_pairs {
            PairSum::AllPairs
        } else {
            PairSum::NearestNeighbor
        }
    }

    /// Reduced-energy maximizer of the planar ring.
    pub fn ring_radius(&self, k: usize) -> Result<EnergyReport> {
        let g = self.planar()?;
        let pot = self.cfg.potential()?;
        Ok(find_ring_radius_with(k, &g.1, &pot, &g.0, &self.cfg.window(k)?, self.pairs())?)
    }

    fn bundle_path(&self, k: usize, h: f64, pot: &Potential) -> PathBuf {
        let c = &self.cfg;
        let g = &c.grid;
        let pairs = if c.all_pairs { "_all" } else { "" };
        self.cache_dir.join(format!(
            "bundle_k{k}_h{h}_s{}_m{}_p{}_alpha{}_a1{}_a2{}_tau{}{pairs}.json",
            g.h_theta_scale, g.margin, c.p, pot.alpha, pot.a1, pot.a2, c.tau
        ))
    }

    /// Ring solution at (k, h): memory, then disk, then `solve_full`.
    pub fn bundle(&self, k: usize, h: f64) -> Result<Arc<SolutionBundle>> {
        if self.cfg.dim != 2 {
            bail!(multibump_core::error::Error::InvalidParameter {
                key: "dim",
                reason: format!("the ring solver is planar; got dim {}", self.cfg.dim),
            });
        }
        let pot = self.cfg.potential()?;
        let path = self.bundle_path(k, h, &pot);
        memo(&self.bundles, path.display().to_string(), || {
            if path.exists() {
                if let Ok(b) = SolutionBundle::load(&path) {
                    return Ok(b);
                }
            }
            let g = self.planar()?;
            let r_k = self.ring_radius(k)?.r_k;
            let setup = FullSolveSetup {
                k,
                h,
                h_theta_scale: self.cfg.grid.h_theta_scale,
                margin: self.cfg.grid.margin,
                r_reduced: r_k,
                gs: &g.0,
                pot,
                params: SolverParams { tau: self.cfg.tau, ..SolverParams::default() },
            };
            let (b, _) = solve_full(&setup).with_context(|| format!("ring solve k {k}, h {h}"))?;
            std::fs::create_dir_all(&self.cache_dir)?;
            b.save(&path)?;
            Ok(b)
        })
    }
}
