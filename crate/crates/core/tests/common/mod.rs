//! Shared fixtures: the planar ground state and cached ring solutions.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use multibump_core::ground_state::{solve_ground_state, GroundState};
use multibump_core::model::{default_beta, radius_window, Potential};
use multibump_core::reduced_energy::{energy_constants, find_ring_radius};
use multibump_core::solver::{solve_full, FullSolveSetup, SolutionBundle, SolverParams};

pub fn planar() -> &'static GroundState {
    static GS: OnceLock<GroundState> = OnceLock::new();
    GS.get_or_init(|| solve_ground_state(2, 3.0, 30.0, 1e-12).unwrap())
}

pub fn defaults() -> Potential {
    Potential::new(1.0, 0.0, 3.0, 3.0).unwrap()
}

/// Ring solutions shared between tests, keyed by (k, h in thousandths).
pub fn bundle(k: usize, h: f64) -> Arc<SolutionBundle> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Arc<SolutionBundle>>>> = OnceLock::new();
    let key = (k, (h * 1000.0).round() as u64);
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    cache
        .entry(key)
        .or_insert_with(|| {
            let gs = planar();
            let pot = defaults();
            let c = energy_constants(gs).unwrap();
            let w = radius_window(k, 3.0, default_beta(3.0)).unwrap();
            let r_k = find_ring_radius(k, &c, &pot, gs, &w).unwrap().r_k;
            let setup = FullSolveSetup {
                k,
                h,
                h_theta_scale: 1.0,
                margin: 12.0,
                r_reduced: r_k,
                gs,
                pot,
                params: SolverParams::default(),
            };
            Arc::new(solve_full(&setup).unwrap().0)
        })
        .clone()
}

