pub mod error;
pub mod ground_state;
pub mod numerics;
pub mod model;
pub mod reduced_energy;
pub mod angular;
pub mod discretization;
pub mod assembly;
pub mod fast_solver;
pub mod krylov;
pub mod solver;
pub mod spectral;
pub mod pohozaev;
pub mod two_ring;
pub mod config;
