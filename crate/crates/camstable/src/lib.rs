//! Simulation and estimation toolkit for multiplicative-noise linear SDEs
//! with heavy-tailed stationary laws, their reduction to alpha-stable-driven
//! slow dynamics, and the statistics needed to verify that reduction
//! (empirical characteristic functions, autocodifference, tail fits, scale
//! estimation from time integrals).

pub mod averaging;
pub mod cam;
pub mod cli;
pub mod error;
pub mod oulp;
pub mod quad;
pub mod rng;
pub mod sigma_est;
pub mod special;
pub mod stable;
pub mod stats;
pub mod traj;

pub use error::{Error, Result};
