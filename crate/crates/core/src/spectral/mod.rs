//! Pseudo-spectral integration of the perturbation equations in the frame
//! `z = x − ty`, `v = y` that moves with the linear shear.
//!
//! In this frame `∇ ↦ ∇_L = (∂_z, ∂_v − t∂_z)` and the shear acts only
//! through the time-dependent symbol `p = k² + (η − kt)²`, which is applied
//! exactly. Nonlinear products are formed on the grid with the 2/3 rule.

mod config;
mod field;
mod presets;
mod run;
mod solver;

use thiserror::Error;

use crate::diagnostics::DiagError;

pub use config::{Preset, SimConfig};
pub use field::{row_to_physical, row_to_spectral, Fft2, GridSpec, SpectralField};
pub use presets::{gaussian_stripe, init_perturbation, random_gevrey};
pub use run::{diagnose, run, GuardReport, RunOutput, WRAP_THRESHOLD};
pub use solver::{
    biot_savart_sheared, nonlinear_transport, Solver, SolverState, StageRhs, StepInfo,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("grid: {0}")]
    Grid(String),
    #[error("config: {0}")]
    Config(String),
    #[error("unknown preset '{0}' (expected gaussian-stripe, paired or random-gevrey)")]
    UnknownPreset(String),
    #[error("field sizes differ")]
    SizeMismatch,
    #[error("step {dt} exceeds the CFL limit {limit} at t = {t}")]
    Cfl { t: f64, dt: f64, limit: f64 },
    #[error("non-finite state at t = {t}")]
    Blowup { t: f64 },
    #[error("wrap-around amplitude {ratio:e} exceeds the threshold at t = {t}")]
    WrapAround { t: f64, ratio: f64 },
    #[error(transparent)]
    Diagnostics(#[from] DiagError),
    #[error("i/o: {0}")]
    Io(String),
}
