//! Norms, weighted energies, coordinate quantities, rate fits and the
//! bootstrap monitor.

mod bootstrap;
mod coords;
mod energies;
mod norms;
mod rates;
mod series;

use thiserror::Error;

use crate::multipliers::WeightError;

pub use bootstrap::{bootstrap_monitor, BootstrapReport};
pub use coords::{coordinate_diagnostics, CoordDiag, ZeroModeHistory};
pub use energies::{
    ck_terms, ck_terms_with, energy_el, energy_el_with, energy_en, energy_en_with, energy_ev,
    symmetrized_z, CkTerm, ElReport, MultiplierTable,
};
pub use norms::{
    flow_norms, gevrey_sobolev_norm, gevrey_sobolev_norm_row, log_gevrey_sobolev_norm,
    project_modes, FlowNorms,
};
pub use rates::{
    geometric_times, linear_regression, rate_fit, RateError, RateFit, Regression, MIN_FIT_SAMPLES,
};
pub use series::{csv_f64, diag_csv, DiagRow, NormSeries, DIAG_SCHEMA};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagError {
    #[error("{0}")]
    Precondition(String),
    #[error("beta = {0} must exceed 1/2 for the weighted energies")]
    BetaTooSmall(f64),
    #[error("insufficient zero-mode history: {0}")]
    InsufficientHistory(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Rate(RateError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
