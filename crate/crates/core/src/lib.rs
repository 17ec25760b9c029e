//! Numerical laboratory for small perturbations of stratified Couette flow
//! in the 2D Euler-Boussinesq system.
//!
//! - [`multipliers`]: the symbol `p`, critical times, the Gevrey weights and
//!   multipliers, and randomized checks of their inequalities.
//! - [`linear`]: single Fourier modes of the linearized system and ensembles
//!   of them.
//! - [`toy`]: the resonant/non-resonant two-mode growth model.
//! - [`spectral`]: a pseudo-spectral RK4 solver in the sheared frame.
//! - [`diagnostics`]: physical and weighted norms, rate fits, the bootstrap
//!   monitor.
//! - [`io`]: configuration files, snapshots, manifests and sweeps.
//!
//! ```
//! use bqc::multipliers::p_symbol;
//!
//! assert_eq!(p_symbol(1, 3.0, 3.0), 1.0);
//! ```
//!
//! The guide in `book/` walks through each part; its examples run as
//! doctests of this crate.

pub mod diagnostics;
pub mod io;
pub mod linear;
pub mod multipliers;
pub mod ode;
pub mod spectral;
pub mod toy;

// The book chapters, compiled so that `cargo test --doc` runs their code.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/linear.md")]
    mod linear {}
    #[doc = include_str!("../../../book/src/toy.md")]
    mod toy {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    mod diagnostics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/config.md")]
    mod config {}
    #[doc = include_str!("../../../book/src/reproducibility.md")]
    mod reproducibility {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    mod acceptance {}
}
