//! Single-mode dynamics of the linearized system
//!
//! ```text
//! ∂_t Ω̂ = −i β² k Θ̂,    ∂_t Θ̂ = −(i k / p) Ω̂,    p = k² + (η − k t)²,
//! ```
//!
//! its symmetrized variables and pointwise energy, and ensemble norms over a
//! band of vertical frequencies.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagnostics::{rate_fit, RateError, RateFit};
use crate::multipliers::{dtp_over_kp, p_symbol};
use crate::ode::{Dopri5, OdeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinearError {
    #[error("horizontal wavenumber k = 0 is not a dynamic mode")]
    ZeroWavenumber,
    #[error("beta = {0} does not exceed 1/2; the energy functional is not coercive")]
    BetaTooSmall(f64),
    #[error("integration of mode (k = {k}, eta = {eta}) failed: {source}")]
    Integration {
        k: i64,
        eta: f64,
        #[source]
        source: OdeError,
    },
    #[error("invalid ensemble setup: {0}")]
    Setup(String),
    #[error("rate fit for {norm}: {source}")]
    Fit {
        norm: &'static str,
        #[source]
        source: RateError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub k: i64,
    pub eta: f64,
    pub t: f64,
    pub omega_hat: C64,
    pub theta_hat: C64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetrizedState {
    pub z: C64,
    pub q: C64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEnergy {
    pub e: f64,
    /// `½(1 − 1/(2β))(|Z|² + |Q|²)`
    pub coercivity_low: f64,
    /// `½(1 + 1/(2β))(|Z|² + |Q|²)`
    pub coercivity_high: f64,
}

fn check_k(k: i64) -> Result<(), LinearError> {
    if k == 0 {
        Err(LinearError::ZeroWavenumber)
    } else {
        Ok(())
    }
}

/// `(p/k²)^{1/4}`
fn quarter_ratio(k: i64, eta: f64, t: f64) -> f64 {
    let kf = k as f64;
    (p_symbol(k, eta, t) / (kf * kf)).sqrt().sqrt()
}

/// `Z = (p/k²)^{-1/4} Ω̂`, `Q = (p/k²)^{1/4} i k β Θ̂`.
pub fn to_symmetrized(mode: &ModeState, beta: f64) -> Result<SymmetrizedState, LinearError> {
    check_k(mode.k)?;
    let r = quarter_ratio(mode.k, mode.eta, mode.t);
    Ok(SymmetrizedState {
        z: mode.omega_hat / r,
        q: C64::new(0.0, mode.k as f64 * beta) * mode.theta_hat * r,
    })
}

/// Inverse of [`to_symmetrized`]; needs `β ≠ 0`.
pub fn from_symmetrized(
    sym: &SymmetrizedState,
    k: i64,
    eta: f64,
    t: f64,
    beta: f64,
) -> Result<ModeState, LinearError> {
    check_k(k)?;
    let r = quarter_ratio(k, eta, t);
    Ok(ModeState {
        k,
        eta,
        t,
        omega_hat: sym.z * r,
        theta_hat: sym.q / (C64::new(0.0, k as f64 * beta) * r),
    })
}

/// `(∂_t Ω̂, ∂_t Θ̂)`. The `k = 0` mode is stationary.
pub fn mode_rhs(mode: &ModeState, beta: f64) -> (C64, C64) {
    if mode.k == 0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    let kf = mode.k as f64;
    let p = p_symbol(mode.k, mode.eta, mode.t);
    (
        C64::new(0.0, -beta * beta * kf) * mode.theta_hat,
        C64::new(0.0, -kf / p) * mode.omega_hat,
    )
}

/// Velocity `(û^x, û^y) = (i(η − kt)Ω̂/p, −ikΩ̂/p)` from `Ψ̂ = −Ω̂/p`.
/// Zero where `p = 0`.
pub fn mode_velocity(mode: &ModeState) -> (C64, C64) {
    let p = p_symbol(mode.k, mode.eta, mode.t);
    if p == 0.0 {
        return (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    }
    let kf = mode.k as f64;
    let shear = mode.eta - kf * mode.t;
    (
        C64::new(0.0, shear / p) * mode.omega_hat,
        C64::new(0.0, -kf / p) * mode.omega_hat,
    )
}

/// `E = ½[|Z|² + |Q|² + (1/(2β)) Re(∂_t p/(|k| p^{1/2}) Z Q̄)]`.
pub fn mode_energy(
    sym: &SymmetrizedState,
    k: i64,
    eta: f64,
    t: f64,
    beta: f64,
) -> Result<ModeEnergy, LinearError> {
    if !(beta > 0.5) {
        return Err(LinearError::BetaTooSmall(beta));
    }
    let g = dtp_over_kp(k, eta, t).map_err(|_| LinearError::ZeroWavenumber)?;
    let n2 = sym.z.norm_sqr() + sym.q.norm_sqr();
    let cross = g * (sym.z * sym.q.conj()).re / (2.0 * beta);
    Ok(ModeEnergy {
        e: 0.5 * (n2 + cross),
        coercivity_low: 0.5 * (1.0 - 0.5 / beta) * n2,
        coercivity_high: 0.5 * (1.0 + 0.5 / beta) * n2,
    })
}

/// Multiplicative band for `E(t)/E(0)` in the form
/// `[exp(−2/(1+2β)), exp(2/(2β−1))]`.
///
/// The lower end is not implied by the Gronwall argument; see
/// [`gronwall_band_symmetric`] for the band that is.
pub fn gronwall_band(beta: f64) -> Result<(f64, f64), LinearError> {
    if !(beta > 0.5) {
        return Err(LinearError::BetaTooSmall(beta));
    }
    Ok(((-2.0 / (1.0 + 2.0 * beta)).exp(), (2.0 / (2.0 * beta - 1.0)).exp()))
}

/// `[exp(−2/(2β−1)), exp(2/(2β−1))]`: from `|dE/dt| <= |∂_t g| E / (2(2β−1))`
/// with `g = ∂_t p/(|k|p^{1/2})`, `∂_t g > 0` and total variation of `g` at
/// most 4.
pub fn gronwall_band_symmetric(beta: f64) -> Result<(f64, f64), LinearError> {
    if !(beta > 0.5) {
        return Err(LinearError::BetaTooSmall(beta));
    }
    let x = 2.0 / (2.0 * beta - 1.0);
    Ok(((-x).exp(), x.exp()))
}

fn pack(m: &ModeState) -> [f64; 4] {
    [m.omega_hat.re, m.omega_hat.im, m.theta_hat.re, m.theta_hat.im]
}

fn unpack(k: i64, eta: f64, t: f64, y: &[f64; 4]) -> ModeState {
    ModeState {
        k,
        eta,
        t,
        omega_hat: C64::new(y[0], y[1]),
        theta_hat: C64::new(y[2], y[3]),
    }
}

fn solver(tol: f64, mode0: &ModeState) -> Dopri5 {
    let scale = mode0.omega_hat.norm().max(mode0.theta_hat.norm());
    let atol = if scale > 0.0 { tol * scale * 1e-3 } else { tol };
    Dopri5::new(tol, atol)
}

/// Integrates from `mode0.t` to `t1` and returns every accepted step
/// (including both endpoints). Steps are capped at `0.1(1 + |t − η/k|)`.
pub fn integrate_mode(
    mode0: &ModeState,
    beta: f64,
    t1: f64,
    tol: f64,
) -> Result<Vec<ModeState>, LinearError> {
    integrate_inner(mode0, beta, t1, tol, &[], false)
}

/// Like [`integrate_mode`] but returns the state only at `times` (each hit
/// exactly, in the order given after sorting).
pub fn integrate_mode_at(
    mode0: &ModeState,
    beta: f64,
    times: &[f64],
    tol: f64,
) -> Result<Vec<ModeState>, LinearError> {
    let t1 = times.iter().copied().fold(mode0.t, f64::max);
    integrate_inner(mode0, beta, t1, tol, times, true)
}

fn integrate_inner(
    mode0: &ModeState,
    beta: f64,
    t1: f64,
    tol: f64,
    stops: &[f64],
    only_stops: bool,
) -> Result<Vec<ModeState>, LinearError> {
    check_k(mode0.k)?;
    let (k, eta) = (mode0.k, mode0.eta);
    let kf = k as f64;
    let center = eta / kf;
    let mut wanted: Vec<f64> = stops.to_vec();
    wanted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::new();
    let mut next = 0usize;
    let rhs = |t: f64, y: &[f64; 4]| {
        let p = p_symbol(k, eta, t);
        let b2k = beta * beta * kf;
        // Ω' = −iβ²kΘ, Θ' = −(ik/p)Ω
        [b2k * y[3], -b2k * y[2], kf / p * y[1], -kf / p * y[0]]
    };
    let observer = |t: f64, y: &[f64; 4]| {
        if only_stops {
            while next < wanted.len() && wanted[next] <= t {
                if wanted[next] == t {
                    out.push(unpack(k, eta, t, y));
                }
                next += 1;
            }
        } else {
            out.push(unpack(k, eta, t, y));
        }
    };
    solver(tol, mode0)
        .solve(
            rhs,
            mode0.t,
            pack(mode0),
            t1,
            |t| 0.1 * (1.0 + (t - center).abs()),
            &wanted,
            observer,
        )
        .map_err(|source| LinearError::Integration { k, eta, source })?;
    Ok(out)
}

/// Initial data of an ensemble: `Ω̂(η) = exp(−η²/(2w²))` and
/// `Θ̂ = theta_factor · Ω̂`, identical for every `k` in the set.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub beta: f64,
    pub eta_max: f64,
    pub n_eta: usize,
    pub k_set: Vec<i64>,
    pub width: f64,
    pub theta_factor: C64,
    pub times: Vec<f64>,
    pub tol: f64,
}

/// Squared-norm series of the ensemble; `series.*[i]` belongs to `t[i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearSeries {
    pub t: Vec<f64>,
    pub theta_neq: Vec<f64>,
    pub ux_neq: Vec<f64>,
    pub uy: Vec<f64>,
    pub omega_neq: Vec<f64>,
    pub grad_l_theta: Vec<f64>,
}

impl LinearSeries {
    pub const NAMES: [&'static str; 5] = [
        "norm_theta_neq",
        "norm_ux_neq",
        "norm_uy",
        "norm_omega_neq",
        "norm_gradL_theta",
    ];

    pub fn columns(&self) -> [&Vec<f64>; 5] {
        [
            &self.theta_neq,
            &self.ux_neq,
            &self.uy,
            &self.omega_neq,
            &self.grad_l_theta,
        ]
    }
}

/// Integrates every `(k, η_j)` mode and assembles the `L²` norms
/// `(Σ_k ∫ |f̂|² dη)^{1/2}` by the trapezoid rule on the uniform `η` grid.
///
/// Modes run in parallel on the current rayon pool; the sum is taken in a
/// fixed order, so the result does not depend on the thread count.
pub fn ensemble_norms(spec: &EnsembleSpec) -> Result<LinearSeries, LinearError> {
    if spec.n_eta < 2 || spec.k_set.is_empty() || spec.times.is_empty() {
        return Err(LinearError::Setup(
            "need at least two eta points, one k and one output time".into(),
        ));
    }
    if spec.k_set.contains(&0) {
        return Err(LinearError::ZeroWavenumber);
    }
    let mut times = spec.times.clone();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let de = 2.0 * spec.eta_max / (spec.n_eta - 1) as f64;
    let modes: Vec<(i64, usize)> = spec
        .k_set
        .iter()
        .flat_map(|&k| (0..spec.n_eta).map(move |j| (k, j)))
        .collect();
    let nt = times.len();
    let per_mode: Vec<Vec<[f64; 5]>> = modes
        .par_iter()
        .map(|&(k, j)| {
            let eta = -spec.eta_max + de * j as f64;
            let weight = if j == 0 || j == spec.n_eta - 1 { 0.5 * de } else { de };
            let amp = (-eta * eta / (2.0 * spec.width * spec.width)).exp();
            if amp == 0.0 {
                return Ok(vec![[0.0; 5]; nt]);
            }
            let m0 = ModeState {
                k,
                eta,
                t: 0.0,
                omega_hat: C64::new(amp, 0.0),
                theta_hat: spec.theta_factor * amp,
            };
            let traj = integrate_mode_at(&m0, spec.beta, &times, spec.tol)?;
            Ok(traj
                .iter()
                .map(|m| {
                    let (ux, uy) = mode_velocity(m);
                    let p = p_symbol(m.k, m.eta, m.t);
                    [
                        weight * m.theta_hat.norm_sqr(),
                        weight * ux.norm_sqr(),
                        weight * uy.norm_sqr(),
                        weight * m.omega_hat.norm_sqr(),
                        weight * p * m.theta_hat.norm_sqr(),
                    ]
                })
                .collect())
        })
        .collect::<Result<_, LinearError>>()?;
    let mut acc = vec![[0.0f64; 5]; nt];
    for m in &per_mode {
        for (a, v) in acc.iter_mut().zip(m) {
            for c in 0..5 {
                a[c] += v[c];
            }
        }
    }
    let col = |c: usize| acc.iter().map(|a| a[c].sqrt()).collect::<Vec<_>>();
    Ok(LinearSeries {
        t: times.clone(),
        theta_neq: col(0),
        ux_neq: col(1),
        uy: col(2),
        omega_neq: col(3),
        grad_l_theta: col(4),
    })
}

/// Ensemble norms and their fitted exponents on `window`, in the order of
/// [`LinearSeries::NAMES`].
pub fn ensemble_rates(
    spec: &EnsembleSpec,
    window: (f64, f64),
) -> Result<(LinearSeries, [RateFit; 5]), LinearError> {
    let series = ensemble_norms(spec)?;
    let cols = series.columns();
    let mut fits = Vec::with_capacity(5);
    for (name, col) in LinearSeries::NAMES.iter().zip(cols) {
        fits.push(
            rate_fit(&series.t, col, window).map_err(|source| LinearError::Fit { norm: name, source })?,
        );
    }
    let fits: [RateFit; 5] = fits.try_into().expect("five norms");
    Ok((series, fits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn symmetrized_examples() {
        let m = ModeState { k: 1, eta: 0.0, t: 0.0, omega_hat: c(1.0, 0.0), theta_hat: c(1.0, 0.0) };
        let s = to_symmetrized(&m, 1.0).unwrap();
        assert_eq!((s.z, s.q), (c(1.0, 0.0), c(0.0, 1.0)));
        let m = ModeState { k: 2, eta: 12.0, t: 0.0, omega_hat: c(1.0, 0.0), theta_hat: c(0.0, 0.0) };
        let s = to_symmetrized(&m, 1.0).unwrap();
        assert!((s.z.re - 37f64.powf(-0.25)).abs() < 1e-15);
        assert_eq!(s.q, c(0.0, 0.0));
        let z = ModeState { k: 0, ..m };
        assert_eq!(to_symmetrized(&z, 1.0), Err(LinearError::ZeroWavenumber));
    }

    #[test]
    fn rhs_examples() {
        let m = ModeState { k: 1, eta: 0.0, t: 0.0, omega_hat: c(0.0, 0.0), theta_hat: c(1.0, 0.0) };
        assert_eq!(mode_rhs(&m, 2.0), (c(0.0, -4.0), c(0.0, 0.0)));
        let m = ModeState { omega_hat: c(1.0, 0.0), theta_hat: c(0.0, 0.0), ..m };
        assert_eq!(mode_rhs(&m, 1.0), (c(0.0, 0.0), c(0.0, -1.0)));
    }

    #[test]
    fn velocity_examples() {
        let m = ModeState { k: 1, eta: 0.0, t: 0.0, omega_hat: c(1.0, 0.0), theta_hat: c(0.0, 0.0) };
        assert_eq!(mode_velocity(&m), (c(0.0, 0.0), c(0.0, -1.0)));
    }

    #[test]
    fn energy_examples() {
        let s = SymmetrizedState { z: c(1.0, 0.0), q: c(0.0, 1.0) };
        assert_eq!(mode_energy(&s, 1, 0.0, 0.0, 1.0).unwrap().e, 1.0);
        let s = SymmetrizedState { z: c(1.0, 0.0), q: c(1.0, 0.0) };
        // Large η at t = 0: the cross factor tends to −2.
        let e = mode_energy(&s, 1, 1e9, 0.0, 1.0).unwrap().e;
        assert!((e - 0.5).abs() < 1e-9);
        assert!(mode_energy(&s, 1, 0.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn band_values() {
        let (lo, hi) = gronwall_band(1.0).unwrap();
        assert!((lo - 0.513417119032592).abs() < 1e-12);
        assert!((hi - 7.38905609893065).abs() < 1e-12);
        let (lo, hi) = gronwall_band(1e8).unwrap();
        assert!((lo - 1.0).abs() < 1e-7 && (hi - 1.0).abs() < 1e-7);
        assert!(gronwall_band(0.5).is_err());
    }

    #[test]
    fn zero_data_stays_zero() {
        let m = ModeState { k: 1, eta: 10.0, t: 0.0, omega_hat: c(0.0, 0.0), theta_hat: c(0.0, 0.0) };
        let tr = integrate_mode(&m, 1.0, 100.0, 1e-10).unwrap();
        assert!(tr.iter().all(|s| s.omega_hat.norm() == 0.0 && s.theta_hat.norm() == 0.0));
    }

    #[test]
    fn sample_times_are_hit() {
        let m = ModeState { k: 1, eta: 10.0, t: 0.0, omega_hat: c(1.0, 0.0), theta_hat: c(0.0, 0.0) };
        let tr = integrate_mode_at(&m, 1.0, &[3.0, 1.0, 10.0], 1e-10).unwrap();
        let ts: Vec<f64> = tr.iter().map(|s| s.t).collect();
        assert_eq!(ts, vec![1.0, 3.0, 10.0]);
    }
}
