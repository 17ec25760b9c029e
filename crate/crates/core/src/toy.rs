//! The resonant / non-resonant toy model and the comparison model for the
//! homogeneous Euler equations.
//!
//! With `σ = η/k²` and `τ = t − η/k`:
//!
//! ```text
//! Boussinesq:  f_R' = σ^{-1/2} (1+τ²)^{-1/4} f_NR,   f_NR' = σ^{1/2} (1+τ²)^{-3/4} f_R
//! Euler:       f_R' = σ^{-1} f_NR,                  f_NR' = σ (1+τ²)^{-1} f_R
//! ```
//!
//! on `τ ∈ [−σ, σ]` from `f_R = f_NR = 1`. Both are integrated in the
//! variables `ln f_R`, `ln f_NR`, which cannot overflow.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostics::linear_regression;
use crate::ode::{Dopri5, OdeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToyError {
    #[error("sigma = {0} must be at least 1")]
    SigmaTooSmall(f64),
    #[error("integration failed at sigma = {sigma}: {source}")]
    Integration {
        sigma: f64,
        #[source]
        source: OdeError,
    },
    #[error("degenerate regression: {0}")]
    DegenerateFit(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToyModel {
    Boussinesq,
    Homogeneous,
}

impl std::str::FromStr for ToyModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "boussinesq" => Ok(Self::Boussinesq),
            "homogeneous" => Ok(Self::Homogeneous),
            _ => Err(format!("unknown toy model '{s}' (expected boussinesq or homogeneous)")),
        }
    }
}

/// `(∂_τ f_R, ∂_τ f_NR)` of the Boussinesq toy model.
pub fn toy_rhs(tau: f64, f_r: f64, f_nr: f64, sigma: f64) -> (f64, f64) {
    let b = 1.0 + tau * tau;
    (
        f_nr * b.powf(-0.25) / sigma.sqrt(),
        f_r * sigma.sqrt() * b.powf(-0.75),
    )
}

/// `(∂_τ f̃_R, ∂_τ f̃_NR)` of the comparison model.
pub fn toy_rhs_homogeneous(tau: f64, f_r: f64, f_nr: f64, sigma: f64) -> (f64, f64) {
    (f_nr / sigma, f_r * sigma / (1.0 + tau * tau))
}

/// Coefficients `(c_R, c_NR)` with `f_R' = c_R f_NR`, `f_NR' = c_NR f_R`.
fn coefficients(model: ToyModel, tau: f64, sigma: f64) -> (f64, f64) {
    match model {
        ToyModel::Boussinesq => toy_rhs(tau, 1.0, 1.0, sigma),
        ToyModel::Homogeneous => toy_rhs_homogeneous(tau, 1.0, 1.0, sigma),
    }
}

/// A trajectory on `[−σ, σ]`, stored as logarithms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToyRun {
    pub model: ToyModel,
    pub sigma: f64,
    pub tau: Vec<f64>,
    pub log_f_r: Vec<f64>,
    pub log_f_nr: Vec<f64>,
    /// `(ln f_R(0), ln f_NR(0))`
    pub log_mid: (f64, f64),
    /// `(ln f_R(σ), ln f_NR(σ))`
    pub log_end: (f64, f64),
}

impl ToyRun {
    pub fn f_r_mid(&self) -> f64 {
        self.log_mid.0.exp()
    }
    pub fn f_nr_mid(&self) -> f64 {
        self.log_mid.1.exp()
    }
    pub fn f_r_end(&self) -> f64 {
        self.log_end.0.exp()
    }
    pub fn f_nr_end(&self) -> f64 {
        self.log_end.1.exp()
    }
}

pub fn integrate_toy(sigma: f64, tol: f64) -> Result<ToyRun, ToyError> {
    integrate_model(ToyModel::Boussinesq, sigma, tol)
}

pub fn integrate_toy_homogeneous(sigma: f64, tol: f64) -> Result<ToyRun, ToyError> {
    integrate_model(ToyModel::Homogeneous, sigma, tol)
}

pub fn integrate_model(model: ToyModel, sigma: f64, tol: f64) -> Result<ToyRun, ToyError> {
    if !(sigma >= 1.0) {
        return Err(ToyError::SigmaTooSmall(sigma));
    }
    let mut run = ToyRun {
        model,
        sigma,
        tau: vec![],
        log_f_r: vec![],
        log_f_nr: vec![],
        log_mid: (0.0, 0.0),
        log_end: (0.0, 0.0),
    };
    // (ln f_R)' = c_R e^{v−u},  (ln f_NR)' = c_NR e^{u−v}
    let rhs = |tau: f64, y: &[f64; 2]| {
        let (cr, cnr) = coefficients(model, tau, sigma);
        let d = y[1] - y[0];
        [cr * d.exp(), cnr * (-d).exp()]
    };
    let observer = |tau: f64, y: &[f64; 2]| {
        if tau == 0.0 {
            run.log_mid = (y[0], y[1]);
        }
        run.tau.push(tau);
        run.log_f_r.push(y[0]);
        run.log_f_nr.push(y[1]);
    };
    let end = Dopri5::new(tol, tol)
        .solve(
            rhs,
            -sigma,
            [0.0, 0.0],
            sigma,
            |tau| 0.1 * (1.0 + tau.abs()),
            &[0.0],
            observer,
        )
        .map_err(|source| ToyError::Integration { sigma, source })?;
    run.log_end = (end[0], end[1]);
    Ok(run)
}

/// Smallest `C` with the envelopes
///
/// ```text
/// f_R  <= C σ^γ       (1+|τ|)^{-γ}        on [−σ, 0],   C σ^γ       (1+|τ|)^{γ+1/2} on [0, σ]
/// f_NR <= C σ^{γ+1/2} (1+|τ|)^{-γ-1/2}    on [−σ, 0],   C σ^{γ+1/2} (1+|τ|)^{γ}     on [0, σ]
/// ```
///
/// along the stored trajectory.
pub fn envelope_constant(run: &ToyRun, gamma: f64) -> f64 {
    let ls = run.sigma.ln();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..run.tau.len() {
        let tau = run.tau[i];
        let l1 = tau.abs().ln_1p();
        let (er, enr) = if tau <= 0.0 {
            (-gamma * l1, -(gamma + 0.5) * l1)
        } else {
            ((gamma + 0.5) * l1, gamma * l1)
        };
        worst = worst
            .max(run.log_f_r[i] - gamma * ls - er)
            .max(run.log_f_nr[i] - (gamma + 0.5) * ls - enr);
    }
    worst.exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    /// Slope of `ln f_R(0)` against `ln σ`.
    pub gamma_r: f64,
    /// Slope of `ln f_NR(0)` against `ln σ`.
    pub gamma_nr_mid: f64,
    /// Slope of `ln f_NR(σ)` against `ln σ`.
    pub gamma_nr_end: f64,
    /// Smallest coefficient of determination of the three fits.
    pub r2: f64,
}

/// Regresses the recorded values of one run per `σ` against `ln σ`.
pub fn fit_growth_exponent(runs: &[ToyRun]) -> Result<GrowthFit, ToyError> {
    let mut sig: Vec<f64> = runs.iter().map(|r| r.sigma).collect();
    sig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sig.dedup();
    if sig.len() < 4 {
        return Err(ToyError::DegenerateFit(format!(
            "need at least four distinct sigma values, got {}",
            sig.len()
        )));
    }
    let x: Vec<f64> = runs.iter().map(|r| r.sigma.ln()).collect();
    let fit = |y: Vec<f64>| {
        linear_regression(&x, &y).ok_or_else(|| ToyError::DegenerateFit("constant sigma".into()))
    };
    let r = fit(runs.iter().map(|r| r.log_mid.0).collect())?;
    let m = fit(runs.iter().map(|r| r.log_mid.1).collect())?;
    let e = fit(runs.iter().map(|r| r.log_end.1).collect())?;
    Ok(GrowthFit {
        gamma_r: r.slope,
        gamma_nr_mid: m.slope,
        gamma_nr_end: e.slope,
        r2: r.r2.min(m.r2).min(e.r2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_examples() {
        assert_eq!(toy_rhs(0.0, 1.0, 1.0, 1.0), (1.0, 1.0));
        assert_eq!(toy_rhs(0.0, 1.0, 0.0, 4.0), (0.0, 2.0));
        for &tau in &[-3.0, 0.5, 40.0] {
            let (a, b) = toy_rhs(tau, 1.0, 1.0, 7.0);
            assert!((a * b - 1.0 / (1.0 + tau * tau)).abs() < 1e-15);
            let (a, b) = toy_rhs_homogeneous(tau, 1.0, 1.0, 7.0);
            assert!((a * b - 1.0 / (1.0 + tau * tau)).abs() < 1e-15);
        }
    }

    #[test]
    fn sigma_one_grows() {
        for run in [integrate_toy(1.0, 1e-10).unwrap(), integrate_toy_homogeneous(1.0, 1e-10).unwrap()] {
            assert!(run.f_r_end() > 1.0 && run.f_nr_end() > 1.0);
            assert!(run.f_r_end().is_finite());
            assert_eq!(run.tau[0], -1.0);
            assert_eq!(*run.tau.last().unwrap(), 1.0);
        }
    }

    #[test]
    fn monotone_in_tau() {
        let run = integrate_toy(100.0, 1e-10).unwrap();
        for w in run.log_f_r.windows(2).chain(run.log_f_nr.windows(2)) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn linear_system_small_sigma_oracle() {
        // fixed-step RK4 in the linear variables, no logarithms
        let sigma = 1.0;
        let n = 200_000;
        let h = 2.0 * sigma / n as f64;
        let (mut a, mut b) = (1.0f64, 1.0f64);
        let f = |tau: f64, a: f64, b: f64| toy_rhs_homogeneous(tau, a, b, sigma);
        for i in 0..n {
            let t = -sigma + h * i as f64;
            let k1 = f(t, a, b);
            let k2 = f(t + h / 2.0, a + h / 2.0 * k1.0, b + h / 2.0 * k1.1);
            let k3 = f(t + h / 2.0, a + h / 2.0 * k2.0, b + h / 2.0 * k2.1);
            let k4 = f(t + h, a + h * k3.0, b + h * k3.1);
            a += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            b += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        let run = integrate_toy_homogeneous(sigma, 1e-12).unwrap();
        assert!((run.f_r_end() / a - 1.0).abs() < 1e-9);
        assert!((run.f_nr_end() / b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_small_sigma() {
        assert_eq!(integrate_toy(0.5, 1e-8), Err(ToyError::SigmaTooSmall(0.5)));
    }
}
