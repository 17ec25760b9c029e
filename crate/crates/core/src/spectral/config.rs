use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::multipliers::{MultiplierParams, ParamError, ParamsBuilder};

use super::{GridSpec, SpectralError};

/// Named initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `ω = ε e^{−y²/2} cos x`, `θ = 0`.
    GaussianStripe,
    /// `ω = ε e^{−y²/2} cos x`, `θ = ε_θ e^{−y²/2} cos x`.
    Paired,
    /// Random phases with `|f̂| = ε e^{−λ0(|k|+|η|)^s}` in both fields.
    RandomGevrey,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Self::GaussianStripe, Self::Paired, Self::RandomGevrey];

    pub fn name(self) -> &'static str {
        match self {
            Self::GaussianStripe => "gaussian-stripe",
            Self::Paired => "paired",
            Self::RandomGevrey => "random-gevrey",
        }
    }

    /// Data concentrated near `y = 0`, for which the wrap-around guard applies.
    pub fn is_localized(self) -> bool {
        !matches!(self, Self::RandomGevrey)
    }
}

impl FromStr for Preset {
    type Err = SpectralError;
    fn from_str(s: &str) -> Result<Self, SpectralError> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| SpectralError::UnknownPreset(s.to_string()))
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything a simulation needs. `Default` gives the desk-scale reference
/// run (β = 1, ε = 0.005, 256 × 256, L_v = 8π, T = 50).
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub beta: f64,
    pub epsilon: f64,
    /// Amplitude of `θ` for the `paired` preset; `None` reuses `epsilon`.
    pub epsilon_theta: Option<f64>,
    pub s: f64,
    pub lambda0: f64,
    pub lambda_prime: f64,
    pub gamma: f64,
    pub sigma_weight: f64,
    pub q: Option<f64>,
    pub kmax: usize,
    pub nv: usize,
    pub lv: f64,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: f64,
    pub preset: Preset,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    /// Steps between snapshots; 0 disables them.
    pub snapshot_every: usize,
    /// Steps between diagnostic rows.
    pub diag_every: usize,
    /// Weight of the `h` part of `E_v`.
    pub c1: f64,
    pub linear_only: bool,
    /// Shrink steps to the CFL bound instead of failing.
    pub adaptive: bool,
    /// Abort when the wrap-around ratio crosses its threshold; otherwise
    /// only report it.
    pub wrap_abort: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        let w = ParamsBuilder::default();
        Self {
            beta: 1.0,
            epsilon: 0.005,
            epsilon_theta: None,
            s: w.s,
            lambda0: w.lambda0,
            lambda_prime: w.lambda_prime,
            gamma: w.gamma,
            sigma_weight: w.sigma,
            q: None,
            kmax: 128,
            nv: 256,
            lv: 8.0 * PI,
            dt: 0.05,
            t_end: 50.0,
            dealias: 2.0 / 3.0,
            preset: Preset::GaussianStripe,
            seed: 0,
            out_dir: None,
            snapshot_every: 0,
            diag_every: 10,
            c1: 10.0,
            linear_only: false,
            adaptive: false,
            wrap_abort: true,
        }
    }
}

impl SimConfig {
    pub fn grid(&self) -> Result<GridSpec, SpectralError> {
        GridSpec::new(self.kmax, self.nv, self.lv, self.dealias)
    }

    pub fn params_builder(&self) -> ParamsBuilder {
        ParamsBuilder {
            beta: self.beta,
            s: self.s,
            lambda0: self.lambda0,
            lambda_prime: self.lambda_prime,
            gamma: self.gamma,
            sigma: self.sigma_weight,
            q: self.q,
        }
    }

    /// Weight parameters; these require `β > 1/2`.
    pub fn multiplier_params(&self) -> Result<MultiplierParams, ParamError> {
        self.params_builder().build()
    }

    pub fn epsilon_theta(&self) -> f64 {
        self.epsilon_theta.unwrap_or(self.epsilon)
    }

    /// Checks what the solver itself needs. `β` may be anything `≥ 0` here;
    /// the weighted diagnostics are skipped when `β <= 1/2`.
    pub fn validate(&self) -> Result<(), SpectralError> {
        let bad = |m: &str| Err(SpectralError::Config(m.to_string()));
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad("beta must be finite and non-negative");
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon must be finite and non-negative");
        }
        if !self.epsilon_theta().is_finite() {
            return bad("epsilon_theta must be finite");
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive");
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be positive");
        }
        if self.diag_every == 0 {
            return bad("diag_every must be at least 1");
        }
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return bad("c1 must be positive");
        }
        self.grid()?;
        Ok(())
    }

    /// Horizon up to which `max|η_n − k t|` stays within the resolved band,
    /// `(π N_v / L_v) / K_max`.
    pub fn resolution_horizon(&self) -> f64 {
        (PI * self.nv as f64 / self.lv) / self.kmax as f64
    }

    /// `key = value` text that parses back to this configuration.
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("beta", format!("{:?}", self.beta));
        kv("epsilon", format!("{:?}", self.epsilon));
        if let Some(e) = self.epsilon_theta {
            kv("epsilon_theta", format!("{e:?}"));
        }
        kv("s", format!("{:?}", self.s));
        kv("lambda0", format!("{:?}", self.lambda0));
        kv("lambda_prime", format!("{:?}", self.lambda_prime));
        kv("gamma", format!("{:?}", self.gamma));
        kv("sigma_weight", format!("{:?}", self.sigma_weight));
        if let Some(q) = self.q {
            kv("q", format!("{q:?}"));
        }
        kv("kmax", self.kmax.to_string());
        kv("nv", self.nv.to_string());
        kv("lv", format!("{:?}", self.lv));
        kv("dt", format!("{:?}", self.dt));
        kv("t_end", format!("{:?}", self.t_end));
        kv("dealias", format!("{:?}", self.dealias));
        kv("preset", self.preset.to_string());
        kv("seed", self.seed.to_string());
        if let Some(d) = &self.out_dir {
            kv("out_dir", d.display().to_string());
        }
        kv("snapshot_every", self.snapshot_every.to_string());
        kv("diag_every", self.diag_every.to_string());
        kv("c1", format!("{:?}", self.c1));
        kv("linear_only", self.linear_only.to_string());
        kv("adaptive", self.adaptive.to_string());
        kv("wrap_guard", if self.wrap_abort { "abort" } else { "report" }.to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = SimConfig::default();
        c.validate().unwrap();
        let p = c.multiplier_params().unwrap();
        assert_eq!(p.mu(), 14.0);
        assert!((c.resolution_horizon() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("vortex".parse::<Preset>().is_err());
    }

    #[test]
    fn zero_beta_is_a_valid_solver_config() {
        let c = SimConfig {
            beta: 0.0,
            ..SimConfig::default()
        };
        c.validate().unwrap();
        assert!(c.multiplier_params().is_err());
    }
}
