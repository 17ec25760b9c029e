//! `key = value` configuration files.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::multipliers::MultiplierParams;
use crate::spectral::SimConfig;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Every accepted key with its default and meaning, in `--help` order.
pub const CONFIG_KEYS: &[(&str, &str, &str)] = &[
    ("beta", "1", "buoyancy frequency, must exceed 1/2"),
    ("epsilon", "0.005", "amplitude of the initial perturbation"),
    ("epsilon_theta", "epsilon", "amplitude of theta for the paired preset"),
    ("s", "0.6", "Gevrey index, in (1/2, 1]"),
    ("lambda0", "1", "initial Gevrey radius; also the decay rate of random-gevrey data"),
    ("lambda_prime", "0.2", "lower Gevrey radius, below lambda0"),
    ("gamma", "1.5", "weight exponent in (1, 2); sets mu = 4(1/2 + 2 gamma)"),
    ("sigma_weight", "20", "Sobolev index of the multiplier A, above 16"),
    ("q", "auto", "decay exponent of lambda(t), in (1/2, 1/4 + s/2]; auto = 1/4 + s/2"),
    ("kmax", "128", "z-modes: the grid has 2 kmax points in z"),
    ("nv", "256", "v-grid points (even)"),
    ("lv", "8pi", "v-period; a number, optionally followed by pi"),
    ("dt", "0.05", "time step"),
    ("t_end", "50", "final time"),
    ("dealias", "0.6666666666666666", "retained fraction of each axis"),
    ("preset", "gaussian-stripe", "gaussian-stripe, paired or random-gevrey"),
    ("seed", "0", "64-bit seed of the ChaCha8 generator"),
    ("out_dir", "(none)", "output directory"),
    ("snapshot_every", "0", "steps between snapshots, 0 for none"),
    ("diag_every", "10", "steps between diagnostic rows"),
    ("c1", "10", "weight C1 of the h part of E_v"),
    ("linear_only", "false", "drop the nonlinear transport"),
    ("adaptive", "false", "shrink steps to the CFL limit instead of failing"),
    ("wrap_guard", "abort", "abort or report when the field near |v| = lv/2 exceeds 1e-6 of its max"),
];

fn parse_f64(v: &str) -> Result<f64, String> {
    let t = v.trim();
    let (num, pi) = match t.strip_suffix("pi") {
        Some(rest) => (rest.trim(), true),
        None => (t, false),
    };
    let x = if pi && num.is_empty() {
        1.0
    } else {
        num.parse::<f64>().map_err(|_| format!("not a number: '{v}'"))?
    };
    Ok(if pi { x * std::f64::consts::PI } else { x })
}

fn parse_int<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse::<T>().map_err(|_| format!("not a non-negative integer: '{v}'"))
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true or false, got '{v}'")),
    }
}

/// Sets one key. Unknown keys and malformed values are errors.
pub fn apply_key(cfg: &mut SimConfig, key: &str, value: &str) -> Result<(), String> {
    let v = value.trim();
    match key.trim() {
        "beta" => cfg.beta = parse_f64(v)?,
        "epsilon" => cfg.epsilon = parse_f64(v)?,
        "epsilon_theta" => cfg.epsilon_theta = Some(parse_f64(v)?),
        "s" => cfg.s = parse_f64(v)?,
        "lambda0" => cfg.lambda0 = parse_f64(v)?,
        "lambda_prime" => cfg.lambda_prime = parse_f64(v)?,
        "gamma" => cfg.gamma = parse_f64(v)?,
        "sigma_weight" => cfg.sigma_weight = parse_f64(v)?,
        "q" => cfg.q = if v == "auto" { None } else { Some(parse_f64(v)?) },
        "kmax" => cfg.kmax = parse_int(v)?,
        "nv" => cfg.nv = parse_int(v)?,
        "lv" => cfg.lv = parse_f64(v)?,
        "dt" => cfg.dt = parse_f64(v)?,
        "t_end" => cfg.t_end = parse_f64(v)?,
        "dealias" => cfg.dealias = parse_f64(v)?,
        "preset" => cfg.preset = v.parse().map_err(|e: crate::spectral::SpectralError| e.to_string())?,
        "seed" => cfg.seed = parse_int(v)?,
        "out_dir" => cfg.out_dir = Some(PathBuf::from(v)),
        "snapshot_every" => cfg.snapshot_every = parse_int(v)?,
        "diag_every" => cfg.diag_every = parse_int(v)?,
        "c1" => cfg.c1 = parse_f64(v)?,
        "linear_only" => cfg.linear_only = parse_bool(v)?,
        "adaptive" => cfg.adaptive = parse_bool(v)?,
        "wrap_guard" => {
            cfg.wrap_abort = match v {
                "abort" => true,
                "report" => false,
                _ => return Err(format!("wrap_guard is abort or report, got '{v}'")),
            }
        }
        other => return Err(format!("unknown key '{other}'")),
    }
    Ok(())
}

/// Parses `key = value` lines onto `base`; `#` starts a comment.
pub fn parse_config_onto(base: SimConfig, text: &str) -> Result<SimConfig, ConfigError> {
    let mut cfg = base;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return Err(ConfigError::Parse {
                line,
                msg: format!("expected 'key = value', got '{body}'"),
            });
        };
        apply_key(&mut cfg, k, v).map_err(|msg| ConfigError::Parse { line, msg })?;
    }
    Ok(cfg)
}

/// Checks every invariant of the solver and the weights.
pub fn validate_config(cfg: &SimConfig) -> Result<MultiplierParams, ConfigError> {
    let params = cfg
        .multiplier_params()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    cfg.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(params)
}

pub fn parse_config_str(text: &str) -> Result<(SimConfig, MultiplierParams), ConfigError> {
    let cfg = parse_config_onto(SimConfig::default(), text)?;
    let params = validate_config(&cfg)?;
    Ok((cfg, params))
}

pub fn parse_config(path: &Path) -> Result<(SimConfig, MultiplierParams), ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn book_documents_every_key() {
        let book = include_str!("../../../../book/src/config.md");
        for (k, d, _) in CONFIG_KEYS {
            let row = book
                .lines()
                .find(|l| l.starts_with(&format!("| `{k}` |")))
                .unwrap_or_else(|| panic!("{k} missing from config.md"));
            let default = row.split('|').nth(2).unwrap().trim().trim_matches('`');
            assert_eq!(default, *d, "stale default for {k}");
        }
    }

    #[test]
    fn empty_file_gives_defaults() {
        let (c, p) = parse_config_str("").unwrap();
        assert_eq!(c, SimConfig::default());
        assert_eq!(p.mu(), 14.0);
    }

    #[test]
    fn beta_below_half_is_rejected() {
        let e = parse_config_str("beta = 0.4\n").unwrap_err();
        assert_eq!(e, ConfigError::Invalid("beta must exceed 1/2".into()));
    }

    #[test]
    fn gamma_sets_mu() {
        let (_, p) = parse_config_str("gamma = 1.5").unwrap();
        assert_eq!(p.mu(), 14.0);
        let (_, p) = parse_config_str("gamma = 1.25 # comment").unwrap();
        assert_eq!(p.mu(), 12.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_config_str("# header\n\nbeta = 1\nwidth = 3\n").unwrap_err();
        assert_eq!(
            e,
            ConfigError::Parse {
                line: 4,
                msg: "unknown key 'width'".into()
            }
        );
        let e = parse_config_str("kmax = -3").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 1, .. }));
        let e = parse_config_str("just words").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 1, .. }));
    }

    #[test]
    fn lv_accepts_multiples_of_pi() {
        let (c, _) = parse_config_str("lv = 4pi").unwrap();
        assert_eq!(c.lv, 4.0 * std::f64::consts::PI);
        let (c, _) = parse_config_str("lv = pi").unwrap();
        assert_eq!(c.lv, std::f64::consts::PI);
    }

    #[test]
    fn echo_round_trips() {
        let text = "beta = 2.5\nepsilon = 0.001\nkmax = 16\nnv = 32\nlv = 3pi\npreset = random-gevrey\nseed = 18446744073709551615\nq = 0.52\nlinear_only = true\n";
        let (c, _) = parse_config_str(text).unwrap();
        let (again, _) = parse_config_str(&c.to_config_text()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn every_key_is_accepted() {
        let mut c = SimConfig::default();
        for (k, _, _) in CONFIG_KEYS {
            let v = match *k {
                "preset" => "paired",
                "out_dir" => "x",
                "linear_only" | "adaptive" => "true",
                "q" => "auto",
                "wrap_guard" => "report",
                _ => "3",
            };
            apply_key(&mut c, k, v).unwrap();
        }
    }
}
