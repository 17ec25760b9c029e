//! Cartesian parameter sweeps over simulation runs.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::diagnostics::{csv_f64, rate_fit};
use crate::spectral::{run, SimConfig};

use super::config::{apply_key, validate_config, ConfigError};

/// One swept key and its values, given as config-file text.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<String>,
}

impl SweepAxis {
    /// Parses `key=v1,v2,...`.
    pub fn parse(spec: &str) -> Result<Self, ConfigError> {
        let (k, v) = spec
            .split_once('=')
            .ok_or_else(|| ConfigError::Invalid(format!("axis '{spec}' is not key=v1,v2,...")))?;
        let values: Vec<String> = v.split(',').map(|s| s.trim().to_string()).collect();
        if values.iter().any(String::is_empty) {
            return Err(ConfigError::Invalid(format!("axis '{spec}' has an empty value")));
        }
        Ok(Self {
            key: k.trim().to_string(),
            values,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub template: SimConfig,
    pub axes: Vec<SweepAxis>,
    /// Runs executed at once.
    pub parallelism: usize,
    /// Rate-fit window applied to every run.
    pub window: (f64, f64),
    pub out_dir: PathBuf,
}

/// Norms whose exponents are aggregated.
pub const SWEEP_NORMS: [&str; 5] = [
    "l2_omega_neq",
    "l2_gradtheta_neq",
    "l2_ux_neq",
    "l2_uy_neq",
    "l2_theta_neq",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub runs: usize,
    /// `(run index, error message)` of every failed run.
    pub failures: Vec<(usize, String)>,
    pub aggregate_csv: String,
    pub aggregate_path: PathBuf,
}

/// Configurations of the sweep in lexicographic order (first axis slowest),
/// each with seed `template.seed + index` and its own output directory.
pub fn expand(spec: &SweepSpec) -> Result<Vec<(Vec<String>, SimConfig)>, ConfigError> {
    if spec.axes.is_empty() || spec.axes.iter().any(|a| a.values.is_empty()) {
        return Err(ConfigError::Invalid("a sweep needs at least one nonempty axis".into()));
    }
    let total: usize = spec.axes.iter().map(|a| a.values.len()).product();
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let mut picks = vec![String::new(); spec.axes.len()];
        for (a, axis) in spec.axes.iter().enumerate().rev() {
            picks[a] = axis.values[rem % axis.values.len()].clone();
            rem /= axis.values.len();
        }
        let mut cfg = spec.template.clone();
        for (axis, v) in spec.axes.iter().zip(&picks) {
            apply_key(&mut cfg, &axis.key, v)
                .map_err(|m| ConfigError::Invalid(format!("axis {}: {m}", axis.key)))?;
        }
        cfg.seed = spec.template.seed.wrapping_add(idx as u64);
        cfg.out_dir = Some(spec.out_dir.join(format!("run_{idx:04}")));
        out.push((picks, cfg));
    }
    Ok(out)
}

/// Runs every configuration with at most `parallelism` at a time, then
/// writes `aggregate.csv`. A failed run is recorded and the sweep goes on.
pub fn sweep(spec: &SweepSpec) -> Result<SweepOutcome, ConfigError> {
    let runs = expand(spec)?;
    std::fs::create_dir_all(&spec.out_dir).map_err(|e| ConfigError::Io {
        path: spec.out_dir.display().to_string(),
        msg: e.to_string(),
    })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.parallelism.max(1))
        .build()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let results: Vec<Result<Vec<f64>, String>> = pool.install(|| {
        runs.par_iter()
            .with_max_len(1)
            .map(|(_, cfg)| {
                validate_config(cfg).map_err(|e| e.to_string())?;
                let out = run(cfg).map_err(|e| e.to_string())?;
                let t: Vec<f64> = out.rows.iter().map(|r| r.t).collect();
                let cols = [
                    |r: &crate::diagnostics::DiagRow| r.l2_omega_neq,
                    |r: &crate::diagnostics::DiagRow| r.l2_gradtheta_neq,
                    |r: &crate::diagnostics::DiagRow| r.l2_ux_neq,
                    |r: &crate::diagnostics::DiagRow| r.l2_uy_neq,
                    |r: &crate::diagnostics::DiagRow| r.l2_theta_neq,
                ];
                Ok(cols
                    .iter()
                    .map(|f| {
                        let v: Vec<f64> = out.rows.iter().map(f).collect();
                        rate_fit(&t, &v, spec.window).map_or(f64::NAN, |r| r.slope)
                    })
                    .collect())
            })
            .collect()
    });

    let mut csv = String::new();
    let keys: Vec<&str> = spec.axes.iter().map(|a| a.key.as_str()).collect();
    let _ = writeln!(
        csv,
        "run,{},seed,status,{}",
        keys.join(","),
        SWEEP_NORMS.map(|n| format!("slope_{n}")).join(",")
    );
    let mut failures = Vec::new();
    for (idx, ((picks, cfg), res)) in runs.iter().zip(&results).enumerate() {
        let (status, slopes) = match res {
            Ok(s) => ("ok".to_string(), s.iter().map(|&x| csv_f64(x)).collect::<Vec<_>>()),
            Err(e) => {
                failures.push((idx, e.clone()));
                ("failed".to_string(), vec!["NaN".to_string(); SWEEP_NORMS.len()])
            }
        };
        let _ = writeln!(
            csv,
            "{idx},{},{},{status},{}",
            picks.join(","),
            cfg.seed,
            slopes.join(",")
        );
    }
    let aggregate_path = spec.out_dir.join("aggregate.csv");
    std::fs::write(&aggregate_path, &csv).map_err(|e| ConfigError::Io {
        path: aggregate_path.display().to_string(),
        msg: e.to_string(),
    })?;
    Ok(SweepOutcome {
        runs: runs.len(),
        failures,
        aggregate_csv: csv,
        aggregate_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(axes: &[&str]) -> SweepSpec {
        SweepSpec {
            template: SimConfig {
                seed: 7,
                ..SimConfig::default()
            },
            axes: axes.iter().map(|a| SweepAxis::parse(a).unwrap()).collect(),
            parallelism: 2,
            window: (1.0, 2.0),
            out_dir: PathBuf::from("/nonexistent"),
        }
    }

    #[test]
    fn expansion_counts_and_orders() {
        let runs = expand(&spec(&["beta=0.6,1,2", "epsilon=0.002,0.005"])).unwrap();
        assert_eq!(runs.len(), 6);
        assert_eq!(runs[1].0, vec!["0.6", "0.005"]);
        assert_eq!(runs[2].1.beta, 1.0);
        assert_eq!(runs[5].1.seed, 12);
        assert!(runs[3].1.out_dir.as_ref().unwrap().ends_with("run_0003"));
    }

    #[test]
    fn bad_axes() {
        assert!(expand(&spec(&[])).is_err());
        assert!(SweepAxis::parse("beta").is_err());
        assert!(SweepAxis::parse("beta=1,,2").is_err());
        assert!(expand(&spec(&["colour=red"])).is_err());
    }
}
