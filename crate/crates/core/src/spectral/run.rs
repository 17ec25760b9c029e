use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::diagnostics::{
    ck_terms_with, coordinate_diagnostics, diag_csv, energy_el_with, energy_en_with, energy_ev,
    flow_norms, gevrey_sobolev_norm_row, symmetrized_z, CkTerm, DiagRow, MultiplierTable,
};
use crate::io::{write_snapshot, RunManifest};
use crate::multipliers::MultiplierParams;

use super::presets::init_perturbation;
use super::{row_to_spectral, SimConfig, Solver, SolverState, SpectralError};

/// Abort threshold of the wrap-around guard.
pub const WRAP_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuardReport {
    /// `(π N_v/L_v)/K_max`
    pub resolution_horizon: f64,
    pub horizon_exceeded: bool,
    /// Whether the wrap-around guard was active (localized presets only).
    pub wrap_checked: bool,
    pub max_wrap_ratio: f64,
    /// Set when a checked ratio crossed the threshold in report mode.
    pub wrap_exceeded: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub rows: Vec<DiagRow>,
    pub state: SolverState,
    pub guards: GuardReport,
    pub steps: usize,
    pub files: Vec<PathBuf>,
    pub wall_seconds: f64,
}

/// One diagnostic row. `params = None` leaves the weighted entries `NaN`.
pub fn diagnose(
    solver: &mut Solver,
    state: &SolverState,
    params: Option<&MultiplierParams>,
    energy0: f64,
    flux_integral: f64,
) -> Result<DiagRow, SpectralError> {
    let cfg = solver.config().clone();
    let t = state.t;
    let n = flow_norms(&state.omega, &state.theta, t, cfg.beta);
    let mut row = DiagRow {
        t,
        l2_omega_neq: n.l2_omega_neq,
        l2_gradtheta_neq: n.l2_gradtheta_neq,
        l2_ux_neq: n.l2_ux_neq,
        l2_uy_neq: n.l2_uy_neq,
        l2_theta_neq: n.l2_theta_neq,
        l2_omega: n.l2_omega,
        l2_theta: n.l2_theta,
        energy: n.energy,
        flux: n.flux,
        flux_integral,
        energy_residual: n.energy - energy0 + flux_integral,
        wrap_ratio: solver.wrap_ratio(&state.omega),
        e_l: f64::NAN,
        e_n: f64::NAN,
        e_v: f64::NAN,
        g_lambda_z: f64::NAN,
        g_w_z: f64::NAN,
        g_m_z: f64::NAN,
        vdot_gevrey: f64::NAN,
    };
    let Some(p) = params else {
        return Ok(row);
    };
    let grid = solver.grid();
    let table = MultiplierTable::new(grid, t, p)?;
    row.e_l = energy_el_with(&table, &state.omega, &state.theta, cfg.beta)?.e;
    row.e_n = energy_en_with(&table, &state.omega, &state.theta, cfg.beta)?;
    let z = symmetrized_z(&state.omega, t);
    row.g_lambda_z = ck_terms_with(&table, &z, CkTerm::Lambda)?;
    row.g_w_z = ck_terms_with(&table, &z, CkTerm::W)?;
    row.g_m_z = ck_terms_with(&table, &z, CkTerm::M)?;
    if t > 0.0 && state.history.len() >= 2 {
        let coord = coordinate_diagnostics(&state.history, grid, t)?;
        row.e_v = energy_ev(&coord, p, cfg.c1)?;
        let vd = row_to_spectral(&grid, &coord.v_dot);
        row.vdot_gevrey =
            gevrey_sobolev_norm_row(&grid, &vd, p.lambda_of_t(t), p.sigma() - 6.0, p.s())?;
    }
    Ok(row)
}

fn io_err(e: std::io::Error) -> SpectralError {
    SpectralError::Io(e.to_string())
}

/// Integrates the configured run to `t_end`.
///
/// Diagnostics are taken at `t = 0`, every `diag_every` steps and at the
/// end; the zero mode is recorded after every step. With `out_dir` set the
/// run writes `diagnostics.csv`, any snapshots and `manifest.json` there.
pub fn run(config: &SimConfig) -> Result<RunOutput, SpectralError> {
    let start = Instant::now();
    let mut solver = Solver::new(config)?;
    let mut state = init_perturbation(config)?;
    state.record_zero_mode();
    let params = config.multiplier_params().ok();
    let wrap_checked = config.preset.is_localized();
    let mut guards = GuardReport {
        resolution_horizon: config.resolution_horizon(),
        horizon_exceeded: config.t_end > config.resolution_horizon(),
        wrap_checked,
        max_wrap_ratio: 0.0,
        wrap_exceeded: false,
    };
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir).map_err(io_err)?;
    }
    let mut files = Vec::new();

    let mut rows = Vec::new();
    let first = diagnose(&mut solver, &state, params.as_ref(), 0.0, 0.0)?;
    let energy0 = first.energy;
    let record = |row: DiagRow, guards: &mut GuardReport| -> Result<DiagRow, SpectralError> {
        guards.max_wrap_ratio = guards.max_wrap_ratio.max(row.wrap_ratio);
        if wrap_checked && row.wrap_ratio > WRAP_THRESHOLD {
            guards.wrap_exceeded = true;
            if !config.wrap_abort {
                return Ok(row);
            }
            return Err(SpectralError::WrapAround {
                t: row.t,
                ratio: row.wrap_ratio,
            });
        }
        Ok(row)
    };
    rows.push(record(
        DiagRow {
            energy_residual: 0.0,
            ..first
        },
        &mut guards,
    )?);

    let t_end = config.t_end;
    let mut flux_integral = 0.0;
    let mut step = 0usize;
    while state.t < t_end * (1.0 - 1e-12) {
        let target = if config.adaptive {
            state.t + config.dt
        } else {
            (step + 1) as f64 * config.dt
        };
        let target = target.min(t_end);
        let h = target - state.t;
        let info = solver.step_rk4(&mut state, h)?;
        if !config.adaptive {
            state.t = target;
        }
        flux_integral += info.flux_increment;
        step += 1;
        state.record_zero_mode();
        let done = state.t >= t_end * (1.0 - 1e-12);
        if step % config.diag_every == 0 || done {
            let row = diagnose(&mut solver, &state, params.as_ref(), energy0, flux_integral)?;
            rows.push(record(row, &mut guards)?);
        }
        if let Some(dir) = &config.out_dir {
            if config.snapshot_every > 0 && step % config.snapshot_every == 0 {
                let path = dir.join(format!("snap_{step:06}.bqc"));
                write_snapshot(&state, config.beta, config.epsilon, &path)
                    .map_err(|e| SpectralError::Io(e.to_string()))?;
                files.push(path);
            }
        }
    }

    let wall_seconds = start.elapsed().as_secs_f64();
    if let Some(dir) = &config.out_dir {
        let csv = dir.join("diagnostics.csv");
        std::fs::write(&csv, diag_csv(&rows)).map_err(io_err)?;
        files.insert(0, csv);
        let manifest_path = dir.join("manifest.json");
        let mut listed = files.clone();
        listed.push(manifest_path.clone());
        let m = RunManifest::new(config, guards, step, wall_seconds, &listed);
        std::fs::write(&manifest_path, m.to_json()).map_err(io_err)?;
        files.push(manifest_path);
    }
    Ok(RunOutput {
        rows,
        state,
        guards,
        steps: step,
        files,
        wall_seconds,
    })
}
