//! Weighted energies and Cauchy-Kovalevskaya terms.
//!
//! All sums use counting measure on the stored coefficients and are
//! accumulated as `ln Σ e^{x}` in storage order; a value that leaves the
//! `f64` range comes back as `+∞`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::linear::{mode_energy, to_symmetrized, ModeState};
use crate::multipliers::{
    a_time_derivative_at, log_multiplier_a_at, weight_w, AVariant, MultiplierParams,
};
use crate::spectral::{row_to_spectral, GridSpec, SpectralField};

use super::coords::CoordDiag;
use super::norms::LogSum;
use super::DiagError;

/// Per-mode multiplier data at one time, in storage order.
#[derive(Debug, Clone)]
pub struct MultiplierTable {
    pub grid: GridSpec,
    pub t: f64,
    pub log_a: Vec<f64>,
    pub log_a_tilde: Vec<f64>,
    /// `∂_t w / w`
    pub dtw_over_w: Vec<f64>,
    /// `∂_t m / m`
    pub dtm_over_m: Vec<f64>,
    /// `−λ̇ (|k| + |η|)^s`
    pub lambda_rate: Vec<f64>,
}

impl MultiplierTable {
    pub fn new(grid: GridSpec, t: f64, params: &MultiplierParams) -> Result<Self, DiagError> {
        let (lambda, lambda_dot) = (params.lambda_of_t(t), params.lambda_dot(t));
        let rows: Result<Vec<_>, DiagError> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let k = grid.k_of(i / grid.nv);
                let eta = grid.eta_of(i % grid.nv);
                let la = log_multiplier_a_at(k, eta, t, lambda, params, AVariant::A)?;
                let lt = log_multiplier_a_at(k, eta, t, lambda, params, AVariant::ATilde)?;
                let w = weight_w(k, eta, t, params)?;
                let d = a_time_derivative_at(k, eta, t, lambda_dot, params)?;
                Ok((la, lt, w.dtw_over_w, d.m_term, -d.lambda_term))
            })
            .collect();
        let rows = rows?;
        Ok(Self {
            grid,
            t,
            log_a: rows.iter().map(|r| r.0).collect(),
            log_a_tilde: rows.iter().map(|r| r.1).collect(),
            dtw_over_w: rows.iter().map(|r| r.2).collect(),
            dtm_over_m: rows.iter().map(|r| r.3).collect(),
            lambda_rate: rows.iter().map(|r| r.4).collect(),
        })
    }
}

fn check_grid(table: &MultiplierTable, f: &SpectralField) -> Result<(), DiagError> {
    if table.grid != f.grid {
        return Err(DiagError::Precondition("field and table grids differ".into()));
    }
    Ok(())
}

/// `E_L` with its coercivity envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct ElReport {
    pub e: f64,
    /// `½(1 − 1/(2β))(‖AZ‖² + ‖AQ‖²)`
    pub coercivity_low: f64,
    /// `½(1 + 1/(2β))(‖AZ‖² + ‖AQ‖²)`
    pub coercivity_high: f64,
    /// Weighted energy of each mode in storage order; 0 on `k = 0`.
    pub per_mode: Vec<f64>,
}

/// `Z = (p/k²)^{-1/4} Ω̂` on `k ≠ 0`, 0 on `k = 0`.
pub fn symmetrized_z(omega: &SpectralField, t: f64) -> SpectralField {
    let g = omega.grid;
    let mut z = SpectralField::zeros(g);
    for i in 0..g.len() {
        let k = g.k_of(i / g.nv);
        if k == 0 {
            continue;
        }
        let eta = g.eta_of(i % g.nv);
        let p = crate::multipliers::p_symbol(k, eta, t);
        let kf = k as f64;
        z.data[i] = omega.data[i] / (p / (kf * kf)).sqrt().sqrt();
    }
    z
}

/// `E_L = ½[‖AZ‖² + ‖AQ‖² + (1/2β)⟨(∂_t p/(|k|p^{1/2})) AZ, AQ⟩]` over the
/// modes with `k ≠ 0`.
pub fn energy_el_with(
    table: &MultiplierTable,
    omega: &SpectralField,
    theta: &SpectralField,
    beta: f64,
) -> Result<ElReport, DiagError> {
    if !(beta > 0.5) {
        return Err(DiagError::BetaTooSmall(beta));
    }
    check_grid(table, omega)?;
    check_grid(table, theta)?;
    let g = table.grid;
    let t = table.t;
    let mut e = LogSum::new();
    let mut n2 = LogSum::new();
    let mut per_mode = vec![0.0; g.len()];
    for i in 0..g.len() {
        let k = g.k_of(i / g.nv);
        if k == 0 || (omega.data[i] == C64::default() && theta.data[i] == C64::default()) {
            continue;
        }
        let mode = ModeState {
            k,
            eta: g.eta_of(i % g.nv),
            t,
            omega_hat: omega.data[i],
            theta_hat: theta.data[i],
        };
        let sym = to_symmetrized(&mode, beta).map_err(|err| DiagError::Precondition(err.to_string()))?;
        let me = mode_energy(&sym, k, mode.eta, t, beta)
            .map_err(|err| DiagError::Precondition(err.to_string()))?;
        let la2 = 2.0 * table.log_a[i];
        let x = me.e.ln() + la2;
        per_mode[i] = x.exp();
        e.push(x);
        n2.push((sym.z.norm_sqr() + sym.q.norm_sqr()).ln() + la2);
    }
    let n2 = n2.value();
    Ok(ElReport {
        e: e.value(),
        coercivity_low: 0.5 * (1.0 - 0.5 / beta) * n2,
        coercivity_high: 0.5 * (1.0 + 0.5 / beta) * n2,
        per_mode,
    })
}

pub fn energy_el(
    omega: &SpectralField,
    theta: &SpectralField,
    t: f64,
    params: &MultiplierParams,
) -> Result<ElReport, DiagError> {
    let table = MultiplierTable::new(omega.grid, t, params)?;
    energy_el_with(&table, omega, theta, params.beta())
}

/// `E_n = ½[‖AΩ‖² + β²‖A∇_LΘ‖²]` with `|∇_L|² = p`.
pub fn energy_en_with(
    table: &MultiplierTable,
    omega: &SpectralField,
    theta: &SpectralField,
    beta: f64,
) -> Result<f64, DiagError> {
    check_grid(table, omega)?;
    check_grid(table, theta)?;
    let g = table.grid;
    let mut acc = LogSum::new();
    for i in 0..g.len() {
        let k = g.k_of(i / g.nv);
        let p = crate::multipliers::p_symbol(k, g.eta_of(i % g.nv), table.t);
        let v = 0.5 * (omega.data[i].norm_sqr() + beta * beta * p * theta.data[i].norm_sqr());
        if v > 0.0 {
            acc.push(v.ln() + 2.0 * table.log_a[i]);
        }
    }
    Ok(acc.value())
}

pub fn energy_en(
    omega: &SpectralField,
    theta: &SpectralField,
    t: f64,
    params: &MultiplierParams,
) -> Result<f64, DiagError> {
    let table = MultiplierTable::new(omega.grid, t, params)?;
    energy_en_with(&table, omega, theta, params.beta())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CkTerm {
    /// `G_λ[f] = −λ̇ ‖|∇|^{s/2} A f‖²`, with `|∇|^s ↦ (|k| + |η|)^s` as in `A`.
    Lambda,
    /// `G_w[f] = ‖√(∂_t w/w) √(AÃ) f‖²`
    W,
    /// `G_m[f] = ‖√(∂_t m/m) A f‖²`
    M,
}

pub fn ck_terms_with(table: &MultiplierTable, field: &SpectralField, which: CkTerm) -> Result<f64, DiagError> {
    check_grid(table, field)?;
    let mut acc = LogSum::new();
    for (i, c) in field.data.iter().enumerate() {
        let a = c.norm_sqr();
        let (rate, log_mult) = match which {
            CkTerm::Lambda => (table.lambda_rate[i], 2.0 * table.log_a[i]),
            CkTerm::W => (table.dtw_over_w[i], table.log_a[i] + table.log_a_tilde[i]),
            CkTerm::M => (table.dtm_over_m[i], 2.0 * table.log_a[i]),
        };
        if a > 0.0 && rate > 0.0 {
            acc.push(a.ln() + rate.ln() + log_mult);
        }
    }
    Ok(acc.value())
}

pub fn ck_terms(
    field: &SpectralField,
    t: f64,
    params: &MultiplierParams,
    which: CkTerm,
) -> Result<f64, DiagError> {
    let table = MultiplierTable::new(field.grid, t, params)?;
    ck_terms_with(&table, field, which)
}

/// `E_v = ½(⟨t⟩^{2+2s}‖(A/⟨∂_v⟩^s)𝓗‖² + (1/C₁)(‖A^v h‖² + ⟨t⟩^{−2s}‖A^v|∂_v|^s h‖²))`,
/// with `A = A(0, η)` and `v` identified with `y`.
pub fn energy_ev(coord: &CoordDiag, params: &MultiplierParams, c1: f64) -> Result<f64, DiagError> {
    let t = coord.t;
    if !(t > 0.0) {
        return Err(DiagError::Precondition("E_v needs t > 0".into()));
    }
    if !(c1 > 0.0) {
        return Err(DiagError::Precondition("C1 must be positive".into()));
    }
    let g = coord.grid;
    let s = params.s();
    let lt2 = (1.0 + t * t).ln();
    let big_h = row_to_spectral(&g, &coord.big_h);
    let h = row_to_spectral(&g, &coord.h);
    let lambda = params.lambda_of_t(t);
    let mut acc = LogSum::new();
    for c in 0..g.nv {
        let eta = g.eta_of(c);
        let a2 = big_h[c].norm_sqr();
        if a2 > 0.0 {
            let la = log_multiplier_a_at(0, eta, t, lambda, params, AVariant::A)?;
            acc.push(a2.ln() + 2.0 * la + (1.0 + s) * lt2 - s * (1.0 + eta * eta).ln());
        }
        let b2 = h[c].norm_sqr();
        if b2 > 0.0 {
            let lv = 2.0 * log_multiplier_a_at(0, eta, t, lambda, params, AVariant::Av)?;
            let x = (1.0 + (-s * lt2).exp() * eta.abs().powf(2.0 * s)).ln();
            acc.push(b2.ln() + lv + x - c1.ln());
        }
    }
    Ok(0.5 * acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::multipliers::log_multiplier_a;

    fn grid() -> GridSpec {
        GridSpec::new(4, 16, 8.0 * PI, 2.0 / 3.0).unwrap()
    }

    fn params() -> MultiplierParams {
        MultiplierParams::default()
    }

    fn random(seed: u64) -> SpectralField {
        let g = grid();
        let mut f = SpectralField::zeros(g);
        for (i, c) in f.data.iter_mut().enumerate() {
            let x = (i as f64 + seed as f64 * 31.0) * 0.754;
            *c = C64::new(x.sin(), (2.0 * x).cos()) * 1e-3;
        }
        f.project(&g.mask());
        f
    }

    #[test]
    fn zero_fields() {
        let z = SpectralField::zeros(grid());
        let p = params();
        assert_eq!(energy_el(&z, &z, 3.0, &p).unwrap().e, 0.0);
        assert_eq!(energy_en(&z, &z, 3.0, &p).unwrap(), 0.0);
        for w in [CkTerm::Lambda, CkTerm::W, CkTerm::M] {
            assert_eq!(ck_terms(&z, 3.0, &p, w).unwrap(), 0.0);
        }
    }

    #[test]
    fn el_single_mode_is_weighted_mode_energy() {
        let g = grid();
        let p = params();
        let t = 1.3;
        let (k, n) = (1, 3);
        let mut w = SpectralField::zeros(g);
        let mut th = SpectralField::zeros(g);
        let i = g.index(k, n).unwrap();
        w.data[i] = C64::new(0.3, -0.2);
        th.data[i] = C64::new(0.1, 0.05);
        let eta = g.eta_of(n as usize);
        let m = ModeState { k, eta, t, omega_hat: w.data[i], theta_hat: th.data[i] };
        let me = mode_energy(&to_symmetrized(&m, 1.0).unwrap(), k, eta, t, 1.0).unwrap();
        let a = log_multiplier_a(k, eta, t, &p, AVariant::A).unwrap().exp();
        let el = energy_el(&w, &th, t, &p).unwrap();
        assert!((el.e / (a * a * me.e) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn el_coercivity_on_random_states() {
        let p = params();
        for seed in 0..4 {
            let w = random(seed);
            let th = random(seed + 10);
            for t in [0.0, 0.7, 5.0, 30.0] {
                let r = energy_el(&w, &th, t, &p).unwrap();
                assert!(r.coercivity_low <= r.e * (1.0 + 1e-12));
                assert!(r.e <= r.coercivity_high * (1.0 + 1e-12));
            }
        }
        let b = MultiplierParams::builder().beta(0.55).build().unwrap();
        let w = random(1);
        assert!(energy_el_with(&MultiplierTable::new(w.grid, 1.0, &b).unwrap(), &w, &w, 0.4).is_err());
    }

    #[test]
    fn en_theta_part_scales_with_beta_squared() {
        let g = grid();
        let w = SpectralField::zeros(g);
        let th = random(3);
        let table = MultiplierTable::new(g, 2.0, &params()).unwrap();
        let e1 = energy_en_with(&table, &w, &th, 1.0).unwrap();
        let e2 = energy_en_with(&table, &w, &th, 2.0).unwrap();
        assert!((e2 / e1 - 4.0).abs() < 1e-12);
        let om = random(4);
        let e0 = energy_en_with(&table, &om, &SpectralField::zeros(g), 1.0).unwrap();
        let mut acc = 0.0;
        for i in 0..g.len() {
            acc += 0.5 * (2.0 * table.log_a[i]).exp() * om.data[i].norm_sqr();
        }
        assert!((e0 / acc - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ck_term_signs() {
        let p = params();
        let g = grid();
        let mut f = SpectralField::zeros(g);
        f.set_real_pair(1, 2, C64::new(1e-3, 0.0));
        // λ̇ = 0 up to t = 1
        assert_eq!(ck_terms(&f, 0.5, &p, CkTerm::Lambda).unwrap(), 0.0);
        assert!(ck_terms(&f, 2.0, &p, CkTerm::Lambda).unwrap() > 0.0);
        assert!(ck_terms(&f, 2.0, &p, CkTerm::M).unwrap() > 0.0);
        // past 2|η| for every populated mode the weight is frozen at 1
        let late = 2.0 * g.eta_of(2) + 1.0;
        assert_eq!(ck_terms(&f, late, &p, CkTerm::W).unwrap(), 0.0);
    }

    #[test]
    fn ev_single_mode_and_zero() {
        let g = grid();
        let p = params();
        let t = 2.0;
        let c1 = 10.0;
        let coord = CoordDiag {
            grid: g,
            t,
            h: vec![0.0; g.nv],
            big_h: vec![0.0; g.nv],
            v_dot: vec![0.0; g.nv],
            phi: vec![0.0; g.nv],
        };
        assert_eq!(energy_ev(&coord, &p, c1).unwrap(), 0.0);
        let eta = g.eta_of(3);
        let h: Vec<f64> = (0..g.nv).map(|j| 0.2 * (eta * g.v_of(j)).cos()).collect();
        let coord = CoordDiag { h, ..coord };
        let av = log_multiplier_a(0, eta, t, &p, AVariant::Av).unwrap().exp();
        let s = p.s();
        let tt = (1.0 + t * t).sqrt();
        let one = av * av * 0.01 * (1.0 + tt.powf(-2.0 * s) * eta.powf(2.0 * s)) / (2.0 * c1);
        let got = energy_ev(&coord, &p, c1).unwrap();
        assert!((got / (2.0 * one) - 1.0).abs() < 1e-12, "{got} {one}");
        assert!(energy_ev(&CoordDiag { t: 0.0, ..coord }, &p, c1).is_err());
    }
}
