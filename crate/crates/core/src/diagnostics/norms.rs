use crate::multipliers::japanese;
use crate::spectral::{GridSpec, SpectralField};

use super::DiagError;

/// Splits a field into its `k = 0` row and the rest.
pub fn project_modes(field: &SpectralField) -> (SpectralField, SpectralField) {
    let nv = field.grid.nv;
    let mut zero = SpectralField::zeros(field.grid);
    let mut rest = field.clone();
    zero.data[..nv].copy_from_slice(&field.data[..nv]);
    rest.data[..nv].iter_mut().for_each(|c| *c = Default::default());
    (zero, rest)
}

/// Streaming `ln Σ e^{x_i}`; the sum order is the push order.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSum {
    max: f64,
    scaled: f64,
}

impl LogSum {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled += (x - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    pub fn ln(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }

    pub fn value(&self) -> f64 {
        self.ln().exp()
    }
}

fn gevrey_log_weight(k: f64, eta: f64, lam: f64, sig: f64, s: f64) -> f64 {
    2.0 * sig * japanese(k, eta).ln() + 2.0 * lam * (k.abs() + eta.abs()).powf(s)
}

fn check_lambda(lam: f64) -> Result<(), DiagError> {
    if !(lam >= 0.0) {
        return Err(DiagError::Precondition(format!("lambda = {lam} must be non-negative")));
    }
    Ok(())
}

/// `ln (Σ ⟨k,η⟩^{2σ} e^{2λ(|k|+|η|)^s} |f̂|²)^{1/2}` over the stored
/// coefficients; `−∞` for the zero field.
pub fn log_gevrey_sobolev_norm(
    field: &SpectralField,
    lam: f64,
    sig: f64,
    s: f64,
) -> Result<f64, DiagError> {
    check_lambda(lam)?;
    let g = field.grid;
    let mut acc = LogSum::new();
    for (i, c) in field.data.iter().enumerate() {
        let a = c.norm_sqr();
        if a > 0.0 {
            let k = g.k_of(i / g.nv) as f64;
            let eta = g.eta_of(i % g.nv);
            acc.push(a.ln() + gevrey_log_weight(k, eta, lam, sig, s));
        }
    }
    Ok(0.5 * acc.ln())
}

/// The Gevrey-Sobolev norm `‖f‖_{G^{λ,σ}}` with counting measure on the
/// coefficients, so that `λ = σ = 0` gives the root mean square of `f`.
/// `+∞` when the value leaves the `f64` range.
pub fn gevrey_sobolev_norm(field: &SpectralField, lam: f64, sig: f64, s: f64) -> Result<f64, DiagError> {
    Ok(log_gevrey_sobolev_norm(field, lam, sig, s)?.exp())
}

/// As [`gevrey_sobolev_norm`] for a function of `v` alone, given by its
/// coefficients on the `v`-grid.
pub fn gevrey_sobolev_norm_row(
    grid: &GridSpec,
    coeffs: &[num_complex::Complex64],
    lam: f64,
    sig: f64,
    s: f64,
) -> Result<f64, DiagError> {
    check_lambda(lam)?;
    let mut acc = LogSum::new();
    for (c, z) in coeffs.iter().enumerate() {
        let a = z.norm_sqr();
        if a > 0.0 {
            acc.push(a.ln() + gevrey_log_weight(0.0, grid.eta_of(c), lam, sig, s));
        }
    }
    Ok((0.5 * acc.ln()).exp())
}

/// Physical `L²` quantities of one state over the periodic cell.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct FlowNorms {
    pub l2_omega_neq: f64,
    pub l2_gradtheta_neq: f64,
    pub l2_ux_neq: f64,
    pub l2_uy_neq: f64,
    pub l2_theta_neq: f64,
    pub l2_omega: f64,
    pub l2_theta: f64,
    /// `½‖u‖² + ½β²‖θ‖²`
    pub energy: f64,
    /// `∫ u^x u^y`
    pub flux: f64,
}

/// Norms of `ω_≠`, `∇θ_≠`, `u_≠`, `θ_≠` and the energy, at time `t` in the
/// sheared frame (`∇θ ↦ (ik, i(η − kt))Θ̂`, `u = ∇⊥_L Ψ`).
pub fn flow_norms(omega: &SpectralField, theta: &SpectralField, t: f64, beta: f64) -> FlowNorms {
    let g = omega.grid;
    let mut s = [0.0f64; 9];
    for i in 0..g.len() {
        let k = g.k_of(i / g.nv) as f64;
        let eta = g.eta_of(i % g.nv);
        let shear = eta - k * t;
        let p = k * k + shear * shear;
        let w2 = omega.data[i].norm_sqr();
        let th2 = theta.data[i].norm_sqr();
        let psi2 = if p > 0.0 { w2 / (p * p) } else { 0.0 };
        let neq = if k != 0.0 { 1.0 } else { 0.0 };
        s[0] += neq * w2;
        s[1] += neq * p * th2;
        s[2] += neq * shear * shear * psi2;
        s[3] += neq * k * k * psi2;
        s[4] += neq * th2;
        s[5] += w2;
        s[6] += th2;
        s[7] += p * psi2 + beta * beta * th2;
        s[8] -= shear * k * psi2;
    }
    let a = g.area();
    FlowNorms {
        l2_omega_neq: (a * s[0]).sqrt(),
        l2_gradtheta_neq: (a * s[1]).sqrt(),
        l2_ux_neq: (a * s[2]).sqrt(),
        l2_uy_neq: (a * s[3]).sqrt(),
        l2_theta_neq: (a * s[4]).sqrt(),
        l2_omega: (a * s[5]).sqrt(),
        l2_theta: (a * s[6]).sqrt(),
        energy: 0.5 * a * s[7],
        flux: a * s[8],
    }
}
