//! Monitors the shapes of the bootstrap hypotheses along a run.
//!
//! The constants in those hypotheses depend on implicit constants of the
//! proof, so the monitor reports suprema and leaves the verdict to the
//! caller.

use serde::Serialize;

use super::DiagRow;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct BootstrapReport {
    /// `sup E_L / ε²`
    pub el_over_eps2: f64,
    /// `sup E_n / (ε²⟨t⟩)`
    pub en_over_eps2_t: f64,
    /// `sup E_v / (ε²⟨t⟩)`
    pub ev_over_eps2_t: f64,
    /// `sup ⟨t⟩² ‖v̇‖_{G^{λ,σ−6}} / ε`
    pub vdot_over_eps: f64,
    /// `∫ G_λ dt / ε²`, `∫ G_w dt / ε²`, `∫ G_m dt / ε²` (trapezoid)
    pub ck_lambda: f64,
    pub ck_w: f64,
    pub ck_m: f64,
    /// `sup E_L(t) / E_L(t_ref)`
    pub el_growth: f64,
    /// `sup E_n(t) / (E_n(t_ref) ⟨t⟩)`
    pub en_growth: f64,
    /// First output time `>= 1`, where the window starts.
    pub t_ref: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn jt(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// Suprema over the rows with `t >= 1`; `NaN` entries are skipped.
pub fn bootstrap_monitor(rows: &[DiagRow], eps: f64) -> BootstrapReport {
    let window: Vec<&DiagRow> = rows.iter().filter(|r| r.t >= 1.0).collect();
    let Some(first) = window.first() else {
        return BootstrapReport::default();
    };
    let mut rep = BootstrapReport {
        t_ref: first.t,
        ..Default::default()
    };
    let e2 = eps * eps;
    let sup = |acc: &mut f64, x: f64| {
        if x.is_finite() || x == f64::INFINITY {
            *acc = acc.max(x);
        }
    };
    for r in &window {
        sup(&mut rep.el_over_eps2, ratio(r.e_l, e2));
        sup(&mut rep.en_over_eps2_t, ratio(r.e_n, e2 * jt(r.t)));
        sup(&mut rep.ev_over_eps2_t, ratio(r.e_v, e2 * jt(r.t)));
        sup(&mut rep.vdot_over_eps, ratio(jt(r.t).powi(2) * r.vdot_gevrey, eps));
        sup(&mut rep.el_growth, ratio(r.e_l, first.e_l));
        sup(&mut rep.en_growth, ratio(r.e_n, first.e_n * jt(r.t)));
    }
    for w in window.windows(2) {
        let dt = 0.5 * (w[1].t - w[0].t);
        let add = |acc: &mut f64, a: f64, b: f64| {
            if (a + b).is_finite() {
                *acc += dt * (a + b);
            }
        };
        add(&mut rep.ck_lambda, w[0].g_lambda_z, w[1].g_lambda_z);
        add(&mut rep.ck_w, w[0].g_w_z, w[1].g_w_z);
        add(&mut rep.ck_m, w[0].g_m_z, w[1].g_m_z);
    }
    rep.ck_lambda = ratio(rep.ck_lambda, e2);
    rep.ck_w = ratio(rep.ck_w, e2);
    rep.ck_m = ratio(rep.ck_m, e2);
    rep
}
