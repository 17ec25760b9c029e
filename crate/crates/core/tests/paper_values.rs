//! Worked values of the symbols, weights, multipliers, linear modes and toy
//! model, evaluated through the public API.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use bqc::linear::{mode_energy, mode_rhs, mode_velocity, to_symmetrized, ModeState, SymmetrizedState};
use bqc::multipliers::{
    critical_interval, critical_time, dt_p_symbol, dtdtp_ratio, multiplier_m, p_symbol, weight_nr,
    weight_w, weight_wv, MultiplierParams,
};
use bqc::spectral::{biot_savart_sheared, GridSpec, SpectralField};
use bqc::toy::toy_rhs;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

fn params() -> MultiplierParams {
    MultiplierParams::builder().build().unwrap()
}

fn mode(k: i64, eta: f64, t: f64, omega: C64, theta: C64) -> ModeState {
    ModeState {
        k,
        eta,
        t,
        omega_hat: omega,
        theta_hat: theta,
    }
}

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[test]
fn symbol_values() {
    assert_eq!(p_symbol(2, 12.0, 0.0), 148.0);
    assert_eq!(dt_p_symbol(1, 0.0, 2.0), 4.0);
    assert_eq!(dt_p_symbol(2, 12.0, 0.0), -48.0);
    assert!(close(dtdtp_ratio(1, 3.0, 3.0).unwrap(), 2.0, 1e-15));
    assert!(close(dtdtp_ratio(2, 8.0, 3.0).unwrap(), 0.5f64.sqrt(), 1e-15));
}

#[test]
fn critical_times_and_intervals() {
    assert_eq!(critical_time(2, 12.0), 5.0);
    assert_eq!(critical_time(0, 3.0), 6.0);
    assert_eq!(critical_time(1, 8.0), 6.0);

    let a = critical_interval(2, 12.0).unwrap();
    assert_eq!((a.left, a.center, a.right), (5.0, 6.0, 9.0));
    assert!(!a.is_resonant);
    assert!(critical_interval(1, -4.0).is_none());
    let b = critical_interval(2, 100.0).unwrap();
    assert!(close(b.left, 125.0 / 3.0, 1e-15));
    assert_eq!((b.center, b.right), (50.0, 75.0));
    assert!(b.is_resonant);
}

#[test]
fn weight_values() {
    let p = params();
    for t in [0.0, 0.7, 3.0, 40.0] {
        assert_eq!(weight_w(1, 1.5, t, &p).unwrap().w, 1.0);
        assert_eq!(weight_wv(1.5, t, &p).unwrap().w, 1.0);
    }
    assert_eq!(weight_w(3, 9.0, 20.0, &p).unwrap().w, 1.0);
    let ratio = weight_wv(100.0, 50.0, &p).unwrap().log_w - weight_nr(100.0, 50.0, &p).unwrap().log_w;
    assert!(close(ratio, (4.0f64 / 100.0).ln(), 1e-12));
}

#[test]
fn multiplier_m_values() {
    let p = params();
    assert_eq!(multiplier_m(0, 7.0, 3.0, &p), 1.0);
    assert_eq!(multiplier_m(1, 5.0, 5.0, &p), 1.0);
    assert!(close(multiplier_m(1, 0.0, 1e15, &p), (PI / 2.0).exp(), 1e-12));
    assert!(close((PI / 2.0).exp(), 4.8105, 1e-4));
}

#[test]
fn lambda_values() {
    let p = params();
    assert!(close(p.lambda_of_t(0.5), 0.8, 1e-15));
    let q = MultiplierParams::builder().s(0.7).q(0.6).build().unwrap();
    let l = q.lambda_of_t(1e6);
    assert!(l > 0.6 && l < 0.8, "{l}");
}

#[test]
fn symmetrized_values() {
    let s = to_symmetrized(&mode(1, 0.0, 0.0, ONE, ONE), 1.0).unwrap();
    assert!((s.z - ONE).norm() < 1e-15 && (s.q - I).norm() < 1e-15);
    let s = to_symmetrized(&mode(2, 12.0, 0.0, ONE, ZERO), 1.0).unwrap();
    assert!(close(s.z.re, 37f64.powf(-0.25), 1e-15));
    assert_eq!(s.q, ZERO);
}

#[test]
fn mode_rhs_values() {
    assert_eq!(mode_rhs(&mode(3, 2.0, 1.0, ZERO, ZERO), 1.0), (ZERO, ZERO));
    let (dw, dth) = mode_rhs(&mode(1, 0.0, 0.0, ZERO, ONE), 2.0);
    assert!((dw - C64::new(0.0, -4.0)).norm() < 1e-15 && dth == ZERO);
    let (dw, dth) = mode_rhs(&mode(1, 0.0, 0.0, ONE, ZERO), 1.0);
    assert!(dw == ZERO && (dth + I).norm() < 1e-15);
}

#[test]
fn mode_energy_values() {
    let e = mode_energy(&SymmetrizedState { z: ONE, q: I }, 1, 0.0, 0.0, 1.0).unwrap();
    assert!(close(e.e, 1.0, 1e-15));
    // cross factor tends to −2 as η → ∞ at fixed t
    for beta in [1.0, 3.0] {
        let e = mode_energy(&SymmetrizedState { z: ONE, q: ONE }, 1, 1e12, 0.0, beta).unwrap();
        assert!(close(e.e, 1.0 - 0.5 / beta, 1e-9), "{}", e.e);
    }
}

#[test]
fn velocity_values() {
    let (ux, uy) = mode_velocity(&mode(1, 0.0, 0.0, ONE, ZERO));
    assert!(ux.norm() < 1e-15 && (uy + I).norm() < 1e-15);
}

#[test]
fn toy_rhs_values() {
    assert_eq!(toy_rhs(0.0, 1.0, 1.0, 1.0), (1.0, 1.0));
    assert_eq!(toy_rhs(0.0, 1.0, 0.0, 4.0), (0.0, 2.0));
}

#[test]
fn biot_savart_values() {
    let g = GridSpec::new(4, 16, 8.0 * PI, 2.0 / 3.0).unwrap();
    let mut w = SpectralField::zeros(g);
    w.set_real_pair(1, 0, ONE);
    for t in [0.0, 0.5, 3.0] {
        let psi = biot_savart_sheared(&w, t);
        assert!(close(psi.get(1, 0).re, -1.0 / (1.0 + t * t), 1e-15));
    }
}
