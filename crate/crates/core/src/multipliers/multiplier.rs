//! The composite multipliers `m`, `J` and `A`.
//!
//! `J` and `A` overflow `f64` long before the frequencies of interest
//! (`ln J ≈ μ√|η|`), so the primary entry points return logarithms.

use super::params::MultiplierParams;
use super::weight::{weight_w, weight_wv, WeightError};

/// `m_k(t, η) = exp(C_β arctan(t − η/k))`, and 1 for `k = 0`.
pub fn multiplier_m(k: i64, eta: f64, t: f64, params: &MultiplierParams) -> f64 {
    if k == 0 {
        return 1.0;
    }
    (params.c_beta() * (t - eta / k as f64).atan()).exp()
}

/// `∂_t m / m = C_β / (1 + (t − η/k)²)`, and 0 for `k = 0`.
pub fn dt_m_over_m(k: i64, eta: f64, t: f64, params: &MultiplierParams) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let d = t - eta / k as f64;
    params.c_beta() / (1.0 + d * d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JVariant {
    /// `e^{μ|η|^{1/2}} / w_k + e^{μ|k|^{1/2}}`
    J,
    /// `e^{μ|η|^{1/2}} / w_k`
    JTilde,
    /// `e^{μ|η|^{1/2}} / w^v`
    Jv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AVariant {
    A,
    ATilde,
    Av,
}

/// `ln(e^a + e^b)` without overflow.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// `ln J` for the requested variant.
pub fn log_multiplier_j(
    k: i64,
    eta: f64,
    t: f64,
    params: &MultiplierParams,
    variant: JVariant,
) -> Result<f64, WeightError> {
    let mu = params.mu();
    let head = mu * eta.abs().sqrt();
    Ok(match variant {
        JVariant::J => log_add_exp(
            head - weight_w(k, eta, t, params)?.log_w,
            mu * (k.unsigned_abs() as f64).sqrt(),
        ),
        JVariant::JTilde => head - weight_w(k, eta, t, params)?.log_w,
        JVariant::Jv => head - weight_wv(eta, t, params)?.log_w,
    })
}

/// `J` itself; `+∞` once it exceeds the `f64` range.
pub fn multiplier_j(
    k: i64,
    eta: f64,
    t: f64,
    params: &MultiplierParams,
    variant: JVariant,
) -> Result<f64, WeightError> {
    Ok(log_multiplier_j(k, eta, t, params, variant)?.exp())
}

/// `⟨k, η⟩ = (1 + k² + η²)^{1/2}`.
pub fn japanese(k: f64, eta: f64) -> f64 {
    (1.0 + k * k + eta * eta).sqrt()
}

/// `ln A`, `ln Ã` or `ln A^v` with `λ = λ(t)`.
///
/// `A = ⟨k,η⟩^σ e^{λ|k,η|^s} m^{-1} J`, `Ã` replaces `J` by `J̃`, and
/// `A^v = ⟨η⟩^σ e^{λ|η|^s} J^v` carries no `m` and ignores `k`.
pub fn log_multiplier_a(
    k: i64,
    eta: f64,
    t: f64,
    params: &MultiplierParams,
    variant: AVariant,
) -> Result<f64, WeightError> {
    log_multiplier_a_at(k, eta, t, params.lambda_of_t(t), params, variant)
}

/// [`log_multiplier_a`] with `λ(t)` supplied, for callers that evaluate
/// many modes at one time.
pub(crate) fn log_multiplier_a_at(
    k: i64,
    eta: f64,
    t: f64,
    lambda: f64,
    params: &MultiplierParams,
    variant: AVariant,
) -> Result<f64, WeightError> {
    let sigma = params.sigma();
    let s = params.s();
    let kf = k as f64;
    let log_m = || {
        if k == 0 {
            0.0
        } else {
            params.c_beta() * (t - eta / kf).atan()
        }
    };
    Ok(match variant {
        AVariant::A | AVariant::ATilde => {
            let jv = if variant == AVariant::A {
                JVariant::J
            } else {
                JVariant::JTilde
            };
            sigma * japanese(kf, eta).ln()
                + lambda * (kf.abs() + eta.abs()).powf(s)
                - log_m()
                + log_multiplier_j(k, eta, t, params, jv)?
        }
        AVariant::Av => {
            sigma * japanese(0.0, eta).ln()
                + lambda * eta.abs().powf(s)
                + log_multiplier_j(k, eta, t, params, JVariant::Jv)?
        }
    })
}

pub fn multiplier_a(
    k: i64,
    eta: f64,
    t: f64,
    params: &MultiplierParams,
    variant: AVariant,
) -> Result<f64, WeightError> {
    Ok(log_multiplier_a(k, eta, t, params, variant)?.exp())
}

/// The three pieces of `∂_t A / A = λ_term − w_term − m_term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ATimeDerivative {
    /// `λ̇(t) |k,η|^s`, never positive.
    pub lambda_term: f64,
    /// `(∂_t w / w)(Ã / A)`, never negative.
    pub w_term: f64,
    /// `∂_t m / m`, never negative.
    pub m_term: f64,
}

impl ATimeDerivative {
    pub fn total(&self) -> f64 {
        self.lambda_term - self.w_term - self.m_term
    }
}

pub fn a_time_derivative(
    k: i64,
    eta: f64,
    t: f64,
    params: &MultiplierParams,
) -> Result<ATimeDerivative, WeightError> {
    a_time_derivative_at(k, eta, t, params.lambda_dot(t), params)
}

pub(crate) fn a_time_derivative_at(
    k: i64,
    eta: f64,
    t: f64,
    lambda_dot: f64,
    params: &MultiplierParams,
) -> Result<ATimeDerivative, WeightError> {
    let w = weight_w(k, eta, t, params)?;
    let lj = log_multiplier_j(k, eta, t, params, JVariant::J)?;
    let ljt = log_multiplier_j(k, eta, t, params, JVariant::JTilde)?;
    Ok(ATimeDerivative {
        lambda_term: lambda_dot * (k.unsigned_abs() as f64 + eta.abs()).powf(params.s()),
        w_term: w.dtw_over_w * (ljt - lj).exp(),
        m_term: dt_m_over_m(k, eta, t, params),
    })
}
