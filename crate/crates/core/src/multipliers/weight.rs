//! The main weight `w_k(t, η)` and the coordinate weight `w^v(t, η)`.
//!
//! Both are built backward in time from `w = 1` at `t = 2|η|`. On the
//! critical interval `I_{j,η} = [t_{j,η}, η/j] ∪ [η/j, t_{j-1,η}]` the
//! non-resonant weight is
//!
//! ```text
//! w_NR(t) = ((j²/η)(1 + b_j |t − η/j|))^γ            · w_NR(t_{j-1})   on the right half,
//! w_NR(t) = (1 + a_j |t − η/j|)^{-1/2-γ} (j²/η)^γ    · w_NR(t_{j-1})   on the left half,
//! ```
//!
//! so that `w_NR(t_{j-1}) = (η/j²)^{1/2+2γ} w_NR(t_j)`. Chaining the anchors
//! gives the closed form `ln w_NR(t_j) = (1/2 + 2γ)(2 ln j! − j ln η)`, which
//! is what we evaluate: every query is O(1) and no cache is mutated.

use std::sync::OnceLock;

use thiserror::Error;

use super::params::MultiplierParams;
use super::symbols::{critical_time, floor_sqrt, interval_index};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("non-finite input to weight evaluation (k = {k}, eta = {eta}, t = {t})")]
    NonFinite { k: i64, eta: f64, t: f64 },
}

/// Which piece of the piecewise definition produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `t >= 2|η|` or `|η| <= 2`.
    Unity,
    /// `t < t_{⌊√η⌋,η}`: held at its value at the last critical time.
    Frozen,
    NonResonant,
    Resonant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightValue {
    /// The weight itself; underflows to 0 for very large `|η|`, use `log_w`.
    pub w: f64,
    pub log_w: f64,
    /// Analytic `∂_t w / w` of the active branch.
    pub dtw_over_w: f64,
    pub branch: Branch,
}

impl WeightValue {
    fn from_log(log_w: f64, dtw_over_w: f64, branch: Branch) -> Self {
        Self {
            w: log_w.exp(),
            log_w,
            dtw_over_w,
            branch,
        }
    }

    fn unity() -> Self {
        Self {
            w: 1.0,
            log_w: 0.0,
            dtw_over_w: 0.0,
            branch: Branch::Unity,
        }
    }
}

const LN_FACT_TABLE: usize = 1 << 16;

fn ln_factorial(n: u64) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(LN_FACT_TABLE);
        let mut acc = 0.0f64;
        v.push(0.0);
        for i in 1..LN_FACT_TABLE {
            acc += (i as f64).ln();
            v.push(acc);
        }
        v
    });
    if (n as usize) < LN_FACT_TABLE {
        table[n as usize]
    } else {
        // Stirling series; the first omitted term is below 1e-20 here.
        let x = n as f64;
        x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x * x * x)
    }
}

/// `ln w_NR(t_{j,η}, η)` for `0 <= j <= ⌊√η⌋`.
fn log_anchor(j: u64, eta_abs: f64, gamma: f64) -> f64 {
    (0.5 + 2.0 * gamma) * (2.0 * ln_factorial(j) - j as f64 * eta_abs.ln())
}

fn coeff_a(j: f64, eta_abs: f64) -> f64 {
    2.0 * (j + 1.0) / j * (1.0 - j * j / eta_abs)
}

fn coeff_b(j: f64, eta_abs: f64) -> f64 {
    if j == 1.0 {
        1.0 - 1.0 / eta_abs
    } else {
        2.0 * (j - 1.0) / j * (1.0 - j * j / eta_abs)
    }
}

/// Position of `t` on the interval ladder at frequency `|η|`.
#[derive(Debug, Clone, Copy)]
enum Ladder {
    Unity,
    Frozen {
        log_w: f64,
    },
    Inside {
        j: u64,
        log_nr: f64,
        dlog_nr: f64,
        /// `ln((j²/η)(1 + c|t − η/j|))` with `c = a_j` or `b_j`.
        log_factor: f64,
        dlog_factor: f64,
    },
}

fn ladder(t: f64, eta_abs: f64, gamma: f64) -> Ladder {
    if eta_abs <= 2.0 || t >= 2.0 * eta_abs {
        return Ladder::Unity;
    }
    match interval_index(eta_abs, t) {
        Some(j) => inside(j, eta_abs, gamma, t, t >= eta_abs / j as f64),
        None => Ladder::Frozen {
            log_w: log_anchor(floor_sqrt(eta_abs), eta_abs, gamma),
        },
    }
}

/// The formula of interval `j`, right or left half, evaluated at `t`
/// (also outside the half, which the continuity check relies on).
fn inside(j: u64, eta_abs: f64, gamma: f64, t: f64, right_half: bool) -> Ladder {
    let jf = j as f64;
    let tau = t - eta_abs / jf;
    let base = log_anchor(j - 1, eta_abs, gamma);
    let ratio = (jf * jf / eta_abs).ln();
    if right_half {
        let b = coeff_b(jf, eta_abs);
        let lf = ratio + (b * tau).ln_1p();
        let dlf = b / (1.0 + b * tau);
        Ladder::Inside {
            j,
            log_nr: gamma * lf + base,
            dlog_nr: gamma * dlf,
            log_factor: lf,
            dlog_factor: dlf,
        }
    } else {
        let a = coeff_a(jf, eta_abs);
        let at = a * (-tau);
        let lf = ratio + at.ln_1p();
        let dlf = -a / (1.0 + at);
        Ladder::Inside {
            j,
            log_nr: -(0.5 + gamma) * at.ln_1p() + gamma * ratio + base,
            dlog_nr: (0.5 + gamma) * a / (1.0 + at),
            log_factor: lf,
            dlog_factor: dlf,
        }
    }
}

fn check_finite(k: i64, eta: f64, t: f64) -> Result<(), WeightError> {
    if eta.is_finite() && t.is_finite() {
        Ok(())
    } else {
        Err(WeightError::NonFinite { k, eta, t })
    }
}

/// The non-resonant weight `w_NR(t, η)`, which depends only on `|η|`.
pub fn weight_nr(eta: f64, t: f64, params: &MultiplierParams) -> Result<WeightValue, WeightError> {
    check_finite(0, eta, t)?;
    Ok(match ladder(t, eta.abs(), params.gamma()) {
        Ladder::Unity => WeightValue::unity(),
        Ladder::Frozen { log_w } => WeightValue::from_log(log_w, 0.0, Branch::Frozen),
        Ladder::Inside {
            log_nr, dlog_nr, ..
        } => WeightValue::from_log(log_nr, dlog_nr, Branch::NonResonant),
    })
}

/// The main weight `w_k(t, η)`.
///
/// On `I_{k,η}` the resonant branch `w_R = ((k²/η)(1 + c|t − η/k|))^{1/2} w_NR`
/// applies; everywhere else (including `k = 0` and `ηk < 0`, where the
/// critical interval is empty) the non-resonant weight is used.
pub fn weight_w(
    k: i64,
    eta: f64,
    t: f64,
    params: &MultiplierParams,
) -> Result<WeightValue, WeightError> {
    check_finite(k, eta, t)?;
    Ok(resolve_w(k, eta, ladder(t, eta.abs(), params.gamma())))
}

fn resolve_w(k: i64, eta: f64, at: Ladder) -> WeightValue {
    let same_sign = k != 0 && (k > 0) == (eta > 0.0);
    match at {
        Ladder::Unity => WeightValue::unity(),
        Ladder::Frozen { log_w } => WeightValue::from_log(log_w, 0.0, Branch::Frozen),
        Ladder::Inside {
            j,
            log_nr,
            dlog_nr,
            log_factor,
            dlog_factor,
        } => {
            if same_sign && k.unsigned_abs() == j {
                WeightValue::from_log(
                    log_nr + 0.5 * log_factor,
                    dlog_nr + 0.5 * dlog_factor,
                    Branch::Resonant,
                )
            } else {
                WeightValue::from_log(log_nr, dlog_nr, Branch::NonResonant)
            }
        }
    }
}

/// Largest relative jump of `w_k(·, η)` (that is, of `ln w`) across the
/// branch points `t_{|k|,η}`, `η/k` and `t_{|k|-1,η}`, comparing the
/// one-sided formulas at each point. Returns 0 when `I_{k,η}` is empty.
pub fn junction_mismatch(k: i64, eta: f64, params: &MultiplierParams) -> f64 {
    let gamma = params.gamma();
    let e = eta.abs();
    let kmax = floor_sqrt(e);
    let ka = k.unsigned_abs();
    if e <= 2.0 || k == 0 || ka > kmax || (k > 0) != (eta > 0.0) {
        return 0.0;
    }
    let side = |j: u64, right: bool, t: f64| resolve_w(k, eta, inside(j, e, gamma, t, right)).log_w;
    let mut worst: f64 = 0.0;
    let mut record = |a: f64, b: f64| worst = worst.max((a - b).abs());
    // Left end t_k: interval k+1 (or the frozen value) meets interval k.
    let tl = critical_time(ka, e);
    let from_left = if ka == kmax {
        log_anchor(kmax, e, gamma)
    } else {
        side(ka + 1, true, tl)
    };
    record(from_left, side(ka, false, tl));
    let tc = e / ka as f64;
    record(side(ka, false, tc), side(ka, true, tc));
    // Right end t_{k-1}: interval k meets interval k-1 (or unity at 2|η|).
    let tr = critical_time(ka - 1, e);
    let from_right = if ka == 1 { 0.0 } else { side(ka - 1, false, tr) };
    record(side(ka, true, tr), from_right);
    worst
}

/// The coordinate-system weight `w^v(t, η)`: on every critical interval
/// (which tile `[t_{⌊√η⌋,η}, 2|η|]`) it is `(k²/η)(1 + c|t − η/k|) w_NR`.
///
/// The reciprocal that appears on the middle branch of one printed form of
/// this definition is not applied; with it, `w^v >= 1 >= w_NR` and the
/// comparison `A_0 <= A^v` would fail.
pub fn weight_wv(eta: f64, t: f64, params: &MultiplierParams) -> Result<WeightValue, WeightError> {
    check_finite(0, eta, t)?;
    Ok(match ladder(t, eta.abs(), params.gamma()) {
        Ladder::Unity => WeightValue::unity(),
        Ladder::Frozen { log_w } => WeightValue::from_log(log_w, 0.0, Branch::Frozen),
        Ladder::Inside {
            log_nr,
            dlog_nr,
            log_factor,
            dlog_factor,
            ..
        } => WeightValue::from_log(
            log_nr + log_factor,
            dlog_nr + dlog_factor,
            Branch::Resonant,
        ),
    })
}
