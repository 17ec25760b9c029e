//! Symbols of the sheared Laplacian and the critical-time geometry.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("horizontal wavenumber k = 0 is outside the domain of {0}")]
    ZeroWavenumber(&'static str),
}

/// `p_k(t, η) = k² + (η − k t)²`, the symbol of `−Δ_L`.
#[inline]
pub fn p_symbol(k: i64, eta: f64, t: f64) -> f64 {
    let kf = k as f64;
    let d = eta - kf * t;
    kf * kf + d * d
}

/// `∂_t p_k(t, η) = −2k(η − k t)`.
#[inline]
pub fn dt_p_symbol(k: i64, eta: f64, t: f64) -> f64 {
    let kf = k as f64;
    -2.0 * kf * (eta - kf * t)
}

/// `∂_t(∂_t p / (|k| p^{1/2})) = 2 / (1 + (η/k − t)²)^{3/2}`.
pub fn dtdtp_ratio(k: i64, eta: f64, t: f64) -> Result<f64, SymbolError> {
    if k == 0 {
        return Err(SymbolError::ZeroWavenumber("dtdtp_ratio"));
    }
    let d = eta / k as f64 - t;
    Ok(2.0 / (1.0 + d * d).powf(1.5))
}

/// `∂_t p / (|k| p^{1/2})`, bounded by 2 in absolute value.
pub fn dtp_over_kp(k: i64, eta: f64, t: f64) -> Result<f64, SymbolError> {
    if k == 0 {
        return Err(SymbolError::ZeroWavenumber("dtp_over_kp"));
    }
    Ok(dt_p_symbol(k, eta, t) / ((k.unsigned_abs() as f64) * p_symbol(k, eta, t).sqrt()))
}

/// `⌊√|η|⌋`, the number of critical intervals at frequency `η`.
#[inline]
pub fn floor_sqrt(eta: f64) -> u64 {
    let r = eta.abs().sqrt().floor() as u64;
    // Correct the rare off-by-one of the floating square root.
    if (r + 1) * (r + 1) <= eta.abs() as u64 {
        r + 1
    } else if r * r > eta.abs().floor() as u64 && r > 0 {
        r - 1
    } else {
        r
    }
}

/// `t_{k,η} = |η|/k − |η|/(2k(k+1))` for `k >= 1`, and `t_{0,η} = 2|η|`.
#[inline]
pub fn critical_time(k: u64, eta: f64) -> f64 {
    let e = eta.abs();
    if k == 0 {
        2.0 * e
    } else {
        let kf = k as f64;
        e / kf - e / (2.0 * kf * (kf + 1.0))
    }
}

/// A nonempty critical interval `[t_{|k|,η}, η/k] ∪ [η/k, t_{|k|-1,η}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalInterval {
    pub k: i64,
    pub eta: f64,
    pub left: f64,
    pub center: f64,
    pub right: f64,
    /// `2√|η| <= t_{|k|,η}`: the interval is also a resonant interval.
    pub is_resonant: bool,
}

impl CriticalInterval {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.left && t <= self.right
    }
}

/// The critical interval `I_{k,η}`; `None` when `ηk < 0`, `k = 0` or
/// `|k| > ⌊√|η|⌋`.
pub fn critical_interval(k: i64, eta: f64) -> Option<CriticalInterval> {
    if k == 0 || (eta * k as f64) < 0.0 {
        return None;
    }
    let ka = k.unsigned_abs();
    if ka > floor_sqrt(eta) {
        return None;
    }
    let left = critical_time(ka, eta);
    let right = critical_time(ka - 1, eta);
    Some(CriticalInterval {
        k,
        eta,
        left,
        center: eta / k as f64,
        right,
        is_resonant: 2.0 * eta.abs().sqrt() <= left,
    })
}

/// The `j ∈ 1..=⌊√|η|⌋` with `t ∈ [t_{j,η}, t_{j-1,η}]`, if any.
///
/// At a shared endpoint `t_{j,η}` the interval starting there, `j`, is returned.
pub fn interval_index(eta: f64, t: f64) -> Option<u64> {
    let kmax = floor_sqrt(eta);
    let e = eta.abs();
    if kmax == 0 || !(t >= critical_time(kmax, e) && t <= 2.0 * e) {
        return None;
    }
    let mut j = ((e / t).floor() as u64).clamp(1, kmax);
    while j < kmax && t < critical_time(j, e) {
        j += 1;
    }
    while j > 1 && t >= critical_time(j - 1, e) {
        j -= 1;
    }
    Some(j)
}

/// `t ∈ I_{k,η}`.
pub fn in_critical(k: i64, eta: f64, t: f64) -> bool {
    critical_interval(k, eta).is_some_and(|i| i.contains(t))
}

/// `t` in the resonant interval (the critical interval when it is resonant).
pub fn in_resonant(k: i64, eta: f64, t: f64) -> bool {
    critical_interval(k, eta).is_some_and(|i| i.is_resonant && i.contains(t))
}
