//! Power-law exponents from time series.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RateError {
    #[error("fit window [{lo}, {hi}] holds {n} samples, at least {min} are needed")]
    ShortWindow { lo: f64, hi: f64, n: usize, min: usize },
    #[error("non-positive value {value} at t = {t}")]
    NonPositive { t: f64, value: f64 },
    #[error("series lengths differ ({0} times, {1} values)")]
    LengthMismatch(usize, usize),
}

pub const MIN_FIT_SAMPLES: usize = 8;

/// Least-squares fit of `ln value = slope · ln t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub intercept: f64,
    pub window: (f64, f64),
    pub n: usize,
    pub r2: f64,
}

/// Fits the samples with `window.0 <= t <= window.1`.
pub fn rate_fit(t: &[f64], values: &[f64], window: (f64, f64)) -> Result<RateFit, RateError> {
    if t.len() != values.len() {
        return Err(RateError::LengthMismatch(t.len(), values.len()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&ti, &v) in t.iter().zip(values) {
        if ti < window.0 || ti > window.1 {
            continue;
        }
        if !(v > 0.0) || ti <= 0.0 {
            return Err(RateError::NonPositive { t: ti, value: v });
        }
        xs.push(ti.ln());
        ys.push(v.ln());
    }
    let n = xs.len();
    let short = RateError::ShortWindow {
        lo: window.0,
        hi: window.1,
        n,
        min: MIN_FIT_SAMPLES,
    };
    if n < MIN_FIT_SAMPLES {
        return Err(short);
    }
    let l = linear_regression(&xs, &ys).ok_or(short)?;
    Ok(RateFit {
        slope: l.slope,
        stderr: l.stderr,
        intercept: l.intercept,
        window,
        n,
        r2: l.r2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub r2: f64,
}

/// Ordinary least squares `y = slope · x + intercept`; `None` for fewer than
/// three points or constant `x`.
pub fn linear_regression(xs: &[f64], ys: &[f64]) -> Option<Regression> {
    let n = xs.len().min(ys.len());
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let sse = (syy - slope * sxy).max(0.0);
    Some(Regression {
        slope,
        intercept: my - slope * mx,
        stderr: (sse / (nf - 2.0) / sxx).sqrt(),
        r2: if syy == 0.0 { 1.0 } else { 1.0 - sse / syy },
    })
}

/// `n` points spaced uniformly in `ln t` on `[t0, t1]`, endpoints included.
pub fn geometric_times(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![t0],
        _ => {
            let (a, b) = (t0.ln(), t1.ln());
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        t1
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let t = geometric_times(1.0, 100.0, 20);
        let v: Vec<f64> = t.iter().map(|t| 3.0 * t.powf(-0.5)).collect();
        let f = rate_fit(&t, &v, (1.0, 100.0)).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
        assert_eq!(f.n, 20);
    }

    #[test]
    fn modulated_power_law() {
        let t = geometric_times(1.0, 1e4, 200);
        let v: Vec<f64> = t
            .iter()
            .map(|t| 2.0 * t.sqrt() * (1.0 + 0.01 * t.ln().sin()))
            .collect();
        let f = rate_fit(&t, &v, (1.0, 1e4)).unwrap();
        assert!((f.slope - 0.5).abs() < 0.01);
    }

    #[test]
    fn constant_series() {
        let t = geometric_times(1.0, 10.0, 10);
        let f = rate_fit(&t, &[4.0; 10], (0.0, 20.0)).unwrap();
        assert_eq!(f.slope, 0.0);
    }

    #[test]
    fn errors() {
        let t = geometric_times(1.0, 10.0, 10);
        assert!(matches!(
            rate_fit(&t, &[1.0; 10], (1.0, 2.0)),
            Err(RateError::ShortWindow { .. })
        ));
        let mut v = vec![1.0; 10];
        v[3] = 0.0;
        assert!(matches!(rate_fit(&t, &v, (0.0, 20.0)), Err(RateError::NonPositive { .. })));
    }
}
