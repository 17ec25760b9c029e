//! Adaptive Dormand-Prince 5(4) integrator for small fixed-size real systems.
//!
//! Every ODE in the crate (single linear modes, the toy model in log variables)
//! is a handful of real unknowns, so the state is a plain `[f64; N]`. The
//! integrator accepts a step ceiling that may depend on `t`; callers use it to
//! refine near critical times.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("non-finite state encountered at t = {t}")]
    NonFinite { t: f64 },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("maximum number of steps ({max_steps}) exceeded at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Step-size controlled Dormand-Prince 5(4) pair with FSAL.
///
/// The local error estimate of each accepted step satisfies
/// `max_i |e_i| / (atol + rtol * max(|y_i|, |y_new_i|)) <= 1`.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_min: f64,
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            max_steps: 10_000_000,
            h_min: 1e-14,
        }
    }

    fn err_norm<const N: usize>(&self, e: &[f64; N], y0: &[f64; N], y1: &[f64; N]) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..N {
            let sc = self.atol + self.rtol * y0[i].abs().max(y1[i].abs());
            m = m.max((e[i] / sc).abs());
        }
        m
    }

    /// Integrates `y' = rhs(t, y)` from `t0` to `t_end` (either direction).
    ///
    /// `h_cap(t)` bounds `|h|` for a step starting at `t`. Every time in
    /// `stops` lying strictly between `t0` and `t_end` is hit exactly.
    /// `observer` sees the initial point and every accepted step.
    pub fn solve<const N: usize, F, H, O>(
        &self,
        mut rhs: F,
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        h_cap: H,
        stops: &[f64],
        mut observer: O,
    ) -> Result<[f64; N], OdeError>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
        H: Fn(f64) -> f64,
        O: FnMut(f64, &[f64; N]),
    {
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let mut t = t0;
        let mut y = y0;
        observer(t, &y);
        if t_end == t0 {
            return Ok(y);
        }

        let mut stops: Vec<f64> = stops
            .iter()
            .copied()
            .filter(|&s| (s - t0) * dir > 0.0 && (t_end - s) * dir > 0.0)
            .collect();
        stops.sort_by(|a, b| (a * dir).partial_cmp(&(b * dir)).unwrap());
        stops.push(t_end);
        let mut next_stop = 0usize;

        let mut k1 = rhs(t, &y);
        let mut h = self.initial_step(&y, &k1, (t_end - t0).abs()).min(h_cap(t));
        let mut steps = 0usize;

        loop {
            let target = stops[next_stop];
            let remaining = (target - t) * dir;
            let cap = h_cap(t);
            let mut land = false;
            let mut hh = h.min(cap);
            if hh >= remaining {
                hh = remaining;
                land = true;
            }
            if hh < self.h_min * t.abs().max(1.0) && !land {
                return Err(OdeError::StepUnderflow { t, h: hh });
            }
            steps += 1;
            if steps > self.max_steps {
                return Err(OdeError::TooManySteps {
                    t,
                    max_steps: self.max_steps,
                });
            }

            let hs = hh * dir;
            let (y_new, k7, err_vec) = step(&mut rhs, t, &y, &k1, hs);
            let err = self.err_norm(&err_vec, &y, &y_new);
            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                if hh <= self.h_min * t.abs().max(1.0) {
                    return Err(OdeError::NonFinite { t });
                }
                h = hh * 0.1;
                continue;
            }

            if err <= 1.0 {
                t = if land { target } else { t + hs };
                y = y_new;
                k1 = k7;
                observer(t, &y);
                if land {
                    next_stop += 1;
                    if next_stop == stops.len() {
                        return Ok(y);
                    }
                }
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // A truncated landing step says nothing about the natural step.
                h = if land { h.max(hh * fac) } else { hh * fac };
            } else {
                let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                h = hh * fac;
            }
        }
    }

    fn initial_step<const N: usize>(&self, y: &[f64; N], f: &[f64; N], span: f64) -> f64 {
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for i in 0..N {
            let sc = self.atol + self.rtol * y[i].abs();
            d0 = d0.max((y[i] / sc).abs());
            d1 = d1.max((f[i] / sc).abs());
        }
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h.min(span).max(1e-10 * span)
    }
}

#[allow(clippy::type_complexity)]
fn step<const N: usize, F>(
    rhs: &mut F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> ([f64; N], [f64; N], [f64; N])
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut tmp = [0.0; N];
    for i in 0..N {
        tmp[i] = y[i] + h * A21 * k1[i];
    }
    let k2 = rhs(t + C2 * h, &tmp);
    for i in 0..N {
        tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    }
    let k3 = rhs(t + C3 * h, &tmp);
    for i in 0..N {
        tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    }
    let k4 = rhs(t + C4 * h, &tmp);
    for i in 0..N {
        tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    }
    let k5 = rhs(t + C5 * h, &tmp);
    for i in 0..N {
        tmp[i] = y[i]
            + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    }
    let k6 = rhs(t + h, &tmp);
    let mut y_new = [0.0; N];
    for i in 0..N {
        y_new[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    }
    let k7 = rhs(t + h, &y_new);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h
            * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y_new, k7, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let s = Dopri5::new(1e-11, 1e-13);
        let y = s
            .solve(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, |_| f64::INFINITY, &[], |_, _| {})
            .unwrap();
        assert!((y[0] - (-5.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_hits_stops_and_goes_backward() {
        let s = Dopri5::new(1e-12, 1e-14);
        let mut seen = vec![];
        let rhs = |_: f64, y: &[f64; 2]| [y[1], -y[0]];
        let y = s
            .solve(rhs, 0.0, [1.0, 0.0], 10.0, |_| 0.5, &[1.0, 2.5], |t, _| seen.push(t))
            .unwrap();
        assert!(seen.contains(&1.0) && seen.contains(&2.5) && seen.contains(&10.0));
        assert!((y[0] - 10f64.cos()).abs() < 1e-10);
        let back = s
            .solve(rhs, 10.0, y, 0.0, |_| 0.5, &[], |_, _| {})
            .unwrap();
        assert!((back[0] - 1.0).abs() < 1e-9 && back[1].abs() < 1e-9);
    }

    #[test]
    fn blowup_is_reported() {
        let s = Dopri5::new(1e-8, 1e-10);
        let r = s.solve(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, |_| 1.0, &[], |_, _| {});
        assert!(r.is_err());
    }
}
