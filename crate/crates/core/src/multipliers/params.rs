use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("{0}")]
    Constraint(String),
}

fn check(ok: bool, msg: &str) -> Result<(), ParamError> {
    if ok {
        Ok(())
    } else {
        Err(ParamError::Constraint(msg.to_string()))
    }
}

/// Parameter bundle shared by every weight and multiplier.
///
/// `mu`, `c_beta` and `delta_lambda` are derived at construction and cannot
/// be set independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierParams {
    beta: f64,
    s: f64,
    lambda0: f64,
    lambda_prime: f64,
    gamma: f64,
    sigma: f64,
    q: f64,
    mu: f64,
    c_beta: f64,
    delta_lambda: f64,
    // ∫_1^10 <τ>^{-2q} dτ and the series tail beyond 10, cached for lambda(t).
    head_integral: f64,
    tail_at_split: f64,
}

/// Unvalidated inputs for [`MultiplierParams`]; `q = None` selects `1/4 + s/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsBuilder {
    pub beta: f64,
    pub s: f64,
    pub lambda0: f64,
    pub lambda_prime: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub q: Option<f64>,
}

impl Default for ParamsBuilder {
    fn default() -> Self {
        Self {
            beta: 1.0,
            s: 0.6,
            lambda0: 1.0,
            lambda_prime: 0.2,
            gamma: 1.5,
            sigma: 20.0,
            q: None,
        }
    }
}

impl ParamsBuilder {
    pub fn beta(mut self, v: f64) -> Self {
        self.beta = v;
        self
    }
    pub fn s(mut self, v: f64) -> Self {
        self.s = v;
        self
    }
    pub fn lambda0(mut self, v: f64) -> Self {
        self.lambda0 = v;
        self
    }
    pub fn lambda_prime(mut self, v: f64) -> Self {
        self.lambda_prime = v;
        self
    }
    pub fn gamma(mut self, v: f64) -> Self {
        self.gamma = v;
        self
    }
    pub fn sigma(mut self, v: f64) -> Self {
        self.sigma = v;
        self
    }
    pub fn q(mut self, v: f64) -> Self {
        self.q = Some(v);
        self
    }

    pub fn build(self) -> Result<MultiplierParams, ParamError> {
        let ParamsBuilder {
            beta,
            s,
            lambda0,
            lambda_prime,
            gamma,
            sigma,
            q,
        } = self;
        let q = q.unwrap_or(0.25 + 0.5 * s);
        for (name, v) in [
            ("beta", beta),
            ("s", s),
            ("lambda0", lambda0),
            ("lambda_prime", lambda_prime),
            ("gamma", gamma),
            ("sigma", sigma),
            ("q", q),
        ] {
            check(v.is_finite(), &format!("{name} must be finite"))?;
        }
        check(beta > 0.5, "beta must exceed 1/2")?;
        check(s > 0.5 && s <= 1.0, "s must lie in (1/2, 1]")?;
        check(lambda_prime > 0.0, "lambda_prime must be positive")?;
        check(lambda0 > lambda_prime, "lambda0 must exceed lambda_prime")?;
        check(gamma > 1.0 && gamma < 2.0, "gamma must lie in (1, 2)")?;
        check(sigma > 16.0, "sigma_weight must exceed 16")?;
        check(
            q > 0.5 && q <= 0.25 + 0.5 * s + 1e-15,
            "q must lie in (1/2, 1/4 + s/2]",
        )?;

        let mu = 4.0 * (0.5 + 2.0 * gamma);
        let c_beta = 1.0 / (2.0 * beta - 1.0);
        let head_integral = adaptive_simpson(|x| (1.0 + x * x).powf(-q), 1.0, SPLIT, 1e-14);
        let tail_at_split = bracket_tail(SPLIT, q);
        let total = head_integral + tail_at_split;

        // λ(∞) is placed halfway between (λ0 + λ')/2 and λ(1).
        let lambda_start = 0.75 * lambda0 + 0.25 * lambda_prime;
        let floor = 0.5 * (lambda0 + lambda_prime);
        let lambda_inf = 0.5 * (floor + lambda_start);
        let delta_lambda = ((1.0 + lambda_start) / (1.0 + lambda_inf)).ln() / total;

        Ok(MultiplierParams {
            beta,
            s,
            lambda0,
            lambda_prime,
            gamma,
            sigma,
            q,
            mu,
            c_beta,
            delta_lambda,
            head_integral,
            tail_at_split,
        })
    }
}

const SPLIT: f64 = 10.0;

/// `∫_x^∞ (1+τ²)^{-q} dτ` for `x >= 10` via the binomial series in `τ^{-2}`.
fn bracket_tail(x: f64, q: f64) -> f64 {
    let mut coeff = 1.0;
    let mut sum = 0.0;
    let inv2 = 1.0 / (x * x);
    let mut pow = x.powf(1.0 - 2.0 * q);
    for n in 0..200 {
        let term = coeff * pow / (2.0 * q + 2.0 * n as f64 - 1.0);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        coeff *= (-q - n as f64) / (n as f64 + 1.0);
        pow *= inv2;
    }
    sum
}

pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(&f, a, b, fa, fm, fb, whole, tol, 40)
}

impl Default for MultiplierParams {
    fn default() -> Self {
        ParamsBuilder::default().build().expect("defaults are valid")
    }
}

impl MultiplierParams {
    pub fn builder() -> ParamsBuilder {
        ParamsBuilder::default()
    }

    /// Rebuilds with a different stratification strength, keeping the rest.
    pub fn with_beta(&self, beta: f64) -> Result<Self, ParamError> {
        self.to_builder().beta(beta).build()
    }

    pub fn to_builder(&self) -> ParamsBuilder {
        ParamsBuilder {
            beta: self.beta,
            s: self.s,
            lambda0: self.lambda0,
            lambda_prime: self.lambda_prime,
            gamma: self.gamma,
            sigma: self.sigma,
            q: Some(self.q),
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }
    pub fn lambda_prime(&self) -> f64 {
        self.lambda_prime
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    /// Exponent `4(1/2 + 2γ)` of the exponential factors in `J`.
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn c_beta(&self) -> f64 {
        self.c_beta
    }
    pub fn delta_lambda(&self) -> f64 {
        self.delta_lambda
    }

    /// `∫_1^t <τ>^{-2q} dτ` (zero for `t <= 1`).
    pub fn decay_integral(&self, t: f64) -> f64 {
        if t <= 1.0 {
            0.0
        } else if t <= SPLIT {
            adaptive_simpson(|x| (1.0 + x * x).powf(-self.q), 1.0, t, 1e-14)
        } else if t.is_infinite() {
            self.head_integral + self.tail_at_split
        } else {
            self.head_integral + self.tail_at_split - bracket_tail(t, self.q)
        }
    }

    /// Bulk Gevrey radius: constant `(3λ0 + λ')/4` up to `t = 1`, then
    /// `1 + λ(t) = (1 + λ(1)) exp(-δ_λ ∫_1^t <τ>^{-2q})`.
    pub fn lambda_of_t(&self, t: f64) -> f64 {
        let start = 0.75 * self.lambda0 + 0.25 * self.lambda_prime;
        if t <= 1.0 {
            return start;
        }
        (1.0 + start) * (-self.delta_lambda * self.decay_integral(t)).exp() - 1.0
    }

    /// `dλ/dt`, zero for `t <= 1`.
    pub fn lambda_dot(&self, t: f64) -> f64 {
        if t <= 1.0 {
            return 0.0;
        }
        -self.delta_lambda * (1.0 + t * t).powf(-self.q) * (1.0 + self.lambda_of_t(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_follows_gamma() {
        let p = MultiplierParams::builder().gamma(1.5).build().unwrap();
        assert_eq!(p.mu(), 14.0);
        for g in [1.01, 1.3, 1.99] {
            let m = MultiplierParams::builder().gamma(g).build().unwrap().mu();
            assert!(m > 10.0 && m < 18.0);
        }
    }

    #[test]
    fn constraint_messages() {
        let e = MultiplierParams::builder().beta(0.4).build().unwrap_err();
        assert_eq!(e.to_string(), "beta must exceed 1/2");
        assert!(MultiplierParams::builder().q(0.4).build().is_err());
        assert!(MultiplierParams::builder().lambda0(0.1).build().is_err());
        assert!(MultiplierParams::builder().sigma(16.0).build().is_err());
    }

    #[test]
    fn lambda_before_one_is_constant() {
        let p = MultiplierParams::default();
        assert!((p.lambda_of_t(0.5) - 0.8).abs() < 1e-15);
        assert_eq!(p.lambda_dot(0.5), 0.0);
    }

    #[test]
    fn tail_series_matches_quadrature() {
        // Independent check of the tail: plain Simpson on a long finite range
        // plus the leading-order remainder.
        let q = 0.6;
        let p = MultiplierParams::builder().s(0.7).q(q).build().unwrap();
        let direct = adaptive_simpson(|x| (1.0 + x * x).powf(-q), 1.0, 400.0, 1e-13);
        assert!((p.decay_integral(400.0) - direct).abs() < 1e-10);
    }
}
