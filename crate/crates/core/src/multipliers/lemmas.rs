//! Randomized checks of the weight and multiplier inequalities.
//!
//! Each lemma is turned into a normalized ratio `lhs / rhs` with every
//! implied constant set to 1. Samples are drawn by construction so that the
//! hypotheses hold; ratios are accumulated in log space because both sides
//! routinely exceed the `f64` range. The reports give empirical constants;
//! nothing here asserts a particular value.
//!
//! Sampling ranges: `k, ℓ ∈ [−32, 32]`, `η, ξ ∈ [−10⁴, 10⁴]`, `t ∈ [0, 2·10⁴]`.
//! Where a lemma compares two frequencies, half of the draws take
//! `ξ = η + Δ` with `Δ` uniform in `[−64, 64]` so that the exponential
//! factors in `|η − ξ|` do not trivialize the ratio.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::multiplier::{
    japanese, log_multiplier_a, log_multiplier_j, AVariant, JVariant,
};
use super::params::MultiplierParams;
use super::symbols::{critical_interval, in_critical, interval_index, p_symbol};
use super::weight::{junction_mismatch, weight_nr, weight_w, WeightError};

pub const K_RANGE: i64 = 32;
pub const ETA_RANGE: f64 = 1e4;
pub const T_RANGE: f64 = 2e4;
const NEAR: f64 = 64.0;
const MAX_ATTEMPTS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LemmaError {
    #[error("unknown lemma id '{0}'")]
    UnknownLemma(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("could not draw an admissible sample for {0}")]
    SamplingExhausted(&'static str),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// Identifiers accepted by [`sample_lemma_ratios`].
pub const LEMMA_IDS: [&str; 13] = [
    "scalar-4.2a",
    "scalar-4.2b",
    "dtw-4.4",
    "wexchange-4.5a",
    "wexchange-4.5b",
    "wnr-4.6",
    "J-4.7-general",
    "J-4.7-resonant",
    "J-4.7-improved",
    "J-4.7-good",
    "commutator-4.8",
    "p-exchange",
    "p-ketapc",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub lemma_id: String,
    pub n: usize,
    pub sup: f64,
    pub p99: f64,
    pub p50: f64,
    pub inf: f64,
    /// `ln sup`, meaningful when `sup` itself overflows.
    pub log_sup: f64,
    /// No ratio was `+∞` or NaN (a zero ratio is allowed).
    pub all_finite: bool,
}

impl RatioReport {
    fn from_logs(lemma_id: &str, n: usize, mut logs: Vec<f64>) -> Self {
        let all_finite = logs.iter().all(|v| !v.is_nan() && *v < f64::INFINITY);
        logs.retain(|v| !v.is_nan());
        logs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pick = |q: f64| {
            if logs.is_empty() {
                return f64::NAN;
            }
            let i = ((q * logs.len() as f64).ceil() as usize).clamp(1, logs.len()) - 1;
            logs[i]
        };
        let log_sup = logs.last().copied().unwrap_or(f64::NAN);
        Self {
            lemma_id: lemma_id.to_string(),
            n,
            sup: log_sup.exp(),
            p99: pick(0.99).exp(),
            p50: pick(0.5).exp(),
            inf: logs.first().copied().unwrap_or(f64::NAN).exp(),
            log_sup,
            all_finite,
        }
    }
}

struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return lo;
        }
        self.rng.random_range(lo..hi)
    }

    fn sign(&mut self) -> f64 {
        if self.rng.random_bool(0.5) {
            1.0
        } else {
            -1.0
        }
    }

    fn k(&mut self) -> i64 {
        self.rng.random_range(-K_RANGE..=K_RANGE)
    }

    fn k_nonzero(&mut self) -> i64 {
        loop {
            let k = self.k();
            if k != 0 {
                return k;
            }
        }
    }

    fn eta(&mut self) -> f64 {
        loop {
            let e = self.uniform(-ETA_RANGE, ETA_RANGE);
            if e != 0.0 {
                return e;
            }
        }
    }

    /// A second frequency: near `eta` half of the time, independent otherwise.
    fn xi(&mut self, eta: f64) -> f64 {
        loop {
            let x = if self.rng.random_bool(0.5) {
                (eta + self.uniform(-NEAR, NEAR)).clamp(-ETA_RANGE, ETA_RANGE)
            } else {
                self.eta()
            };
            if x != 0.0 {
                return x;
            }
        }
    }

    /// `|ξ| = |η| C^u` with `u` uniform in `[−1, 1]`, kept inside the range.
    fn xi_comparable(&mut self, eta: f64, c: f64) -> f64 {
        let m = (eta.abs() * c.powf(self.uniform(-1.0, 1.0))).min(ETA_RANGE);
        self.sign() * m
    }

    fn t(&mut self) -> f64 {
        self.uniform(0.0, T_RANGE)
    }

    /// `(k, η, t)` with `t ∈ I_{k,η}`.
    fn in_interval(&mut self) -> (i64, f64, f64) {
        let k = self.rng.random_range(1..=K_RANGE);
        let s = self.sign();
        let kf = k as f64;
        let eta = s * self.uniform(kf * kf.max(3.0), ETA_RANGE);
        let i = critical_interval(k * s as i64, eta).expect("nonempty by construction");
        (i.k, eta, self.uniform(i.left, i.right))
    }
}

fn draw<T>(
    name: &'static str,
    s: &mut Sampler,
    mut f: impl FnMut(&mut Sampler) -> Option<T>,
) -> Result<T, LemmaError> {
    for _ in 0..MAX_ATTEMPTS {
        if let Some(v) = f(s) {
            return Ok(v);
        }
    }
    Err(LemmaError::SamplingExhausted(name))
}

/// `|k, η| = |k| + |η|`.
fn bar(k: f64, eta: f64) -> f64 {
    k.abs() + eta.abs()
}

/// `ln |e^d − 1|`.
fn ln_abs_expm1(d: f64) -> f64 {
    if d > 30.0 {
        d + (-(-d).exp()).ln_1p()
    } else {
        d.exp_m1().abs().ln()
    }
}

/// Draws `n` admissible samples of the named inequality and reports the
/// distribution of `lhs / rhs`. Deterministic in `seed`.
pub fn sample_lemma_ratios(
    lemma_id: &str,
    n: usize,
    seed: u64,
    params: &MultiplierParams,
) -> Result<RatioReport, LemmaError> {
    let id: &'static str = LEMMA_IDS
        .iter()
        .copied()
        .find(|&x| x == lemma_id)
        .ok_or_else(|| LemmaError::UnknownLemma(lemma_id.to_string()))?;
    let mut s = Sampler::new(seed);
    let mut logs = Vec::with_capacity(n);
    for _ in 0..n {
        logs.push(one_ratio(id, &mut s, params)?);
    }
    Ok(RatioReport::from_logs(id, n, logs))
}

fn one_ratio(id: &'static str, s: &mut Sampler, p: &MultiplierParams) -> Result<f64, LemmaError> {
    let mu = p.mu();
    let sg = p.s();
    let lj = |k: i64, eta: f64, t: f64, v: JVariant| log_multiplier_j(k, eta, t, p, v);
    match id {
        "scalar-4.2a" => {
            let (a, b, c) = draw(id, s, |s| {
                let b = s.uniform(0.0, ETA_RANGE);
                let c = s.uniform(2.0, 50.0);
                if c <= 2.0 {
                    return None;
                }
                let a = if s.rng.random_bool(0.05) {
                    b
                } else {
                    b + s.uniform(-b / c, b / c)
                };
                Some((a, b, c))
            })?;
            let lhs = (a.powf(sg) - b.powf(sg)).abs();
            let rhs = sg / (c - 1.0).powf(1.0 - sg) * (a - b).abs().powf(sg);
            Ok(if lhs == 0.0 { f64::NEG_INFINITY } else { (lhs / rhs).ln() })
        }
        "scalar-4.2b" => {
            let b = s.uniform(0.0, ETA_RANGE);
            let c = s.uniform(0.01, 50.0);
            let a = b + s.uniform(-b.min(c * b), c * b);
            let rhs = (c / (1.0 + c)).powf(1.0 - sg) * ((a - b).abs().powf(sg) + b.powf(sg));
            Ok(sg * a.ln() - rhs.ln())
        }
        "dtw-4.4" => {
            let (k, eta, t) = draw(id, s, |s| {
                let (k, eta, t) = s.in_interval();
                (t > 2.0 * eta.abs().sqrt()).then_some((k, eta, t))
            })?;
            let scale = (1.0 + (eta / k as f64 - t).abs()).ln();
            let nr = weight_nr(eta, t, p)?.dtw_over_w.ln() + scale;
            let r = weight_w(k, eta, t, p)?.dtw_over_w.ln() + scale;
            // Two-sided: report whichever side is further from 1.
            Ok(if nr.abs() >= r.abs() { nr } else { r })
        }
        "wexchange-4.5a" => {
            let (k, l, eta, xi, t) = draw(id, s, |s| {
                let eta = s.eta();
                let xi = s.xi(eta);
                let lo = (2.0 * eta.abs().sqrt().max(xi.abs().sqrt())).max(1.0);
                let hi = 2.0 * eta.abs().min(xi.abs());
                if lo >= hi {
                    return None;
                }
                let t = s.uniform(lo, hi);
                (t > lo).then_some((s.k(), s.k(), eta, xi, t))
            })?;
            let dk = weight_w(k, eta, t, p)?.dtw_over_w;
            let dl = weight_w(l, xi, t, p)?.dtw_over_w;
            Ok(dk.ln() - dl.ln() - japanese(0.0, eta - xi).ln())
        }
        "wexchange-4.5b" => {
            let eta = s.eta();
            let xi = s.xi_comparable(eta, 4.0);
            let t = s.uniform(1.0, T_RANGE);
            let (k, l) = (s.k(), s.k());
            let dk = weight_w(k, eta, t, p)?.dtw_over_w;
            let dl = weight_w(l, xi, t, p)?.dtw_over_w;
            let rhs = (dk.sqrt() + eta.abs().powf(sg / 2.0) / t.powf(sg)) * japanese(0.0, eta - xi);
            Ok(if dl == 0.0 { f64::NEG_INFINITY } else { 0.5 * dl.ln() - rhs.ln() })
        }
        "wnr-4.6" => {
            let eta = s.eta();
            let xi = s.xi(eta);
            let t = s.t();
            Ok(weight_nr(xi, t, p)?.log_w - weight_nr(eta, t, p)?.log_w
                - mu * (eta - xi).abs().sqrt())
        }
        "J-4.7-general" => {
            let k = s.k_nonzero();
            let l = s.k();
            let eta = s.eta();
            let xi = s.xi(eta);
            let t = s.t();
            let kf = k as f64;
            let rhs = 0.5 * (eta.abs() / (kf * kf * (1.0 + (t - eta / kf).abs()))).ln()
                + 9.0 * mu * bar(kf - l as f64, eta - xi).sqrt();
            Ok(lj(k, eta, t, JVariant::J)? - lj(l, xi, t, JVariant::J)? - rhs)
        }
        "J-4.7-resonant" => {
            let (k, l, eta, xi, t) = draw(id, s, |s| {
                let (k, eta, t) = s.in_interval();
                let ka = k.unsigned_abs() as f64;
                let xi = eta * (1.0 + s.uniform(-0.5 / ka, 0.5 / ka));
                let l = s.k();
                (l != k && xi.abs() <= ETA_RANGE && in_critical(k, xi, t))
                    .then_some((k, l, eta, xi, t))
            })?;
            let kf = k as f64;
            let e = 23.0 * mu * bar(kf - l as f64, eta - xi).sqrt();
            let ratio = lj(k, eta, t, JVariant::J)? - lj(l, xi, t, JVariant::J)?;
            let dk = weight_w(k, eta, t, p)?.dtw_over_w.ln();
            let dl = weight_w(l, xi, t, p)?.dtw_over_w.ln();
            let r1 = ratio - (0.5 * eta.abs().ln() - kf.abs().ln() + 0.5 * dk + e);
            let r2 = ratio - (eta.abs().ln() - 2.0 * kf.abs().ln() + 0.5 * dk + 0.5 * dl + e);
            Ok(r1.max(r2))
        }
        "J-4.7-improved" => {
            let case = s.rng.random_range(0..3u8);
            let (k, l, eta, xi, t) = draw(id, s, |s| match case {
                0 => {
                    let (k, eta) = (s.k(), s.eta());
                    let t = s.t();
                    let xi = s.xi(eta);
                    (!in_critical(k, eta, t)).then_some((k, s.k(), eta, xi, t))
                }
                1 => {
                    let (k, eta) = (s.k(), s.eta());
                    let xi = s.xi(eta);
                    Some((k, k, eta, xi, s.t()))
                }
                _ => {
                    let (k, eta, t) = s.in_interval();
                    let xi = s.xi_comparable(eta, 2.0);
                    (!in_critical(k, xi, t)).then_some((k, s.k(), eta, xi, t))
                }
            })?;
            let r = lj(k, eta, t, JVariant::J)? - lj(l, xi, t, JVariant::J)?
                - 10.0 * mu * bar((k - l) as f64, eta - xi).sqrt();
            let rv = lj(0, eta, t, JVariant::Jv)? - lj(0, xi, t, JVariant::Jv)?
                - 10.0 * mu * (eta - xi).abs().sqrt();
            Ok(r.max(rv))
        }
        "J-4.7-good" => {
            let (k, l, eta, xi, t) = draw(id, s, |s| {
                let (l, xi, t) = s.in_interval();
                let eta = s.xi_comparable(xi, 2.0);
                let k = s.k();
                (!in_critical(k, eta, t)).then_some((k, l, eta, xi, t))
            })?;
            let lf = l as f64;
            let rhs = 0.5 * (lf * lf * (1.0 + (t - xi / lf).abs()) / xi.abs()).ln()
                + 11.0 * mu * bar((k - l) as f64, eta - xi).sqrt();
            Ok(lj(k, eta, t, JVariant::J)? - lj(l, xi, t, JVariant::J)? - rhs)
        }
        "commutator-4.8" => {
            let (k, l, eta) = (s.k(), s.k(), s.eta());
            let xi = s.xi(eta);
            let t = s.uniform(0.0, 0.5 * eta.abs().sqrt().min(xi.abs().sqrt()));
            let d = lj(k, eta, t, JVariant::J)? - lj(l, xi, t, JVariant::J)?;
            let (kf, lf) = (k as f64, l as f64);
            let rhs = japanese(kf - lf, eta - xi).ln()
                - 0.5 * (eta.abs() + xi.abs() + kf.abs() + lf.abs()).ln()
                + 11.0 * mu * bar(kf - lf, eta - xi).sqrt();
            let dv = lj(0, eta, t, JVariant::Jv)? - lj(0, xi, t, JVariant::Jv)?;
            let rhs_v = japanese(0.0, eta - xi).ln() - 0.5 * (eta.abs() + xi.abs()).ln()
                + 11.0 * mu * (eta - xi).abs().sqrt();
            Ok((ln_abs_expm1(d) - rhs).max(ln_abs_expm1(dv) - rhs_v))
        }
        "p-exchange" => {
            let (k, l, eta) = (s.k(), s.k(), s.eta());
            let xi = s.xi(eta);
            let t = s.t();
            let (kf, lf) = (k as f64, l as f64);
            let half_log = 0.5 * (p_symbol(l, xi, t).ln() - p_symbol(k, eta, t).ln());
            let bracket = 3.0 * japanese(kf - lf, eta - xi).ln();
            let (ik, il) = (in_critical(k, eta, t), in_critical(l, xi, t));
            let case = match (ik, il) {
                (true, false) => (eta.abs() / (kf * kf * (1.0 + (eta / kf - t).abs()))).ln(),
                (false, true) => (lf * lf * (1.0 + (xi / lf - t).abs()) / xi.abs()).ln(),
                _ => 0.0,
            };
            let mut r = (half_log - bracket - case).max(half_log - bracket - japanese(0.0, t).ln());
            if k == l {
                r = r.max(half_log - japanese(0.0, eta - xi).ln());
            }
            Ok(r)
        }
        "p-ketapc" => {
            let (l, xi, t) = draw(id, s, |s| {
                let l = s.k_nonzero();
                let xi = s.eta();
                let t = s.uniform(1.0, T_RANGE);
                (!in_critical(l, xi, t)).then_some((l, xi, t))
            })?;
            let lf = l as f64;
            let lp = p_symbol(l, xi, t).ln();
            let lb = bar(lf, xi).ln();
            let jt = japanese(0.0, t).ln();
            let jr = japanese(0.0, xi / (lf * t)).ln();
            let common = (0.5 * sg) * lb - 2.0 * sg * jt;
            let r1 = (1.0 - sg / 2.0) * lb - lp - (-jr + common);
            let r2 = -jt + (1.0 - sg / 2.0) * lb - 0.5 * lp - (-sg * jr + common);
            let r3 = -0.5 * jt + (1.0 - sg / 2.0) * lb - 0.75 * lp - (-sg * jr + common);
            Ok(r1.max(r2).max(r3))
        }
        _ => unreachable!("id validated against LEMMA_IDS"),
    }
}

/// The cases of the trichotomy that hold at a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TrichotomyCases {
    /// `k = ℓ`.
    pub a: bool,
    /// Both times far from their resonances.
    pub b: bool,
    /// The frequencies are well separated.
    pub c: bool,
}

impl TrichotomyCases {
    pub fn is_empty(&self) -> bool {
        !(self.a || self.b || self.c)
    }
}

/// Constant in case (c): `|η − ξ| >= κ max(|η|/|ℓ|, |ξ|/|k|)` with
/// `κ = 1/(20C)`. With `κ = 1` all three cases can fail at once, for example
/// `(k, ℓ, η, ξ, t) = (2, 3, 100, 150, 50)`.
pub fn separation_constant(c: f64) -> f64 {
    1.0 / (20.0 * c)
}

/// Which of the three alternatives hold for `t ∈ I_{k,η} ∩ I_{ℓ,ξ}` and
/// `C⁻¹|ξ| <= |η| <= C|ξ|`.
pub fn classify_trichotomy(
    k: i64,
    l: i64,
    eta: f64,
    xi: f64,
    t: f64,
    c: f64,
) -> Result<TrichotomyCases, LemmaError> {
    if !(c >= 1.0) {
        return Err(LemmaError::Precondition(format!("C = {c} must be at least 1")));
    }
    if !(xi.abs() / c <= eta.abs() && eta.abs() <= c * xi.abs()) {
        return Err(LemmaError::Precondition(format!(
            "|eta| = {} and |xi| = {} are not comparable with C = {c}",
            eta.abs(),
            xi.abs()
        )));
    }
    if !in_critical(k, eta, t) || !in_critical(l, xi, t) {
        return Err(LemmaError::Precondition(format!(
            "t = {t} is not in both I_(k,eta) and I_(l,xi)"
        )));
    }
    let (kf, lf) = (k as f64, l as f64);
    let far = |m: f64, f: f64| (t - f / m).abs() >= f.abs() / (10.0 * c * m * m);
    let kappa = separation_constant(c);
    Ok(TrichotomyCases {
        a: k == l,
        b: far(kf, eta) && far(lf, xi),
        c: (eta - xi).abs() >= kappa * (eta.abs() / lf.abs()).max(xi.abs() / kf.abs()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrichotomyReport {
    pub n: usize,
    pub empty: usize,
    pub case_a: usize,
    pub case_b: usize,
    pub case_c: usize,
}

/// Classifies `n` random admissible samples with comparability constant `c`.
pub fn sample_trichotomy(n: usize, seed: u64, c: f64) -> Result<TrichotomyReport, LemmaError> {
    let mut s = Sampler::new(seed);
    let mut r = TrichotomyReport {
        n,
        empty: 0,
        case_a: 0,
        case_b: 0,
        case_c: 0,
    };
    for _ in 0..n {
        let (k, l, eta, xi, t) = draw("trichotomy", &mut s, |s| {
            let (k, eta, t) = s.in_interval();
            let xi = s.xi_comparable(eta, c);
            let j = interval_index(xi, t)? as i64;
            let l = if xi > 0.0 { j } else { -j };
            (xi.abs() / c <= eta.abs() && eta.abs() <= c * xi.abs()).then_some((k, l, eta, xi, t))
        })?;
        let cases = classify_trichotomy(k, l, eta, xi, t, c)?;
        r.empty += cases.is_empty() as usize;
        r.case_a += cases.a as usize;
        r.case_b += cases.b as usize;
        r.case_c += cases.c as usize;
    }
    Ok(r)
}

/// Empirical suprema of the multiplier comparisons.
///
/// The `+ e^{μ|k|^{1/2}}` term in `J` makes `A_0 <= A^v` and `A_0 <= Ã` fail
/// by a factor of at most `1 + e^{-μ|η|^{1/2}}`, and `m^{-1}` in `Ã` costs at
/// most `e^{C_β π/2}`; the first and third fields are normalized by these
/// factors, so values `<= 1` mean the comparison holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TowerReport {
    pub n: usize,
    /// `sup A_0 / ((1 + e^{-μ|η|^{1/2}}) A^v)`
    pub a0_over_av: f64,
    /// `sup Ã / A`
    pub atilde_over_a: f64,
    /// `sup A_0 / (e^{C_β π/2} (1 + e^{-μ|η|^{1/2}}) Ã)`
    pub a0_over_atilde: f64,
    /// `sup A / Ã` over `|k| <= |η|`: the fitted constant.
    pub a_over_atilde_low_k: f64,
    /// `sup J_0 / ((1 + e^{-μ|η|^{1/2}}) J^v)`
    pub j0_over_jv: f64,
}

pub fn tower_check(n: usize, seed: u64, params: &MultiplierParams) -> Result<TowerReport, LemmaError> {
    let mut s = Sampler::new(seed);
    let mu = params.mu();
    let cb = params.c_beta() * std::f64::consts::FRAC_PI_2;
    let mut r = TowerReport {
        n,
        a0_over_av: f64::NEG_INFINITY,
        atilde_over_a: f64::NEG_INFINITY,
        a0_over_atilde: f64::NEG_INFINITY,
        a_over_atilde_low_k: f64::NEG_INFINITY,
        j0_over_jv: f64::NEG_INFINITY,
    };
    for _ in 0..n {
        let (k, eta) = (s.k(), s.eta());
        let t = s.t();
        let la = |k: i64, v: AVariant| log_multiplier_a(k, eta, t, params, v);
        let slack = (-mu * eta.abs().sqrt()).exp().ln_1p();
        let a0 = la(0, AVariant::A)?;
        let a = la(k, AVariant::A)?;
        let at = la(k, AVariant::ATilde)?;
        let av = la(k, AVariant::Av)?;
        r.a0_over_av = r.a0_over_av.max(a0 - av - slack);
        r.atilde_over_a = r.atilde_over_a.max(at - a);
        r.a0_over_atilde = r.a0_over_atilde.max(a0 - at - cb - slack);
        if (k as f64).abs() <= eta.abs() {
            r.a_over_atilde_low_k = r.a_over_atilde_low_k.max(a - at);
        }
        let j0 = log_multiplier_j(0, eta, t, params, JVariant::J)?;
        let jv = log_multiplier_j(0, eta, t, params, JVariant::Jv)?;
        r.j0_over_jv = r.j0_over_jv.max(j0 - jv - slack);
    }
    r.a0_over_av = r.a0_over_av.exp();
    r.atilde_over_a = r.atilde_over_a.exp();
    r.a0_over_atilde = r.a0_over_atilde.exp();
    r.a_over_atilde_low_k = r.a_over_atilde_low_k.exp();
    r.j0_over_jv = r.j0_over_jv.exp();
    Ok(r)
}

/// Largest branch-point jump of `ln w_k(·, η)` over `n` random `(k, η)` with
/// nonempty critical interval.
pub fn continuity_sweep(n: usize, seed: u64, params: &MultiplierParams) -> f64 {
    let mut s = Sampler::new(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (k, eta, _) = s.in_interval();
        worst = worst.max(junction_mismatch(k, eta, params));
    }
    worst
}

/// `w^v / w_k` on critical intervals, which should never exceed 1.
pub fn wv_over_w_sup(n: usize, seed: u64, params: &MultiplierParams) -> Result<f64, LemmaError> {
    let mut s = Sampler::new(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..n {
        let (k, eta, t) = s.in_interval();
        let d = super::weight::weight_wv(eta, t, params)?.log_w - weight_w(k, eta, t, params)?.log_w;
        worst = worst.max(d);
    }
    Ok(worst.exp())
}
