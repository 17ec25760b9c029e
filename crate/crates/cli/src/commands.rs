use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;

use bqc::diagnostics::{csv_f64, diag_csv, geometric_times, rate_fit, NormSeries};
use bqc::io::{
    apply_key, parse_config_onto, validate_config, SweepAxis, SweepSpec, SWEEP_NORMS,
};
use bqc::linear::{ensemble_rates, EnsembleSpec, LinearSeries};
use bqc::multipliers::{
    log_multiplier_a, log_multiplier_j, multiplier_m, p_symbol, sample_lemma_ratios, weight_w,
    AVariant, JVariant, MultiplierParams,
};
use bqc::spectral::{run, SimConfig};
use bqc::toy::{envelope_constant, fit_growth_exponent, integrate_model, ToyModel, ToyRun};

use crate::{CliError, LinearArgs, RatesArgs, SimulateArgs, SweepArgs, ToyArgs, WeightsArgs};

type Res = Result<(), CliError>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> Res {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| numeric(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_window(s: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("window '{s}' is not lo:hi")))?;
    let lo: f64 = a.trim().parse().map_err(|_| usage(format!("bad window start '{a}'")))?;
    let hi: f64 = b.trim().parse().map_err(|_| usage(format!("bad window end '{b}'")))?;
    if !(lo < hi) {
        return Err(usage(format!("window '{s}' is empty")));
    }
    Ok((lo, hi))
}

/// `a:b:n`, `n` points including both ends.
fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("range '{s}' is not start:end:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    Ok(match n {
        0 => return Err(bad()),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    })
}

fn overrides(mut cfg: SimConfig, set: &[String]) -> Result<SimConfig, CliError> {
    for kv in set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| usage(format!("override '{kv}' is not key=value")))?;
        apply_key(&mut cfg, k, v).map_err(|m| usage(format!("--set {kv}: {m}")))?;
    }
    Ok(cfg)
}

fn load_config(path: Option<&PathBuf>, set: &[String]) -> Result<SimConfig, CliError> {
    let base = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            parse_config_onto(SimConfig::default(), &text)
                .map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        None => SimConfig::default(),
    };
    overrides(base, set)
}

fn weight_params(set: &[String]) -> Result<MultiplierParams, CliError> {
    overrides(SimConfig::default(), set)?
        .multiplier_params()
        .map_err(usage)
}

pub fn weights(a: WeightsArgs) -> Res {
    let params = weight_params(&a.set)?;
    if let Some(id) = &a.lemma {
        let r = sample_lemma_ratios(id, a.samples, a.seed, &params).map_err(usage)?;
        let text = format!(
            "lemma_id,n,sup_ratio,p99,p50,inf_ratio\n{},{},{}\n",
            r.lemma_id,
            r.n,
            [r.sup, r.p99, r.p50, r.inf].map(csv_f64).join(",")
        );
        return emit(a.out.as_deref(), &text);
    }
    let spec = a
        .tabulate
        .as_deref()
        .ok_or_else(|| usage("weights needs --tabulate or --lemma"))?;
    let parts: Vec<&str> = spec.splitn(2, ',').collect();
    let rest = parts.get(1).ok_or_else(|| usage("--tabulate is k,eta0:eta1:n,t0:t1:n"))?;
    let (er, tr) = rest
        .split_once(',')
        .ok_or_else(|| usage("--tabulate is k,eta0:eta1:n,t0:t1:n"))?;
    let k: i64 = parts[0].trim().parse().map_err(|_| usage(format!("bad k '{}'", parts[0])))?;
    let (etas, ts) = (parse_range(er)?, parse_range(tr)?);
    let mut s = String::from("k,eta,t,p,w,dtw_over_w,m,J,A,A_v\n");
    for &eta in &etas {
        for &t in &ts {
            let w = weight_w(k, eta, t, &params).map_err(numeric)?;
            let j = log_multiplier_j(k, eta, t, &params, JVariant::J).map_err(numeric)?;
            let la = log_multiplier_a(k, eta, t, &params, AVariant::A).map_err(numeric)?;
            let lv = log_multiplier_a(k, eta, t, &params, AVariant::Av).map_err(numeric)?;
            let _ = writeln!(
                s,
                "{k},{},{},{}",
                csv_f64(eta),
                csv_f64(t),
                [
                    p_symbol(k, eta, t),
                    w.w,
                    w.dtw_over_w,
                    multiplier_m(k, eta, t, &params),
                    j.exp(),
                    la.exp(),
                    lv.exp()
                ]
                .map(csv_f64)
                .join(",")
            );
        }
    }
    emit(a.out.as_deref(), &s)
}

fn check_line(name: &str, value: f64, lo: f64, hi: f64) -> bool {
    let ok = value >= lo && value <= hi;
    eprintln!(
        "{} {name}: {value:.4} in [{lo}, {hi}]",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

pub fn linear(a: LinearArgs) -> Res {
    if a.n_times < 2 || !(a.t0 > 0.0 && a.t0 < a.t1) {
        return Err(usage("need 0 < t0 < t1 and n_times >= 2"));
    }
    let window = match &a.window {
        Some(w) => parse_window(w)?,
        None => (a.t0, a.t1),
    };
    let spec = EnsembleSpec {
        beta: a.beta,
        eta_max: a.eta_max,
        n_eta: a.n_eta,
        k_set: a.k_set.clone(),
        width: a.width,
        theta_factor: C64::new(a.theta_factor, 0.0),
        times: geometric_times(a.t0, a.t1, a.n_times),
        tol: a.tol,
    };
    let (series, fits) = ensemble_rates(&spec, window).map_err(numeric)?;
    let mut s = format!("t,{}\n", LinearSeries::NAMES.join(","));
    for i in 0..series.t.len() {
        let cols: Vec<String> = series.columns().iter().map(|c| csv_f64(c[i])).collect();
        let _ = writeln!(s, "{},{}", csv_f64(series.t[i]), cols.join(","));
    }
    emit(a.out.as_deref(), &s)?;
    for (name, f) in LinearSeries::NAMES.iter().zip(&fits) {
        eprintln!("{name}: slope {:.4} ± {:.4}", f.slope, f.stderr);
    }
    if a.check {
        let targets = [(-0.5, 0.05), (-0.5, 0.05), (-1.5, 0.10), (0.5, 0.05), (0.5, 0.05)];
        let mut ok = true;
        for ((name, f), (c, tol)) in LinearSeries::NAMES.iter().zip(&fits).zip(targets) {
            ok &= check_line(name, f.slope, c - tol, c + tol);
        }
        if !ok {
            return Err(CliError::Check("linear exponents outside their windows".into()));
        }
    }
    Ok(())
}

pub fn toy(a: ToyArgs) -> Res {
    let model: ToyModel = a.model.parse().map_err(usage)?;
    let runs: Vec<ToyRun> = a
        .sigmas
        .iter()
        .map(|&s| integrate_model(model, s, a.tol))
        .collect::<Result<_, _>>()
        .map_err(numeric)?;
    let mut s = String::from("sigma,f_r_mid,f_nr_mid,f_r_end,f_nr_end\n");
    for r in &runs {
        let vals = [r.sigma, r.f_r_mid(), r.f_nr_mid(), r.f_r_end(), r.f_nr_end()];
        let _ = writeln!(s, "{}", vals.map(csv_f64).join(","));
    }
    let fit = fit_growth_exponent(&runs).ok();
    if let Some(f) = &fit {
        let _ = writeln!(
            s,
            "# fit gamma_r={} gamma_nr_mid={} gamma_nr_end={} r2={}",
            f.gamma_r, f.gamma_nr_mid, f.gamma_nr_end, f.r2
        );
    }
    emit(a.out.as_deref(), &s)?;
    if a.check {
        let c = runs.iter().map(|r| envelope_constant(r, 2.0)).fold(0.0, f64::max);
        let mut ok = check_line("envelope constant (gamma = 2)", c, 0.0, 10.0);
        let mut sorted = runs.clone();
        sorted.sort_by(|x, y| x.sigma.partial_cmp(&y.sigma).unwrap());
        if sorted.len() >= 3 {
            let n = sorted.len();
            let slope = |i: usize, j: usize| {
                (sorted[j].log_end.1 - sorted[i].log_end.1) / (sorted[j].sigma / sorted[i].sigma).ln()
            };
            let (lo, hi) = (slope(n - 3, n - 2), slope(n - 2, n - 1));
            ok &= check_line("endpoint exponent drift", (hi - lo).abs(), 0.0, 0.05);
        } else {
            eprintln!("FAIL endpoint exponent drift: needs three sigma values");
            ok = false;
        }
        // Polynomial growth: ln f_NR(σ)/ln σ at the largest σ does not
        // exceed its value at any smaller σ.
        let ratios: Vec<f64> = sorted.iter().map(|r| r.log_end.1 / r.sigma.ln()).collect();
        if let Some((last, rest)) = ratios.split_last() {
            let prev = rest.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            ok &= check_line("ln f_NR / ln sigma excess at top sigma", last - prev, f64::NEG_INFINITY, 0.0);
        }
        if !ok {
            return Err(CliError::Check("toy envelopes outside their windows".into()));
        }
    }
    Ok(())
}

pub fn simulate(a: SimulateArgs) -> Res {
    let mut cfg = load_config(a.config.as_ref(), &a.set)?;
    if let Some(d) = a.out_dir {
        cfg.out_dir = Some(d);
    }
    cfg.adaptive |= a.adaptive;
    cfg.linear_only |= a.linear_only;
    validate_config(&cfg).map_err(usage)?;
    let window = match &a.window {
        Some(w) => parse_window(w)?,
        None => (10.0f64.min(cfg.t_end / 2.0), cfg.t_end),
    };
    let out = run(&cfg).map_err(numeric)?;
    if cfg.out_dir.is_none() {
        print!("{}", diag_csv(&out.rows));
    }
    eprintln!(
        "{} steps in {:.1} s; max wrap ratio {:.2e}; resolution horizon {:.3}",
        out.steps, out.wall_seconds, out.guards.max_wrap_ratio, out.guards.resolution_horizon
    );
    for f in &out.files {
        eprintln!("wrote {}", f.display());
    }
    if a.check {
        let t: Vec<f64> = out.rows.iter().map(|r| r.t).collect();
        let windows = [
            ("l2_omega_neq", 0.35, 0.65),
            ("l2_gradtheta_neq", 0.35, 0.65),
            ("l2_uy_neq", -1.7, -1.3),
            ("l2_theta_neq", -0.65, -0.35),
        ];
        let mut ok = true;
        for (name, lo, hi) in windows {
            let v: Vec<f64> = out
                .rows
                .iter()
                .map(|r| match name {
                    "l2_omega_neq" => r.l2_omega_neq,
                    "l2_gradtheta_neq" => r.l2_gradtheta_neq,
                    "l2_uy_neq" => r.l2_uy_neq,
                    _ => r.l2_theta_neq,
                })
                .collect();
            let slope = rate_fit(&t, &v, window).map_or(f64::NAN, |f| f.slope);
            ok &= check_line(name, slope, lo, hi);
        }
        let e0 = out.rows[0].energy;
        let res = out
            .rows
            .iter()
            .filter(|r| r.t > 0.0)
            .map(|r| r.energy_residual.abs() / (e0 * r.t))
            .fold(0.0, f64::max);
        if e0 > 0.0 {
            ok &= check_line("energy residual per unit time", res, 0.0, 1e-6);
        }
        if !ok {
            return Err(CliError::Check("run outside its acceptance windows".into()));
        }
    }
    Ok(())
}

pub fn rates(a: RatesArgs) -> Res {
    let window = parse_window(&a.window)?;
    let text = std::fs::read_to_string(&a.csv)
        .map_err(|e| usage(format!("cannot read {}: {e}", a.csv.display())))?;
    let series = NormSeries::from_csv(&text).map_err(usage)?;
    let names: Vec<String> = if a.norms.is_empty() {
        SWEEP_NORMS.iter().map(|s| s.to_string()).collect()
    } else {
        a.norms.clone()
    };
    let mut s = String::from("norm_name,window_lo,window_hi,slope,stderr\n");
    for n in &names {
        let f = series.fit(n, window).map_err(numeric)?;
        let vals = [f.window.0, f.window.1, f.slope, f.stderr].map(csv_f64);
        let _ = writeln!(s, "{n},{}", vals.join(","));
    }
    emit(a.out.as_deref(), &s)
}

pub fn sweep(a: SweepArgs) -> Res {
    let template = load_config(a.config.as_ref(), &a.set)?;
    let axes = a
        .axes
        .iter()
        .map(|s| SweepAxis::parse(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let spec = SweepSpec {
        template,
        axes,
        parallelism: a.parallel,
        window: parse_window(&a.window)?,
        out_dir: a.out_dir,
    };
    let out = bqc::io::sweep(&spec).map_err(usage)?;
    eprintln!(
        "{} runs, {} failed; aggregate in {}",
        out.runs,
        out.failures.len(),
        out.aggregate_path.display()
    );
    for (i, e) in &out.failures {
        eprintln!("run {i}: {e}");
    }
    if out.failures.is_empty() {
        Ok(())
    } else {
        Err(numeric(format!("{} of {} runs failed", out.failures.len(), out.runs)))
    }
}
