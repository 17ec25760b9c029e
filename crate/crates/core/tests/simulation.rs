//! End-to-end properties of the solver, its outputs and the sweep driver.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use bqc::diagnostics::{coordinate_diagnostics, diag_csv, flow_norms};
use bqc::io::{parse_config_str, read_snapshot, sweep, SweepAxis, SweepSpec};
use bqc::linear::{integrate_mode_at, ModeState};
use bqc::spectral::{init_perturbation, run, Preset, SimConfig, Solver, SolverState};

fn small() -> SimConfig {
    SimConfig {
        kmax: 8,
        nv: 128,
        lv: 8.0 * PI,
        dt: 0.1,
        t_end: 2.0,
        diag_every: 5,
        ..SimConfig::default()
    }
}

fn tiny_random() -> SimConfig {
    SimConfig {
        kmax: 4,
        nv: 32,
        preset: Preset::RandomGevrey,
        seed: 7,
        ..small()
    }
}

#[test]
fn replay_from_manifest_is_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let cfg = SimConfig {
        out_dir: Some(first.clone()),
        ..tiny_random()
    };
    run(&cfg).unwrap();
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(first.join("manifest.json")).unwrap())
            .unwrap();
    let text = manifest["config"].as_str().unwrap();
    let (mut replay, _) = parse_config_str(text).unwrap();
    let second = dir.path().join("b");
    replay.out_dir = Some(second.clone());
    run(&replay).unwrap();
    let a = std::fs::read(first.join("diagnostics.csv")).unwrap();
    let b = std::fs::read(second.join("diagnostics.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn snapshots_restore_the_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SimConfig {
        out_dir: Some(dir.path().to_path_buf()),
        snapshot_every: 10,
        ..tiny_random()
    };
    let out = run(&cfg).unwrap();
    let last = dir.path().join("snap_000020.bqc");
    assert!(out.files.contains(&last));
    let snap = read_snapshot(&last).unwrap();
    assert_eq!(snap.t, out.state.t);
    let back = snap.to_state(cfg.dealias).unwrap();
    assert_eq!(back.omega, out.state.omega);
    assert_eq!(back.theta, out.state.theta);

    // Restarting from the midpoint snapshot reaches the same end state.
    let mid = read_snapshot(&dir.path().join("snap_000010.bqc"))
        .unwrap()
        .to_state(cfg.dealias)
        .unwrap();
    let mut solver = Solver::new(&cfg).unwrap();
    let mut st = SolverState::new(mid.t, mid.omega, mid.theta);
    for _ in 0..10 {
        solver.step_rk4(&mut st, cfg.dt).unwrap();
    }
    let diff = st
        .omega
        .data
        .iter()
        .zip(&out.state.omega.data)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(diff <= 1e-14 * out.state.omega.max_abs(), "{diff:e}");
}

#[test]
fn sweeps_are_deterministic_and_match_single_runs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = |out: &str, parallelism| SweepSpec {
        template: tiny_random(),
        axes: vec![
            SweepAxis::parse("epsilon=0.001,0.002").unwrap(),
            SweepAxis::parse("beta=1,2").unwrap(),
        ],
        parallelism,
        window: (0.5, 2.0),
        out_dir: dir.path().join(out),
    };
    let a = sweep(&spec("a", 1)).unwrap();
    let b = sweep(&spec("b", 3)).unwrap();
    assert_eq!(a.runs, 4);
    assert!(a.failures.is_empty(), "{:?}", a.failures);
    assert_eq!(a.aggregate_csv, b.aggregate_csv);

    let one = SweepSpec {
        axes: vec![SweepAxis::parse("beta=1").unwrap()],
        ..spec("c", 1)
    };
    sweep(&one).unwrap();
    let direct = run(&tiny_random()).unwrap();
    let swept = std::fs::read_to_string(dir.path().join("c/run_0000/diagnostics.csv")).unwrap();
    assert_eq!(swept, diag_csv(&direct.rows));
}

#[test]
fn linear_solver_reproduces_mode_trajectories() {
    let cfg = SimConfig {
        linear_only: true,
        dt: 0.01,
        t_end: 5.0,
        ..tiny_random()
    };
    let mut solver = Solver::new(&cfg).unwrap();
    let st0 = init_perturbation(&cfg).unwrap();
    let mut st = st0.clone();
    for i in 1..=500 {
        solver.step_rk4(&mut st, cfg.dt).unwrap();
        st.t = i as f64 * cfg.dt;
    }
    let g = solver.grid();
    let mask = solver.mask().to_vec();
    let mut worst = 0.0f64;
    for i in 0..g.len() {
        let k = g.k_of(i / g.nv);
        if k == 0 || !mask[i] {
            continue;
        }
        let m0 = ModeState {
            k,
            eta: g.eta_of(i % g.nv),
            t: 0.0,
            omega_hat: st0.omega.data[i],
            theta_hat: st0.theta.data[i],
        };
        let m = integrate_mode_at(&m0, cfg.beta, &[5.0], 1e-13).unwrap()[0];
        let d = (m.omega_hat - st.omega.data[i])
            .norm()
            .max((m.theta_hat - st.theta.data[i]).norm());
        worst = worst.max(d / m.omega_hat.norm().max(m.theta_hat.norm()));
    }
    assert!(worst < 1e-8, "{worst:e}");
}

fn end_state(cfg: &SimConfig, dt: f64) -> SolverState {
    let mut solver = Solver::new(cfg).unwrap();
    let mut st = init_perturbation(cfg).unwrap();
    let n = (cfg.t_end / dt).round() as usize;
    for _ in 0..n {
        solver.step_rk4(&mut st, dt).unwrap();
    }
    st
}

fn distance(a: &SolverState, b: &SolverState) -> f64 {
    a.omega
        .data
        .iter()
        .zip(&b.omega.data)
        .chain(a.theta.data.iter().zip(&b.theta.data))
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[test]
fn rk4_is_fourth_order() {
    let cfg = SimConfig {
        epsilon: 0.05,
        t_end: 1.0,
        ..tiny_random()
    };
    let s = [0.1, 0.05, 0.025].map(|dt| end_state(&cfg, dt));
    let ratio = distance(&s[0], &s[1]) / distance(&s[1], &s[2]);
    assert!((12.0..20.0).contains(&ratio), "{ratio}");
}

#[test]
fn mean_free_and_real_fields_stay_so() {
    let out = run(&SimConfig {
        epsilon: 0.05,
        ..tiny_random()
    })
    .unwrap();
    let st = &out.state;
    let scale = st.omega.max_abs();
    assert!(st.omega.data[0].norm() <= 1e-15 * scale);
    assert!(st.theta.data[0].norm() <= 1e-15 * scale);
    assert!(st.omega.is_hermitian() && st.theta.is_hermitian());
    let mut fft = bqc::spectral::Fft2::new(st.grid());
    let phys = fft.physical(&st.omega);
    let imag = phys.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let real = phys.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    assert!(imag <= 1e-12 * real, "{imag:e} vs {real:e}");
}

#[test]
fn parseval_matches_physical_quadrature() {
    let out = run(&SimConfig {
        epsilon: 0.05,
        ..tiny_random()
    })
    .unwrap();
    let st = &out.state;
    let g = st.grid();
    let spectral = flow_norms(&st.omega, &st.theta, st.t, 1.0).l2_omega;
    let mut fft = bqc::spectral::Fft2::new(g);
    let phys = fft.physical(&st.omega);
    let cell = (2.0 * PI / g.nz() as f64) * (g.lv / g.nv as f64);
    let quad = (phys.iter().map(|z| z.re * z.re).sum::<f64>() * cell).sqrt();
    assert!((spectral - quad).abs() <= 1e-12 * quad, "{spectral} vs {quad}");
}

#[test]
fn coordinate_quantities_satisfy_their_identities() {
    let out = run(&SimConfig {
        epsilon: 0.05,
        ..tiny_random()
    })
    .unwrap();
    let st = &out.state;
    let hist = &st.history;
    let c = coordinate_diagnostics(hist, st.grid(), st.t).unwrap();
    let w_now = hist.omega0.last().unwrap();
    for j in 0..st.grid().nv {
        let expect = (w_now[j] - c.h[j]) / st.t;
        assert!((c.big_h[j] - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
        // independent trapezoid of ω₀ for h
        let mut integral = 0.0;
        for i in 1..hist.len() {
            integral += 0.5 * (hist.t[i] - hist.t[i - 1]) * (hist.omega0[i][j] + hist.omega0[i - 1][j]);
        }
        assert!((c.h[j] - integral / st.t).abs() <= 1e-12 * (1.0 + c.h[j].abs()));
    }
}

#[test]
fn linear_energy_el_is_non_increasing() {
    // The linear flow only feeds the Cauchy-Kovalevskaya terms, which drain
    // E_L; nothing in it can raise the weighted energy.
    let out = run(&SimConfig {
        linear_only: true,
        epsilon: 0.01,
        t_end: 4.0,
        diag_every: 1,
        ..tiny_random()
    })
    .unwrap();
    assert!(out.rows[0].e_l.is_finite() && out.rows[0].e_l > 0.0);
    for w in out.rows.windows(2) {
        assert!(w[1].e_l <= w[0].e_l * (1.0 + 1e-10), "t = {}: {} > {}", w[1].t, w[1].e_l, w[0].e_l);
    }
}

#[test]
fn zero_state_is_a_fixed_point() {
    let cfg = tiny_random();
    let g = cfg.grid().unwrap();
    let mut st = SolverState::new(
        0.0,
        bqc::spectral::SpectralField::zeros(g),
        bqc::spectral::SpectralField::zeros(g),
    );
    let mut solver = Solver::new(&cfg).unwrap();
    solver.step_rk4(&mut st, 0.1).unwrap();
    assert!(st.omega.data.iter().chain(&st.theta.data).all(|z| *z == C64::new(0.0, 0.0)));
}
