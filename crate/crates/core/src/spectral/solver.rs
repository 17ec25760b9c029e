use num_complex::Complex64 as C64;

use super::field::{row_to_physical, Fft2};
use super::{GridSpec, SimConfig, SpectralError, SpectralField};
use crate::diagnostics::ZeroModeHistory;

/// Time, both fields and the sampled zero-mode history.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: f64,
    /// `Ω̂`
    pub omega: SpectralField,
    /// `Θ̂`
    pub theta: SpectralField,
    pub history: ZeroModeHistory,
}

impl SolverState {
    pub fn new(t: f64, omega: SpectralField, theta: SpectralField) -> Self {
        Self {
            t,
            omega,
            theta,
            history: ZeroModeHistory::default(),
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.omega.grid
    }

    /// Appends `ω₀(t, ·)` and `u₀^x(t, ·)` on the `v`-grid.
    pub fn record_zero_mode(&mut self) {
        let g = self.grid();
        let row = &self.omega.data[..g.nv];
        let ux: Vec<C64> = (0..g.nv)
            .map(|c| {
                let eta = g.eta_of(c);
                // û^x = −iη Ψ̂ = iΩ̂/η on k = 0
                if eta == 0.0 {
                    C64::new(0.0, 0.0)
                } else {
                    C64::new(0.0, 1.0 / eta) * row[c]
                }
            })
            .collect();
        self.history
            .push(self.t, row_to_physical(&g, row), row_to_physical(&g, &ux));
    }
}

/// `Ψ̂ = −Ω̂ / p_k(t, η)` with `p = k² + (η − kt)²`; the mean is set to 0.
pub fn biot_savart_sheared(omega: &SpectralField, t: f64) -> SpectralField {
    let g = omega.grid;
    let mut psi = SpectralField::zeros(g);
    for (i, (out, w)) in psi.data.iter_mut().zip(&omega.data).enumerate() {
        let k = g.k_of(i / g.nv) as f64;
        let eta = g.eta_of(i % g.nv);
        let p = k * k + (eta - k * t) * (eta - k * t);
        if p > 0.0 {
            *out = -w / p;
        }
    }
    psi
}

/// `∇⊥_L Ψ · ∇_L f`, dealiased.
///
/// With `∇_L = (∂_z, ∂_v − t∂_z)` and `∇⊥_L = (−(∂_v − t∂_z), ∂_z)` the terms
/// carrying `t` cancel and the product is the plain Jacobian
/// `∂_zΨ ∂_v f − ∂_vΨ ∂_z f`, so no time argument is needed.
pub fn nonlinear_transport(
    f: &SpectralField,
    psi: &SpectralField,
) -> Result<SpectralField, SpectralError> {
    if f.grid != psi.grid {
        return Err(SpectralError::SizeMismatch);
    }
    let g = f.grid;
    let mut fft = Fft2::new(g);
    let mut a = gradient_packed(psi);
    let mut b = gradient_packed(f);
    fft.to_physical(&mut a);
    fft.to_physical(&mut b);
    let mut n: Vec<C64> = a
        .iter()
        .zip(&b)
        .map(|(a, b)| C64::new(a.re * b.im - a.im * b.re, 0.0))
        .collect();
    fft.to_spectral(&mut n);
    let mut out = SpectralField { grid: g, data: n };
    out.project(&g.mask());
    Ok(out)
}

/// `(ik − η) f̂`: its transform has `∂_z f` as real and `∂_v f` as imaginary
/// part.
fn gradient_packed(f: &SpectralField) -> Vec<C64> {
    let g = f.grid;
    f.data
        .iter()
        .enumerate()
        .map(|(i, c)| C64::new(-g.eta_of(i % g.nv), g.k_of(i / g.nv) as f64) * c)
        .collect()
}

/// Right-hand side at one stage, with the by-products the stepper needs.
#[derive(Debug, Clone)]
pub struct StageRhs {
    pub d_omega: SpectralField,
    pub d_theta: SpectralField,
    /// `∫ u^x u^y`
    pub flux: f64,
    /// `(max|u^z|, max|u^v|)` on the grid; zero when the nonlinearity is off.
    pub u_max: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub dt: f64,
    pub cfl_limit: f64,
    /// RK4 quadrature of `∫ u^x u^y` over the step.
    pub flux_increment: f64,
}

/// Owns transforms and scratch buffers for one grid.
#[derive(Debug)]
pub struct Solver {
    config: SimConfig,
    grid: GridSpec,
    mask: Vec<bool>,
    fft: Fft2,
}

impl Solver {
    pub fn new(config: &SimConfig) -> Result<Self, SpectralError> {
        config.validate()?;
        let grid = config.grid()?;
        Ok(Self {
            config: config.clone(),
            grid,
            mask: grid.mask(),
            fft: Fft2::new(grid),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn fft(&mut self) -> &mut Fft2 {
        &mut self.fft
    }

    /// `dΩ̂/dt = −iβ²kΘ̂ − N(Ω, Ψ)`, `dΘ̂/dt = ikΨ̂ − N(Θ, Ψ)`.
    pub fn rhs(
        &mut self,
        t: f64,
        omega: &SpectralField,
        theta: &SpectralField,
    ) -> Result<StageRhs, SpectralError> {
        if omega.grid != self.grid || theta.grid != self.grid {
            return Err(SpectralError::SizeMismatch);
        }
        let g = self.grid;
        let b2 = self.config.beta * self.config.beta;
        let psi = biot_savart_sheared(omega, t);
        let mut d_omega = SpectralField::zeros(g);
        let mut d_theta = SpectralField::zeros(g);
        let mut flux = 0.0;
        for i in 0..g.len() {
            let k = g.k_of(i / g.nv) as f64;
            let eta = g.eta_of(i % g.nv);
            d_omega.data[i] = C64::new(0.0, -b2 * k) * theta.data[i];
            d_theta.data[i] = C64::new(0.0, k) * psi.data[i];
            flux -= (eta - k * t) * k * psi.data[i].norm_sqr();
        }
        flux *= g.area();

        let mut u_max = (0.0, 0.0);
        if !self.config.linear_only {
            let mut a = gradient_packed(&psi);
            let mut bw = gradient_packed(omega);
            let mut bt = gradient_packed(theta);
            self.fft.to_physical(&mut a);
            self.fft.to_physical(&mut bw);
            self.fft.to_physical(&mut bt);
            // u^z = −∂_vΨ, u^v = ∂_zΨ
            for c in &a {
                u_max.0 = f64::max(u_max.0, c.im.abs());
                u_max.1 = f64::max(u_max.1, c.re.abs());
            }
            // Both products in one transform: N_Ω + i N_Θ.
            let mut n: Vec<C64> = (0..a.len())
                .map(|i| {
                    let (p, w, th) = (a[i], bw[i], bt[i]);
                    C64::new(p.re * w.im - p.im * w.re, p.re * th.im - p.im * th.re)
                })
                .collect();
            self.fft.to_spectral(&mut n);
            for i in 0..g.len() {
                let j = g.partner(i);
                let (x, y) = (n[i], n[j].conj());
                d_omega.data[i] -= (x + y) * 0.5;
                d_theta.data[i] -= (x - y) * C64::new(0.0, -0.5);
            }
        }
        d_omega.project(&self.mask);
        d_theta.project(&self.mask);
        Ok(StageRhs {
            d_omega,
            d_theta,
            flux,
            u_max,
        })
    }

    /// Largest admissible step: half the advective CFL number, and at most
    /// `1/β` so the buoyancy oscillation (frequency `≤ β`) stays well inside
    /// the RK4 stability region.
    pub fn cfl_limit(&self, u_max: (f64, f64)) -> f64 {
        let dz = 2.0 * std::f64::consts::PI / self.grid.nz() as f64;
        let dv = self.grid.lv / self.grid.nv as f64;
        let adv = 0.5 * f64::min(dz / u_max.0, dv / u_max.1);
        let lin = 1.0 / self.config.beta;
        adv.min(lin)
    }

    /// One classical RK4 step. Each stage state is re-projected onto real,
    /// mean-free, dealiased fields.
    pub fn step_rk4(&mut self, state: &mut SolverState, dt: f64) -> Result<StepInfo, SpectralError> {
        let t = state.t;
        let k1 = self.rhs(t, &state.omega, &state.theta)?;
        let limit = self.cfl_limit(k1.u_max);
        let dt = if dt > limit {
            if self.config.adaptive {
                limit
            } else {
                return Err(SpectralError::Cfl { t, dt, limit });
            }
        } else {
            dt
        };
        let stage = |base: &SolverState, k: &StageRhs, h: f64, mask: &[bool]| {
            let mut w = base.omega.clone();
            let mut th = base.theta.clone();
            w.axpy(h, &k.d_omega);
            th.axpy(h, &k.d_theta);
            w.project(mask);
            th.project(mask);
            (w, th)
        };
        let (w2, t2) = stage(state, &k1, 0.5 * dt, &self.mask);
        let k2 = self.rhs(t + 0.5 * dt, &w2, &t2)?;
        let (w3, t3) = stage(state, &k2, 0.5 * dt, &self.mask);
        let k3 = self.rhs(t + 0.5 * dt, &w3, &t3)?;
        let (w4, t4) = stage(state, &k3, dt, &self.mask);
        let k4 = self.rhs(t + dt, &w4, &t4)?;
        for (ks, c) in [(&k1, 1.0), (&k2, 2.0), (&k3, 2.0), (&k4, 1.0)] {
            state.omega.axpy(dt * c / 6.0, &ks.d_omega);
            state.theta.axpy(dt * c / 6.0, &ks.d_theta);
        }
        state.omega.project(&self.mask);
        state.theta.project(&self.mask);
        state.t = t + dt;
        if !state.omega.all_finite() || !state.theta.all_finite() {
            return Err(SpectralError::Blowup { t: state.t });
        }
        Ok(StepInfo {
            dt,
            cfl_limit: limit,
            flux_increment: dt / 6.0 * (k1.flux + 2.0 * k2.flux + 2.0 * k3.flux + k4.flux),
        })
    }

    /// `max |ω|` over the rows next to the periodic seam `|v| = L_v/2`,
    /// relative to `max |ω|`.
    pub fn wrap_ratio(&mut self, omega: &SpectralField) -> f64 {
        let g = self.grid;
        let phys = self.fft.physical(omega);
        let mut edge = 0.0f64;
        let mut all = 0.0f64;
        let seam = g.nv / 2;
        for (i, c) in phys.iter().enumerate() {
            let a = c.re.abs();
            all = all.max(a);
            if (i % g.nv).abs_diff(seam) <= 1 {
                edge = edge.max(a);
            }
        }
        if all == 0.0 {
            0.0
        } else {
            edge / all
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::presets::init_perturbation;
    use std::f64::consts::PI;

    fn small() -> SimConfig {
        SimConfig {
            kmax: 8,
            nv: 32,
            lv: 8.0 * PI,
            dt: 0.05,
            t_end: 1.0,
            ..SimConfig::default()
        }
    }

    fn random_field(grid: GridSpec, seed: u64) -> SpectralField {
        let mut f = SpectralField::zeros(grid);
        let mut x = seed;
        for c in f.data.iter_mut() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            *c = C64::new(a, b);
        }
        f.project(&grid.mask());
        f
    }

    #[test]
    fn biot_savart_examples() {
        let g = small().grid().unwrap();
        let mut w = SpectralField::zeros(g);
        w.set_real_pair(1, 0, C64::new(1.0, 0.0));
        assert_eq!(biot_savart_sheared(&w, 0.0).get(1, 0), C64::new(-1.0, 0.0));
        let t = 2.5;
        let psi = biot_savart_sheared(&w, t);
        assert!((psi.get(1, 0).re + 1.0 / (1.0 + t * t)).abs() < 1e-15);
        let f = random_field(g, 3);
        let psi = biot_savart_sheared(&f, 1.7);
        for i in 1..g.len() {
            let k = g.k_of(i / g.nv) as f64;
            let eta = g.eta_of(i % g.nv);
            let p = k * k + (eta - k * 1.7).powi(2);
            assert!((-(psi.data[i] * p) - f.data[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn transport_vanishes_for_zero_stream() {
        let g = small().grid().unwrap();
        let f = random_field(g, 1);
        let n = nonlinear_transport(&f, &SpectralField::zeros(g)).unwrap();
        assert_eq!(n.max_abs(), 0.0);
    }

    #[test]
    fn transport_support_of_single_modes() {
        let g = small().grid().unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_real_pair(1, 2, C64::new(0.3, 0.1));
        let mut psi = SpectralField::zeros(g);
        psi.set_real_pair(1, -1, C64::new(0.2, -0.4));
        let n = nonlinear_transport(&f, &psi).unwrap();
        assert!(n.max_abs() > 1e-3);
        for (i, c) in n.data.iter().enumerate() {
            let k = g.k_of(i / g.nv).abs();
            if k != 0 && k != 2 {
                assert!(c.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn transport_is_skew() {
        let g = small().grid().unwrap();
        for seed in 0..5 {
            let f = random_field(g, seed);
            let psi = random_field(g, seed + 100);
            let n = nonlinear_transport(&f, &psi).unwrap();
            let r = n.pairing(&f).unwrap().abs() / (n.l2_norm() * f.l2_norm());
            assert!(r < 1e-12, "{r}");
        }
    }

    #[test]
    fn zero_state_has_zero_rhs() {
        let c = small();
        let mut s = Solver::new(&c).unwrap();
        let z = SpectralField::zeros(s.grid());
        let r = s.rhs(3.0, &z, &z).unwrap();
        assert_eq!(r.d_omega.max_abs() + r.d_theta.max_abs(), 0.0);
    }

    #[test]
    fn linear_part_matches_mode_rhs() {
        use crate::linear::{mode_rhs, ModeState};
        let c = SimConfig {
            linear_only: true,
            beta: 1.3,
            ..small()
        };
        let mut s = Solver::new(&c).unwrap();
        let g = s.grid();
        let w = random_field(g, 7);
        let th = random_field(g, 8);
        let t = 0.9;
        let r = s.rhs(t, &w, &th).unwrap();
        for i in 0..g.len() {
            let m = ModeState {
                k: g.k_of(i / g.nv),
                eta: g.eta_of(i % g.nv),
                t,
                omega_hat: w.data[i],
                theta_hat: th.data[i],
            };
            let (a, b) = mode_rhs(&m, c.beta);
            if s.mask()[i] && i != 0 {
                assert!((a - r.d_omega.data[i]).norm() < 1e-15);
                assert!((b - r.d_theta.data[i]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn steps_preserve_reality_and_mean() {
        let c = SimConfig {
            preset: crate::spectral::Preset::RandomGevrey,
            epsilon: 0.05,
            ..small()
        };
        let mut s = Solver::new(&c).unwrap();
        let mut st = init_perturbation(&c).unwrap();
        for _ in 0..5 {
            s.step_rk4(&mut st, c.dt).unwrap();
        }
        assert!(st.omega.is_hermitian() && st.theta.is_hermitian());
        assert_eq!(st.omega.data[0], C64::new(0.0, 0.0));
        assert!((st.t - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cfl_violation_is_reported_or_adapted() {
        let c = SimConfig {
            beta: 1.0,
            dt: 1.5,
            ..small()
        };
        let mut s = Solver::new(&c).unwrap();
        let mut st = init_perturbation(&c).unwrap();
        assert!(matches!(s.step_rk4(&mut st, 1.5), Err(SpectralError::Cfl { .. })));
        let c = SimConfig { adaptive: true, ..c };
        let mut s = Solver::new(&c).unwrap();
        let info = s.step_rk4(&mut st, 1.5).unwrap();
        assert!(info.dt <= 1.0);
    }

    #[test]
    fn zero_mode_velocity_matches_stream_function() {
        let c = small();
        let g = c.grid().unwrap();
        let mut w = SpectralField::zeros(g);
        w.set_real_pair(0, 2, C64::new(0.0, 0.5));
        let mut st = SolverState::new(0.0, w, SpectralField::zeros(g));
        st.record_zero_mode();
        // ω₀ = −sin(η v), ψ₀ = sin(η v)/η², u^x = −∂_vψ = −cos(η v)/η
        let eta = g.eta_of(2);
        for j in 0..g.nv {
            let v = g.v_of(j);
            assert!((st.history.omega0[0][j] + (eta * v).sin()).abs() < 1e-14);
            assert!((st.history.ux0[0][j] + (eta * v).cos() / eta).abs() < 1e-13);
        }
    }
}
