//! Quantities of the nonlinear change of coordinates, recovered from the
//! zero mode. The solver works in the linear shear frame, so `v` is
//! identified with `y` here; the error of that identification is `O(‖h‖)`.

use crate::spectral::GridSpec;

use super::DiagError;

/// `ω₀(s, ·)` and `u₀^x(s, ·)` on the `v`-grid at increasing times `s`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZeroModeHistory {
    pub t: Vec<f64>,
    pub omega0: Vec<Vec<f64>>,
    pub ux0: Vec<Vec<f64>>,
}

impl ZeroModeHistory {
    pub fn push(&mut self, t: f64, omega0: Vec<f64>, ux0: Vec<f64>) {
        self.t.push(t);
        self.omega0.push(omega0);
        self.ux0.push(ux0);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Coordinate quantities at one time, on the `v`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordDiag {
    pub grid: GridSpec,
    pub t: f64,
    /// `h = (1/t) ∫₀ᵗ ω₀ ds`
    pub h: Vec<f64>,
    /// `𝓗 = (ω₀(t) − h)/t`
    pub big_h: Vec<f64>,
    /// `v̇ = (1/t)[u₀^x(t) − (1/t) ∫₀ᵗ u₀^x ds]`
    pub v_dot: Vec<f64>,
    /// `Φ = ∫₀ᵗ u₀^x ds`
    pub phi: Vec<f64>,
}

/// Trapezoid integrals of the history from its first sample (which must be
/// `s = 0`) up to the sample at `t`.
pub fn coordinate_diagnostics(
    history: &ZeroModeHistory,
    grid: GridSpec,
    t: f64,
) -> Result<CoordDiag, DiagError> {
    let insufficient = |m: String| Err(DiagError::InsufficientHistory(m));
    if history.len() < 2 {
        return insufficient(format!("{} samples, at least 2 are needed", history.len()));
    }
    if history.t[0] != 0.0 {
        return insufficient(format!("history starts at {} instead of 0", history.t[0]));
    }
    if !(t > 0.0) {
        return Err(DiagError::Precondition(format!("t = {t} must be positive")));
    }
    let tol = 1e-9 * t.max(1.0);
    let Some(last) = history.t.iter().position(|&s| (s - t).abs() <= tol) else {
        return insufficient(format!("no sample at t = {t}"));
    };
    let nv = grid.nv;
    if history.omega0.iter().chain(&history.ux0).any(|r| r.len() != nv) {
        return Err(DiagError::Precondition("history rows do not match the grid".into()));
    }
    let mut int_w = vec![0.0; nv];
    let mut int_u = vec![0.0; nv];
    for m in 0..last {
        let ds = 0.5 * (history.t[m + 1] - history.t[m]);
        for j in 0..nv {
            int_w[j] += ds * (history.omega0[m][j] + history.omega0[m + 1][j]);
            int_u[j] += ds * (history.ux0[m][j] + history.ux0[m + 1][j]);
        }
    }
    let h: Vec<f64> = int_w.iter().map(|x| x / t).collect();
    let big_h = (0..nv).map(|j| (history.omega0[last][j] - h[j]) / t).collect();
    let v_dot = (0..nv)
        .map(|j| (history.ux0[last][j] - int_u[j] / t) / t)
        .collect();
    Ok(CoordDiag {
        grid,
        t,
        h,
        big_h,
        v_dot,
        phi: int_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::new(4, 8, 2.0 * PI, 2.0 / 3.0).unwrap()
    }

    fn history(f: impl Fn(f64, usize) -> (f64, f64), n: usize, t1: f64) -> ZeroModeHistory {
        let mut h = ZeroModeHistory::default();
        for m in 0..=n {
            let s = t1 * m as f64 / n as f64;
            let (w, u): (Vec<f64>, Vec<f64>) = (0..8).map(|j| f(s, j)).unzip();
            h.push(s, w, u);
        }
        h
    }

    #[test]
    fn zero_history() {
        let h = history(|_, _| (0.0, 0.0), 10, 2.0);
        let c = coordinate_diagnostics(&h, grid(), 2.0).unwrap();
        for v in [&c.h, &c.big_h, &c.v_dot, &c.phi] {
            assert!(v.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn constant_in_time() {
        let h = history(|_, j| (0.3 + j as f64, -0.1), 7, 3.0);
        let c = coordinate_diagnostics(&h, grid(), 3.0).unwrap();
        for j in 0..8 {
            assert!((c.h[j] - (0.3 + j as f64)).abs() < 1e-14);
            assert!(c.big_h[j].abs() < 1e-14);
            assert!(c.v_dot[j].abs() < 1e-15);
            assert!((c.phi[j] + 0.3).abs() < 1e-14);
        }
    }

    #[test]
    fn quadrature_converges_for_smooth_history() {
        // ω₀ = cos s: h = sin t / t
        let t = 2.0;
        for (n, tol) in [(200, 1e-5), (2000, 1e-7)] {
            let h = history(|s, _| (s.cos(), 0.0), n, t);
            let c = coordinate_diagnostics(&h, grid(), t).unwrap();
            assert!((c.h[0] - t.sin() / t).abs() < tol);
            let expect = (t.cos() - t.sin() / t) / t;
            assert!((c.big_h[0] - expect).abs() < tol);
        }
    }

    #[test]
    fn errors() {
        let h = history(|_, _| (0.0, 0.0), 4, 1.0);
        assert!(coordinate_diagnostics(&h, grid(), 0.6).is_err());
        assert!(coordinate_diagnostics(&h, grid(), 0.0).is_err());
        assert!(coordinate_diagnostics(&ZeroModeHistory::default(), grid(), 1.0).is_err());
    }
}
