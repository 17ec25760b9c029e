use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::SpectralError;

/// Doubly periodic grid: `z ∈ [0, 2π)` with `2·kmax` points, `v ∈ [0, L_v)`
/// with `nv` points.
///
/// Coefficients are stored row-major in FFT order: row `r` holds
/// `k = r` for `r < kmax` and `k = r − 2·kmax` otherwise, column `c` holds
/// `n = c` for `c < nv/2` and `n = c − nv` otherwise, with `η_n = 2πn/L_v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub kmax: usize,
    pub nv: usize,
    pub lv: f64,
    /// Retained fraction of each axis' half-width; 2/3 is alias-free for
    /// quadratic products.
    pub dealias: f64,
}

impl GridSpec {
    pub fn new(kmax: usize, nv: usize, lv: f64, dealias: f64) -> Result<Self, SpectralError> {
        let g = Self {
            kmax,
            nv,
            lv,
            dealias,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        let bad = |m: &str| Err(SpectralError::Grid(m.to_string()));
        if self.kmax < 2 {
            return bad("kmax must be at least 2");
        }
        if self.nv < 4 || self.nv % 2 != 0 {
            return bad("nv must be even and at least 4");
        }
        if !(self.lv > 0.0 && self.lv.is_finite()) {
            return bad("lv must be positive");
        }
        if !(self.dealias > 0.0 && self.dealias <= 1.0) {
            return bad("dealias must lie in (0, 1]");
        }
        if self.nz().checked_mul(self.nv).is_none_or(|n| n > 1 << 28) {
            return bad("grid too large");
        }
        Ok(())
    }

    pub fn nz(&self) -> usize {
        2 * self.kmax
    }

    pub fn len(&self) -> usize {
        self.nz() * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn k_of(&self, row: usize) -> i64 {
        if row < self.kmax {
            row as i64
        } else {
            row as i64 - self.nz() as i64
        }
    }

    pub fn n_of(&self, col: usize) -> i64 {
        if col < self.nv / 2 {
            col as i64
        } else {
            col as i64 - self.nv as i64
        }
    }

    pub fn eta_of(&self, col: usize) -> f64 {
        2.0 * PI * self.n_of(col) as f64 / self.lv
    }

    /// Storage index of `(k, n)`, if representable.
    pub fn index(&self, k: i64, n: i64) -> Option<usize> {
        let (nz, nv) = (self.nz() as i64, self.nv as i64);
        if k < -(self.kmax as i64) || k >= self.kmax as i64 || n < -nv / 2 || n >= nv / 2 {
            return None;
        }
        Some((k.rem_euclid(nz) * nv + n.rem_euclid(nv)) as usize)
    }

    /// Index of the Hermitian partner `(−k, −n)`.
    pub fn partner(&self, idx: usize) -> usize {
        let (r, c) = (idx / self.nv, idx % self.nv);
        ((self.nz() - r) % self.nz()) * self.nv + (self.nv - c) % self.nv
    }

    /// Largest retained `|k|` and `|n|`.
    pub fn cutoffs(&self) -> (i64, i64) {
        let cut = |half: usize| {
            let x = self.dealias * half as f64;
            (x - 1e-9).ceil() as i64 - 1
        };
        (cut(self.kmax), cut(self.nv / 2))
    }

    pub fn mask(&self) -> Vec<bool> {
        let (kc, nc) = self.cutoffs();
        (0..self.len())
            .map(|i| {
                let (r, c) = (i / self.nv, i % self.nv);
                self.k_of(r).abs() <= kc && self.n_of(c).abs() <= nc
            })
            .collect()
    }

    /// `z_i = 2πi/N_z`.
    pub fn z_of(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.nz() as f64
    }

    /// `v_j = j·L_v/N_v`; the periodic seam `|v| = L_v/2` sits at `j = N_v/2`.
    pub fn v_of(&self, j: usize) -> f64 {
        self.lv * j as f64 / self.nv as f64
    }

    /// `v_j` wrapped into `[−L_v/2, L_v/2)`.
    pub fn y_of(&self, j: usize) -> f64 {
        self.lv * self.n_of(j) as f64 / self.nv as f64
    }

    /// `2π L_v`, the area of the periodic cell.
    pub fn area(&self) -> f64 {
        2.0 * PI * self.lv
    }
}

/// Fourier coefficients of a real field, `f(z, v) = Σ f̂(k, n) e^{i(kz + η_n v)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub data: Vec<C64>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            data: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn get(&self, k: i64, n: i64) -> C64 {
        self.grid
            .index(k, n)
            .map_or(C64::new(0.0, 0.0), |i| self.data[i])
    }

    /// Sets `(k, n)` and its partner `(−k, −n)` to keep the field real.
    pub fn set_real_pair(&mut self, k: i64, n: i64, value: C64) {
        if let Some(i) = self.grid.index(k, n) {
            let j = self.grid.partner(i);
            if i == j {
                self.data[i] = C64::new(value.re, 0.0);
            } else {
                self.data[i] = value;
                self.data[j] = value.conj();
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), SpectralError> {
        if self.grid != other.grid {
            return Err(SpectralError::SizeMismatch);
        }
        Ok(())
    }

    /// Zeroes dealiased coefficients and the mean, and replaces each pair by
    /// its Hermitian part. The result satisfies `f̂(−κ) = conj f̂(κ)` exactly.
    pub fn project(&mut self, mask: &[bool]) {
        let g = self.grid;
        for i in 0..self.data.len() {
            let j = g.partner(i);
            if j < i {
                continue;
            }
            if !mask[i] || !mask[j] {
                self.data[i] = C64::new(0.0, 0.0);
                self.data[j] = C64::new(0.0, 0.0);
            } else if i == j {
                self.data[i].im = 0.0;
            } else {
                let a = self.data[i];
                let b = self.data[j];
                self.data[i] = (a + b.conj()) * 0.5;
                self.data[j] = (b + a.conj()) * 0.5;
            }
        }
        self.data[0] = C64::new(0.0, 0.0);
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.data.len()).all(|i| self.data[self.grid.partner(i)] == self.data[i].conj())
    }

    /// `(Σ|f̂|²)^{1/2}`, the root mean square of `f` over the cell.
    pub fn coefficient_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖f‖_{L²}` over the periodic cell.
    pub fn l2_norm(&self) -> f64 {
        self.coefficient_norm() * self.grid.area().sqrt()
    }

    /// Real inner product `∫ f g` over the periodic cell.
    pub fn pairing(&self, other: &Self) -> Result<f64, SpectralError> {
        self.check_same(other)?;
        Ok(self.grid.area()
            * self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a * b.conj()).re)
                .sum::<f64>())
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        for (y, x) in self.data.iter_mut().zip(&x.data) {
            *y += x * a;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Cached 2D transforms for one grid. Row transforms run in parallel; the
/// result does not depend on the thread count.
pub struct Fft2 {
    grid: GridSpec,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    buf: Vec<C64>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("grid", &self.grid).finish()
    }
}

impl Fft2 {
    pub fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            row_fwd: planner.plan_fft_forward(grid.nv),
            row_inv: planner.plan_fft_inverse(grid.nv),
            col_fwd: planner.plan_fft_forward(grid.nz()),
            col_inv: planner.plan_fft_inverse(grid.nz()),
            buf: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    fn run(&mut self, data: &mut [C64], inverse: bool) {
        let (nz, nv) = (self.grid.nz(), self.grid.nv);
        let (row, col) = if inverse {
            (&self.row_inv, &self.col_inv)
        } else {
            (&self.row_fwd, &self.col_fwd)
        };
        data.par_chunks_mut(nv).for_each(|r| row.process(r));
        transpose(data, &mut self.buf, nz, nv);
        self.buf.par_chunks_mut(nz).for_each(|c| col.process(c));
        transpose(&self.buf, data, nv, nz);
    }

    /// Coefficients to grid values: `f(z_i, v_j) = Σ f̂ e^{i(k z_i + η v_j)}`.
    pub fn to_physical(&mut self, data: &mut [C64]) {
        self.run(data, true);
    }

    /// Grid values to coefficients (the inverse of [`Fft2::to_physical`]).
    pub fn to_spectral(&mut self, data: &mut [C64]) {
        self.run(data, false);
        let s = 1.0 / self.grid.len() as f64;
        data.iter_mut().for_each(|c| *c *= s);
    }

    pub fn field_from_physical(&mut self, values: &[f64]) -> SpectralField {
        let mut data: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.to_spectral(&mut data);
        SpectralField {
            grid: self.grid,
            data,
        }
    }

    pub fn physical(&mut self, field: &SpectralField) -> Vec<C64> {
        let mut d = field.data.clone();
        self.to_physical(&mut d);
        d
    }
}

fn transpose(src: &[C64], dst: &mut [C64], rows: usize, cols: usize) {
    dst.par_chunks_mut(rows).enumerate().for_each(|(c, out)| {
        for (r, o) in out.iter_mut().enumerate() {
            *o = src[r * cols + c];
        }
    });
}

/// Values on the `v`-grid of a single `k = 0` row: `Σ_n ĝ(n) e^{iη_n v_j}`.
pub fn row_to_physical(grid: &GridSpec, row: &[C64]) -> Vec<f64> {
    let mut d = row.to_vec();
    FftPlanner::new().plan_fft_inverse(grid.nv).process(&mut d);
    d.into_iter().map(|c| c.re).collect()
}

/// Coefficients of real samples on the `v`-grid.
pub fn row_to_spectral(grid: &GridSpec, values: &[f64]) -> Vec<C64> {
    let mut d: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(grid.nv).process(&mut d);
    let s = 1.0 / grid.nv as f64;
    d.iter_mut().for_each(|c| *c *= s);
    d
}
