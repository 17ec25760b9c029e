use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::row_to_spectral;
use super::{GridSpec, Preset, SimConfig, SolverState, SpectralError, SpectralField};

/// `e^{−y²/2}` on the `v`-grid, summed over the two nearest periodic images
/// on each side.
fn periodized_gaussian(grid: &GridSpec) -> Vec<f64> {
    (0..grid.nv)
        .map(|j| {
            let y = grid.y_of(j);
            (-2..=2)
                .map(|m| {
                    let x = y + m as f64 * grid.lv;
                    (-0.5 * x * x).exp()
                })
                .sum()
        })
        .collect()
}

/// `amp · e^{−y²/2} cos z`, masked.
pub fn gaussian_stripe(grid: GridSpec, amp: f64) -> SpectralField {
    let g = row_to_spectral(&grid, &periodized_gaussian(&grid));
    let mut f = SpectralField::zeros(grid);
    let nv = grid.nv;
    for (c, gc) in g.iter().enumerate() {
        let v = gc * (0.5 * amp);
        f.data[nv + c] = v;
        f.data[(grid.nz() - 1) * nv + c] = v;
    }
    f.project(&grid.mask());
    f
}

/// Uniform random phases with `|f̂(k, η)| = amp · e^{−λ0(|k|+|η|)^s}` on the
/// retained modes. Coefficients are drawn in storage order, one per
/// Hermitian pair.
pub fn random_gevrey(
    grid: GridSpec,
    amp: f64,
    lambda0: f64,
    s: f64,
    rng: &mut ChaCha8Rng,
) -> SpectralField {
    let mask = grid.mask();
    let mut f = SpectralField::zeros(grid);
    for i in 1..grid.len() {
        let j = grid.partner(i);
        if j <= i || !mask[i] {
            continue;
        }
        let phase = 2.0 * PI * rng.random::<f64>();
        let k = grid.k_of(i / grid.nv).abs() as f64;
        let eta = grid.eta_of(i % grid.nv).abs();
        let z = C64::from_polar(amp * (-lambda0 * (k + eta).powf(s)).exp(), phase);
        f.data[i] = z;
        f.data[j] = z.conj();
    }
    f
}

/// Initial state for the configured preset. Every preset is mean-free and
/// real.
pub fn init_perturbation(config: &SimConfig) -> Result<SolverState, SpectralError> {
    config.validate()?;
    let grid = config.grid()?;
    let (omega, theta) = match config.preset {
        Preset::GaussianStripe => (
            gaussian_stripe(grid, config.epsilon),
            SpectralField::zeros(grid),
        ),
        Preset::Paired => (
            gaussian_stripe(grid, config.epsilon),
            gaussian_stripe(grid, config.epsilon_theta()),
        ),
        Preset::RandomGevrey => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let w = random_gevrey(grid, config.epsilon, config.lambda0, config.s, &mut rng);
            let t = random_gevrey(grid, config.epsilon, config.lambda0, config.s, &mut rng);
            (w, t)
        }
    };
    Ok(SolverState::new(0.0, omega, theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stripe_l2_norm_matches_gaussian_integral() {
        let grid = GridSpec::new(8, 256, 8.0 * PI, 2.0 / 3.0).unwrap();
        let f = gaussian_stripe(grid, 0.01);
        let exact = 0.01 * (PI.sqrt() * PI).sqrt();
        assert!((f.l2_norm() / exact - 1.0).abs() < 1e-6);
        assert!(f.is_hermitian());
        assert_eq!(f.get(0, 0), C64::new(0.0, 0.0));
    }

    #[test]
    fn zero_amplitude_gives_zero_state() {
        for preset in Preset::ALL {
            let c = SimConfig {
                epsilon: 0.0,
                kmax: 4,
                nv: 16,
                preset,
                ..SimConfig::default()
            };
            let s = init_perturbation(&c).unwrap();
            assert_eq!(s.omega.max_abs(), 0.0);
            assert_eq!(s.theta.max_abs(), 0.0);
        }
    }

    #[test]
    fn random_gevrey_is_reproducible_and_shaped() {
        let c = SimConfig {
            kmax: 8,
            nv: 32,
            preset: Preset::RandomGevrey,
            seed: 9,
            ..SimConfig::default()
        };
        let a = init_perturbation(&c).unwrap();
        let b = init_perturbation(&c).unwrap();
        assert_eq!(a.omega.data, b.omega.data);
        assert_eq!(a.theta.data, b.theta.data);
        assert_ne!(a.omega.data, a.theta.data);
        let other = init_perturbation(&SimConfig { seed: 10, ..c.clone() }).unwrap();
        assert_ne!(a.omega.data, other.omega.data);
        let g = a.omega.grid;
        let z = a.omega.get(2, -3);
        let expect = c.epsilon * (-(2.0 + g.eta_of(3)).powf(c.s)).exp();
        assert!((z.norm() - expect).abs() < 1e-15);
        assert!(a.omega.is_hermitian());
    }
}
