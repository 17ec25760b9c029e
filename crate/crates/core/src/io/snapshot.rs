//! Binary snapshots.
//!
//! Layout, all little-endian:
//!
//! ```text
//! "BQC1"                                  4 bytes
//! kmax, nv, flags, reserved               u32 × 4
//! t, lv, beta, epsilon                    f64 × 4
//! Ω̂ then Θ̂, row-major, (re, im) pairs      f64 × 2 × 2·kmax·nv each
//! ```
//!
//! `flags` must be exactly [`FLAG_LITTLE_ENDIAN`]; a file written with the
//! other byte order shows the flag byte-swapped and is rejected.

use std::path::Path;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::spectral::{GridSpec, SolverState, SpectralError, SpectralField};

pub const SNAPSHOT_MAGIC: [u8; 4] = *b"BQC1";
pub const FLAG_LITTLE_ENDIAN: u32 = 1;
const HEADER: usize = 4 + 16 + 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SnapshotError {
    #[error("i/o: {0}")]
    Io(String),
    #[error("bad magic {0:?}, expected BQC1")]
    BadMagic([u8; 4]),
    #[error("truncated: {got} bytes, {expected} expected")]
    Truncated { expected: usize, got: usize },
    #[error("dimensions {kmax} x {nv} overflow")]
    DimensionOverflow { kmax: u32, nv: u32 },
    #[error("file is big-endian; only little-endian snapshots are supported")]
    CrossEndian,
    #[error("unknown flags {0:#x}")]
    UnknownFlags(u32),
    #[error("reserved field is {0}, expected 0")]
    Reserved(u32),
}

/// Decoded snapshot contents.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub kmax: u32,
    pub nv: u32,
    pub t: f64,
    pub lv: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub omega: Vec<C64>,
    pub theta: Vec<C64>,
}

impl Snapshot {
    pub fn from_state(state: &SolverState, beta: f64, epsilon: f64) -> Self {
        let g = state.grid();
        Self {
            kmax: g.kmax as u32,
            nv: g.nv as u32,
            t: state.t,
            lv: g.lv,
            beta,
            epsilon,
            omega: state.omega.data.clone(),
            theta: state.theta.data.clone(),
        }
    }

    /// Rebuilds a solver state; the dealias fraction is not stored.
    pub fn to_state(&self, dealias: f64) -> Result<SolverState, SpectralError> {
        let grid = GridSpec::new(self.kmax as usize, self.nv as usize, self.lv, dealias)?;
        let field = |data: &Vec<C64>| SpectralField {
            grid,
            data: data.clone(),
        };
        Ok(SolverState::new(self.t, field(&self.omega), field(&self.theta)))
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut b = Vec::with_capacity(HEADER + 32 * self.omega.len());
        b.extend_from_slice(&SNAPSHOT_MAGIC);
        for u in [self.kmax, self.nv, FLAG_LITTLE_ENDIAN, 0] {
            b.extend_from_slice(&u.to_le_bytes());
        }
        for x in [self.t, self.lv, self.beta, self.epsilon] {
            b.extend_from_slice(&x.to_le_bytes());
        }
        for c in self.omega.iter().chain(&self.theta) {
            b.extend_from_slice(&c.re.to_le_bytes());
            b.extend_from_slice(&c.im.to_le_bytes());
        }
        b
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, SnapshotError> {
        if bytes.len() < HEADER {
            if bytes.len() >= 4 && bytes[..4] != SNAPSHOT_MAGIC {
                return Err(SnapshotError::BadMagic(bytes[..4].try_into().unwrap()));
            }
            return Err(SnapshotError::Truncated {
                expected: HEADER,
                got: bytes.len(),
            });
        }
        let magic: [u8; 4] = bytes[..4].try_into().unwrap();
        if magic != SNAPSHOT_MAGIC {
            return Err(SnapshotError::BadMagic(magic));
        }
        let u = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
        let f = |off: usize| f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
        let (kmax, nv, flags, reserved) = (u(0), u(1), u(2), u(3));
        if flags != FLAG_LITTLE_ENDIAN {
            if flags.swap_bytes() == FLAG_LITTLE_ENDIAN {
                return Err(SnapshotError::CrossEndian);
            }
            return Err(SnapshotError::UnknownFlags(flags));
        }
        if reserved != 0 {
            return Err(SnapshotError::Reserved(reserved));
        }
        let overflow = SnapshotError::DimensionOverflow { kmax, nv };
        let n = (kmax as usize)
            .checked_mul(2)
            .and_then(|x| x.checked_mul(nv as usize))
            .ok_or(overflow.clone())?;
        let expected = n
            .checked_mul(32)
            .and_then(|x| x.checked_add(HEADER))
            .ok_or(overflow)?;
        if bytes.len() != expected {
            return Err(SnapshotError::Truncated {
                expected,
                got: bytes.len(),
            });
        }
        let coeff = |i: usize| {
            let off = HEADER + 16 * i;
            C64::new(f(off), f(off + 8))
        };
        Ok(Self {
            kmax,
            nv,
            t: f(20),
            lv: f(28),
            beta: f(36),
            epsilon: f(44),
            omega: (0..n).map(coeff).collect(),
            theta: (n..2 * n).map(coeff).collect(),
        })
    }
}

pub fn write_snapshot(
    state: &SolverState,
    beta: f64,
    epsilon: f64,
    path: &Path,
) -> Result<(), SnapshotError> {
    std::fs::write(path, Snapshot::from_state(state, beta, epsilon).encode())
        .map_err(|e| SnapshotError::Io(e.to_string()))
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot, SnapshotError> {
    let bytes = std::fs::read(path).map_err(|e| SnapshotError::Io(e.to_string()))?;
    Snapshot::decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn state() -> SolverState {
        let g = GridSpec::new(3, 8, 8.0 * PI, 2.0 / 3.0).unwrap();
        let mut w = SpectralField::zeros(g);
        let mut th = SpectralField::zeros(g);
        for (i, (a, b)) in w.data.iter_mut().zip(th.data.iter_mut()).enumerate() {
            *a = C64::new((i as f64).sin() * 1e-300, -(i as f64) / 7.0);
            *b = C64::new(f64::MIN_POSITIVE, i as f64 * PI);
        }
        SolverState::new(12.375, w, th)
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let s = Snapshot::from_state(&state(), 1.5, 0.005);
        let back = Snapshot::decode(&s.encode()).unwrap();
        assert_eq!(back, s);
        let st = back.to_state(2.0 / 3.0).unwrap();
        assert_eq!(st.omega, state().omega);
        assert_eq!(st.t.to_bits(), 12.375f64.to_bits());
    }

    #[test]
    fn corrupt_files_are_typed_errors() {
        let good = Snapshot::from_state(&state(), 1.0, 0.0).encode();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(Snapshot::decode(&bad), Err(SnapshotError::BadMagic(_))));
        assert!(matches!(
            Snapshot::decode(&good[..good.len() - 1]),
            Err(SnapshotError::Truncated { .. })
        ));
        let mut be = good.clone();
        be[12..16].copy_from_slice(&FLAG_LITTLE_ENDIAN.to_be_bytes());
        assert_eq!(Snapshot::decode(&be), Err(SnapshotError::CrossEndian));
        let mut big = good.clone();
        big[4..8].copy_from_slice(&u32::MAX.to_le_bytes());
        big[8..12].copy_from_slice(&u32::MAX.to_le_bytes());
        assert!(matches!(
            Snapshot::decode(&big),
            Err(SnapshotError::DimensionOverflow { .. } | SnapshotError::Truncated { .. })
        ));
        assert!(matches!(Snapshot::decode(b"BQ"), Err(SnapshotError::Truncated { .. })));
    }
}
