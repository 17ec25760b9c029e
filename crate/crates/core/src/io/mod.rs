//! Configuration files, snapshots, run manifests and sweeps.

mod config;
mod manifest;
mod snapshot;
mod sweep;

pub use config::{
    apply_key, parse_config, parse_config_onto, parse_config_str, validate_config, ConfigError,
    CONFIG_KEYS,
};
pub use manifest::RunManifest;
pub use snapshot::{
    read_snapshot, write_snapshot, Snapshot, SnapshotError, FLAG_LITTLE_ENDIAN, SNAPSHOT_MAGIC,
};
pub use sweep::{expand, sweep, SweepAxis, SweepOutcome, SweepSpec, SWEEP_NORMS};
