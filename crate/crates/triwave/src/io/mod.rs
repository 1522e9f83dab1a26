//! Persistent artifacts: run configuration, binary field snapshots, and
//! invariant time-series CSVs.

pub mod config;
pub mod series;
pub mod snapshot;
