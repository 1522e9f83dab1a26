//! Numerical laboratory for the three-wave nonlinear Schrödinger system
//!
//!   iγ₁∂ₜu + Δu + w v̄ = 0
//!   iγ₂∂ₜv + Δv + w ū = 0
//!   iγ₃∂ₜw + Δw + u v = 0
//!
//! on a periodic torus [−L, L)^N, N ≤ 4: pseudo-spectral Strang evolution
//! with conservation monitoring, standing/traveling waves by Nehari-manifold
//! minimization, the sharp quartic-dimension Gagliardo–Nirenberg constant,
//! oscillating-data global-existence diagnostics, and the mass-resonance
//! (γ₁+γ₂ = γ₃) symmetry dichotomies.
//!
//! Start with the runnable examples (`cargo run --release --example
//! ground_state`, `conservation`, `galilean_dichotomy`, …) or the `triwave`
//! binary, whose subcommands mirror the library surface.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod fields;
pub mod functionals;
pub mod grid;
pub mod io;
pub mod solver;
pub mod state;

pub use error::{Error, Result};
pub use evolution::{
    classify_region, evolve, h1_bound, oscillation_scan, strang_step, threshold_constant,
    EvolveConfig, Region, ScanRow, ThresholdBranch, Trajectory, Verdict,
};
pub use fields::{band_limited, boundary_decay, gaussian};
pub use functionals::{
    action_gradient, classify_case, nehari_project, phase_map, report, tilde_report, Case,
    FunctionalReport, PhaseDirection,
};
pub use grid::{
    apply_gradient, apply_laplacian, from_spectral, inner, make_grid, to_spectral, ComplexField,
    Grid,
};
pub use solver::{
    gn_constant, ground_state, mu_estimate, nonexistence_probe, pohozaev_check,
    scaling_consistency, traveling_wave, GnResult, PohozaevReport, ProbeTrace, SolveOptions,
    WaveResult,
};
pub use state::{
    galilean_boost, gauge_align, gauge_transform, invariants, oscillating_data, scaling_transform,
    InvariantSet, Params, TriField,
};
