//! Numerical laboratory for tensor monopoles in a spin-1 system.
//!
//! The crate builds the three-level Weyl-like Hamiltonians, evaluates their
//! quantum geometric tensor, the 3-form curvature and the Dixmier-Douady
//! charge, simulates the sudden-quench measurement protocol, and computes
//! lattice band structures. Everything is dimensionless with `hbar = 1`;
//! energies are in units of the drive amplitude `Omega_0`.
//!
//! Runnable examples live in `examples/`; the `tensormono` binary exposes
//! the same recipes as subcommands writing CSV or JSON tables.

pub mod band_spectra;
pub mod cli_runner;
pub mod error;
pub mod linalg;
pub mod quantum_geometry;
pub mod quench_sim;
pub mod qudit_models;
pub mod sweep;
pub mod topo_invariants;

pub use error::{Error, Result};
pub use linalg::{eigensystem, Eigensystem3, HermitianOperator3};
pub use qudit_models::{
    build_bloch, build_h4d, build_hexp, Angles, BlochPoint, Coord, HyperPoint, MonopoleFamily,
    ParamFamily, RabiDrive,
};
pub use sweep::SweepResult;
