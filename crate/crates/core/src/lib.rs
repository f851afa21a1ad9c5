//! Steady-state Gaussian quantum coherence of a driven cavity-magnon-phonon
//! system with a squeezed magnon drive.
//!
//! The pipeline runs bottom-up:
//!
//! 1. [`params`] and [`physics`] hold the physical inputs and elementary
//!    formulas (thermal occupations, drive amplitude).
//! 2. [`steady_state`] solves the classical fixed point of the driven modes.
//! 3. [`dynamics`] linearizes the fluctuations around it (drift/diffusion),
//!    checks stability and solves the Lyapunov equation for the covariance.
//! 4. [`gaussian`] turns the covariance into per-mode and total coherence.
//! 5. [`report`] composes the stages; [`sweep`] evaluates grids of them.
//!
//! All frequencies and rates are angular (rad/s) internally.

// `!(x >= 0.0)` guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod keys;
pub mod params;
pub mod physics;
pub mod report;
pub mod steady_state;
pub mod sweep;

pub use error::{Error, ErrorKind, Result, Stage, Violation};
pub use params::{MagnonDetuning, SystemParams};
pub use report::{coherence_report, contrast_ratio, CoherenceReport, ContrastReport};
pub use steady_state::{steady_state, SteadyState};
pub use sweep::{figure_preset, run_sweep, Execution, SweepResult, SweepSpec};
