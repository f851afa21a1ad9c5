//! Linearized fluctuation dynamics: drift/diffusion matrices, stability and
//! the stationary covariance.
//!
//! Quadratures are ordered (δx₁, δy₁, δx₂, δy₂, δq, δp) for cavity, magnon
//! and mechanics.

mod covariance;
mod drift;
mod lyapunov;
mod stability;

use nalgebra::Matrix6;

pub use covariance::CovarianceState;
pub use drift::{build_diffusion, build_drift, DiffusionMatrix, DriftMatrix};
pub use lyapunov::{lyapunov_residual, solve_continuous_lyapunov, solve_lyapunov};
pub use stability::{
    assess_stability, characteristic_polynomial, eigenvalues, hurwitz_minors, spectral_abscissa, stability_hurwitz,
    stability_spectral, StabilityVerdict, MARGINAL_BAND,
};

/// Largest absolute entry.
pub fn max_norm(m: &Matrix6<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Row-major copy, for reports.
pub fn rows(m: &Matrix6<f64>) -> [[f64; 6]; 6] {
    let mut out = [[0.0; 6]; 6];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    out
}
