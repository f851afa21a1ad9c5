use nalgebra::Matrix6;
use serde::Serialize;

use super::covariance::row_major;

use crate::params::SystemParams;
use crate::physics::ThermalOccupations;
use crate::steady_state::SteadyState;

/// Drift matrix A of the linearized quantum Langevin equations, rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftMatrix(#[serde(serialize_with = "row_major")] pub Matrix6<f64>);

/// Diagonal diffusion matrix F, rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffusionMatrix(#[serde(serialize_with = "row_major")] pub Matrix6<f64>);

/// Builds A. The magnomechanical coupling enters only through the δx₂
/// equation (−G_mb) and the δp equation (+G_mb).
pub fn build_drift(p: &SystemParams, ss: &SteadyState) -> DriftMatrix {
    let (ga, da, g) = (p.gamma_a, p.delta_a, p.g_ma);
    let s = &ss.shifts;
    let big_g = ss.coupling;
    let (wb, gb) = (p.omega_b, p.gamma_b);
    #[rustfmt::skip]
    let a = Matrix6::new(
        -ga,  da,  0.0,               g,                0.0,     0.0,
        -da, -ga, -g,                 0.0,              0.0,     0.0,
        0.0,  g,  -s.gamma_plus,      s.detuning_plus, -big_g,   0.0,
        -g,   0.0, -s.detuning_minus, -s.gamma_minus,   0.0,     0.0,
        0.0,  0.0, 0.0,               0.0,              0.0,     wb,
        0.0,  0.0, 0.0,               big_g,           -wb,     -gb,
    );
    DriftMatrix(a)
}

pub fn build_diffusion(occ: &ThermalOccupations, p: &SystemParams) -> DiffusionMatrix {
    let fa = p.gamma_a * (2.0 * occ.n_a + 1.0);
    let fm = p.gamma_m * (2.0 * occ.n_m + 1.0);
    let fb = p.gamma_b * (2.0 * occ.n_b + 1.0);
    DiffusionMatrix(Matrix6::from_diagonal(&nalgebra::Vector6::new(fa, fa, fm, fm, 0.0, fb)))
}
