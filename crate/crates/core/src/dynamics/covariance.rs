use nalgebra::Matrix6;
use serde::{Serialize, Serializer};

use super::rows;
use crate::steady_state::SteadyState;

/// Stationary covariance in two normalizations, plus the mean quadratures.
///
/// `v_half` solves the Lyapunov equation as built (vacuum variance 1/2);
/// `v_norm = 2 v_half` and `d_norm = √2 d` put vacuum at the identity,
/// which is the convention the coherence formulas expect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceState {
    #[serde(serialize_with = "row_major")]
    pub v_half: Matrix6<f64>,
    #[serde(serialize_with = "row_major")]
    pub v_norm: Matrix6<f64>,
    /// Mean quadratures of cavity, magnon and mechanics.
    pub d_norm: [[f64; 2]; 3],
}

impl CovarianceState {
    pub fn new(v_half: Matrix6<f64>, displacements: [[f64; 2]; 3]) -> Self {
        let s = std::f64::consts::SQRT_2;
        Self { v_half, v_norm: v_half * 2.0, d_norm: displacements.map(|[x, y]| [s * x, s * y]) }
    }

    pub fn from_steady_state(v_half: Matrix6<f64>, ss: &SteadyState) -> Self {
        Self::new(v_half, ss.displacements())
    }
}

pub(crate) fn row_major<S: Serializer>(m: &Matrix6<f64>, s: S) -> Result<S::Ok, S::Error> {
    rows(m).serialize(s)
}
