//! Gaussian quantum-information quantities on the normalized covariance
//! (vacuum = identity): bosonic entropy, single-mode and total coherence,
//! symplectic spectrum.

use std::f64::consts::LN_2;

use nalgebra::{Matrix2, Matrix6};
use serde::Serialize;

use crate::dynamics::{eigenvalues, max_norm, CovarianceState};
use crate::error::{Error, Result};

/// Slack allowed below the physical bounds (symplectic eigenvalue ≥ 1,
/// coherence ≥ 0) before a state is declared unphysical.
pub const PHYSICAL_TOLERANCE: f64 = 1e-9;

/// Largest real part (relative to ‖V‖_max) tolerated in the eigenvalues
/// of S·V, which are purely imaginary for a valid covariance.
const SYMPLECTIC_REAL_TOLERANCE: f64 = 1e-8;

/// h(x) = ((x+1)/2) log₂((x+1)/2) − ((x−1)/2) log₂((x−1)/2), in bits.
///
/// With N = (x−1)/2 this is (N+1) log₂(N+1) − N log₂ N, evaluated as
/// log₂(N+1) + N log₂(1 + 1/N) for N ≥ 1 to avoid cancellation at large N.
pub fn bosonic_entropy(x: f64) -> Result<f64> {
    if !(x >= 1.0 - PHYSICAL_TOLERANCE) {
        return Err(Error::Unphysical(format!("unphysical symplectic eigenvalue {x}")));
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let n = ((x - 1.0) / 2.0).max(0.0);
    if n == 0.0 {
        return Ok(0.0);
    }
    if n < 1.0 {
        Ok((n + 1.0) * (n + 1.0).log2() - n * n.log2())
    } else {
        Ok((n + 1.0).log2() + n * (1.0 / n).ln_1p() / LN_2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cavity,
    Magnon,
    Mechanics,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Cavity, Mode::Magnon, Mode::Mechanics];

    fn index(self) -> usize {
        match self {
            Mode::Cavity => 0,
            Mode::Magnon => 1,
            Mode::Mechanics => 2,
        }
    }
}

/// Reduced state of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeBlock {
    pub mode: Mode,
    pub v: Matrix2<f64>,
    pub d: [f64; 2],
}

impl ModeBlock {
    pub fn new(mode: Mode, v: Matrix2<f64>, d: [f64; 2]) -> Self {
        Self { mode, v, d }
    }

    pub fn extract(cov: &CovarianceState, mode: Mode) -> Self {
        let k = 2 * mode.index();
        let v = cov.v_norm.fixed_view::<2, 2>(k, k).into_owned();
        Self { mode, v, d: cov.d_norm[mode.index()] }
    }

    /// v_j = sqrt(det V_j)
    pub fn symplectic_eigenvalue(&self) -> f64 {
        self.v.determinant().max(0.0).sqrt()
    }

    /// n̄_j = (Tr V_j + |d_j|² − 2) / 4
    pub fn effective_occupation(&self) -> f64 {
        (self.v.trace() + self.d[0] * self.d[0] + self.d[1] * self.d[1] - 2.0) / 4.0
    }
}

/// Coherence of one mode together with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeCoherence {
    pub coherence: f64,
    pub symplectic_eigenvalue: f64,
    pub occupation: f64,
}

pub fn mode_coherence(block: &ModeBlock) -> Result<ModeCoherence> {
    let det = block.v.determinant();
    let n_bar = block.effective_occupation();
    let min_v = 1.0 - PHYSICAL_TOLERANCE;
    if !(det >= min_v * min_v) || !(4.0 * n_bar + 2.0 >= 2.0 - PHYSICAL_TOLERANCE) {
        return Err(Error::Unphysical(format!(
            "{:?} block V = {:?}, d = {:?} (det {det:e}, n̄ {n_bar:e})",
            block.mode,
            block.v.as_slice(),
            block.d
        )));
    }
    let v = det.sqrt();
    let c = bosonic_entropy(2.0 * n_bar + 1.0)? - bosonic_entropy(v)?;
    Ok(ModeCoherence { coherence: clamp_coherence(c)?, symplectic_eigenvalue: v, occupation: n_bar })
}

/// C_j = h(2 n̄_j + 1) − h(v_j), in bits.
pub fn single_mode_coherence(block: &ModeBlock) -> Result<f64> {
    Ok(mode_coherence(block)?.coherence)
}

fn clamp_coherence(c: f64) -> Result<f64> {
    if c >= 0.0 {
        Ok(c)
    } else if c >= -PHYSICAL_TOLERANCE {
        Ok(0.0)
    } else {
        Err(Error::Unphysical(format!("negative coherence {c:e}")))
    }
}

/// S = ⊕ [[0, 1], [−1, 0]]
pub fn symplectic_form() -> Matrix6<f64> {
    let mut s = Matrix6::zeros();
    for k in 0..3 {
        s[(2 * k, 2 * k + 1)] = 1.0;
        s[(2 * k + 1, 2 * k)] = -1.0;
    }
    s
}

/// Symplectic eigenvalues of a 6×6 covariance, descending: the moduli of
/// the ±i w_k eigenvalue pairs of S·V.
pub fn symplectic_eigenvalues(v: &Matrix6<f64>) -> Result<[f64; 3]> {
    let sv = symplectic_form() * v;
    let ev = eigenvalues(&sv)?;
    let limit = SYMPLECTIC_REAL_TOLERANCE * max_norm(v);
    if let Some(z) = ev.iter().find(|z| z.re.abs() > limit) {
        return Err(Error::Numerical(format!(
            "not a valid covariance: S·V has eigenvalue {z} with non-negligible real part"
        )));
    }
    let mut moduli: Vec<f64> = ev.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    Ok([0.5 * (moduli[0] + moduli[1]), 0.5 * (moduli[2] + moduli[3]), 0.5 * (moduli[4] + moduli[5])])
}

/// Total coherence C_T = Σ_j h(2 n̄_j + 1) − Σ_k h(w_k), in bits.
pub fn total_coherence(cov: &CovarianceState) -> Result<f64> {
    let w = symplectic_eigenvalues(&cov.v_norm)?;
    total_coherence_from(cov, &w)
}

pub(crate) fn total_coherence_from(cov: &CovarianceState, w: &[f64; 3]) -> Result<f64> {
    let mut c = 0.0;
    for mode in Mode::ALL {
        c += bosonic_entropy(2.0 * ModeBlock::extract(cov, mode).effective_occupation() + 1.0)?;
    }
    for &wk in w {
        c -= bosonic_entropy(wk)?;
    }
    clamp_coherence(c)
}
