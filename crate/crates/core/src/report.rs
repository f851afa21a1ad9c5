//! End-to-end evaluation of a parameter point, and the directional
//! contrast between two squeezing phases.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::{
    assess_stability, build_diffusion, build_drift, solve_lyapunov, CovarianceState, DiffusionMatrix, DriftMatrix,
    StabilityVerdict,
};
use crate::error::{Error, Result, Stage};
use crate::gaussian::{mode_coherence, symplectic_eigenvalues, total_coherence_from, Mode, ModeBlock};
use crate::params::SystemParams;
use crate::steady_state::{steady_state, SteadyState};

/// Phase pair (Δ_φ > 0, Δ_φ < 0) used for the contrast by default.
pub const DEFAULT_CONTRAST_PHASES: [f64; 2] = [PI / 2.0, 1.5 * PI];

/// Coherences at or below this level count as zero in the contrast ratio.
pub const CONTRAST_FLOOR: f64 = 1e-12;

/// Coherence values of a stable point, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coherences {
    pub c_a: f64,
    pub c_m: f64,
    pub c_b: f64,
    pub c_t: f64,
    /// Per-mode symplectic eigenvalues (cavity, magnon, mechanics).
    pub v: [f64; 3],
    /// Global symplectic eigenvalues, descending.
    pub w: [f64; 3],
    /// Effective occupations (cavity, magnon, mechanics).
    pub nbar: [f64; 3],
}

impl Coherences {
    pub fn from_covariance(cov: &CovarianceState) -> Result<Self> {
        let modes = Mode::ALL.map(|m| mode_coherence(&ModeBlock::extract(cov, m)));
        let [a, m, b] = modes;
        let (a, m, b) = (a?, m?, b?);
        let w = symplectic_eigenvalues(&cov.v_norm)?;
        Ok(Self {
            c_a: a.coherence,
            c_m: m.coherence,
            c_b: b.coherence,
            c_t: total_coherence_from(cov, &w)?,
            v: [a.symplectic_eigenvalue, m.symplectic_eigenvalue, b.symplectic_eigenvalue],
            w,
            nbar: [a.occupation, m.occupation, b.occupation],
        })
    }

    pub fn mode(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Cavity => self.c_a,
            Mode::Magnon => self.c_m,
            Mode::Mechanics => self.c_b,
        }
    }
}

/// Everything computed for one parameter point. Points that are unstable
/// or marginal carry the verdict but no covariance or coherences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub params: SystemParams,
    pub steady_state: SteadyState,
    pub verdict: StabilityVerdict,
    pub drift: DriftMatrix,
    pub diffusion: DiffusionMatrix,
    pub covariance: Option<CovarianceState>,
    pub coherences: Option<Coherences>,
}

pub fn coherence_report(params: &SystemParams) -> Result<CoherenceReport> {
    let params = params.validate()?;
    let ss = steady_state(&params).map_err(|e| e.at(Stage::SteadyState))?;
    let drift = build_drift(&params, &ss);
    let diffusion = build_diffusion(&ss.occupations, &params);
    let verdict = assess_stability(&drift).map_err(|e| e.at(Stage::Stability))?;

    let mut report =
        CoherenceReport { params, steady_state: ss, verdict, drift, diffusion, covariance: None, coherences: None };
    if !verdict.usable() {
        return Ok(report);
    }
    let v = solve_lyapunov(&drift, &diffusion).map_err(|e| e.at(Stage::Lyapunov))?;
    let cov = CovarianceState::from_steady_state(v, &ss);
    report.coherences = Some(Coherences::from_covariance(&cov).map_err(|e| e.at(Stage::Coherence))?);
    report.covariance = Some(cov);
    Ok(report)
}

/// Directional contrast I_j = |C_j⁺ − C_j⁻| / (C_j⁺ + C_j⁻) between the two
/// phase points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastReport {
    pub i_a: f64,
    pub i_m: f64,
    pub i_b: f64,
    pub phases: [f64; 2],
    pub plus: CoherenceReport,
    pub minus: CoherenceReport,
}

impl ContrastReport {
    pub fn mode(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Cavity => self.i_a,
            Mode::Magnon => self.i_m,
            Mode::Mechanics => self.i_b,
        }
    }
}

/// Normalized difference of two nonnegative values; 0 when both vanish.
pub fn contrast(c_plus: f64, c_minus: f64) -> f64 {
    if c_plus < CONTRAST_FLOOR && c_minus < CONTRAST_FLOOR {
        0.0
    } else {
        (c_plus - c_minus).abs() / (c_plus + c_minus)
    }
}

pub fn contrast_ratio(params: &SystemParams, xi: f64) -> Result<ContrastReport> {
    contrast_ratio_with_phases(params, xi, DEFAULT_CONTRAST_PHASES)
}

pub fn contrast_ratio_with_phases(params: &SystemParams, xi: f64, phases: [f64; 2]) -> Result<ContrastReport> {
    let at = |phi: f64| SystemParams { xi, phi, ..*params };
    let (plus, minus) = (at(phases[0]), at(phases[1]));
    let (plus, minus) = join(|| coherence_report(&plus), || coherence_report(&minus));
    let (plus, minus) = (plus?, minus?);

    let (cp, cm) = match (&plus.coherences, &minus.coherences) {
        (Some(cp), Some(cm)) => (*cp, *cm),
        _ => {
            let side = |r: &CoherenceReport| {
                format!("φ = {:.6} (spectral abscissa {:.3e})", r.params.phi, r.verdict.spectral_abscissa)
            };
            let bad: Vec<String> = [&plus, &minus].into_iter().filter(|r| r.coherences.is_none()).map(side).collect();
            return Err(Error::ContrastUndefined(format!("not stable at {}", bad.join(" and "))));
        }
    };
    Ok(ContrastReport {
        i_a: contrast(cp.c_a, cm.c_a),
        i_m: contrast(cp.c_m, cm.c_m),
        i_b: contrast(cp.c_b, cm.c_b),
        phases,
        plus,
        minus,
    })
}

#[cfg(feature = "parallel")]
fn join<A: Send, B: Send>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
fn join<A, B>(a: impl FnOnce() -> A, b: impl FnOnce() -> B) -> (A, B) {
    (a(), b())
}
