//! Classical fixed point of the driven cavity-magnon-phonon system.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{MagnonDetuning, SystemParams};
use crate::physics::{drive_amplitude, ThermalOccupations};

/// Relative size of the parametric denominator below which the driven
/// steady state is considered divergent.
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

const SELF_CONSISTENT_MAX_STEPS: usize = 100;
const SELF_CONSISTENT_TOLERANCE: f64 = 1e-12;

/// Squeezing-induced shifts of the magnon frequency and linewidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveShifts {
    /// Δ_φ = ξ sin φ
    pub delta_phi: f64,
    /// γ_φ = ξ cos φ
    pub gamma_phi: f64,
    /// Δ̃_m + Δ_φ
    pub detuning_plus: f64,
    /// Δ̃_m − Δ_φ
    pub detuning_minus: f64,
    /// γ_m + γ_φ
    pub gamma_plus: f64,
    /// γ_m − γ_φ
    pub gamma_minus: f64,
}

pub fn effective_squeeze_shifts(xi: f64, phi: f64, magnon_detuning: f64, gamma_m: f64) -> EffectiveShifts {
    let (sin, cos) = phi.sin_cos();
    let delta_phi = xi * sin;
    let gamma_phi = xi * cos;
    EffectiveShifts {
        delta_phi,
        gamma_phi,
        detuning_plus: magnon_detuning + delta_phi,
        detuning_minus: magnon_detuning - delta_phi,
        gamma_plus: gamma_m + gamma_phi,
        gamma_minus: gamma_m - gamma_phi,
    }
}

/// Λ = (γ_a − iΔ_a)(γ_m − iΔ̃_m) + g_ma²
pub fn lambda(p: &SystemParams, magnon_detuning: f64) -> Complex64 {
    Complex64::new(p.gamma_a, -p.delta_a) * Complex64::new(p.gamma_m, -magnon_detuning) + p.g_ma * p.g_ma
}

/// μ = g_ma²/Δ_a − Δ̃_m; undefined for Δ_a = 0.
pub fn mu(p: &SystemParams, magnon_detuning: f64) -> Option<f64> {
    (p.delta_a != 0.0).then(|| p.g_ma * p.g_ma / p.delta_a - magnon_detuning)
}

/// Steady magnon amplitude from the full (m_s, m_s*) linear system,
///
/// m_s = [Λ(γ_a + iΔ_a) + ξ(γ_a² + Δ_a²) e^{iφ}] / [|Λ|² − ξ²(γ_a² + Δ_a²)] · Ω_l
pub fn magnon_amplitude_exact(p: &SystemParams, drive: f64, magnon_detuning: f64) -> Result<Complex64> {
    let lam = lambda(p, magnon_detuning);
    let cavity = p.gamma_a * p.gamma_a + p.delta_a * p.delta_a;
    let den = lam.norm_sqr() - p.xi * p.xi * cavity;
    let scale = lam.norm_sqr().max(p.xi * p.xi * cavity);
    if !(den.abs() > THRESHOLD_TOLERANCE * scale) {
        return Err(Error::ParametricThreshold { ratio: den / scale });
    }
    let num = lam * Complex64::new(p.gamma_a, p.delta_a) + Complex64::from_polar(p.xi * cavity, p.phi);
    Ok(num / den * drive)
}

/// Large-detuning approximation m_s ≈ (ξ e^{iφ} + iμ)/(μ² − ξ²) · Ω_l,
/// valid when |Δ_a|, |Δ̃_m| ≫ γ_a, γ_m.
pub fn magnon_amplitude_approx(p: &SystemParams, drive: f64, magnon_detuning: f64) -> Result<Complex64> {
    let mu = mu(p, magnon_detuning).ok_or_else(|| Error::Domain {
        field: "delta_a",
        reason: "approximate amplitude needs a nonzero cavity detuning".into(),
    })?;
    let den = mu * mu - p.xi * p.xi;
    let scale = (mu * mu).max(p.xi * p.xi);
    if !(den.abs() > THRESHOLD_TOLERANCE * scale) {
        return Err(Error::ParametricThreshold { ratio: if scale > 0.0 { den / scale } else { 0.0 } });
    }
    Ok((Complex64::from_polar(p.xi, p.phi) + Complex64::new(0.0, mu)) / den * drive)
}

/// Steady state of the driven modes and the derived linearization data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyState {
    /// Magnon amplitude ⟨m⟩.
    pub m_s: Complex64,
    /// Cavity amplitude ⟨a⟩.
    pub a_s: Complex64,
    /// Mechanical position quadrature.
    pub q_s: f64,
    /// Mechanical momentum quadrature (zero at the fixed point).
    pub p_s: f64,
    /// Drive amplitude Ω_l in rad/s.
    pub drive: f64,
    pub lambda: Complex64,
    pub mu: Option<f64>,
    /// Drive-enhanced magnomechanical coupling G_mb = √2 g_mb |m_s|, rad/s.
    pub coupling: f64,
    pub shifts: EffectiveShifts,
    pub occupations: ThermalOccupations,
    /// Resolved effective magnon detuning Δ̃_m.
    pub magnon_detuning: f64,
}

impl SteadyState {
    /// Quadrature means (x, y) for cavity and magnon and (q, p) for the
    /// mechanics, with x = √2 Re z and y = √2 Im z.
    pub fn displacements(&self) -> [[f64; 2]; 3] {
        let quad = |z: Complex64| [std::f64::consts::SQRT_2 * z.re, std::f64::consts::SQRT_2 * z.im];
        [quad(self.a_s), quad(self.m_s), [self.q_s, self.p_s]]
    }
}

fn cavity_amplitude(p: &SystemParams, m_s: Complex64) -> Complex64 {
    Complex64::new(0.0, -p.g_ma) * m_s / Complex64::new(p.gamma_a, p.delta_a)
}

fn mechanical_displacement(p: &SystemParams, m_s: Complex64) -> f64 {
    -p.g_mb * m_s.norm_sqr() / p.omega_b
}

/// Solves the classical fixed point. In pinned mode Δ̃_m is taken as given;
/// in self-consistent mode Δ̃_m = Δ_m + g_mb q_s is iterated to convergence.
pub fn steady_state(params: &SystemParams) -> Result<SteadyState> {
    let p = params.validate()?;
    let drive = drive_amplitude(p.drive_power, p.gamma_m, p.drive_frequency())?;

    let (detuning, m_s) = match p.magnon_detuning {
        MagnonDetuning::Pinned(d) => (d, magnon_amplitude_exact(&p, drive, d)?),
        MagnonDetuning::SelfConsistent(bare) => {
            let mut det = bare;
            let mut change = f64::INFINITY;
            let mut converged = false;
            for _ in 0..SELF_CONSISTENT_MAX_STEPS {
                let m = magnon_amplitude_exact(&p, drive, det)?;
                let next = bare + p.g_mb * mechanical_displacement(&p, m);
                change = if next == det { 0.0 } else { (next - det).abs() / next.abs().max(f64::MIN_POSITIVE) };
                det = next;
                if change <= SELF_CONSISTENT_TOLERANCE {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NotConverged { iterations: SELF_CONSISTENT_MAX_STEPS, change });
            }
            (det, magnon_amplitude_exact(&p, drive, det)?)
        }
    };

    Ok(SteadyState {
        m_s,
        a_s: cavity_amplitude(&p, m_s),
        q_s: mechanical_displacement(&p, m_s),
        p_s: 0.0,
        drive,
        lambda: lambda(&p, detuning),
        mu: mu(&p, detuning),
        coupling: std::f64::consts::SQRT_2 * p.g_mb * m_s.norm(),
        shifts: effective_squeeze_shifts(p.xi, p.phi, detuning, p.gamma_m),
        occupations: ThermalOccupations::for_params(&p)?,
        magnon_detuning: detuning,
    })
}
