//! Elementary physical formulas.

use serde::Serialize;

use crate::constants::{GYROMAGNETIC_RATIO, HBAR, K_B};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Converts a linear frequency in Hz to an angular frequency in rad/s.
pub fn angular_from_linear(hz: f64) -> Result<f64> {
    if !(hz >= 0.0) {
        return Err(Error::Domain { field: "frequency", reason: format!("linear frequency must be >= 0, got {hz}") });
    }
    Ok(std::f64::consts::TAU * hz)
}

/// Magnon frequency set by the bias field, ω_m = Γ·H.
pub fn magnon_frequency_from_field(tesla: f64) -> Result<f64> {
    if !(tesla >= 0.0) {
        return Err(Error::Domain { field: "bias_field", reason: format!("bias field must be >= 0, got {tesla}") });
    }
    Ok(GYROMAGNETIC_RATIO * tesla)
}

/// Bose-Einstein mean occupation of a mode of angular frequency `omega` at
/// temperature `temperature`. Exactly zero at T = 0.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain {
            field: "frequency",
            reason: format!("thermal occupation needs a positive mode frequency, got {omega}"),
        });
    }
    if !(temperature >= 0.0) {
        return Err(Error::Domain {
            field: "temperature",
            reason: format!("temperature must be >= 0, got {temperature}"),
        });
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    // exp_m1 overflows to +inf for very cold modes, giving exactly 0.
    Ok(1.0 / (HBAR * omega / (K_B * temperature)).exp_m1())
}

/// Drive amplitude Ω_l = sqrt(2 P_l γ_m / (ħ ω_l)), in rad/s.
pub fn drive_amplitude(power: f64, gamma_m: f64, omega_l: f64) -> Result<f64> {
    if !(omega_l > 0.0) {
        return Err(Error::Domain {
            field: "omega_l",
            reason: format!("drive frequency must be positive, got {omega_l}"),
        });
    }
    if !(power >= 0.0) {
        return Err(Error::Domain { field: "drive_power", reason: format!("drive power must be >= 0, got {power}") });
    }
    if !(gamma_m > 0.0) {
        return Err(Error::Domain {
            field: "gamma_m",
            reason: format!("magnon damping must be positive, got {gamma_m}"),
        });
    }
    Ok((2.0 * power * gamma_m / (HBAR * omega_l)).sqrt())
}

/// Mean thermal occupations of the cavity, magnon and mechanical baths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalOccupations {
    pub n_a: f64,
    pub n_m: f64,
    pub n_b: f64,
}

impl ThermalOccupations {
    pub fn zero() -> Self {
        Self { n_a: 0.0, n_m: 0.0, n_b: 0.0 }
    }

    pub fn for_params(p: &SystemParams) -> Result<Self> {
        Ok(Self {
            n_a: thermal_occupation(p.omega_a, p.temperature)?,
            n_m: thermal_occupation(p.omega_m, p.temperature)?,
            n_b: thermal_occupation(p.omega_b, p.temperature)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn angular_conversion() {
        assert_eq!(angular_from_linear(0.0).unwrap(), 0.0);
        assert!(rel(angular_from_linear(10e9).unwrap(), 6.283185307e10) < 1e-3);
        assert!(rel(angular_from_linear(4.8e6).unwrap(), 3.0159289e7) < 1e-6);
        assert!(matches!(angular_from_linear(-1.0), Err(Error::Domain { .. })));
        assert!(angular_from_linear(f64::NAN).is_err());
    }

    #[test]
    fn angular_conversion_is_additive() {
        for (a, b) in [(1.0, 2.0), (3.3e6, 10e9), (0.0, 7.5), (1e-3, 1e3)] {
            let sum = angular_from_linear(a + b).unwrap();
            let parts = angular_from_linear(a).unwrap() + angular_from_linear(b).unwrap();
            assert!((sum - parts).abs() <= 4.0 * f64::EPSILON * sum.abs());
        }
    }

    #[test]
    fn bias_field() {
        assert_eq!(magnon_frequency_from_field(0.0).unwrap(), 0.0);
        assert!(rel(magnon_frequency_from_field(1.0).unwrap(), TAU * 28e9) < 1e-15);
        let w = magnon_frequency_from_field(10.0 / 28.0).unwrap();
        assert!(rel(w, TAU * 10e9) < 1e-14);
        assert!(magnon_frequency_from_field(-0.1).is_err());
    }

    #[test]
    fn occupation_values() {
        assert_eq!(thermal_occupation(TAU * 10e9, 0.0).unwrap(), 0.0);
        // hbar w / kT is about 0.048 here
        let n = thermal_occupation(TAU * 10e9, 10.0).unwrap();
        assert!((n - 20.340618).abs() < 1e-5, "{n}");
        let n = thermal_occupation(TAU * 10e6, 10.0).unwrap();
        assert!((n - 20836.11).abs() < 0.01, "{n}");
        let x = HBAR * TAU * 10e6 / (K_B * 10.0);
        let rayleigh_jeans = 1.0 / x - 0.5;
        assert!(rel(n, rayleigh_jeans) < 1e-3);
        assert!(thermal_occupation(0.0, 1.0).is_err());
        assert!(thermal_occupation(-1.0, 1.0).is_err());
        assert_eq!(thermal_occupation(TAU * 10e9, 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn occupation_monotonic() {
        let temps = [0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 50.0, 300.0];
        let omegas = [TAU * 1e6, TAU * 1e7, TAU * 1e9, TAU * 1e10];
        for &w in &omegas {
            let ns: Vec<f64> = temps.iter().map(|&t| thermal_occupation(w, t).unwrap()).collect();
            for pair in ns.windows(2) {
                assert!(pair[1] > pair[0] || pair[0] == 0.0 && pair[1] == 0.0);
            }
            assert!(ns.last().unwrap() > ns.first().unwrap());
        }
        for &t in &temps {
            let ns: Vec<f64> = omegas.iter().map(|&w| thermal_occupation(w, t).unwrap()).collect();
            for pair in ns.windows(2) {
                assert!(pair[1] < pair[0] || pair[1] == 0.0);
            }
        }
    }

    #[test]
    fn drive_amplitude_values() {
        let gm = TAU * 15e6;
        let wl = TAU * (10e9 - 10e6);
        assert_eq!(drive_amplitude(0.0, gm, wl).unwrap(), 0.0);
        let reference = (2.0 * 0.3e-3 * gm / (HBAR * wl)).sqrt();
        let om = drive_amplitude(0.3e-3, gm, wl).unwrap();
        assert!(rel(om, 9.242733e13) < 1e-6, "{om:e}");
        assert_eq!(om, reference);
        let quad = drive_amplitude(4.0 * 0.3e-3, gm, wl).unwrap();
        assert!(rel(quad, 2.0 * om) < 1e-14);
        assert!(drive_amplitude(1e-3, gm, 0.0).is_err());
        assert!(drive_amplitude(1e-3, gm, -PI).is_err());
    }

    #[test]
    fn drive_amplitude_sqrt_scaling() {
        let (gm, wl) = (TAU * 0.6e6, TAU * 9.99e9);
        let base = drive_amplitude(2.5e-4, gm, wl).unwrap();
        for alpha in [0.0, 0.25, 1.0, 2.0, 17.0, 1e4] {
            let scaled = drive_amplitude(alpha * 2.5e-4, gm, wl).unwrap();
            assert!((scaled - alpha.sqrt() * base).abs() <= 1e-12 * base * alpha.sqrt().max(1.0));
        }
    }
}
