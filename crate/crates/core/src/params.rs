//! The physical parameter record and its built-in profiles.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result, Violation};

/// How the effective magnon detuning Δ̃_m is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", content = "value", rename_all = "kebab-case")]
pub enum MagnonDetuning {
    /// Δ̃_m is fixed to the given value (rad/s).
    Pinned(f64),
    /// Bare detuning Δ_m (rad/s); Δ̃_m = Δ_m + g_mb q_s is solved self-consistently.
    SelfConsistent(f64),
}

impl MagnonDetuning {
    pub fn value(&self) -> f64 {
        match *self {
            MagnonDetuning::Pinned(v) | MagnonDetuning::SelfConsistent(v) => v,
        }
    }

    pub fn with_value(&self, v: f64) -> Self {
        match self {
            MagnonDetuning::Pinned(_) => MagnonDetuning::Pinned(v),
            MagnonDetuning::SelfConsistent(_) => MagnonDetuning::SelfConsistent(v),
        }
    }
}

/// Physical inputs. Frequencies, rates and couplings are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    /// Cavity frequency ω_a.
    pub omega_a: f64,
    /// Magnon frequency ω_m.
    pub omega_m: f64,
    /// Mechanical frequency ω_b.
    pub omega_b: f64,
    pub gamma_a: f64,
    pub gamma_m: f64,
    pub gamma_b: f64,
    /// Photon-magnon coupling.
    pub g_ma: f64,
    /// Bare magnon-phonon coupling.
    pub g_mb: f64,
    /// Drive power P_l in W.
    pub drive_power: f64,
    /// Squeezing amplitude ξ.
    pub xi: f64,
    /// Squeezing phase φ in rad, kept in [0, 2π) after validation.
    pub phi: f64,
    /// Bath temperature in K.
    pub temperature: f64,
    /// Cavity detuning Δ_a = ω_a − ω_l.
    pub delta_a: f64,
    pub magnon_detuning: MagnonDetuning,
}

/// Names of the built-in profiles accepted by [`SystemParams::profile`].
pub const PROFILES: [&str; 2] = ["paper-defaults", "paper-literal"];

impl SystemParams {
    /// Reference parameter set: ω_a/2π = ω_m/2π = 10 GHz, ω_b/2π = 10 MHz,
    /// γ_b/2π = 100 Hz, γ_a/2π = 3 MHz, γ_m = γ_a/5, g_ma/2π = 4.8 MHz,
    /// g_mb/2π = 0.1 Hz, P_l = 0.3 mW, Δ_a = Δ̃_m = ω_b, T = 10 K,
    /// no squeezing (ξ = 0) with φ = 3π/2.
    pub fn paper_defaults() -> Self {
        let omega_b = TAU * 10e6;
        Self {
            omega_a: TAU * 10e9,
            omega_m: TAU * 10e9,
            omega_b,
            gamma_a: TAU * 3e6,
            gamma_m: TAU * 3e6 / 5.0,
            gamma_b: TAU * 100.0,
            g_ma: TAU * 4.8e6,
            g_mb: TAU * 0.1,
            drive_power: 0.3e-3,
            xi: 0.0,
            phi: 1.5 * PI,
            temperature: 10.0,
            delta_a: omega_b,
            magnon_detuning: MagnonDetuning::Pinned(omega_b),
        }
    }

    /// Same as [`paper_defaults`](Self::paper_defaults) but with the magnon
    /// linewidth read as γ_m = 5 γ_a = 2π × 15 MHz.
    pub fn paper_literal() -> Self {
        Self { gamma_m: TAU * 15e6, ..Self::paper_defaults() }
    }

    pub fn profile(name: &str) -> Result<Self> {
        match name {
            "paper-defaults" => Ok(Self::paper_defaults()),
            "paper-literal" => Ok(Self::paper_literal()),
            other => Err(Error::Config(format!("unknown profile {other:?}; expected one of {}", PROFILES.join(", ")))),
        }
    }

    /// Drive frequency ω_l = ω_a − Δ_a.
    pub fn drive_frequency(&self) -> f64 {
        self.omega_a - self.delta_a
    }

    /// Checks every invariant and returns the record with φ reduced to
    /// [0, 2π), or the complete list of violations.
    pub fn validate(mut self) -> Result<Self> {
        let mut violations = Vec::new();
        let mut push = |field: &'static str, message: String| violations.push(Violation { field, message });

        let nonneg = [
            ("g_ma", self.g_ma),
            ("g_mb", self.g_mb),
            ("drive_power", self.drive_power),
            ("xi", self.xi),
            ("temperature", self.temperature),
        ];
        for (field, v) in nonneg {
            if !v.is_finite() {
                push(field, format!("must be finite, got {v}"));
            } else if v < 0.0 {
                push(field, format!("must be >= 0, got {v}"));
            }
        }
        let positive = [("omega_a", self.omega_a), ("omega_m", self.omega_m), ("omega_b", self.omega_b)];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                push(field, format!("mode frequency must be positive and finite, got {v}"));
            }
        }
        let dampings = [("gamma_a", self.gamma_a), ("gamma_m", self.gamma_m), ("gamma_b", self.gamma_b)];
        for (field, v) in dampings {
            if !(v.is_finite() && v > 0.0) {
                push(field, format!("must be strictly dissipative (> 0), got {v}"));
            }
        }
        if !self.phi.is_finite() {
            push("phi", format!("must be finite, got {}", self.phi));
        }
        if !self.delta_a.is_finite() {
            push("delta_a", format!("must be finite, got {}", self.delta_a));
        } else if self.omega_a.is_finite() && !(self.drive_frequency() > 0.0) {
            push(
                "delta_a",
                format!("drive frequency omega_a - delta_a must be positive, got {}", self.drive_frequency()),
            );
        }
        if !self.magnon_detuning.value().is_finite() {
            push("magnon_detuning", format!("must be finite, got {}", self.magnon_detuning.value()));
        }

        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        self.phi = self.phi.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs.
        if self.phi >= TAU {
            self.phi = 0.0;
        }
        Ok(self)
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::paper_defaults()
    }
}
