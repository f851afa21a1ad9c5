//! Named access to [`SystemParams`] fields, shared by configuration files,
//! `--set` overrides and sweep axes.
//!
//! A key is a field name optionally suffixed with a unit: `_hz` for linear
//! frequencies (converted with ×2π), `_mw` for power in milliwatts.
//! `bias_field` sets ω_m through ω_m = Γ·H.

use std::f64::consts::TAU;
use std::fmt;

use crate::constants::GYROMAGNETIC_RATIO;
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::physics::magnon_frequency_from_field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    OmegaA,
    OmegaM,
    OmegaB,
    GammaA,
    GammaM,
    GammaB,
    GMa,
    GMb,
    DrivePower,
    Xi,
    Phi,
    Temperature,
    DeltaA,
    MagnonDetuning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    /// The field's internal unit (rad/s, W, rad, K).
    Native,
    Hz,
    MilliWatt,
    Tesla,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamKey {
    pub field: Field,
    pub unit: Unit,
    name: &'static str,
}

const fn key(name: &'static str, field: Field, unit: Unit) -> ParamKey {
    ParamKey { field, unit, name }
}

/// Every accepted numeric key.
pub const KEYS: &[ParamKey] = &[
    key("omega_a", Field::OmegaA, Unit::Native),
    key("omega_a_hz", Field::OmegaA, Unit::Hz),
    key("omega_m", Field::OmegaM, Unit::Native),
    key("omega_m_hz", Field::OmegaM, Unit::Hz),
    key("bias_field", Field::OmegaM, Unit::Tesla),
    key("omega_b", Field::OmegaB, Unit::Native),
    key("omega_b_hz", Field::OmegaB, Unit::Hz),
    key("gamma_a", Field::GammaA, Unit::Native),
    key("gamma_a_hz", Field::GammaA, Unit::Hz),
    key("gamma_m", Field::GammaM, Unit::Native),
    key("gamma_m_hz", Field::GammaM, Unit::Hz),
    key("gamma_b", Field::GammaB, Unit::Native),
    key("gamma_b_hz", Field::GammaB, Unit::Hz),
    key("g_ma", Field::GMa, Unit::Native),
    key("g_ma_hz", Field::GMa, Unit::Hz),
    key("g_mb", Field::GMb, Unit::Native),
    key("g_mb_hz", Field::GMb, Unit::Hz),
    key("drive_power", Field::DrivePower, Unit::Native),
    key("drive_power_mw", Field::DrivePower, Unit::MilliWatt),
    key("xi", Field::Xi, Unit::Native),
    key("xi_hz", Field::Xi, Unit::Hz),
    key("phi", Field::Phi, Unit::Native),
    key("temperature", Field::Temperature, Unit::Native),
    key("delta_a", Field::DeltaA, Unit::Native),
    key("delta_a_hz", Field::DeltaA, Unit::Hz),
    key("magnon_detuning", Field::MagnonDetuning, Unit::Native),
    key("magnon_detuning_hz", Field::MagnonDetuning, Unit::Hz),
];

/// Key selecting Pinned / SelfConsistent magnon detuning.
pub const MODE_KEY: &str = "magnon_detuning_mode";

impl ParamKey {
    pub fn parse(name: &str) -> Result<Self> {
        KEYS.iter()
            .copied()
            .find(|k| k.name == name)
            .ok_or_else(|| Error::Config(format!("unknown parameter key {name:?}")))
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Reads the field, expressed in this key's unit.
    pub fn get(&self, p: &SystemParams) -> f64 {
        let native = match self.field {
            Field::OmegaA => p.omega_a,
            Field::OmegaM => p.omega_m,
            Field::OmegaB => p.omega_b,
            Field::GammaA => p.gamma_a,
            Field::GammaM => p.gamma_m,
            Field::GammaB => p.gamma_b,
            Field::GMa => p.g_ma,
            Field::GMb => p.g_mb,
            Field::DrivePower => p.drive_power,
            Field::Xi => p.xi,
            Field::Phi => p.phi,
            Field::Temperature => p.temperature,
            Field::DeltaA => p.delta_a,
            Field::MagnonDetuning => p.magnon_detuning.value(),
        };
        match self.unit {
            Unit::Native => native,
            Unit::Hz => native / TAU,
            Unit::MilliWatt => native * 1e3,
            Unit::Tesla => native / GYROMAGNETIC_RATIO,
        }
    }

    /// Writes the field from a value in this key's unit. Range checks are
    /// left to [`SystemParams::validate`], except where the unit conversion
    /// itself is undefined.
    pub fn set(&self, p: &mut SystemParams, value: f64) -> Result<()> {
        let native = match self.unit {
            Unit::Native => value,
            Unit::Hz => TAU * value,
            Unit::MilliWatt => value * 1e-3,
            Unit::Tesla => magnon_frequency_from_field(value)?,
        };
        match self.field {
            Field::OmegaA => p.omega_a = native,
            Field::OmegaM => p.omega_m = native,
            Field::OmegaB => p.omega_b = native,
            Field::GammaA => p.gamma_a = native,
            Field::GammaM => p.gamma_m = native,
            Field::GammaB => p.gamma_b = native,
            Field::GMa => p.g_ma = native,
            Field::GMb => p.g_mb = native,
            Field::DrivePower => p.drive_power = native,
            Field::Xi => p.xi = native,
            Field::Phi => p.phi = native,
            Field::Temperature => p.temperature = native,
            Field::DeltaA => p.delta_a = native,
            Field::MagnonDetuning => p.magnon_detuning = p.magnon_detuning.with_value(native),
        }
        Ok(())
    }
}

impl fmt::Display for ParamKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}
