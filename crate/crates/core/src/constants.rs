use std::f64::consts::TAU;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Electron gyromagnetic ratio used for the magnon frequency, rad/s per tesla (2π × 28 GHz/T).
pub const GYROMAGNETIC_RATIO: f64 = TAU * 28.0e9;

/// The fixed physical constants as one record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
    pub gyromagnetic_ratio: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants =
        PhysicalConstants { hbar: HBAR, k_b: K_B, gyromagnetic_ratio: GYROMAGNETIC_RATIO };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}
