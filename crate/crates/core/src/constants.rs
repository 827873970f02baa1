//! Physical constants (2019 SI exact definitions) and derived quantities.

use std::f64::consts::PI;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant, J·s.
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = H / (2.0 * PI);
/// Resistance quantum h/e², Ω.
pub const R_K: f64 = H / (E_CHARGE * E_CHARGE);
/// Lorenz number π²k_B²/(3e²), W·Ω/K².
pub const L_0: f64 = PI * PI * K_B * K_B / (3.0 * E_CHARGE * E_CHARGE);

/// Ratio Δ(0)/(k_B T_c) of weak-coupling BCS theory.
pub const BCS_GAP_RATIO: f64 = 1.764;

/// The constant set as a value, for callers that want to pass it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub k_b: f64,
    pub e: f64,
    pub h: f64,
    pub hbar: f64,
    pub r_k: f64,
    pub l_0: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        k_b: K_B,
        e: E_CHARGE,
        h: H,
        hbar: HBAR,
        r_k: R_K,
        l_0: L_0,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

// Unit conversions used across the crate.
pub(crate) const UM2_TO_CM2: f64 = 1e-8;
pub(crate) const NM2_TO_UM2: f64 = 1e-6;
