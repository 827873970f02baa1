//! Superconductor material presets.

use serde::{Deserialize, Serialize};

use crate::constants::{BCS_GAP_RATIO, E_CHARGE, K_B};
use crate::error::{domain, Error, Result};

/// A superconducting lead material with a temperature-independent gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperconductorMaterial {
    pub name: String,
    /// Critical temperature, K.
    pub t_c: f64,
    /// Zero-temperature energy gap, J.
    pub gap: f64,
}

/// Zero-temperature BCS gap 1.764·k_B·T_c in joules.
pub fn bcs_gap(t_c: f64) -> Result<f64> {
    if !(t_c > 0.0) || !t_c.is_finite() {
        return Err(domain(format!("critical temperature must be positive, got {t_c}")));
    }
    Ok(BCS_GAP_RATIO * K_B * t_c)
}

/// Preset critical temperatures (K) for the built-in materials.
pub const PRESETS: &[(&str, f64)] = &[("Al", 1.196), ("V", 5.40), ("Ti", 0.39)];

impl SuperconductorMaterial {
    /// Material with the BCS gap implied by `t_c`.
    pub fn from_tc(name: impl Into<String>, t_c: f64) -> Result<Self> {
        let gap = bcs_gap(t_c)?;
        Ok(Self {
            name: name.into(),
            t_c,
            gap,
        })
    }

    /// Material with an explicit gap (J), e.g. from a measured value.
    pub fn with_gap(name: impl Into<String>, t_c: f64, gap: f64) -> Result<Self> {
        if !(t_c > 0.0) || !(gap > 0.0) {
            return Err(domain(format!(
                "material needs T_c > 0 and gap > 0, got T_c = {t_c}, gap = {gap}"
            )));
        }
        Ok(Self {
            name: name.into(),
            t_c,
            gap,
        })
    }

    /// Gap expressed in electron-volts.
    pub fn gap_ev(&self) -> f64 {
        self.gap / E_CHARGE
    }
}

/// Looks up one of the built-in presets (Al, V, Ti).
pub fn builtin_material(name: &str) -> Result<SuperconductorMaterial> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(n, t_c)| SuperconductorMaterial::from_tc(n, t_c))
        .unwrap_or_else(|| {
            Err(Error::UnknownMaterial {
                name: name.to_string(),
                available: PRESETS.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", "),
            })
        })
}

/// All presets, in table order.
pub fn builtin_materials() -> Vec<SuperconductorMaterial> {
    PRESETS
        .iter()
        .map(|&(n, t_c)| SuperconductorMaterial::from_tc(n, t_c).expect("preset T_c is positive"))
        .collect()
}
