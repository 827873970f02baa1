use std::fmt;

use serde::Serialize;

/// Non-fatal conditions attached to solver results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Warning {
    /// The simplified cooling-power expression is used above 0.5·T_c.
    AboveValidity { t: f64, t_c: f64 },
    /// No cooling root below T_0; the stage settles above its bath.
    Heating { t_0: f64, t_n: f64 },
    /// Temperature bias too large for a linear-response reading of the result.
    LargeBias { relative: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::AboveValidity { t, t_c } => write!(
                f,
                "T = {t:.4} K exceeds 0.5*T_c = {:.4} K; simplified cooling power is unreliable",
                0.5 * t_c
            ),
            Warning::Heating { t_0, t_n } => {
                write!(f, "junction heats: T_N = {t_n:.4} K above T_0 = {t_0:.4} K")
            }
            Warning::LargeBias { relative } => write!(
                f,
                "relative temperature bias {relative:.3} exceeds 0.2; conductance is not linear-response"
            ),
        }
    }
}
