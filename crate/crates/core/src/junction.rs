//! Electronic heat transport through a single semiconductor–superconductor
//! tunnel junction.
//!
//! Two cooling-power routes are provided: the closed-form low-temperature
//! expression at optimal bias ([`cooling_power_simplified`]) and the full
//! quasiparticle tunneling integral over a Dynes-broadened density of states
//! ([`cooling_power_full`]). The second one is the reference the first is
//! checked against.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{E_CHARGE, K_B, NM2_TO_UM2, R_K};
use crate::error::{domain, Result};
use crate::material::SuperconductorMaterial;
use crate::quadrature::{integrate, QuadOptions};
use crate::warning::Warning;

/// Smallest Dynes parameter used when evaluating the density of states.
pub const MIN_DYNES_GAMMA: f64 = 1e-15;

/// Coefficient of the thermal shift of the optimal bias, in units of k_B·T.
const BIAS_THERMAL_SHIFT: f64 = 0.66;
/// Prefactor of the optimal-bias cooling power.
const COOLING_PREFACTOR: f64 = 0.59;

/// Tunnel junction parameters in lab units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JunctionParams {
    /// Characteristic resistance R_T·A, Ω·µm².
    pub rt_area: f64,
    /// Junction area A, µm².
    pub area: f64,
    /// Dynes leakage parameter (dimensionless).
    pub gamma_dynes: f64,
    /// Area of a single Andreev conduction channel, nm².
    pub andreev_channel_area: Option<f64>,
}

impl JunctionParams {
    pub fn new(rt_area: f64, area: f64, gamma_dynes: f64) -> Result<Self> {
        let j = Self {
            rt_area,
            area,
            gamma_dynes,
            andreev_channel_area: None,
        };
        j.validate()?;
        Ok(j)
    }

    pub fn with_andreev_channel_area(mut self, a_ch: f64) -> Result<Self> {
        self.andreev_channel_area = Some(a_ch);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        // R_T·A = +inf is allowed: it describes a junction that carries no current.
        if !(self.rt_area > 0.0) {
            return Err(domain(format!("R_T*A must be positive, got {}", self.rt_area)));
        }
        if !(self.area > 0.0 && self.area.is_finite()) {
            return Err(domain(format!("junction area must be positive, got {}", self.area)));
        }
        if !(0.0..1.0).contains(&self.gamma_dynes) {
            return Err(domain(format!(
                "Dynes parameter must lie in [0, 1), got {}",
                self.gamma_dynes
            )));
        }
        if let Some(a) = self.andreev_channel_area {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(domain(format!("Andreev channel area must be >= 0, got {a}")));
            }
        }
        Ok(())
    }

    /// Normal-state tunnel resistance R_T, Ω.
    pub fn resistance(&self) -> f64 {
        self.rt_area / self.area
    }

    /// Total subgap leakage: Dynes term plus the Andreev contribution.
    pub fn effective_gamma(&self) -> f64 {
        effective_gamma(self)
    }

    /// Zero-bias resistance R_gap = R_T/γ_total (infinite when γ_total = 0).
    pub fn gap_resistance(&self) -> f64 {
        let g = self.effective_gamma();
        if g > 0.0 {
            self.resistance() / g
        } else {
            f64::INFINITY
        }
    }
}

/// Bias point of a junction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingOperatingPoint {
    /// Bias voltage, V.
    pub v: f64,
    /// Normal (semiconductor) electron temperature, K.
    pub t_n: f64,
    /// Superconductor quasiparticle temperature, K.
    pub t_s: f64,
}

/// Optimal bias (Δ − 0.66·k_B·T)/e in volts.
pub fn optimal_bias(gap: f64, t: f64) -> Result<f64> {
    if !(gap > 0.0) || !(t >= 0.0) {
        return Err(domain(format!("optimal bias needs gap > 0 and T >= 0, got {gap}, {t}")));
    }
    let shift = BIAS_THERMAL_SHIFT * K_B * t;
    if shift >= gap {
        return Err(domain(format!(
            "0.66*k_B*T = {shift:e} J exceeds the gap {gap:e} J; optimal-bias formula does not apply"
        )));
    }
    Ok((gap - shift) / E_CHARGE)
}

/// Returns a warning when `t` is too hot for the simplified cooling power.
pub fn validity_warning(m: &SuperconductorMaterial, t: f64) -> Option<Warning> {
    (t > 0.5 * m.t_c).then_some(Warning::AboveValidity { t, t_c: m.t_c })
}

/// Cooling power of the normal electrode at optimal bias, low-temperature form.
///
/// Negative values mean the subgap leakage term wins and the junction heats.
pub fn cooling_power_simplified(j: &JunctionParams, m: &SuperconductorMaterial, t_n: f64) -> Result<f64> {
    if !(t_n > 0.0) {
        return Err(domain(format!("T_N must be positive, got {t_n}")));
    }
    let gap = m.gap;
    let r_t = j.resistance();
    let v_opt = optimal_bias(gap, t_n)?;
    let thermionic = gap * gap / (E_CHARGE * E_CHARGE * r_t) * COOLING_PREFACTOR * (K_B * t_n / gap).powf(1.5);
    let leakage = 0.5 * v_opt * v_opt / j.gap_resistance();
    Ok(thermionic - leakage)
}

/// Dynes-broadened BCS density of states |Re[(ε + iγ)/√((ε + iγ)² − 1)]|, ε = E/Δ.
///
/// γ is clamped to [`MIN_DYNES_GAMMA`] so the function stays finite at |E| = Δ.
pub fn dynes_dos(e: f64, gap: f64, gamma: f64) -> f64 {
    let z = Complex64::new(e / gap, gamma.max(MIN_DYNES_GAMMA));
    (z / (z * z - 1.0).sqrt()).re.abs()
}

fn fermi(e: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return if e < 0.0 {
            1.0
        } else if e > 0.0 {
            0.0
        } else {
            0.5
        };
    }
    let x = e / (K_B * t);
    if x > 0.0 {
        let q = (-x).exp();
        q / (1.0 + q)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

// Bound on ∫_{edge}^{∞} (E + c)·exp(−(E − s)/k) dE, the worst-case tail of the
// integrand outside the quadrature window.
fn exponential_tail(edge: f64, shift: f64, kt: f64, c: f64) -> f64 {
    if kt <= 0.0 {
        return 0.0;
    }
    kt * (-(edge - shift) / kt).exp() * (edge + c + kt)
}

/// Heat current out of the normal electrode from the full tunneling integral
/// (1/(e²R_T))·∫ n_S(E)·(E − eV)·[f(E − eV, T_N) − f(E, T_S)] dE.
pub fn cooling_power_full(j: &JunctionParams, m: &SuperconductorMaterial, op: CoolingOperatingPoint) -> Result<f64> {
    if !(op.t_n > 0.0) || !(op.t_s > 0.0) || !(op.v >= 0.0) {
        return Err(domain(format!("invalid operating point {op:?}")));
    }
    let r_t = j.resistance();
    if r_t.is_infinite() {
        return Ok(0.0);
    }
    let gap = m.gap;
    let gamma = j.effective_gamma();
    let ev = E_CHARGE * op.v;
    let kt = K_B * op.t_n.max(op.t_s);

    let integrand = |e: f64| dynes_dos(e, gap, gamma) * (e - ev) * (fermi(e - ev, op.t_n) - fermi(e, op.t_s));

    let lo = (-20.0 * gap).min(ev - 50.0 * kt).min(-50.0 * kt);
    let hi = (20.0 * gap).max(ev + 50.0 * kt);
    let mut points = vec![lo, -gap, 0.0, ev, gap, hi];
    points.sort_by(f64::total_cmp);
    points.dedup();

    let opts = QuadOptions {
        rel_tol: 1e-6,
        // Scale-aware floor so the exactly-cancelling equilibrium case terminates.
        abs_tol: 1e-14 * gap * gap,
        max_intervals: 4000,
    };
    let value = integrate(integrand, &points, opts)?;

    // Density of states is below 1.01 outside ±20Δ.
    let nmax = 1.01;
    let tail = nmax
        * (exponential_tail(hi, ev, K_B * op.t_n, ev.abs())
            + exponential_tail(hi, 0.0, K_B * op.t_s, ev.abs())
            + exponential_tail(-lo, -ev, K_B * op.t_n, ev.abs())
            + exponential_tail(-lo, 0.0, K_B * op.t_s, ev.abs()));
    if tail > opts.rel_tol * value.abs() && tail > opts.abs_tol {
        return Err(crate::error::Error::Quadrature {
            estimate: value,
            error: tail,
            intervals: 0,
        });
    }
    Ok(value / (E_CHARGE * E_CHARGE * r_t))
}

/// Andreev-limited leakage γ_A = R_K·A_ch/(4·R_T·A).
///
/// `rt_area` in Ω·µm², `a_ch` in nm².
pub fn andreev_gamma(rt_area: f64, a_ch: f64) -> f64 {
    R_K * a_ch * NM2_TO_UM2 / (4.0 * rt_area)
}

/// R_T·A (Ω·µm²) at which the Andreev leakage equals `gamma`.
pub fn andreev_rt_area(a_ch: f64, gamma: f64) -> f64 {
    R_K * a_ch * NM2_TO_UM2 / (4.0 * gamma)
}

/// Dynes leakage plus the Andreev term when a channel area is given.
pub fn effective_gamma(j: &JunctionParams) -> f64 {
    match j.andreev_channel_area {
        Some(a_ch) => j.gamma_dynes + andreev_gamma(j.rt_area, a_ch),
        None => j.gamma_dynes,
    }
}
