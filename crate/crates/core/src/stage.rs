//! Heat balance of a cooler stage and sequential cascades of stages.
//!
//! A stage's island settles where the junction's cooling power equals the
//! phonon heat leaking in from the previous (hotter) stage plus any external
//! load. Net cooling `f(T_N) = P_cool − P_ph_influx − load` is positive when
//! the island is being pulled colder; a stable balance point is a root where
//! `f` increases through zero.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::junction::{
    cooling_power_full, cooling_power_simplified, optimal_bias, validity_warning, CoolingOperatingPoint, JunctionParams,
};
use crate::material::SuperconductorMaterial;
use crate::phonon::CompositeChannel;
use crate::warning::Warning;

/// Upper end of the solver bracket as a fraction of T_c.
pub const MAX_REDUCED_TEMPERATURE: f64 = 0.95;
/// Relative residual accepted at a balance point.
pub const RESIDUAL_TOLERANCE: f64 = 1e-4;
/// Power floor (W) used when scaling the residual tolerance.
pub const RESIDUAL_FLOOR: f64 = 1e-18;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeadTemperatureRule {
    /// Superconducting lead thermalised to the previous stage, T_S = T_0.
    #[default]
    PreviousStage,
}

/// Which cooling-power expression drives the balance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoolingModel {
    #[default]
    Simplified,
    FullIntegral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageConfig {
    pub junction: JunctionParams,
    pub material: SuperconductorMaterial,
    /// Phonon path from the previous stage (first) to the island (last).
    pub phonon: CompositeChannel,
    /// Extra heat load on the island, W.
    pub external_load: f64,
    pub lead_temperature_rule: LeadTemperatureRule,
    /// Lower end of the solver bracket, K.
    pub t_min: f64,
    pub cooling_model: CoolingModel,
}

impl StageConfig {
    pub fn new(junction: JunctionParams, material: SuperconductorMaterial, phonon: CompositeChannel) -> Self {
        Self {
            junction,
            material,
            phonon,
            external_load: 0.0,
            lead_temperature_rule: LeadTemperatureRule::PreviousStage,
            t_min: 1e-3,
            cooling_model: CoolingModel::Simplified,
        }
    }

    pub fn with_external_load(mut self, load: f64) -> Self {
        self.external_load = load;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.junction.validate()?;
        if !(self.external_load >= 0.0) {
            return Err(domain(format!(
                "external load must be >= 0, got {}",
                self.external_load
            )));
        }
        if !(self.t_min > 0.0) {
            return Err(domain(format!("T_min must be positive, got {}", self.t_min)));
        }
        Ok(())
    }

    fn lead_temperature(&self, t_0: f64) -> f64 {
        match self.lead_temperature_rule {
            LeadTemperatureRule::PreviousStage => t_0,
        }
    }

    /// Cooling power at island temperature `t_n`, biased at V_opt(T_N).
    pub fn cooling_power(&self, t_n: f64, t_0: f64) -> Result<f64> {
        match self.cooling_model {
            CoolingModel::Simplified => cooling_power_simplified(&self.junction, &self.material, t_n),
            CoolingModel::FullIntegral => {
                let v = optimal_bias(self.material.gap, t_n)?;
                let op = CoolingOperatingPoint {
                    v,
                    t_n,
                    t_s: self.lead_temperature(t_0),
                };
                cooling_power_full(&self.junction, &self.material, op)
            }
        }
    }

    /// Evaluates both sides of the heat balance at `t_n`.
    pub fn balance(&self, t_n: f64, t_0: f64) -> Result<Balance> {
        let p_cool = self.cooling_power(t_n, t_0)?;
        let influx = self.phonon.heat_flow(t_0, t_n)?;
        Ok(Balance {
            p_cool,
            p_ph_influx: influx,
            external_load: self.external_load,
        })
    }
}

/// Terms of the heat balance at one island temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Balance {
    pub p_cool: f64,
    /// Phonon heat flowing into the island (negative when it flows out).
    pub p_ph_influx: f64,
    pub external_load: f64,
}

impl Balance {
    /// Net cooling P_cool − P_ph − load.
    pub fn net(&self) -> f64 {
        self.p_cool - self.p_ph_influx - self.external_load
    }

    /// Residual tolerance at this point.
    pub fn tolerance(&self) -> f64 {
        RESIDUAL_TOLERANCE * self.p_cool.abs().max(self.p_ph_influx.abs()).max(RESIDUAL_FLOOR)
    }

    pub fn converged(&self) -> bool {
        self.net().abs() <= self.tolerance()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSolution {
    pub t_0: f64,
    pub t_n: f64,
    pub v_opt: f64,
    pub p_cool: f64,
    pub p_ph_influx: f64,
    pub external_load: f64,
    pub residual: f64,
    pub relative_cooling: f64,
    /// Central-difference slope of net cooling at the root, W/K.
    pub stability_slope: f64,
    pub validity_warnings: Vec<Warning>,
    /// Full (T, net cooling) scan, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Points in the log-spaced sign scan on each side of T_0.
    pub scan_points: usize,
    /// Keep the scan in the solution for multi-root diagnostics.
    pub keep_scan: bool,
    pub max_bisections: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            scan_points: 400,
            keep_scan: false,
            max_bisections: 200,
        }
    }
}

/// (T_0 − T_N)/T_0.
pub fn relative_cooling(t_0: f64, t_n: f64) -> f64 {
    (t_0 - t_n) / t_0
}

fn log_grid(from: f64, to: f64, count: usize) -> impl Iterator<Item = f64> {
    let ratio = (to / from).ln();
    (1..=count).map(move |k| from * (ratio * k as f64 / count as f64).exp())
}

pub fn equilibrium_temperature(stage: &StageConfig, t_0: f64) -> Result<StageSolution> {
    equilibrium_temperature_with(stage, t_0, &SolverOptions::default())
}

/// Solves the stage's balance point starting from a previous stage at `t_0`.
///
/// Picks the largest stable root at or below `t_0`. If the junction cannot
/// cool against its load, returns the stable root above `t_0` with a
/// [`Warning::Heating`].
pub fn equilibrium_temperature_with(stage: &StageConfig, t_0: f64, opts: &SolverOptions) -> Result<StageSolution> {
    stage.validate()?;
    let t_top = MAX_REDUCED_TEMPERATURE * stage.material.t_c;
    if !(t_0 > stage.t_min) {
        return Err(domain(format!(
            "T_0 = {t_0} K must exceed the bracket floor {} K",
            stage.t_min
        )));
    }
    if t_0 >= t_top {
        return Err(domain(format!(
            "T_0 = {t_0} K is at or above 0.95*T_c = {t_top} K for {}",
            stage.material.name
        )));
    }

    let net = |t: f64| stage.balance(t, t_0).map(|b| b.net());
    let f0 = net(t_0)?;
    let mut scan = Vec::new();
    let keep = |scan: &mut Vec<(f64, f64)>, t: f64, f: f64| {
        if opts.keep_scan {
            scan.push((t, f));
        }
    };
    keep(&mut scan, t_0, f0);

    if f0 == 0.0 {
        return finish(stage, t_0, t_0, Vec::new(), opts.keep_scan.then_some(scan));
    }

    let mut warnings = Vec::new();
    // Bracket (cold side with f <= 0, warm side with f > 0).
    let bracket = if f0 > 0.0 {
        let mut upper = (t_0, f0);
        let mut found = None;
        for t in log_grid(t_0, stage.t_min, opts.scan_points) {
            let f = net(t)?;
            keep(&mut scan, t, f);
            if f <= 0.0 {
                found = Some(((t, f), upper));
                break;
            }
            upper = (t, f);
        }
        found
    } else {
        let mut lower = (t_0, f0);
        let mut found = None;
        for t in log_grid(t_0, t_top, opts.scan_points) {
            let f = net(t)?;
            keep(&mut scan, t, f);
            if f > 0.0 {
                found = Some((lower, (t, f)));
                break;
            }
            lower = (t, f);
        }
        found
    };

    let Some(((mut lo, f_lo), (mut hi, _))) = bracket else {
        let mut diag = String::new();
        for t in log_grid(stage.t_min, t_top, 12) {
            if let Ok(f) = net(t) {
                diag.push_str(&format!(" f({t:.4e} K)={f:.3e} W;"));
            }
        }
        return Err(Error::NoRoot(format!(
            "no sign change of net cooling in [{}, {t_top:.4}] K from T_0 = {t_0} K;{diag}",
            stage.t_min
        )));
    };
    if f_lo == 0.0 {
        hi = lo;
    }

    let mut root = None;
    for _ in 0..opts.max_bisections {
        let mid = 0.5 * (lo + hi);
        let b = stage.balance(mid, t_0)?;
        if b.converged() {
            root = Some(mid);
            break;
        }
        if b.net() > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let t_n = match root {
        Some(t) => t,
        None => {
            let b = stage.balance(hi, t_0)?;
            if !b.converged() {
                return Err(Error::NonConvergence {
                    iterations: opts.max_bisections,
                    history: vec![b.net()],
                });
            }
            hi
        }
    };
    if t_n > t_0 {
        warnings.push(Warning::Heating { t_0, t_n });
    }
    finish(stage, t_0, t_n, warnings, opts.keep_scan.then_some(scan))
}

fn finish(
    stage: &StageConfig,
    t_0: f64,
    t_n: f64,
    mut warnings: Vec<Warning>,
    scan: Option<Vec<(f64, f64)>>,
) -> Result<StageSolution> {
    let b = stage.balance(t_n, t_0)?;
    let h = 1e-4 * t_n;
    let slope = (stage.balance(t_n + h, t_0)?.net() - stage.balance(t_n - h, t_0)?.net()) / (2.0 * h);
    if stage.cooling_model == CoolingModel::Simplified {
        if let Some(w) = validity_warning(&stage.material, t_n) {
            warnings.push(w);
        }
    }
    Ok(StageSolution {
        t_0,
        t_n,
        v_opt: optimal_bias(stage.material.gap, t_n)?,
        p_cool: b.p_cool,
        p_ph_influx: b.p_ph_influx,
        external_load: b.external_load,
        residual: b.net().abs(),
        relative_cooling: relative_cooling(t_0, t_n),
        stability_slope: slope,
        validity_warnings: warnings,
        scan,
    })
}

/// A bath and an ordered list of stages, hottest first.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeConfig {
    pub t_bath: f64,
    pub stages: Vec<StageConfig>,
}

/// Solves stages in order, each starting from the previous stage's T_N.
pub fn solve_cascade(c: &CascadeConfig) -> Result<Vec<StageSolution>> {
    if !(c.t_bath > 0.0) {
        return Err(domain(format!("bath temperature must be positive, got {}", c.t_bath)));
    }
    let mut t_0 = c.t_bath;
    let mut out = Vec::with_capacity(c.stages.len());
    for (index, stage) in c.stages.iter().enumerate() {
        let sol = equilibrium_temperature(stage, t_0).map_err(|e| Error::Stage {
            index,
            source: Box::new(e),
        })?;
        t_0 = sol.t_n;
        out.push(sol);
    }
    Ok(out)
}
