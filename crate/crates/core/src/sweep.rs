//! Parameter sweeps behind the design maps.
//!
//! Every cell is an independent single-stage solve. Cells run on a rayon pool
//! sized by `CRYOSTAGE_THREADS` (0 or unset: one thread per core) and are
//! collected in axis order, so results do not depend on scheduling.
//!
//! The classical map uses the dimensionless blocking–cooling product
//! `Π = α·L_0/(R_T·T_c^(n−2))`. With Δ = 1.764·k_B·T_c it is proportional to
//! the ratio of the electronic cooling scale Δ²/(e²R_T) to the phonon leak
//! scale T_c^n/(α·n), so relative cooling depends on (t, Π, γ) only.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bte::{conductance_curve, fit_power_law, DomGrid, GrayMedium, WireGeometry};
use crate::constants::{L_0, R_K};
use crate::error::{domain, Error, Result};
use crate::junction::{andreev_rt_area, JunctionParams};
use crate::material::SuperconductorMaterial;
use crate::phonon::{ChannelKind, CompositeChannel, PowerLawChannel};
use crate::stage::{equilibrium_temperature, StageConfig, StageSolution, MAX_REDUCED_TEMPERATURE};

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "CRYOSTAGE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    PtbOnly,
    Constricted,
    QuantumLimit,
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::PtbOnly => "ptb_only",
            ScenarioKind::Constricted => "constricted",
            ScenarioKind::QuantumLimit => "quantum_limit",
        })
    }
}

/// One phonon-filtering scenario of a temperature sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    /// Row label in output files.
    pub label: String,
    pub phonon: CompositeChannel,
}

impl Scenario {
    /// Boundary resistance `r_ptb` (K⁴cm²/W) over the junction area (µm²) alone.
    pub fn ptb_only(r_ptb: f64, area: f64) -> Result<Self> {
        Ok(Self {
            kind: ScenarioKind::PtbOnly,
            label: ScenarioKind::PtbOnly.to_string(),
            phonon: CompositeChannel::single(PowerLawChannel::from_boundary_resistance(r_ptb, area)?),
        })
    }

    /// Boundary resistance followed by a constriction channel.
    pub fn constricted(r_ptb: f64, area: f64, constriction: PowerLawChannel) -> Result<Self> {
        let ptb = PowerLawChannel::from_boundary_resistance(r_ptb, area)?;
        Ok(Self {
            kind: ScenarioKind::Constricted,
            label: ScenarioKind::Constricted.to_string(),
            phonon: CompositeChannel::new(vec![ptb, constriction])?,
        })
    }

    /// `count` ballistic channels of the given transmission.
    pub fn quantum_limit(count: f64, transmission: f64) -> Result<Self> {
        Ok(Self {
            kind: ScenarioKind::QuantumLimit,
            label: ScenarioKind::QuantumLimit.to_string(),
            phonon: CompositeChannel::single(PowerLawChannel::from_quantum_limit(count, transmission)?),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Constriction channel from DOM: wires of `geometry` covering a third of the
/// junction area, each with the power law fitted to its conductance on
/// [0.1, 1] K.
pub fn dom_constriction(
    geometry: WireGeometry,
    medium: GrayMedium,
    grid: DomGrid,
    junction_area: f64,
) -> Result<PowerLawChannel> {
    let temps: Vec<f64> = (0..6).map(|k| 0.1 * 10f64.powf(k as f64 / 5.0)).collect();
    let curve = conductance_curve(geometry, medium, &temps, grid)?;
    let fit = fit_power_law(&curve)?;
    let count = geometry.wire_count(junction_area);
    if count == 0 {
        return Err(domain(format!(
            "junction area {junction_area} µm² holds no wire of cross-section {} m²",
            geometry.cross_section()
        )));
    }
    let wire = PowerLawChannel {
        kind: ChannelKind::Constriction,
        ..fit.channel
    };
    wire.parallel(count as f64)
}

/// Junction and material shared by every cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepBase {
    pub material: SuperconductorMaterial,
    /// Ω·µm²
    pub rt_area: f64,
    /// µm²
    pub area: f64,
    pub gamma_dynes: f64,
    /// Solver bracket floor, K.
    pub t_min: f64,
}

impl SweepBase {
    /// Tunnel-junction defaults: R_T·A = 100 Ω·µm², A = 1 µm², γ = 10⁻³.
    pub fn new(material: SuperconductorMaterial) -> Self {
        Self {
            material,
            rt_area: 100.0,
            area: 1.0,
            gamma_dynes: 1e-3,
            t_min: 1e-3,
        }
    }

    pub fn junction(&self) -> Result<JunctionParams> {
        JunctionParams::new(self.rt_area, self.area, self.gamma_dynes)
    }

    pub fn stage(&self, phonon: CompositeChannel) -> Result<StageConfig> {
        let mut stage = StageConfig::new(self.junction()?, self.material.clone(), phonon);
        stage.t_min = self.t_min;
        Ok(stage)
    }

    fn metadata(&self) -> Vec<(String, String)> {
        vec![
            ("material".into(), self.material.name.clone()),
            ("T_c_K".into(), format!("{:e}", self.material.t_c)),
            ("gap_eV".into(), format!("{:e}", self.material.gap_ev())),
            ("RT_A_ohm_um2".into(), format!("{:e}", self.rt_area)),
            ("area_um2".into(), format!("{:e}", self.area)),
            ("gamma_dynes".into(), format!("{:e}", self.gamma_dynes)),
        ]
    }
}

/// α of an n = 4 channel at blocking–cooling product `pi`.
pub fn classical_alpha(pi: f64, base: &SweepBase) -> f64 {
    let r_t = base.rt_area / base.area;
    pi * r_t * base.material.t_c.powi(2) / L_0
}

/// Blocking–cooling product of `count` conductance quanta.
pub fn quantum_pi(count: f64, base: &SweepBase) -> f64 {
    R_K / (count * base.rt_area / base.area)
}

/// R_T·A (Ω·µm²) at which Andreev leakage through `a_ch` (nm²) reaches `gamma_star`.
pub fn andreev_limit_curve(a_ch: f64, gamma_star: f64) -> f64 {
    andreev_rt_area(a_ch, gamma_star)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Relative cooling against bath temperature, one row per scenario.
    VersusT0,
    /// Classical (n = 4) map over (t, Π).
    ClassicalMap,
    /// Quantum (n = 2) map over (t, N).
    QuantumMap,
    /// Relative cooling against R_T·A with Andreev leakage, one row per T_0.
    Andreev,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub values: Vec<f64>,
}

/// One solved (or failed) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub row: usize,
    pub column: usize,
    /// Bath temperature of the solve, K.
    pub t_0: f64,
    /// Effective Dynes parameter of the junction in this cell.
    pub gamma_eff: f64,
    pub outcome: Result<StageSolution>,
}

impl SweepCell {
    pub fn relative_cooling(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|s| s.relative_cooling)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub rows: Axis,
    pub columns: Axis,
    /// Row labels for scenario sweeps.
    pub row_labels: Vec<String>,
    /// Row-major, `rows × columns`.
    pub cells: Vec<SweepCell>,
    /// R_T·A of the Andreev limit locus, for [`SweepKind::Andreev`].
    pub andreev_limit: Option<f64>,
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.values.len(), self.columns.values.len())
    }

    pub fn cell(&self, row: usize, column: usize) -> &SweepCell {
        &self.cells[row * self.columns.values.len() + column]
    }

    /// Relative cooling per cell, `None` where the solve failed.
    pub fn relative_cooling_grid(&self) -> Vec<Vec<Option<f64>>> {
        self.cells
            .chunks(self.columns.values.len().max(1))
            .take(self.rows.values.len())
            .map(|row| row.iter().map(SweepCell::relative_cooling).collect())
            .collect()
    }
}

/// Number of sweep threads requested through [`THREADS_ENV`].
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Runs `f` on every (row, column) pair in parallel, returning cells in order.
fn run_grid<F>(rows: usize, columns: usize, f: F) -> Result<Vec<SweepCell>>
where
    F: Fn(usize, usize) -> SweepCell + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| Error::Config(format!("cannot start sweep threads: {e}")))?;
    Ok(pool.install(|| {
        (0..rows * columns)
            .into_par_iter()
            .map(|k| f(k / columns, k % columns))
            .collect()
    }))
}

fn strictly_increasing(name: &str, values: &[f64]) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(domain(format!("{name} grid contains non-finite value {v}")));
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain(format!("{name} grid must be strictly increasing")));
    }
    Ok(())
}

fn positive(name: &str, values: &[f64]) -> Result<()> {
    strictly_increasing(name, values)?;
    match values.first() {
        Some(v) if !(*v > 0.0) => Err(domain(format!("{name} grid must be positive, got {v}"))),
        _ => Ok(()),
    }
}

fn reduced_temperatures(values: &[f64]) -> Result<()> {
    positive("t", values)?;
    match values.last() {
        Some(t) if *t >= MAX_REDUCED_TEMPERATURE => Err(domain(format!(
            "t grid must lie below {MAX_REDUCED_TEMPERATURE}, got {t}"
        ))),
        _ => Ok(()),
    }
}

fn solve_cell(stage: Result<StageConfig>, t_0: f64) -> (f64, Result<StageSolution>) {
    match stage {
        Ok(stage) => (stage.junction.effective_gamma(), equilibrium_temperature(&stage, t_0)),
        Err(e) => (f64::NAN, Err(e)),
    }
}

/// Relative cooling against bath temperature for each scenario.
pub fn sweep_relative_cooling_vs_t0(base: &SweepBase, scenarios: &[Scenario], t0: &[f64]) -> Result<SweepResult> {
    positive("T_0", t0)?;
    let cells = run_grid(scenarios.len(), t0.len(), |row, column| {
        let t_0 = t0[column];
        let (gamma_eff, outcome) = solve_cell(base.stage(scenarios[row].phonon.clone()), t_0);
        SweepCell {
            row,
            column,
            t_0,
            gamma_eff,
            outcome,
        }
    })?;
    let mut metadata = base.metadata();
    metadata.push(("sweep".into(), "relative_cooling_vs_T0".into()));
    metadata.push((
        "scenarios".into(),
        scenarios.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join(","),
    ));
    Ok(SweepResult {
        kind: SweepKind::VersusT0,
        rows: Axis {
            name: "scenario",
            values: (0..scenarios.len()).map(|k| k as f64).collect(),
        },
        columns: Axis {
            name: "T0_K",
            values: t0.to_vec(),
        },
        row_labels: scenarios.iter().map(|s| s.label.clone()).collect(),
        cells,
        andreev_limit: None,
        metadata,
    })
}

/// Classical (n = 4) cooling map over reduced temperature and Π.
pub fn sweep_map_classical(base: &SweepBase, t: &[f64], pi: &[f64]) -> Result<SweepResult> {
    reduced_temperatures(t)?;
    positive("Pi", pi)?;
    let cells = run_grid(t.len(), pi.len(), |row, column| {
        let t_0 = t[row] * base.material.t_c;
        let stage = PowerLawChannel::new(classical_alpha(pi[column], base), 4.0, ChannelKind::Ptb)
            .and_then(|ch| base.stage(CompositeChannel::single(ch)));
        let (gamma_eff, outcome) = solve_cell(stage, t_0);
        SweepCell {
            row,
            column,
            t_0,
            gamma_eff,
            outcome,
        }
    })?;
    let mut metadata = base.metadata();
    metadata.push(("sweep".into(), "classical_map".into()));
    metadata.push(("channel".into(), "n=4".into()));
    metadata.push((
        "axis_Pi".into(),
        "alpha*L_0/(R_T*T_c^(n-2)) (reconstructed axis)".into(),
    ));
    Ok(SweepResult {
        kind: SweepKind::ClassicalMap,
        rows: Axis {
            name: "t",
            values: t.to_vec(),
        },
        columns: Axis {
            name: "Pi",
            values: pi.to_vec(),
        },
        row_labels: Vec::new(),
        cells,
        andreev_limit: None,
        metadata,
    })
}

/// Quantum (n = 2) cooling map over reduced temperature and channel count.
pub fn sweep_map_quantum(base: &SweepBase, t: &[f64], counts: &[f64]) -> Result<SweepResult> {
    reduced_temperatures(t)?;
    positive("N", counts)?;
    if let Some(n) = counts.iter().find(|n| **n < 1.0 || n.fract() != 0.0) {
        return Err(domain(format!("channel counts must be integers >= 1, got {n}")));
    }
    let cells = run_grid(t.len(), counts.len(), |row, column| {
        let t_0 = t[row] * base.material.t_c;
        let stage = PowerLawChannel::from_quantum_limit(counts[column], 1.0)
            .and_then(|ch| base.stage(CompositeChannel::single(ch)));
        let (gamma_eff, outcome) = solve_cell(stage, t_0);
        SweepCell {
            row,
            column,
            t_0,
            gamma_eff,
            outcome,
        }
    })?;
    let mut metadata = base.metadata();
    metadata.push(("sweep".into(), "quantum_map".into()));
    metadata.push(("channel".into(), "n=2, transmission 1".into()));
    Ok(SweepResult {
        kind: SweepKind::QuantumMap,
        rows: Axis {
            name: "t",
            values: t.to_vec(),
        },
        columns: Axis {
            name: "N",
            values: counts.to_vec(),
        },
        row_labels: Vec::new(),
        cells,
        andreev_limit: None,
        metadata,
    })
}

/// Parameters of the Andreev-limited transparency sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndreevSweep {
    /// Total phonon resistance, K⁴cm²/W.
    pub r_total: f64,
    /// Andreev channel area, nm².
    pub channel_area: f64,
    /// Leakage threshold marking the limit locus.
    pub threshold: f64,
}

impl Default for AndreevSweep {
    fn default() -> Self {
        Self {
            r_total: 220.0,
            channel_area: 30.0,
            threshold: 1e-3,
        }
    }
}

/// Relative cooling against R_T·A with Andreev leakage, one row per bath temperature.
pub fn sweep_fig3(base: &SweepBase, params: &AndreevSweep, rt_area: &[f64], t0: &[f64]) -> Result<SweepResult> {
    positive("RT_A", rt_area)?;
    positive("T_0", t0)?;
    if !(params.channel_area > 0.0) || !(params.threshold > 0.0) {
        return Err(domain(format!(
            "Andreev channel area and threshold must be positive, got {} nm² and {}",
            params.channel_area, params.threshold
        )));
    }
    let phonon = CompositeChannel::single(PowerLawChannel::from_boundary_resistance(params.r_total, base.area)?);
    let cells = run_grid(t0.len(), rt_area.len(), |row, column| {
        let t_0 = t0[row];
        let cell_base = SweepBase {
            rt_area: rt_area[column],
            ..base.clone()
        };
        let stage = cell_base.stage(phonon.clone()).and_then(|mut s| {
            s.junction = s.junction.with_andreev_channel_area(params.channel_area)?;
            Ok(s)
        });
        let (gamma_eff, outcome) = solve_cell(stage, t_0);
        SweepCell {
            row,
            column,
            t_0,
            gamma_eff,
            outcome,
        }
    })?;
    let limit = andreev_limit_curve(params.channel_area, params.threshold);
    let mut metadata = base.metadata();
    metadata.retain(|(k, _)| k != "RT_A_ohm_um2");
    metadata.push(("sweep".into(), "andreev".into()));
    metadata.push(("r_total_K4cm2_per_W".into(), format!("{:e}", params.r_total)));
    metadata.push(("andreev_channel_area_nm2".into(), format!("{:e}", params.channel_area)));
    metadata.push(("andreev_threshold".into(), format!("{:e}", params.threshold)));
    metadata.push(("andreev_limit_RT_A_ohm_um2".into(), format!("{limit:e}")));
    Ok(SweepResult {
        kind: SweepKind::Andreev,
        rows: Axis {
            name: "T0_K",
            values: t0.to_vec(),
        },
        columns: Axis {
            name: "RT_A_ohm_um2",
            values: rt_area.to_vec(),
        },
        row_labels: Vec::new(),
        cells,
        andreev_limit: Some(limit),
        metadata,
    })
}
