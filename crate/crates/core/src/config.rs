//! TOML run configuration.
//!
//! Every table is optional; omitted values take the defaults documented on
//! each field. Unknown keys are rejected so typos surface as errors with a
//! line number instead of being silently ignored.

use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::bte::{DomGrid, DomOptions, DomProblem, GrayMedium, IterationMethod, SpatialScheme, WireGeometry};
use crate::error::{Error, Result};
use crate::junction::JunctionParams;
use crate::material::{builtin_material, SuperconductorMaterial};
use crate::phonon::{CompositeChannel, PowerLawChannel};
use crate::stage::{CascadeConfig, CoolingModel, StageConfig};
use crate::sweep::{dom_constriction, AndreevSweep, Scenario, ScenarioKind, SweepBase};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Superconductor; commands pick their own preset when omitted.
    pub material: Option<MaterialSpec>,
    #[serde(default)]
    pub junction: JunctionSpec,
    /// Phonon path, previous stage first. Defaults to a 22 K⁴cm²/W boundary resistance.
    #[serde(default)]
    pub phonon: Vec<PhononSpec>,
    #[serde(default)]
    pub stage: StageSpec,
    pub cascade: Option<CascadeSpec>,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub bte: BteSpec,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub name: String,
    /// K; required for names that are not presets.
    pub t_c: Option<f64>,
    /// Overrides the BCS gap, eV.
    pub gap_ev: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JunctionSpec {
    /// Ω·µm²
    pub rt_area: f64,
    /// µm²
    pub area: f64,
    pub gamma_dynes: f64,
    /// nm²; enables Andreev leakage.
    pub andreev_channel_area: Option<f64>,
}

impl Default for JunctionSpec {
    fn default() -> Self {
        Self {
            rt_area: 100.0,
            area: 1.0,
            gamma_dynes: 1e-3,
            andreev_channel_area: None,
        }
    }
}

/// One member of a series phonon path.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhononSpec {
    /// Boundary resistance r (K⁴cm²/W) over `area` (µm², default: junction area).
    Ptb {
        r: f64,
        area: Option<f64>,
    },
    Lead {
        r: f64,
        area: Option<f64>,
    },
    Constriction {
        r: f64,
        area: Option<f64>,
    },
    Quantum {
        count: f64,
        #[serde(default = "one")]
        transmission: f64,
    },
    /// P = (T_from^n − T_to^n)/(α·n) with explicit α (K^n/W) and n.
    Fitted {
        alpha: f64,
        n: f64,
    },
    /// Nanowire constriction fitted from the `[bte]` problem.
    Dom,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoolingModelSpec {
    #[default]
    Simplified,
    FullIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StageSpec {
    /// Previous-stage temperature, K.
    pub t_0: f64,
    /// W
    pub external_load: f64,
    /// K
    pub t_min: f64,
    pub cooling_model: CoolingModelSpec,
}

impl Default for StageSpec {
    fn default() -> Self {
        Self {
            t_0: 0.3,
            external_load: 0.0,
            t_min: 1e-3,
            cooling_model: CoolingModelSpec::Simplified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeSpec {
    pub t_bath: f64,
    /// Hottest first.
    #[serde(default)]
    pub stages: Vec<CascadeStageSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeStageSpec {
    pub material: MaterialSpec,
    #[serde(default)]
    pub junction: JunctionSpec,
    #[serde(default)]
    pub phonon: Vec<PhononSpec>,
    #[serde(default)]
    pub external_load: f64,
    #[serde(default)]
    pub cooling_model: CoolingModelSpec,
}

/// A grid as an explicit list or a `{ start, stop, count, log }` range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        #[serde(default)]
        log: bool,
    },
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        match *self {
            GridSpec::List(ref v) => Ok(v.clone()),
            GridSpec::Range {
                start,
                stop,
                count,
                log,
            } => {
                if log && !(start > 0.0 && stop > 0.0) {
                    return Err(Error::Config(format!(
                        "log grid needs positive bounds, got {start}..{stop}"
                    )));
                }
                Ok(match count {
                    0 => Vec::new(),
                    1 => vec![start],
                    _ => (0..count)
                        .map(|k| {
                            let m = (count - 1) as f64;
                            let k = k as f64;
                            if log {
                                start * (stop / start).powf(k / m)
                            } else {
                                (start * (m - k) + stop * k) / m
                            }
                        })
                        .collect(),
                })
            }
        }
    }

    fn linear(start: f64, stop: f64, count: usize) -> Self {
        GridSpec::Range {
            start,
            stop,
            count,
            log: false,
        }
    }

    fn log(start: f64, stop: f64, count: usize) -> Self {
        GridSpec::Range {
            start,
            stop,
            count,
            log: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    /// Bath temperatures of the temperature sweeps, K. Defaults depend on the material.
    pub t0: Option<GridSpec>,
    pub scenarios: Vec<ScenarioKind>,
    /// K⁴cm²/W
    pub r_ptb: f64,
    /// Declared constriction resistance, K⁴cm²/W.
    pub r_constriction: f64,
    /// When non-empty, constricted rows use DOM wires with these specularities instead.
    pub constriction_specularity: Vec<f64>,
    pub quantum_count: f64,
    pub quantum_transmission: f64,
    /// Reduced temperatures T/T_c of the maps.
    pub t: GridSpec,
    /// Blocking–cooling products of the classical map.
    pub pi: GridSpec,
    /// Channel counts of the quantum map.
    pub n: GridSpec,
    /// Ω·µm²
    pub rt_area: GridSpec,
    /// Bath temperatures of the transparency sweep, K.
    pub andreev_t0: GridSpec,
    /// Total phonon resistance of the transparency sweep, K⁴cm²/W.
    pub r_total: f64,
    /// nm²
    pub andreev_channel_area: f64,
    /// Leakage marking the Andreev limit; defaults to the junction's γ.
    pub andreev_threshold: Option<f64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            t0: None,
            scenarios: vec![
                ScenarioKind::PtbOnly,
                ScenarioKind::Constricted,
                ScenarioKind::QuantumLimit,
            ],
            r_ptb: 22.0,
            r_constriction: 198.0,
            constriction_specularity: Vec::new(),
            quantum_count: 10.0,
            quantum_transmission: 1.0,
            t: GridSpec::linear(0.05, 0.5, 10),
            pi: GridSpec::log(1e-5, 1e2, 15),
            n: GridSpec::List(vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0]),
            rt_area: GridSpec::log(5.0, 5000.0, 16),
            andreev_t0: GridSpec::List(vec![0.2, 0.3]),
            r_total: 220.0,
            andreev_channel_area: 30.0,
            andreev_threshold: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodSpec {
    #[default]
    Krylov,
    SourceIteration,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BteSpec {
    /// m
    pub length: f64,
    pub width: f64,
    pub height: f64,
    pub specularity: f64,
    /// m/s
    pub velocity: f64,
    /// m; `inf` for boundary-limited transport.
    pub bulk_mfp: f64,
    pub nx: usize,
    pub ny: usize,
    pub polar: usize,
    pub azimuthal: usize,
    pub scheme: SpatialScheme,
    pub method: MethodSpec,
    pub restart: usize,
    pub max_iterations: usize,
    /// K
    pub t_hot: f64,
    pub t_cold: f64,
    /// Temperatures of the conductance curve, K.
    pub temperatures: GridSpec,
}

impl Default for BteSpec {
    fn default() -> Self {
        let g = WireGeometry::default();
        let grid = DomGrid::default();
        let opts = DomOptions::default();
        Self {
            length: g.length,
            width: g.width,
            height: g.height,
            specularity: g.specularity,
            velocity: 6000.0,
            bulk_mfp: f64::INFINITY,
            nx: grid.nx,
            ny: grid.ny,
            polar: grid.polar,
            azimuthal: grid.azimuthal,
            scheme: opts.scheme,
            method: MethodSpec::Krylov,
            restart: 120,
            max_iterations: opts.max_iterations,
            t_hot: 0.3,
            t_cold: 0.1,
            temperatures: GridSpec::log(0.1, 1.0, 6),
        }
    }
}

impl BteSpec {
    pub fn problem(&self) -> Result<DomProblem> {
        let geometry = WireGeometry {
            length: self.length,
            width: self.width,
            height: self.height,
            specularity: self.specularity,
        };
        let medium = GrayMedium::debye(self.velocity, self.bulk_mfp);
        let grid = DomGrid {
            nx: self.nx,
            ny: self.ny,
            polar: self.polar,
            azimuthal: self.azimuthal,
        };
        geometry.validate().map_err(field("bte"))?;
        medium.validate().map_err(field("bte"))?;
        grid.validate().map_err(field("bte"))?;
        let mut problem = DomProblem::new(geometry, medium, grid);
        problem.options.scheme = self.scheme;
        problem.options.max_iterations = self.max_iterations;
        problem.options.method = match self.method {
            MethodSpec::Krylov => IterationMethod::Krylov {
                restart: self.restart.max(1),
            },
            MethodSpec::SourceIteration => IterationMethod::SourceIteration,
        };
        Ok(problem)
    }
}

/// Hex SHA-256 of the raw configuration text.
pub fn config_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn field(path: impl Into<String>) -> impl FnOnce(Error) -> Error {
    let path = path.into();
    move |e| match e {
        Error::Config(msg) => Error::Config(format!("{path}: {msg}")),
        other => Error::Config(format!("{path}: {other}")),
    }
}

impl MaterialSpec {
    pub fn resolve(&self) -> Result<SuperconductorMaterial> {
        let base = match self.t_c {
            Some(t_c) => SuperconductorMaterial::from_tc(self.name.clone(), t_c),
            None => builtin_material(&self.name),
        }
        .map_err(field("material"))?;
        match self.gap_ev {
            Some(gap) => SuperconductorMaterial::with_gap(base.name, base.t_c, gap * crate::constants::E_CHARGE)
                .map_err(field("material.gap_ev")),
            None => Ok(base),
        }
    }
}

impl JunctionSpec {
    pub fn resolve(&self) -> Result<JunctionParams> {
        let j = JunctionParams::new(self.rt_area, self.area, self.gamma_dynes).map_err(field("junction"))?;
        match self.andreev_channel_area {
            Some(a) => j
                .with_andreev_channel_area(a)
                .map_err(field("junction.andreev_channel_area")),
            None => Ok(j),
        }
    }
}

impl PhononSpec {
    /// Channel for a junction of `area` µm²; `bte` backs the `dom` kind.
    pub fn resolve(&self, area: f64, bte: &BteSpec) -> Result<PowerLawChannel> {
        match *self {
            PhononSpec::Ptb { r, area: a } => PowerLawChannel::from_boundary_resistance(r, a.unwrap_or(area)),
            PhononSpec::Lead { r, area: a } => PowerLawChannel::from_lead_resistance(r, a.unwrap_or(area)),
            PhononSpec::Constriction { r, area: a } => {
                PowerLawChannel::from_constriction_resistance(r, a.unwrap_or(area))
            }
            PhononSpec::Quantum { count, transmission } => PowerLawChannel::from_quantum_limit(count, transmission),
            PhononSpec::Fitted { alpha, n } => PowerLawChannel::new(alpha, n, crate::phonon::ChannelKind::Fitted),
            PhononSpec::Dom => {
                let p = bte.problem()?;
                dom_constriction(p.geometry, p.medium, p.grid, area)
            }
        }
    }
}

fn resolve_path(specs: &[PhononSpec], area: f64, bte: &BteSpec, prefix: &str) -> Result<CompositeChannel> {
    if specs.is_empty() {
        return PowerLawChannel::from_boundary_resistance(22.0, area)
            .map(CompositeChannel::single)
            .map_err(field(prefix));
    }
    let channels = specs
        .iter()
        .enumerate()
        .map(|(i, s)| s.resolve(area, bte).map_err(field(format!("{prefix}[{i}]"))))
        .collect::<Result<Vec<_>>>()?;
    CompositeChannel::new(channels).map_err(field(prefix))
}

fn cooling_model(model: CoolingModelSpec) -> CoolingModel {
    match model {
        CoolingModelSpec::Simplified => CoolingModel::Simplified,
        CoolingModelSpec::FullIntegral => CoolingModel::FullIntegral,
    }
}

/// Default bath-temperature grid of a material's temperature sweep.
fn default_t0(material: &SuperconductorMaterial) -> GridSpec {
    if material.name == "Al" {
        GridSpec::linear(0.1, 0.5, 9)
    } else {
        let top = 0.5 * material.t_c;
        GridSpec::linear(0.1 * top, top, 10)
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads and parses `path`, returning the config and the hash of its text.
    pub fn load(path: &Path) -> Result<(Self, String)> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg = Self::parse(&text).map_err(|e| {
            Error::Config(format!(
                "{}: {}",
                path.display(),
                e.to_string().trim_start_matches("config error: ")
            ))
        })?;
        Ok((cfg, config_hash(&text)))
    }

    /// Configured material, or the preset `default` when none is given.
    pub fn material_or(&self, default: &str) -> Result<SuperconductorMaterial> {
        match &self.material {
            Some(m) => m.resolve(),
            None => builtin_material(default).map_err(field("material")),
        }
    }

    pub fn stage_config(&self) -> Result<StageConfig> {
        let material = self.material_or("Al")?;
        let junction = self.junction.resolve()?;
        let phonon = resolve_path(&self.phonon, self.junction.area, &self.bte, "phonon")?;
        let mut stage = StageConfig::new(junction, material, phonon).with_external_load(self.stage.external_load);
        stage.t_min = self.stage.t_min;
        stage.cooling_model = cooling_model(self.stage.cooling_model);
        stage.validate().map_err(field("stage"))?;
        Ok(stage)
    }

    pub fn cascade_config(&self) -> Result<CascadeConfig> {
        let cascade = self
            .cascade
            .as_ref()
            .ok_or_else(|| Error::Config("missing [cascade] table".into()))?;
        let stages = cascade
            .stages
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let prefix = format!("cascade.stages[{i}]");
                let material = s.material.resolve().map_err(field(prefix.clone()))?;
                let junction = s.junction.resolve().map_err(field(prefix.clone()))?;
                let phonon = resolve_path(&s.phonon, s.junction.area, &self.bte, &format!("{prefix}.phonon"))?;
                let mut st = StageConfig::new(junction, material, phonon).with_external_load(s.external_load);
                st.t_min = self.stage.t_min;
                st.cooling_model = cooling_model(s.cooling_model);
                st.validate().map_err(field(prefix))?;
                Ok(st)
            })
            .collect::<Result<Vec<_>>>()?;
        if !(cascade.t_bath > 0.0) {
            return Err(Error::Config(format!(
                "cascade.t_bath must be positive, got {}",
                cascade.t_bath
            )));
        }
        Ok(CascadeConfig {
            t_bath: cascade.t_bath,
            stages,
        })
    }

    pub fn sweep_base(&self, default_material: &str) -> Result<SweepBase> {
        let material = self.material_or(default_material)?;
        self.junction.resolve()?;
        Ok(SweepBase {
            material,
            rt_area: self.junction.rt_area,
            area: self.junction.area,
            gamma_dynes: self.junction.gamma_dynes,
            t_min: self.stage.t_min,
        })
    }

    /// Scenario rows of the temperature sweep.
    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        let s = &self.sweep;
        let area = self.junction.area;
        let mut out = Vec::new();
        for kind in &s.scenarios {
            match kind {
                ScenarioKind::PtbOnly => out.push(Scenario::ptb_only(s.r_ptb, area).map_err(field("sweep.r_ptb"))?),
                ScenarioKind::Constricted if s.constriction_specularity.is_empty() => {
                    let c = PowerLawChannel::from_constriction_resistance(s.r_constriction, area)
                        .map_err(field("sweep.r_constriction"))?;
                    out.push(Scenario::constricted(s.r_ptb, area, c).map_err(field("sweep"))?);
                }
                ScenarioKind::Constricted => {
                    for &p in &s.constriction_specularity {
                        let bte = BteSpec {
                            specularity: p,
                            ..self.bte.clone()
                        };
                        let problem = bte.problem().map_err(field("sweep.constriction_specularity"))?;
                        let c = dom_constriction(problem.geometry, problem.medium, problem.grid, area)
                            .map_err(field("sweep.constriction_specularity"))?;
                        out.push(
                            Scenario::constricted(s.r_ptb, area, c)
                                .map_err(field("sweep"))?
                                .with_label(format!("constricted_p{p}")),
                        );
                    }
                }
                ScenarioKind::QuantumLimit => out.push(
                    Scenario::quantum_limit(s.quantum_count, s.quantum_transmission)
                        .map_err(field("sweep.quantum_count"))?,
                ),
            }
        }
        Ok(out)
    }

    pub fn t0_grid(&self, material: &SuperconductorMaterial) -> Result<Vec<f64>> {
        match &self.sweep.t0 {
            Some(g) => g.values().map_err(field("sweep.t0")),
            None => default_t0(material).values(),
        }
    }

    pub fn andreev_sweep(&self) -> AndreevSweep {
        AndreevSweep {
            r_total: self.sweep.r_total,
            channel_area: self.sweep.andreev_channel_area,
            threshold: self.sweep.andreev_threshold.unwrap_or(self.junction.gamma_dynes),
        }
    }
}
