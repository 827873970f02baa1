//! Gray phonon Boltzmann transport in a nanowire constriction, solved with
//! the discrete ordinate method.
//!
//! The wire joins two black-body reservoirs. Transport is resolved on the
//! (length × width) plane; the side walls at y = 0 and y = width reflect
//! specularly with probability `p` and diffusely otherwise. Scattering off the
//! top and bottom faces (the wire height) is folded into the mean free path
//! with the rate `(1 − p)/(1 + p)/height`.
//!
//! The relaxation-time equation with an energy-conserving relaxation target is
//! linear in the intensity, so the solver works with intensities measured
//! from the equilibrium at the mean temperature.

mod fit;
mod krylov;
mod ordinates;
mod solver;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, K_B};
use crate::error::{domain, Result};
use crate::warning::Warning;

pub use fit::{fit_power_law, PowerLawFit};
pub use ordinates::{gauss_legendre, product_set, Ordinate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireGeometry {
    /// m
    pub length: f64,
    /// m
    pub width: f64,
    /// m
    pub height: f64,
    /// Probability of specular wall reflection.
    pub specularity: f64,
}

impl Default for WireGeometry {
    fn default() -> Self {
        Self {
            length: 100e-9,
            width: 50e-9,
            height: 5e-9,
            specularity: 0.0,
        }
    }
}

impl WireGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("length", self.length), ("width", self.width), ("height", self.height)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("wire {name} must be positive, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.specularity) {
            return Err(domain(format!(
                "specularity must lie in [0, 1], got {}",
                self.specularity
            )));
        }
        Ok(())
    }

    pub fn cross_section(&self) -> f64 {
        self.width * self.height
    }

    /// Number of wires whose total cross-section is a third of a junction of
    /// `junction_area` (µm²).
    pub fn wire_count(&self, junction_area: f64) -> u64 {
        ((junction_area * 1e-12 / 3.0) / self.cross_section()).floor() as u64
    }
}

/// Single-velocity Debye medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrayMedium {
    /// Group velocity, m/s.
    pub velocity: f64,
    /// Coefficient a of the energy density u = a·T⁴, J/(m³·K⁴).
    pub energy_coefficient: f64,
    /// Bulk mean free path, m (may be infinite).
    pub bulk_mfp: f64,
}

impl GrayMedium {
    /// Three acoustic branches with a common velocity: a = π²k_B⁴/(10ħ³v³).
    pub fn debye(velocity: f64, bulk_mfp: f64) -> Self {
        Self {
            velocity,
            energy_coefficient: PI * PI * K_B.powi(4) / (10.0 * HBAR.powi(3) * velocity.powi(3)),
            bulk_mfp,
        }
    }

    /// Aluminium-like default: 6000 m/s, boundary-limited.
    pub fn aluminium() -> Self {
        Self::debye(6000.0, f64::INFINITY)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.velocity > 0.0) || !(self.energy_coefficient > 0.0) || !(self.bulk_mfp > 0.0) {
            return Err(domain(format!("invalid gray medium {self:?}")));
        }
        Ok(())
    }

    /// Phonon Stefan–Boltzmann constant v·a/4, W/(m²·K⁴).
    pub fn stefan_boltzmann(&self) -> f64 {
        0.25 * self.velocity * self.energy_coefficient
    }

    /// Volumetric heat capacity 4aT³, J/(m³·K).
    pub fn heat_capacity(&self, t: f64) -> f64 {
        4.0 * self.energy_coefficient * t.powi(3)
    }

    /// Mean free path including top/bottom face scattering, m.
    pub fn effective_mfp(&self, geom: &WireGeometry) -> f64 {
        let p = geom.specularity;
        let boundary = (1.0 - p) / ((1.0 + p) * geom.height);
        1.0 / (1.0 / self.bulk_mfp + boundary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomGrid {
    pub nx: usize,
    pub ny: usize,
    /// Axial-cosine nodes over the full sphere (even).
    pub polar: usize,
    pub azimuthal: usize,
}

impl Default for DomGrid {
    fn default() -> Self {
        Self {
            nx: 40,
            ny: 10,
            polar: 8,
            azimuthal: 16,
        }
    }
}

impl DomGrid {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 4 || self.ny < 4 {
            return Err(domain(format!(
                "grid needs at least 4x4 cells, got {}x{}",
                self.nx, self.ny
            )));
        }
        if self.polar < 2 || self.polar % 2 != 0 {
            return Err(domain(format!("polar count must be even and >= 2, got {}", self.polar)));
        }
        if self.azimuthal < 4 || self.azimuthal % 2 != 0 {
            return Err(domain(format!(
                "azimuthal count must be even and >= 4, got {}",
                self.azimuthal
            )));
        }
        Ok(())
    }

    /// Every resolution parameter doubled.
    pub fn refined(&self) -> Self {
        Self {
            nx: 2 * self.nx,
            ny: 2 * self.ny,
            polar: 2 * self.polar,
            azimuthal: 2 * self.azimuthal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpatialScheme {
    /// First-order upwind (positive, monotone).
    Step,
    /// Second-order diamond difference.
    DiamondDifference,
    /// Weighted diamond: diamond in optically thin cells, tending to step
    /// in optically thick ones.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationMethod {
    /// Plain source iteration; stops on the successive heat-flow change.
    SourceIteration,
    /// Source iteration accelerated by restarted GMRES.
    Krylov { restart: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomOptions {
    pub method: IterationMethod,
    pub scheme: SpatialScheme,
    /// Cap on transport sweeps.
    pub max_iterations: usize,
    /// Successive relative heat-flow change for source iteration.
    pub tolerance: f64,
    /// Relative residual for the Krylov solve.
    pub krylov_tolerance: f64,
}

impl Default for DomOptions {
    fn default() -> Self {
        Self {
            method: IterationMethod::Krylov { restart: 120 },
            scheme: SpatialScheme::Adaptive,
            max_iterations: 10_000,
            tolerance: 1e-8,
            krylov_tolerance: 1e-11,
        }
    }
}

/// Everything needed for a solve except the reservoir temperatures.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DomProblem {
    pub geometry: WireGeometry,
    pub medium: GrayMedium,
    pub grid: DomGrid,
    pub options: DomOptions,
}

impl Default for GrayMedium {
    fn default() -> Self {
        Self::aluminium()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomSolution {
    /// Heat flow from the hot to the cold reservoir, W.
    pub heat_flow: f64,
    /// Width-averaged axial flux on each x-face, W/m².
    pub flux_profile: Vec<f64>,
    /// Transport sweeps performed.
    pub iterations: usize,
    /// Relative spread of the axial heat flow along the wire.
    pub residual: f64,
    pub warnings: Vec<Warning>,
}

impl DomProblem {
    pub fn new(geometry: WireGeometry, medium: GrayMedium, grid: DomGrid) -> Self {
        Self {
            geometry,
            medium,
            grid,
            options: DomOptions::default(),
        }
    }

    /// Steady solve with the reservoir at x = 0 held at `t_hot` and x = L at `t_cold`.
    pub fn solve(&self, t_hot: f64, t_cold: f64) -> Result<DomSolution> {
        let (left, right, warnings) = solver::reservoir_inflow(&self.medium, t_hot, t_cold)?;
        let transport = solver::Transport::new(&self.geometry, &self.medium, &self.grid, self.options.scheme)?;
        let mut sol = transport.solve((left, right), &self.options)?;
        sol.warnings = warnings;
        Ok(sol)
    }

    /// Linear-response conductance Q/δT with δT = 0.02·T, for each T (sorted).
    pub fn conductance_curve(&self, temperatures: &[f64]) -> Result<Vec<ConductancePoint>> {
        if let Some(t) = temperatures.iter().find(|t| !(**t > 0.0)) {
            return Err(domain(format!("conductance temperatures must be positive, got {t}")));
        }
        let mut ts = temperatures.to_vec();
        ts.sort_by(f64::total_cmp);
        ts.par_iter()
            .map(|&t| {
                let dt = 0.02 * t;
                let sol = self.solve(t + 0.5 * dt, t - 0.5 * dt)?;
                Ok(ConductancePoint {
                    t,
                    conductance: sol.heat_flow / dt,
                    residual: sol.residual,
                })
            })
            .collect()
    }
}

/// Free function form of [`DomProblem::solve`] with default options.
pub fn solve_steady(
    geom: WireGeometry,
    medium: GrayMedium,
    t_hot: f64,
    t_cold: f64,
    grid: DomGrid,
) -> Result<DomSolution> {
    DomProblem::new(geom, medium, grid).solve(t_hot, t_cold)
}

/// Free function form of [`DomProblem::conductance_curve`] with default options.
pub fn conductance_curve(
    geom: WireGeometry,
    medium: GrayMedium,
    temperatures: &[f64],
    grid: DomGrid,
) -> Result<Vec<ConductancePoint>> {
    DomProblem::new(geom, medium, grid).conductance_curve(temperatures)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConductancePoint {
    /// K
    pub t: f64,
    /// W/K
    pub conductance: f64,
    pub residual: f64,
}

/// Ballistic phonon-radiation heat flow A·σ_ph·(T_h⁴ − T_c⁴) through `geom`.
pub fn ballistic_heat_flow(geom: &WireGeometry, medium: &GrayMedium, t_hot: f64, t_cold: f64) -> f64 {
    geom.cross_section() * medium.stefan_boltzmann() * (t_hot.powi(4) - t_cold.powi(4))
}

/// Fourier conduction with κ(T) = C(T)·v·Λ_eff/3 along `geom`, integrated
/// between the reservoir temperatures.
pub fn fourier_heat_flow(geom: &WireGeometry, medium: &GrayMedium, t_hot: f64, t_cold: f64) -> f64 {
    let mfp = medium.effective_mfp(geom);
    let kappa_integral = medium.velocity * mfp * medium.energy_coefficient * (t_hot.powi(4) - t_cold.powi(4)) / 3.0;
    geom.cross_section() * kappa_integral / geom.length
}
