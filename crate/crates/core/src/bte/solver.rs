//! Discrete-ordinate transport sweep on the (length × width) plane of a wire.

use super::ordinates::{mirror_y, product_set, Ordinate};
use super::{DomGrid, DomOptions, DomSolution, GrayMedium, IterationMethod, SpatialScheme, WireGeometry};
use crate::bte::krylov::gmres;
use crate::error::{domain, Error, Result};
use crate::warning::Warning;
use std::f64::consts::PI;

/// Discretised problem with all geometry-dependent coefficients precomputed.
pub(crate) struct Transport {
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    height: f64,
    /// Extinction 1/Λ_eff, 1/m.
    extinction: f64,
    specularity: f64,
    scheme: SpatialScheme,
    ordinates: Vec<Ordinate>,
    azimuthal: usize,
    /// Ordinates entering from the bottom wall (μ_y > 0) and their slots.
    up: Vec<usize>,
    down: Vec<usize>,
    /// Slot of each ordinate within `up` or `down`.
    slot: Vec<usize>,
    /// Σ w·|μ_y| over one hemisphere in μ_y.
    wall_norm: f64,
}

/// Output of one sweep in addition to the updated iterate.
struct SweepTally {
    /// Σ_j Δy Σ_m w μ_x I on each x-face, W/m (per unit height).
    face_flux: Vec<f64>,
}

impl Transport {
    pub(crate) fn new(geom: &WireGeometry, medium: &GrayMedium, grid: &DomGrid, scheme: SpatialScheme) -> Result<Self> {
        geom.validate()?;
        medium.validate()?;
        grid.validate()?;
        let ordinates = product_set(grid.polar, grid.azimuthal);
        let mut up = Vec::new();
        let mut down = Vec::new();
        let mut slot = vec![0; ordinates.len()];
        for (m, o) in ordinates.iter().enumerate() {
            if o.mu_y > 0.0 {
                slot[m] = up.len();
                up.push(m);
            } else {
                slot[m] = down.len();
                down.push(m);
            }
        }
        let wall_norm = up.iter().map(|&m| ordinates[m].weight * ordinates[m].mu_y).sum();
        Ok(Self {
            nx: grid.nx,
            ny: grid.ny,
            dx: geom.length / grid.nx as f64,
            dy: geom.width / grid.ny as f64,
            height: geom.height,
            extinction: 1.0 / medium.effective_mfp(geom),
            specularity: geom.specularity,
            scheme,
            ordinates,
            azimuthal: grid.azimuthal,
            up,
            down,
            slot,
            wall_norm,
        })
    }

    fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Length of the iterate: cell sources, then bottom and top wall inflows.
    pub(crate) fn state_len(&self) -> usize {
        self.cells() + self.nx * (self.up.len() + self.down.len())
    }

    fn bottom_index(&self, i: usize, m: usize) -> usize {
        self.cells() + i * self.up.len() + self.slot[m]
    }

    fn top_index(&self, i: usize, m: usize) -> usize {
        self.cells() + self.nx * self.up.len() + i * self.down.len() + self.slot[m]
    }

    /// One transport sweep over all ordinates: writes `K·state + bc` into `out`,
    /// where `bc` carries the reservoir intensities (`inflow` = (left, right)).
    fn sweep(&self, state: &[f64], inflow: (f64, f64), out: &mut [f64]) -> SweepTally {
        let (nx, ny) = (self.nx, self.ny);
        let cells = self.cells();
        let sigma = self.extinction;
        out.iter_mut().for_each(|v| *v = 0.0);
        let mut face_flux = vec![0.0; nx + 1];
        // Outgoing intensity at each wall, per ordinate and x cell.
        let mut bottom_out = vec![0.0; self.down.len() * nx];
        let mut top_out = vec![0.0; self.up.len() * nx];
        let mut y_face = vec![0.0; nx];
        let inv4pi = 1.0 / (4.0 * PI);

        for (m, o) in self.ordinates.iter().enumerate() {
            let forward = o.mu_x > 0.0;
            let upward = o.mu_y > 0.0;
            let ax = o.mu_x.abs() / self.dx;
            let ay = o.mu_y.abs() / self.dy;
            let wx = o.weight * o.mu_x * self.dy;
            let x_in_bc = if forward { inflow.0 } else { inflow.1 };
            let theta_x = diamond_weight(sigma / ax);
            let theta_y = diamond_weight(sigma / ay);

            for (i, v) in y_face.iter_mut().enumerate() {
                *v = if upward {
                    state[self.bottom_index(i, m)]
                } else {
                    state[self.top_index(i, m)]
                };
            }
            for jj in 0..ny {
                let j = if upward { jj } else { ny - 1 - jj };
                let mut x_face = x_in_bc;
                let entry_face = if forward { 0 } else { nx };
                face_flux[entry_face] += wx * x_face;
                for ii in 0..nx {
                    let i = if forward { ii } else { nx - 1 - ii };
                    let c = j * nx + i;
                    let yin = y_face[i];
                    let (center, x_out, y_out) = match self.scheme {
                        SpatialScheme::Step => {
                            let ic = (ax * x_face + ay * yin + sigma * state[c]) / (ax + ay + sigma);
                            (ic, ic, ic)
                        }
                        SpatialScheme::DiamondDifference => {
                            let ic =
                                (2.0 * ax * x_face + 2.0 * ay * yin + sigma * state[c]) / (2.0 * ax + 2.0 * ay + sigma);
                            (ic, 2.0 * ic - x_face, 2.0 * ic - yin)
                        }
                        SpatialScheme::Adaptive => {
                            let (bx, by) = (ax / theta_x, ay / theta_y);
                            let ic = (bx * x_face + by * yin + sigma * state[c]) / (bx + by + sigma);
                            (
                                ic,
                                (ic - (1.0 - theta_x) * x_face) / theta_x,
                                (ic - (1.0 - theta_y) * yin) / theta_y,
                            )
                        }
                    };
                    out[c] += o.weight * inv4pi * center;
                    y_face[i] = y_out;
                    x_face = x_out;
                    let exit_face = if forward { i + 1 } else { i };
                    face_flux[exit_face] += wx * x_out;
                }
            }
            let s = self.slot[m];
            if upward {
                top_out[s * nx..(s + 1) * nx].copy_from_slice(&y_face);
            } else {
                bottom_out[s * nx..(s + 1) * nx].copy_from_slice(&y_face);
            }
        }

        // Wall reflection: specular part mirrors, diffuse part re-emits the
        // incident energy isotropically.
        let p = self.specularity;
        for i in 0..nx {
            let incident_bottom: f64 = self
                .down
                .iter()
                .map(|&m| {
                    let o = &self.ordinates[m];
                    o.weight * o.mu_y.abs() * bottom_out[self.slot[m] * nx + i]
                })
                .sum();
            let incident_top: f64 = self
                .up
                .iter()
                .map(|&m| {
                    let o = &self.ordinates[m];
                    o.weight * o.mu_y * top_out[self.slot[m] * nx + i]
                })
                .sum();
            let diffuse_bottom = incident_bottom / self.wall_norm;
            let diffuse_top = incident_top / self.wall_norm;
            for &m in &self.up {
                let mirror = mirror_y(m, self.azimuthal);
                out[self.bottom_index(i, m)] = p * bottom_out[self.slot[mirror] * nx + i] + (1.0 - p) * diffuse_bottom;
            }
            for &m in &self.down {
                let mirror = mirror_y(m, self.azimuthal);
                out[self.top_index(i, m)] = p * top_out[self.slot[mirror] * nx + i] + (1.0 - p) * diffuse_top;
            }
        }
        debug_assert_eq!(out.len(), cells + nx * (self.up.len() + self.down.len()));
        SweepTally { face_flux }
    }

    /// Solves for the deviational intensity with reservoir intensities
    /// `inflow` (left, right) and returns the heat flow.
    pub(crate) fn solve(&self, inflow: (f64, f64), opts: &DomOptions) -> Result<DomSolution> {
        let n = self.state_len();
        let mut state = vec![0.0; n];
        let mut next = vec![0.0; n];
        let mut iterations;
        let mut history = Vec::new();

        match opts.method {
            IterationMethod::SourceIteration => {
                let mut q_prev = f64::NAN;
                iterations = 0;
                loop {
                    let tally = self.sweep(&state, inflow, &mut next);
                    iterations += 1;
                    std::mem::swap(&mut state, &mut next);
                    let q = mean(&tally.face_flux);
                    let change = if q == 0.0 && q_prev == 0.0 {
                        0.0
                    } else {
                        ((q - q_prev) / q).abs()
                    };
                    history.push(change);
                    if change < opts.tolerance {
                        break;
                    }
                    if iterations >= opts.max_iterations {
                        return Err(non_convergence(iterations, &history));
                    }
                    q_prev = q;
                }
            }
            IterationMethod::Krylov { restart } => {
                let mut b = vec![0.0; n];
                self.sweep(&vec![0.0; n], inflow, &mut b);
                let zero_inflow = (0.0, 0.0);
                let report = gmres(
                    |v, out| {
                        self.sweep(v, zero_inflow, out);
                        out.iter_mut().zip(v).for_each(|(o, vi)| *o = vi - *o);
                    },
                    &b,
                    &mut state,
                    restart,
                    opts.krylov_tolerance,
                    opts.max_iterations,
                );
                iterations = report.operator_applications;
                history = report.history;
                if !report.converged {
                    return Err(non_convergence(iterations, &history));
                }
            }
        }

        let tally = self.sweep(&state, inflow, &mut next);
        let q = mean(&tally.face_flux);
        let (lo, hi) = tally
            .face_flux
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let residual = if q != 0.0 { (hi - lo) / q.abs() } else { hi - lo };
        let width = self.dy * self.ny as f64;
        Ok(DomSolution {
            heat_flow: q * self.height,
            flux_profile: tally.face_flux.iter().map(|f| f / width).collect(),
            iterations,
            residual,
            warnings: Vec::new(),
        })
    }
}

/// Weight of the outflow face in the cell-centre closure, from the cell's
/// optical depth along one axis: 1/2 (diamond) for thin cells, rising toward
/// 1 (step) in thick cells where diamond difference stops damping.
fn diamond_weight(optical_depth: f64) -> f64 {
    (1.0 - 1.0 / optical_depth).clamp(0.5, 1.0)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn non_convergence(iterations: usize, history: &[f64]) -> Error {
    let tail = history.len().saturating_sub(10);
    Error::NonConvergence {
        iterations,
        history: history[tail..].to_vec(),
    }
}

/// Boundary intensities relative to the mean-temperature equilibrium.
pub(crate) fn reservoir_inflow(medium: &GrayMedium, t_hot: f64, t_cold: f64) -> Result<(f64, f64, Vec<Warning>)> {
    if !(t_hot > 0.0) || !(t_cold > 0.0) {
        return Err(domain(format!(
            "reservoir temperatures must be positive, got {t_hot}, {t_cold}"
        )));
    }
    let t_ref = 0.5 * (t_hot + t_cold);
    let scale = medium.velocity * medium.energy_coefficient / (4.0 * PI);
    let dev = |t: f64| scale * (t.powi(4) - t_ref.powi(4));
    let mut warnings = Vec::new();
    let relative = (t_hot - t_cold).abs() / t_ref;
    if relative > 0.2 {
        warnings.push(Warning::LargeBias { relative });
    }
    Ok((dev(t_hot), dev(t_cold), warnings))
}
