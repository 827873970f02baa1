//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p cryostage --test acceptance`.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use cryostage_core::bte::{
    conductance_curve, fit_power_law, fourier_heat_flow, solve_steady, DomGrid, GrayMedium, WireGeometry,
};
use cryostage_core::junction::{
    andreev_gamma, cooling_power_full, cooling_power_simplified, optimal_bias, CoolingOperatingPoint,
};
use cryostage_core::material::builtin_material;
use cryostage_core::phonon::{ChannelKind, CompositeChannel, PowerLawChannel};
use cryostage_core::stage::{equilibrium_temperature, StageConfig};
use cryostage_core::sweep::{andreev_limit_curve, sweep_relative_cooling_vs_t0, Scenario, SweepBase};
use cryostage_core::JunctionParams;

// Tolerances as stated by the acceptance criteria.
const C1_REL_DIFF: f64 = 0.15;
const C2_CONDUCTANCE_REL: f64 = 1e-12;
const C2_FLOW: f64 = 3.79e-13;
const C2_FLOW_REL: f64 = 0.005;
const C3_GAMMA_REL: f64 = 1e-3;
const C4_SERIES_REL: f64 = 1e-9;
const C4_MIXED_FLOW: f64 = 3.78e-13;
const C4_MIXED_REL: f64 = 0.01;
const C5_BALLISTIC_REL: f64 = 0.03;
const C5_LENGTH_REL: f64 = 0.01;
const C6_FOURIER_REL: f64 = 0.05;
const C7_N_RANGE: (f64, f64) = (2.5, 4.0);
const C8_RESIDUAL_REL: f64 = 1e-4;
const C9_PEAK: f64 = 0.40;
const C10_GRID: usize = 5;

// Independent SI constants.
const KB: f64 = 1.380649e-23;
const PLANCK: f64 = 6.62607015e-34;

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_simplified_vs_full() -> Outcome {
    let j = JunctionParams::new(100.0, 1.0, 1e-3).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for name in ["Al", "V"] {
        let m = builtin_material(name).unwrap();
        for t in [0.05, 0.1, 0.15, 0.2, 0.25] {
            let t_n = t * m.t_c;
            let v = optimal_bias(m.gap, t_n).unwrap();
            let simple = cooling_power_simplified(&j, &m, t_n).unwrap();
            let full =
                cooling_power_full(&j, &m, CoolingOperatingPoint { v, t_n, t_s: t_n }).map_err(|e| e.to_string())?;
            worst = worst.max(rel(simple, full));
        }
    }
    check(
        worst <= C1_REL_DIFF,
        format!("max relative difference {worst:.4} (limit {C1_REL_DIFF})"),
    )
}

fn c2_quantum_channel() -> Outcome {
    let n = 10.0;
    let ch = PowerLawChannel::from_quantum_limit(n, 1.0).unwrap();
    let mut worst = 0.0f64;
    for k in 1..=50 {
        let t = 0.02 * k as f64;
        let g = n * PI * PI * KB * KB * t / (3.0 * PLANCK);
        worst = worst.max(rel(ch.conductance(t), g));
    }
    let flow = ch.heat_flow(0.3, 0.1);
    let flow_err = rel(flow, C2_FLOW);
    check(
        worst <= C2_CONDUCTANCE_REL && flow_err <= C2_FLOW_REL,
        format!("G max rel error {worst:.2e}; P(0.3, 0.1) = {flow:.4e} W ({flow_err:.2e} from {C2_FLOW:e})"),
    )
}

fn c3_andreev_round_trip() -> Outcome {
    let gamma = andreev_gamma(193.6, 30.0);
    let back = andreev_limit_curve(30.0, gamma);
    let g_err = rel(gamma, 1e-3);
    let inv_err = rel(back, 193.6);
    check(
        g_err <= C3_GAMMA_REL && inv_err <= 1e-12,
        format!("gamma = {gamma:.6e} ({g_err:.2e} off), inverse {back} ({inv_err:.1e} off)"),
    )
}

fn c4_series() -> Outcome {
    let a = PowerLawChannel::new(2.2e7, 4.0, ChannelKind::Ptb).unwrap();
    let b = PowerLawChannel::new(6.3e7, 4.0, ChannelKind::Constriction).unwrap();
    let cc = CompositeChannel::new(vec![a, b]).unwrap();
    let mut worst = 0.0f64;
    for i in 0..10 {
        for k in 0..10 {
            let t_from = 0.05 + 0.1 * i as f64;
            let t_to = 0.025 + 0.09 * k as f64;
            let closed = (t_from.powi(4) - t_to.powi(4)) / (4.0 * (a.alpha + b.alpha));
            worst = worst.max(rel(cc.heat_flow(t_from, t_to).map_err(|e| e.to_string())?, closed));
        }
    }
    let mixed = CompositeChannel::new(vec![a, PowerLawChannel::from_quantum_limit(10.0, 1.0).unwrap()]).unwrap();
    let q = mixed.heat_flow(0.3, 0.1).map_err(|e| e.to_string())?;
    let q_err = rel(q, C4_MIXED_FLOW);
    check(
        worst <= C4_SERIES_REL && q_err <= C4_MIXED_REL,
        format!("equal-n max rel error {worst:.2e}; mixed series {q:.4e} W ({q_err:.2e} from {C4_MIXED_FLOW:e})"),
    )
}

fn c5_ballistic() -> Outcome {
    let m = GrayMedium::aluminium();
    let mut flows = Vec::new();
    let mut worst = 0.0f64;
    for length in [100e-9, 1e-6] {
        let g = WireGeometry {
            length,
            specularity: 1.0,
            ..Default::default()
        };
        let q = solve_steady(g, m, 0.3, 0.1, DomGrid::default())
            .map_err(|e| e.to_string())?
            .heat_flow;
        // A·π²k_B⁴/(40ħ³v²)·(T_h⁴ − T_c⁴)
        let hbar = PLANCK / (2.0 * PI);
        let oracle = g.width * g.height * PI * PI * KB.powi(4) / (40.0 * hbar.powi(3) * 6000f64.powi(2))
            * (0.3f64.powi(4) - 0.1f64.powi(4));
        worst = worst.max(rel(q, oracle));
        flows.push(q);
    }
    let spread = rel(flows[1], flows[0]);
    check(
        worst <= C5_BALLISTIC_REL && spread <= C5_LENGTH_REL,
        format!(
            "Q = {:.4e} W, max rel error {worst:.2e}, length spread {spread:.2e}",
            flows[0]
        ),
    )
}

fn c6_diffusive() -> Outcome {
    let length = 100e-9;
    let medium = GrayMedium::debye(6000.0, length / 100.0);
    let g = WireGeometry {
        length,
        specularity: 1.0,
        ..Default::default()
    };
    let grid = DomGrid {
        nx: 200,
        ny: 4,
        ..Default::default()
    };
    let q = solve_steady(g, medium, 0.3, 0.1, grid)
        .map_err(|e| e.to_string())?
        .heat_flow;
    let oracle = fourier_heat_flow(&g, &medium, 0.3, 0.1);
    let err = rel(q, oracle);
    check(
        err <= C6_FOURIER_REL,
        format!("Q/Fourier = {:.4} (limit ±{C6_FOURIER_REL})", q / oracle),
    )
}

fn c7_exponent() -> Outcome {
    let temps: Vec<f64> = (0..6).map(|k| 0.1 * 10f64.powf(k as f64 / 5.0)).collect();
    let mut report = Vec::new();
    let mut ok = true;
    for p in [0.0, 0.5] {
        let g = WireGeometry {
            specularity: p,
            ..Default::default()
        };
        let curve =
            conductance_curve(g, GrayMedium::aluminium(), &temps, DomGrid::default()).map_err(|e| e.to_string())?;
        let n = fit_power_law(&curve).map_err(|e| e.to_string())?.channel.n;
        ok &= n > C7_N_RANGE.0 && n <= C7_N_RANGE.1;
        report.push(format!("p={p}: n={n:.4}"));
    }
    check(ok, format!("{} (qualitative target 3)", report.join(", ")))
}

fn al_stage(rt_area: f64, gamma: f64, r: f64) -> StageConfig {
    let j = JunctionParams::new(rt_area, 100.0, gamma).unwrap();
    let ch = PowerLawChannel::from_boundary_resistance(r, 100.0).unwrap();
    StageConfig::new(j, builtin_material("Al").unwrap(), CompositeChannel::single(ch))
}

fn c8_stage_solver() -> Outcome {
    let mut solved = 0;
    for rt_area in [20.0, 100.0, 500.0] {
        for gamma in [1e-4, 1e-3, 1e-2] {
            for r in [5.0, 22.0, 220.0] {
                for t_0 in [0.1, 0.2, 0.3, 0.45] {
                    let stage = al_stage(rt_area, gamma, r);
                    let s = equilibrium_temperature(&stage, t_0).map_err(|e| e.to_string())?;
                    let scale = s.p_cool.abs().max(s.p_ph_influx.abs()).max(1e-18);
                    let net = s.p_cool - s.p_ph_influx - s.external_load;
                    if net.abs() > C8_RESIDUAL_REL * scale {
                        return Err(format!(
                            "residual {net:e} at R_TA={rt_area}, γ={gamma}, r={r}, T0={t_0}"
                        ));
                    }
                    let h = 1e-4 * s.t_n;
                    let f = |t: f64| {
                        let b = stage.balance(t, t_0).unwrap();
                        b.p_cool - b.p_ph_influx - b.external_load
                    };
                    let slope = (f(s.t_n + h) - f(s.t_n - h)) / (2.0 * h);
                    if slope.is_nan() || slope <= 0.0 {
                        return Err(format!("unstable root at R_TA={rt_area}, γ={gamma}, r={r}, T0={t_0}"));
                    }
                    solved += 1;
                }
            }
        }
    }
    let open = al_stage(f64::INFINITY, 1e-3, 22.0);
    let s = equilibrium_temperature(&open, 0.3).map_err(|e| e.to_string())?;
    check(
        s.t_n == 0.3,
        format!(
            "{solved} solves within residual and stable; R_T = ∞ gives T_N = {} K",
            s.t_n
        ),
    )
}

fn c9_headline() -> Outcome {
    let base = SweepBase::new(builtin_material("Al").unwrap());
    let area = base.area;
    let t0: Vec<f64> = (0..9).map(|k| 0.1 + 0.05 * k as f64).collect();
    let ptb = Scenario::ptb_only(22.0, area).unwrap();
    let constricted = Scenario::constricted(
        22.0,
        area,
        PowerLawChannel::from_constriction_resistance(198.0, area).unwrap(),
    )
    .unwrap();
    let quantum = Scenario::quantum_limit(10.0, 1.0).unwrap();
    let r = sweep_relative_cooling_vs_t0(&base, &[ptb, constricted, quantum], &t0).map_err(|e| e.to_string())?;
    let grid = r.relative_cooling_grid();
    let row = |k: usize| {
        grid[k]
            .iter()
            .map(|v| v.ok_or("failed cell"))
            .collect::<Result<Vec<f64>, _>>()
    };
    let (ptb, con, q) = (row(0)?, row(1)?, row(2)?);
    let peak = |v: &[f64]| v.iter().copied().fold(f64::MIN, f64::max);
    let ordered = ptb.iter().zip(&con).all(|(a, b)| b >= a);
    check(
        peak(&con) >= C9_PEAK && peak(&q) >= C9_PEAK && ordered,
        format!(
            "peak constricted {:.3}, quantum N=10 {:.3}; constricted >= ptb_only pointwise: {ordered}",
            peak(&con),
            peak(&q)
        ),
    )
}

fn c10_monotonicity() -> Outcome {
    let t0s: Vec<f64> = (0..C10_GRID).map(|k| 0.1 + 0.08 * k as f64).collect();
    // Stronger blocking: every channel's α scaled up.
    for &t_0 in &t0s {
        let mut last = f64::MIN;
        for k in 0..C10_GRID {
            let scale = 4f64.powi(k as i32);
            let base = al_stage(100.0, 1e-3, 22.0);
            let stage = StageConfig {
                phonon: base.phonon.scaled(scale).unwrap(),
                ..base
            };
            let rc = equilibrium_temperature(&stage, t_0)
                .map_err(|e| e.to_string())?
                .relative_cooling;
            if rc < last {
                return Err(format!("cooling fell with α ×{scale} at T0 = {t_0}"));
            }
            last = rc;
        }
    }
    for &t_0 in &t0s {
        let mut last = f64::MAX;
        for k in 0..C10_GRID {
            let gamma = 1e-5 * 10f64.powi(k as i32);
            let rc = equilibrium_temperature(&al_stage(100.0, gamma, 22.0), t_0)
                .map_err(|e| e.to_string())?
                .relative_cooling;
            if rc > last {
                return Err(format!("cooling rose with γ = {gamma} at T0 = {t_0}"));
            }
            last = rc;
        }
    }
    let m = GrayMedium::aluminium();
    let q = |p: f64, length: f64| {
        let g = WireGeometry {
            length,
            specularity: p,
            ..Default::default()
        };
        solve_steady(g, m, 0.3, 0.1, DomGrid::default()).map(|s| s.heat_flow)
    };
    let slack = 1e-9;
    let mut last = 0.0;
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let v = q(p, 100e-9).map_err(|e| e.to_string())?;
        if v < last * (1.0 - slack) {
            return Err(format!("DOM Q fell with p = {p}"));
        }
        last = v;
    }
    let mut last = f64::MAX;
    for length in [50e-9, 100e-9, 200e-9, 400e-9] {
        let v = q(0.0, length).map_err(|e| e.to_string())?;
        if v > last * (1.0 + slack) {
            return Err(format!("DOM Q rose with length {length}"));
        }
        last = v;
    }
    Ok(format!(
        "{0}x{0} α and γ grids monotone; DOM Q monotone in p and 1/length",
        C10_GRID
    ))
}

fn c11_cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_cryostage");
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(bin)
            .args(["sweep", "fig2e", "--config"])
            .arg(golden.join("fig2e.toml"))
            .arg("--out")
            .arg(&out)
            .env("CRYOSTAGE_THREADS", if run == "a" { "1" } else { "0" })
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("run {run} exited with {status}"));
        }
        outputs.push(std::fs::read(out.join("fig2e.csv")).map_err(|e| e.to_string())?);
    }
    let expected = std::fs::read(golden.join("fig2e.csv")).map_err(|e| e.to_string())?;
    check(
        outputs[0] == outputs[1] && outputs[0] == expected,
        format!(
            "runs identical: {}; matches golden: {}",
            outputs[0] == outputs[1],
            outputs[0] == expected
        ),
    )
}
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("simplified cooling power vs full integral", c1_simplified_vs_full),
        ("quantum-limit channel", c2_quantum_channel),
        ("Andreev leakage round trip", c3_andreev_round_trip),
        ("series composition", c4_series),
        ("DOM ballistic limit", c5_ballistic),
        ("DOM diffusive limit", c6_diffusive),
        ("DOM exponent report", c7_exponent),
        ("stage solver residual and stability", c8_stage_solver),
        ("relative cooling above 40% per stage", c9_headline),
        ("monotonicity suites", c10_monotonicity),
        ("CLI determinism", c11_cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
