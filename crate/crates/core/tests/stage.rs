use cryostage_core::material::builtin_material;
use cryostage_core::phonon::{CompositeChannel, PowerLawChannel};
use cryostage_core::stage::{equilibrium_temperature, solve_cascade, CascadeConfig, StageConfig};
use cryostage_core::{JunctionParams, Warning};
use proptest::prelude::*;

fn stage(material: &str, rt_area: f64, gamma: f64, channels: Vec<PowerLawChannel>) -> StageConfig {
    let j = JunctionParams::new(rt_area, 100.0, gamma).unwrap();
    StageConfig::new(
        j,
        builtin_material(material).unwrap(),
        CompositeChannel::new(channels).unwrap(),
    )
}

fn ptb(r: f64) -> PowerLawChannel {
    PowerLawChannel::from_boundary_resistance(r, 100.0).unwrap()
}

fn net(s: &StageConfig, t: f64, t_0: f64) -> f64 {
    s.balance(t, t_0).unwrap().net()
}

#[test]
fn blocking_never_reduces_cooling() {
    for r in [2.0, 5.0, 22.0, 60.0, 220.0] {
        for t_0 in [0.08, 0.15, 0.25, 0.35, 0.5] {
            let base = stage("Al", 100.0, 1e-3, vec![ptb(r)]);
            let mut last = f64::MIN;
            for scale in [1.0, 2.0, 5.0, 20.0, 100.0] {
                let s = StageConfig {
                    phonon: base.phonon.scaled(scale).unwrap(),
                    ..base.clone()
                };
                let rc = equilibrium_temperature(&s, t_0).unwrap().relative_cooling;
                assert!(rc >= last, "r = {r}, T0 = {t_0}, ×{scale}");
                last = rc;
            }
        }
    }
}

#[test]
fn leakage_never_improves_cooling() {
    for rt_area in [20.0, 50.0, 100.0, 300.0, 1000.0] {
        for t_0 in [0.08, 0.15, 0.25, 0.35, 0.5] {
            let mut last = f64::MAX;
            for gamma in [1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
                // Weak leakage on transparent junctions balances below 1 mK.
                let s = StageConfig {
                    t_min: 1e-5,
                    ..stage("Al", rt_area, gamma, vec![ptb(22.0)])
                };
                let rc = equilibrium_temperature(&s, t_0).unwrap().relative_cooling;
                assert!(rc <= last, "R_TA = {rt_area}, T0 = {t_0}, γ = {gamma}");
                last = rc;
            }
        }
    }
}

#[test]
fn vanadium_then_aluminium_cascade_cools_monotonically() {
    let constricted = |m: &str| {
        let ch = vec![
            ptb(22.0),
            PowerLawChannel::from_constriction_resistance(198.0, 100.0).unwrap(),
        ];
        stage(m, 100.0, 1e-3, ch)
    };
    let c = CascadeConfig {
        t_bath: 1.4,
        stages: vec![constricted("V"), constricted("Al")],
    };
    let sols = solve_cascade(&c).unwrap();
    assert!(
        c.t_bath > sols[0].t_n && sols[0].t_n > sols[1].t_n,
        "{} {}",
        sols[0].t_n,
        sols[1].t_n
    );
    assert_eq!(sols[1].t_0, sols[0].t_n);
    // Independent scan oracles for each stage.
    let mut t_0 = c.t_bath;
    for (s, sol) in c.stages.iter().zip(&sols) {
        let mut root = None;
        let n = 20_000;
        for k in (1..n).rev() {
            let a = t_0 * k as f64 / n as f64;
            let b = t_0 * (k + 1) as f64 / n as f64;
            if net(s, a, t_0) <= 0.0 && net(s, b, t_0) > 0.0 {
                root = Some(0.5 * (a + b));
                break;
            }
        }
        let root = root.expect("scan found a crossing");
        assert!((root - sol.t_n).abs() <= t_0 / n as f64, "{root} vs {}", sol.t_n);
        t_0 = sol.t_n;
    }
}

#[test]
fn cascade_is_deterministic() {
    let c = CascadeConfig {
        t_bath: 0.4,
        stages: vec![
            stage("Al", 100.0, 1e-3, vec![ptb(22.0)]),
            stage("Ti", 100.0, 1e-3, vec![ptb(22.0)]),
        ],
    };
    let a = solve_cascade(&c).unwrap();
    let b = solve_cascade(&c).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.t_n.to_bits(), y.t_n.to_bits());
        assert_eq!(x.p_cool.to_bits(), y.p_cool.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_solution_is_a_stable_balance(
        rt_area in 10.0f64..2000.0,
        log_gamma in -6.0f64..-1.5,
        r in 1.0f64..500.0,
        t_0 in 0.05f64..1.1,
        load in prop_oneof![Just(0.0), 1e-16f64..1e-11],
    ) {
        let s = stage("Al", rt_area, 10f64.powf(log_gamma), vec![ptb(r)]).with_external_load(load);
        let sol = match equilibrium_temperature(&s, t_0) {
            Ok(sol) => sol,
            // Legitimate only when the island still cools at the bracket floor.
            Err(cryostage_core::Error::NoRoot(_)) if net(&s, s.t_min, t_0) > 0.0 => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(sol.t_n > 0.0);
        let scale = sol.p_cool.abs().max(sol.p_ph_influx.abs()).max(1e-18);
        prop_assert!((sol.p_cool - sol.p_ph_influx - sol.external_load).abs() <= 1e-4 * scale);
        prop_assert!(sol.residual <= 1e-4 * scale);
        prop_assert!(((t_0 - sol.t_n) / t_0 - sol.relative_cooling).abs() < 1e-15);
        let h = 1e-4 * sol.t_n;
        let slope = (net(&s, sol.t_n + h, t_0) - net(&s, sol.t_n - h, t_0)) / (2.0 * h);
        prop_assert!(slope > 0.0, "slope {slope:e} at {}", sol.t_n);
        let heating = sol.validity_warnings.iter().any(|w| matches!(w, Warning::Heating { .. }));
        prop_assert_eq!(heating, sol.t_n > t_0);
    }
}
