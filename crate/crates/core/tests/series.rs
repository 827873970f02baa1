use std::f64::consts::PI;

use cryostage_core::phonon::{ChannelKind, CompositeChannel, PowerLawChannel};
use proptest::prelude::*;

#[test]
fn equal_exponent_series_is_alpha_additive() {
    for n in [2.0, 3.0, 4.0, 5.0] {
        let a = PowerLawChannel::new(3e8, n, ChannelKind::Ptb).unwrap();
        let b = PowerLawChannel::new(1.1e9, n, ChannelKind::Lead).unwrap();
        let c = PowerLawChannel::new(4e7, n, ChannelKind::Constriction).unwrap();
        let cc = CompositeChannel::new(vec![a, b, c]).unwrap();
        let alpha = a.alpha + b.alpha + c.alpha;
        for i in 0..10 {
            for k in 0..10 {
                let t_n = 0.03 + 0.11 * i as f64;
                let t_0 = 0.055 + 0.1 * k as f64;
                let closed = (t_n.powf(n) - t_0.powf(n)) / (alpha * n);
                let q = cc.heat_flow(t_n, t_0).unwrap();
                assert!(
                    ((q - closed) / closed).abs() < 1e-9,
                    "n = {n}, ({t_n}, {t_0}): {q:e} vs {closed:e}"
                );
            }
        }
    }
}

#[test]
fn quantum_conductance_identity() {
    let kb = 1.380649e-23_f64;
    let h = 6.62607015e-34_f64;
    for (count, tau) in [(1.0, 1.0), (10.0, 0.5), (1e3, 0.01)] {
        let ch = PowerLawChannel::from_quantum_limit(count, tau).unwrap();
        for t in [0.01, 0.1, 1.0] {
            let g = count * tau * PI * PI * kb * kb * t / (3.0 * h);
            assert!((ch.conductance(t) / g - 1.0).abs() < 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn series_bounded_by_members(
        a1 in 1e6f64..1e11, n1 in 2.0f64..5.0,
        a2 in 1e6f64..1e11, n2 in 2.0f64..5.0,
        t1 in 0.02f64..1.5, t2 in 0.02f64..1.5,
    ) {
        let c1 = PowerLawChannel::new(a1, n1, ChannelKind::Fitted).unwrap();
        let c2 = PowerLawChannel::new(a2, n2, ChannelKind::Fitted).unwrap();
        let cc = CompositeChannel::new(vec![c1, c2]).unwrap();
        let s = cc.solve(t1, t2).unwrap();
        let bound = c1.heat_flow(t1, t2).abs().min(c2.heat_flow(t1, t2).abs());
        prop_assert!(s.flow.abs() <= bound * (1.0 + 1e-12));
        prop_assert!(s.flow * (t1 - t2) >= 0.0);
        // The interface carries the same flow through both sides.
        let ti = s.interfaces[0];
        let q1 = c1.heat_flow(t1, ti);
        let q2 = c2.heat_flow(ti, t2);
        prop_assert!((q1 - q2).abs() <= 1e-9 * q1.abs().max(1e-300) + 1e-30);
    }

    // Mixed exponents rectify, so only the mirrored chain carries the opposite flow.
    #[test]
    fn mirrored_series_negates(a in 1e6f64..1e11, n in 2.0f64..5.0, t1 in 0.02f64..1.5, t2 in 0.02f64..1.5) {
        let q = PowerLawChannel::from_quantum_limit(10.0, 1.0).unwrap();
        let p = PowerLawChannel::new(a, n, ChannelKind::Ptb).unwrap();
        let f = CompositeChannel::new(vec![p, q]).unwrap().heat_flow(t1, t2).unwrap();
        let b = CompositeChannel::new(vec![q, p]).unwrap().heat_flow(t2, t1).unwrap();
        prop_assert!((f + b).abs() <= 1e-12 * f.abs().max(1e-300));
    }

    #[test]
    fn equal_exponent_series_antisymmetric(a in 1e6f64..1e11, b in 1e6f64..1e11, n in 2.0f64..5.0, t1 in 0.02f64..1.5, t2 in 0.02f64..1.5) {
        let cc = CompositeChannel::new(vec![
            PowerLawChannel::new(a, n, ChannelKind::Ptb).unwrap(),
            PowerLawChannel::new(b, n, ChannelKind::Lead).unwrap(),
        ])
        .unwrap();
        let f = cc.heat_flow(t1, t2).unwrap();
        let r = cc.heat_flow(t2, t1).unwrap();
        prop_assert!((f + r).abs() <= 1e-12 * f.abs().max(1e-300));
    }
}
