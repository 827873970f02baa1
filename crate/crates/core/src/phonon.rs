//! Power-law phonon heat-leak channels and their series composition.
//!
//! A channel carries `P = (T_from^n − T_to^n)/(α·n)` and has thermal resistance
//! `R(T) = α·T^(1−n)`. Positive flow runs from the `from` end to the `to` end.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constants::{H, K_B, UM2_TO_CM2};
use crate::error::{domain, Error, Result};

/// Where a channel's parameters came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Ptb,
    Lead,
    Constriction,
    Quantum,
    Fitted,
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::Ptb => "ptb",
            ChannelKind::Lead => "lead",
            ChannelKind::Constriction => "constriction",
            ChannelKind::Quantum => "quantum",
            ChannelKind::Fitted => "fitted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawChannel {
    /// Thermal-resistance prefactor, K^n/W.
    pub alpha: f64,
    /// Exponent, 2 ≤ n ≤ 5.
    pub n: f64,
    pub kind: ChannelKind,
}

impl PowerLawChannel {
    pub fn new(alpha: f64, n: f64, kind: ChannelKind) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain(format!("channel prefactor must be positive, got {alpha}")));
        }
        if !(2.0..=5.0).contains(&n) {
            return Err(domain(format!("channel exponent must lie in [2, 5], got {n}")));
        }
        Ok(Self { alpha, n, kind })
    }

    /// n = 4 channel from an area-specific boundary resistance.
    ///
    /// `r` in K⁴·cm²/W, `area` in µm²; the heat flow is `A/(4r)·(T_N⁴ − T_0⁴)`.
    pub fn from_boundary_resistance(r: f64, area: f64) -> Result<Self> {
        Self::area_specific(r, area, ChannelKind::Ptb)
    }

    /// Same conversion as [`Self::from_boundary_resistance`], labelled as a lead.
    pub fn from_lead_resistance(r: f64, area: f64) -> Result<Self> {
        Self::area_specific(r, area, ChannelKind::Lead)
    }

    /// Same conversion as [`Self::from_boundary_resistance`], labelled as a constriction.
    pub fn from_constriction_resistance(r: f64, area: f64) -> Result<Self> {
        Self::area_specific(r, area, ChannelKind::Constriction)
    }

    fn area_specific(r: f64, area: f64, kind: ChannelKind) -> Result<Self> {
        if !(r > 0.0) || !(area > 0.0) {
            return Err(domain(format!(
                "boundary resistance and area must be positive, got r = {r}, A = {area}"
            )));
        }
        Self::new(r / (area * UM2_TO_CM2), 4.0, kind)
    }

    /// Ballistic channel of `count` conductance quanta with the given transmission.
    pub fn from_quantum_limit(count: f64, transmission: f64) -> Result<Self> {
        if !(count >= 1.0) {
            return Err(domain(format!("channel count must be >= 1, got {count}")));
        }
        if !(transmission > 0.0 && transmission <= 1.0) {
            return Err(domain(format!("transmission must lie in (0, 1], got {transmission}")));
        }
        Self::new(
            3.0 * H / (count * transmission * PI * PI * K_B * K_B),
            2.0,
            ChannelKind::Quantum,
        )
    }

    /// `count` identical copies of this channel in parallel.
    pub fn parallel(&self, count: f64) -> Result<Self> {
        if !(count >= 1.0) {
            return Err(domain(format!("parallel count must be >= 1, got {count}")));
        }
        Self::new(self.alpha / count, self.n, self.kind)
    }

    /// Heat flow from the `t_from` end to the `t_to` end, W.
    pub fn heat_flow(&self, t_from: f64, t_to: f64) -> f64 {
        (t_from.powf(self.n) - t_to.powf(self.n)) / (self.alpha * self.n)
    }

    /// Thermal resistance α·T^(1−n), K/W.
    pub fn thermal_resistance(&self, t: f64) -> f64 {
        self.alpha * t.powf(1.0 - self.n)
    }

    /// Differential conductance 1/R(T), W/K.
    pub fn conductance(&self, t: f64) -> f64 {
        t.powf(self.n - 1.0) / self.alpha
    }

    // Temperature at the `to` end that carries `q` out of an input at `t_in`;
    // None when the flow exceeds what the channel can carry down to 0 K.
    fn downstream(&self, t_in: f64, q: f64) -> Option<f64> {
        let x = t_in.powf(self.n) - q * self.alpha * self.n;
        (x >= 0.0).then(|| x.powf(1.0 / self.n))
    }
}

/// Free function form of [`PowerLawChannel::heat_flow`].
pub fn heat_flow(ch: &PowerLawChannel, t_n: f64, t_0: f64) -> f64 {
    ch.heat_flow(t_n, t_0)
}

/// Free function form of [`PowerLawChannel::thermal_resistance`].
pub fn thermal_resistance(ch: &PowerLawChannel, t: f64) -> f64 {
    ch.thermal_resistance(t)
}

/// A series chain of channels, listed from the `from` end to the `to` end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeChannel {
    channels: Vec<PowerLawChannel>,
}

/// Result of a series solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFlow {
    /// Heat flow from the `from` end to the `to` end, W.
    pub flow: f64,
    /// Temperatures at the junctions between consecutive channels (from side first).
    pub interfaces: Vec<f64>,
}

impl CompositeChannel {
    pub fn new(channels: Vec<PowerLawChannel>) -> Result<Self> {
        if channels.is_empty() {
            return Err(domain("composite channel needs at least one member"));
        }
        Ok(Self { channels })
    }

    pub fn single(ch: PowerLawChannel) -> Self {
        Self { channels: vec![ch] }
    }

    pub fn channels(&self) -> &[PowerLawChannel] {
        &self.channels
    }

    /// Multiplies each member's α by `factor` (stronger blocking for factor > 1).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let channels = self
            .channels
            .iter()
            .map(|c| PowerLawChannel::new(c.alpha * factor, c.n, c.kind))
            .collect::<Result<Vec<_>>>()?;
        Self::new(channels)
    }

    /// Heat flow through the chain with its ends held at `t_from` and `t_to`.
    pub fn heat_flow(&self, t_from: f64, t_to: f64) -> Result<f64> {
        Ok(self.solve(t_from, t_to)?.flow)
    }

    /// Finds the flow that is equal through every member, by bisection on the
    /// flow (each trial fixes all interface temperatures by marching the chain).
    pub fn solve(&self, t_from: f64, t_to: f64) -> Result<SeriesFlow> {
        if !(t_from > 0.0) || !(t_to > 0.0) {
            return Err(domain(format!(
                "series flow needs positive temperatures, got {t_from}, {t_to}"
            )));
        }
        if let [only] = self.channels.as_slice() {
            return Ok(SeriesFlow {
                flow: only.heat_flow(t_from, t_to),
                interfaces: Vec::new(),
            });
        }
        if t_from == t_to {
            return Ok(SeriesFlow {
                flow: 0.0,
                interfaces: vec![t_from; self.channels.len() - 1],
            });
        }
        // March from the hot end; reversed direction walks the chain backwards.
        let forward = t_from > t_to;
        let (t_hot, t_cold) = if forward { (t_from, t_to) } else { (t_to, t_from) };
        let ordered: Vec<&PowerLawChannel> = if forward {
            self.channels.iter().collect()
        } else {
            self.channels.iter().rev().collect()
        };

        let end_temperature = |q: f64| -> Option<f64> { ordered.iter().try_fold(t_hot, |t, ch| ch.downstream(t, q)) };

        let mut lo = 0.0;
        let mut hi = ordered
            .iter()
            .map(|c| c.heat_flow(t_hot, t_cold))
            .fold(f64::INFINITY, f64::min);
        // At q = hi the end temperature is at or below t_cold.
        match end_temperature(hi) {
            Some(t) if t > t_cold * (1.0 + 1e-12) => {
                return Err(Error::NoRoot(format!(
                    "series bracket failed: end temperature {t} above {t_cold} at the upper flow bound"
                )))
            }
            _ => {}
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match end_temperature(mid) {
                Some(t) if t > t_cold => lo = mid,
                _ => hi = mid,
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        let flow = 0.5 * (lo + hi);
        let mut interfaces = Vec::with_capacity(ordered.len() - 1);
        let mut t = t_hot;
        for ch in &ordered[..ordered.len() - 1] {
            t = ch.downstream(t, flow).unwrap_or(0.0);
            interfaces.push(t);
        }
        if !forward {
            interfaces.reverse();
        }
        Ok(SeriesFlow {
            flow: if forward { flow } else { -flow },
            interfaces,
        })
    }
}

/// Free function form of [`CompositeChannel::heat_flow`].
pub fn series_heat_flow(cc: &CompositeChannel, t_n: f64, t_0: f64) -> Result<f64> {
    cc.heat_flow(t_n, t_0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn boundary_resistance_conversion() {
        let ch = PowerLawChannel::from_boundary_resistance(22.0, 100.0).unwrap();
        assert!(rel(ch.alpha, 2.2e7) < 1e-12);
        assert_eq!(ch.n, 4.0);
        let total = PowerLawChannel::from_boundary_resistance(220.0, 100.0).unwrap();
        assert!(rel(total.alpha, 2.2e8) < 1e-12);
        let huge = PowerLawChannel::from_boundary_resistance(22.0, 1e18).unwrap();
        assert!(huge.alpha < 1e-6);
        // P = A/(4r)·ΔT⁴ expressed in SI.
        let p = ch.heat_flow(0.3, 0.1);
        assert!(rel(p, 100e-8 / (4.0 * 22.0) * (0.3f64.powi(4) - 0.1f64.powi(4))) < 1e-12);
    }

    #[test]
    fn quantum_limit_constants() {
        let one = PowerLawChannel::from_quantum_limit(1.0, 1.0).unwrap();
        assert!(rel(one.alpha, 1.0566e12) < 1e-4);
        assert!(rel(one.conductance(1.0), 9.464e-13) < 1e-3);
        let ten = PowerLawChannel::from_quantum_limit(10.0, 1.0).unwrap();
        assert!(rel(ten.alpha, 1.0566e11) < 1e-4);
        let half = PowerLawChannel::from_quantum_limit(10.0, 0.5).unwrap();
        assert!(rel(half.conductance(0.2), 0.5 * ten.conductance(0.2)) < 1e-14);
        assert!(PowerLawChannel::from_quantum_limit(0.5, 1.0).is_err());
        assert!(PowerLawChannel::from_quantum_limit(1.0, 0.0).is_err());
        assert!(PowerLawChannel::from_quantum_limit(1.0, 1.5).is_err());
    }

    #[test]
    fn heat_flow_examples() {
        let ptb = PowerLawChannel::new(2.2e7, 4.0, ChannelKind::Ptb).unwrap();
        assert!(rel(ptb.heat_flow(0.3, 0.1), 9.0909e-11) < 1e-4);
        assert_eq!(ptb.heat_flow(0.2, 0.2), 0.0);
        let q = PowerLawChannel::from_quantum_limit(10.0, 1.0).unwrap();
        let expected = 10.0 * PI * PI * K_B * K_B / (6.0 * H) * (0.09 - 0.01);
        assert!(rel(q.heat_flow(0.3, 0.1), expected) < 1e-12);
        assert!(rel(q.heat_flow(0.3, 0.1), 3.79e-13) < 5e-3);
    }

    #[test]
    fn resistance_examples() {
        let ptb = PowerLawChannel::new(2.2e7, 4.0, ChannelKind::Ptb).unwrap();
        assert!(rel(ptb.thermal_resistance(0.1), 2.2e10) < 1e-12);
        let q = PowerLawChannel::from_quantum_limit(1.0, 1.0).unwrap();
        assert!(rel(q.thermal_resistance(1.0), 1.0566e12) < 1e-4);
        for t in [0.05, 0.3, 2.0] {
            assert!(rel(q.thermal_resistance(t) * t, q.alpha) < 1e-14);
        }
    }

    #[test]
    fn resistance_matches_flow_derivative() {
        let ch = PowerLawChannel::new(3.1e7, 3.0, ChannelKind::Fitted).unwrap();
        let t = 0.25;
        let h = 1e-6;
        let g = (ch.heat_flow(t + h, t) - ch.heat_flow(t - h, t)) / (2.0 * h);
        assert!(rel(g, 1.0 / ch.thermal_resistance(t)) < 1e-6);
    }

    #[test]
    fn invalid_channels() {
        assert!(PowerLawChannel::new(0.0, 4.0, ChannelKind::Fitted).is_err());
        assert!(PowerLawChannel::new(1.0, 1.5, ChannelKind::Fitted).is_err());
        assert!(PowerLawChannel::new(1.0, 6.0, ChannelKind::Fitted).is_err());
        assert!(CompositeChannel::new(vec![]).is_err());
    }

    #[test]
    fn identical_pair_halves_flow() {
        let ptb = PowerLawChannel::new(2.2e7, 4.0, ChannelKind::Ptb).unwrap();
        let cc = CompositeChannel::new(vec![ptb, ptb]).unwrap();
        let q = cc.heat_flow(0.3, 0.1).unwrap();
        assert!(rel(q, 0.5 * ptb.heat_flow(0.3, 0.1)) < 1e-12);
        assert!(rel(q, 4.545e-11) < 1e-3);
    }

    #[test]
    fn mixed_series_is_quantum_limited() {
        let ptb = PowerLawChannel::new(2.2e7, 4.0, ChannelKind::Ptb).unwrap();
        let q10 = PowerLawChannel::from_quantum_limit(10.0, 1.0).unwrap();
        let cc = CompositeChannel::new(vec![ptb, q10]).unwrap();
        let s = cc.solve(0.3, 0.1).unwrap();
        assert!(rel(s.flow, 3.78e-13) < 1e-2);
        assert!((s.interfaces[0] - 0.2997).abs() < 1e-4);
        // Both members carry the same flow.
        assert!(rel(ptb.heat_flow(0.3, s.interfaces[0]), s.flow) < 1e-9);
        assert!(rel(q10.heat_flow(s.interfaces[0], 0.1), s.flow) < 1e-9);
    }

    #[test]
    fn single_member_is_plain_flow() {
        let q10 = PowerLawChannel::from_quantum_limit(10.0, 1.0).unwrap();
        let cc = CompositeChannel::single(q10);
        assert_eq!(cc.heat_flow(0.3, 0.1).unwrap(), q10.heat_flow(0.3, 0.1));
        assert_eq!(series_heat_flow(&cc, 0.1, 0.3).unwrap(), q10.heat_flow(0.1, 0.3));
    }

    #[test]
    fn reversed_series_negates() {
        let ptb = PowerLawChannel::new(2.2e7, 4.0, ChannelKind::Ptb).unwrap();
        let c = PowerLawChannel::new(5e7, 3.0, ChannelKind::Constriction).unwrap();
        let cc = CompositeChannel::new(vec![ptb, c]).unwrap();
        let fwd = cc.solve(0.3, 0.1).unwrap();
        // Reversing both the endpoints and the chain order is the mirror image.
        let mirror = CompositeChannel::new(vec![c, ptb]).unwrap().solve(0.1, 0.3).unwrap();
        assert!(rel(-mirror.flow, fwd.flow) < 1e-12);
        assert!((mirror.interfaces[0] - fwd.interfaces[0]).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn heat_flow_antisymmetric(a in 1e5f64..1e12, n in 2.0f64..5.0, t1 in 0.01f64..2.0, t2 in 0.01f64..2.0) {
            let ch = PowerLawChannel::new(a, n, ChannelKind::Fitted).unwrap();
            prop_assert_eq!(ch.heat_flow(t1, t2), -ch.heat_flow(t2, t1));
        }

        #[test]
        fn heat_flow_monotone(a in 1e5f64..1e12, n in 2.0f64..5.0, t in 0.01f64..2.0, d in 1e-4f64..0.5) {
            let ch = PowerLawChannel::new(a, n, ChannelKind::Fitted).unwrap();
            prop_assert!(ch.heat_flow(t + d, 0.1) > ch.heat_flow(t, 0.1));
            prop_assert!(ch.heat_flow(0.1, t + d) < ch.heat_flow(0.1, t));
        }

        #[test]
        fn series_below_every_member(
            a1 in 1e6f64..1e11, n1 in 2.0f64..5.0, a2 in 1e6f64..1e11, n2 in 2.0f64..5.0,
            t1 in 0.02f64..1.5, t2 in 0.02f64..1.5,
        ) {
            let c1 = PowerLawChannel::new(a1, n1, ChannelKind::Fitted).unwrap();
            let c2 = PowerLawChannel::new(a2, n2, ChannelKind::Fitted).unwrap();
            let q = CompositeChannel::new(vec![c1, c2]).unwrap().heat_flow(t1, t2).unwrap();
            let bound = c1.heat_flow(t1, t2).abs().min(c2.heat_flow(t1, t2).abs());
            prop_assert!(q.abs() <= bound * (1.0 + 1e-12));
        }
    }
}
