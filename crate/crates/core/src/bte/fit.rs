use super::ConductancePoint;
use crate::error::{Error, Result};
use crate::phonon::{ChannelKind, PowerLawChannel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub channel: PowerLawChannel,
    /// Root-mean-square residual of ln G.
    pub rms_log_residual: f64,
}

/// Least-squares fit of ln G = (n − 1)·ln T − ln α.
pub fn fit_power_law(curve: &[ConductancePoint]) -> Result<PowerLawFit> {
    if curve.len() < 5 {
        return Err(Error::Fit(format!("need at least 5 points, got {}", curve.len())));
    }
    if curve.iter().any(|p| !(p.t > 0.0) || !(p.conductance > 0.0)) {
        return Err(Error::Fit("temperatures and conductances must be positive".into()));
    }
    let t_min = curve.iter().map(|p| p.t).fold(f64::INFINITY, f64::min);
    let t_max = curve.iter().map(|p| p.t).fold(0.0, f64::max);
    if t_max < 3.0 * t_min {
        return Err(Error::Fit(format!(
            "temperatures must span a factor of 3, got [{t_min}, {t_max}]"
        )));
    }
    let n = curve.len() as f64;
    let xs: Vec<f64> = curve.iter().map(|p| p.t.ln()).collect();
    let ys: Vec<f64> = curve.iter().map(|p| p.conductance.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    // Round-off can push an exact integer exponent just outside the admissible range.
    let exponent = slope + 1.0;
    let exponent = if (exponent - exponent.round()).abs() < 1e-9 {
        exponent.round()
    } else {
        exponent
    };
    let channel = PowerLawChannel::new((-intercept).exp(), exponent, ChannelKind::Fitted)
        .map_err(|e| Error::Fit(format!("fitted channel is not admissible: {e}")))?;
    Ok(PowerLawFit {
        channel,
        rms_log_residual: rms,
    })
}
