use serde::Serialize;

use super::{BilliardError, DeltaMap, PhaseMap};
use crate::curve::{Curve, Profile};
use crate::phase::PhasePoint;

/// Central differences at these `ε`, with one Richardson level.
pub const DEFAULT_EPS_SCHEDULE: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// `dΔT_ε/dε` at `ε = 0` in the `(s, w)` chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerlineEstimate {
    pub ds: f64,
    pub dw: f64,
    /// Spread of the last two extrapolated values.
    pub error: f64,
}

fn central_difference(
    curve: &Curve,
    profile: &Profile,
    p: PhasePoint,
    eps: f64,
) -> Result<(f64, f64), BilliardError> {
    let plus = DeltaMap::new(curve.clone(), profile.clone(), eps)?.apply(p)?;
    let minus = DeltaMap::new(curve.clone(), profile.clone(), -eps)?.apply(p)?;
    let ds = curve.s_difference(plus.s, minus.s);
    let dw = plus.w() - minus.w();
    Ok((ds / (2.0 * eps), dw / (2.0 * eps)))
}

/// Richardson-extrapolated derivative of `ε ↦ ΔT_{ε,f}(p)` at zero.
///
/// The schedule must be strictly decreasing and positive. Successive
/// difference quotients must approach each other; a growing gap signals that
/// the step ladder is dominated by truncation or roundoff.
pub fn perline_derivative(
    curve: &Curve,
    profile: &Profile,
    p: PhasePoint,
    schedule: &[f64],
) -> Result<PerlineEstimate, BilliardError> {
    if schedule.len() < 2 {
        return Err(BilliardError::CoarseSchedule(
            "need at least two step sizes".into(),
        ));
    }
    if schedule.iter().any(|&h| !(h > 0.0)) || schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(BilliardError::CoarseSchedule(
            "steps must be positive and strictly decreasing".into(),
        ));
    }
    let quotients = schedule
        .iter()
        .map(|&h| central_difference(curve, profile, p, h))
        .collect::<Result<Vec<_>, _>>()?;

    let gap = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).hypot(a.1 - b.1);
    let gaps: Vec<f64> = quotients.windows(2).map(|w| gap(w[0], w[1])).collect();
    let floor = 1e-9 * (1.0 + quotients[0].0.hypot(quotients[0].1));
    if gaps.windows(2).any(|g| g[1] > g[0] && g[1] > floor) {
        return Err(BilliardError::CoarseSchedule(format!(
            "difference quotients diverge: gaps {gaps:?}"
        )));
    }

    // error ∝ h², so combine neighbours with weight r² = (h_i / h_{i+1})²
    let extrapolated: Vec<(f64, f64)> = quotients
        .windows(2)
        .zip(schedule.windows(2))
        .map(|(q, h)| {
            let r2 = (h[0] / h[1]).powi(2);
            (
                (r2 * q[1].0 - q[0].0) / (r2 - 1.0),
                (r2 * q[1].1 - q[0].1) / (r2 - 1.0),
            )
        })
        .collect();
    let best = *extrapolated.last().unwrap();
    let error = if extrapolated.len() >= 2 {
        gap(best, extrapolated[extrapolated.len() - 2])
    } else {
        gaps[0] / 3.0
    };
    Ok(PerlineEstimate {
        ds: best.0,
        dw: best.1,
        error,
    })
}
