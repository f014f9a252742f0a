use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::PhaseHamiltonian;
use crate::phase::PhasePoint;

pub const DEFAULT_FLOW_TOL: f64 = 1e-12;
/// Steps may not enter `|w| > W_LIMIT`.
pub const W_LIMIT: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowOptions {
    pub tol: f64,
    pub w_limit: f64,
    pub max_steps: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_FLOW_TOL,
            w_limit: W_LIMIT,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct FlowStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("trajectory leaves |w| < {w_limit} at time {time} (s = {s}, w = {w})")]
    Exit {
        time: f64,
        s: f64,
        w: f64,
        w_limit: f64,
    },
    #[error("step budget of {0} exhausted")]
    TooManySteps(usize),
    #[error("non-finite state at time {0}")]
    NonFinite(f64),
}

// Dormand–Prince 5(4)
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Time-`time` flow of `h` from `p` with default options.
pub fn flow<H: PhaseHamiltonian + ?Sized>(
    h: &H,
    time: f64,
    p: PhasePoint,
) -> Result<PhasePoint, FlowError> {
    let ((s, w), _) = flow_with(h, time, (p.s, p.w()), &FlowOptions::default())?;
    Ok(PhasePoint::from_sw(s, w))
}

/// Adaptive Dormand–Prince integration of `(ṡ, ẇ) = (−H_w, H_s)` in the
/// `(s, w)` chart. Negative `time` integrates backwards.
pub fn flow_with<H: PhaseHamiltonian + ?Sized>(
    h: &H,
    time: f64,
    start: (f64, f64),
    opts: &FlowOptions,
) -> Result<((f64, f64), FlowStats), FlowError> {
    let mut stats = FlowStats::default();
    let (mut s, mut w) = start;
    if !(s.is_finite() && w.is_finite()) {
        return Err(FlowError::NonFinite(0.0));
    }
    if w.abs() > opts.w_limit {
        return Err(FlowError::Exit {
            time: 0.0,
            s,
            w,
            w_limit: opts.w_limit,
        });
    }
    if time == 0.0 {
        return Ok(((s, w), stats));
    }
    let dir = time.signum();
    let total = time.abs();
    let mut t = 0.0;
    let mut step = total.min(0.05);
    let min_step = 1e-14 * total.max(1.0);
    let field = |s: f64, w: f64| -> Option<(f64, f64)> {
        if !(w.abs() <= opts.w_limit) {
            return None;
        }
        let (a, b) = h.field(s, w);
        (a.is_finite() && b.is_finite()).then_some((a * dir, b * dir))
    };
    let mut k0 = field(s, w).ok_or(FlowError::NonFinite(0.0))?;
    while t < total {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(FlowError::TooManySteps(opts.max_steps));
        }
        let last = t + step >= total;
        let hstep = if last { total - t } else { step };
        match try_step(&field, s, w, k0, hstep, opts.tol) {
            Some((ns, nw, k_end, err)) if err <= 1.0 => {
                s = ns;
                w = nw;
                t = if last { total } else { t + hstep };
                k0 = k_end;
                stats.accepted += 1;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                step = hstep * grow;
            }
            Some((_, _, _, err)) => {
                stats.rejected += 1;
                step = hstep * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
            None => {
                stats.rejected += 1;
                step = hstep * 0.25;
            }
        }
        if step < min_step && t < total {
            return Err(FlowError::Exit {
                time: dir * t,
                s,
                w,
                w_limit: opts.w_limit,
            });
        }
    }
    Ok(((s, w), stats))
}

type Field<'a> = dyn Fn(f64, f64) -> Option<(f64, f64)> + 'a;

// One trial step; None when a stage leaves the valid strip.
fn try_step(
    field: &Field<'_>,
    s: f64,
    w: f64,
    k0: (f64, f64),
    h: f64,
    tol: f64,
) -> Option<(f64, f64, (f64, f64), f64)> {
    let mut k = [(0.0, 0.0); 7];
    k[0] = k0;
    for i in 0..6 {
        let mut ds = 0.0;
        let mut dw = 0.0;
        for j in 0..=i {
            ds += A[i][j] * k[j].0;
            dw += A[i][j] * k[j].1;
        }
        k[i + 1] = field(s + h * ds, w + h * dw)?;
    }
    // the last stage is evaluated at the 5th-order solution
    let mut ds = 0.0;
    let mut dw = 0.0;
    for j in 0..6 {
        ds += A[5][j] * k[j].0;
        dw += A[5][j] * k[j].1;
    }
    let (ns, nw) = (s + h * ds, w + h * dw);
    let mut es = 0.0;
    let mut ew = 0.0;
    for j in 0..7 {
        es += E[j] * k[j].0;
        ew += E[j] * k[j].1;
    }
    let sc_s = tol * (1.0 + s.abs().max(ns.abs()));
    let sc_w = tol * (1.0 + w.abs().max(nw.abs()));
    let err = ((h * es / sc_s).powi(2) + (h * ew / sc_w).powi(2)).sqrt() / 2f64.sqrt();
    Some((ns, nw, k[6], err))
}
