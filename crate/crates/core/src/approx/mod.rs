//! Composition schedules of thin-film ratios and reference flows, with
//! deviation measurement against a target flow and log-log slope fits.

mod fit;

pub use fit::{fit_slope, SlopeFit};

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::billiard::{BilliardError, DeltaMap, PhaseMap};
use crate::curve::{Curve, Profile};
use crate::hamflow::{flow_with, FlowError, FlowOptions, PhaseHamiltonian};
use crate::phase::PhasePoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("step {index} failed: {source}")]
    Step { index: usize, source: StepError },
    #[error("no grid point could be evaluated")]
    EmptyGrid,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error(transparent)]
    Reflection(#[from] BilliardError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// A Hamiltonian shared between steps and worker threads.
pub type SharedHamiltonian = Arc<dyn PhaseHamiltonian + Send>;

#[derive(Clone)]
pub enum Step {
    /// One application of `ΔT_{ε,f}`.
    ReflectDelta(Arc<DeltaMap>),
    /// Time-`time` flow of a Hamiltonian.
    Flow {
        hamiltonian: SharedHamiltonian,
        time: f64,
    },
}

impl std::fmt::Debug for Step {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Step::ReflectDelta(d) => write!(f, "ReflectDelta(eps = {})", d.eps()),
            Step::Flow { time, .. } => write!(f, "Flow(t = {time})"),
        }
    }
}

/// `steps` applied in order, the whole run repeated `repeat` times.
#[derive(Debug, Clone)]
pub struct Segment {
    pub steps: Vec<Step>,
    pub repeat: usize,
}

/// A finite word in thin-film ratios and flows acting on one phase cylinder.
#[derive(Debug, Clone)]
pub struct Schedule {
    curve: Curve,
    segments: Vec<Segment>,
    pub flow_options: FlowOptions,
}

impl Schedule {
    pub fn new(curve: Curve) -> Self {
        Self {
            curve,
            segments: Vec::new(),
            flow_options: FlowOptions::default(),
        }
    }

    pub fn then(mut self, steps: Vec<Step>, repeat: usize) -> Self {
        self.segments.push(Segment { steps, repeat });
        self
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn step_count(&self) -> usize {
        self.segments.iter().map(|s| s.steps.len() * s.repeat).sum()
    }

    /// Runs the schedule on `(s, w)`; errors carry the global step index.
    pub fn run_sw(&self, start: (f64, f64)) -> Result<(f64, f64), ApproxError> {
        let mut state = start;
        let mut index = 0;
        for seg in &self.segments {
            for _ in 0..seg.repeat {
                for step in &seg.steps {
                    state = self
                        .apply_step(step, state)
                        .map_err(|source| ApproxError::Step { index, source })?;
                    index += 1;
                }
            }
        }
        Ok(state)
    }

    fn apply_step(&self, step: &Step, (s, w): (f64, f64)) -> Result<(f64, f64), StepError> {
        match step {
            Step::ReflectDelta(map) => {
                let q = map.apply(PhasePoint::from_sw(s, w))?;
                Ok((q.s, q.w()))
            }
            Step::Flow { hamiltonian, time } => {
                let (out, _) = flow_with(&**hamiltonian, *time, (s, w), &self.flow_options)?;
                Ok(out)
            }
        }
    }

    pub fn run(&self, p: PhasePoint) -> Result<PhasePoint, ApproxError> {
        let (s, w) = self.run_sw((p.s, p.w()))?;
        Ok(PhasePoint::from_sw(self.curve.reduce_s(s), w))
    }
}

impl PhaseMap for Schedule {
    fn apply(&self, p: PhasePoint) -> Result<PhasePoint, BilliardError> {
        self.run(p).map_err(|e| BilliardError::Invalid(e.to_string()))
    }
}

/// Number of ratio steps used for time `t` at step `eps`: `⌊t/ε⌋`, with a
/// tiny allowance so that exact quotients such as `0.5/0.01` are not lost
/// to rounding.
pub fn power_steps(t: f64, eps: f64) -> usize {
    (t / eps + 1e-9).floor().max(0.0) as usize
}

/// `(ΔT_{ε,f})^{⌊t/ε⌋}`.
pub fn power_schedule(curve: &Curve, f: &Profile, t: f64, eps: f64) -> Result<Schedule, ApproxError> {
    if !(eps > 0.0) || !(t >= 0.0) {
        return Err(ApproxError::Invalid(format!("need eps > 0 and t ≥ 0, got eps = {eps}, t = {t}")));
    }
    let map = DeltaMap::new(curve.clone(), f.clone(), eps)
        .map_err(|e| ApproxError::Invalid(e.to_string()))?;
    Ok(Schedule::new(curve.clone()).then(vec![Step::ReflectDelta(Arc::new(map))], power_steps(t, eps)))
}

pub fn power_scheme(
    curve: &Curve,
    f: &Profile,
    t: f64,
    eps: f64,
    p: PhasePoint,
) -> Result<PhasePoint, ApproxError> {
    power_schedule(curve, f, t, eps)?.run(p)
}

/// `(g_v^{t/N} ∘ g_w^{t/N})^N`; `w` acts first in each block.
pub fn sum_schedule(curve: &Curve, v: SharedHamiltonian, w: SharedHamiltonian, t: f64, n: usize) -> Result<Schedule, ApproxError> {
    if n == 0 {
        return Err(ApproxError::Invalid("N must be positive".into()));
    }
    let h = t / n as f64;
    Ok(Schedule::new(curve.clone()).then(
        vec![
            Step::Flow { hamiltonian: w, time: h },
            Step::Flow { hamiltonian: v, time: h },
        ],
        n,
    ))
}

pub fn sum_scheme(
    curve: &Curve,
    v: SharedHamiltonian,
    w: SharedHamiltonian,
    t: f64,
    n: usize,
    p: PhasePoint,
) -> Result<PhasePoint, ApproxError> {
    sum_schedule(curve, v, w, t, n)?.run(p)
}

/// `(g_v^τ ∘ g_w^τ ∘ g_v^{−τ} ∘ g_w^{−τ})^{N²}` with `τ = √t / N`.
pub fn commutator_schedule(curve: &Curve, v: SharedHamiltonian, w: SharedHamiltonian, t: f64, n: usize) -> Result<Schedule, ApproxError> {
    if n == 0 || !(t >= 0.0) {
        return Err(ApproxError::Invalid(format!("need N > 0 and t ≥ 0, got N = {n}, t = {t}")));
    }
    let tau = t.sqrt() / n as f64;
    let flow = |h: &SharedHamiltonian, time: f64| Step::Flow {
        hamiltonian: h.clone(),
        time,
    };
    Ok(Schedule::new(curve.clone()).then(
        vec![flow(&w, -tau), flow(&v, -tau), flow(&w, tau), flow(&v, tau)],
        n * n,
    ))
}

pub fn commutator_scheme(
    curve: &Curve,
    v: SharedHamiltonian,
    w: SharedHamiltonian,
    t: f64,
    n: usize,
    p: PhasePoint,
) -> Result<PhasePoint, ApproxError> {
    commutator_schedule(curve, v, w, t, n)?.run(p)
}

/// Single-step schedule `g^t_H`.
pub fn flow_schedule(curve: &Curve, h: SharedHamiltonian, t: f64) -> Schedule {
    Schedule::new(curve.clone()).then(vec![Step::Flow { hamiltonian: h, time: t }], 1)
}

/// Euclidean distance in `(s, w)`, with `s` compared modulo the length of a
/// closed curve.
pub fn deviation(curve: &Curve, a: (f64, f64), b: (f64, f64)) -> f64 {
    curve.s_difference(a.0, b.0).hypot(a.1 - b.1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointDeviation {
    pub s: f64,
    pub theta: f64,
    pub deviation: Option<f64>,
    pub flags: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub points: Vec<PointDeviation>,
    pub sup: f64,
    pub mean: f64,
    pub evaluated: usize,
    pub excluded: usize,
}

/// Deviation of `schedule` from `reference` at each grid point; points where
/// either fails are listed as excluded.
pub fn run_schedule(
    schedule: &Schedule,
    reference: &Schedule,
    grid: &[PhasePoint],
) -> Result<ErrorReport, ApproxError> {
    let points: Vec<PointDeviation> = grid
        .par_iter()
        .map(|&p| {
            let start = (p.s, p.w());
            let mut row = PointDeviation {
                s: p.s,
                theta: p.theta,
                deviation: None,
                flags: String::new(),
            };
            match (schedule.run_sw(start), reference.run_sw(start)) {
                (Ok(a), Ok(b)) => row.deviation = Some(deviation(schedule.curve(), a, b)),
                (Err(e), _) => row.flags = format!("schedule: {e}"),
                (_, Err(e)) => row.flags = format!("reference: {e}"),
            }
            row
        })
        .collect();
    let vals: Vec<f64> = points.iter().filter_map(|r| r.deviation).collect();
    if vals.is_empty() {
        return Err(ApproxError::EmptyGrid);
    }
    let sup = vals.iter().copied().fold(0.0, f64::max);
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    Ok(ErrorReport {
        evaluated: vals.len(),
        excluded: points.len() - vals.len(),
        points,
        sup,
        mean,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rung {
    /// `ε` for the power scheme, `N` for the flow schemes.
    pub parameter: f64,
    pub sup_error: f64,
    pub mean_error: f64,
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rungs: Vec<Rung>,
    /// Slope of `log error` against `log ε` or `log(1/N)`.
    pub slope: Option<SlopeFit>,
    pub monotone: bool,
}

impl ConvergenceReport {
    /// `x` is the resolution variable the slope is fitted against.
    pub fn from_rungs(rungs: Vec<Rung>, x: impl Fn(f64) -> f64) -> Self {
        let monotone = rungs.windows(2).all(|w| w[1].sup_error < w[0].sup_error);
        let xs: Vec<f64> = rungs.iter().map(|r| x(r.parameter)).collect();
        let ys: Vec<f64> = rungs.iter().map(|r| r.sup_error).collect();
        let slope = fit_slope(&xs, &ys);
        Self {
            rungs,
            slope,
            monotone,
        }
    }
}
