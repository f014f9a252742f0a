//! Reflection of oriented lines in a curve, the thin-film ratio
//! `ΔT_{ε,f} = T_{γ_ε}⁻¹ ∘ T_γ`, its first variation in `ε`, and
//! symplecticity diagnostics.
//!
//! Internally a reflected line is oriented into the side opposite the normal
//! (into the domain for closed curves); every map exposed on phase points
//! returns to the outgoing chart of [`crate::phase`]. For germs the reflected
//! line has no outgoing crossing nearby, so [`ReflectionMap`] reverses it,
//! which makes the germ reflection orientation-reversing on the chart.

mod perline;
mod symplectic;

pub use perline::{perline_derivative, PerlineEstimate, DEFAULT_EPS_SCHEDULE};
pub use symplectic::{symplectic_defect, DefectReport, DefectRow, FD_STEP};

use thiserror::Error;

use crate::curve::{Boundary, Curve, DeformedCurve, GeometryError, Profile};
use crate::phase::{line_from_phase, phase_from_line, EuclideanLine, PhasePoint, DEFAULT_MARGIN};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BilliardError {
    #[error("base curve: {0}")]
    Base(GeometryError),
    #[error("deformed curve: {0}")]
    Deformed(GeometryError),
    #[error("finite-difference schedule too coarse: {0}")]
    CoarseSchedule(String),
    #[error("invalid map input: {0}")]
    Invalid(String),
}

/// A map of the phase cylinder to itself, possibly undefined at some points.
pub trait PhaseMap: Sync {
    fn apply(&self, p: PhasePoint) -> Result<PhasePoint, BilliardError>;
}

/// The identity map, used as a sanity row in defect tables.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl PhaseMap for Identity {
    fn apply(&self, p: PhasePoint) -> Result<PhasePoint, BilliardError> {
        Ok(p)
    }
}

impl<F> PhaseMap for F
where
    F: Fn(PhasePoint) -> Result<PhasePoint, BilliardError> + Sync,
{
    fn apply(&self, p: PhasePoint) -> Result<PhasePoint, BilliardError> {
        self(p)
    }
}

/// Mirror `line` in the tangent at its outgoing crossing with `curve`; the
/// result passes through the crossing point, directed to the non-normal side.
pub fn reflect<B: Boundary + ?Sized>(
    curve: &B,
    line: &EuclideanLine,
    margin: f64,
) -> Result<EuclideanLine, GeometryError> {
    let c = curve.outgoing_crossing(line.point, line.direction, margin)?;
    let n = curve.normal(c.param);
    let u = line.direction;
    Ok(EuclideanLine {
        point: c.point,
        direction: u - (2.0 * u.dot(n)) * n,
    })
}

/// Inverse of [`reflect`] on lines directed to the non-normal side.
pub fn reflect_inverse<B: Boundary + ?Sized>(
    curve: &B,
    line: &EuclideanLine,
    margin: f64,
) -> Result<EuclideanLine, GeometryError> {
    Ok(reflect(curve, &line.reversed(), margin)?.reversed())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// `T_γ` (or its inverse) acting on phase points.
#[derive(Debug, Clone)]
pub struct ReflectionMap {
    pub curve: Curve,
    pub direction: Direction,
    pub margin: f64,
}

impl ReflectionMap {
    pub fn forward(curve: Curve) -> Self {
        Self {
            curve,
            direction: Direction::Forward,
            margin: DEFAULT_MARGIN,
        }
    }

    pub fn inverse(curve: Curve) -> Self {
        Self {
            curve,
            direction: Direction::Inverse,
            margin: DEFAULT_MARGIN,
        }
    }
}

impl PhaseMap for ReflectionMap {
    fn apply(&self, p: PhasePoint) -> Result<PhasePoint, BilliardError> {
        let c = &self.curve;
        let line = line_from_phase(c, p).map_err(BilliardError::Base)?;
        let image = match (self.direction, c.is_closed()) {
            (Direction::Forward, true) => reflect(c, &line, self.margin),
            (Direction::Inverse, true) => reflect_inverse(c, &line, self.margin),
            // the germ chart normalization R∘T is an involution
            (_, false) => reflect(c, &line, self.margin).map(|l| l.reversed()),
        }
        .map_err(BilliardError::Base)?;
        phase_from_line(c, &image, self.margin).map_err(BilliardError::Base)
    }
}

/// `ΔT_{ε,f} = T_{γ_ε}⁻¹ ∘ T_γ`: reflect in the base curve, then undo a
/// reflection in the deformed curve.
#[derive(Debug, Clone)]
pub struct DeltaMap {
    base: Curve,
    deformed: DeformedCurve,
    pub margin: f64,
}

impl DeltaMap {
    /// Negative `eps` is accepted and realized as `ΔT_{|ε|, −f}`.
    pub fn new(base: Curve, profile: Profile, eps: f64) -> Result<Self, BilliardError> {
        let deformed = if eps >= 0.0 {
            base.deform(profile, eps)
        } else {
            base.deform(profile.negated(), -eps)
        }
        .map_err(BilliardError::Deformed)?;
        Ok(Self {
            base,
            deformed,
            margin: DEFAULT_MARGIN,
        })
    }

    pub fn eps(&self) -> f64 {
        self.deformed.eps()
    }

    pub fn base(&self) -> &Curve {
        &self.base
    }
}

impl PhaseMap for DeltaMap {
    fn apply(&self, p: PhasePoint) -> Result<PhasePoint, BilliardError> {
        let line = line_from_phase(&self.base, p).map_err(BilliardError::Base)?;
        let inward = reflect(&self.base, &line, self.margin).map_err(BilliardError::Base)?;
        let back =
            reflect_inverse(&self.deformed, &inward, self.margin).map_err(BilliardError::Deformed)?;
        phase_from_line(&self.base, &back, self.margin).map_err(BilliardError::Base)
    }
}
