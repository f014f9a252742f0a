//! Planar curves: closed convex curves given by a support function, local
//! graph germs through the origin, and their normal deformations.
//!
//! Every curve is parametrized by its natural parameter (support angle `φ`
//! for closed curves, abscissa `x` for germs) and carries a unit normal `N`.
//! For closed curves `N` is the exterior normal and the parametrization is
//! counterclockwise; for germs `N` is the normal with positive second
//! coordinate. The "outgoing" side of a curve is the side `N` points to.

mod deformed;
mod germ;
mod intersect;
mod series;
mod support;

pub use deformed::DeformedCurve;
pub use germ::GermCurve;
pub use intersect::{generic_outgoing_crossing, Crossing};
pub use series::{Polynomial, Profile, TrigSeries};
pub use support::{convexity_margin, SupportCurve};

use crate::vec2::Vec2;
use thiserror::Error;

/// Number of points in the uniform grid used for convexity and orthogonality
/// checks.
pub const CHECK_GRID: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("line does not meet the curve")]
    NoIntersection,
    #[error("line is tangent to the curve (|cos theta| = {cos_theta:.3e} beyond margin)")]
    Tangency { cos_theta: f64 },
    #[error("parameter {param} lies outside the germ domain (-{half_width}, {half_width})")]
    OutsideDomain { param: f64, half_width: f64 },
    #[error("curve is not strictly convex at parameter {param} (margin {margin:.6})")]
    NotConvex { param: f64, margin: f64 },
    #[error("invalid curve: {0}")]
    Invalid(String),
}

/// Parameter domain of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// Closed curve, parameter taken modulo `period`.
    Periodic(f64),
    /// Open arc `(lo, hi)`.
    Interval(f64, f64),
}

/// A smooth parametrized planar curve with a distinguished unit normal.
pub trait Boundary {
    fn point(&self, t: f64) -> Vec2;
    /// Derivative of [`Boundary::point`] with respect to the parameter.
    fn velocity(&self, t: f64) -> Vec2;
    /// Unit normal on the outgoing side.
    fn normal(&self, t: f64) -> Vec2;
    fn domain(&self) -> Domain;
    /// Sampling density that resolves the curve's features.
    fn sample_count(&self) -> usize {
        256
    }

    fn unit_tangent(&self, t: f64) -> Vec2 {
        self.velocity(t).normalized()
    }

    /// The crossing of `line` where it passes to the outgoing side; for a
    /// convex closed curve this is the last intersection along the line.
    fn outgoing_crossing(
        &self,
        origin: Vec2,
        direction: Vec2,
        margin: f64,
    ) -> Result<Crossing, GeometryError> {
        generic_outgoing_crossing(self, origin, direction, margin)
    }
}

/// A base curve with an arclength chart.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Support(SupportCurve),
    Germ(GermCurve),
}

impl Curve {
    pub fn unit_circle() -> Self {
        Curve::Support(SupportCurve::circle(1.0))
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Curve::Support(_))
    }

    /// Total length for closed curves.
    pub fn length(&self) -> Option<f64> {
        match self {
            Curve::Support(c) => Some(c.length()),
            Curve::Germ(_) => None,
        }
    }

    /// Arclength coordinate of a curve parameter.
    pub fn arclength(&self, t: f64) -> f64 {
        match self {
            Curve::Support(c) => c.arclength(t),
            Curve::Germ(g) => g.arclength(t),
        }
    }

    /// Inverse of [`Curve::arclength`]; closed curves reduce `s` modulo the length.
    pub fn param_at(&self, s: f64) -> Result<f64, GeometryError> {
        match self {
            Curve::Support(c) => Ok(c.phi_at_arclength(s)),
            Curve::Germ(g) => g.x_at_arclength(s),
        }
    }

    /// Reduce an arclength coordinate into the canonical range.
    pub fn reduce_s(&self, s: f64) -> f64 {
        match self.length() {
            Some(l) => s.rem_euclid(l),
            None => s,
        }
    }

    /// Signed difference `a - b` of arclength coordinates, wrapped into
    /// `(-L/2, L/2]` for closed curves.
    pub fn s_difference(&self, a: f64, b: f64) -> f64 {
        let d = a - b;
        match self.length() {
            Some(l) => {
                let r = d.rem_euclid(l);
                if r > 0.5 * l {
                    r - l
                } else {
                    r
                }
            }
            None => d,
        }
    }

    /// Point and unit normal at a curve parameter.
    pub fn point_and_normal(&self, t: f64) -> Result<(Vec2, Vec2), GeometryError> {
        if let Curve::Germ(g) = self {
            g.check_domain(t)?;
        }
        Ok((self.point(t), self.normal(t)))
    }

    /// Normal deformation `x ↦ x + eps·f(x)·N(x)`.
    pub fn deform(&self, profile: Profile, eps: f64) -> Result<DeformedCurve, GeometryError> {
        DeformedCurve::new(self.clone(), profile, eps)
    }

    /// Profile value and derivative with respect to arclength.
    pub fn profile_along_arclength(&self, profile: &Profile, t: f64) -> (f64, f64) {
        let (f, df) = profile.eval2(t);
        let speed = self.velocity(t).norm();
        (f, df / speed)
    }
}

impl Boundary for Curve {
    fn point(&self, t: f64) -> Vec2 {
        match self {
            Curve::Support(c) => c.point(t),
            Curve::Germ(g) => g.point(t),
        }
    }

    fn velocity(&self, t: f64) -> Vec2 {
        match self {
            Curve::Support(c) => c.velocity(t),
            Curve::Germ(g) => g.velocity(t),
        }
    }

    fn normal(&self, t: f64) -> Vec2 {
        match self {
            Curve::Support(c) => c.normal(t),
            Curve::Germ(g) => g.normal(t),
        }
    }

    fn domain(&self) -> Domain {
        match self {
            Curve::Support(c) => c.domain(),
            Curve::Germ(g) => g.domain(),
        }
    }

    fn sample_count(&self) -> usize {
        match self {
            Curve::Support(c) => c.sample_count(),
            Curve::Germ(g) => g.sample_count(),
        }
    }

    fn unit_tangent(&self, t: f64) -> Vec2 {
        match self {
            Curve::Support(c) => c.unit_tangent(t),
            Curve::Germ(g) => g.unit_tangent(t),
        }
    }

    fn outgoing_crossing(
        &self,
        origin: Vec2,
        direction: Vec2,
        margin: f64,
    ) -> Result<Crossing, GeometryError> {
        match self {
            Curve::Support(c) => c.outgoing_crossing(origin, direction, margin),
            Curve::Germ(g) => g.outgoing_crossing(origin, direction, margin),
        }
    }
}

impl From<SupportCurve> for Curve {
    fn from(c: SupportCurve) -> Self {
        Curve::Support(c)
    }
}

impl From<GermCurve> for Curve {
    fn from(g: GermCurve) -> Self {
        Curve::Germ(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        a.distance(b) < tol
    }

    #[test]
    fn circle_points_and_normals() {
        let c = Curve::unit_circle();
        let (p, n) = c.point_and_normal(0.0).unwrap();
        assert!(close(p, Vec2::new(1.0, 0.0), 1e-15));
        assert!(close(n, Vec2::new(1.0, 0.0), 1e-15));
        let (p, n) = c.point_and_normal(FRAC_PI_2).unwrap();
        assert!(close(p, Vec2::new(0.0, 1.0), 1e-15));
        assert!(close(n, Vec2::new(0.0, 1.0), 1e-15));
    }

    #[test]
    fn germ_normal_at_origin() {
        let g = Curve::Germ(GermCurve::new(Polynomial::new(vec![0.0, 0.0, 1.0]), 0.5).unwrap());
        let (p, n) = g.point_and_normal(0.0).unwrap();
        assert!(close(p, Vec2::new(0.0, 0.0), 1e-15));
        assert!(close(n, Vec2::new(0.0, 1.0), 1e-15));
        assert!(matches!(
            g.point_and_normal(0.7),
            Err(GeometryError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn normals_are_unit_and_orthogonal() {
        let curves = [
            Curve::Support(
                SupportCurve::new(TrigSeries::new(vec![(0, 1.0, 0.0), (2, 0.1, 0.0), (3, 0.0, 0.02)]))
                    .unwrap(),
            ),
            Curve::Germ(GermCurve::new(Polynomial::new(vec![0.0, 0.0, 0.5, 0.3]), 0.8).unwrap()),
        ];
        for c in &curves {
            let (lo, hi) = match c.domain() {
                Domain::Periodic(p) => (0.0, p),
                Domain::Interval(a, b) => (a * 0.999, b * 0.999),
            };
            for i in 0..256 {
                let t = lo + (hi - lo) * i as f64 / 256.0;
                let n = c.normal(t);
                assert!((n.norm() - 1.0).abs() < 1e-14);
                assert!(c.velocity(t).dot(n).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn s_difference_wraps() {
        let c = Curve::unit_circle();
        assert!((c.s_difference(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
        assert!((c.s_difference(PI, 0.0) - PI).abs() < 1e-12);
    }
}
