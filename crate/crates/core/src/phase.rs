//! The phase cylinder of oriented lines crossing a curve, in the charts
//! `(s, θ)`, `(s, w = cos θ)` and `(s, y = cot θ)`.
//!
//! `s` is the arclength of the crossing point and `θ ∈ (0, π)` the angle from
//! the positively oriented unit tangent to the line's direction, measured
//! toward the outgoing normal. The symplectic form is `dw ∧ ds`.

use serde::{Deserialize, Serialize};

use crate::curve::{Boundary, Curve, GeometryError};
use crate::vec2::Vec2;

/// Default transversality margin: `|cos θ| > 1 − margin` counts as tangent.
pub const DEFAULT_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Theta,
    W,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub s: f64,
    pub theta: f64,
}

impl PhasePoint {
    pub fn new(s: f64, theta: f64) -> Self {
        Self { s, theta }
    }

    pub fn from_sw(s: f64, w: f64) -> Self {
        Self::new(s, w.acos())
    }

    pub fn from_chart(s: f64, value: f64, chart: Chart) -> Self {
        let theta = match chart {
            Chart::Theta => value,
            Chart::W => value.acos(),
            // θ = arccot y ∈ (0, π)
            Chart::Y => std::f64::consts::FRAC_PI_2 - value.atan(),
        };
        Self::new(s, theta)
    }

    pub fn to_chart(&self, chart: Chart) -> (f64, f64) {
        let v = match chart {
            Chart::Theta => self.theta,
            Chart::W => self.w(),
            Chart::Y => self.y(),
        };
        (self.s, v)
    }

    pub fn w(&self) -> f64 {
        self.theta.cos()
    }

    pub fn y(&self) -> f64 {
        self.theta.cos() / self.theta.sin()
    }

    pub fn is_transversal(&self, margin: f64) -> bool {
        self.theta > 0.0 && self.theta < std::f64::consts::PI && self.w().abs() <= 1.0 - margin
    }
}

/// Oriented line through `point` with unit `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanLine {
    pub point: Vec2,
    pub direction: Vec2,
}

impl EuclideanLine {
    pub fn new(point: Vec2, direction: Vec2) -> Self {
        Self {
            point,
            direction: direction.normalized(),
        }
    }

    pub fn through(a: Vec2, b: Vec2) -> Self {
        Self::new(a, b - a)
    }

    pub fn reversed(&self) -> Self {
        Self {
            point: self.point,
            direction: -self.direction,
        }
    }
}

/// The outgoing line through `γ(s)` making angle `θ` with the tangent.
pub fn line_from_phase(curve: &Curve, p: PhasePoint) -> Result<EuclideanLine, GeometryError> {
    let t = curve.param_at(p.s)?;
    let (point, n) = curve.point_and_normal(t)?;
    let tangent = curve.unit_tangent(t);
    let (sn, cs) = p.theta.sin_cos();
    Ok(EuclideanLine {
        point,
        direction: cs * tangent + sn * n,
    })
}

/// Phase coordinates of a line from its outgoing (last) crossing with the curve.
pub fn phase_from_line(
    curve: &Curve,
    line: &EuclideanLine,
    margin: f64,
) -> Result<PhasePoint, GeometryError> {
    let c = curve.outgoing_crossing(line.point, line.direction, margin)?;
    Ok(PhasePoint::new(curve.reduce_s(curve.arclength(c.param)), c.theta()))
}

/// `dw ∧ ds (u, v) = δw(u) δs(v) − δs(u) δw(v)` for tangent pairs `(δs, δw)`.
pub fn symplectic_product(u: (f64, f64), v: (f64, f64)) -> f64 {
    u.1 * v.0 - u.0 * v.1
}

/// The same form in the `(s, θ)` chart: `sin θ (δs(u) δθ(v) − δθ(u) δs(v))`.
pub fn symplectic_product_theta(p: PhasePoint, u: (f64, f64), v: (f64, f64)) -> f64 {
    p.theta.sin() * (u.0 * v.1 - u.1 * v.0)
}

/// Uniform phase grid: `s_count` arclength values spread over the curve and
/// `theta_count` angles spanning `[theta_min, theta_max]` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub s_count: usize,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_count: usize,
}

impl PhaseGrid {
    /// Full-period grid in `s` for a closed curve; `s` samples exclude the
    /// duplicated endpoint.
    pub fn closed(length: f64, s_count: usize, theta: (f64, f64), theta_count: usize) -> Self {
        Self {
            s_min: 0.0,
            s_max: length * (1.0 - 1.0 / s_count.max(1) as f64),
            s_count,
            theta_min: theta.0,
            theta_max: theta.1,
            theta_count,
        }
    }

    pub fn points(&self) -> Vec<PhasePoint> {
        let lin = |lo: f64, hi: f64, n: usize, i: usize| {
            if n <= 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(self.s_count * self.theta_count);
        for i in 0..self.s_count {
            let s = lin(self.s_min, self.s_max, self.s_count, i);
            for j in 0..self.theta_count {
                out.push(PhasePoint::new(
                    s,
                    lin(self.theta_min, self.theta_max, self.theta_count, j),
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{GermCurve, Polynomial};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    #[test]
    fn chart_values() {
        let p = PhasePoint::new(0.0, FRAC_PI_2);
        assert!(p.w().abs() < 1e-16 && p.y().abs() < 1e-16);
        let p = PhasePoint::new(0.0, FRAC_PI_3);
        assert!((p.w() - 0.5).abs() < 1e-15);
        assert!((p.y() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let p = PhasePoint::new(0.0, FRAC_PI_4);
        assert!((p.w() - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        assert!((p.y() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chart_round_trips() {
        for i in 1..64 {
            let p = PhasePoint::new(0.3, PI * i as f64 / 64.0);
            for chart in [Chart::Theta, Chart::W, Chart::Y] {
                let (s, v) = p.to_chart(chart);
                let q = PhasePoint::from_chart(s, v, chart);
                assert!((q.theta - p.theta).abs() < 1e-14, "{chart:?} at {}", p.theta);
            }
            assert!((p.y() * (1.0 - p.w() * p.w()).sqrt() - p.w()).abs() < 1e-13);
        }
    }

    #[test]
    fn lines_on_the_circle() {
        let c = Curve::unit_circle();
        let l = line_from_phase(&c, PhasePoint::new(0.0, FRAC_PI_2)).unwrap();
        assert!(l.point.distance(Vec2::new(1.0, 0.0)) < 1e-15);
        assert!(l.direction.distance(Vec2::new(1.0, 0.0)) < 1e-15);
        let l = line_from_phase(&c, PhasePoint::new(0.0, FRAC_PI_4)).unwrap();
        let h = 0.5 * 2f64.sqrt();
        assert!(l.direction.distance(Vec2::new(h, h)) < 1e-15);
    }

    #[test]
    fn germ_normal_line() {
        let g = Curve::Germ(GermCurve::new(Polynomial::new(vec![0.0, 0.0, 1.0]), 0.5).unwrap());
        let l = line_from_phase(&g, PhasePoint::new(0.0, FRAC_PI_2)).unwrap();
        assert!(l.point.norm() < 1e-15);
        assert!(l.direction.distance(Vec2::new(0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn diameter_tangent_and_miss() {
        let c = Curve::unit_circle();
        let diameter = EuclideanLine::through(Vec2::new(-1.0, 0.0), Vec2::new(1.0, 0.0));
        let p = phase_from_line(&c, &diameter, DEFAULT_MARGIN).unwrap();
        assert!(p.s.abs() < 1e-12 || (p.s - 2.0 * PI).abs() < 1e-12);
        assert!((p.theta - FRAC_PI_2).abs() < 1e-12);

        let tangent = EuclideanLine::new(Vec2::new(0.0, 1.0), Vec2::new(1.0, 0.0));
        assert!(matches!(
            phase_from_line(&c, &tangent, DEFAULT_MARGIN),
            Err(GeometryError::Tangency { .. })
        ));
        let miss = EuclideanLine::new(Vec2::new(0.0, 2.0), Vec2::new(1.0, 0.0));
        assert_eq!(
            phase_from_line(&c, &miss, DEFAULT_MARGIN),
            Err(GeometryError::NoIntersection)
        );
    }

    #[test]
    fn symplectic_pairing() {
        assert_eq!(symplectic_product((1.0, 0.0), (0.0, 1.0)), -1.0);
        assert_eq!(symplectic_product((0.3, -0.7), (0.3, -0.7)), 0.0);
        // dw = −sin θ dθ relates the two charts
        let p = PhasePoint::new(0.0, FRAC_PI_3);
        let (u, v) = ((0.4, -1.3), (2.0, 0.25));
        let to_w = |x: (f64, f64)| (x.0, -p.theta.sin() * x.1);
        let a = symplectic_product(to_w(u), to_w(v));
        let b = symplectic_product_theta(p, u, v);
        assert!((a - b).abs() < 1e-12);
    }
}
