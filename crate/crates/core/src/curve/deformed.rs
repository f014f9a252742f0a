use std::f64::consts::TAU;

use super::{Boundary, Curve, Domain, GeometryError, Profile, CHECK_GRID};
use crate::vec2::Vec2;

/// The normally deformed curve `x ↦ x + ε f(x) N(x)`, kept in parametric form
/// over the base curve's parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedCurve {
    base: Curve,
    profile: Profile,
    eps: f64,
}

impl DeformedCurve {
    /// Closed bases are checked for strict convexity at the stored `eps`.
    pub fn new(base: Curve, profile: Profile, eps: f64) -> Result<Self, GeometryError> {
        if !eps.is_finite() {
            return Err(GeometryError::Invalid("deformation size must be finite".into()));
        }
        let d = Self { base, profile, eps };
        if d.base.is_closed() {
            let (margin, at) = d.convexity_margin();
            if margin <= 0.0 {
                return Err(GeometryError::NotConvex { param: at, margin });
            }
        }
        Ok(d)
    }

    pub fn base(&self) -> &Curve {
        &self.base
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Minimum signed curvature over the check grid and where it occurs.
    pub fn convexity_margin(&self) -> (f64, f64) {
        let (lo, hi) = match self.domain() {
            Domain::Periodic(p) => (0.0, p),
            Domain::Interval(a, b) => (a, b),
        };
        let n = CHECK_GRID.max(4 * self.profile.complexity());
        (0..n)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / n as f64;
                (self.signed_curvature(t), t)
            })
            .fold((f64::INFINITY, 0.0), |acc, x| if x.0 < acc.0 { x } else { acc })
    }

    /// Curvature of the point map, positive when turning toward `-N`.
    pub fn signed_curvature(&self, t: f64) -> f64 {
        let v = self.velocity(t);
        let a = self.acceleration(t);
        // closed curves are counterclockwise with N = -t⊥; germs have N = t⊥
        let sign = if self.base.is_closed() { 1.0 } else { -1.0 };
        sign * v.cross(a) / v.norm().powi(3)
    }

    fn acceleration(&self, t: f64) -> Vec2 {
        let h = 1e-5;
        (self.velocity(t + h) - self.velocity(t - h)) * (0.5 / h)
    }

    /// Support value `max_t ⟨p(t), (cos ψ, sin ψ)⟩` of a deformed closed curve.
    pub fn support_value(&self, psi: f64) -> f64 {
        let dir = Vec2::from_angle(psi);
        let h = |t: f64| dir.dot(self.point(t));
        let n = CHECK_GRID;
        let step = TAU / n as f64;
        let (imax, _) = (0..n)
            .map(|i| (i, h(i as f64 * step)))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        // Newton on d/dt ⟨p, dir⟩ = 0 from the best grid point
        let mut t = imax as f64 * step;
        for _ in 0..50 {
            let g = dir.dot(self.velocity(t));
            let dg = dir.dot(self.acceleration(t));
            if dg >= 0.0 {
                break;
            }
            let next = t - g / dg;
            if (next - t).abs() > step {
                break;
            }
            if (next - t).abs() < 1e-15 {
                t = next;
                break;
            }
            t = next;
        }
        h(t).max(h(imax as f64 * step))
    }
}

impl Boundary for DeformedCurve {
    fn point(&self, t: f64) -> Vec2 {
        let f = self.profile.eval2(t).0;
        self.base.point(t) + (self.eps * f) * self.base.normal(t)
    }

    fn velocity(&self, t: f64) -> Vec2 {
        let (f, df) = self.profile.eval2(t);
        let n = self.base.normal(t);
        // derivative of the unit normal along the base parameter
        let dn = match &self.base {
            Curve::Support(_) => Vec2::from_angle(t).perp(),
            Curve::Germ(g) => {
                let (_, d1, d2) = g.graph().eval3(t);
                let q = d1.hypot(1.0);
                let raw = Vec2::new(-d1, 1.0);
                Vec2::new(-d2, 0.0) * (1.0 / q) - raw * (d1 * d2 / (q * q * q))
            }
        };
        self.base.velocity(t) + self.eps * (df * n + f * dn)
    }

    fn normal(&self, t: f64) -> Vec2 {
        let v = self.velocity(t).normalized();
        if self.base.is_closed() {
            -v.perp()
        } else {
            v.perp()
        }
    }

    fn domain(&self) -> Domain {
        self.base.domain()
    }

    fn sample_count(&self) -> usize {
        self.base.sample_count().max(8 * self.profile.complexity())
    }
}
