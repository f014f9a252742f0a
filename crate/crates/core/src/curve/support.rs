use std::f64::consts::{PI, TAU};

use super::intersect::{refine_root, Crossing};
use super::{Boundary, Domain, GeometryError, TrigSeries, CHECK_GRID};
use crate::vec2::Vec2;

/// Closed strictly convex curve `x(φ) = h(φ) n(φ) + h'(φ) t(φ)` given by its
/// support function `h`, with `n = (cos φ, sin φ)` and `t = (-sin φ, cos φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportCurve {
    h: TrigSeries,
    length: f64,
}

/// Minimum of the radius of curvature `h + h''` over the check grid, refined
/// locally around the smallest grid value. Positive iff strictly convex.
pub fn convexity_margin(h: &TrigSeries) -> f64 {
    margin_and_location(h).0
}

fn margin_and_location(h: &TrigSeries) -> (f64, f64) {
    let rho = |phi: f64| {
        let (v, _, d2) = h.eval3(phi);
        v + d2
    };
    let n = CHECK_GRID.max(4 * h.max_freq() as usize);
    let step = TAU / n as f64;
    let (imin, vmin) = (0..n)
        .map(|i| (i, rho(i as f64 * step)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    // golden-section polish in the two neighbouring cells
    let (mut a, mut b) = ((imin as f64 - 1.0) * step, (imin as f64 + 1.0) * step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..60 {
        if rho(c) < rho(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let x = 0.5 * (a + b);
    let vx = rho(x);
    if vx < vmin {
        (vx, x.rem_euclid(TAU))
    } else {
        (vmin, imin as f64 * step)
    }
}

impl SupportCurve {
    /// Validates strict convexity on the check grid.
    pub fn new(h: TrigSeries) -> Result<Self, GeometryError> {
        if h.terms.iter().any(|&(_, a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(GeometryError::Invalid("non-finite support coefficient".into()));
        }
        let (margin, at) = margin_and_location(&h);
        if margin <= 0.0 {
            return Err(GeometryError::NotConvex { param: at, margin });
        }
        let length = TAU * h.mean();
        Ok(Self { h, length })
    }

    pub fn circle(radius: f64) -> Self {
        Self {
            h: TrigSeries::constant(radius),
            length: TAU * radius,
        }
    }

    pub fn support_function(&self) -> &TrigSeries {
        &self.h
    }

    pub fn support(&self, phi: f64) -> f64 {
        self.h.value(phi)
    }

    /// Radius of curvature `h + h''`.
    pub fn curvature_radius(&self, phi: f64) -> f64 {
        let (v, _, d2) = self.h.eval3(phi);
        v + d2
    }

    pub fn convexity_margin(&self) -> f64 {
        convexity_margin(&self.h)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// `s(φ) = ∫₀^φ (h + h'') dφ'`, integrated term by term.
    pub fn arclength(&self, phi: f64) -> f64 {
        let mut s = 0.0;
        for &(k, a, b) in &self.h.terms {
            if k == 0 {
                s += a * phi;
            } else if k != 1 {
                let kf = k as f64;
                let w = (1.0 - kf * kf) / kf;
                let (sn, cs) = (kf * phi).sin_cos();
                s += w * (a * sn + b * (1.0 - cs));
            }
        }
        s
    }

    /// Inverse of the arclength map, with `s` reduced modulo the length.
    pub fn phi_at_arclength(&self, s: f64) -> f64 {
        let s = s.rem_euclid(self.length);
        let (mut lo, mut hi) = (0.0, TAU);
        let mut phi = s / self.h.mean();
        for _ in 0..100 {
            let r = self.arclength(phi) - s;
            if r > 0.0 {
                hi = phi;
            } else {
                lo = phi;
            }
            let mut next = phi - r / self.curvature_radius(phi);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - phi).abs() <= 1e-16 * (1.0 + phi.abs()) {
                return next;
            }
            phi = next;
        }
        phi
    }
}

impl Boundary for SupportCurve {
    fn point(&self, phi: f64) -> Vec2 {
        let (h, dh, _) = self.h.eval3(phi);
        let n = Vec2::from_angle(phi);
        h * n + dh * n.perp()
    }

    fn velocity(&self, phi: f64) -> Vec2 {
        self.curvature_radius(phi) * Vec2::from_angle(phi).perp()
    }

    fn normal(&self, phi: f64) -> Vec2 {
        Vec2::from_angle(phi)
    }

    fn unit_tangent(&self, phi: f64) -> Vec2 {
        Vec2::from_angle(phi).perp()
    }

    fn domain(&self) -> Domain {
        Domain::Periodic(TAU)
    }

    fn sample_count(&self) -> usize {
        256.max(8 * self.h.max_freq() as usize)
    }

    /// The signed distance `F(φ) = ⟨ν, x(φ) − q⟩`, `ν = u⊥`, is extremal at
    /// the support angles `φ_ν` and `φ_ν + π` and monotone in between, so the
    /// outgoing root is bracketed by `[φ_ν − π, φ_ν]` without sampling.
    fn outgoing_crossing(
        &self,
        origin: Vec2,
        direction: Vec2,
        margin: f64,
    ) -> Result<Crossing, GeometryError> {
        let u = direction;
        let nu = u.perp();
        let phi_nu = nu.angle();
        let offset = nu.dot(origin);
        let f_max = self.support(phi_nu) - offset;
        let f_min = -self.support(phi_nu + PI) - offset;
        let scale = 1e-12 * (1.0 + offset.abs() + self.h.mean().abs());
        if f_max.abs() <= scale || f_min.abs() <= scale {
            return Err(GeometryError::Tangency { cos_theta: 1.0 });
        }
        if f_max < 0.0 || f_min > 0.0 {
            return Err(GeometryError::NoIntersection);
        }
        let f = |phi: f64| {
            (
                nu.dot(self.point(phi) - origin),
                nu.dot(self.velocity(phi)),
            )
        };
        let phi = refine_root(f, phi_nu - PI, phi_nu, f_min, f_max).rem_euclid(TAU);
        Crossing::at(self, phi, origin, u, margin)
    }
}
