//! Line–curve intersection by one-dimensional root finding in the curve
//! parameter.

use super::{Boundary, Domain, GeometryError};
use crate::vec2::Vec2;

/// Where an oriented line crosses a curve, with the crossing angle measured
/// from the unit tangent toward the outgoing normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub param: f64,
    pub point: Vec2,
    pub cos_theta: f64,
    pub sin_theta: f64,
}

impl Crossing {
    pub(crate) fn at<B: Boundary + ?Sized>(
        curve: &B,
        param: f64,
        _origin: Vec2,
        direction: Vec2,
        margin: f64,
    ) -> Result<Self, GeometryError> {
        let t = curve.unit_tangent(param);
        let n = curve.normal(param);
        let cos_theta = direction.dot(t);
        let sin_theta = direction.dot(n);
        if cos_theta.abs() > 1.0 - margin {
            return Err(GeometryError::Tangency { cos_theta });
        }
        Ok(Self {
            param,
            point: curve.point(param),
            cos_theta,
            sin_theta,
        })
    }

    pub fn theta(&self) -> f64 {
        self.sin_theta.atan2(self.cos_theta)
    }
}

/// Safeguarded Newton iteration on a sign-changing bracket `[a, b]`.
/// `f` returns the value and derivative.
pub(crate) fn refine_root(
    f: impl Fn(f64) -> (f64, f64),
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
) -> f64 {
    debug_assert!(fa * fb <= 0.0);
    // keep lo on the negative side
    let (mut lo, mut hi) = if fa <= 0.0 { (a, b) } else { (b, a) };
    let mut x = if (fb - fa) != 0.0 {
        a - fa * (b - a) / (fb - fa)
    } else {
        0.5 * (a + b)
    };
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let (left, right) = if lo < hi { (lo, hi) } else { (hi, lo) };
        let mut next = x - fx / dfx;
        if !(next > left && next < right) || !next.is_finite() {
            next = 0.5 * (left + right);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) || right - left <= f64::EPSILON * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}

/// Sampling-based crossing search used for germs and deformed curves.
///
/// Sign changes of `F(t) = ⟨u⊥, p(t) − q⟩` are located on a uniform grid and
/// polished with [`refine_root`]; among roots where the line passes to the
/// outgoing side, the last one along the line is returned. When no sign
/// change exists the closest approach decides between tangency and a miss.
pub fn generic_outgoing_crossing<B: Boundary + ?Sized>(
    curve: &B,
    origin: Vec2,
    direction: Vec2,
    margin: f64,
) -> Result<Crossing, GeometryError> {
    let nu = direction.perp();
    let f = |t: f64| -> (f64, f64) {
        (
            nu.dot(curve.point(t) - origin),
            nu.dot(curve.velocity(t)),
        )
    };
    let n = curve.sample_count();
    let (lo, hi) = match curve.domain() {
        Domain::Periodic(p) => (0.0, p),
        Domain::Interval(a, b) => (a, b),
    };
    let step = (hi - lo) / n as f64;
    let mut samples: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let t = if i == n { hi } else { lo + i as f64 * step };
            (t, f(t).0)
        })
        .collect();
    // the closing sample is the same point; differently rounded values at a
    // root there would hide the sign change
    if let Domain::Periodic(_) = curve.domain() {
        samples[n].1 = samples[0].1;
    }

    let mut best: Option<(f64, f64)> = None; // (position along line, param)
    for w in samples.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        if fa == 0.0 && fb == 0.0 {
            continue;
        }
        if fa * fb > 0.0 || fb == 0.0 {
            continue;
        }
        let t = refine_root(f, a, b, fa, fb);
        // outgoing: the line passes to the normal side
        if direction.dot(curve.normal(t)) <= 0.0 {
            continue;
        }
        let along = direction.dot(curve.point(t) - origin);
        if best.map_or(true, |(x, _)| along > x) {
            best = Some((along, t));
        }
    }
    if let Some((_, t)) = best {
        let t = match curve.domain() {
            Domain::Periodic(p) => t.rem_euclid(p),
            Domain::Interval(..) => t,
        };
        return Crossing::at(curve, t, origin, direction, margin);
    }

    // No outgoing crossing: near-tangency or a genuine miss.
    let (imin, _) = samples
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &(_, v))| {
            if v.abs() < acc.1 {
                (i, v.abs())
            } else {
                acc
            }
        });
    let (mut a, mut b) = (
        samples[imin.saturating_sub(1)].0,
        samples[(imin + 1).min(n)].0,
    );
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c).0.abs() < f(d).0.abs() {
            b = d;
        } else {
            a = c;
        }
    }
    let t = 0.5 * (a + b);
    if f(t).0.abs() < 1e-9 {
        let cos_theta = direction.dot(curve.unit_tangent(t));
        return Err(GeometryError::Tangency { cos_theta });
    }
    Err(GeometryError::NoIntersection)
}
