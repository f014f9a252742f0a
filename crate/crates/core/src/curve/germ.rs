use super::{Boundary, Domain, GeometryError, Polynomial};
use crate::vec2::Vec2;

// 10-point Gauss–Legendre nodes/weights on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];
const PANELS: usize = 16;

/// Graph `{(x, g(x)) : |x| < r}` of a polynomial with `g(0) = g'(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GermCurve {
    g: Polynomial,
    half_width: f64,
}

impl GermCurve {
    pub fn new(g: Polynomial, half_width: f64) -> Result<Self, GeometryError> {
        if g.coeff(0) != 0.0 || g.coeff(1) != 0.0 {
            return Err(GeometryError::Invalid(
                "germ must pass through the origin tangent to the x-axis".into(),
            ));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(GeometryError::Invalid("germ half-width must be positive".into()));
        }
        Ok(Self { g, half_width })
    }

    pub fn graph(&self) -> &Polynomial {
        &self.g
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub(crate) fn check_domain(&self, x: f64) -> Result<(), GeometryError> {
        if x.abs() < self.half_width {
            Ok(())
        } else {
            Err(GeometryError::OutsideDomain {
                param: x,
                half_width: self.half_width,
            })
        }
    }

    fn speed(&self, x: f64) -> f64 {
        self.g.derivative(x).hypot(1.0)
    }

    /// Signed arclength from the origin.
    pub fn arclength(&self, x: f64) -> f64 {
        let h = x / PANELS as f64;
        let mut s = 0.0;
        for p in 0..PANELS {
            let mid = (p as f64 + 0.5) * h;
            for (&node, &w) in GL_NODES.iter().zip(&GL_WEIGHTS) {
                let d = 0.5 * h * node;
                s += w * (self.speed(mid - d) + self.speed(mid + d));
            }
        }
        0.5 * h * s
    }

    pub fn x_at_arclength(&self, s: f64) -> Result<f64, GeometryError> {
        let r = self.half_width;
        let (lo_s, hi_s) = (self.arclength(-r), self.arclength(r));
        if !(s > lo_s && s < hi_s) {
            return Err(GeometryError::OutsideDomain {
                param: s,
                half_width: r,
            });
        }
        let (mut lo, mut hi) = (-r, r);
        let mut x = s / self.speed(0.0);
        for _ in 0..100 {
            let res = self.arclength(x) - s;
            if res > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let mut next = x - res / self.speed(x);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-16 * (1.0 + x.abs()) {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }
}

impl Boundary for GermCurve {
    fn point(&self, x: f64) -> Vec2 {
        Vec2::new(x, self.g.value(x))
    }

    fn velocity(&self, x: f64) -> Vec2 {
        Vec2::new(1.0, self.g.derivative(x))
    }

    fn normal(&self, x: f64) -> Vec2 {
        self.velocity(x).perp().normalized()
    }

    fn domain(&self) -> Domain {
        Domain::Interval(-self.half_width, self.half_width)
    }

    fn sample_count(&self) -> usize {
        256.max(16 * self.g.degree())
    }
}
