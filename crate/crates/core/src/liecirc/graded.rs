use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::coeff::{CoeffFn, Mode, Ring};
use super::AlgebraError;
use crate::rational::{q, Q};

/// A finite sum `Σ_k H_{k, h_k}` with `H_{k,h} = h(s) y^k / √(1 + y²)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedElement {
    ring: Ring,
    parts: BTreeMap<u32, CoeffFn>,
}

impl GradedElement {
    pub fn zero(ring: Ring) -> Self {
        Self {
            ring,
            parts: BTreeMap::new(),
        }
    }

    /// The single term `H_{k,h}`.
    pub fn term(k: u32, h: CoeffFn) -> Self {
        let mut e = Self::zero(h.ring());
        if !h.is_zero() {
            e.parts.insert(k, h);
        }
        e
    }

    pub fn from_parts<I>(ring: Ring, parts: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (u32, CoeffFn)>,
    {
        let mut e = Self::zero(ring);
        for (k, h) in parts {
            e.add_part(k, &h)?;
        }
        Ok(e)
    }

    fn add_part(&mut self, k: u32, h: &CoeffFn) -> Result<(), AlgebraError> {
        if h.ring() != self.ring {
            return Err(AlgebraError::RingMismatch);
        }
        if h.is_zero() {
            return Ok(());
        }
        let sum = match self.parts.get(&k) {
            Some(old) => old.add(h)?,
            None => h.clone(),
        };
        if sum.is_zero() {
            self.parts.remove(&k);
        } else {
            self.parts.insert(k, sum);
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// `π_k`: the stored coefficient of degree `k` (zero if absent).
    pub fn project(&self, k: u32) -> CoeffFn {
        self.parts
            .get(&k)
            .cloned()
            .unwrap_or_else(|| CoeffFn::zero(self.ring))
    }

    pub fn parts(&self) -> impl Iterator<Item = (u32, &CoeffFn)> {
        self.parts.iter().map(|(k, h)| (*k, h))
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.parts.keys().copied()
    }

    pub fn max_degree(&self) -> u32 {
        self.parts.keys().next_back().copied().unwrap_or(0)
    }

    /// Highest frequency (or `s`-power) over all parts.
    pub fn max_order(&self) -> u32 {
        self.parts.values().map(|h| h.max_order()).max().unwrap_or(0)
    }

    /// Nonzero coordinates `((degree, mode), coefficient)`.
    pub fn coordinates(&self) -> impl Iterator<Item = ((u32, Mode), &Q)> {
        self.parts
            .iter()
            .flat_map(|(&k, h)| h.terms().map(move |(m, c)| ((k, m), c)))
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        let mut out = self.clone();
        if other.ring != self.ring {
            return Err(AlgebraError::RingMismatch);
        }
        for (&k, h) in &other.parts {
            out.add_part(k, h)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring);
        }
        Self {
            ring: self.ring,
            parts: self.parts.iter().map(|(k, h)| (*k, h.scale(c))).collect(),
        }
    }

    /// Value at `(s, y)` in floating point.
    pub fn value_sy(&self, s: f64, y: f64) -> f64 {
        let r = (1.0 + y * y).sqrt();
        self.parts
            .iter()
            .map(|(&k, h)| h.value(s) * y.powi(k as i32))
            .sum::<f64>()
            / r
    }
}

/// Poisson bracket `{F, G} = F_w G_s − F_s G_w`, computed termwise by
/// `{H_{d,f}, H_{k,g}} = H_{d+k−1, d f g' − k f' g} + H_{d+k+1, (d−1) f g' − (k−1) f' g}`.
pub fn bracket(a: &GradedElement, b: &GradedElement) -> Result<GradedElement, AlgebraError> {
    if a.ring != b.ring {
        return Err(AlgebraError::RingMismatch);
    }
    let mut out = GradedElement::zero(a.ring);
    for (&d, f) in &a.parts {
        let df = f.derivative();
        for (&k, g) in &b.parts {
            let dg = g.derivative();
            let fdg = f.mul(&dg)?;
            let dfg = df.mul(g)?;
            let (di, ki) = (d as i64, k as i64);
            if d + k >= 1 {
                let low = fdg.scale(&q(di)).sub(&dfg.scale(&q(ki)))?;
                out.add_part(d + k - 1, &low)?;
            }
            let high = fdg.scale(&q(di - 1)).sub(&dfg.scale(&q(ki - 1)))?;
            out.add_part(d + k + 1, &high)?;
        }
    }
    Ok(out)
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, h)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "H[{k}]({h})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(k: u32, c: CoeffFn) -> GradedElement {
        GradedElement::term(k, c)
    }

    #[test]
    fn sine_cosine_bracket_is_h11() {
        let b = bracket(&h(0, CoeffFn::sin(1)), &h(0, CoeffFn::cos(1))).unwrap();
        assert_eq!(b, h(1, CoeffFn::one(Ring::CircleTrig)));
        assert_eq!(b.project(1), CoeffFn::one(Ring::CircleTrig));
        assert!(b.project(3).is_zero());
        assert!(GradedElement::zero(Ring::CircleTrig).project(2).is_zero());
    }

    #[test]
    fn degree_one_closes() {
        let f = CoeffFn::cos(2);
        let g = CoeffFn::sin(1).add(&CoeffFn::one(Ring::CircleTrig)).unwrap();
        let b = bracket(&h(1, f.clone()), &h(1, g.clone())).unwrap();
        let expect = f
            .mul(&g.derivative())
            .unwrap()
            .sub(&f.derivative().mul(&g).unwrap())
            .unwrap();
        assert_eq!(b, h(1, expect));
        assert!(b.project(3).is_zero());
    }

    #[test]
    fn self_bracket_vanishes() {
        let a = GradedElement::from_parts(
            Ring::CircleTrig,
            [(0, CoeffFn::sin(2)), (3, CoeffFn::cos(1)), (2, CoeffFn::one(Ring::CircleTrig))],
        )
        .unwrap();
        assert!(bracket(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn interval_h11() {
        let one = h(0, CoeffFn::one(Ring::IntervalPoly));
        let s = h(0, CoeffFn::monomial(1));
        let b = bracket(&s, &one).unwrap();
        assert_eq!(b, h(1, CoeffFn::one(Ring::IntervalPoly)));
    }

    #[test]
    fn mismatched_rings() {
        let a = h(0, CoeffFn::monomial(1));
        let b = h(0, CoeffFn::cos(1));
        assert_eq!(bracket(&a, &b), Err(AlgebraError::RingMismatch));
    }
}
