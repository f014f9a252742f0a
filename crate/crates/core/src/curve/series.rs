//! Floating-point trigonometric and ordinary polynomials used as curve data.

use serde::{Deserialize, Serialize};

/// Finite Fourier series `Σ a_k cos kφ + b_k sin kφ`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrigSeries {
    /// `(frequency, cosine coefficient, sine coefficient)`.
    pub terms: Vec<(u32, f64, f64)>,
}

impl TrigSeries {
    pub fn new(terms: Vec<(u32, f64, f64)>) -> Self {
        Self { terms }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![(0, c, 0.0)])
    }

    pub fn cos(freq: u32) -> Self {
        Self::new(vec![(freq, 1.0, 0.0)])
    }

    pub fn sin(freq: u32) -> Self {
        Self::new(vec![(freq, 0.0, 1.0)])
    }

    pub fn max_freq(&self) -> u32 {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }

    /// Value and first two derivatives at `phi`.
    pub fn eval3(&self, phi: f64) -> (f64, f64, f64) {
        let mut v = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for &(k, a, b) in &self.terms {
            let kf = k as f64;
            let (s, c) = (kf * phi).sin_cos();
            v += a * c + b * s;
            d1 += kf * (-a * s + b * c);
            d2 -= kf * kf * (a * c + b * s);
        }
        (v, d1, d2)
    }

    pub fn value(&self, phi: f64) -> f64 {
        self.eval3(phi).0
    }

    pub fn derivative(&self, phi: f64) -> f64 {
        self.eval3(phi).1
    }

    /// Constant Fourier coefficient.
    pub fn mean(&self) -> f64 {
        self.terms.iter().filter(|t| t.0 == 0).map(|t| t.1).sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.terms.iter().map(|&(f, a, b)| (f, k * a, k * b)).collect())
    }
}

/// Dense polynomial `Σ c_i x^i` (ascending coefficients).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Value and first two derivatives at `x` (Horner).
    pub fn eval3(&self, x: f64) -> (f64, f64, f64) {
        let mut v = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * x + 2.0 * d1;
            d1 = d1 * x + v;
            v = v * x + c;
        }
        (v, d1, d2)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval3(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.eval3(x).1
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| k * c).collect())
    }
}

/// A scalar function along a curve, expressed in the curve's own parameter
/// (support angle for closed curves, abscissa for germs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    Trig(TrigSeries),
    Poly(Polynomial),
}

impl Profile {
    pub fn constant(c: f64) -> Self {
        Profile::Trig(TrigSeries::constant(c))
    }

    /// Value and derivative with respect to the curve parameter.
    pub fn eval2(&self, t: f64) -> (f64, f64) {
        match self {
            Profile::Trig(s) => {
                let (v, d, _) = s.eval3(t);
                (v, d)
            }
            Profile::Poly(p) => {
                let (v, d, _) = p.eval3(t);
                (v, d)
            }
        }
    }

    /// Value and first two derivatives.
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        match self {
            Profile::Trig(s) => s.eval3(t),
            Profile::Poly(p) => p.eval3(t),
        }
    }

    pub fn negated(&self) -> Self {
        match self {
            Profile::Trig(s) => Profile::Trig(s.scaled(-1.0)),
            Profile::Poly(p) => Profile::Poly(p.scaled(-1.0)),
        }
    }

    /// Rough bandwidth used to size sampling grids.
    pub fn complexity(&self) -> usize {
        match self {
            Profile::Trig(s) => s.max_freq() as usize,
            Profile::Poly(p) => p.degree(),
        }
    }
}
