//! Hamiltonian functions on the phase cylinder, their fields for the form
//! `dw ∧ ds`, numeric Poisson brackets and reference flows.
//!
//! The field of `H` is `X_H = (ṡ, ẇ) = (−∂H/∂w, ∂H/∂s)`, so that
//! `ω(X_F, X_G) = {F, G} = F_w G_s − F_s G_w`.

mod rk;

pub use rk::{flow, flow_with, FlowError, FlowOptions, FlowStats, DEFAULT_FLOW_TOL, W_LIMIT};

use crate::curve::{Curve, Profile};
use crate::liecirc::{CoeffFn, GradedElement, Mode};
use crate::phase::PhasePoint;
use crate::rational::to_f64;

/// A smooth function of `(s, w)` with analytic first partials.
pub trait PhaseHamiltonian: Sync {
    /// `(H, ∂H/∂s, ∂H/∂w)`.
    fn eval(&self, s: f64, w: f64) -> (f64, f64, f64);

    fn value(&self, s: f64, w: f64) -> f64 {
        self.eval(s, w).0
    }

    /// `(ṡ, ẇ) = (−H_w, H_s)`.
    fn field(&self, s: f64, w: f64) -> (f64, f64) {
        let (_, hs, hw) = self.eval(s, w);
        (-hw, hs)
    }
}

impl<H: PhaseHamiltonian + ?Sized> PhaseHamiltonian for &H {
    fn eval(&self, s: f64, w: f64) -> (f64, f64, f64) {
        (**self).eval(s, w)
    }
}

/// `H_{k,h}` with an exact coefficient and a floating-point copy for
/// evaluation.
#[derive(Debug, Clone)]
pub struct HamiltonianTerm {
    degree: u32,
    coeff: CoeffFn,
    numeric: Vec<(Mode, f64)>,
}

impl HamiltonianTerm {
    pub fn new(degree: u32, coeff: CoeffFn) -> Self {
        let numeric = coeff.terms().map(|(m, c)| (m, to_f64(c))).collect();
        Self {
            degree,
            coeff,
            numeric,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self) -> &CoeffFn {
        &self.coeff
    }

    fn h2(&self, s: f64) -> (f64, f64) {
        let mut v = 0.0;
        let mut d = 0.0;
        for &(m, c) in &self.numeric {
            match m {
                Mode::Cos(k) => {
                    let (sn, cs) = (k as f64 * s).sin_cos();
                    v += c * cs;
                    d -= c * k as f64 * sn;
                }
                Mode::Sin(k) => {
                    let (sn, cs) = (k as f64 * s).sin_cos();
                    v += c * sn;
                    d += c * k as f64 * cs;
                }
                Mode::Pow(p) => {
                    v += c * s.powi(p as i32);
                    if p > 0 {
                        d += c * p as f64 * s.powi(p as i32 - 1);
                    }
                }
            }
        }
        (v, d)
    }
}

impl PhaseHamiltonian for HamiltonianTerm {
    // H = h w^k r^{1−k} with r = √(1−w²), y = w/r;
    // H_w = h (k y^{k−1} + (k−1) y^{k+1}).
    fn eval(&self, s: f64, w: f64) -> (f64, f64, f64) {
        let (h, dh) = self.h2(s);
        let r = (1.0 - w * w).sqrt();
        let y = w / r;
        let k = self.degree as i32;
        let base = y.powi(k) * r; // w^k r^{1−k}
        let yk1 = if k == 0 { 0.0 } else { k as f64 * y.powi(k - 1) };
        let hw = h * (yk1 + (k - 1) as f64 * y.powi(k + 1));
        (h * base, dh * base, hw)
    }
}

/// A finite sum of terms, typically built from an exact element.
#[derive(Debug, Clone, Default)]
pub struct Hamiltonian {
    terms: Vec<HamiltonianTerm>,
}

impl Hamiltonian {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<HamiltonianTerm>) -> Self {
        Self { terms }
    }

    pub fn from_element(e: &GradedElement) -> Self {
        Self {
            terms: e
                .parts()
                .map(|(k, h)| HamiltonianTerm::new(k, h.clone()))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }
}

impl From<HamiltonianTerm> for Hamiltonian {
    fn from(t: HamiltonianTerm) -> Self {
        Self { terms: vec![t] }
    }
}

impl PhaseHamiltonian for Hamiltonian {
    fn eval(&self, s: f64, w: f64) -> (f64, f64, f64) {
        self.terms.iter().fold((0.0, 0.0, 0.0), |acc, t| {
            let (a, b, c) = t.eval(s, w);
            (acc.0 + a, acc.1 + b, acc.2 + c)
        })
    }
}

/// `−2 √(1 − w²) f(s)` for a profile `f` given in the curve's own parameter.
/// Outside a germ's domain the value is NaN.
#[derive(Debug, Clone)]
pub struct PerlineHamiltonian {
    pub curve: Curve,
    pub profile: Profile,
}

impl PerlineHamiltonian {
    pub fn new(curve: Curve, profile: Profile) -> Self {
        Self { curve, profile }
    }
}

impl PhaseHamiltonian for PerlineHamiltonian {
    fn eval(&self, s: f64, w: f64) -> (f64, f64, f64) {
        let Ok(t) = self.curve.param_at(s) else {
            return (f64::NAN, f64::NAN, f64::NAN);
        };
        let (f, fs) = self.curve.profile_along_arclength(&self.profile, t);
        let r = (1.0 - w * w).sqrt();
        (-2.0 * r * f, -2.0 * r * fs, 2.0 * w / r * f)
    }
}

pub fn ham_value<H: PhaseHamiltonian + ?Sized>(h: &H, p: PhasePoint) -> f64 {
    h.value(p.s, p.w())
}

/// `(ṡ, ẇ)` at `p`.
pub fn ham_field<H: PhaseHamiltonian + ?Sized>(h: &H, p: PhasePoint) -> (f64, f64) {
    h.field(p.s, p.w())
}

/// `{A, B} = A_w B_s − A_s B_w` at `p`.
pub fn poisson_numeric<A, B>(a: &A, b: &B, p: PhasePoint) -> f64
where
    A: PhaseHamiltonian + ?Sized,
    B: PhaseHamiltonian + ?Sized,
{
    let (s, w) = (p.s, p.w());
    let (_, a_s, a_w) = a.eval(s, w);
    let (_, b_s, b_w) = b.eval(s, w);
    a_w * b_s - a_s * b_w
}
