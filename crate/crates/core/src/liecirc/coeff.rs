use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;
use crate::rational::{format_rational, q, qf, to_f64, Q};

/// Which function space the coefficients live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ring {
    /// Trigonometric polynomials in `s` on a circle of length `2π`.
    CircleTrig,
    /// Polynomials in `s` on an interval.
    IntervalPoly,
}

/// Basis function of a coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// `cos(k s)`; `Cos(0)` is the constant.
    Cos(u32),
    /// `sin(k s)`, `k ≥ 1`.
    Sin(u32),
    /// `s^p`.
    Pow(u32),
}

impl Mode {
    /// Frequency for trig modes, power for polynomial modes.
    pub fn order(self) -> u32 {
        match self {
            Mode::Cos(k) | Mode::Sin(k) | Mode::Pow(k) => k,
        }
    }

    fn ring(self) -> Ring {
        match self {
            Mode::Pow(_) => Ring::IntervalPoly,
            _ => Ring::CircleTrig,
        }
    }
}

/// Exact coefficient function: a sparse rational combination of [`Mode`]s.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffFn {
    ring: Ring,
    terms: BTreeMap<Mode, Q>,
}

impl CoeffFn {
    pub fn zero(ring: Ring) -> Self {
        Self {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: Ring, c: Q) -> Self {
        let mode = match ring {
            Ring::CircleTrig => Mode::Cos(0),
            Ring::IntervalPoly => Mode::Pow(0),
        };
        Self::from_terms(ring, [(mode, c)]).unwrap()
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, Q::one())
    }

    pub fn cos(k: u32) -> Self {
        Self::from_terms(Ring::CircleTrig, [(Mode::Cos(k), Q::one())]).unwrap()
    }

    pub fn sin(k: u32) -> Self {
        Self::from_terms(Ring::CircleTrig, [(Mode::Sin(k), Q::one())]).unwrap()
    }

    pub fn monomial(p: u32) -> Self {
        Self::from_terms(Ring::IntervalPoly, [(Mode::Pow(p), Q::one())]).unwrap()
    }

    /// Builds a function from `(mode, coefficient)` pairs, summing repeats.
    /// `Sin(0)` is accepted and dropped since it vanishes.
    pub fn from_terms<I>(ring: Ring, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Mode, Q)>,
    {
        let mut out = Self::zero(ring);
        for (mode, c) in terms {
            if mode.ring() != ring {
                return Err(AlgebraError::RingMismatch);
            }
            if mode == Mode::Sin(0) {
                continue;
            }
            out.add_term(mode, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, mode: Mode, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mode).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mode);
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mode, &Q)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mode: Mode) -> Q {
        self.terms.get(&mode).cloned().unwrap_or_else(Q::zero)
    }

    /// Constant coefficient (the `cos 0` or `s⁰` entry).
    pub fn constant_term(&self) -> Q {
        match self.ring {
            Ring::CircleTrig => self.coeff(Mode::Cos(0)),
            Ring::IntervalPoly => self.coeff(Mode::Pow(0)),
        }
    }

    /// Highest frequency or power present; 0 for the zero function.
    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(|m| m.order()).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(self.ring);
        }
        Self {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(self.ring);
        let half = qf(1, 2);
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                let xy = x * y;
                match (a, b) {
                    (Mode::Pow(i), Mode::Pow(j)) => out.add_term(Mode::Pow(i + j), xy),
                    (Mode::Cos(i), Mode::Cos(j)) => {
                        let c = &xy * &half;
                        out.add_term(Mode::Cos(i.abs_diff(j)), c.clone());
                        out.add_term(Mode::Cos(i + j), c);
                    }
                    (Mode::Sin(i), Mode::Sin(j)) => {
                        let c = &xy * &half;
                        out.add_term(Mode::Cos(i.abs_diff(j)), c.clone());
                        out.add_term(Mode::Cos(i + j), -c);
                    }
                    (Mode::Sin(i), Mode::Cos(j)) | (Mode::Cos(j), Mode::Sin(i)) => {
                        // sin i cos j = ½[sin(i+j) + sin(i−j)]
                        let c = &xy * &half;
                        out.add_term(Mode::Sin(i + j), c.clone());
                        match i.cmp(&j) {
                            std::cmp::Ordering::Greater => out.add_term(Mode::Sin(i - j), c),
                            std::cmp::Ordering::Less => out.add_term(Mode::Sin(j - i), -c),
                            std::cmp::Ordering::Equal => {}
                        }
                    }
                    _ => unreachable!("ring checked"),
                }
            }
        }
        Ok(out)
    }

    /// `d/ds`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.ring);
        for (&m, c) in &self.terms {
            match m {
                Mode::Cos(k) => out.add_term(Mode::Sin(k), -(c * q(k as i64))),
                Mode::Sin(k) => out.add_term(Mode::Cos(k), c * q(k as i64)),
                Mode::Pow(0) => {}
                Mode::Pow(p) => out.add_term(Mode::Pow(p - 1), c * q(p as i64)),
            }
        }
        out
    }

    /// `ĥ / 2π`, the constant Fourier coefficient, for circle coefficients.
    pub fn average(&self) -> Result<TwoPiMultiple, AlgebraError> {
        match self.ring {
            Ring::CircleTrig => Ok(TwoPiMultiple(self.constant_term())),
            Ring::IntervalPoly => Err(AlgebraError::AverageOnInterval),
        }
    }

    /// `(h(s), h'(s))` in floating point.
    pub fn eval2(&self, s: f64) -> (f64, f64) {
        let mut v = 0.0;
        let mut d = 0.0;
        for (&m, c) in &self.terms {
            let c = to_f64(c);
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

    pub fn value(&self, s: f64) -> f64 {
        self.eval2(s).0
    }
}

impl fmt::Display for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = format_rational(c);
            match m {
                Mode::Cos(0) | Mode::Pow(0) => write!(f, "{c}")?,
                Mode::Cos(k) => write!(f, "{c}·cos {k}s")?,
                Mode::Sin(k) => write!(f, "{c}·sin {k}s")?,
                Mode::Pow(1) => write!(f, "{c}·s")?,
                Mode::Pow(p) => write!(f, "{c}·s^{p}")?,
            }
        }
        Ok(())
    }
}

/// A rational multiple of `2π`, kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoPiMultiple(pub Q);

impl TwoPiMultiple {
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0) * std::f64::consts::TAU
    }
}

impl fmt::Display for TwoPiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·2π", format_rational(&self.0))
    }
}
