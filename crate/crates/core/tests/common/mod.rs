//! Independent oracles for the exact algebra.
//!
//! Elements are rewritten as numerators `P(s, y)` of `P / √(1+y²)`, with
//! trigonometric coefficients stored as complex exponentials `e^{ins}` and
//! polynomial coefficients as powers of `s`. The bracket comes from the
//! chain rule alone: with `∂/∂w = (1+y²)^{3/2} ∂/∂y`,
//! `{P/√(1+y²), Q/√(1+y²)} = [(1+y²)(P_y Q_s − P_s Q_y) − y(P Q_s − P_s Q)] / √(1+y²)`.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use thinfilm::liecirc::{CoeffFn, GradedElement, Mode, Ring};
use thinfilm::rational::{q, qf, Q};

/// Gaussian rational `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cx(pub Q, pub Q);

impl Cx {
    fn zero() -> Self {
        Cx(Q::zero(), Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn mul(&self, o: &Cx) -> Cx {
        Cx(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
    fn scale(&self, k: &Q) -> Cx {
        Cx(&self.0 * k, &self.1 * k)
    }
}

/// `Σ c · y^a · basis_b(s)` with `basis_b = e^{ibs}` (trig) or `s^b` (poly).
#[derive(Debug, Clone, PartialEq)]
pub struct Bivar {
    pub ring: Ring,
    pub terms: BTreeMap<(u32, i64), Cx>,
}

impl Bivar {
    pub fn zero(ring: Ring) -> Self {
        Self {
            ring,
            terms: BTreeMap::new(),
        }
    }

    fn push(&mut self, key: (u32, i64), c: Cx) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Cx::zero);
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Bivar) -> Bivar {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.push(*k, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Q) -> Bivar {
        let mut out = Bivar::zero(self.ring);
        for (key, c) in &self.terms {
            out.push(*key, c.scale(k));
        }
        out
    }

    pub fn sub(&self, o: &Bivar) -> Bivar {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &Bivar) -> Bivar {
        let mut out = Bivar::zero(self.ring);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                out.push((a1 + a2, b1 + b2), c1.mul(c2));
            }
        }
        out
    }

    pub fn d_s(&self) -> Bivar {
        let mut out = Bivar::zero(self.ring);
        for (&(a, b), c) in &self.terms {
            match self.ring {
                // d/ds e^{ibs} = i b e^{ibs}
                Ring::CircleTrig => out.push((a, b), Cx(-&c.1 * q(b), &c.0 * q(b))),
                Ring::IntervalPoly => {
                    if b > 0 {
                        out.push((a, b - 1), c.scale(&q(b)));
                    }
                }
            }
        }
        out
    }

    pub fn d_y(&self) -> Bivar {
        let mut out = Bivar::zero(self.ring);
        for (&(a, b), c) in &self.terms {
            if a > 0 {
                out.push((a - 1, b), c.scale(&q(a as i64)));
            }
        }
        out
    }

    fn y_poly(ring: Ring, coeffs: &[(u32, i64)]) -> Bivar {
        let mut out = Bivar::zero(ring);
        for &(a, c) in coeffs {
            out.push((a, 0), Cx(q(c), Q::zero()));
        }
        out
    }
}

pub fn to_bivar(e: &GradedElement) -> Bivar {
    let ring = e.ring();
    let mut out = Bivar::zero(ring);
    let half = qf(1, 2);
    for (k, h) in e.parts() {
        for (m, c) in h.terms() {
            match m {
                Mode::Cos(0) => out.push((k, 0), Cx(c.clone(), Q::zero())),
                // cos bs = (e^{ibs} + e^{−ibs}) / 2
                Mode::Cos(b) => {
                    out.push((k, b as i64), Cx(c * &half, Q::zero()));
                    out.push((k, -(b as i64)), Cx(c * &half, Q::zero()));
                }
                // sin bs = (e^{ibs} − e^{−ibs}) / 2i
                Mode::Sin(b) => {
                    out.push((k, b as i64), Cx(Q::zero(), -(c * &half)));
                    out.push((k, -(b as i64)), Cx(Q::zero(), c * &half));
                }
                Mode::Pow(p) => out.push((k, p as i64), Cx(c.clone(), Q::zero())),
            }
        }
    }
    out
}

/// Converts back, asserting the imaginary parts cancel.
pub fn from_bivar(b: &Bivar) -> GradedElement {
    let mut parts: BTreeMap<u32, Vec<(Mode, Q)>> = BTreeMap::new();
    match b.ring {
        Ring::CircleTrig => {
            for (&(a, n), c) in &b.terms {
                if n < 0 {
                    continue;
                }
                let other = b.terms.get(&(a, -n)).cloned().unwrap_or_else(Cx::zero);
                if n == 0 {
                    assert!(c.1.is_zero(), "imaginary constant term");
                    parts.entry(a).or_default().push((Mode::Cos(0), c.0.clone()));
                    continue;
                }
                // c e^{ins} + d e^{−ins} = (c+d) cos ns + i(c−d) sin ns
                let sum = c.add(&other);
                let diff = Cx(&c.0 - &other.0, &c.1 - &other.1);
                assert!(sum.1.is_zero() && diff.0.is_zero(), "non-real coefficient");
                parts.entry(a).or_default().push((Mode::Cos(n as u32), sum.0));
                parts.entry(a).or_default().push((Mode::Sin(n as u32), -diff.1));
            }
            for &(a, n) in b.terms.keys() {
                if n < 0 {
                    assert!(b.terms.contains_key(&(a, -n)), "unpaired negative frequency");
                }
            }
        }
        Ring::IntervalPoly => {
            for (&(a, n), c) in &b.terms {
                assert!(c.1.is_zero());
                parts.entry(a).or_default().push((Mode::Pow(n as u32), c.0.clone()));
            }
        }
    }
    GradedElement::from_parts(
        b.ring,
        parts
            .into_iter()
            .map(|(k, t)| (k, CoeffFn::from_terms(b.ring, t).unwrap())),
    )
    .unwrap()
}

pub fn oracle_bracket_bivar(p: &Bivar, r: &Bivar) -> Bivar {
    let one_y2 = Bivar::y_poly(p.ring, &[(0, 1), (2, 1)]);
    let y = Bivar::y_poly(p.ring, &[(1, 1)]);
    let first = p.d_y().mul(&r.d_s()).sub(&p.d_s().mul(&r.d_y()));
    let second = p.mul(&r.d_s()).sub(&p.d_s().mul(r));
    one_y2.mul(&first).sub(&y.mul(&second))
}

pub fn oracle_bracket(a: &GradedElement, b: &GradedElement) -> GradedElement {
    from_bivar(&oracle_bracket_bivar(&to_bivar(a), &to_bivar(b)))
}

/// Rank of rational vectors by plain Gaussian elimination on dense rows.
pub fn dense_rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for j in c..cols {
                    let v = &f * &m[rank][j];
                    m[r][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// In-window dimension of the span of right-normed brackets of `gens` up to
/// `depth`, via `rank(all) − rank(out-of-window projection)`; brackets are
/// computed by the oracle without any truncation.
pub fn window_dimension_oracle(
    gens: &[GradedElement],
    depth: u32,
    max_degree: u32,
    max_order: u32,
) -> usize {
    let gb: Vec<Bivar> = gens.iter().map(to_bivar).collect();
    let mut all: Vec<Bivar> = gb.clone();
    let mut level = gb.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &level {
            for g in &gb {
                let b = oracle_bracket_bivar(g, x);
                if !b.terms.is_empty() {
                    next.push(b);
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    let elems: Vec<GradedElement> = all.iter().map(from_bivar).collect();
    let mut keys: BTreeMap<(u32, Mode), usize> = BTreeMap::new();
    for e in &elems {
        for (key, _) in e.coordinates() {
            let n = keys.len();
            keys.entry(key).or_insert(n);
        }
    }
    let inside = |k: u32, m: Mode| k <= max_degree && m.order() <= max_order;
    let dense = |e: &GradedElement, only_out: bool| {
        let mut row = vec![Q::zero(); keys.len()];
        for ((k, m), c) in e.coordinates() {
            if !only_out || !inside(k, m) {
                row[keys[&(k, m)]] = c.clone();
            }
        }
        row
    };
    let full: Vec<Vec<Q>> = elems.iter().map(|e| dense(e, false)).collect();
    let out: Vec<Vec<Q>> = elems.iter().map(|e| dense(e, true)).collect();
    dense_rank(&full) - dense_rank(&out)
}

pub fn random_trig<R: Rng>(rng: &mut R, max_freq: u32) -> CoeffFn {
    let mut terms = Vec::new();
    for f in 0..=max_freq {
        if rng.gen_bool(0.7) {
            terms.push((Mode::Cos(f), qf(rng.gen_range(-6..=6), rng.gen_range(1..=5))));
        }
        if f > 0 && rng.gen_bool(0.7) {
            terms.push((Mode::Sin(f), qf(rng.gen_range(-6..=6), rng.gen_range(1..=5))));
        }
    }
    CoeffFn::from_terms(Ring::CircleTrig, terms).unwrap()
}

pub fn random_element<R: Rng>(rng: &mut R, max_degree: u32, max_freq: u32) -> GradedElement {
    let mut parts = Vec::new();
    for k in 0..=max_degree {
        if rng.gen_bool(0.5) {
            parts.push((k, random_trig(rng, max_freq)));
        }
    }
    GradedElement::from_parts(Ring::CircleTrig, parts).unwrap()
}
