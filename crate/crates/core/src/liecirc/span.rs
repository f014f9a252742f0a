use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coeff::{CoeffFn, Mode, Ring};
use super::graded::{bracket, GradedElement};
use super::AlgebraError;
use crate::rational::Q;

/// Truncation box: y-degree `≤ max_degree` and frequency (or `s`-power)
/// `≤ max_order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub max_degree: u32,
    pub max_order: u32,
}

impl Window {
    pub fn new(max_degree: u32, max_order: u32) -> Self {
        Self {
            max_degree,
            max_order,
        }
    }

    pub fn holds(&self, degree: u32, mode: Mode) -> bool {
        degree <= self.max_degree && mode.order() <= self.max_order
    }

    pub fn contains(&self, e: &GradedElement) -> bool {
        e.is_zero() || (e.max_degree() <= self.max_degree && e.max_order() <= self.max_order)
    }

    pub fn doubled(&self) -> Self {
        Self::new(2 * self.max_degree, 2 * self.max_order)
    }
}

// Column key: out-of-window columns sort first so that rows pivoting inside
// the window live entirely inside it.
type Col = (bool, u32, Mode);
type Row = BTreeMap<Col, Q>;

/// Incremental reduced row echelon form over the rationals.
#[derive(Debug, Clone)]
pub struct RowReducer {
    ring: Ring,
    window: Window,
    rows: Vec<Row>,
    pivots: BTreeMap<Col, usize>,
}

impl RowReducer {
    pub fn new(ring: Ring, window: Window) -> Self {
        Self {
            ring,
            window,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    fn row_of(&self, e: &GradedElement) -> Row {
        e.coordinates()
            .map(|((k, m), c)| ((self.window.holds(k, m), k, m), c.clone()))
            .collect()
    }

    fn reduce(&self, mut v: Row) -> Row {
        let hits: Vec<(Col, usize)> = v
            .keys()
            .filter_map(|c| self.pivots.get(c).map(|&r| (*c, r)))
            .collect();
        for (col, r) in hits {
            let factor = match v.get(&col) {
                Some(f) => f.clone(),
                None => continue,
            };
            for (c, x) in &self.rows[r] {
                let slot = v.entry(*c).or_insert_with(Q::zero);
                *slot -= &factor * x;
                if slot.is_zero() {
                    v.remove(c);
                }
            }
        }
        v
    }

    /// Adds `e` to the span; returns whether the rank grew.
    pub fn insert(&mut self, e: &GradedElement) -> bool {
        let v = self.reduce(self.row_of(e));
        let Some((&pivot, lead)) = v.iter().next() else {
            return false;
        };
        let inv = Q::one() / lead;
        let v: Row = v.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        for row in self.rows.iter_mut() {
            if let Some(f) = row.get(&pivot).cloned() {
                for (c, x) in &v {
                    let slot = row.entry(*c).or_insert_with(Q::zero);
                    *slot -= &f * x;
                    if slot.is_zero() {
                        row.remove(c);
                    }
                }
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn contains(&self, e: &GradedElement) -> bool {
        self.reduce(self.row_of(e)).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduced basis of the span's intersection with the window.
    pub fn window_basis(&self) -> Vec<GradedElement> {
        let mut rows: Vec<&Row> = self
            .rows
            .iter()
            .filter(|r| r.keys().next().is_some_and(|c| c.0))
            .collect();
        rows.sort_by_key(|r| *r.keys().next().unwrap());
        rows.into_iter().map(|r| self.to_element(r)).collect()
    }

    fn to_element(&self, r: &Row) -> GradedElement {
        let mut parts: BTreeMap<u32, Vec<(Mode, Q)>> = BTreeMap::new();
        for (&(_, k, m), c) in r {
            parts.entry(k).or_default().push((m, c.clone()));
        }
        GradedElement::from_parts(
            self.ring,
            parts
                .into_iter()
                .map(|(k, t)| (k, CoeffFn::from_terms(self.ring, t).unwrap())),
        )
        .unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub level: u32,
    pub brackets: usize,
    pub new_elements: usize,
    pub window_dimension: usize,
}

#[derive(Debug, Clone)]
pub struct SpanReport {
    pub ring: Ring,
    pub window: Window,
    pub cap: Window,
    /// Reduced basis of the generated span inside the window.
    pub basis: Vec<GradedElement>,
    pub dimension: usize,
    /// Rank of everything kept, inside or outside the window.
    pub total_rank: usize,
    /// Every independent element accepted, in order of discovery.
    pub produced: Vec<GradedElement>,
    pub levels: Vec<LevelStats>,
    /// Set when a sweep produced nothing new within the cap.
    pub saturated: bool,
    /// Brackets discarded because they left the cap.
    pub dropped: usize,
}

/// Span of the generators and their right-normed brackets
/// `[g₁, [g₂, … [g_{m−1}, g_m]]]` up to `depth` nested brackets.
///
/// Elements outside `window` but inside `cap` stay in play so that later
/// brackets can land back in the window; anything beyond `cap` is dropped.
/// Candidates at each level are bracketed in parallel and merged in order.
pub fn closure_span(
    generators: &[GradedElement],
    depth: u32,
    window: Window,
    cap: Window,
) -> Result<SpanReport, AlgebraError> {
    let Some(first) = generators.first() else {
        return Err(AlgebraError::Invalid("no generators".into()));
    };
    let ring = first.ring();
    for g in generators {
        if g.ring() != ring {
            return Err(AlgebraError::RingMismatch);
        }
        if !window.contains(g) {
            return Err(AlgebraError::WindowTooSmall(format!(
                "generator {g} exceeds degree {} / order {}",
                window.max_degree, window.max_order
            )));
        }
    }
    let mut reducer = RowReducer::new(ring, window);
    let mut produced = Vec::new();
    let mut gens = Vec::new();
    for g in generators {
        if reducer.insert(g) {
            gens.push(g.clone());
            produced.push(g.clone());
        }
    }
    let mut frontier = gens.clone();
    let mut levels = Vec::new();
    let mut dropped = 0;
    let mut saturated = false;
    for level in 1..=depth {
        let candidates: Vec<Result<GradedElement, AlgebraError>> = frontier
            .par_iter()
            .flat_map_iter(|x| gens.iter().map(move |g| bracket(g, x)))
            .collect();
        let mut fresh = Vec::new();
        let count = candidates.len();
        for c in candidates {
            let c = c?;
            if c.is_zero() {
                continue;
            }
            if !cap.contains(&c) {
                dropped += 1;
                continue;
            }
            if reducer.insert(&c) {
                fresh.push(c);
            }
        }
        levels.push(LevelStats {
            level,
            brackets: count,
            new_elements: fresh.len(),
            window_dimension: reducer.window_basis().len(),
        });
        produced.extend(fresh.iter().cloned());
        if fresh.is_empty() {
            saturated = true;
            break;
        }
        frontier = fresh;
    }
    let basis = reducer.window_basis();
    Ok(SpanReport {
        ring,
        window,
        cap,
        dimension: basis.len(),
        basis,
        total_rank: reducer.rank(),
        produced,
        levels,
        saturated,
        dropped,
    })
}
