use num_traits::{One, Zero};
use serde::Serialize;

use super::coeff::{CoeffFn, Ring, TwoPiMultiple};
use super::graded::{bracket, GradedElement};
use super::AlgebraError;
use crate::rational::{format_rational, q, Q};

/// `ĥ / 2π` of a circle coefficient, exact.
pub fn average(h: &CoeffFn) -> Result<TwoPiMultiple, AlgebraError> {
    h.average()
}

/// Both sides of `(d+k−2) ĥ_{d+k−1} = (d+k) ĥ_{d+k+1}` for
/// `{H_{d,f}, H_{k,g}}`, with averages in units of `2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct RapavCheck {
    pub h_low: CoeffFn,
    pub h_high: CoeffFn,
    pub lhs: TwoPiMultiple,
    pub rhs: TwoPiMultiple,
    pub equal: bool,
    /// Whether `h_low`, `h_high` agree with the bracket's graded parts.
    pub matches_bracket: bool,
}

pub fn rapav_check(d: u32, k: u32, f: &CoeffFn, g: &CoeffFn) -> Result<RapavCheck, AlgebraError> {
    if f.ring() != Ring::CircleTrig || g.ring() != Ring::CircleTrig {
        return Err(AlgebraError::AverageOnInterval);
    }
    let (di, ki) = (d as i64, k as i64);
    let fdg = f.mul(&g.derivative())?;
    let d_fg = f.mul(g)?.derivative();
    // h_{d+k∓1} written through f g' and (f g)'
    let h_low = fdg.scale(&q(di + ki)).sub(&d_fg.scale(&q(ki)))?;
    let h_high = fdg.scale(&q(di + ki - 2)).sub(&d_fg.scale(&q(ki - 1)))?;
    let lhs = TwoPiMultiple(h_low.average()?.0 * q(di + ki - 2));
    let rhs = TwoPiMultiple(h_high.average()?.0 * q(di + ki));
    let b = bracket(
        &GradedElement::term(d, f.clone()),
        &GradedElement::term(k, g.clone()),
    )?;
    let low_ok = if d + k >= 1 {
        b.project(d + k - 1) == h_low
    } else {
        h_low.is_zero()
    };
    let matches_bracket = low_ok && b.project(d + k + 1) == h_high;
    Ok(RapavCheck {
        equal: lhs == rhs,
        h_low,
        h_high,
        lhs,
        rhs,
        matches_bracket,
    })
}

/// `R_j(y) = j y^{2j−1} + (j−1) y^{2j+1}` as a constant-coefficient element.
pub fn r_poly(j: u32) -> Result<GradedElement, AlgebraError> {
    if j < 2 {
        return Err(AlgebraError::Invalid(format!("R_j needs j ≥ 2, got {j}")));
    }
    GradedElement::from_parts(
        Ring::CircleTrig,
        [
            (2 * j - 1, CoeffFn::constant(Ring::CircleTrig, q(j as i64))),
            (2 * j + 1, CoeffFn::constant(Ring::CircleTrig, q(j as i64 - 1))),
        ],
    )
}

/// Constant parts of the odd degrees `2j+1 ≥ 3` and the functional
/// `Σ_j (−1)^j j a_j` they must annihilate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddConstraintReport {
    /// `a_j` for `j = 1, 2, …` as `p/q` strings.
    pub a: Vec<String>,
    pub constraint: String,
    pub member: bool,
    #[serde(skip)]
    pub a_exact: Vec<Q>,
    #[serde(skip)]
    pub constraint_exact: Q,
}

pub fn gglob_membership(e: &GradedElement) -> Result<OddConstraintReport, AlgebraError> {
    if e.ring() != Ring::CircleTrig {
        return Err(AlgebraError::RingMismatch);
    }
    let top = e.max_degree();
    let mut a = Vec::new();
    let mut j = 1;
    while 2 * j + 1 <= top {
        a.push(e.project(2 * j + 1).constant_term());
        j += 1;
    }
    let mut total = Q::zero();
    for (i, aj) in a.iter().enumerate() {
        let j = (i + 1) as i64;
        let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
        total += sign * q(j) * aj;
    }
    Ok(OddConstraintReport {
        a: a.iter().map(format_rational).collect(),
        constraint: format_rational(&total),
        member: total.is_zero(),
        a_exact: a,
        constraint_exact: total,
    })
}
