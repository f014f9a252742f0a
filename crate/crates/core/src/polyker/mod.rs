//! Constant-coefficient polynomial operators on `𝒫^k ⊗ 𝕃`: multiplication
//! `G⁺_k(y^m ⊗ s_j) = y_j y^m`, differentiation `g⁻_k(y^m ⊗ s_j) = ∂y^m/∂y_j`,
//! the kernel basis `Q_{m,i,j} = y^m (y_i ⊗ s_j − y_j ⊗ s_i)` of `G⁺_k`, and
//! averages over the unit sphere.
//!
//! Variable and coordinate indices are 0-based.

mod linalg;

pub use linalg::rank;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("need N ≥ 2 variables, got {0}")]
    TooFewVariables(usize),
    #[error("need degree k ≥ 1, got {0}")]
    DegreeZero(u32),
    #[error("exponent vector {0:?} does not match N = {1}, degree {2}")]
    Shape(Vec<u32>, usize, u32),
}

pub type Exponent = Vec<u32>;

/// Homogeneous polynomial of degree `k` in `N` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomoPoly {
    n: usize,
    degree: u32,
    terms: BTreeMap<Exponent, Q>,
}

impl HomoPoly {
    pub fn zero(n: usize, degree: u32) -> Self {
        Self {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(m: Exponent, c: Q) -> Self {
        let degree = m.iter().sum();
        let mut p = Self::zero(m.len(), degree);
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I>(n: usize, degree: u32, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponent, Q)>,
    {
        let mut p = Self::zero(n, degree);
        for (m, c) in terms {
            if m.len() != n || m.iter().sum::<u32>() != degree {
                return Err(PolyError::Shape(m, n, degree));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Exponent, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Q> {
        &self.terms
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                crate::rational::to_f64(c)
                    * m.iter().zip(y).map(|(&e, &v)| v.powi(e as i32)).product::<f64>()
            })
            .sum()
    }
}

impl fmt::Display for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", crate::rational::format_rational(c))?;
            for (v, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·y{}", v + 1)?,
                    _ => write!(f, "·y{}^{e}", v + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// `Σ c · y^m ⊗ s_j` with `|m| = k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyTensor {
    n: usize,
    degree: u32,
    terms: BTreeMap<(Exponent, usize), Q>,
}

impl PolyTensor {
    pub fn zero(n: usize, degree: u32) -> Self {
        Self {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `p ⊗ s_j`.
    pub fn tensor(p: &HomoPoly, j: usize) -> Self {
        let mut t = Self::zero(p.n, p.degree);
        for (m, c) in &p.terms {
            t.add_term(m.clone(), j, c.clone());
        }
        t
    }

    fn add_term(&mut self, m: Exponent, j: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (m, j);
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((m, j), c) in &other.terms {
            out.add_term(m.clone(), *j, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for ((m, j), x) in &self.terms {
            out.add_term(m.clone(), *j, x * c);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<(Exponent, usize), Q> {
        &self.terms
    }
}

/// `G⁺_k`: `y^m ⊗ s_j ↦ y_j y^m`.
pub fn gplus(t: &PolyTensor) -> HomoPoly {
    let mut out = HomoPoly::zero(t.n, t.degree + 1);
    for ((m, j), c) in &t.terms {
        let mut e = m.clone();
        e[*j] += 1;
        out.add_term(e, c.clone());
    }
    out
}

/// `g⁻_k`: `y^m ⊗ s_j ↦ ∂y^m/∂y_j`.
pub fn gminus(t: &PolyTensor) -> Result<HomoPoly, PolyError> {
    if t.degree == 0 {
        return Err(PolyError::DegreeZero(0));
    }
    let mut out = HomoPoly::zero(t.n, t.degree - 1);
    for ((m, j), c) in &t.terms {
        if m[*j] == 0 {
            continue;
        }
        let mut e = m.clone();
        e[*j] -= 1;
        out.add_term(e, c * q(m[*j] as i64));
    }
    Ok(out)
}

/// All exponent vectors of length `n` summing to `k`, in lexicographic
/// order.
pub fn exponents(n: usize, k: u32) -> Vec<Exponent> {
    fn rec(n: usize, k: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == n {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// 1-based index of the last variable present in `m`, 0 for `m = 0`.
pub fn max_index(m: &[u32]) -> usize {
    m.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelElement {
    pub m: Exponent,
    /// 0-based, `i < j`.
    pub i: usize,
    pub j: usize,
    pub tensor: PolyTensor,
}

/// `Q_{m,i,j}` for `|m| = k−1`, `i < j` and `j ≥ max ind(m)` (1-based).
pub fn kernel_basis(n: usize, k: u32) -> Result<Vec<KernelElement>, PolyError> {
    if n < 2 {
        return Err(PolyError::TooFewVariables(n));
    }
    if k == 0 {
        return Err(PolyError::DegreeZero(k));
    }
    let mut out = Vec::new();
    for m in exponents(n, k - 1) {
        let top = max_index(&m);
        for j in 0..n {
            if j + 1 < top {
                continue;
            }
            for i in 0..j {
                let mut a = m.clone();
                a[i] += 1;
                let mut b = m.clone();
                b[j] += 1;
                let mut t = PolyTensor::zero(n, k);
                t.add_term(a, j, Q::one());
                t.add_term(b, i, -Q::one());
                out.push(KernelElement {
                    m: m.clone(),
                    i,
                    j,
                    tensor: t,
                });
            }
        }
    }
    Ok(out)
}

fn double_factorial_odd(e: u32) -> BigInt {
    // (e−1)!! for even e
    let mut acc = BigInt::one();
    let mut x = e as i64 - 1;
    while x > 1 {
        acc *= x;
        x -= 2;
    }
    acc
}

/// Exact mean of `p` over the unit sphere `S^{N−1}`:
/// `Π (m_i − 1)!! / Π_{j<|m|/2} (N + 2j)` on even monomials, zero otherwise.
pub fn sphere_average(p: &HomoPoly) -> Q {
    let mut total = Q::zero();
    for (m, c) in &p.terms {
        if m.iter().any(|e| e % 2 == 1) {
            continue;
        }
        let num: BigInt = m.iter().map(|&e| double_factorial_odd(e)).product();
        let half = m.iter().sum::<u32>() / 2;
        let den: BigInt = (0..half).map(|j| BigInt::from(p.n + 2 * j as usize)).product();
        total += c * Q::new(num, den);
    }
    total
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim 𝒫^k` in `n` variables.
pub fn dim_homogeneous(n: usize, k: u32) -> usize {
    binomial(n as u64 + k as u64 - 1, k as u64) as usize
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageRankReport {
    pub n: usize,
    pub k: u32,
    pub kernel_size: usize,
    pub kernel_rank: usize,
    /// `N·dim 𝒫^k − dim 𝒫^{k+1}`, the kernel dimension of a surjective `G⁺_k`.
    pub kernel_dimension: usize,
    pub annihilated: bool,
    pub images_zero_average: bool,
    pub image_rank: usize,
    pub dim_p: usize,
    pub dim_p0: usize,
    pub equal: bool,
    /// `image = 𝒫^{k−1}` exactly when `k` is even.
    pub full_iff_even: bool,
    /// Kernel size is below `(2N)^{k+1}`.
    pub size_bound: bool,
    pub pass: bool,
}

pub fn image_rank_check(n: usize, k: u32) -> Result<ImageRankReport, PolyError> {
    let basis = kernel_basis(n, k)?;
    let annihilated = basis.iter().all(|q| gplus(&q.tensor).is_zero());
    let kernel_rank = rank(&basis.iter().map(|q| q.tensor.terms.clone()).collect::<Vec<_>>());
    let images = basis
        .iter()
        .map(|q| gminus(&q.tensor))
        .collect::<Result<Vec<_>, _>>()?;
    let images_zero_average = images.iter().all(|p| sphere_average(p).is_zero());
    let image_rank = rank(&images.iter().map(|p| p.terms.clone()).collect::<Vec<_>>());
    let dim_p = dim_homogeneous(n, k - 1);
    // the average functional on 𝒫^{k−1} has rank 1 iff some monomial has
    // nonzero mean
    let functional_rank = exponents(n, k - 1)
        .into_iter()
        .any(|m| !sphere_average(&HomoPoly::monomial(m, Q::one())).is_zero()) as usize;
    let dim_p0 = dim_p - functional_rank;
    let equal = image_rank == dim_p0;
    let full_iff_even = (image_rank == dim_p) == (k % 2 == 0);
    let kernel_dimension = n * dim_homogeneous(n, k) - dim_homogeneous(n, k + 1);
    let size_bound = (basis.len() as f64) < ((2 * n) as f64).powi(k as i32 + 1);
    let pass = annihilated
        && kernel_rank == basis.len()
        && images_zero_average
        && equal
        && full_iff_even
        && size_bound;
    Ok(ImageRankReport {
        n,
        k,
        kernel_size: basis.len(),
        kernel_rank,
        kernel_dimension,
        annihilated,
        images_zero_average,
        image_rank,
        dim_p,
        dim_p0,
        equal,
        full_iff_even,
        size_bound,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn y(n: usize, exps: &[(usize, u32)]) -> Exponent {
        let mut m = vec![0; n];
        for &(i, e) in exps {
            m[i] = e;
        }
        m
    }

    #[test]
    fn gplus_examples() {
        let y1 = HomoPoly::monomial(y(2, &[(0, 1)]), q(1));
        let y2 = HomoPoly::monomial(y(2, &[(1, 1)]), q(1));
        let t = PolyTensor::tensor(&y1, 1).add(&PolyTensor::tensor(&y2, 0).scale(&q(-1)));
        assert!(gplus(&t).is_zero());
        assert_eq!(
            gplus(&PolyTensor::tensor(&y1, 0)),
            HomoPoly::monomial(y(2, &[(0, 2)]), q(1))
        );
        let y1sq = HomoPoly::monomial(y(2, &[(0, 2)]), q(1));
        assert_eq!(
            gplus(&PolyTensor::tensor(&y1sq, 1)),
            HomoPoly::monomial(y(2, &[(0, 2), (1, 1)]), q(1))
        );
    }

    #[test]
    fn gminus_examples() {
        let b = kernel_basis(2, 2).unwrap();
        let q10 = b.iter().find(|e| e.m == vec![1, 0]).unwrap();
        let q01 = b.iter().find(|e| e.m == vec![0, 1]).unwrap();
        assert_eq!(
            gminus(&q10.tensor).unwrap(),
            HomoPoly::monomial(y(2, &[(1, 1)]), q(-1))
        );
        assert_eq!(
            gminus(&q01.tensor).unwrap(),
            HomoPoly::monomial(y(2, &[(0, 1)]), q(1))
        );
        let y1sq = HomoPoly::monomial(y(2, &[(0, 2)]), q(1));
        assert_eq!(
            gminus(&PolyTensor::tensor(&y1sq, 0)).unwrap(),
            HomoPoly::monomial(y(2, &[(0, 1)]), q(2))
        );
        assert!(gminus(&PolyTensor::zero(2, 0)).is_err());
    }

    #[test]
    fn kernel_basis_sizes() {
        let b = kernel_basis(2, 1).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!((b[0].i, b[0].j), (0, 1));
        assert_eq!(kernel_basis(2, 2).unwrap().len(), 2);
        assert_eq!(kernel_basis(2, 3).unwrap().len(), 3);
        assert_eq!(kernel_basis(1, 2), Err(PolyError::TooFewVariables(1)));
        assert_eq!(kernel_basis(3, 0), Err(PolyError::DegreeZero(0)));
        for n in 2..=5 {
            for k in 1..=5 {
                let r = image_rank_check(n, k).unwrap();
                assert_eq!(r.kernel_size, r.kernel_dimension, "N={n} k={k}");
            }
        }
    }

    #[test]
    fn averages() {
        assert_eq!(sphere_average(&HomoPoly::monomial(vec![2, 0], q(1))), qf(1, 2));
        assert_eq!(sphere_average(&HomoPoly::monomial(vec![2, 2], q(1))), qf(1, 8));
        assert_eq!(sphere_average(&HomoPoly::monomial(vec![3, 0], q(1))), q(0));
        assert_eq!(sphere_average(&HomoPoly::monomial(vec![1, 1, 1], q(5))), q(0));
        // |y|² = 1 on the sphere
        let r2 = HomoPoly::from_terms(3, 2, [(vec![2, 0, 0], q(1)), (vec![0, 2, 0], q(1)), (vec![0, 0, 2], q(1))]).unwrap();
        assert_eq!(sphere_average(&r2), q(1));
        assert_eq!(sphere_average(&HomoPoly::monomial(vec![4, 0, 0, 0], q(1))), qf(3, 24));
    }

    #[test]
    fn image_rank_examples() {
        let r = image_rank_check(2, 2).unwrap();
        assert_eq!((r.kernel_size, r.image_rank, r.dim_p0, r.dim_p), (2, 2, 2, 2));
        let r = image_rank_check(2, 3).unwrap();
        assert_eq!((r.image_rank, r.dim_p0, r.dim_p), (2, 2, 3));
        let r = image_rank_check(3, 2).unwrap();
        assert_eq!((r.image_rank, r.dim_p0, r.dim_p), (3, 3, 3));
        for n in 2..=4 {
            for k in 1..=5 {
                assert!(image_rank_check(n, k).unwrap().pass, "N={n} k={k}");
            }
        }
    }

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(exponents(3, 0), vec![vec![0, 0, 0]]);
        for n in 1..5 {
            for k in 0..5 {
                assert_eq!(exponents(n, k).len(), dim_homogeneous(n, k));
            }
        }
        assert_eq!(max_index(&[0, 0]), 0);
        assert_eq!(max_index(&[1, 0, 2, 0]), 3);
    }
}
