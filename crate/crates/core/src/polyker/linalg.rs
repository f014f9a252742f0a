use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

type IntRow<K> = BTreeMap<K, BigInt>;

fn to_integer_row<K: Ord + Clone>(v: &BTreeMap<K, Q>) -> IntRow<K> {
    let lcm = v
        .values()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut row: IntRow<K> = v
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (k.clone(), (x * Q::from_integer(lcm.clone())).to_integer()))
        .collect();
    normalize(&mut row);
    row
}

fn normalize<K>(row: &mut IntRow<K>) {
    let g = row.values().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.values_mut() {
            *x /= &g;
        }
    }
}

/// Rank of sparse rational vectors by fraction-free elimination: rows are
/// cleared to integers and kept primitive, so no fractions appear.
pub fn rank<K: Ord + Clone>(vectors: &[BTreeMap<K, Q>]) -> usize {
    let mut basis: Vec<IntRow<K>> = Vec::new();
    for v in vectors {
        let mut row = to_integer_row(v);
        for b in &basis {
            let (pk, pv) = b.iter().next().unwrap();
            let Some(x) = row.get(pk).cloned() else { continue };
            // row ← pv·row − x·b
            for r in row.values_mut() {
                *r *= pv;
            }
            for (k, y) in b {
                let slot = row.entry(k.clone()).or_insert_with(BigInt::zero);
                *slot -= &x * y;
            }
            row.retain(|_, v| !v.is_zero());
            normalize(&mut row);
        }
        if !row.is_empty() {
            // basis stays sorted by pivot, so one ascending sweep reduces a row
            let pivot = row.keys().next().unwrap().clone();
            let at = basis
                .iter()
                .position(|b| b.keys().next().unwrap() > &pivot)
                .unwrap_or(basis.len());
            if row.values().next().unwrap().is_negative() {
                for x in row.values_mut() {
                    *x = -x.clone();
                }
            }
            basis.insert(at, row);
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn v(entries: &[(u32, Q)]) -> BTreeMap<u32, Q> {
        entries.iter().cloned().collect()
    }

    #[test]
    fn small_ranks() {
        let a = v(&[(0, q(1)), (1, qf(1, 2))]);
        let b = v(&[(0, q(2)), (1, q(1))]);
        let c = v(&[(1, qf(3, 7)), (2, q(1))]);
        assert_eq!(rank(&[a.clone(), b.clone()]), 1);
        assert_eq!(rank(&[a.clone(), c.clone()]), 2);
        assert_eq!(rank(&[a, b, c, BTreeMap::new()]), 2);
        assert_eq!(rank::<u32>(&[]), 0);
    }
}
