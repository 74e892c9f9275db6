//! Counting functions: Young-subgroup cycle counts, contingency tables,
//! slope step functions, and the nabla twist exponent.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::{Int, Rat};

use super::partition::{partitions, Partition};

/// Number of permutations in the Young subgroup S_lambda with cycle type mu.
/// Computed as lambda! times the coefficient of p_mu in h_lambda.
pub fn young_cycle_count(lambda: &Partition, mu: &Partition) -> Result<Int> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch { left: lambda.size(), right: mu.size() });
    }
    // Expand h_lambda = prod_i h_{lambda_i} in the power sums; the coefficient
    // of p_nu in h_k is 1/z_nu.
    let mut acc: BTreeMap<Partition, Rat> = BTreeMap::new();
    acc.insert(Partition::empty(), Rat::one());
    for &part in lambda.parts() {
        let mut next: BTreeMap<Partition, Rat> = BTreeMap::new();
        for nu in partitions(part) {
            let w = Rat::one() / nu.zee_rat();
            for (key, c) in &acc {
                let merged = key.merge(&nu);
                let entry = next.entry(merged).or_insert_with(Rat::zero);
                *entry += c.clone() * w.clone();
            }
        }
        acc = next;
    }
    let coeff = acc.remove(mu).unwrap_or_else(Rat::zero);
    let count = coeff * Rat::from_integer(lambda.parts_factorial());
    if !count.is_integer() {
        return Err(Error::Internal("young_cycle_count not integral".into()));
    }
    Ok(count.to_integer())
}

/// Number of nonnegative-integer matrices with row sums lambda and column
/// sums mu.
pub fn contingency_count(lambda: &Partition, mu: &Partition) -> Result<Int> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch { left: lambda.size(), right: mu.size() });
    }
    if lambda.is_empty() {
        return Ok(Int::one());
    }
    fn rec(rows: &[usize], cols: &mut Vec<usize>) -> Int {
        if rows.is_empty() {
            return Int::one();
        }
        let target = rows[0];
        let rest = &rows[1..];
        // Distribute `target` over the columns.
        fn fill(idx: usize, left: usize, rest: &[usize], cols: &mut Vec<usize>) -> Int {
            if idx == cols.len() {
                return if left == 0 { rec(rest, cols) } else { Int::zero() };
            }
            let mut total = Int::zero();
            let max = left.min(cols[idx]);
            for take in 0..=max {
                cols[idx] -= take;
                total += fill(idx + 1, left - take, rest, cols);
                cols[idx] += take;
            }
            total
        }
        fill(0, target, rest, cols)
    }
    let mut cols = mu.parts().to_vec();
    Ok(rec(lambda.parts(), &mut cols))
}

/// sum_i lambda_i (lambda_i - 1) / 2, the t = 1 nabla twist exponent.
pub fn twist_exponent(lambda: &Partition) -> usize {
    lambda.twist_exponent()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlopeMode {
    Ceil,
    Floor,
}

/// S_{m/n}(i) = ceil(im/n) - ceil((i-1)m/n), or the floor variant.
pub fn slope_steps(m: usize, n: usize, i: usize, mode: SlopeMode) -> usize {
    assert!(i >= 1 && n >= 1);
    let f = |j: usize| -> usize {
        match mode {
            SlopeMode::Ceil => (j * m).div_ceil(n),
            SlopeMode::Floor => (j * m) / n,
        }
    };
    f(i) - f(i - 1)
}
