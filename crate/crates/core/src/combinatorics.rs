//! Eulerian numbers, the sharp constants `c_{k,n}` and their companions.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{pow, One, Zero};
use serde::Serialize;

use crate::compositions::binomial;
use crate::error::{invalid, Error, Result};
use crate::rational::{self, Rational};

const EULERIAN_TABLE_MAX: usize = 30;

fn eulerian_table() -> &'static Vec<Vec<u128>> {
    static TABLE: OnceLock<Vec<Vec<u128>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // row k holds A(k, 0..k-1); row 0 is a placeholder
        let mut rows: Vec<Vec<u128>> = vec![vec![1], vec![1]];
        for k in 2..=EULERIAN_TABLE_MAX {
            let prev = &rows[k - 1];
            let row = (0..k)
                .map(|l| {
                    let stay = if l < prev.len() { (l as u128 + 1) * prev[l] } else { 0 };
                    let rise = if l >= 1 { (k - l) as u128 * prev[l - 1] } else { 0 };
                    stay + rise
                })
                .collect();
            rows.push(row);
        }
        rows
    })
}

/// `A(k, l)`: permutations of `k` letters with exactly `l` descents.
pub fn eulerian(k: usize, l: usize) -> Result<u128> {
    if k == 0 || k > EULERIAN_TABLE_MAX {
        return Err(invalid(format!("eulerian: k = {k} outside 1..={EULERIAN_TABLE_MAX}")));
    }
    if l >= k {
        return Err(invalid(format!("eulerian: l = {l} outside 0..={}", k - 1)));
    }
    Ok(eulerian_table()[k][l])
}

fn big(x: u128) -> BigInt {
    BigInt::from(x)
}

fn ratio(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

/// Closed forms of the sharp constant in dimensions one to three.
pub fn constant_low_dim(k: usize, n: u64) -> Option<Rational> {
    let n = BigInt::from(n);
    let one = BigInt::one();
    match k {
        1 => Some(ratio(&n - &one, n)),
        2 => Some(ratio((BigInt::from(2) * &n - &one) * (&n - &one), BigInt::from(2) * &n * &n)),
        3 => Some(ratio((&n - &one) * (&n - &one), &n * &n)),
        _ => None,
    }
}

/// `n^{-k} Σ_{m=1}^{k} ((n - m)/n) C(n + k - m, k) A(k, m - 1)`.
pub fn constant_hypersimplex_sum(k: usize, n: u64) -> Result<Rational> {
    let nn = BigInt::from(n);
    let mut acc = Rational::zero();
    for m in 1..=k {
        let count = binomial(n + k as u64 - m as u64, k as u64);
        if count == 0 {
            continue;
        }
        let weight = ratio(BigInt::from(n as i128 - m as i128), nn.clone());
        acc += weight * Rational::from_integer(big(count) * big(eulerian(k, m - 1)?));
    }
    Ok(acc / Rational::from_integer(pow(nn, k)))
}

/// `(k + 1) n^{-(k+1)} (1^k + … + (n - 1)^k)`.
pub fn constant_power_sum(k: usize, n: u64) -> Rational {
    let sum = (1..n).fold(BigInt::zero(), |acc, j| acc + pow(BigInt::from(j), k));
    ratio(BigInt::from(k + 1) * sum, pow(BigInt::from(n), k + 1))
}

/// `1 - C(n, k) k^{k+1} / n^{k+1}`, defined for `n ≥ k + 1`. May be negative.
pub fn asymptotic_bound(k: usize, n: u64) -> Result<Rational> {
    if k == 0 {
        return Err(invalid("asymptotic bound needs k >= 1"));
    }
    if n < k as u64 + 1 {
        return Err(Error::OutOfDomain(format!("asymptotic bound needs n >= k + 1 (k = {k}, n = {n})")));
    }
    let num = big(binomial(n, k as u64)) * pow(BigInt::from(k), k + 1);
    Ok(rational::one() - ratio(num, pow(BigInt::from(n), k + 1)))
}

/// Every available form of `c_{k,n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantReport {
    pub k: usize,
    pub n: u64,
    /// Proven sharp form; only for `k ≤ 3`.
    #[serde(with = "rational::serde_text::option")]
    pub c_thm1: Option<Rational>,
    #[serde(with = "rational::serde_text")]
    pub c_conj_sum: Rational,
    #[serde(with = "rational::serde_text")]
    pub c_conj_power: Rational,
    /// Only for `n ≥ k + 1`.
    #[serde(with = "rational::serde_text::option")]
    pub asymptotic_lower: Option<Rational>,
}

impl ConstantReport {
    /// The constant to test against: the proven one when available.
    pub fn value(&self) -> &Rational {
        self.c_thm1.as_ref().unwrap_or(&self.c_conj_sum)
    }

    pub fn is_conjectural(&self) -> bool {
        self.c_thm1.is_none()
    }
}

pub fn constant_c(k: usize, n: u64) -> Result<ConstantReport> {
    if k == 0 || n == 0 {
        return Err(invalid("constant_c needs k >= 1 and n >= 1"));
    }
    let c_conj_sum = constant_hypersimplex_sum(k, n)?;
    let c_conj_power = constant_power_sum(k, n);
    assert_eq!(c_conj_sum, c_conj_power, "hypersimplex and power-sum forms disagree at k={k}, n={n}");
    let c_thm1 = constant_low_dim(k, n);
    if let Some(c) = &c_thm1 {
        assert_eq!(c, &c_conj_sum, "low-dimensional closed form disagrees at k={k}, n={n}");
    }
    let asymptotic_lower = if n > k as u64 { Some(asymptotic_bound(k, n)?) } else { None };
    if let Some(lower) = &asymptotic_lower {
        assert!(lower <= &c_conj_sum, "asymptotic bound exceeds c at k={k}, n={n}");
    }
    Ok(ConstantReport { k, n, c_thm1, c_conj_sum, c_conj_power, asymptotic_lower })
}

/// Checks `n^k = Σ_m C(n + k - m, k) A(k, m - 1)` exactly.
pub fn worpitzky_check(k: usize, n: u64) -> Result<bool> {
    if k == 0 || n == 0 {
        return Err(invalid("worpitzky_check needs k >= 1 and n >= 1"));
    }
    let mut sum = BigInt::zero();
    for m in 1..=k {
        sum += big(binomial(n + k as u64 - m as u64, k as u64)) * big(eulerian(k, m - 1)?);
    }
    Ok(sum == pow(BigInt::from(n), k))
}
