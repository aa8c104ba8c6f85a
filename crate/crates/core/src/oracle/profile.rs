use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::bits::CubeSet;
use crate::error::{Error, Result};
use crate::logspace::log2_biguint;

/// Default cap on the number of `(a, b)` pairs an enumeration may visit.
pub const DEFAULT_PAIR_BUDGET: u128 = 100_000_000;

/// Exact pair counts `N_k = |{(a, b) in A x B : d(a, b) = k}|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    n: usize,
    counts: Vec<BigUint>,
    size_a: BigUint,
    size_b: BigUint,
}

impl DistanceProfile {
    /// Checks `Σ N_k = |A| |B|` before accepting the counts.
    pub fn new(n: usize, counts: Vec<BigUint>, size_a: BigUint, size_b: BigUint) -> Result<Self> {
        if counts.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                left: n + 1,
                right: counts.len(),
            });
        }
        let total: BigUint = counts.iter().sum();
        if total != &size_a * &size_b {
            return Err(Error::Sweep(format!(
                "profile counts sum to {total}, expected {}",
                &size_a * &size_b
            )));
        }
        Ok(Self {
            n,
            counts,
            size_a,
            size_b,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, k: usize) -> &BigUint {
        &self.counts[k]
    }

    pub fn size_a(&self) -> &BigUint {
        &self.size_a
    }

    pub fn size_b(&self) -> &BigUint {
        &self.size_b
    }

    /// `W_{k/n} = (1/n) log2 N_k`, `-inf` where the count is zero.
    pub fn w(&self, k: usize) -> f64 {
        log2_biguint(&self.counts[k]) / self.n as f64
    }

    /// Mean pair distance divided by `n`.
    pub fn mean_normalized_distance(&self) -> f64 {
        let weighted: BigUint = self
            .counts
            .iter()
            .enumerate()
            .map(|(k, c)| c * BigUint::from(k))
            .sum();
        let pairs = &self.size_a * &self.size_b;
        // ratio of two big integers, computed in the log domain to avoid overflow
        let ratio = if weighted.is_zero() {
            0.0
        } else {
            (log2_biguint(&weighted) - log2_biguint(&pairs)).exp2()
        };
        ratio / self.n as f64
    }

    /// Profile of `(A, 1^n + B)`: `N'_k = N_{n-k}`.
    pub fn reversed(&self) -> Self {
        let mut counts = self.counts.clone();
        counts.reverse();
        Self {
            n: self.n,
            counts,
            size_a: self.size_a.clone(),
            size_b: self.size_b.clone(),
        }
    }
}

/// Enumerates every ordered pair with the default budget.
pub fn pair_distance_profile(a: &CubeSet, b: &CubeSet) -> Result<DistanceProfile> {
    pair_distance_profile_with_budget(a, b, DEFAULT_PAIR_BUDGET)
}

pub fn pair_distance_profile_with_budget(
    a: &CubeSet,
    b: &CubeSet,
    budget: u128,
) -> Result<DistanceProfile> {
    let n = check_pair(a, b, budget)?;
    let counts = a
        .members()
        .par_chunks(64)
        .map(|chunk| {
            let mut local = vec![0u64; n + 1];
            for x in chunk {
                for y in b.members() {
                    local[x.distance(y)] += 1;
                }
            }
            local
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut acc, part| {
                for (s, p) in acc.iter_mut().zip(part) {
                    *s += p;
                }
                acc
            },
        );
    DistanceProfile::new(
        n,
        counts.into_iter().map(BigUint::from).collect(),
        BigUint::from(a.len()),
        BigUint::from(b.len()),
    )
}

pub(crate) fn check_pair(a: &CubeSet, b: &CubeSet, budget: u128) -> Result<usize> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let needed = a.len() as u128 * b.len() as u128;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(a.dim())
}

/// Row `C(m, 0), ..., C(m, m)` in exact arithmetic.
fn binomial_row(m: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(m + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for r in 0..m {
        c = c * BigUint::from(m - r) / BigUint::from(r + 1);
        row.push(c.clone());
    }
    row
}

/// `C(n, k)` exactly.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for r in 0..k {
        c = c * BigUint::from(n - r) / BigUint::from(r + 1);
    }
    c
}

/// Closed-form profile of two concentric spheres `S_i`, `S_j` with `i <= j`:
/// `N_k = C(n,i) C(i, (j+i-k)/2) C(n-i, (j-i+k)/2)`, zero when the parity of
/// `j - i + k` is odd or a lower index leaves its range.
pub fn sphere_distance_profile(n: usize, i: usize, j: usize) -> Result<DistanceProfile> {
    if i > j {
        return Err(Error::RadiiOrder { i, j });
    }
    if j > n {
        return Err(Error::domain("sphere radius", j as f64, "0 <= j <= n"));
    }
    let c_ni = binomial(n, i);
    let row_i = binomial_row(i);
    let row_rest = binomial_row(n - i);
    let counts = (0..=n)
        .map(|k| {
            let (sum, diff) = (i + j, j as i64 - i as i64 + k as i64);
            if k > sum || (sum - k) % 2 != 0 || diff < 0 {
                return BigUint::zero();
            }
            let m1 = (sum - k) / 2;
            let m2 = (diff / 2) as usize;
            if m1 > i || m2 > n - i {
                return BigUint::zero();
            }
            &c_ni * &row_i[m1] * &row_rest[m2]
        })
        .collect();
    DistanceProfile::new(n, counts, c_ni, binomial(n, j))
}

/// Exact pair-count mean distance for small profiles, as `f64`.
pub fn mean_distance_exact(profile: &DistanceProfile) -> Option<f64> {
    let weighted: BigUint = profile
        .counts()
        .iter()
        .enumerate()
        .map(|(k, c)| c * BigUint::from(k))
        .sum();
    let pairs = profile.size_a() * profile.size_b();
    Some(weighted.to_f64()? / pairs.to_f64()?)
}
