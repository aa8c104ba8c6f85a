//! Zero-error codes for the binary adder multiple-access channel.
//!
//! A zero-error code pair `(A, B)` has a distance distribution constrained by
//! van Tilborg's bound: the number of pairs at normalized distance `d` is at
//! most `2^{n (h(d) + min(d, 1 - d))}`. Feeding that cap into the rectangle
//! probability sum gives an upper bound on `P(A x B)`; whenever it falls below
//! every known lower bound for sets of the same sizes, the rate pair cannot
//! carry a zero-error code.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{binary_entropy, NormalizedDistance, Rate};
use crate::error::{Error, Result};
use crate::exponents::{
    avgdist_lower_exponent, morss_lower_exponent, BoundKind, Correlation, ExponentBound,
};
use crate::optimize::golden_max;

/// Number of intervals in the coarse `d` grid.
pub const D_GRID: usize = 10_000;
/// Default size of the `rho` grid, spread uniformly over `(0, 1)`.
pub const DEFAULT_RHO_POINTS: usize = 200;
/// An exponent gap smaller than this does not count as a contradiction.
pub const EXCLUSION_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: Rate,
    pub r2: Rate,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        Ok(Self {
            r1: Rate::new(r1)?,
            r2: Rate::new(r2)?,
        })
    }

    pub fn sum(&self) -> f64 {
        self.r1.get() + self.r2.get()
    }
}

/// Distance-only part of the cap, `h(d) + min(d, 1 - d)`.
fn distance_cap(d: f64) -> f64 {
    binary_entropy(d) + d.min(1.0 - d)
}

/// `min(R1 + R2, h(d) + min(d, 1 - d))`: per-symbol log of the largest number
/// of code pairs at normalized distance `d`.
pub fn van_tilborg_wd_cap(d: NormalizedDistance, pair: RatePair) -> f64 {
    pair.sum().min(distance_cap(d.get()))
}

fn objective(d: f64, cap: f64, sum: f64, rho: f64, log_ratio: f64) -> f64 {
    2.0 - (1.0 + rho).log2() - sum.min(cap) - d * log_ratio
}

/// Precomputed `d` grid for repeated exponent evaluations.
struct DistanceGrid {
    caps: Vec<f64>,
}

impl DistanceGrid {
    fn new() -> Self {
        Self {
            caps: (0..=D_GRID)
                .map(|i| distance_cap(i as f64 / D_GRID as f64))
                .collect(),
        }
    }

    fn minimize(&self, sum: f64, rho: Correlation) -> f64 {
        let (r, l) = (rho.get(), rho.log_ratio());
        let step = 1.0 / D_GRID as f64;
        let (best, best_val) = self
            .caps
            .iter()
            .enumerate()
            .map(|(i, &c)| (i, objective(i as f64 * step, c, sum, r, l)))
            .fold(
                (0, f64::INFINITY),
                |acc, x| if x.1 < acc.1 { x } else { acc },
            );
        let lo = best.saturating_sub(1) as f64 * step;
        let hi = (best + 1).min(D_GRID) as f64 * step;
        let refined = golden_max(|d| -objective(d, distance_cap(d), sum, r, l), lo, hi);
        best_val.min(-refined.value)
    }
}

/// `min_d [2 - log2(1+rho) - cap(d) - d log2((1-rho)/(1+rho))]`: every
/// zero-error code pair of these rates has `P(A x B) <= 2^{-n value}`.
pub fn zero_error_upper_exponent(pair: RatePair, rho: Correlation) -> ExponentBound {
    let value = DistanceGrid::new().minimize(pair.sum(), rho);
    ExponentBound::new(BoundKind::ZeroErrorUpper, value)
}

/// `rho` grid of `count` points spread uniformly over `(0, 1)`.
pub fn default_rho_grid(count: usize) -> Vec<f64> {
    (1..=count).map(|i| i as f64 / (count + 1) as f64).collect()
}

/// One row of the scan: for a fixed `R1`, the largest grid `R2` that is not
/// excluded (`None` when every grid value is).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub r1: f64,
    pub r2_max: Option<f64>,
    /// Grid `R2` values excluded for this `R1`.
    pub excluded: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub rate_grid: Vec<f64>,
    pub rho_grid: Vec<f64>,
    pub points: Vec<FrontierPoint>,
}

impl Frontier {
    /// Frontier value at the largest `R1` on the grid.
    pub fn last(&self) -> Option<&FrontierPoint> {
        self.points.last()
    }

    /// Whether `R2_max` never increases with `R1`, treating `None` as below
    /// every grid value.
    pub fn is_nonincreasing(&self) -> bool {
        let key = |p: &FrontierPoint| p.r2_max.unwrap_or(f64::NEG_INFINITY);
        self.points.windows(2).all(|w| key(&w[1]) <= key(&w[0]))
    }

    /// Whether exclusion at `(R1, R2)` implies exclusion at every larger grid
    /// `R1` for the same `R2`.
    pub fn exclusion_is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| {
            w[0].excluded
                .iter()
                .all(|r2| w[1].excluded.iter().any(|x| x == r2))
        })
    }
}

/// Excludes `(R1, R2)` when some `rho` on the grid makes the zero-error upper
/// bound on `P` smaller than the best lower bound for sets of those sizes.
/// The same grid serves for `R1` and `R2`.
pub fn feasibility_scan(rate_grid: &[f64], rho_grid: &[f64]) -> Result<Frontier> {
    if rate_grid.is_empty() || rho_grid.is_empty() {
        return Err(Error::Sweep("feasibility scan needs nonempty grids".into()));
    }
    let rates = rate_grid
        .iter()
        .map(|&r| {
            if r > 0.0 && r < 1.0 {
                Rate::new(r)
            } else {
                Err(Error::domain("rate", r, "(0, 1)"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let rhos = rho_grid
        .iter()
        .map(|&r| {
            if r > 0.0 && r < 1.0 {
                Correlation::new(r)
            } else {
                Err(Error::domain("rho", r, "(0, 1)"))
            }
        })
        .collect::<Result<Vec<_>>>()?;

    // the zero-error exponent depends on the rates only through R1 + R2
    let grid = DistanceGrid::new();
    let mut sums: Vec<u64> = rates
        .iter()
        .flat_map(|a| rates.iter().map(move |b| (a.get() + b.get()).to_bits()))
        .collect();
    sums.sort_unstable();
    sums.dedup();
    let upper: HashMap<u64, Vec<f64>> = sums
        .par_iter()
        .map(|&bits| {
            let s = f64::from_bits(bits);
            (
                bits,
                rhos.iter().map(|&rho| grid.minimize(s, rho)).collect(),
            )
        })
        .collect();

    let points = rates
        .par_iter()
        .map(|&r1| {
            let excluded: Vec<f64> = rates
                .iter()
                .filter(|&&r2| {
                    let zeu = &upper[&(r1.get() + r2.get()).to_bits()];
                    rhos.iter().zip(zeu).any(|(&rho, &z)| {
                        let lower = morss_lower_exponent(r1, r2, rho)
                            .value
                            .min(avgdist_lower_exponent(r1, r2, rho).value);
                        z > lower + EXCLUSION_MARGIN
                    })
                })
                .map(|r| r.get())
                .collect();
            let r2_max = rates
                .iter()
                .map(|r| r.get())
                .filter(|r| !excluded.contains(r))
                .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
            FrontierPoint {
                r1: r1.get(),
                r2_max,
                excluded,
            }
        })
        .collect();
    Ok(Frontier {
        rate_grid: rate_grid.to_vec(),
        rho_grid: rho_grid.to_vec(),
        points,
    })
}
