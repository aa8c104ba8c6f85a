use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::bits::CubeSet;
use super::profile::{check_pair, DistanceProfile, DEFAULT_PAIR_BUDGET};
use crate::error::{Error, Result};
use crate::exponents::Correlation;
use crate::logspace::LogSumExp2;

/// `log2` of a probability: `<= 0`, or `-inf` for probability zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogProb(#[serde(with = "crate::sentinel")] f64);

impl LogProb {
    /// Tiny positive values from rounding are clamped to zero.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value > 1e-9 {
            return Err(Error::domain("log-probability", value, "(-inf, 0]"));
        }
        Ok(Self(value.min(0.0)))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        self.0.exp2()
    }

    /// `-(1/n) log2 P`, the per-symbol exponent.
    pub fn exponent(self, n: usize) -> f64 {
        -self.0 / n as f64
    }
}

/// A correlation held as an exact rational, for bit-exact evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCorrelation(BigRational);

impl ExactCorrelation {
    pub fn new(rho: BigRational) -> Result<Self> {
        if rho.is_negative() || rho >= BigRational::one() {
            return Err(Error::domain(
                "rho",
                rho.to_f64().unwrap_or(f64::NAN),
                "[0, 1)",
            ));
        }
        Ok(Self(rho))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("rho denominator", 0.0, "nonzero"));
        }
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn get(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("finite rational")
    }

    /// `(q + p, q - p, q)` for `rho = p / q` in lowest terms.
    fn parts(&self) -> (BigInt, BigInt, BigInt) {
        let p = self.0.numer().clone();
        let q = self.0.denom().clone();
        (&q + &p, &q - &p, q)
    }
}

impl FromStr for ExactCorrelation {
    type Err = Error;

    /// Accepts `p/q` or a terminating decimal such as `0.375`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "an exact rational",
            input: s.into(),
        };
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Self::new(BigRational::new(p, q));
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        Self::new(BigRational::new(num, den))
    }
}

/// `log2 P(A x B)` from a distance profile, accumulated in the log domain:
/// `n (log2(1+rho) - 2) + log2 Σ_k N_k ((1-rho)/(1+rho))^k`.
pub fn rectangle_prob(profile: &DistanceProfile, rho: Correlation) -> LogProb {
    let r = rho.get();
    let n = profile.dim() as f64;
    let ratio = ((1.0 - r) / (1.0 + r)).log2();
    let lse: LogSumExp2 = profile
        .counts()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if c.is_zero() {
                f64::NEG_INFINITY
            } else {
                crate::logspace::log2_biguint(c) + k as f64 * ratio
            }
        })
        .collect();
    LogProb::new(n * ((1.0 + r).log2() - 2.0) + lse.value()).expect("probability <= 1")
}

/// Exact `P(A x B) = Σ_k N_k (1+rho)^{n-k} (1-rho)^k / 4^n`.
pub fn rectangle_prob_exact(profile: &DistanceProfile, rho: &ExactCorrelation) -> BigRational {
    let n = profile.dim();
    let (plus, minus, q) = rho.parts();
    let plus_pows = powers(&plus, n);
    let minus_pows = powers(&minus, n);
    let numer: BigInt = profile
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| BigInt::from(c.clone()) * &plus_pows[n - k] * &minus_pows[k])
        .sum();
    let denom = num_traits::pow(BigInt::from(4) * q, n);
    BigRational::new(numer, denom)
}

fn powers(base: &BigInt, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = BigInt::one();
    for _ in 0..=n {
        out.push(acc.clone());
        acc *= base;
    }
    out
}

/// Log of an exact probability; `-inf` for zero.
pub fn log2_rational(p: &BigRational) -> LogProb {
    if p.is_zero() {
        return LogProb(f64::NEG_INFINITY);
    }
    let num = crate::logspace::log2_biguint(p.numer().magnitude());
    let den = crate::logspace::log2_biguint(p.denom().magnitude());
    LogProb::new(num - den).expect("probability <= 1")
}

/// Double loop over `A x B`, each pair weighted coordinate by coordinate.
///
/// Shares nothing with the profile route beyond the final log-sum-exp.
pub fn rectangle_prob_direct(a: &CubeSet, b: &CubeSet, rho: Correlation) -> Result<LogProb> {
    rectangle_prob_direct_with_budget(a, b, rho, DEFAULT_PAIR_BUDGET)
}

pub fn rectangle_prob_direct_with_budget(
    a: &CubeSet,
    b: &CubeSet,
    rho: Correlation,
    budget: u128,
) -> Result<LogProb> {
    let n = check_pair(a, b, budget)?;
    let r = rho.get();
    let agree = ((1.0 + r) / 4.0).log2();
    let differ = ((1.0 - r) / 4.0).log2();
    let mut acc = LogSumExp2::new();
    for x in a.members() {
        for y in b.members() {
            let mut lw = 0.0;
            for j in 0..n {
                lw += if x.get(j) == y.get(j) { agree } else { differ };
            }
            acc.push(lw);
        }
    }
    LogProb::new(acc.value())
}

/// Exact double loop: each pair contributes `Π_j (q ± p) / (4q)^n`.
pub fn rectangle_prob_direct_exact(
    a: &CubeSet,
    b: &CubeSet,
    rho: &ExactCorrelation,
) -> Result<BigRational> {
    let n = check_pair(a, b, DEFAULT_PAIR_BUDGET)?;
    let (plus, minus, q) = rho.parts();
    let (plus_small, minus_small) = (plus.to_u128(), minus.to_u128());
    let mut total = BigUint::zero();
    let mut partial: u128 = 0;
    for x in a.members() {
        for y in b.members() {
            let weight = match (plus_small, minus_small) {
                (Some(pl), Some(mi)) => pair_weight_u128(x, y, n, pl, mi),
                _ => None,
            };
            match weight {
                Some(w) => match partial.checked_add(w) {
                    Some(s) => partial = s,
                    None => {
                        total += BigUint::from(partial);
                        partial = w;
                    }
                },
                None => {
                    let mut w = BigInt::one();
                    for j in 0..n {
                        w *= if x.get(j) == y.get(j) { &plus } else { &minus };
                    }
                    total += w.magnitude();
                }
            }
        }
    }
    total += BigUint::from(partial);
    let denom = num_traits::pow(BigInt::from(4) * q, n);
    Ok(BigRational::new(BigInt::from(total), denom))
}

fn pair_weight_u128(
    x: &super::bits::BitVector,
    y: &super::bits::BitVector,
    n: usize,
    plus: u128,
    minus: u128,
) -> Option<u128> {
    let mut w: u128 = 1;
    for j in 0..n {
        w = w.checked_mul(if x.get(j) == y.get(j) { plus } else { minus })?;
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::profile::{pair_distance_profile, sphere_distance_profile};

    fn rho(r: f64) -> Correlation {
        Correlation::new(r).unwrap()
    }

    #[test]
    fn singleton_pair() {
        let a = CubeSet::from_indices(2, [0]).unwrap();
        let p = pair_distance_profile(&a, &a).unwrap();
        assert!((rectangle_prob(&p, rho(0.5)).prob() - 0.140625).abs() < 1e-15);
        let half = ExactCorrelation::from_ratio(1, 2).unwrap();
        assert_eq!(
            rectangle_prob_exact(&p, &half),
            BigRational::new(9.into(), 64.into())
        );
    }

    #[test]
    fn weight_one_spheres() {
        let p = sphere_distance_profile(4, 1, 1).unwrap();
        let half = ExactCorrelation::from_ratio(1, 2).unwrap();
        assert_eq!(
            rectangle_prob_exact(&p, &half),
            BigRational::new(27.into(), 256.into())
        );
        assert!((rectangle_prob(&p, rho(0.5)).prob() - 0.105_468_75).abs() < 1e-15);
        let s = CubeSet::sphere(4, 1).unwrap();
        assert_eq!(
            rectangle_prob_direct_exact(&s, &s, &half).unwrap(),
            BigRational::new(27.into(), 256.into())
        );
        assert!(
            (rectangle_prob_direct(&s, &s, rho(0.5)).unwrap().prob() - 0.105_468_75).abs() < 1e-15
        );
    }

    #[test]
    fn full_cube_has_probability_one() {
        let a = CubeSet::full(5).unwrap();
        let p = pair_distance_profile(&a, &a).unwrap();
        for r in [0.0, 0.3, 0.9] {
            assert!(rectangle_prob(&p, rho(r)).get().abs() < 1e-14);
        }
        let q = ExactCorrelation::from_ratio(2, 7).unwrap();
        assert_eq!(rectangle_prob_exact(&p, &q), BigRational::one());
    }

    #[test]
    fn independence_and_diagonal_limits() {
        let a = CubeSet::from_indices(6, [1, 5, 9, 33]).unwrap();
        let b = CubeSet::from_indices(6, [0, 2, 60]).unwrap();
        let lp = rectangle_prob_direct(&a, &b, rho(0.0)).unwrap();
        assert!((lp.get() - ((12f64).log2() - 12.0)).abs() < 1e-12);
        let diag = rectangle_prob_direct(&a, &a, rho(1.0 - 1e-9)).unwrap();
        assert!((diag.get() - (4f64.log2() - 6.0)).abs() < 1e-6);
    }

    #[test]
    fn parse_exact_correlation() {
        assert_eq!(
            "0.375".parse::<ExactCorrelation>().unwrap(),
            ExactCorrelation::from_ratio(3, 8).unwrap()
        );
        assert_eq!(
            "2/6".parse::<ExactCorrelation>().unwrap(),
            ExactCorrelation::from_ratio(1, 3).unwrap()
        );
        assert!("1".parse::<ExactCorrelation>().is_err());
        assert!("x".parse::<ExactCorrelation>().is_err());
        assert!("1/0".parse::<ExactCorrelation>().is_err());
    }

    #[test]
    fn log_of_rationals() {
        let p = BigRational::new(27.into(), 256.into());
        assert!((log2_rational(&p).get() - (27.0f64 / 256.0).log2()).abs() < 1e-15);
        assert_eq!(log2_rational(&BigRational::zero()).get(), f64::NEG_INFINITY);
    }
}
