//! Seeded invariant suites, run by the command-line `verify` command and
//! reused by the acceptance tests.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adder_mac::{
    default_rho_grid, feasibility_scan, van_tilborg_wd_cap, zero_error_upper_exponent, RatePair,
};
use crate::entropy::{
    binary_entropy, binary_entropy_inv, g_func, log_binomial, log_binomial_lgamma, phi, star,
    v_func, NormalizedDistance, Rate,
};
use crate::error::{Error, Result};
use crate::exponents::{
    avgdist_lower_exponent, avgdist_threshold, hct_upper_exponent, morss_lower_exponent,
    sphere_exponent, thm1_expansion, thm2_expansion, CenterMode, Correlation, SpherePair,
};
use crate::hypercontractivity::{
    c_function, integrate_u_fixed, psi_bound, solve_q, solve_u, verify_hc_with,
};
use crate::oracle::{
    inner_product, noise_operator, pair_distance_profile, rectangle_prob,
    rectangle_prob_direct_exact, rectangle_prob_exact, sphere_distance_profile, CubeFunction,
    CubeSet, ExactCorrelation,
};
use crate::sweeps::finite_radius;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Entropy,
    Oracle,
    Exponents,
    Hc,
    Adder,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Entropy,
        Suite::Oracle,
        Suite::Exponents,
        Suite::Hc,
        Suite::Adder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Entropy => "entropy",
            Suite::Oracle => "oracle",
            Suite::Exponents => "exponents",
            Suite::Hc => "hc",
            Suite::Adder => "adder",
        }
    }

    /// Parses a suite name, with `all` selecting every suite.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "suite",
                name: s.into(),
            })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    /// Number of individual checks behind the verdict.
    pub checks: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

struct Recorder {
    suite: Suite,
    out: Vec<PropertyResult>,
}

impl Recorder {
    fn record(&mut self, name: &str, outcome: Result<(bool, usize, String)>) {
        let (passed, checks, detail) =
            outcome.unwrap_or_else(|e| (false, 0, format!("error: {e}")));
        self.out.push(PropertyResult {
            suite: self.suite,
            name: name.into(),
            passed,
            checks,
            detail,
        });
    }
}

/// Tally of a predicate over many cases, keeping the first counterexample.
struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn finish(self) -> Result<(bool, usize, String)> {
        let detail = match &self.failure {
            None => format!("{} checks", self.checks),
            Some(f) => format!("first failure: {f}"),
        };
        Ok((self.failure.is_none(), self.checks, detail))
    }
}

pub fn run_suites(suites: &[Suite], seed: u64) -> VerifyReport {
    let properties: Vec<PropertyResult> = suites.iter().flat_map(|&s| run_suite(s, seed)).collect();
    VerifyReport {
        seed,
        passed: properties.iter().all(|p| p.passed),
        properties,
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<PropertyResult> {
    let mut rec = Recorder {
        suite,
        out: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Entropy => entropy_suite(&mut rec, &mut rng),
        Suite::Oracle => oracle_suite(&mut rec, &mut rng),
        Suite::Exponents => exponents_suite(&mut rec),
        Suite::Hc => hc_suite(&mut rec, &mut rng),
        Suite::Adder => adder_suite(&mut rec),
    }
    rec.out
}

/// Log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Checks `phi(mid) <= (phi(p) + phi(q)) / 2` on `pairs` random pairs of
/// points in `[0, 1]^2`.
pub fn phi_midpoint_convexity(pairs: usize, rng: &mut impl Rng) -> (usize, Option<String>) {
    let mut t = Tally::new();
    for _ in 0..pairs {
        let (x1, y1, x2, y2): (f64, f64, f64, f64) = rng.gen();
        let mid = phi((x1 + x2) / 2.0, (y1 + y2) / 2.0);
        let avg = (phi(x1, y1) + phi(x2, y2)) / 2.0;
        t.check(mid <= avg + 1e-12, || {
            format!("({x1},{y1}) ({x2},{y2}): {mid} > {avg}")
        });
    }
    (t.checks, t.failure)
}

/// `g(y) >= -tol` on a log grid of `[1, y_max]`; returns the minimum.
pub fn g_minimum(y_max: f64, count: usize) -> Result<f64> {
    log_grid(1.0, y_max, count)
        .into_iter()
        .map(g_func)
        .try_fold(f64::INFINITY, |m, g| Ok(m.min(g?)))
}

/// Whether `v` is strictly increasing on `count` interior points of `(0, 1/2)`.
pub fn v_strictly_increasing(count: usize) -> Result<bool> {
    let vals = (1..=count)
        .map(|i| v_func(0.5 * i as f64 / (count + 1) as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(vals.windows(2).all(|w| w[1] > w[0]))
}

/// Residuals `|exact - expansion| / eps` of a first-order expansion and the
/// ratios of successive residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCheck {
    pub eps: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl ExpansionCheck {
    fn build(eps: &[f64], mut residual: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        let residuals = eps
            .iter()
            .map(|&e| Ok(residual(e)? / e))
            .collect::<Result<Vec<_>>>()?;
        let ratios = residuals.windows(2).map(|w| w[1] / w[0]).collect();
        Ok(Self {
            eps: eps.to_vec(),
            residuals,
            ratios,
        })
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().fold(f64::NEG_INFINITY, |m, &r| m.max(r))
    }
}

/// Concentric-sphere exponent against its `rho -> 1` expansion, with
/// `eps = 1 - rho`.
pub fn high_correlation_expansion(alpha: Rate, eps: &[f64]) -> Result<ExpansionCheck> {
    ExpansionCheck::build(eps, |e| {
        let rho = Correlation::new(1.0 - e)?;
        let exact = sphere_exponent(alpha, alpha, rho, CenterMode::Same)?
            .bound
            .value;
        Ok((exact - thm1_expansion(alpha, 1.0 - e)?.value).abs())
    })
}

/// Opposite-sphere exponent against its `rho -> 0` expansion, with
/// `eps = rho`.
pub fn low_correlation_expansion(alpha: Rate, beta: Rate, eps: &[f64]) -> Result<ExpansionCheck> {
    ExpansionCheck::build(eps, |e| {
        let rho = Correlation::new(e)?;
        let exact = sphere_exponent(alpha, beta, rho, CenterMode::Opposite)?
            .bound
            .value;
        Ok((exact - thm2_expansion(alpha, beta, rho).value).abs())
    })
}

/// `psi` against the `rho -> 1` expansion of the concentric-sphere exponent.
pub fn psi_expansion(alpha: Rate, eps: &[f64]) -> Result<ExpansionCheck> {
    ExpansionCheck::build(eps, |e| {
        Ok((psi_bound(alpha, 1.0 - e)?.0.value - thm1_expansion(alpha, 1.0 - e)?.value).abs())
    })
}

/// Comparison of the average-distance and reverse-hypercontractivity bounds
/// for equal rates at one `rho`, split by the side of the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdComparison {
    pub rho: f64,
    pub threshold: f64,
    /// Grid `alpha` at least one step below the threshold where the
    /// average-distance bound fails to be strictly smaller.
    pub below_failures: Vec<f64>,
    pub below_checked: usize,
    /// Grid `alpha` at least one step above the threshold where it is still
    /// strictly smaller.
    pub above_wins: Vec<f64>,
    pub above_checked: usize,
}

pub fn threshold_comparison(rho: Correlation, alpha_grid: &[f64]) -> Result<ThresholdComparison> {
    let threshold = avgdist_threshold(rho)?;
    let step = alpha_grid
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    let mut out = ThresholdComparison {
        rho: rho.get(),
        threshold,
        below_failures: Vec::new(),
        below_checked: 0,
        above_wins: Vec::new(),
        above_checked: 0,
    };
    for &a in alpha_grid {
        let r = Rate::new(a)?;
        let beats = avgdist_lower_exponent(r, r, rho).value < morss_lower_exponent(r, r, rho).value;
        if a <= threshold - step {
            out.below_checked += 1;
            if !beats {
                out.below_failures.push(a);
            }
        } else if a >= threshold + step {
            out.above_checked += 1;
            if beats {
                out.above_wins.push(a);
            }
        }
    }
    Ok(out)
}

/// Checks `hct <= sphere(same) <= min(morss, avgdist)` at one point.
pub fn sandwich_holds(alpha: Rate, rho: Correlation) -> Result<bool> {
    let sphere = sphere_exponent(alpha, alpha, rho, CenterMode::Same)?
        .bound
        .value;
    let lower = morss_lower_exponent(alpha, alpha, rho)
        .value
        .min(avgdist_lower_exponent(alpha, alpha, rho).value);
    let tol = 1e-9;
    Ok(hct_upper_exponent(alpha, rho).value <= sphere + tol && sphere <= lower + tol)
}

/// Random pair of sets on `{0,1}^n` with sizes drawn uniformly in `[1, max]`.
pub fn random_pair(n: usize, max: usize, rng: &mut impl Rng) -> Result<(CubeSet, CubeSet)> {
    let cap = max.min(1 << n);
    let a = CubeSet::random(n, rng.gen_range(1..=cap), rng)?;
    let b = CubeSet::random(n, rng.gen_range(1..=cap), rng)?;
    Ok((a, b))
}

/// A random correlation `p/q` with small denominator.
pub fn random_exact_correlation(rng: &mut impl Rng) -> Result<ExactCorrelation> {
    let q: i64 = rng.gen_range(2..=16);
    let p: i64 = rng.gen_range(0..q);
    ExactCorrelation::from_ratio(p, q)
}

/// Exact agreement of the profile route and direct summation on one pair.
pub fn oracle_routes_agree(a: &CubeSet, b: &CubeSet, rho: &ExactCorrelation) -> Result<bool> {
    let profile = pair_distance_profile(a, b)?;
    let via_profile = rectangle_prob_exact(&profile, rho);
    let direct = rectangle_prob_direct_exact(a, b, rho)?;
    Ok(via_profile == direct && !via_profile.is_zero())
}

/// Closed-form sphere profiles against enumeration for every `i <= j <= n`.
pub fn sphere_profiles_match(n: usize) -> Result<(usize, Option<(usize, usize)>)> {
    let mut checks = 0;
    for i in 0..=n {
        let si = CubeSet::sphere(n, i)?;
        for j in i..=n {
            let sj = CubeSet::sphere(n, j)?;
            checks += 1;
            if sphere_distance_profile(n, i, j)? != pair_distance_profile(&si, &sj)? {
                return Ok((checks, Some((i, j))));
            }
        }
    }
    Ok((checks, None))
}

/// Per-symbol average distance of a pair against `[phi, 1 - phi]`.
pub fn average_distance_within_bounds(a: &CubeSet, b: &CubeSet) -> Result<bool> {
    let d = pair_distance_profile(a, b)?.mean_normalized_distance();
    let p = phi(a.rate(), b.rate());
    Ok(d >= p - 1e-9 && d <= 1.0 - p + 1e-9)
}

fn entropy_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    rec.record("h_inverse_round_trip", {
        let mut t = Tally::new();
        for _ in 0..2000 {
            let y: f64 = rng.gen();
            let x = binary_entropy_inv(y);
            t.check(
                (0.0..=0.5).contains(&x) && (binary_entropy(x) - y).abs() <= 1e-12,
                || format!("y = {y}"),
            );
        }
        t.finish()
    });
    rec.record("star_identities", {
        let mut t = Tally::new();
        for _ in 0..1000 {
            let (p, q): (f64, f64) = rng.gen();
            t.check(star(p, q) == star(q, p), || {
                format!("commutes at ({p},{q})")
            });
            t.check((star(p, 0.0) - p).abs() < 1e-15, || format!("p*0 at {p}"));
            t.check((star(p, 0.5) - 0.5).abs() < 1e-15, || {
                format!("p*1/2 at {p}")
            });
        }
        t.finish()
    });
    rec.record("phi_corners", {
        let ok = phi(0.0, 0.0) == 0.0 && phi(1.0, 1.0) == 0.5 && phi(0.0, 1.0) == 0.5;
        Ok((ok, 3, String::new()))
    });
    rec.record("phi_monotone", {
        let mut t = Tally::new();
        for _ in 0..1000 {
            let (x, y, dx): (f64, f64, f64) = rng.gen();
            let x2 = (x + dx * (1.0 - x)).min(1.0);
            t.check(phi(x2, y) >= phi(x, y) - 1e-15, || {
                format!("x: {x} -> {x2} at y = {y}")
            });
        }
        t.finish()
    });
    rec.record("phi_midpoint_convexity", {
        let (checks, failure) = phi_midpoint_convexity(10_000, rng);
        Ok((failure.is_none(), checks, failure.unwrap_or_default()))
    });
    rec.record("g_nonnegative", {
        g_minimum(1e6, 2001).map(|m| (m >= -1e-12, 2001, format!("min g = {m}")))
    });
    rec.record("v_strictly_increasing", {
        v_strictly_increasing(999).map(|ok| (ok, 999, String::new()))
    });
    rec.record("log_binomial_routes_agree", {
        (|| {
            let mut t = Tally::new();
            for n in 0..=64u64 {
                for k in 0..=n {
                    let exact = log_binomial(n, k)?;
                    let approx = log_binomial_lgamma(n, k);
                    t.check((exact - approx).abs() <= 1e-10, || format!("C({n},{k})"));
                }
            }
            t.finish()
        })()
    });
}

fn oracle_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    rec.record("profile_matches_direct_exact", {
        (|| {
            let mut t = Tally::new();
            for _ in 0..50 {
                let n = rng.gen_range(1..=10);
                let (a, b) = random_pair(n, 40, rng)?;
                let rho = random_exact_correlation(rng)?;
                let ok = oracle_routes_agree(&a, &b, &rho)?;
                t.check(ok, || format!("n = {n}, rho = {}", rho.get()));
            }
            t.finish()
        })()
    });
    rec.record("sphere_closed_form_matches_enumeration", {
        (|| {
            let mut checks = 0;
            for n in 1..=8 {
                let (c, bad) = sphere_profiles_match(n)?;
                checks += c;
                if let Some((i, j)) = bad {
                    return Ok((false, checks, format!("n = {n}, i = {i}, j = {j}")));
                }
            }
            Ok((true, checks, String::new()))
        })()
    });
    rec.record("full_cube_has_probability_one", {
        (|| {
            let full = CubeSet::full(6)?;
            let p =
                rectangle_prob_direct_exact(&full, &full, &ExactCorrelation::from_ratio(1, 3)?)?;
            Ok((p == BigRational::from_integer(1.into()), 1, String::new()))
        })()
    });
    rec.record("noise_operator_self_adjoint", {
        (|| {
            let mut t = Tally::new();
            for _ in 0..20 {
                let n = rng.gen_range(1..=8);
                let f =
                    CubeFunction::new(n, (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
                let g =
                    CubeFunction::new(n, (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
                let rho: f64 = rng.gen();
                let l = inner_product(&f, &noise_operator(&g, rho)?)?;
                let r = inner_product(&noise_operator(&f, rho)?, &g)?;
                t.check((l - r).abs() < 1e-12, || format!("n = {n}, rho = {rho}"));
            }
            t.finish()
        })()
    });
    rec.record("noise_operator_semigroup", {
        (|| {
            let mut t = Tally::new();
            for _ in 0..20 {
                let n = rng.gen_range(1..=8);
                let f =
                    CubeFunction::new(n, (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
                let (r1, r2): (f64, f64) = rng.gen();
                let twice = noise_operator(&noise_operator(&f, r1)?, r2)?;
                let once = noise_operator(&f, r1 * r2)?;
                let err = twice
                    .values()
                    .iter()
                    .zip(once.values())
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                t.check(err < 1e-12, || format!("n = {n}, error {err}"));
            }
            t.finish()
        })()
    });
    rec.record("inner_product_factorization", {
        (|| {
            let mut t = Tally::new();
            for _ in 0..30 {
                let n = rng.gen_range(1..=10);
                let (a, b) = random_pair(n, 50, rng)?;
                let rho: f64 = rng.gen_range(0.0..0.99);
                let fa = CubeFunction::indicator(&a)?;
                let fb = CubeFunction::indicator(&b)?;
                let lhs = inner_product(&fb, &noise_operator(&fa, rho)?)?;
                let p =
                    rectangle_prob(&pair_distance_profile(&a, &b)?, Correlation::new(rho)?).prob();
                t.check((lhs - p).abs() <= 1e-12 * p.max(1e-300) + 1e-15, || {
                    format!("n = {n}, rho = {rho}: {lhs} vs {p}")
                });
            }
            t.finish()
        })()
    });
    rec.record("average_distance_bounds", {
        (|| {
            let mut t = Tally::new();
            for _ in 0..50 {
                let (a, b) = random_pair(10, 200, rng)?;
                t.check(average_distance_within_bounds(&a, &b)?, || {
                    format!("|A| = {}, |B| = {}", a.len(), b.len())
                });
            }
            t.finish()
        })()
    });
}

fn exponents_suite(rec: &mut Recorder) {
    let grid = |k: usize| -> Vec<f64> { (1..=k).map(|i| i as f64 / (k + 1) as f64).collect() };
    rec.record("sandwich", {
        (|| {
            let mut t = Tally::new();
            for &a in &grid(12) {
                for &r in &grid(12) {
                    t.check(sandwich_holds(Rate::new(a)?, Correlation::new(r)?)?, || {
                        format!("alpha = {a}, rho = {r}")
                    });
                }
            }
            t.finish()
        })()
    });
    rec.record("opposite_at_least_same", {
        (|| {
            let mut t = Tally::new();
            for &a in &grid(8) {
                for &b in &grid(8) {
                    for &r in &grid(8) {
                        let (ra, rb, c) = (Rate::new(a)?, Rate::new(b)?, Correlation::new(r)?);
                        let same = sphere_exponent(ra, rb, c, CenterMode::Same)?.bound.value;
                        let opp = sphere_exponent(ra, rb, c, CenterMode::Opposite)?
                            .bound
                            .value;
                        t.check(opp >= same - 1e-9, || format!("({a},{b},{r})"));
                    }
                }
            }
            t.finish()
        })()
    });
    rec.record("w_concave_with_peak_at_phi", {
        (|| {
            let mut t = Tally::new();
            for &a in &grid(6) {
                for &b in &grid(6) {
                    let pair = SpherePair::new(Rate::new(a)?, Rate::new(b)?)?;
                    let (lo, hi) = pair.feasible();
                    let xs: Vec<f64> = (0..=200)
                        .map(|i| lo + (hi - lo) * i as f64 / 200.0)
                        .collect();
                    for w in xs.windows(3) {
                        let (f0, f1, f2) = (pair.w(w[0]), pair.w(w[1]), pair.w(w[2]));
                        t.check(f1 >= (f0 + f2) / 2.0 - 1e-12, || {
                            format!("({a},{b}) d = {}", w[1])
                        });
                    }
                    let peak = pair.w(phi(a, b));
                    t.check((peak - (a + b)).abs() < 1e-9, || {
                        format!("peak at ({a},{b})")
                    });
                }
            }
            t.finish()
        })()
    });
    rec.record("high_correlation_expansion", {
        (|| {
            let mut worst = 0.0f64;
            for a in [0.3, 0.5, 0.7] {
                worst = worst.max(
                    high_correlation_expansion(Rate::new(a)?, &[0.2, 0.1, 0.05, 0.025])?
                        .max_ratio(),
                );
            }
            Ok((worst <= 0.75, 9, format!("largest ratio {worst}")))
        })()
    });
    rec.record("low_correlation_expansion", {
        (|| {
            let mut worst = 0.0f64;
            for (a, b) in [(0.3, 0.3), (0.5, 0.8)] {
                let c = low_correlation_expansion(
                    Rate::new(a)?,
                    Rate::new(b)?,
                    &[0.2, 0.1, 0.05, 0.025],
                )?;
                worst = worst.max(c.max_ratio());
            }
            Ok((worst <= 0.75, 6, format!("largest ratio {worst}")))
        })()
    });
    rec.record("threshold_sufficient_for_avgdist", {
        (|| {
            let alphas = grid(99);
            let (mut checked, mut failures) = (0, Vec::new());
            for &r in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                let c = threshold_comparison(Correlation::new(r)?, &alphas)?;
                checked += c.below_checked;
                failures.extend(c.below_failures.iter().map(|a| (r, *a)));
            }
            Ok((
                failures.is_empty(),
                checked,
                format!("failures {failures:?}"),
            ))
        })()
    });
}

fn hc_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng) {
    rec.record("c_endpoints", {
        (|| {
            let lo = c_function(0.0)?;
            let hi = c_function(LN_2)?;
            Ok((
                (lo - 2.0).abs() <= 1e-9 && (hi - 2.0 / LN_2).abs() <= 1e-9,
                2,
                format!("C(0) = {lo}, C(ln 2) = {hi}"),
            ))
        })()
    });
    rec.record("c_increasing_convex", {
        (|| {
            let v = (0..=200)
                .map(|i| c_function(LN_2 * i as f64 / 200.0))
                .collect::<Result<Vec<_>>>()?;
            let mono = v.windows(2).all(|w| w[1] > w[0]);
            let convex = v.windows(3).all(|w| w[0] + w[2] >= 2.0 * w[1] - 1e-12);
            Ok((
                mono && convex,
                201,
                format!("increasing {mono}, convex {convex}"),
            ))
        })()
    });
    rec.record("integrator_fourth_order", {
        (|| {
            let (a, b, t) = (0.0, 0.3, 0.5);
            let reference = solve_u(a, b, t)?.u;
            let e1 = (integrate_u_fixed(a, b, t, 8)? - reference).abs();
            let e2 = (integrate_u_fixed(a, b, t, 16)? - reference).abs();
            let ratio = e1 / e2;
            Ok((
                (10.0..=22.0).contains(&ratio),
                2,
                format!("error ratio {ratio}"),
            ))
        })()
    });
    rec.record("q_first_order_coefficient", {
        (|| {
            let (alpha, q0, t) = (0.5, 2.0, 0.005);
            let s = solve_q(Rate::new(alpha)?, q0, t)?;
            let slope = (q0 - s.q) / t;
            let expected = (q0 - 1.0) * c_function((1.0 - alpha) * LN_2)?;
            Ok((
                (slope - expected).abs() <= 0.1 * expected,
                1,
                format!("slope {slope}, expected {expected}"),
            ))
        })()
    });
    rec.record("q_decreasing_in_t", {
        (|| {
            let mut t = Tally::new();
            let mut prev = 2.0;
            for time in [0.005, 0.01, 0.02, 0.04, 0.08] {
                let s = solve_q(Rate::new(0.5)?, 2.0, time)?;
                t.check(s.q < prev && s.residual <= 1e-9, || format!("t = {time}"));
                prev = s.q;
            }
            t.finish()
        })()
    });
    rec.record("direct_inequality_checks", {
        (|| {
            let n = 10;
            let alpha = Rate::new(0.5)?;
            let mut t = Tally::new();
            for time in [0.01, 0.05] {
                let sol = solve_q(alpha, 2.0, time)?;
                for _ in 0..20 {
                    let size = rng.gen_range(1..=1usize << (n / 2));
                    let set = CubeSet::random(n, size, rng)?;
                    let cert = verify_hc_with(&set, &sol)?;
                    t.check(cert.passed, || {
                        format!("t = {time}, |A| = {size}, slack {}", cert.slack)
                    });
                }
            }
            t.finish()
        })()
    });
    rec.record("psi_below_sphere", {
        (|| {
            let mut t = Tally::new();
            for a in [0.2, 0.5, 0.8] {
                for r in [0.9, 0.95, 0.99] {
                    let ra = Rate::new(a)?;
                    let psi = psi_bound(ra, r)?.0.value;
                    let sphere = sphere_exponent(ra, ra, Correlation::new(r)?, CenterMode::Same)?
                        .bound
                        .value;
                    t.check(psi <= sphere + 1e-6, || {
                        format!("({a},{r}): {psi} > {sphere}")
                    });
                }
            }
            t.finish()
        })()
    });
}

fn adder_suite(rec: &mut Recorder) {
    rec.record("cap_examples", {
        (|| {
            let full = RatePair::new(1.0, 1.0)?;
            let at = |d: f64| Ok::<_, Error>(van_tilborg_wd_cap(NormalizedDistance::new(d)?, full));
            Ok((
                at(0.0)? == 0.0 && at(0.5)? == 1.5 && at(1.0)? == 0.0,
                3,
                String::new(),
            ))
        })()
    });
    rec.record("independent_exponent", {
        (|| {
            let z =
                zero_error_upper_exponent(RatePair::new(1.0, 1.0)?, Correlation::new(0.0)?).value;
            Ok(((z - 0.5).abs() < 1e-12, 1, format!("{z}")))
        })()
    });
    rec.record("frontier_monotone", {
        (|| {
            let grid: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
            let f = feasibility_scan(&grid, &default_rho_grid(50))?;
            let ok = f.is_nonincreasing() && f.exclusion_is_monotone();
            Ok((
                ok,
                grid.len(),
                format!(
                    "R2 max at R1 = {}: {:?}",
                    grid[18],
                    f.last().and_then(|p| p.r2_max)
                ),
            ))
        })()
    });
}

/// Sphere radius and realized rate used by finite-`n` comparisons.
pub fn sphere_rate(n: usize, alpha: Rate) -> Result<(usize, f64)> {
    let radius = finite_radius(n, alpha);
    Ok((radius, log_binomial(n as u64, radius as u64)? / n as f64))
}
