//! Asymptotic exponents of rectangle probabilities, in bits per symbol.
//!
//! An exponent `E` stands for `P(A x B) = 2^{-n E + o(n)}`. The sphere
//! exponents come from a one-dimensional concave maximization over the
//! normalized pair distance `d`; the remaining bounds are closed forms.

use std::f64::consts::{LN_2, LOG2_E};

use serde::{Deserialize, Serialize};

use crate::entropy::{binary_entropy, binary_entropy_inv, phi, NormalizedDistance, Rate};
use crate::error::{Error, Result};
use crate::optimize::golden_max;

/// Per-coordinate correlation `rho`, with `P[X_j = Y_j] = (1 + rho) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Correlation(f64);

impl Correlation {
    pub fn new(rho: f64) -> Result<Self> {
        if (0.0..1.0).contains(&rho) {
            Ok(Self(rho))
        } else {
            Err(Error::domain("rho", rho, "[0, 1)"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `log2((1 - rho) / (1 + rho))`, never positive.
    pub fn log_ratio(self) -> f64 {
        ((1.0 - self.0) / (1.0 + self.0)).log2()
    }
}

impl TryFrom<f64> for Correlation {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Correlation> for f64 {
    fn from(c: Correlation) -> f64 {
        c.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterMode {
    /// Both spheres centered at `0^n`.
    Same,
    /// Centers `0^n` and `1^n`.
    Opposite,
}

impl std::str::FromStr for CenterMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "same" => Ok(CenterMode::Same),
            "opposite" => Ok(CenterMode::Opposite),
            _ => Err(Error::UnknownName {
                kind: "center mode",
                name: s.into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    SphereSame,
    SphereOpposite,
    HctUpper,
    RhctLower,
    MorssLower,
    AvgdistLower,
    Thm1Expansion,
    Thm2Expansion,
    PsiUpper,
    ZeroErrorUpper,
}

/// Which way a bound constrains the probability.
///
/// `UpperOnP` means `P <= 2^{-n value}`, i.e. `value` lower-bounds the
/// exponent. The sphere kinds are achieved values: concentric spheres
/// witness that the largest probability is at least `2^{-n value}`
/// (`LowerOnP`), opposite spheres that the smallest is at most that
/// (`UpperOnP`). Each expansion takes the direction of its sphere side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    UpperOnP,
    LowerOnP,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::SphereSame => "sphere_same",
            BoundKind::SphereOpposite => "sphere_opposite",
            BoundKind::HctUpper => "hct_upper",
            BoundKind::RhctLower => "rhct_lower",
            BoundKind::MorssLower => "morss_lower",
            BoundKind::AvgdistLower => "avgdist_lower",
            BoundKind::Thm1Expansion => "thm1_expansion",
            BoundKind::Thm2Expansion => "thm2_expansion",
            BoundKind::PsiUpper => "psi_upper",
            BoundKind::ZeroErrorUpper => "zero_error_upper",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            BoundKind::HctUpper | BoundKind::PsiUpper | BoundKind::ZeroErrorUpper => {
                Direction::UpperOnP
            }
            BoundKind::SphereOpposite | BoundKind::Thm2Expansion => Direction::UpperOnP,
            BoundKind::RhctLower | BoundKind::MorssLower | BoundKind::AvgdistLower => {
                Direction::LowerOnP
            }
            BoundKind::SphereSame | BoundKind::Thm1Expansion => Direction::LowerOnP,
        }
    }
}

/// A named exponent value in bits per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentBound {
    #[serde(with = "crate::sentinel")]
    pub value: f64,
    pub kind: BoundKind,
    pub direction: Direction,
    /// False when the parameters sit outside the regime where an asymptotic
    /// expansion is reported as meaningful.
    pub in_regime: bool,
}

impl ExponentBound {
    pub fn new(kind: BoundKind, value: f64) -> Self {
        Self {
            value,
            kind,
            direction: kind.direction(),
            in_regime: true,
        }
    }

    fn with_regime(mut self, in_regime: bool) -> Self {
        self.in_regime = in_regime;
        self
    }
}

/// Radii `r = h^{-1}(alpha) <= s = h^{-1}(beta)` of a sphere pair, precomputed
/// so `w_d` can be evaluated repeatedly.
#[derive(Debug, Clone, Copy)]
pub struct SpherePair {
    alpha: f64,
    r: f64,
    s: f64,
}

impl SpherePair {
    /// Orders the rates so that `alpha <= beta`; pair counts are symmetric.
    pub fn new(alpha: Rate, beta: Rate) -> Result<Self> {
        let (a, b) = if alpha.get() <= beta.get() {
            (alpha.get(), beta.get())
        } else {
            (beta.get(), alpha.get())
        };
        if a <= 0.0 {
            return Err(Error::domain("alpha", a, "(0, 1]"));
        }
        Ok(Self {
            alpha: a,
            r: binary_entropy_inv(a),
            s: binary_entropy_inv(b),
        })
    }

    /// Interval of `d` on which `w_d` is finite.
    pub fn feasible(&self) -> (f64, f64) {
        ((self.s - self.r).max(0.0), (self.s + self.r).min(1.0))
    }

    /// `w_d(alpha, beta)`; `-inf` outside [`SpherePair::feasible`].
    pub fn w(&self, d: f64) -> f64 {
        let (lo, hi) = self.feasible();
        if d < lo || d > hi {
            return f64::NEG_INFINITY;
        }
        let (r, s) = (self.r, self.s);
        let inner = (0.5 + (s - d) / (2.0 * r)).clamp(0.0, 1.0);
        let outer = (0.5 + (d - (1.0 - s)) / (2.0 * (1.0 - r))).clamp(0.0, 1.0);
        self.alpha + r * binary_entropy(inner) + (1.0 - r) * binary_entropy(outer)
    }
}

/// `w_d(alpha, beta)`: per-symbol log of the number of sphere pairs at
/// normalized distance `d`. Arguments with `alpha > beta` are swapped.
pub fn w_d(alpha: Rate, beta: Rate, d: NormalizedDistance) -> Result<f64> {
    Ok(SpherePair::new(alpha, beta)?.w(d.get()))
}

/// Result of [`sphere_exponent`]: the exponent and the maximizing `d` of
/// `w_d ± d log2((1-rho)/(1+rho))`. For opposite centers the dominant pairs
/// sit at distance `1 - d_star`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereExponent {
    pub bound: ExponentBound,
    pub d_star: f64,
}

/// Exponent of `P(S x S')` for spheres of rates `alpha`, `beta`.
pub fn sphere_exponent(
    alpha: Rate,
    beta: Rate,
    rho: Correlation,
    centers: CenterMode,
) -> Result<SphereExponent> {
    let pair = SpherePair::new(alpha, beta)?;
    let (lo, hi) = pair.feasible();
    let l = rho.log_ratio();
    let r = rho.get();
    let (kind, best, base) = match centers {
        CenterMode::Same => (
            BoundKind::SphereSame,
            golden_max(|d| pair.w(d) + d * l, lo, hi),
            2.0 - (1.0 + r).log2(),
        ),
        CenterMode::Opposite => (
            BoundKind::SphereOpposite,
            golden_max(|d| pair.w(d) - d * l, lo, hi),
            2.0 - (1.0 - r).log2(),
        ),
    };
    Ok(SphereExponent {
        bound: ExponentBound::new(kind, base - best.value),
        d_star: best.x,
    })
}

/// Regime flag thresholds for the two expansions.
pub const THM1_MIN_RHO: f64 = 0.9;
pub const THM2_MAX_RHO: f64 = 0.1;

/// First-order expansion as `rho -> 1` of the largest-probability exponent
/// for equal rates: `(1-alpha) + (1/2 - sqrt(r(1-r))) (1-rho) / ln 2`.
/// Accepts `rho = 1`.
pub fn thm1_expansion(alpha: Rate, rho: f64) -> Result<ExponentBound> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain("rho", rho, "[0, 1]"));
    }
    let value = thm1_value(alpha.get(), rho);
    Ok(ExponentBound::new(BoundKind::Thm1Expansion, value).with_regime(rho >= THM1_MIN_RHO))
}

pub(crate) fn thm1_value(alpha: f64, rho: f64) -> f64 {
    let r = binary_entropy_inv(alpha);
    (1.0 - alpha) + (0.5 - (r * (1.0 - r)).sqrt()) / LN_2 * (1.0 - rho)
}

/// First-order expansion as `rho -> 0` of the smallest-probability exponent:
/// `(1-alpha) + (1-beta) + rho log2(e) (1 - 2 phi(alpha, beta))`.
pub fn thm2_expansion(alpha: Rate, beta: Rate, rho: Correlation) -> ExponentBound {
    let (a, b, r) = (alpha.get(), beta.get(), rho.get());
    let value = (1.0 - a) + (1.0 - b) + r * LOG2_E * (1.0 - 2.0 * phi(a, b));
    ExponentBound::new(BoundKind::Thm2Expansion, value).with_regime(r <= THM2_MAX_RHO)
}

/// Classical hypercontractivity for equal sizes: `2(1-alpha)/(1+rho)`.
pub fn hct_upper_exponent(alpha: Rate, rho: Correlation) -> ExponentBound {
    ExponentBound::new(
        BoundKind::HctUpper,
        2.0 * (1.0 - alpha.get()) / (1.0 + rho.get()),
    )
}

/// Reverse hypercontractivity for equal sizes: `2(1-alpha)/(1-rho)`.
pub fn rhct_lower_exponent(alpha: Rate, rho: Correlation) -> ExponentBound {
    ExponentBound::new(
        BoundKind::RhctLower,
        2.0 * (1.0 - alpha.get()) / (1.0 - rho.get()),
    )
}

/// `((1-a) + (1-b) + 2 rho sqrt((1-a)(1-b))) / (1 - rho^2)`.
pub fn morss_lower_exponent(alpha: Rate, beta: Rate, rho: Correlation) -> ExponentBound {
    let (ca, cb, r) = (1.0 - alpha.get(), 1.0 - beta.get(), rho.get());
    ExponentBound::new(
        BoundKind::MorssLower,
        (ca + cb + 2.0 * r * (ca * cb).sqrt()) / (1.0 - r * r),
    )
}

/// Jensen bound with the average distance capped at `1 - phi(alpha, beta)`:
/// `(1-a) + (1-b) - log2(1-rho) + phi log2((1-rho)/(1+rho))`.
pub fn avgdist_lower_exponent(alpha: Rate, beta: Rate, rho: Correlation) -> ExponentBound {
    let (a, b) = (alpha.get(), beta.get());
    let value = (1.0 - a) + (1.0 - b) - (1.0 - rho.get()).log2() + phi(a, b) * rho.log_ratio();
    ExponentBound::new(BoundKind::AvgdistLower, value)
}

/// `(phi, 1 - phi)`: lower bound on the minimal and upper bound on the maximal
/// per-symbol average distance between sets of rates `alpha`, `beta`.
pub fn avg_distance_bounds(alpha: Rate, beta: Rate) -> (NormalizedDistance, NormalizedDistance) {
    let p = phi(alpha.get(), beta.get());
    (
        NormalizedDistance::new(p).expect("phi in [0, 1/2]"),
        NormalizedDistance::new(1.0 - p).expect("phi in [0, 1/2]"),
    )
}

/// `alpha` below which the average-distance bound provably beats the
/// reverse-hypercontractivity bound for equal rates:
/// `1 - ((1-rho) / (2 rho)) log2(1 / (1-rho))`.
pub fn avgdist_threshold(rho: Correlation) -> Result<f64> {
    let r = rho.get();
    if r <= 0.0 {
        return Err(Error::domain("rho", r, "(0, 1)"));
    }
    Ok(1.0 - (1.0 - r) / (2.0 * r) * (1.0 / (1.0 - r)).log2())
}

/// Every probability lower bound at one point, with the tightest picked out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    /// Lower bounds on `P`; the smallest exponent is the tightest.
    pub lower_bounds: Vec<ExponentBound>,
    pub tightest: BoundKind,
    /// Upper bound on `P`, only for equal rates.
    pub hct_upper: Option<ExponentBound>,
    #[serde(with = "crate::sentinel::option")]
    pub avgdist_threshold: Option<f64>,
    /// For equal rates: whether the threshold predicts the average-distance
    /// bound beats the reverse-hypercontractivity one.
    pub threshold_predicts_avgdist: Option<bool>,
    pub avgdist_beats_morss: bool,
}

pub fn compare_bounds(alpha: Rate, beta: Rate, rho: Correlation) -> Result<BoundReport> {
    if rho.get() <= 0.0 {
        return Err(Error::domain("rho", rho.get(), "(0, 1)"));
    }
    let equal = alpha == beta;
    let morss = morss_lower_exponent(alpha, beta, rho);
    let avg = avgdist_lower_exponent(alpha, beta, rho);
    let mut lower_bounds = vec![morss, avg];
    if equal {
        lower_bounds.push(rhct_lower_exponent(alpha, rho));
    }
    let tightest = lower_bounds
        .iter()
        .min_by(|x, y| x.value.total_cmp(&y.value))
        .expect("nonempty")
        .kind;
    let threshold = equal.then(|| avgdist_threshold(rho)).transpose()?;
    Ok(BoundReport {
        alpha: alpha.get(),
        beta: beta.get(),
        rho: rho.get(),
        lower_bounds,
        tightest,
        hct_upper: equal.then(|| hct_upper_exponent(alpha, rho)),
        avgdist_threshold: threshold,
        threshold_predicts_avgdist: threshold.map(|t| alpha.get() < t),
        avgdist_beats_morss: avg.value < morss.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rate(x: f64) -> Rate {
        Rate::new(x).unwrap()
    }
    fn corr(x: f64) -> Correlation {
        Correlation::new(x).unwrap()
    }
    fn dist(x: f64) -> NormalizedDistance {
        NormalizedDistance::new(x).unwrap()
    }

    #[test]
    fn w_at_zero_distance_is_alpha() {
        for a in [0.1, 0.5, 0.9] {
            assert_abs_diff_eq!(
                w_d(rate(a), rate(a), dist(0.0)).unwrap(),
                a,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn w_max_is_alpha_plus_beta_at_phi() {
        for (a, b) in [(0.3, 0.3), (0.2, 0.7), (0.5, 0.9), (0.05, 0.6)] {
            let pair = SpherePair::new(rate(a), rate(b)).unwrap();
            let (lo, hi) = pair.feasible();
            let m = golden_max(|d| pair.w(d), lo, hi);
            assert!(
                (m.x - phi(a, b)).abs() < 1e-6,
                "({a},{b}): {} vs {}",
                m.x,
                phi(a, b)
            );
            assert!((m.value - (a + b)).abs() < 1e-9);
            assert!((pair.w(phi(a, b)) - (a + b)).abs() < 1e-12);
        }
    }

    #[test]
    fn w_infeasible_is_neg_inf() {
        let r = binary_entropy_inv(0.3);
        let s = binary_entropy_inv(0.6);
        assert_eq!(
            w_d(rate(0.3), rate(0.6), dist(s - r - 1e-3)).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(
            w_d(rate(0.3), rate(0.6), dist(s + r + 1e-3)).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn w_same_rate_form() {
        let a = 0.45;
        let r = binary_entropy_inv(a);
        for d in [0.01, 0.05, 0.1, 0.15] {
            let expected = binary_entropy(r)
                + r * binary_entropy(d / 2.0 / r)
                + (1.0 - r) * binary_entropy(d / 2.0 / (1.0 - r));
            assert_abs_diff_eq!(
                w_d(rate(a), rate(a), dist(d)).unwrap(),
                expected,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn w_rejects_zero_rate_and_swaps() {
        assert!(w_d(rate(0.0), rate(0.5), dist(0.1)).is_err());
        let x = w_d(rate(0.7), rate(0.2), dist(0.3)).unwrap();
        let y = w_d(rate(0.2), rate(0.7), dist(0.3)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn sphere_exponent_at_independence() {
        for centers in [CenterMode::Same, CenterMode::Opposite] {
            let e = sphere_exponent(rate(0.3), rate(0.6), corr(0.0), centers).unwrap();
            assert_abs_diff_eq!(e.bound.value, 1.1, epsilon = 1e-9);
        }
    }

    #[test]
    fn full_rate_spheres_have_zero_exponent() {
        for r in [0.1, 0.5, 0.9] {
            let e = sphere_exponent(rate(1.0), rate(1.0), corr(r), CenterMode::Same).unwrap();
            assert_abs_diff_eq!(e.bound.value, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn optimizer_tracks_small_noise_prediction() {
        let r = binary_entropy_inv(0.5);
        let scale = (r * (1.0 - r)).sqrt();
        let mut prev_err = f64::INFINITY;
        for eps in [0.2, 0.1, 0.05, 0.025] {
            let e =
                sphere_exponent(rate(0.5), rate(0.5), corr(1.0 - eps), CenterMode::Same).unwrap();
            let rel = (e.d_star / (eps * scale) - 1.0).abs();
            assert!(
                rel < 0.25,
                "eps {eps}: d* = {}, predicted {}",
                e.d_star,
                eps * scale
            );
            assert!(rel < prev_err);
            prev_err = rel;
        }
    }

    #[test]
    fn thm1_examples() {
        assert_abs_diff_eq!(
            thm1_expansion(rate(1.0), 0.3).unwrap().value,
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            thm1_expansion(rate(0.4), 1.0).unwrap().value,
            0.6,
            epsilon = 1e-15
        );
        // r = h^{-1}(1/2) = 0.11002786443835955..., value from 40-digit evaluation
        let got = thm1_expansion(rate(0.5), 0.9).unwrap();
        assert_abs_diff_eq!(got.value, 0.526_989_291_736_350_3, epsilon = 1e-12);
        assert_abs_diff_eq!(
            binary_entropy_inv(0.5),
            0.110_027_864_438_359_55,
            epsilon = 1e-15
        );
        assert!(got.in_regime);
        assert!(!thm1_expansion(rate(0.5), 0.5).unwrap().in_regime);
    }

    #[test]
    fn thm2_examples() {
        assert_abs_diff_eq!(
            thm2_expansion(rate(0.3), rate(0.6), corr(0.0)).value,
            1.1,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            thm2_expansion(rate(1.0), rate(1.0), corr(0.07)).value,
            0.0,
            epsilon = 1e-15
        );
        let p = phi(0.5, 0.5);
        let got = thm2_expansion(rate(0.5), rate(0.5), corr(0.05));
        assert_abs_diff_eq!(
            got.value,
            1.0 + 0.05 * LOG2_E * (1.0 - 2.0 * p),
            epsilon = 1e-15
        );
        assert!(got.in_regime);
    }

    #[test]
    fn closed_form_bounds() {
        assert_abs_diff_eq!(
            hct_upper_exponent(rate(0.3), corr(0.0)).value,
            1.4,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            hct_upper_exponent(rate(0.3), corr(0.999_999)).value,
            0.7,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            hct_upper_exponent(rate(0.5), corr(0.5)).value,
            2.0 / 3.0,
            epsilon = 1e-15
        );

        assert_abs_diff_eq!(
            rhct_lower_exponent(rate(0.3), corr(0.0)).value,
            1.4,
            epsilon = 1e-15
        );
        assert_eq!(rhct_lower_exponent(rate(1.0), corr(0.4)).value, 0.0);
        assert_abs_diff_eq!(
            rhct_lower_exponent(rate(0.5), corr(0.5)).value,
            2.0,
            epsilon = 1e-15
        );

        assert_abs_diff_eq!(
            morss_lower_exponent(rate(0.3), rate(0.5), corr(0.0)).value,
            1.2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            morss_lower_exponent(rate(0.5), rate(0.8), corr(0.3)).value,
            (0.5 + 0.2 + 0.6 * 0.1f64.sqrt()) / 0.91,
            epsilon = 1e-15
        );
        for (a, r) in [(0.2, 0.3), (0.7, 0.9), (0.5, 0.01)] {
            assert_abs_diff_eq!(
                morss_lower_exponent(rate(a), rate(a), corr(r)).value,
                rhct_lower_exponent(rate(a), corr(r)).value,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn avgdist_examples() {
        assert_abs_diff_eq!(
            avgdist_lower_exponent(rate(0.3), rate(0.5), corr(0.0)).value,
            1.2,
            epsilon = 1e-15
        );
        let r = 0.4;
        assert_abs_diff_eq!(
            avgdist_lower_exponent(rate(1.0), rate(1.0), corr(r)).value,
            0.5 * (1.0 / (1.0 - r * r)).log2(),
            epsilon = 1e-14
        );
        // slope at rho -> 0 by central difference
        let (a, b) = (0.4, 0.7);
        let h = 1e-5;
        let f = |r: f64| avgdist_lower_exponent(rate(a), rate(b), corr(r)).value;
        let slope = (f(2.0 * h) - f(0.0)) / (2.0 * h);
        assert_abs_diff_eq!(slope, LOG2_E * (1.0 - 2.0 * phi(a, b)), epsilon = 1e-4);
    }

    #[test]
    fn distance_bounds() {
        let (lo, hi) = avg_distance_bounds(rate(1.0), rate(1.0));
        assert_eq!((lo.get(), hi.get()), (0.5, 0.5));
        let (lo, hi) = avg_distance_bounds(rate(1e-12), rate(1e-12));
        assert!(lo.get() < 1e-12 && hi.get() > 1.0 - 1e-12);
    }

    #[test]
    fn avgdist_threshold_examples() {
        assert_abs_diff_eq!(avgdist_threshold(corr(0.5)).unwrap(), 0.5, epsilon = 1e-15);
        let low = compare_bounds(rate(0.3), rate(0.3), corr(0.5)).unwrap();
        assert_eq!(low.threshold_predicts_avgdist, Some(true));
        assert!(low.avgdist_beats_morss);
        let high = compare_bounds(rate(0.9), rate(0.9), corr(0.5)).unwrap();
        assert_eq!(high.threshold_predicts_avgdist, Some(false));
        assert!(!high.avgdist_beats_morss);
        assert_eq!(high.tightest, BoundKind::MorssLower);
        let unequal = compare_bounds(rate(0.3), rate(0.7), corr(0.99)).unwrap();
        assert!(unequal.avgdist_beats_morss);
        assert!(unequal.hct_upper.is_none());
        assert!(compare_bounds(rate(0.3), rate(0.3), corr(0.0)).is_err());
    }

    #[test]
    fn bound_json_round_trip() {
        let b = ExponentBound::new(BoundKind::SphereSame, f64::NEG_INFINITY);
        let s = serde_json::to_string(&b).unwrap();
        let back: ExponentBound = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        let rep = compare_bounds(rate(0.4), rate(0.4), corr(0.6)).unwrap();
        let back: BoundReport =
            serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
        assert_eq!(back, rep);
    }
}
