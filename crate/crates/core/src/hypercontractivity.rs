//! Support-sensitive hypercontractivity for indicator functions.
//!
//! Quantities in this module are in nats (`C`'s argument, the ODE state `u`,
//! the shooting parameters `a`, `b`), except rates and exponents, which stay
//! in bits. The conversion happens through the factor `ln 2` in
//! `b (1 + e^{-a}) = (1 - alpha) ln 2`.
//!
//! The ODE is `u'(t) = C(b (1 + e^{-u(t)}))` with `u(0) = a`. For a target
//! norm index `q0`, shooting over `a` finds `q(t) = 1 + e^a` such that
//! `||T_{e^{-t}} 1_A||_{q0} <= ||1_A||_{q(t)}` for `|A| <= 2^{n alpha}`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::entropy::Rate;
use crate::error::{Error, Result};
use crate::exponents::{BoundKind, ExponentBound};
use crate::optimize::bisect;
use crate::oracle::{noise_operator, p_norm, CubeFunction, CubeSet};

/// Slack on `C`'s domain: arguments this far past an endpoint are clamped.
pub const C_DOMAIN_TOL: f64 = 1e-9;
/// Below this argument `C` is evaluated by its series `2 + lambda / 3`.
pub const C_SERIES_CUTOFF: f64 = 1e-6;
/// Step-halving stops once two successive integrations differ by less.
pub const ODE_TOL: f64 = 1e-11;
/// Required terminal mismatch of the shooting solve.
pub const SHOOTING_TOL: f64 = 1e-9;
/// Width of the shooting bracket below `ln(q0 - 1)`.
pub const SHOOTING_BRACKET: f64 = 5.0;

const MAX_STEPS: usize = 1 << 20;
const SCAN_POINTS: usize = 16;

/// `ln 2 - H(1/2 - delta)` in nats, written to stay accurate near `delta = 0`.
fn entropy_deficit_nats(delta: f64) -> f64 {
    let term = |x: f64, l: f64| if x == 0.0 { 0.0 } else { x * l };
    0.5 * (term(1.0 - 2.0 * delta, (-2.0 * delta).ln_1p())
        + term(1.0 + 2.0 * delta, (2.0 * delta).ln_1p()))
}

/// The function `C` on `[0, ln 2]`, defined through the parametrization
/// `C(ln 2 (1 - h(y))) = (2 - 4 sqrt(y (1 - y))) / (ln 2 (1 - h(y)))`.
///
/// With `y = 1/2 - delta` the numerator is `8 delta^2 / (1 + sqrt(1 - 4 delta^2))`,
/// which avoids cancellation near `lambda = 0`.
pub fn c_function(lambda: f64) -> Result<f64> {
    if !(-C_DOMAIN_TOL..=LN_2 + C_DOMAIN_TOL).contains(&lambda) {
        return Err(Error::domain("lambda", lambda, "[0, ln 2]"));
    }
    let lambda = lambda.clamp(0.0, LN_2);
    if lambda < C_SERIES_CUTOFF {
        return Ok(2.0 + lambda / 3.0);
    }
    if lambda == LN_2 {
        return Ok(2.0 / LN_2);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy_deficit_nats(mid) < lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let delta = 0.5 * (lo + hi);
    let d2 = delta * delta;
    Ok(8.0 * d2 / ((1.0 + (1.0 - 4.0 * d2).max(0.0).sqrt()) * lambda))
}

fn rhs(b: f64, u: f64, t: f64) -> Result<f64> {
    let arg = b * (1.0 + (-u).exp());
    if arg > LN_2 + C_DOMAIN_TOL {
        return Err(Error::CDomain { argument: arg, t });
    }
    c_function(arg)
}

/// Classical fourth-order Runge–Kutta with a fixed number of steps.
pub fn integrate_u_fixed(a: f64, b: f64, t: f64, steps: usize) -> Result<f64> {
    let h = t / steps as f64;
    let mut u = a;
    for i in 0..steps {
        let s = i as f64 * h;
        let k1 = rhs(b, u, s)?;
        let k2 = rhs(b, u + 0.5 * h * k1, s + 0.5 * h)?;
        let k3 = rhs(b, u + 0.5 * h * k2, s + 0.5 * h)?;
        let k4 = rhs(b, u + h * k3, s + h)?;
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(u)
}

/// Integrated `u(t)` together with the step count that met [`ODE_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct USolution {
    pub u: f64,
    pub steps: usize,
}

/// `u_f(a, b, t)`: the ODE solution at time `t`, halving the step until two
/// successive results agree within [`ODE_TOL`].
pub fn solve_u(a: f64, b: f64, t: f64) -> Result<USolution> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::domain("t", t, "[0, inf)"));
    }
    if b.is_nan() || b < 0.0 {
        return Err(Error::domain("b", b, "[0, inf)"));
    }
    rhs(b, a, 0.0)?;
    if t == 0.0 {
        return Ok(USolution { u: a, steps: 0 });
    }
    let mut steps = 4 * ((t / 0.01).ceil() as usize).max(1);
    let mut prev = integrate_u_fixed(a, b, t, steps)?;
    while steps < MAX_STEPS {
        steps *= 2;
        let cur = integrate_u_fixed(a, b, t, steps)?;
        if (cur - prev).abs() < ODE_TOL {
            return Ok(USolution { u: cur, steps });
        }
        prev = cur;
    }
    Ok(USolution { u: prev, steps })
}

/// Solved shooting state for one `(alpha, q0, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HcSolution {
    pub alpha: f64,
    pub t: f64,
    pub a: f64,
    pub b: f64,
    /// `1 + e^a`.
    pub q: f64,
    pub q0: f64,
    /// ODE steps used by the final integration.
    pub steps: usize,
    /// `|u_f(a, b, t) - ln(q0 - 1)|`.
    pub residual: f64,
    /// Sign changes seen by the coarse scan beyond the one that was solved.
    pub extra_roots: usize,
}

/// The shooting drive `b` that keeps `b (1 + e^{-a}) = (1 - alpha) ln 2`.
pub fn drive_for(alpha: f64, a: f64) -> f64 {
    (1.0 - alpha) * LN_2 / (1.0 + (-a).exp())
}

/// Finds `q(t)` by bisection on the initial condition `a`.
pub fn solve_q(alpha: Rate, q0: f64, t: f64) -> Result<HcSolution> {
    let alpha = alpha.get();
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("alpha", alpha, "(0, 1)"));
    }
    if !(q0 > 1.0 && q0.is_finite()) {
        return Err(Error::domain("q0", q0, "(1, inf)"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain("t", t, "[0, inf)"));
    }
    let target = (q0 - 1.0).ln();
    if t == 0.0 {
        return Ok(HcSolution {
            alpha,
            t,
            a: target,
            b: drive_for(alpha, target),
            q: q0,
            q0,
            steps: 0,
            residual: 0.0,
            extra_roots: 0,
        });
    }
    let out_of_range = || Error::ShootingOutOfRange { alpha, q0, t };
    let mismatch = |a: f64| -> Result<f64> { Ok(solve_u(a, drive_for(alpha, a), t)?.u - target) };

    // coarse scan from the top of the bracket, where the branch starts at t = 0
    let lo_end = target - SHOOTING_BRACKET;
    let grid: Vec<f64> = (0..=SCAN_POINTS)
        .map(|i| target - SHOOTING_BRACKET * i as f64 / SCAN_POINTS as f64)
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    for &a in &grid {
        match mismatch(a) {
            Ok(v) => values.push(v),
            Err(Error::CDomain { .. }) => return Err(out_of_range()),
            Err(e) => return Err(e),
        }
    }
    let crossings: Vec<usize> = (0..SCAN_POINTS)
        .filter(|&i| values[i].signum() != values[i + 1].signum())
        .collect();
    let &first = crossings.first().ok_or_else(out_of_range)?;
    let (hi, lo) = (grid[first], grid[first + 1].max(lo_end));

    let mut err = None;
    let root = bisect(
        |a| match mismatch(a) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-15,
        SHOOTING_TOL * 1e-2,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let a = root.ok_or_else(out_of_range)?;
    let b = drive_for(alpha, a);
    let sol = solve_u(a, b, t)?;
    let residual = (sol.u - target).abs();
    if residual > SHOOTING_TOL {
        return Err(out_of_range());
    }
    Ok(HcSolution {
        alpha,
        t,
        a,
        b,
        q: 1.0 + a.exp(),
        q0,
        steps: sol.steps,
        residual,
        extra_roots: crossings.len() - 1,
    })
}

/// `psi(alpha, rho) = 2 (1 - alpha) / q(t)` with `q0 = 2` and `rho = e^{-2t}`:
/// every pair of sets of size at most `2^{n alpha}` has
/// `P(A x B) <= 2^{-n psi}`. Accepts `rho = 1`.
pub fn psi_bound(alpha: Rate, rho: f64) -> Result<(ExponentBound, HcSolution)> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::domain("rho", rho, "(0, 1]"));
    }
    let sol = solve_q(alpha, 2.0, -rho.ln() / 2.0)?;
    let value = 2.0 * (1.0 - alpha.get()) / sol.q;
    Ok((ExponentBound::new(BoundKind::PsiUpper, value), sol))
}

/// Same bound with an unequal split `rho = rho_a rho_b` of the noise between
/// the two sides of the Cauchy–Schwarz step. Experimental; the symmetric
/// split is what [`psi_bound`] uses.
pub fn psi_bound_split(alpha: Rate, rho_a: f64, rho_b: f64) -> Result<ExponentBound> {
    for r in [rho_a, rho_b] {
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::domain("rho", r, "(0, 1]"));
        }
    }
    let qa = solve_q(alpha, 2.0, -rho_a.ln())?.q;
    let qb = solve_q(alpha, 2.0, -rho_b.ln())?.q;
    let value = (1.0 - alpha.get()) * (1.0 / qa + 1.0 / qb);
    Ok(ExponentBound::new(BoundKind::PsiUpper, value))
}

/// Outcome of checking `||T_{e^{-t}} 1_A||_{q0} <= ||1_A||_{q(t)}` on an
/// explicit set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HcCertificate {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub q: f64,
    pub passed: bool,
}

/// Relative tolerance granted to the floating comparison.
pub const HC_CHECK_RTOL: f64 = 1e-12;

/// Evaluates both sides with the oracle, solving for `q(t)` first.
pub fn verify_hc_inequality(set: &CubeSet, alpha: Rate, q0: f64, t: f64) -> Result<HcCertificate> {
    let sol = solve_q(alpha, q0, t)?;
    verify_hc_with(set, &sol)
}

/// As [`verify_hc_inequality`], reusing a solved `q(t)`.
pub fn verify_hc_with(set: &CubeSet, sol: &HcSolution) -> Result<HcCertificate> {
    let n = set.dim() as f64;
    if (set.len() as f64).log2() > sol.alpha * n + 1e-12 {
        return Err(Error::domain(
            "log2|A| / n",
            set.rate(),
            "at most the alpha given to the solver",
        ));
    }
    let f = CubeFunction::indicator(set)?;
    let smoothed = noise_operator(&f, (-sol.t).exp())?;
    let lhs = p_norm(&smoothed, sol.q0)?;
    let rhs = p_norm(&f, sol.q)?;
    Ok(HcCertificate {
        lhs,
        rhs,
        slack: rhs - lhs,
        q: sol.q,
        passed: lhs <= rhs * (1.0 + HC_CHECK_RTOL),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::binary_entropy;
    use approx::assert_abs_diff_eq;

    fn rate(x: f64) -> Rate {
        Rate::new(x).unwrap()
    }

    #[test]
    fn c_endpoints() {
        assert_eq!(c_function(0.0).unwrap(), 2.0);
        assert_abs_diff_eq!(c_function(LN_2).unwrap(), 2.0 / LN_2, epsilon = 1e-12);
        // steep but continuous at the right end
        let near = c_function(LN_2 - 1e-12).unwrap();
        assert!(near < 2.0 / LN_2 && near > c_function(LN_2 - 1e-6).unwrap());
        assert!((near - 2.0 / LN_2).abs() < 1e-5);
        assert!(c_function(-1e-6).is_err());
        assert!(c_function(LN_2 + 1e-6).is_err());
        assert_eq!(c_function(-1e-10).unwrap(), 2.0);
    }

    #[test]
    fn c_at_quarter() {
        // direct parametrization at y = 1/4
        let lambda = LN_2 * (1.0 - binary_entropy(0.25));
        let expected = (2.0 - 4.0 * (3.0f64 / 16.0).sqrt()) / lambda;
        assert_abs_diff_eq!(lambda, 0.130_812, epsilon = 1e-5);
        assert_abs_diff_eq!(c_function(lambda).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 2.0484, epsilon = 1e-4);
    }

    #[test]
    fn c_series_branch_is_continuous() {
        let below = c_function(C_SERIES_CUTOFF * (1.0 - 1e-9)).unwrap();
        let above = c_function(C_SERIES_CUTOFF * (1.0 + 1e-9)).unwrap();
        assert!((below - above).abs() < 1e-11);
    }

    #[test]
    fn u_at_zero_time() {
        let s = solve_u(0.3, 0.2, 0.0).unwrap();
        assert_eq!(s.u, 0.3);
    }

    #[test]
    fn u_initial_slope() {
        let (a, b) = (0.1, 0.25);
        let h = 1e-4;
        let slope = (solve_u(a, b, h).unwrap().u - a) / h;
        let c0 = c_function(b * (1.0 + (-a).exp())).unwrap();
        assert!((slope - c0).abs() < 1e-3 * c0);
    }

    #[test]
    fn u_insensitive_to_drive_at_zero_time() {
        let (a, b, t, eps) = (0.2, 0.2, 1e-4, 1e-4);
        let up = solve_u(a, b + eps, t).unwrap().u;
        let down = solve_u(a, b - eps, t).unwrap().u;
        let du_db = (up - down) / (2.0 * eps);
        // proportional to t, vanishing at t = 0
        assert!(du_db.abs() < 1e-2);
        let du_db_later = {
            let t = 1e-2;
            (solve_u(a, b + eps, t).unwrap().u - solve_u(a, b - eps, t).unwrap().u) / (2.0 * eps)
        };
        assert!(du_db_later.abs() > 10.0 * du_db.abs());
    }

    #[test]
    fn u_domain_guard() {
        // b (1 + e^{-a}) > ln 2 at the start
        assert!(matches!(solve_u(0.0, 0.5, 0.1), Err(Error::CDomain { .. })));
        assert!(solve_u(0.0, -0.1, 0.1).is_err());
    }

    #[test]
    fn q_at_zero_time() {
        let s = solve_q(rate(0.5), 2.0, 0.0).unwrap();
        assert_eq!(s.q, 2.0);
        assert_eq!(s.residual, 0.0);
    }

    #[test]
    fn q_solution_invariants() {
        let alpha = 0.4;
        let mut prev_q = 3.0;
        for t in [0.005, 0.01, 0.02, 0.04] {
            let s = solve_q(rate(alpha), 3.0, t).unwrap();
            assert!(s.residual <= SHOOTING_TOL);
            assert_abs_diff_eq!(
                s.b * (1.0 + (-s.a).exp()),
                (1.0 - alpha) * LN_2,
                epsilon = 1e-10
            );
            assert!(s.q > 1.0 && s.q < prev_q);
            prev_q = s.q;
        }
    }

    #[test]
    fn q_initial_slope_of_a() {
        let alpha = 0.5;
        let t = 1e-3;
        let s = solve_q(rate(alpha), 2.0, t).unwrap();
        let a_dot = (s.a - (2.0f64 - 1.0).ln()) / t;
        let c = c_function((1.0 - alpha) * LN_2).unwrap();
        assert!((a_dot + c).abs() < 0.01 * c);
    }

    #[test]
    fn q_rejects_bad_inputs() {
        assert!(solve_q(rate(0.0), 2.0, 0.1).is_err());
        assert!(solve_q(rate(1.0), 2.0, 0.1).is_err());
        assert!(solve_q(rate(0.5), 1.0, 0.1).is_err());
        assert!(solve_q(rate(0.5), 2.0, -0.1).is_err());
    }

    #[test]
    fn q_out_of_range_is_reported() {
        // q(t) cannot drop below 1 + e^{-5} times the target scale
        assert!(matches!(
            solve_q(rate(0.5), 2.0, 5.0),
            Err(Error::ShootingOutOfRange { .. })
        ));
    }

    #[test]
    fn psi_limits() {
        let (b, _) = psi_bound(rate(0.3), 1.0).unwrap();
        assert_eq!(b.value, 0.7);
        assert_eq!(b.kind, BoundKind::PsiUpper);
        let (sym, _) = psi_bound(rate(0.3), 0.9).unwrap();
        let split = psi_bound_split(rate(0.3), 0.9f64.sqrt(), 0.9f64.sqrt()).unwrap();
        assert_abs_diff_eq!(sym.value, split.value, epsilon = 1e-12);
    }

    #[test]
    fn singleton_check() {
        let set = CubeSet::from_indices(6, [0]).unwrap();
        let c0 = verify_hc_inequality(&set, rate(0.5), 2.0, 0.0).unwrap();
        assert!(c0.passed);
        assert_abs_diff_eq!(c0.lhs, c0.rhs, epsilon = 1e-15);
        let t = 0.05;
        let c = verify_hc_inequality(&set, rate(0.5), 2.0, t).unwrap();
        // both sides in closed form for a point mass
        let rho = (-t).exp();
        let lhs = (2f64.powi(-6) * ((1.0 + rho * rho) / 2.0).powi(6)).sqrt();
        assert_abs_diff_eq!(c.lhs, lhs, epsilon = 1e-14);
        assert_abs_diff_eq!(c.rhs, 2f64.powi(-6).powf(1.0 / c.q), epsilon = 1e-14);
        assert!(c.passed && c.slack > 0.0);
    }

    #[test]
    fn oversized_set_rejected() {
        let set = CubeSet::from_indices(4, 0..5).unwrap();
        assert!(verify_hc_inequality(&set, rate(0.5), 2.0, 0.01).is_err());
    }
}
