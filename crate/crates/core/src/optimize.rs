//! One-dimensional search helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

pub const GOLDEN_TOL: f64 = 1e-10;
pub const GOLDEN_MAX_ITER: usize = 200;

/// Maximizer of a unimodal function on a closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
///
/// The endpoints are evaluated too, so a boundary optimum is returned even
/// when the interior search collapses towards it. Values of `-inf` are
/// handled like any other ordering.
pub fn golden_max<F>(f: F, lo: f64, hi: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    golden_max_with(f, lo, hi, GOLDEN_TOL, GOLDEN_MAX_ITER)
}

pub fn golden_max_with<F>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Maximum
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo <= hi);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = Maximum {
        x: mid,
        value: f(mid),
    };
    for x in [c, d, lo, hi] {
        let v = f(x);
        if v > best.value {
            best = Maximum { x, value: v };
        }
    }
    best
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Requires `f(lo)` and `f(hi)` of opposite sign (or zero). Stops when
/// `|f| <= ftol` or the bracket is narrower than `xtol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64, ftol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return None;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= ftol || hi - lo <= xtol || mid <= lo || mid >= hi {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
