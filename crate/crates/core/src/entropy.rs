//! Scalar primitives shared by every other module.
//!
//! Entropies are in bits. The only natural-log quantities here are the
//! auxiliary functions [`v_func`] and [`g_func`], which are defined with `ln`.
//! Every function treats `0 · log 0` as `0`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

macro_rules! unit_interval_newtype {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
        #[serde(try_from = "f64", into = "f64")]
        pub struct $name(f64);

        impl $name {
            pub fn new(value: f64) -> Result<Self> {
                if (0.0..=1.0).contains(&value) {
                    Ok(Self(value))
                } else {
                    Err(Error::domain($what, value, "[0, 1]"))
                }
            }

            #[inline]
            pub fn get(self) -> f64 {
                self.0
            }
        }

        impl TryFrom<f64> for $name {
            type Error = Error;
            fn try_from(value: f64) -> Result<Self> {
                Self::new(value)
            }
        }

        impl From<$name> for f64 {
            fn from(v: $name) -> f64 {
                v.0
            }
        }
    };
}

unit_interval_newtype!(
    /// A probability or normalized weight.
    Prob,
    "probability"
);
unit_interval_newtype!(
    /// A rate in bits per symbol, e.g. `log2 |A| / n`.
    Rate,
    "rate"
);
unit_interval_newtype!(
    /// Hamming distance divided by the dimension.
    NormalizedDistance,
    "normalized distance"
);

#[inline]
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p), "binary_entropy({p})");
    let p = p.clamp(0.0, 1.0);
    -(xlog2x(p) + xlog2x(1.0 - p))
}

/// Inverse of [`binary_entropy`] restricted to `[0, 1/2]`.
///
/// Plain bisection, run until the bracket cannot shrink further in `f64`.
pub fn binary_entropy_inv(y: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&y), "binary_entropy_inv({y})");
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..1100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binary_entropy(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick whichever endpoint lands closer in h
    if (binary_entropy(lo) - y).abs() <= (binary_entropy(hi) - y).abs() {
        lo
    } else {
        hi
    }
}

/// Binary convolution `p * q = p(1-q) + q(1-p)`.
#[inline]
pub fn star(p: f64, q: f64) -> f64 {
    p * (1.0 - q) + q * (1.0 - p)
}

/// `phi(x, y) = h^{-1}(x) * h^{-1}(y)`, jointly convex on the unit square.
pub fn phi(x: f64, y: f64) -> f64 {
    star(binary_entropy_inv(x), binary_entropy_inv(y))
}

/// `log2 C(n, k)`. Exact integer arithmetic for `n <= 64`, log-gamma above.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::domain("k", k as f64, "0 <= k <= n"));
    }
    if n <= 64 {
        Ok((binomial_u128(n, k) as f64).log2())
    } else {
        Ok(log_binomial_lgamma(n, k))
    }
}

/// Lenient variant used when building profiles: `C(n, k) = 0` outside
/// `0 <= k <= n`, reported as `-inf`.
pub fn log_binomial_or_neg_inf(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        f64::NEG_INFINITY
    } else {
        log_binomial(n as u64, k as u64).expect("k within range")
    }
}

/// The log-gamma route for `log2 C(n, k)`, valid for any `n`.
pub fn log_binomial_lgamma(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    if k == 0 || k == n {
        return 0.0;
    }
    let lg = |x: u64| libm::lgamma(x as f64 + 1.0);
    (lg(n) - lg(k) - lg(n - k)) / LN_2
}

pub(crate) fn binomial_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// `v(t) = (1 - 2t) / ln((1 - t) / t)` on the open interval `(0, 1/2)`.
pub fn v_func(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::domain("t", t, "(0, 1/2)"));
    }
    Ok((1.0 - 2.0 * t) / ((1.0 - t) / t).ln())
}

/// `g(y) = (y^2 - 1) / y - 2 ln y` for `y >= 1`.
pub fn g_func(y: f64) -> Result<f64> {
    if y.is_nan() || y < 1.0 {
        return Err(Error::domain("y", y, "[1, inf)"));
    }
    Ok((y * y - 1.0) / y - 2.0 * y.ln())
}
