//! Base-2 log-domain accumulation.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// `log2 x` for an arbitrary-precision integer; `-inf` for zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().expect("fits in u64") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("top 64 bits");
    (top as f64).log2() + shift as f64
}

/// Streaming `log2 Σ 2^{x_i}` with compensated summation.
///
/// Terms are kept relative to the running maximum; the sum is rescaled when
/// a larger term arrives.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp2 {
    max: f64,
    sum: f64,
    comp: f64,
}

impl Default for LogSumExp2 {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp2 {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            let scale = (self.max - x).exp2();
            self.sum *= scale;
            self.comp *= scale;
            self.max = x;
            self.add(1.0);
        } else {
            self.add((x - self.max).exp2());
        }
    }

    // Neumaier summation
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + (self.sum + self.comp).log2()
        }
    }
}

impl FromIterator<f64> for LogSumExp2 {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}
