use super::bits::{BitVector, CubeSet};
use crate::error::{Error, Result};

/// Largest dimension stored densely.
pub const MAX_CUBE_DIM: usize = 20;

/// A real function on `{0,1}^n`, stored as `2^n` values indexed by
/// [`BitVector::to_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                left: 1 << n,
                right: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain("function value", *v, "finite"));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(&BitVector) -> f64) -> Result<Self> {
        check_dim(n)?;
        let values = (0..1u64 << n)
            .map(|i| f(&BitVector::from_index(n, i)))
            .collect();
        Self::new(n, values)
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        check_dim(n)?;
        Self::new(n, vec![c; 1 << n])
    }

    /// `1_A`.
    pub fn indicator(set: &CubeSet) -> Result<Self> {
        let n = set.dim();
        check_dim(n)?;
        let mut values = vec![0.0; 1 << n];
        for m in set.members() {
            values[m.to_index() as usize] = 1.0;
        }
        Ok(Self { n, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, x: &BitVector) -> f64 {
        self.values[x.to_index() as usize]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_CUBE_DIM {
        Err(Error::DimensionTooLarge {
            n,
            max: MAX_CUBE_DIM,
        })
    } else {
        Ok(())
    }
}

/// Unnormalized in-place fast Walsh–Hadamard transform.
pub fn fwht(values: &mut [f64]) {
    let len = values.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in values.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// `(T_rho f)(y) = E[f(X) | Y = y]`.
///
/// Scales the Walsh coefficient of each character `chi_S` by `rho^|S|`.
pub fn noise_operator(f: &CubeFunction, rho: f64) -> Result<CubeFunction> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain("rho", rho, "[0, 1]"));
    }
    let n = f.n;
    let mut coeffs = f.values.clone();
    fwht(&mut coeffs);
    let pows: Vec<f64> = (0..=n as i32).map(|k| rho.powi(k)).collect();
    let scale = 1.0 / coeffs.len() as f64;
    for (s, c) in coeffs.iter_mut().enumerate() {
        *c *= pows[s.count_ones() as usize] * scale;
    }
    fwht(&mut coeffs);
    Ok(CubeFunction { n, values: coeffs })
}

/// `||f||_p = E[|f|^p]^{1/p}` under the uniform measure.
pub fn p_norm(f: &CubeFunction, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain("p", p, "[1, inf)"));
    }
    if p.is_infinite() {
        return Ok(f.values.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let mean = f.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / f.values.len() as f64;
    Ok(mean.powf(1.0 / p))
}

/// `(f, g) = E[f g]`.
pub fn inner_product(f: &CubeFunction, g: &CubeFunction) -> Result<f64> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch {
            left: f.n,
            right: g.n,
        });
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / f.values.len() as f64)
}
