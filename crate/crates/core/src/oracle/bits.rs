use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};

/// A point of `{0,1}^n`, packed 64 coordinates per word.
///
/// Coordinate `j` lives in bit `j % 64` of word `j / 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl BitVector {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            words: vec![0; word_count(n)],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut v = Self::zeros(n);
        for j in 0..n {
            v.set(j, true);
        }
        v
    }

    /// Builds the vector whose coordinate `j` is bit `j` of `index` (`n <= 64`).
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(n <= 64);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self {
            n,
            words: if n == 0 { vec![] } else { vec![index & mask] },
        }
    }

    /// Inverse of [`BitVector::from_index`].
    pub fn to_index(&self) -> u64 {
        assert!(self.n <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            v.set(j, b);
        }
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.n);
        (self.words[j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, j: usize, bit: bool) {
        assert!(j < self.n);
        let m = 1u64 << (j % 64);
        if bit {
            self.words[j / 64] |= m;
        } else {
            self.words[j / 64] &= !m;
        }
    }

    /// Hamming weight `|x|`.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hamming distance via population count of the XOR.
    #[inline]
    pub fn distance(&self, other: &Self) -> usize {
        debug_assert_eq!(self.n, other.n);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// XOR with the all-ones vector.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        if let Some(last) = out.words.last_mut() {
            let tail = self.n % 64;
            if tail != 0 {
                *last &= (1u64 << tail) - 1;
            }
        }
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A nonempty set of distinct points of `{0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSet {
    n: usize,
    members: Vec<BitVector>,
}

impl CubeSet {
    pub fn new(n: usize, members: Vec<BitVector>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut seen = HashSet::with_capacity(members.len());
        for (idx, m) in members.iter().enumerate() {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: m.dim(),
                });
            }
            if !seen.insert(m) {
                return Err(Error::SetFormat {
                    line: idx + 2,
                    message: format!("duplicate member {m}"),
                });
            }
        }
        Ok(Self { n, members })
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let members = indices
            .into_iter()
            .map(|i| BitVector::from_index(n, i))
            .collect();
        Self::new(n, members)
    }

    /// The Hamming sphere `S_w` of weight-`w` vectors centered at zero.
    pub fn sphere(n: usize, w: usize) -> Result<Self> {
        if w > n {
            return Err(Error::domain("weight", w as f64, "0 <= w <= n"));
        }
        let mut members = Vec::new();
        let mut chosen: Vec<usize> = (0..w).collect();
        loop {
            let mut v = BitVector::zeros(n);
            for &j in &chosen {
                v.set(j, true);
            }
            members.push(v);
            // next combination in lexicographic order
            let mut i = w;
            while i > 0 && chosen[i - 1] == n - w + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            chosen[i - 1] += 1;
            for k in i..w {
                chosen[k] = chosen[k - 1] + 1;
            }
        }
        Self::new(n, members)
    }

    /// All of `{0,1}^n` (`n <= 24`).
    pub fn full(n: usize) -> Result<Self> {
        if n > 24 {
            return Err(Error::DimensionTooLarge { n, max: 24 });
        }
        Self::from_indices(n, 0..(1u64 << n))
    }

    /// Uniformly random subset of the given size (`n <= 63`).
    pub fn random<R: Rng + ?Sized>(n: usize, size: usize, rng: &mut R) -> Result<Self> {
        if n > 63 {
            return Err(Error::DimensionTooLarge { n, max: 63 });
        }
        let total = 1u64 << n;
        if size == 0 || size as u64 > total {
            return Err(Error::domain("set size", size as f64, "1 <= size <= 2^n"));
        }
        let members = if n <= 20 {
            sample(rng, total as usize, size)
                .into_iter()
                .map(|i| BitVector::from_index(n, i as u64))
                .collect()
        } else {
            let mut seen = HashSet::with_capacity(size);
            while seen.len() < size {
                seen.insert(rng.gen_range(0..total));
            }
            let mut idx: Vec<u64> = seen.into_iter().collect();
            idx.sort_unstable();
            idx.into_iter()
                .map(|i| BitVector::from_index(n, i))
                .collect()
        };
        Self::new(n, members)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always false; kept for the `len`/`is_empty` pair.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[BitVector] {
        &self.members
    }

    /// `log2 |A| / n`.
    pub fn rate(&self) -> f64 {
        (self.len() as f64).log2() / self.n as f64
    }

    /// Parses the set file format: a first line `n=<int>`, then one member
    /// per line written as exactly `n` characters from `{0,1}`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::SetFormat {
            line: 1,
            message: "missing header `n=<int>`".into(),
        })?;
        let n: usize = header
            .trim_end_matches('\r')
            .strip_prefix("n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::SetFormat {
                line: 1,
                message: format!("expected `n=<int>`, found `{header}`"),
            })?;
        if n == 0 {
            return Err(Error::SetFormat {
                line: 1,
                message: "dimension must be positive".into(),
            });
        }
        let mut members = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.len() != n {
                return Err(Error::SetFormat {
                    line: line_no,
                    message: format!("expected {n} characters, found {}", line.len()),
                });
            }
            let mut v = BitVector::zeros(n);
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => v.set(j, true),
                    other => {
                        return Err(Error::SetFormat {
                            line: line_no,
                            message: format!("invalid character `{other}`"),
                        })
                    }
                }
            }
            if !seen.insert(v.clone()) {
                return Err(Error::SetFormat {
                    line: line_no,
                    message: format!("duplicate member {line}"),
                });
            }
            members.push(v);
        }
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self { n, members })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_set_file(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for m in &self.members {
            out.push_str(&m.to_string());
            out.push('\n');
        }
        out
    }
}

/// `1^n + B`: every member XORed with the all-ones vector.
pub fn complement_set(set: &CubeSet) -> CubeSet {
    CubeSet {
        n: set.n,
        members: set.members.iter().map(BitVector::complement).collect(),
    }
}
