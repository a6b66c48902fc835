use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{HilbertError, Result};

/// Neumaier-compensated running sum.
///
/// Addition order is fixed by the caller, so results are reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

/// A finite, non-empty real coordinate vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(HilbertError::InvalidParameter(
                "vector must be non-empty".into(),
            ));
        }
        if let Some(pos) = coords.iter().position(|v| !v.is_finite()) {
            return Err(HilbertError::InvalidParameter(format!(
                "vector component {} is not finite",
                pos + 1
            )));
        }
        Ok(Self(coords))
    }

    /// Zero vector of length `len` (`len >= 1`).
    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![0.0; len])
    }

    /// Indicator of the 1-based coordinate `at` in dimension `len`.
    pub fn one_hot(len: usize, at: usize) -> Result<Self> {
        if at == 0 || at > len {
            return Err(HilbertError::InvalidParameter(format!(
                "one-hot position {at} outside 1..={len}"
            )));
        }
        let mut v = vec![0.0; len];
        v[at - 1] = 1.0;
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn l1_norm(&self) -> f64 {
        compensated_sum(self.0.iter().map(|v| v.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        self.p_norm(2.0)
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `(Σ |x_i|^p)^{1/p}`, computed with max-scaling to avoid overflow.
    pub fn p_norm(&self, p: f64) -> f64 {
        let scale = self.max_norm();
        if scale == 0.0 {
            return 0.0;
        }
        if p == 1.0 {
            return self.l1_norm();
        }
        scale * self.p_sum_scaled(p, scale).powf(1.0 / p)
    }

    /// `Σ |x_i|^p` without the final root.
    pub fn p_sum(&self, p: f64) -> f64 {
        let scale = self.max_norm();
        if scale == 0.0 {
            return 0.0;
        }
        scale.powf(p) * self.p_sum_scaled(p, scale)
    }

    fn p_sum_scaled(&self, p: f64, scale: f64) -> f64 {
        compensated_sum(self.0.iter().map(|v| (v.abs() / scale).powf(p)))
    }

    pub fn dot(&self, other: &DenseVector) -> Result<f64> {
        if self.len() != other.len() {
            return Err(HilbertError::Shape {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(compensated_sum(
            self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b),
        ))
    }

    pub fn scaled(&self, factor: f64) -> Result<DenseVector> {
        DenseVector::new(self.0.iter().map(|v| v * factor).collect())
    }

    /// Componentwise `x_i^k`.
    pub fn powi(&self, k: i32) -> DenseVector {
        DenseVector(self.0.iter().map(|v| v.powi(k)).collect())
    }
}

impl Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for DenseVector {
    type Error = HilbertError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DenseVector> for Vec<f64> {
    fn from(v: DenseVector) -> Self {
        v.0
    }
}

impl AsRef<[f64]> for DenseVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Sign-preserving real `k`-th root.
#[inline]
pub fn signed_root(v: f64, k: usize) -> f64 {
    match k {
        1 => v,
        3 => v.cbrt(),
        _ => v.signum() * v.abs().powf(1.0 / k as f64),
    }
}
