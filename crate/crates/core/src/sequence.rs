//! Operators induced by the infinite tensor on finitely supported `l¹` inputs.
//!
//! `F∞ x = (H∞ x^{m-1})^{[1/(m-1)]}` (even `m`) and
//! `T∞ x = ‖x‖_1^{2-m} H∞ x^{m-1}` (`T∞ 0 = 0`). For finitely supported `x`
//! every component of `H∞ x^{m-1}` is a finite sum, so the first `N` output
//! components are exact; the discarded tail is controlled through
//! `|(H∞ x^{m-1})_i| ≤ ‖x‖_1^{m-1} / (i - 1 + a)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apply::hankel_sums;
use crate::convolution::self_convolve;
use crate::error::{HilbertError, Result};
use crate::tensor::{constant_c, constant_k, TensorSpec};
use crate::vector::{compensated_sum, signed_root, CompensatedSum, DenseVector};

/// Output components computed when estimating norms.
pub const DEFAULT_OUTPUT_LEN: usize = 10_000;
/// Largest support drawn by [`sample_unit_l1`].
pub const MAX_SAMPLE_SUPPORT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// `F∞`, measured in `l^p` with `m - 1 < p`.
    F,
    /// `T∞`, measured in `l^p` with `1 < p`.
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedOperatorSpec {
    kind: OperatorKind,
    order: usize,
    shift: f64,
    output_len: usize,
    p: f64,
}

impl TruncatedOperatorSpec {
    pub fn new(
        kind: OperatorKind,
        order: usize,
        shift: f64,
        output_len: usize,
        p: f64,
    ) -> Result<Self> {
        // validates order and shift admissibility
        TensorSpec::infinite(order, shift)?;
        if shift <= 0.0 {
            return Err(HilbertError::UnsupportedRegime(format!(
                "infinite-dimensional operators are only bounded for a > 0, got a = {shift}"
            )));
        }
        if output_len == 0 {
            return Err(HilbertError::InvalidParameter(
                "output length must be at least 1".into(),
            ));
        }
        if !p.is_finite() {
            return Err(HilbertError::InvalidParameter(format!(
                "exponent p must be finite, got {p}"
            )));
        }
        match kind {
            OperatorKind::F => {
                if order % 2 == 1 {
                    return Err(HilbertError::Unsupported(format!(
                        "F∞ is defined for even order only, got m = {order}"
                    )));
                }
                if p <= (order - 1) as f64 {
                    return Err(HilbertError::InvalidParameter(format!(
                        "F∞ needs p > m - 1 = {}, got {p}",
                        order - 1
                    )));
                }
            }
            OperatorKind::T => {
                if p <= 1.0 {
                    return Err(HilbertError::InvalidParameter(format!(
                        "T∞ needs p > 1, got {p}"
                    )));
                }
            }
        }
        Ok(Self {
            kind,
            order,
            shift,
            output_len,
            p,
        })
    }

    /// The norm pair of the headline bounds: `p = 2(m-1)` for `F∞`, `p = 2` for `T∞`.
    pub fn standard(
        kind: OperatorKind,
        order: usize,
        shift: f64,
        output_len: usize,
    ) -> Result<Self> {
        let p = match kind {
            OperatorKind::F => 2.0 * (order - 1) as f64,
            OperatorKind::T => 2.0,
        };
        Self::new(kind, order, shift, output_len, p)
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn output_len(&self) -> usize {
        self.output_len
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Decay exponent `s` of the dominating series `Σ (i - 1 + a)^{-s}`.
    pub fn decay_exponent(&self) -> f64 {
        match self.kind {
            OperatorKind::F => self.p / (self.order - 1) as f64,
            OperatorKind::T => self.p,
        }
    }

    pub fn is_standard(&self) -> bool {
        let p = match self.kind {
            OperatorKind::F => 2.0 * (self.order - 1) as f64,
            OperatorKind::T => 2.0,
        };
        self.p == p
    }

    /// `K(a)` or `C(a)` for the standard exponent, `None` otherwise.
    pub fn closed_form_bound(&self) -> Option<f64> {
        if !self.is_standard() {
            return None;
        }
        let tensor = TensorSpec::infinite(self.order, self.shift).ok()?;
        match self.kind {
            OperatorKind::F => constant_k(&tensor).ok(),
            OperatorKind::T => constant_c(&tensor).ok(),
        }
    }
}

/// First `N` components of `H∞ x^{m-1}` for finitely supported `x`.
pub fn apply_h_infinity(spec: &TruncatedOperatorSpec, x: &DenseVector) -> Result<Vec<f64>> {
    let profile = self_convolve(x, spec.order - 1)?;
    Ok(hankel_sums(spec.shift, profile.weights(), spec.output_len))
}

pub fn apply_f(spec: &TruncatedOperatorSpec, x: &DenseVector) -> Result<DenseVector> {
    if spec.order % 2 == 1 {
        return Err(HilbertError::Unsupported(format!(
            "F∞ is defined for even order only, got m = {}",
            spec.order
        )));
    }
    let hx = apply_h_infinity(spec, x)?;
    f_from_h(spec.order, hx)
}

fn f_from_h(order: usize, hx: Vec<f64>) -> Result<DenseVector> {
    DenseVector::new(hx.into_iter().map(|v| signed_root(v, order - 1)).collect())
}

pub fn apply_t(spec: &TruncatedOperatorSpec, x: &DenseVector) -> Result<DenseVector> {
    if x.is_zero() {
        return DenseVector::zeros(spec.output_len);
    }
    let hx = apply_h_infinity(spec, x)?;
    t_from_h(spec.order, x.l1_norm(), hx)
}

fn t_from_h(order: usize, l1: f64, hx: Vec<f64>) -> Result<DenseVector> {
    let scale = l1.powi(2 - order as i32);
    DenseVector::new(hx.into_iter().map(|v| v * scale).collect())
}

/// `‖x‖_1^{m-1} / (i - 1 + a)`, which dominates `|(H∞ x^{m-1})_i|`.
pub fn component_bound(spec: &TruncatedOperatorSpec, x_l1_norm: f64, i: usize) -> Result<f64> {
    if i == 0 {
        return Err(HilbertError::InvalidParameter(
            "component index is 1-based".into(),
        ));
    }
    if x_l1_norm.is_nan() || x_l1_norm < 0.0 {
        return Err(HilbertError::InvalidParameter(format!(
            "l1 norm must be non-negative, got {x_l1_norm}"
        )));
    }
    Ok(x_l1_norm.powi(spec.order as i32 - 1) / ((i - 1) as f64 + spec.shift))
}

/// Analytic control of `Σ_i |(Op x)_i|^p` split at the truncation level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    /// `‖x‖_1^p Σ_{i ≤ N} (i - 1 + a)^{-s}`.
    pub computed_prefix: f64,
    /// Upper bound on `‖x‖_1^p Σ_{i > N} (i - 1 + a)^{-s}`.
    pub tail_value: f64,
    pub total_bound: f64,
}

/// Tail of `Σ (i - 1 + a)^{-s}` past `N` by integral comparison.
///
/// The summand is convex, so each term is at most its integral over
/// `[i - 1/2, i + 1/2]`, giving `(N - 1/2 + a)^{1-s} / (s - 1)`.
pub fn series_tail(shift: f64, s: f64, n: usize) -> Result<f64> {
    if s.is_nan() || s <= 1.0 {
        return Err(HilbertError::DivergentExponent(s));
    }
    Ok((n as f64 - 0.5 + shift).powf(1.0 - s) / (s - 1.0))
}

pub fn tail_bound(spec: &TruncatedOperatorSpec, x_l1_norm: f64) -> Result<TailBound> {
    let s = spec.decay_exponent();
    let tail = series_tail(spec.shift, s, spec.output_len)?;
    let scale = x_l1_norm.powf(spec.p);
    // smallest terms first
    let prefix = (0..spec.output_len)
        .rev()
        .map(|k| (k as f64 + spec.shift).powf(-s))
        .collect::<CompensatedSum>()
        .value();
    let computed_prefix = scale * prefix;
    let tail_value = scale * tail;
    Ok(TailBound {
        computed_prefix,
        tail_value,
        total_bound: computed_prefix + tail_value,
    })
}

/// Both operator images of one input, sharing the `H∞ x^{m-1}` evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorImages {
    pub l1_norm: f64,
    /// First `N` components of `H∞ x^{m-1}`.
    pub h: Vec<f64>,
}

impl OperatorImages {
    pub fn compute(spec: &TruncatedOperatorSpec, x: &DenseVector) -> Result<Self> {
        Ok(Self {
            l1_norm: x.l1_norm(),
            h: apply_h_infinity(spec, x)?,
        })
    }

    /// Image under the operator selected by `spec.kind()`.
    pub fn image(&self, spec: &TruncatedOperatorSpec) -> Result<DenseVector> {
        if self.l1_norm == 0.0 {
            return DenseVector::zeros(spec.output_len);
        }
        match spec.kind {
            OperatorKind::F => f_from_h(spec.order, self.h.clone()),
            OperatorKind::T => t_from_h(spec.order, self.l1_norm, self.h.clone()),
        }
    }

    /// `(Σ_{i ≤ N} |(Op x)_i|^p + tail allowance)^{1/p}`, an upper estimate
    /// of `‖Op x‖_{l^p}`.
    pub fn norm_with_tail(&self, spec: &TruncatedOperatorSpec) -> Result<f64> {
        let image = self.image(spec)?;
        let prefix = image.p_sum(spec.p);
        let tail = tail_bound(spec, self.l1_norm)?.tail_value;
        Ok((prefix + tail).powf(1.0 / spec.p))
    }

    /// Largest violation of `|(H∞ x^{m-1})_i| ≤ component_bound`; `<= 0` when
    /// every component is dominated.
    pub fn worst_domination_excess(&self, spec: &TruncatedOperatorSpec) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for (k, v) in self.h.iter().enumerate() {
            let bound = component_bound(spec, self.l1_norm, k + 1)?;
            worst = worst.max(v.abs() - bound);
        }
        Ok(worst)
    }
}

/// `‖Op x‖_{l^p}` estimate with tail allowance for one input.
pub fn norm_with_tail(spec: &TruncatedOperatorSpec, x: &DenseVector) -> Result<f64> {
    OperatorImages::compute(spec, x)?.norm_with_tail(spec)
}

/// Random finitely supported `x` with `‖x‖_1 = 1`.
///
/// Support `1..=L` with `L` uniform in `[1, 64]`, magnitudes uniform on the
/// simplex (normalized exponentials) and Rademacher signs. Each trial draws
/// from its own ChaCha stream, so samples do not depend on evaluation order.
pub fn sample_unit_l1(seed: u64, trial: u64) -> DenseVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let support = rng.gen_range(1..=MAX_SAMPLE_SUPPORT);
    let mags: Vec<f64> = (0..support).map(|_| Exp1.sample(&mut rng)).collect();
    let total = compensated_sum(mags.iter().copied());
    let coords = mags
        .into_iter()
        .map(|v| {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            sign * v / total
        })
        .collect();
    DenseVector::new(coords).expect("finite non-empty sample")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    /// Largest per-sample estimate: a lower estimate of the operator norm.
    pub value: f64,
    /// `K(a)` / `C(a)` for the standard exponent, else the series constant.
    pub bound: f64,
    /// `(Σ_i (i - 1 + a)^{-s})^{1/p}` bounded through the tail.
    pub series_bound: f64,
    pub argmax_trial: u64,
    pub samples: usize,
    pub within_bound: bool,
}

/// Absolute slack for norm estimates against `K(a)` / `C(a)`.
pub const NORM_SLACK: f64 = 1e-9;

/// Lower estimate of `‖F∞‖` or `‖T∞‖` from random `l¹`-unit inputs.
pub fn estimate_operator_norm(
    spec: &TruncatedOperatorSpec,
    samples: usize,
    seed: u64,
) -> Result<NormEstimate> {
    if samples == 0 {
        return Err(HilbertError::InvalidParameter(
            "need at least one sample".into(),
        ));
    }
    let values = (0..samples as u64)
        .into_par_iter()
        .map(|t| norm_with_tail(spec, &sample_unit_l1(seed, t)))
        .collect::<Result<Vec<_>>>()?;
    let (argmax_trial, value) =
        values
            .iter()
            .enumerate()
            .fold((0u64, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                if v > bv {
                    (i as u64, v)
                } else {
                    (bi, bv)
                }
            });
    let series_bound = tail_bound(spec, 1.0)?.total_bound.powf(1.0 / spec.p);
    let bound = spec.closed_form_bound().unwrap_or(series_bound);
    Ok(NormEstimate {
        value,
        bound,
        series_bound,
        argmax_trial,
        samples,
        within_bound: value <= bound + NORM_SLACK,
    })
}
