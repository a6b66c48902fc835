//! Generalized Hilbert tensors and their closed-form constants.
//!
//! An order-`m` tensor with shift `a` has entries
//! `1 / (i_1 + ... + i_m - m + a)` for 1-based indices, so every entry is a
//! function of the index total `s = Σ (i_k - 1)` alone. Finite tensors restrict
//! the indices to `1..=n`; infinite ones leave them unbounded.

use serde::{Deserialize, Serialize};

use crate::error::{HilbertError, Result};

/// `π² / 6`, the value of `Σ 1/i²`.
pub const PI_SQUARED_OVER_6: f64 = 1.644_934_066_848_226_4;

/// Denominators with magnitude below this trigger a conditioning warning.
pub const DEFAULT_CONDITIONING_FLOOR: f64 = 1e-12;

/// Returns `true` iff `a` is an admissible shift, i.e. not in `{0, -1, -2, ...}`.
///
/// The integer test is exact on the representable value, so `-1.9999999999`
/// is admissible.
pub fn validate_shift(a: f64) -> Result<bool> {
    if !a.is_finite() {
        return Err(HilbertError::InvalidParameter(format!(
            "shift must be finite, got {a}"
        )));
    }
    Ok(!(a <= 0.0 && a == a.floor()))
}

/// Non-fatal numerical diagnostics attached to results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// `|s + a|` fell below the conditioning floor for index total `s`.
    SmallDenominator {
        index_total: usize,
        denominator: f64,
        floor: f64,
    },
}

/// The triple `(m, n, a)`; `dim == None` denotes the infinite tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorSpec {
    order: usize,
    dim: Option<usize>,
    shift: f64,
}

impl TensorSpec {
    pub fn finite(order: usize, dim: usize, shift: f64) -> Result<Self> {
        if dim == 0 {
            return Err(HilbertError::InvalidParameter(
                "dimension n must be at least 1".into(),
            ));
        }
        Self::build(order, Some(dim), shift)
    }

    pub fn infinite(order: usize, shift: f64) -> Result<Self> {
        Self::build(order, None, shift)
    }

    fn build(order: usize, dim: Option<usize>, shift: f64) -> Result<Self> {
        if order < 2 {
            return Err(HilbertError::InvalidParameter(format!(
                "order m must be at least 2, got {order}"
            )));
        }
        if !validate_shift(shift)? {
            return Err(HilbertError::ExcludedShift(shift));
        }
        Ok(Self { order, dim, shift })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn is_finite(&self) -> bool {
        self.dim.is_some()
    }

    /// Dimension of a finite spec, or a shape error for the infinite one.
    pub fn require_dim(&self) -> Result<usize> {
        self.dim.ok_or_else(|| {
            HilbertError::Unsupported("operation requires a finite-dimensional tensor".into())
        })
    }

    /// Largest index total `m(n-1)` of a finite tensor.
    pub fn max_index_total(&self) -> Option<usize> {
        self.dim.map(|n| self.order * (n - 1))
    }

    /// `s + a`, the denominator shared by every entry with index total `s`.
    #[inline]
    pub fn denominator(&self, index_total: usize) -> f64 {
        index_total as f64 + self.shift
    }

    /// Entry value for a given index total.
    #[inline]
    pub fn entry_at_total(&self, index_total: usize) -> f64 {
        1.0 / self.denominator(index_total)
    }

    /// Warnings for every index total in `0..=max_total` whose denominator
    /// drops below `floor` in magnitude.
    pub fn conditioning_warnings(&self, max_total: usize, floor: f64) -> Vec<Warning> {
        // |s + a| < floor can only happen for s next to -a.
        if self.shift >= 0.0 {
            return Vec::new();
        }
        let centre = -self.shift;
        let lo = (centre - 1.0).floor().max(0.0) as usize;
        let hi = ((centre + 1.0).ceil() as usize).min(max_total);
        (lo..=hi)
            .filter_map(|s| {
                let d = self.denominator(s);
                (d.abs() < floor).then_some(Warning::SmallDenominator {
                    index_total: s,
                    denominator: d,
                    floor,
                })
            })
            .collect()
    }
}

/// A 1-based multi-index `(i_1, ..., i_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.contains(&0) {
            return Err(HilbertError::InvalidParameter(format!(
                "multi-index components are 1-based, got {indices:?}"
            )));
        }
        Ok(Self(indices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ (i_k - 1)`.
    pub fn index_total(&self) -> usize {
        self.0.iter().map(|&i| i - 1).sum()
    }
}

/// An entry value together with its conditioning diagnostic, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: f64,
    pub warning: Option<Warning>,
}

pub fn entry(spec: &TensorSpec, idx: &MultiIndex) -> Result<Entry> {
    entry_with_floor(spec, idx, DEFAULT_CONDITIONING_FLOOR)
}

pub fn entry_with_floor(spec: &TensorSpec, idx: &MultiIndex, floor: f64) -> Result<Entry> {
    if idx.len() != spec.order() {
        return Err(HilbertError::IndexArity {
            got: idx.len(),
            order: spec.order(),
        });
    }
    if let Some(n) = spec.dim() {
        if idx.as_slice().iter().any(|&i| i > n) {
            return Err(HilbertError::IndexOutOfRange {
                index: idx.as_slice().to_vec(),
                dim: n,
            });
        }
    }
    let s = idx.index_total();
    let d = spec.denominator(s);
    let warning = (d.abs() < floor).then_some(Warning::SmallDenominator {
        index_total: s,
        denominator: d,
        floor,
    });
    Ok(Entry {
        value: 1.0 / d,
        warning,
    })
}

/// `1 / min{a - ⌊a⌋, 1 + ⌊a⌋ - a}`: reciprocal distance from `a` to the integers.
fn reciprocal_integer_gap(a: f64) -> f64 {
    let fl = a.floor();
    1.0 / (a - fl).min(1.0 + fl - a)
}

/// Uniform bound `N(a)` on `|entry|` of the infinite tensor.
pub fn constant_n(spec: &TensorSpec) -> f64 {
    let a = spec.shift();
    if a > 0.0 {
        1.0 / a
    } else {
        reciprocal_integer_gap(a)
    }
}

/// Which case of the three-branch definition of `M(a)` applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MBranch {
    /// `a > 0`: `1/a`.
    Positive,
    /// `-m(n-1) < a < 0`: reciprocal distance to the nearest integer.
    Interior,
    /// `a < -m(n-1)`: every denominator is negative, the largest is `m(n-1) + a`.
    BelowRange,
}

/// Bound `M(a)` on `|entry|` of the finite tensor, with the branch used.
pub fn constant_m(spec: &TensorSpec) -> Result<(f64, MBranch)> {
    let n = spec.require_dim()?;
    let a = spec.shift();
    let edge = -((spec.order() * (n - 1)) as f64);
    if a > 0.0 {
        Ok((1.0 / a, MBranch::Positive))
    } else if a > edge {
        Ok((reciprocal_integer_gap(a), MBranch::Interior))
    } else {
        // a == edge is a non-positive integer and rejected at construction.
        Ok((1.0 / (edge - a), MBranch::BelowRange))
    }
}

/// `K(a)`, the bound on `‖F∞‖` from `l¹` into `l^{2(m-1)}`.
pub fn constant_k(spec: &TensorSpec) -> Result<f64> {
    let base = c_squared(spec.shift(), "K")?;
    Ok(base.powf(1.0 / (2.0 * (spec.order() - 1) as f64)))
}

/// `C(a)`, the bound on `‖T∞‖` from `l¹` into `l²`.
pub fn constant_c(spec: &TensorSpec) -> Result<f64> {
    Ok(c_squared(spec.shift(), "C")?.sqrt())
}

fn c_squared(a: f64, name: &'static str) -> Result<f64> {
    if a <= 0.0 {
        return Err(HilbertError::UndefinedConstant { name, shift: a });
    }
    Ok(if a < 1.0 {
        1.0 / (a * a) + PI_SQUARED_OVER_6
    } else {
        PI_SQUARED_OVER_6
    })
}

/// All closed-form constants of a spec; `None` where a constant is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsBundle {
    pub big_n: f64,
    pub big_m: Option<f64>,
    pub m_branch: Option<MBranch>,
    pub big_k: Option<f64>,
    pub big_c: Option<f64>,
}

impl ConstantsBundle {
    pub fn for_spec(spec: &TensorSpec) -> Self {
        let m = constant_m(spec).ok();
        Self {
            big_n: constant_n(spec),
            big_m: m.map(|(v, _)| v),
            m_branch: m.map(|(_, b)| b),
            big_k: constant_k(spec).ok(),
            big_c: constant_c(spec).ok(),
        }
    }
}
