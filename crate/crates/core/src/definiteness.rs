//! Randomized positive-definiteness evidence for even-order tensors.
//!
//! For even `m` and `a >= 1` the form `H x^m` is positive for every nonzero
//! `x`, so any non-positive sample there is a genuine contradiction. Outside
//! that range the check only reports what it saw.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apply::form_value;
use crate::error::{HilbertError, Result};
use crate::tensor::TensorSpec;
use crate::vector::DenseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PdRegime {
    /// Even `m`, `a >= 1`: positivity is a theorem.
    TheoremBacked,
    /// Positivity is open; samples are evidence only.
    EvidenceOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PdVerdict {
    ConsistentWithPd,
    Counterexample { x: DenseVector, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdReport {
    pub trials: usize,
    pub regime: PdRegime,
    /// Smallest observed `H x^m / ‖x‖_m^m`.
    pub min_rayleigh: f64,
    pub argmin: DenseVector,
    pub verdict: PdVerdict,
}

impl PdReport {
    /// A non-positive sample inside the theorem-backed regime.
    pub fn contradicts_theorem(&self) -> bool {
        self.regime == PdRegime::TheoremBacked
            && matches!(self.verdict, PdVerdict::Counterexample { .. })
    }
}

pub fn regime(spec: &TensorSpec) -> PdRegime {
    if spec.order().is_multiple_of(2) && spec.shift() >= 1.0 {
        PdRegime::TheoremBacked
    } else {
        PdRegime::EvidenceOnly
    }
}

/// Mixed-sign test vector for trial `trial`.
///
/// Trials cycle through Gaussian entries, uniform entries on `[-1, 1]` and
/// Gaussian entries rescaled by `10^u`, `u` uniform in `[-3, 3]`.
pub fn sample_mixed(dim: usize, seed: u64, trial: u64) -> DenseVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut coords: Vec<f64> = match trial % 3 {
        0 => (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect(),
        1 => (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        _ => (0..dim)
            .map(|_| {
                let g: f64 = StandardNormal.sample(&mut rng);
                g * 10f64.powf(rng.gen_range(-3.0..=3.0))
            })
            .collect(),
    };
    if coords.iter().all(|v| *v == 0.0) {
        coords[0] = 1.0;
    }
    DenseVector::new(coords).expect("finite non-empty sample")
}

/// Samples `trials` nonzero vectors and records the smallest normalized form.
pub fn pd_check(spec: &TensorSpec, trials: usize, seed: u64) -> Result<PdReport> {
    let n = spec.require_dim()?;
    if spec.order() % 2 == 1 {
        return Err(HilbertError::Unsupported(format!(
            "positive definiteness needs even order, got m = {}",
            spec.order()
        )));
    }
    if trials == 0 {
        return Err(HilbertError::InvalidParameter(
            "need at least one trial".into(),
        ));
    }
    let m = spec.order() as f64;
    let observed = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let x = sample_mixed(n, seed, t);
            let value = form_value(spec, &x)?;
            Ok((value, value / x.p_sum(m)))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;

    let mut min_idx = 0;
    let mut first_bad: Option<usize> = None;
    for (i, &(value, ratio)) in observed.iter().enumerate() {
        if ratio < observed[min_idx].1 {
            min_idx = i;
        }
        if first_bad.is_none() && (value.is_nan() || value <= 0.0) {
            first_bad = Some(i);
        }
    }
    let verdict = match first_bad {
        None => PdVerdict::ConsistentWithPd,
        Some(i) => PdVerdict::Counterexample {
            x: sample_mixed(n, seed, i as u64),
            value: observed[i].0,
        },
    };
    Ok(PdReport {
        trials,
        regime: regime(spec),
        min_rayleigh: observed[min_idx].1,
        argmin: sample_mixed(n, seed, min_idx as u64),
        verdict,
    })
}
