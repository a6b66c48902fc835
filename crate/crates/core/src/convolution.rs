//! Repeated self-convolution of a coefficient vector.
//!
//! For `x = (x_1, ..., x_n)` the profile of `folds = m - 1` holds the
//! coefficients of `(Σ x_i t^{i-1})^{m-1}`: weight `k` is the sum of
//! `x_{i_2} ⋯ x_{i_m}` over all index tuples with `Σ (i_j - 1) = k`.

use realfft::num_complex::Complex;
use realfft::RealFftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{HilbertError, Result};
use crate::vector::{CompensatedSum, DenseVector};

/// Product length above which transform-based convolution is used.
pub const DEFAULT_CROSSOVER: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionProfile {
    weights: Vec<f64>,
}

impl ConvolutionProfile {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }
}

pub fn self_convolve(x: &DenseVector, folds: usize) -> Result<ConvolutionProfile> {
    self_convolve_with(x, folds, DEFAULT_CROSSOVER)
}

/// As [`self_convolve`] with an explicit direct/transform crossover length.
pub fn self_convolve_with(
    x: &DenseVector,
    folds: usize,
    crossover: usize,
) -> Result<ConvolutionProfile> {
    if folds == 0 {
        return Err(HilbertError::InvalidParameter(
            "self-convolution needs at least one fold".into(),
        ));
    }
    let base = x.as_slice();
    let mut acc = base.to_vec();
    for _ in 1..folds {
        let product_len = acc.len() + base.len() - 1;
        acc = if product_len > crossover {
            convolve_fft(&acc, base)
        } else {
            convolve_direct(&acc, base)
        };
    }
    Ok(ConvolutionProfile { weights: acc })
}

/// Schoolbook linear convolution with compensated accumulation.
pub fn convolve_direct(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a.len() + b.len() - 1;
    (0..len)
        .map(|k| {
            let lo = k.saturating_sub(b.len() - 1);
            let hi = k.min(a.len() - 1);
            (lo..=hi)
                .map(|i| a[i] * b[k - i])
                .collect::<CompensatedSum>()
                .value()
        })
        .collect()
}

/// Linear convolution through real-to-complex transforms zero-padded to the
/// next power of two.
pub fn convolve_fft(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();

    let mut planner = RealFftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let spectrum = |src: &[f64]| -> Vec<Complex<f64>> {
        let mut buf = forward.make_input_vec();
        buf[..src.len()].copy_from_slice(src);
        let mut out = forward.make_output_vec();
        forward
            .process(&mut buf, &mut out)
            .expect("buffer lengths come from the plan");
        out
    };
    let fa = spectrum(a);
    let fb = spectrum(b);
    let mut prod: Vec<Complex<f64>> = fa.iter().zip(&fb).map(|(u, v)| u * v).collect();
    // The DC and Nyquist bins of a real signal are real; drop rounding residue.
    prod[0].im = 0.0;
    if let Some(last) = prod.last_mut() {
        last.im = 0.0;
    }

    let mut time = inverse.make_output_vec();
    inverse
        .process(&mut prod, &mut time)
        .expect("buffer lengths come from the plan");
    let scale = 1.0 / size as f64;
    time.truncate(out_len);
    time.iter_mut().for_each(|v| *v *= scale);
    time
}
