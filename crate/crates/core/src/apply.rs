//! Tensor–vector products `H x^{m-1}` and forms `H x^m`.
//!
//! `apply_naive` enumerates every index tuple and is the ground truth.
//! `apply_fast` uses the Hankel structure: component `i` equals
//! `Σ_k w_k / (i - 1 + k + a)` where `w` is the `(m-1)`-fold self-convolution
//! of `x`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convolution::self_convolve;
use crate::error::{HilbertError, Result};
use crate::tensor::{TensorSpec, Warning, DEFAULT_CONDITIONING_FLOOR};
use crate::vector::{CompensatedSum, DenseVector};

/// Output length from which the per-component loop runs on the thread pool.
const PARALLEL_MIN_LEN: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApplyMethod {
    Naive,
    Convolution,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplyResult {
    /// `H x^{m-1}`.
    pub vector: DenseVector,
    /// `H x^m = x · (H x^{m-1})`.
    pub scalar: f64,
    pub method: ApplyMethod,
    pub warnings: Vec<Warning>,
}

fn check_shape(spec: &TensorSpec, x: &DenseVector) -> Result<usize> {
    let n = spec.require_dim()?;
    if x.len() != n {
        return Err(HilbertError::Shape {
            expected: n,
            got: x.len(),
        });
    }
    Ok(n)
}

fn finish(
    spec: &TensorSpec,
    x: &DenseVector,
    components: Vec<f64>,
    method: ApplyMethod,
) -> Result<ApplyResult> {
    let vector = DenseVector::new(components)?;
    let scalar = x.dot(&vector)?;
    let n = x.len();
    Ok(ApplyResult {
        vector,
        scalar,
        method,
        warnings: spec.conditioning_warnings(spec.order() * (n - 1), DEFAULT_CONDITIONING_FLOOR),
    })
}

/// Direct `(m-1)`-fold sum, `O(n^m)`.
pub fn apply_naive(spec: &TensorSpec, x: &DenseVector) -> Result<ApplyResult> {
    let n = check_shape(spec, x)?;
    let rest = spec.order() - 1;
    let xs = x.as_slice();

    let mut acc = vec![CompensatedSum::new(); n];
    // odometer over (i_2, ..., i_m), 0-based
    let mut tuple = vec![0usize; rest];
    loop {
        let product: f64 = tuple.iter().map(|&j| xs[j]).product();
        let total: usize = tuple.iter().sum();
        if product != 0.0 {
            for (i, slot) in acc.iter_mut().enumerate() {
                slot.add(product / spec.denominator(i + total));
            }
        }
        let mut pos = 0;
        loop {
            if pos == rest {
                let components = acc.iter().map(CompensatedSum::value).collect();
                return finish(spec, x, components, ApplyMethod::Naive);
            }
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
    }
}

/// Convolution-based apply; agrees with [`apply_naive`] to rounding.
pub fn apply_fast(spec: &TensorSpec, x: &DenseVector) -> Result<ApplyResult> {
    let n = check_shape(spec, x)?;
    let profile = self_convolve(x, spec.order() - 1)?;
    let components = hankel_sums(spec.shift(), profile.weights(), n);
    finish(spec, x, components, ApplyMethod::Convolution)
}

/// `out_i = Σ_k w_k / (i - 1 + k + a)` for `i = 1..=out_len`.
///
/// Each component has a fixed summation order, so the parallel and serial
/// paths give identical bits.
pub fn hankel_sums(shift: f64, weights: &[f64], out_len: usize) -> Vec<f64> {
    let component = |row: usize| -> f64 {
        weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(k, w)| w / ((row + k) as f64 + shift))
            .collect::<CompensatedSum>()
            .value()
    };
    if out_len >= PARALLEL_MIN_LEN {
        (0..out_len).into_par_iter().map(component).collect()
    } else {
        (0..out_len).map(component).collect()
    }
}

/// `H x^m` via the fast path.
pub fn form_value(spec: &TensorSpec, x: &DenseVector) -> Result<f64> {
    Ok(apply_fast(spec, x)?.scalar)
}

fn nonzero(x: &DenseVector) -> Result<()> {
    if x.is_zero() {
        return Err(HilbertError::Degenerate(
            "Rayleigh quotient of the zero vector".into(),
        ));
    }
    Ok(())
}

/// `|H x^m| / ‖x‖_m^m`.
pub fn rayleigh_m(spec: &TensorSpec, x: &DenseVector) -> Result<f64> {
    nonzero(x)?;
    let value = form_value(spec, x)?;
    Ok(value.abs() / x.p_sum(spec.order() as f64))
}

/// `|H x^m| / ‖x‖_2^m`.
pub fn rayleigh_2(spec: &TensorSpec, x: &DenseVector) -> Result<f64> {
    nonzero(x)?;
    let value = form_value(spec, x)?;
    Ok(value.abs() / x.l2_norm().powi(spec.order() as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(m: usize, n: usize, a: f64) -> TensorSpec {
        TensorSpec::finite(m, n, a).unwrap()
    }

    fn dv(v: &[f64]) -> DenseVector {
        DenseVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn naive_selects_first_column() {
        let r = apply_naive(&spec(2, 2, 1.0), &dv(&[1.0, 0.0])).unwrap();
        assert_eq!(r.vector.as_slice(), &[1.0, 0.5]);
        assert_eq!(r.scalar, 1.0);
        assert_eq!(r.method, ApplyMethod::Naive);
    }

    #[test]
    fn naive_sum_of_hilbert_entries() {
        let r = apply_naive(&spec(2, 2, 1.0), &dv(&[1.0, 1.0])).unwrap();
        assert_relative_eq!(r.scalar, 7.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn naive_third_order_enumeration() {
        // brute force over the 8 index triples
        let mut expected = 0.0;
        for i in 1..=2 {
            for j in 1..=2 {
                for k in 1..=2 {
                    expected += 1.0 / ((i + j + k) as f64 - 3.0 + 0.5);
                }
            }
        }
        let r = apply_naive(&spec(3, 2, 0.5), &dv(&[1.0, 1.0])).unwrap();
        assert_relative_eq!(r.scalar, expected, max_relative = 1e-14);
        assert_relative_eq!(r.scalar, 5.485_714_285_714_286, max_relative = 1e-14);
    }

    #[test]
    fn fast_examples() {
        let r = apply_fast(&spec(2, 2, 1.0), &dv(&[1.0, 0.0])).unwrap();
        assert_eq!(r.vector.as_slice(), &[1.0, 0.5]);
        assert_eq!(r.method, ApplyMethod::Convolution);

        let r = apply_fast(&spec(4, 1, 2.0), &dv(&[3.0])).unwrap();
        assert_eq!(r.vector.as_slice(), &[13.5]);
        assert_eq!(r.scalar, 40.5);
    }

    #[test]
    fn shape_mismatch() {
        let s = spec(3, 3, 1.0);
        let x = dv(&[1.0, 2.0]);
        assert_eq!(
            apply_naive(&s, &x).unwrap_err(),
            HilbertError::Shape {
                expected: 3,
                got: 2
            }
        );
        assert!(apply_fast(&s, &x).is_err());
        assert!(apply_fast(&TensorSpec::infinite(2, 1.0).unwrap(), &x).is_err());
    }

    #[test]
    fn fast_matches_naive_on_mixed_signs() {
        let x = dv(&[0.7, -0.2, 0.95, -0.61, 0.33, 0.05, -0.88]);
        for &a in &[0.5, 1.0, 2.5, -0.5, -1.25, -6.5] {
            for m in 2..=4 {
                let s = spec(m, x.len(), a);
                let naive = apply_naive(&s, &x).unwrap();
                let fast = apply_fast(&s, &x).unwrap();
                for (u, v) in naive.vector.iter().zip(fast.vector.iter()) {
                    assert!(
                        (u - v).abs() <= 1e-12 * u.abs().max(1.0),
                        "m={m} a={a}: {u} vs {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn warnings_for_near_singular_shift() {
        let s = spec(2, 3, -2.000_000_000_000_1);
        let r = apply_fast(&s, &dv(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn rayleigh_examples() {
        assert_eq!(rayleigh_m(&spec(2, 2, 1.0), &dv(&[1.0, 0.0])).unwrap(), 1.0);
        assert_relative_eq!(
            rayleigh_2(&spec(2, 2, 1.0), &dv(&[0.0, 1.0])).unwrap(),
            1.0 / 3.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            rayleigh_2(&spec(3, 2, 0.5), &dv(&[1.0, 1.0])).unwrap(),
            5.485_714_285_714_286 / 2f64.powf(1.5),
            max_relative = 1e-14
        );
        for &a in &[0.5, -1.25, 3.0, -7.5] {
            for m in 2..=5 {
                let r = rayleigh_m(&spec(m, 3, a), &dv(&[-2.5, 0.0, 0.0])).unwrap();
                assert_relative_eq!(r, (1.0 / a).abs(), max_relative = 1e-14);
            }
        }
        assert!(matches!(
            rayleigh_m(&spec(2, 2, 1.0), &dv(&[0.0, 0.0])),
            Err(HilbertError::Degenerate(_))
        ));
        assert!(rayleigh_2(&spec(2, 2, 1.0), &dv(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn hankel_sums_parallel_path_matches_serial() {
        let w: Vec<f64> = (0..7).map(|k| (k as f64 - 3.0) * 0.25).collect();
        let long = hankel_sums(0.5, &w, PARALLEL_MIN_LEN + 10);
        let short = hankel_sums(0.5, &w, 10);
        assert_eq!(&long[..10], &short[..]);
    }
}
