//! Integral representation of `H x^m` for `a >= 1`.
//!
//! Each entry equals `∫_0^1 t^{s + a - 1} dt`, so
//! `H x^m = ∫_0^1 t^{a-1} (Σ_i x_i t^{i-1})^m dt`, evaluated here by
//! Gauss–Legendre quadrature. This path shares no code with the sums in
//! [`crate::apply`] and serves as an independent check on them.

use serde::{Deserialize, Serialize};

use crate::error::{HilbertError, Result};
use crate::tensor::TensorSpec;
use crate::vector::{CompensatedSum, DenseVector};

/// Node count ceiling for the adaptive rule.
pub const MAX_NODES: usize = 4096;
/// Relative agreement between successive doublings that stops refinement.
pub const REFINE_TOL: f64 = 1e-10;

const SUBSTITUTION_POWER: i32 = 4;

/// Gauss–Legendre rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `k`-point rule, exact for polynomials of degree `2k - 1`.
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; k];
        let mut weights = vec![0.0; k];
        let kf = k as f64;
        for i in 0..k.div_ceil(2) {
            // Newton iteration on P_k starting from the Chebyshev-like guess.
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(k, z);
                dp = d;
                let step = p / d;
                z -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(k, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            // map [-1, 1] -> [0, 1]
            nodes[i] = 0.5 * (1.0 - z);
            nodes[k - 1 - i] = 0.5 * (1.0 + z);
            weights[i] = 0.5 * w;
            weights[k - 1 - i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .collect::<CompensatedSum>()
            .value()
    }
}

/// `(P_k(z), P_k'(z))` by the three-term recurrence.
fn legendre_with_derivative(k: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub nodes: usize,
    /// False when adaptive refinement hit [`MAX_NODES`] first.
    pub converged: bool,
}

/// Node count that integrates the `a = 1` polynomial integrand exactly,
/// padded by two and never below 16.
pub fn exact_node_count(order: usize, dim: usize) -> usize {
    ((order * (dim - 1) + 1).div_ceil(2) + 2).max(16)
}

/// Quadrature estimate of `H x^m`; `nodes = None` picks the count automatically.
pub fn quadrature_scalar(spec: &TensorSpec, x: &DenseVector, nodes: Option<usize>) -> Result<f64> {
    Ok(quadrature_estimate(spec, x, nodes)?.value)
}

pub fn quadrature_estimate(
    spec: &TensorSpec,
    x: &DenseVector,
    nodes: Option<usize>,
) -> Result<QuadratureEstimate> {
    let n = spec.require_dim()?;
    let a = spec.shift();
    if a < 1.0 {
        return Err(HilbertError::Unsupported(format!(
            "integral representation requires a >= 1, got a = {a}"
        )));
    }
    if x.len() != n {
        return Err(HilbertError::Shape {
            expected: n,
            got: x.len(),
        });
    }
    let m = spec.order() as i32;
    let coeffs = x.as_slice();
    let poly = |t: f64| coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c);
    // Non-integer a: t = u^4 turns the weight t^{a-1} into 4 u^{4a-1},
    // smooth enough at 0 for fast Gauss–Legendre convergence.
    let integer_shift = a.fract() == 0.0;
    let integrand = |u: f64| {
        if integer_shift {
            u.powi(a as i32 - 1) * poly(u).powi(m)
        } else {
            let t = u.powi(SUBSTITUTION_POWER);
            SUBSTITUTION_POWER as f64
                * u.powf(SUBSTITUTION_POWER as f64 * a - 1.0)
                * poly(t).powi(m)
        }
    };

    if let Some(k) = nodes {
        if k == 0 {
            return Err(HilbertError::InvalidParameter(
                "node count must be positive".into(),
            ));
        }
        return Ok(QuadratureEstimate {
            value: GaussLegendre::new(k).integrate(integrand),
            nodes: k,
            converged: true,
        });
    }

    let start = exact_node_count(spec.order(), n);
    if a == 1.0 {
        return Ok(QuadratureEstimate {
            value: GaussLegendre::new(start).integrate(integrand),
            nodes: start,
            converged: true,
        });
    }

    let mut k = start.min(MAX_NODES);
    let mut prev = GaussLegendre::new(k).integrate(integrand);
    while k < MAX_NODES {
        let next_k = (2 * k).min(MAX_NODES);
        let next = GaussLegendre::new(next_k).integrate(integrand);
        let done = (next - prev).abs() <= REFINE_TOL * next.abs();
        k = next_k;
        prev = next;
        if done {
            return Ok(QuadratureEstimate {
                value: prev,
                nodes: k,
                converged: true,
            });
        }
    }
    Ok(QuadratureEstimate {
        value: prev,
        nodes: k,
        converged: false,
    })
}
