use std::f64::consts::PI;

use hilbert_tensor::apply::form_value;
use hilbert_tensor::spectral::{h_power_method, DEFAULT_MAX_ITER, DEFAULT_TOL};
use hilbert_tensor::{
    apply_fast, check_h_bound, check_z_bound, dense_matrix_eigen, h_spectral_radius, rayleigh_2,
    rayleigh_m, z_spectral_radius, DenseVector, TensorSpec, ZOptions,
};
use proptest::prelude::*;

fn h_residual(spec: &TensorSpec, x: &DenseVector, lambda: f64) -> f64 {
    let y = apply_fast(spec, x).unwrap().vector;
    let m = spec.order() as i32;
    y.iter()
        .zip(x.iter())
        .map(|(yi, xi)| (yi - lambda * xi.powi(m - 1)).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn z_residual(spec: &TensorSpec, x: &DenseVector, mu: f64) -> f64 {
    let y = apply_fast(spec, x).unwrap().vector;
    y.iter()
        .zip(x.iter())
        .map(|(yi, xi)| (yi - mu * xi).powi(2))
        .sum::<f64>()
        .sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn matrix_case_matches_dense(n in 1usize..=10, a in 0.1f64..5.0) {
        let spec = TensorSpec::finite(2, n, a).unwrap();
        let oracle = dense_matrix_eigen(&spec).unwrap()[0].value;
        let h = h_spectral_radius(&spec, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let z = z_spectral_radius(&spec, &ZOptions::default()).unwrap();
        prop_assert!((h.value - oracle).abs() <= 1e-8 * oracle);
        prop_assert!((z.value.abs() - oracle).abs() <= 1e-8 * oracle);
    }

    #[test]
    fn converged_estimates_obey_bounds(m in 2usize..=4, n in 1usize..=6, a in 0.1f64..5.0) {
        let spec = TensorSpec::finite(m, n, a).unwrap();
        let h = h_spectral_radius(&spec, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(h.converged);
        prop_assert!(h.value > 0.0);
        prop_assert!(h.value <= (n as f64).powi(m as i32 - 1) / a * (1.0 + 1e-9));
        prop_assert!(h.residual <= DEFAULT_TOL * h.value * 1.0001);
        prop_assert!(h_residual(&spec, &h.vector, h.value) <= 1e-9 * h.value);

        let z = z_spectral_radius(&spec, &ZOptions::default()).unwrap();
        prop_assert!(z.converged);
        prop_assert!(z.value.abs() <= (n as f64).powf(m as f64 / 2.0) / a * (1.0 + 1e-9));
        prop_assert!((z.vector.l2_norm() - 1.0).abs() <= 1e-12);
        prop_assert!(z_residual(&spec, &z.vector, z.value) <= 1e-9 * z.value.abs());
    }

    #[test]
    fn power_brackets_tighten(m in 2usize..=5, n in 2usize..=8, a in 0.1f64..5.0) {
        let spec = TensorSpec::finite(m, n, a).unwrap();
        let run = h_power_method(&spec, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        for pair in run.brackets.windows(2) {
            prop_assert!(pair[1].lower >= pair[0].lower - 1e-12 * pair[0].lower);
            prop_assert!(pair[1].upper <= pair[0].upper + 1e-12 * pair[0].upper);
            prop_assert!(pair[1].lower <= pair[1].upper * (1.0 + 1e-12));
        }
    }

    #[test]
    fn reports_invariant_under_vector_scale(
        m in prop::sample::select(vec![2usize, 4]),
        n in 1usize..=5,
        a in 0.2f64..4.0,
        c in 1e-3f64..1e3,
    ) {
        let spec = TensorSpec::finite(m, n, a).unwrap();
        let h = h_spectral_radius(&spec, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let z = z_spectral_radius(&spec, &ZOptions::default()).unwrap();
        let hv = rayleigh_m(&spec, &h.vector).unwrap();
        let hv_scaled = rayleigh_m(&spec, &h.vector.scaled(c).unwrap()).unwrap();
        let zv = rayleigh_2(&spec, &z.vector).unwrap();
        let zv_scaled = rayleigh_2(&spec, &z.vector.scaled(c).unwrap()).unwrap();
        prop_assert!((hv - hv_scaled).abs() <= 1e-12 * hv);
        prop_assert!((zv - zv_scaled).abs() <= 1e-12 * zv);
        prop_assert!((hv - h.value).abs() <= 1e-9 * h.value);

        let mut rescaled = h.clone();
        rescaled.vector = h.vector.scaled(c).unwrap();
        prop_assert_eq!(
            check_h_bound(&spec, &h).unwrap().holds(),
            check_h_bound(&spec, &rescaled).unwrap().holds()
        );
        let mut rescaled = z.clone();
        rescaled.vector = z.vector.scaled(c).unwrap();
        prop_assert_eq!(
            check_z_bound(&spec, &z).unwrap(),
            check_z_bound(&spec, &rescaled).unwrap()
        );
    }
}

/// Brute-force maxima over the unit circles of the 4-norm and 2-norm.
fn circle_maxima(spec: &TensorSpec) -> (f64, f64) {
    let steps = 200_000;
    let mut h_best = f64::NEG_INFINITY;
    let mut z_best = f64::NEG_INFINITY;
    for k in 0..steps {
        let theta = 2.0 * PI * k as f64 / steps as f64;
        let x = DenseVector::new(vec![theta.cos(), theta.sin()]).unwrap();
        let value = form_value(spec, &x).unwrap();
        h_best = h_best.max(value / x.p_sum(4.0));
        z_best = z_best.max(value);
    }
    (h_best, z_best)
}

#[test]
fn quartic_two_dimensional_grid_oracle() {
    let spec = TensorSpec::finite(4, 2, 1.0).unwrap();
    let (h_grid, z_grid) = circle_maxima(&spec);
    let h = h_spectral_radius(&spec, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
    let z = z_spectral_radius(&spec, &ZOptions::default()).unwrap();
    assert!(
        (h.value - h_grid).abs() <= 1e-4,
        "{} vs grid {h_grid}",
        h.value
    );
    assert!(
        (z.value - z_grid).abs() <= 1e-4,
        "{} vs grid {z_grid}",
        z.value
    );
    assert!(h.value >= h_grid * (1.0 - 1e-12));
}

#[test]
fn z_restarts_reproducible() {
    let spec = TensorSpec::finite(3, 5, -0.5).unwrap();
    let opts = ZOptions {
        seed: 17,
        ..ZOptions::default()
    };
    assert_eq!(
        z_spectral_radius(&spec, &opts).unwrap(),
        z_spectral_radius(&spec, &opts).unwrap()
    );
}
