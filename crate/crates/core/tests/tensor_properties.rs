use hilbert_tensor::{constant_m, constant_n, entry, MBranch, MultiIndex, TensorSpec};
use proptest::prelude::*;

fn all_indices(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

fn non_integer_shift() -> impl Strategy<Value = f64> {
    (-12.0f64..6.0).prop_filter("not a non-positive integer", |a| {
        *a > 0.0 || (a - a.round()).abs() > 1e-3
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn entries_bounded_by_constants(m in 2usize..=4, n in 1usize..=5, a in non_integer_shift()) {
        let spec = TensorSpec::finite(m, n, a).unwrap();
        let big_n = constant_n(&spec);
        let (big_m, _) = constant_m(&spec).unwrap();
        for idx in all_indices(m, n) {
            let v = entry(&spec, &MultiIndex::new(idx).unwrap()).unwrap().value.abs();
            prop_assert!(v <= big_n * (1.0 + 1e-12));
            prop_assert!(v <= big_m * (1.0 + 1e-12));
        }
    }

    #[test]
    fn positive_shift_entries_decrease(m in 2usize..=5, n in 1usize..=8, a in 0.01f64..10.0) {
        let spec = TensorSpec::finite(m, n, a).unwrap();
        let mut previous = f64::INFINITY;
        for total in 0..=m * (n - 1) {
            let v = spec.entry_at_total(total);
            prop_assert!(v > 0.0 && v < previous);
            previous = v;
        }
    }

    #[test]
    fn entry_symmetric(
        idx in prop::collection::vec(1usize..=9, 2..=6),
        a in non_integer_shift(),
        seed in any::<u64>(),
    ) {
        let spec = TensorSpec::finite(idx.len(), 9, a).unwrap();
        let reference = entry(&spec, &MultiIndex::new(idx.clone()).unwrap()).unwrap().value;
        let mut perm = idx.clone();
        perm.rotate_left((seed as usize) % idx.len());
        perm.reverse();
        let v = entry(&spec, &MultiIndex::new(perm).unwrap()).unwrap().value;
        prop_assert_eq!(v.to_bits(), reference.to_bits());
    }

    #[test]
    fn m_equals_n_outside_far_negative(m in 2usize..=5, n in 1usize..=6, a in non_integer_shift()) {
        let spec = TensorSpec::finite(m, n, a).unwrap();
        let (big_m, branch) = constant_m(&spec).unwrap();
        if branch != MBranch::BelowRange {
            prop_assert_eq!(big_m, constant_n(&spec));
        } else {
            prop_assert!(a < -((m * (n - 1)) as f64));
            prop_assert!(big_m <= constant_n(&spec));
        }
    }
}

#[test]
fn excluded_shifts_rejected() {
    for a in [0.0, -1.0, -2.0, -10.0] {
        assert!(TensorSpec::finite(2, 3, a).is_err(), "a = {a}");
    }
}
