use proptest::prelude::*;

use qumetrics::linalg::{max_abs, max_abs_diff, matrix_power, unitarity_residual, Subsystem};
use qumetrics::measures::{delta, luo_uncertainty, q_alpha, q_alpha_pairs, q_star, Alpha};
use qumetrics::random;
use qumetrics::states::{werner, StateFile};

const DIMS: [usize; 5] = [2, 3, 4, 6, 8];

fn dim() -> impl Strategy<Value = usize> {
    prop::sample::select(DIMS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(n in dim(), seed in any::<u64>()) {
        let x = random::random_observable(n, seed);
        let e = x.hermitian().eig().unwrap();
        let scale = max_abs(x.matrix()).max(1.0);
        prop_assert!(max_abs_diff(e.reconstruct().matrix(), x.matrix()) <= 1e-10 * scale);
        prop_assert!(unitarity_residual(&e.vectors) <= 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn complementary_powers_multiply_back(n in dim(), seed in any::<u64>(), a in 0.01f64..0.99) {
        let rho = random::random_ginibre_density(n, seed);
        let p = matrix_power(rho.hermitian(), a).unwrap();
        let q = matrix_power(rho.hermitian(), 1.0 - a).unwrap();
        prop_assert!(max_abs_diff(&p.matrix().dot(q.matrix()), rho.matrix()) <= 1e-10);
        let r = matrix_power(rho.hermitian(), 0.5).unwrap();
        prop_assert!(max_abs_diff(&r.matrix().dot(r.matrix()), rho.matrix()) <= 1e-10);
    }

    #[test]
    fn partial_trace_undoes_tensor(m in 1usize..5, k in 1usize..5, seed in any::<u64>()) {
        let a = random::random_ginibre_density(m, seed);
        let b = random::random_ginibre_density(k, seed.wrapping_add(1));
        let ab = a.tensor(&b).unwrap();
        let ra = ab.partial_trace((m, k), Subsystem::Second).unwrap();
        let rb = ab.partial_trace((m, k), Subsystem::First).unwrap();
        prop_assert!(max_abs_diff(ra.matrix(), a.matrix()) <= 1e-12);
        prop_assert!(max_abs_diff(rb.matrix(), b.matrix()) <= 1e-12);
    }

    #[test]
    fn state_file_round_trips(n in dim(), seed in any::<u64>()) {
        let rho = random::random_ginibre_density(n, seed);
        let file = StateFile::from_matrix(rho.matrix(), Some("r".into()));
        let back = StateFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(&back, &file);
        let again = back.to_density().unwrap();
        prop_assert_eq!(again.matrix(), rho.matrix());
    }

    #[test]
    fn werner_spectrum(lambda in 0.0f64..=1.0) {
        let rho = werner(lambda).unwrap();
        let mut want = vec![lambda, (1.0 - lambda) / 3.0, (1.0 - lambda) / 3.0, (1.0 - lambda) / 3.0];
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (got, w) in rho.eigenvalues().iter().zip(&want) {
            prop_assert!((got - w).abs() <= 1e-12);
        }
    }

    #[test]
    fn q_alpha_bounded_by_luo(n in dim(), seed in any::<u64>(), a in 0.001f64..0.999) {
        let rho = random::random_ginibre_density(n, seed);
        let alpha = Alpha::new(a).unwrap();
        let q = q_alpha(&rho, alpha);
        let nf = n as f64;
        prop_assert!(q >= -1e-12 && q <= nf - 1.0 + 1e-12);
        prop_assert!(q <= luo_uncertainty(&rho) + 1e-12);
        prop_assert!((q - q_alpha_pairs(&rho, alpha)).abs() <= 1e-10);
        let qs = q_star(&rho);
        prop_assert!(qs >= -1e-12 && qs <= luo_uncertainty(&rho) + 1e-12);
    }

    #[test]
    fn delta_between_geometric_and_arithmetic(a in 1e-9f64..1.0, b in 1e-9f64..1.0) {
        let d = delta(a, b).unwrap();
        prop_assert!((d - delta(b, a).unwrap()).abs() <= 1e-15 * d.max(1.0));
        prop_assert!(d >= 2.0 * (a * b).sqrt() * (1.0 - 1e-12));
        prop_assert!(d <= (a + b) * (1.0 + 1e-12));
    }
}
