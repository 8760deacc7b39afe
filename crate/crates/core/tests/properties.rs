use num_complex::Complex64;
use proptest::prelude::*;
use rsl_core::arith::{self, is_prime};
use rsl_core::orbits::{self, GeometricTail, TruncationSpec};
use rsl_core::rmt::{self, EnsembleClass, EnsembleSpec};
use rsl_core::spectra::{self, SequenceSource};
use rsl_core::zeros::{self, ZeroList, ZeroSource};

fn odd_prime() -> impl Strategy<Value = u64> {
    (3u64..200).prop_filter("prime", |&p| is_prime(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn real_characters_are_multiplicative(p in odd_prime(), m in 0i64..400, n in 0i64..400) {
        let chi = arith::real_primitive_character(p).unwrap();
        let lhs = chi.real_value(m * n).unwrap();
        prop_assert_eq!(lhs, chi.real_value(m).unwrap() * chi.real_value(n).unwrap());
    }

    #[test]
    fn complex_characters_are_multiplicative(p in odd_prime(), idx in 1u64..200, m in 0i64..200, n in 0i64..200) {
        let chi = arith::prime_character(p, idx % (p - 1)).unwrap();
        let diff: Complex64 = chi.value(m * n) - chi.value(m) * chi.value(n);
        prop_assert!(diff.norm() < 1e-12);
    }

    #[test]
    fn zero_table_round_trip(gaps in prop::collection::vec(1e-3f64..5.0, 0..60), start in 1.0f64..100.0) {
        let mut g = start;
        let gammas: Vec<f64> = gaps.iter().map(|d| { g += d; g }).collect();
        let zl = ZeroList::new(gammas, ZeroSource::Computed, 1e-9).unwrap();
        let text = zeros::format_zero_table(&zl);
        let back = zeros::parse_zero_table(&text).unwrap();
        let rounded = zl.rounded_to_cache_precision();
        prop_assert_eq!(back.gammas(), rounded.gammas());
        prop_assert_eq!(zeros::format_zero_table(&back), text);
    }

    #[test]
    fn doubling_identity_for_powers(x in 0.05f64..0.6) {
        let check = orbits::doubling_identity_check(|n| x.powi(n as i32), GeometricTail { scale: 1.0, ratio: x }).unwrap();
        let exact = (1.0 - x).ln();
        prop_assert!((check.lhs - check.rhs).abs() < 1e-12);
        prop_assert!((check.lhs - exact).abs() < 1e-12);
    }

    #[test]
    fn ansatz_rearrangement_is_exact(p in 2u64..30, n_max in 1u64..40, e in 0.0f64..60.0) {
        let eq = orbits::equivalence_check(e, &TruncationSpec::closed(p, n_max)).unwrap();
        prop_assert!((eq.ansatz_form - eq.prime_form).abs() < 1e-12);
    }

    #[test]
    fn class_c_pairs_eigenvalues(n in 1usize..24, seed in any::<u64>(), idx in 0u64..1000) {
        let spec = EnsembleSpec::new(EnsembleClass::C, n, 1.0, seed).unwrap();
        let m = rmt::ensemble_matrix(&spec, idx).unwrap();
        prop_assert_eq!(rmt::particle_hole_residual_c(&m), 0.0);
        let s = rmt::sample(&spec, idx).unwrap();
        prop_assert!(s.pairing_residual() < 1e-10);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn class_d_pairs_eigenvalues(n in 1usize..24, seed in any::<u64>()) {
        let spec = EnsembleSpec::new(EnsembleClass::D, n, 2.0, seed).unwrap();
        let s = rmt::sample(&spec, 0).unwrap();
        prop_assert!(s.pairing_residual() < 1e-10);
        let zero_modes = s.eigenvalues.iter().filter(|x| x.abs() < 1e-10 * s.spectral_radius().max(1.0)).count();
        prop_assert_eq!(zero_modes, n % 2);
    }

    #[test]
    fn unfolding_is_scale_invariant(seed in any::<u64>(), c in 0.01f64..100.0) {
        let spec = EnsembleSpec::new(EnsembleClass::Gue, 60, 1.0, seed).unwrap();
        let s = rmt::sample(&spec, 0).unwrap();
        let scaled: Vec<f64> = s.eigenvalues.iter().map(|x| x * c).collect();
        let a = spectra::unfold_spectrum(&s.eigenvalues, 0.6, SequenceSource::Ensemble).unwrap();
        let b = spectra::unfold_spectrum(&scaled, 0.6, SequenceSource::Ensemble).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn uniform_unfolding_is_idempotent(n in 20usize..300, start in -50.0f64..50.0, gap in 1e-3f64..10.0) {
        let values: Vec<f64> = (0..n).map(|i| start + gap * i as f64).collect();
        let once = spectra::unfold_spectrum(&values, 1.0, SequenceSource::Synthetic).unwrap();
        let twice = spectra::unfold_spectrum(once.values(), 1.0, SequenceSource::Synthetic).unwrap();
        for (x, y) in once.values().iter().zip(twice.values()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}
