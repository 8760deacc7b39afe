//! Cross-module invariants of the counting function and L-function zeros.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsl_core::arith::real_primitive_character;
use rsl_core::lfunc;
use rsl_core::zeros::{self, ZerosError};

#[test]
fn staircase_steps_by_one_at_each_zero() {
    let zl = zeros::find_zeros(200.0).unwrap();
    for &g in zl.gammas() {
        let below = zeros::count_via_argument(g - 1e-3).unwrap().round();
        let above = zeros::count_via_argument(g + 1e-3).unwrap().round();
        assert_eq!(below + 1.0, above, "γ = {g}");
    }
}

#[test]
fn sign_changes_match_argument_count() {
    let z = |e: f64| lfunc::hardy_z(e);
    for e in [50.0, 100.0, 200.0] {
        let roots = zeros::sign_change_roots(&z, 1e-9, e, zeros::scan_step, 1e-9).unwrap();
        let count = zeros::count_via_argument(e).unwrap().round() as usize;
        assert_eq!(roots.len(), count, "E = {e}");
        assert_eq!(zeros::find_zeros(e).unwrap().len(), count);
    }
    assert_eq!(zeros::count_via_argument(100.0).unwrap().round(), 29.0);
}

#[test]
fn smooth_count_envelope() {
    for i in 0..100 {
        let e = 10.0 + 990.0 * i as f64 / 99.0;
        let sc = lfunc::smooth_count(e);
        assert!((sc.asymptotic - sc.exact).abs() <= 0.05 / e, "E = {e}");
    }
}

#[test]
fn oscillatory_part_has_small_mean() {
    let mut sum = 0.0;
    let mut used = 0usize;
    for i in 0..10_000 {
        let e = 10.0 + 90.0 * (i as f64 + 0.5) / 10_000.0;
        match zeros::decompose(e) {
            Ok(d) => {
                sum += d.n_osc;
                used += 1;
            }
            Err(ZerosError::TooCloseToZero { .. }) => {}
            Err(err) => panic!("{err}"),
        }
    }
    assert!(used > 9_990);
    assert!((sum / used as f64).abs() < 0.1);
}

#[test]
fn l_mod_five_sign_changes_match_argument_count() {
    let chi = real_primitive_character(5).unwrap();
    let f = |e: f64| lfunc::l_hardy_z(e, &chi);
    let roots = zeros::sign_change_roots(&f, 0.0, 30.0, |_| 0.02, 1e-9).unwrap();
    let count = zeros::count_l_via_argument(30.0, &chi).unwrap().round() as usize;
    assert_eq!(roots.len(), count);
    assert!(roots[0] > 0.0);
    let z = lfunc::l_hardy_z_complex(5.0, &chi).unwrap();
    assert!(z.im.abs() < 1e-8);
}

#[test]
fn functional_equation_on_random_strip_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let s = Complex64::new(rng.random_range(0.1..0.9), rng.random_range(-50.0..50.0));
        let a = lfunc::lambda(s).unwrap();
        let b = lfunc::lambda(1.0 - s).unwrap();
        assert!((a - b).norm() / (a.norm() + b.norm()) < 1e-9, "s = {s}");
    }
}
