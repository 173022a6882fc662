use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use dob_core::analysis::{constraint_max_k, peak_gain, ConstraintSpec};
use dob_core::dtf::{PolyZ, RationalZ};
use dob_core::models::{build_acceleration_loop, build_loop, build_velocity_loop, ObserverKind, PlantParams};

fn plant() -> PlantParams {
    PlantParams::nominal(0.01, 0.25, 1e-3).unwrap()
}

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.99f64, -PI..PI).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn kind() -> impl Strategy<Value = ObserverKind> {
    prop_oneof![Just(ObserverKind::Velocity), Just(ObserverKind::Acceleration)]
}

proptest! {
    #[test]
    fn feedback_pair_sums_to_one(
        num in prop::collection::vec(-3.0..3.0f64, 1..4),
        den_roots in prop::collection::vec(-0.9..0.9f64, 1..4),
        z in disk_point(),
    ) {
        let l = RationalZ::new(PolyZ::new(num), PolyZ::from_real_roots(&den_roots)).unwrap();
        if let Ok((s, t)) = l.feedback() {
            let one_plus_l = l.eval(z) + 1.0;
            prop_assume!(one_plus_l.norm() > 1e-6);
            let sum = s.eval(z) + t.eval(z);
            prop_assert!((sum - 1.0).norm() < 1e-9 * (1.0 + l.eval(z).norm()));
        }
    }

    #[test]
    fn loop_sets_sum_to_one(k in 0.001..1.999f64, kind in kind(), z in disk_point()) {
        let set = build_loop(&plant(), kind, k / 1e-3).unwrap();
        prop_assert!((set.s.eval(z) + set.t.eval(z) - 1.0).norm() < 1e-10);
    }

    #[test]
    fn roots_invariant_under_scaling(
        roots in prop::collection::vec(-0.95..0.95f64, 1..6),
        c in prop_oneof![-100.0..-0.01f64, 0.01..100.0f64],
    ) {
        let p = PolyZ::from_real_roots(&roots);
        let mut a = p.roots().unwrap();
        let mut b = p.scale(c).roots().unwrap();
        let key = |z: &Complex64| (z.re, z.im);
        a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        b.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() < 1e-6);
        }
        for z in &b {
            prop_assert!(p.scale(c).eval(*z).norm() <= 1e-8 * p.scale(c).max_abs_coeff());
        }
    }

    #[test]
    fn freqresp_conjugate_symmetric(k in 0.01..1.99f64, kind in kind(), theta in 0.0..PI) {
        let set = build_loop(&plant(), kind, k / 1e-3).unwrap();
        for r in [&set.s, &set.t, &set.n, &set.l] {
            if let (Ok(pos), Ok(neg)) = (r.freqresp(&[theta]), r.freqresp(&[-theta])) {
                prop_assert!((pos[0] - neg[0].conj()).norm() <= 1e-12 * (1.0 + pos[0].norm()));
            }
        }
    }

    #[test]
    fn velocity_peaks_match_closed_forms(k in 0.02..1.98f64) {
        let set = build_velocity_loop(&plant(), k / 1e-3).unwrap();
        prop_assert!((peak_gain(&set.s).unwrap().magnitude - 2.0 / (2.0 - k)).abs() < 1e-6);
        // |T_v| is monotone in cos θ: the peak sits at θ = π for k ≥ 1 and at
        // θ = 0, where T_v(1) = 1, for k < 1.
        let t = peak_gain(&set.t).unwrap();
        prop_assert!((t.magnitude - (k / (2.0 - k)).max(1.0)).abs() < 1e-6);
        let nyquist = set.t.freqresp(&[PI]).unwrap()[0].norm();
        prop_assert!((nyquist - k / (2.0 - k)).abs() < 1e-12);
    }

    #[test]
    fn constraint_bound_is_tight(gs in 0.01..0.99f64, gt in 0.01..0.99f64) {
        let p = plant();
        let only_s = constraint_max_k(&ConstraintSpec::new(Some(gs), None).unwrap());
        let set = build_velocity_loop(&p, only_s / p.t_s).unwrap();
        prop_assert!((peak_gain(&set.s).unwrap().magnitude - 1.0 / gs).abs() < 1e-9);
        let only_t = constraint_max_k(&ConstraintSpec::new(None, Some(gt)).unwrap());
        let set = build_velocity_loop(&p, only_t / p.t_s).unwrap();
        prop_assert!((peak_gain(&set.t).unwrap().magnitude - 1.0 / gt).abs() < 1e-9);
        let both = constraint_max_k(&ConstraintSpec::new(Some(gs), Some(gt)).unwrap());
        prop_assert!(both <= only_s && both <= only_t);
    }

    #[test]
    fn alpha_scale_invariant(c in 1e-3..1e3f64, jmn in 0.001..0.1f64, ktn in 0.05..1.0f64) {
        let p = PlantParams::new(0.01, 0.25, jmn, ktn, 1e-3).unwrap();
        let q = PlantParams::new(0.01 * c, 0.25, jmn * c, ktn, 1e-3).unwrap();
        prop_assert!((p.alpha() - q.alpha()).abs() <= 1e-12 * p.alpha());
    }

    #[test]
    fn acceleration_loop_has_no_waterbed(log_k in -3.0..3.0f64) {
        let k = 10f64.powf(log_k);
        let set = build_acceleration_loop(&plant(), k / 1e-3).unwrap();
        let pole = set.s.poles().unwrap()[0];
        prop_assert!(pole.re > 0.0 && pole.re < 1.0 && pole.im == 0.0);
        let s = peak_gain(&set.s).unwrap();
        prop_assert!(s.magnitude < 1.0);
        prop_assert!((s.magnitude - 2.0 / (2.0 + k)).abs() < 1e-6);
        let t = peak_gain(&set.t).unwrap();
        prop_assert_eq!(t.theta, 0.0);
        prop_assert!((t.magnitude - 1.0).abs() < 1e-12);
    }

    #[test]
    fn velocity_waterbed(k1 in 0.05..1.9f64, dk in 0.01..0.08f64, frac in 0.01..0.99f64) {
        let k2 = k1 + dk;
        let s1 = build_velocity_loop(&plant(), k1 / 1e-3).unwrap().s;
        let s2 = build_velocity_loop(&plant(), k2 / 1e-3).unwrap().s;
        // |S_v| = 1 where cos θ = 1 - k/2; below it larger k attenuates more.
        let crossover = (1.0 - k1 / 2.0).acos();
        let theta = frac * crossover;
        let m1 = s1.freqresp(&[theta]).unwrap()[0].norm();
        let m2 = s2.freqresp(&[theta]).unwrap()[0].norm();
        prop_assert!(m2 < m1);
        prop_assert!(peak_gain(&s2).unwrap().magnitude > peak_gain(&s1).unwrap().magnitude);
    }
}
