use std::sync::OnceLock;

use idcyl_core::gallery::{self, random_point_sets};
use idcyl_core::{
    cf_1d, cf_cyl, convert_truncation_cyl, convolve, negative_definite_check,
    positive_definite_check, project_1d, psi_tilde, schoenberg_check, time_scale,
    CylindricalCharacteristics, Tolerances, Truncation,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn entry(i: usize) -> CylindricalCharacteristics {
    static ENTRIES: OnceLock<Vec<gallery::GalleryEntry>> = OnceLock::new();
    let entries = ENTRIES.get_or_init(|| gallery::list().unwrap());
    entries[i % entries.len()].characteristics.clone()
}

fn truncation() -> impl Strategy<Value = Truncation> {
    prop_oneof![Just(Truncation::Indicator), Just(Truncation::Ramp)]
}

fn functional() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5f64..1.5, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jump_kernel_is_negative_definite_in_t(
        h in truncation(),
        s in -4.0f64..4.0,
        ts in prop::collection::vec(-5.0f64..5.0, 2..12),
    ) {
        let points: Vec<Vec<f64>> = ts.iter().map(|&t| vec![t]).collect();
        let k = |t: &[f64]| Ok(-psi_tilde(h, s, t[0]));
        let report = negative_definite_check(k, &points, Tolerances::default()).unwrap();
        prop_assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn schoenberg_exponentials_of_gallery_exponents_are_positive_definite(
        i in 0usize..7,
        seed in 0u64..1000,
        m in 1u32..6,
    ) {
        let chr = entry(i);
        let points = random_point_sets(4, 1, 10, seed).remove(0);
        let kappa = |a: &[f64]| chr.kappa(a);
        let direct = schoenberg_check(kappa, &points, &[m], Tolerances::default()).unwrap();
        let via_cf = positive_definite_check(
            |a: &[f64]| Ok((-chr.kappa(a)? / f64::from(m)).exp()),
            &points,
            Tolerances::default(),
        )
        .unwrap();
        prop_assert!(direct[0].passed());
        prop_assert_eq!(direct[0].min_eigenvalue, via_cf.min_eigenvalue);
    }

    #[test]
    fn convolution_powers_match_time_scaling(i in 0usize..7, k in 2u32..5, a in functional()) {
        let chr = entry(i);
        let root = time_scale(&chr, 1.0 / f64::from(k)).unwrap();
        let mut power = root.clone();
        for _ in 1..k {
            power = convolve(&power, &root).unwrap();
        }
        let lhs = cf_cyl(&power, &a).unwrap();
        let rhs = cf_cyl(&chr, &a).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
        let r = cf_cyl(&root, &a).unwrap();
        prop_assert!((r.powi(k as i32) - rhs).norm() < 1e-12);
    }

    #[test]
    fn truncation_change_commutes_with_projection(i in 0usize..7, a in functional(), t in -3.0f64..3.0) {
        let chr = entry(i);
        let other = if chr.truncation == Truncation::Ramp { Truncation::Indicator } else { Truncation::Ramp };
        let conv = convert_truncation_cyl(&chr, other);
        let p = project_1d(&conv, &a).unwrap();
        let direct = cf_cyl(&chr, &a.iter().map(|x| t * x).collect::<Vec<_>>()).unwrap();
        prop_assert!((cf_1d(&p, t).unwrap() - direct).norm() < 1e-9);
    }

    #[test]
    fn characteristic_functions_are_bounded_and_hermitian(i in 0usize..7, a in functional()) {
        let chr = entry(i);
        let z = cf_cyl(&chr, &a).unwrap();
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        let w = cf_cyl(&chr, &neg).unwrap();
        prop_assert!(z.norm() <= 1.0 + 1e-12);
        prop_assert!((z - w.conj()).norm() < 1e-12);
        prop_assert_eq!(cf_cyl(&chr, &[0.0; 4]).unwrap(), Complex64::new(1.0, 0.0));
    }
}

#[test]
fn characteristics_survive_json_round_trip_exactly() {
    for i in 0..gallery::NAMES.len() {
        let chr = entry(i);
        let text = serde_json::to_string(&chr).unwrap();
        let back: CylindricalCharacteristics = serde_json::from_str(&text).unwrap();
        assert_eq!(back, chr, "{}", gallery::NAMES[i]);
        let a = [0.3, -0.7, 0.2, 1.1];
        assert_eq!(cf_cyl(&back, &a).unwrap(), cf_cyl(&chr, &a).unwrap());
    }
}

#[test]
fn every_gallery_entry_matches_its_expected_properties() {
    for entry in gallery::list().unwrap() {
        for outcome in entry.verify().unwrap() {
            assert!(outcome.matches(), "{}: {:?}", entry.name, outcome);
        }
    }
}
