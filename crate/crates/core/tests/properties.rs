mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn leray_is_an_orthogonal_projection(seed in any::<u64>()) {
        let d = common::leray_defect(seed);
        prop_assert!(d <= 1e-12, "defect {d}");
    }

    #[test]
    fn parseval_matches_quadrature(seed in any::<u64>()) {
        let d = common::parseval_defect(seed);
        prop_assert!(d <= 1e-10, "defect {d}");
    }

    #[test]
    fn physical_roundtrip_is_hermitian(seed in any::<u64>()) {
        let d = common::roundtrip_defect(seed);
        prop_assert!(d <= 1e-12, "defect {d}");
    }

    #[test]
    fn energy_is_quadratic(seed in any::<u64>()) {
        let d = common::energy_scaling_defect(seed);
        prop_assert!(d <= 1e-13, "defect {d}");
    }

    #[test]
    fn nonlinearity_is_solenoidal(seed in any::<u64>()) {
        let d = common::nonlinearity_divergence(seed);
        prop_assert!(d <= 1e-10, "defect {d}");
    }

    #[test]
    fn derivatives_commute_with_leray(seed in any::<u64>()) {
        let d = common::derivative_leray_defect(seed);
        prop_assert!(d <= 1e-12, "defect {d}");
    }

    #[test]
    fn besov_norm_below_partition_bound(seed in any::<u64>()) {
        let r = common::besov_ratio(seed);
        prop_assert!(r <= common::besov_bound(), "ratio {r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn m_functional_is_monotone(seed in any::<u64>()) {
        prop_assert!(common::m_monotone(seed));
    }
}
