mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conservation_violations_are_exact_zero(
        pump in family(), proj in family(), normalize in any::<bool>(),
        lp in -6i32..=6, ls in -6i32..=6, li in -6i32..=6,
    ) {
        conservation_zeroing(pump, proj, normalize, lp, ls, li)?;
    }

    #[test]
    fn signal_idler_exchange(pump in family(), proj in family(), lp in -5i32..=5, ls in -6i32..=6) {
        exchange_symmetry(pump, proj, lp, ls)?;
    }

    #[test]
    fn charge_sign_flip(pump in family(), proj in family(), lp in -5i32..=5, ls in -6i32..=6) {
        sign_flip_symmetry(pump, proj, lp, ls)?;
    }

    #[test]
    fn laguerre_recurrence_identities(p in 1u32..=10, a in 0u32..=10, x in 0.0f64..50.0) {
        laguerre_recurrences(p, a, x)?;
    }

    #[test]
    fn laguerre_matches_explicit_sum(p in 0u32..=10, a in 0u32..=10, x in 0.0f64..50.0) {
        laguerre_explicit_sum(p, a, x)?;
    }

    #[test]
    fn bessel_recurrence_identities(l in 1i32..=10, x in 0.1f64..50.0) {
        bessel_recurrences(l, x)?;
    }

    #[test]
    fn entropy_within_log_rank(w in weights()) {
        entropy_bounds(w)?;
    }

    #[test]
    fn quadrature_doubling_self_consistent(k in 0i32..=8, a in 0.5f64..4.0) {
        quadrature_doubling(k, a)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spectra_sum_to_one(lp in -4i32..=4, kind in 0usize..3) {
        spectrum_normalized(lp, kind)?;
    }
}
