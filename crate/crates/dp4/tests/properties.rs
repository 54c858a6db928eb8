//! Randomized group-law properties, checked on many sampled elements.

use proptest::prelude::*;

use dp4::weyl::{enumerate_group, WeylElement};

fn group() -> &'static [WeylElement] {
    static GROUP: std::sync::OnceLock<Vec<WeylElement>> = std::sync::OnceLock::new();
    GROUP.get_or_init(|| enumerate_group(5).unwrap())
}

fn element() -> impl Strategy<Value = WeylElement> {
    (0usize..1920).prop_map(|i| group()[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_is_associative(a in element(), b in element(), c in element()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_cancels(a in element(), b in element()) {
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert!(a.inverse().compose(&a).unwrap().is_identity());
        // (ab)^-1 = b^-1 a^-1.
        let lhs = a.compose(&b).unwrap().inverse();
        let rhs = b.inverse().compose(&a.inverse()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_preserves_order(a in element(), g in element()) {
        prop_assert_eq!(a.conjugate_by(&g).unwrap().order(), a.order());
    }

    #[test]
    fn display_parse_round_trip(a in element()) {
        let shown = a.to_string();
        let back: WeylElement = shown.parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn sign_mask_is_a_crossed_homomorphism(a in element(), b in element()) {
        let prod = a.compose(&b).unwrap();
        prop_assert_eq!(prod.sign_mask(), a.sign_mask() ^ a.permute_mask(b.sign_mask()));
    }
}
