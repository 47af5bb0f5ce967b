use num_complex::Complex64;
use proptest::prelude::*;
use scalekit_core::counterexamples::b7::{special_point, sparse_list};
use scalekit_core::counterexamples::cantor::dyadics;
use scalekit_core::counterexamples::{b1_blowup, b7_enumerations, convolve, theta_chi, DyadicPoint, PowerSumMethod};
use scalekit_core::{Index, ScaleContext, SparseVec};

fn series() -> impl Strategy<Value = SparseVec<u64>> {
    prop::collection::vec((1u64..12, -2.0f64..2.0, -2.0f64..2.0), 1..6)
        .prop_map(|v| v.into_iter().map(|(r, a, b)| (r, Complex64::new(a, b))).collect())
}

proptest! {
    #[test]
    fn theta_is_multiplicative(f in series(), g in series(), chi in prop::collection::vec(0.001f64..0.999, 1..30)) {
        let lhs = theta_chi(&convolve(&f, &g), &chi).unwrap();
        let rhs = theta_chi(&f, &chi).unwrap().pointwise_mul(&theta_chi(&g, &chi).unwrap());
        prop_assert!(lhs.sub(&rhs).sup_abs() <= 1e-12);
        prop_assert!(theta_chi(&f, &chi).unwrap().sup_abs() <= f.l1_abs());
    }

    #[test]
    fn dyadic_gamma_round_trip(n in 1u64..1_000_000) {
        let d = DyadicPoint::from_gamma(n).unwrap();
        prop_assert_eq!(d.gamma(), n);
        prop_assert!(d.gamma() <= d.sigma() && d.sigma() <= 2 * d.gamma());
    }
}

#[test]
fn dyadic_gamma_is_onto_each_level() {
    for p_max in 1..=12 {
        let mut g: Vec<u64> = dyadics(p_max).iter().map(|d| d.gamma()).collect();
        g.sort_unstable();
        assert_eq!(g, (1..=1u64 << p_max).collect::<Vec<_>>());
    }
}

#[test]
fn special_points() {
    assert_eq!(special_point(0), Index::Exact(1));
    assert_eq!(special_point(1), Index::Exact(3));
    assert_eq!(special_point(2), Index::Exact(55));
    assert_eq!(special_point(3), Index::Exact(532_048_240_602));
    assert!(matches!(special_point(4), Index::Huge(_)));
}

#[test]
fn b7_gamma2_at_special_points() {
    let r = b7_enumerations(&sparse_list(100), 6).unwrap();
    let at = |x: Index| r.rows.iter().find(|row| row.index == x).unwrap().gamma2;
    assert_eq!(at(Index::Exact(1)), Index::Exact(1));
    assert_eq!(at(Index::Exact(3)), Index::Exact(2));
    assert_eq!(at(Index::Exact(55)), Index::Exact(4));
    assert_eq!(at(Index::Exact(532_048_240_602)), Index::Exact(56));
    assert_eq!(at(Index::Exact(10)), Index::Exact(11));
}

#[test]
fn b1_small_dimensions_match_brute_force() {
    // p_k = k + 1 is polynomial, so the growth condition holds and no blow-up is claimed
    let dims = ScaleContext::default().scale("1 + k").unwrap();
    let r = b1_blowup(&dims, 1, 2, 6).unwrap();
    assert!(r.growth_holds && !r.blowup && r.warning.is_some());
    assert!(r.rows.iter().all(|row| row.method == PowerSumMethod::Exact));
}
