use std::sync::Arc;

use proptest::prelude::*;
use scalekit_core::scale::{dominates, equivalent, power_domination, standard_family, StandardVariant};
use scalekit_core::summability::{summability_check, SummabilityVerdict};
use scalekit_core::{Enumeration, Index, Prefix, ScaleContext};

fn ctx() -> ScaleContext {
    ScaleContext::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn domination_is_reflexive(a in 0u32..5, c in 1u32..50) {
        let s = ctx().scale(&format!("{c} * k^{a}")).unwrap();
        prop_assert!(dominates(&s, &s, &Prefix::Dense(500)).unwrap().dominated());
    }

    #[test]
    fn power_domination_follows_exponents(a in 0u32..6, b in 0u32..6) {
        let c = ctx();
        let (ka, kb) = (c.scale(&format!("k^{a}")).unwrap(), c.scale(&format!("k^{b}")).unwrap());
        let r = dominates(&ka, &kb, &Prefix::Dense(2000)).unwrap();
        prop_assert_eq!(r.dominated(), a <= b);
    }

    #[test]
    fn domination_is_transitive(a in 0u32..4, b in 0u32..4, c in 0u32..4) {
        let x = ctx();
        let s = |e: u32| x.scale(&format!("(1 + k)^{e}")).unwrap();
        let p = Prefix::Dense(1000);
        let ab = dominates(&s(a), &s(b), &p).unwrap().dominated();
        let bc = dominates(&s(b), &s(c), &p).unwrap().dominated();
        if ab && bc {
            prop_assert!(dominates(&s(a), &s(c), &p).unwrap().dominated());
        }
    }

    #[test]
    fn expressions_match_direct_formulas(k in 1u64..5000) {
        let c = ctx();
        let x = k as f64;
        for (src, want) in [
            ("k^2 + 3", x * x + 3.0),
            ("sqrt(k) * 2", 2.0 * x.sqrt()),
            ("exp(log(k) / 2)", x.sqrt()),
            ("(1 + k)^3 / 2", (1.0 + x).powi(3) / 2.0),
        ] {
            let got = c.scale(src).unwrap().eval(k).unwrap().to_f64();
            prop_assert!(((got - want) / want).abs() < 1e-12, "{} at {}: {} vs {}", src, k, got, want);
        }
    }
}

#[test]
fn squared_member_is_square_of_plain() {
    let ids: Vec<Arc<_>> = (0..4).map(|_| Arc::new(Enumeration::identity())).collect();
    let plain = standard_family(&ids, StandardVariant::Plain).unwrap();
    let squared = standard_family(&ids, StandardVariant::Squared).unwrap();
    let sqrt = standard_family(&ids, StandardVariant::Sqrt).unwrap();
    for n in 0..=4 {
        let (p, q, r) = (plain.member(n).unwrap(), squared.member(n).unwrap(), sqrt.member(n).unwrap());
        for k in [1u64, 2, 17, 999] {
            let pk = p.eval(k).unwrap();
            assert!((pk * pk).approx_eq(&q.eval(k).unwrap()));
            assert!(pk.sqrt().approx_eq(&r.eval(k).unwrap()));
        }
    }
}

#[test]
fn equivalence_up_to_constants() {
    let c = ctx();
    let e = equivalent(&c.scale("3 * k^2 + 1").unwrap(), &c.scale("k^2").unwrap(), &Prefix::Dense(10_000)).unwrap();
    assert!(e.equivalent);
    let e = equivalent(&c.scale("k^2").unwrap(), &c.scale("k^2 * log(2 + k)").unwrap(), &Prefix::Dense(10_000)).unwrap();
    assert!(!e.equivalent);
}

#[test]
fn huge_prefix_points() {
    let c = ctx();
    let pts: Vec<Index> = (1..=12).map(|i| Index::Huge(scalekit_core::LogValue::exp((i * i) as f64))).collect();
    let prefix = Prefix::points(pts).unwrap();
    let r = power_domination(&c.scale("exp(sqrt(k))").unwrap(), &c.scale("k").unwrap(), 6, &prefix).unwrap();
    assert_eq!(r.d, None);
    let r = power_domination(&c.scale("k^3").unwrap(), &c.scale("k").unwrap(), 6, &prefix).unwrap();
    assert_eq!(r.d, Some(3));
}

#[test]
fn non_summable_family_is_refuted() {
    // σ_n = log(e + k)^n has no summable ratio
    let fam = ctx().family("pow(log(3 + k), n)").unwrap();
    let r = summability_check(&fam, 1, 4, 10_000).unwrap();
    assert!(r.entries.iter().all(|e| e.verdict != SummabilityVerdict::Certified), "{r:?}");
}
