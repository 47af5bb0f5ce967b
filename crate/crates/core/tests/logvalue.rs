use approx::assert_relative_eq;
use proptest::prelude::*;
use scalekit_core::{LogSum, LogValue};

fn lv(x: f64) -> LogValue {
    LogValue::from_f64(x).unwrap()
}

proptest! {
    #[test]
    fn mul_div_round_trip(a in 1e-200f64..1e200, b in 1e-200f64..1e200) {
        let (x, y) = (lv(a), lv(b));
        let back = (x * y).checked_div(y).unwrap();
        prop_assert!(back.approx_eq(&x));
        prop_assert!(((x * y).ln() - (a.ln() + b.ln())).abs() <= 1e-9 * (1.0 + a.ln().abs() + b.ln().abs()));
    }

    #[test]
    fn addition_matches_floats(a in 0.0f64..1e100, b in 0.0f64..1e100) {
        let s = (lv(a) + lv(b)).to_f64();
        prop_assert!((s - (a + b)).abs() <= 1e-12 * (a + b).max(1e-300));
    }

    #[test]
    fn order_matches_floats(a in 0.0f64..1e300, b in 0.0f64..1e300) {
        prop_assert_eq!(lv(a).cmp(&lv(b)), a.partial_cmp(&b).unwrap());
    }

    #[test]
    fn log_sum_equals_naive_sum(xs in prop::collection::vec(0.0f64..1e6, 0..60)) {
        let mut sum = LogSum::new();
        for &x in &xs {
            sum.push(lv(x));
        }
        let naive: f64 = xs.iter().sum();
        prop_assert!((sum.total().to_f64() - naive).abs() <= 1e-10 * naive.max(1e-300));
    }

    #[test]
    fn subtraction_inverts_addition(a in 1.0f64..1e50, b in 1.0f64..1e50) {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        let diff = (lv(hi) + lv(lo)).checked_sub(lv(lo)).unwrap();
        assert_relative_eq!(diff.to_f64(), hi, max_relative = 1e-9);
        prop_assert!(lv(lo).checked_sub(lv(hi) + lv(1.0)).is_none());
    }

    #[test]
    fn json_round_trip(ln in -1e6f64..1e6) {
        let v = LogValue::exp(ln);
        let text = serde_json::to_string(&v).unwrap();
        let back: LogValue = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.ln(), v.ln());
    }
}

#[test]
fn huge_values_stay_finite() {
    // e^{8^8} is far outside f64
    let v = LogValue::exp(8f64.powi(8));
    assert!(v.to_f64().is_infinite());
    assert_eq!((v * v).ln(), 2.0 * 8f64.powi(8));
    assert_eq!(v.sqrt().ln(), 0.5 * 8f64.powi(8));
    assert!(v.to_string().starts_with("e^"));
}

#[test]
fn zero_is_absorbing() {
    let z = LogValue::ZERO;
    assert!((z * lv(5.0)).is_zero());
    assert_relative_eq!((z + lv(5.0)).to_f64(), 5.0, max_relative = 1e-15);
    assert!(lv(3.0).checked_div(z).is_none());
    assert_eq!(serde_json::to_string(&z).unwrap(), "null");
}

#[test]
fn exact_integers_round() {
    assert_eq!(LogValue::from_u64(532_048_240_602).to_exact_u64(), Some(532_048_240_602));
    assert_eq!(LogValue::exp(27.0).to_f64().ceil() as u64, 532_048_240_602);
}
