use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scalekit_core::socle::block::random_element;
use scalekit_core::socle::{
    gamma_block_enumeration, reorder_with_padding, sandwich_check, socle_norm_op, BlockElement, CMatrix,
};
use scalekit_core::{Enumeration, LogValue, ScaleContext};

fn svd_norm(m: &CMatrix) -> f64 {
    let p = m.dim();
    let d = DMatrix::from_fn(p, p, |i, j| m[(i, j)]);
    d.singular_values().max()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn matrix(max_p: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_p).prop_flat_map(|p| {
        prop::collection::vec(complex(), p * p).prop_map(move |v| CMatrix::from_fn(p, |i, j| v[i * p + j]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn op_norm_matches_svd(m in matrix(12)) {
        let want = svd_norm(&m);
        let got = m.op_norm().unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * want.max(1.0), "{} vs {}", got, want);
    }

    #[test]
    fn block_enumeration_is_bijective(dims in prop::collection::vec(1u64..40, 1..30), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<u64> = (1..=dims.len() as u64).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let theta = Enumeration::from_forward("theta", perm).unwrap();
        let g = gamma_block_enumeration(&dims, &theta).unwrap();
        prop_assert_eq!(g.total(), dims.iter().map(|p| p * p).sum::<u64>());
        g.verify().unwrap();
        for n in [1, g.total() / 2 + 1, g.total()] {
            let (z, i, j) = g.inverse(n).unwrap();
            prop_assert_eq!(g.forward(z, i, j).unwrap(), n);
        }
    }

    #[test]
    fn sandwich_on_random_elements(seed in any::<u64>(), n in 0usize..4) {
        let fam = ScaleContext::default().family("pow(1 + k, n)").unwrap();
        let dims: Vec<u64> = (1..=9).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_element(&mut rng, &dims, 4);
        prop_assert!(sandwich_check(&f, &fam, n).unwrap().holds);
    }

    #[test]
    fn padding_reaches_double(values in prop::collection::vec(1.0f64..1e6, 1..40)) {
        let lv: Vec<LogValue> = values.iter().map(|&v| LogValue::from_f64(v).unwrap()).collect();
        let r = reorder_with_padding(&lv, Some(LogValue::ONE)).unwrap();
        prop_assert!(r.verified);
    }
}

#[test]
fn matrix_unit_norm_is_the_weight() {
    let fam = ScaleContext::default().family("pow(k, n)").unwrap();
    for (z, p) in [(1u64, 1usize), (3, 4), (7, 9)] {
        for n in 0..4 {
            let e = BlockElement::matrix_unit(z, p, p, 1);
            let got = socle_norm_op(&e, &fam, n).unwrap().to_f64();
            let want = (z as f64).powi(n as i32);
            assert!((got - want).abs() <= 1e-14 * want, "{got} vs {want}");
        }
    }
}

#[test]
fn c_star_identity_on_seeded_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let dims: Vec<u64> = (1..=16).collect();
    for _ in 0..50 {
        let f = random_element(&mut rng, &dims, 3);
        let lhs = f.adjoint().mul(&f).unwrap().cstar_norm().unwrap().to_f64();
        let norm = f.cstar_norm().unwrap().to_f64();
        assert!((lhs - norm * norm).abs() <= 1e-8 * norm * norm);
    }
}
