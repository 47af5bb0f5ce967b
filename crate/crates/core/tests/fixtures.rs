use num_complex::Complex64;
use scalekit_core::fixtures::{parse_block_element, parse_dimension_sequence, parse_sparse_vector};
use scalekit_core::{Error, ScaleContext};

const DIMS: &str = include_str!("data/dims.txt");
const VECTOR: &str = include_str!("data/vector.txt");
const BLOCK: &str = include_str!("data/block.txt");

#[test]
fn dimension_file_mixes_integers_and_formulas() {
    let dims = parse_dimension_sequence(DIMS, &ScaleContext::default()).unwrap();
    let exact: Vec<u64> = dims.values().iter().map(|v| v.to_exact_u64().unwrap()).collect();
    assert_eq!(exact, vec![1, 2, 2, 16]);
}

#[test]
fn vector_file() {
    let v = parse_sparse_vector(VECTOR).unwrap();
    assert_eq!(v.nnz(), 3);
    assert_eq!(v.get(3), Complex64::new(-1.0, 2.0));
    assert_eq!(v.get(2), Complex64::default());
}

#[test]
fn block_file_against_dims_file() {
    let dims = parse_dimension_sequence(DIMS, &ScaleContext::default()).unwrap();
    let f = parse_block_element(BLOCK, &dims).unwrap();
    f.check_dims(&dims).unwrap();
    // the swap on block 2 has norm 1, block 4 has norm 3
    let norms = f.block_norms().unwrap();
    assert_eq!(norms.len(), 2);
    assert!((norms[0].1 - 1.0).abs() < 1e-12 && (norms[1].1 - 3.0).abs() < 1e-12);
}

#[test]
fn errors_carry_line_numbers() {
    let bad = "# header\n1 1 0\n2 oops 0\n";
    match parse_sparse_vector(bad) {
        Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
        other => panic!("{other:?}"),
    }
    let dims = parse_dimension_sequence("1\n2\n", &ScaleContext::default()).unwrap();
    assert!(matches!(parse_block_element("\n\n2 3 1 1 0", &dims), Err(Error::Parse { pos: 3, .. })));
}
