//! Finitely supported elements of `⊕_z M_{p_z}(ℂ)` and their norms.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Error;
use crate::logvalue::{LogSum, LogValue};
use crate::scale::{Expr, Scale, ScaleFamily};
use crate::sparse::SparseVec;

use super::matrix::CMatrix;

/// Largest block size that is ever materialized as a matrix.
pub const MAX_BLOCK: u64 = 512;

/// `p_1, ..., p_K`, stored in the log domain; machine integers are kept when
/// every entry is one.
#[derive(Clone, Debug)]
pub struct DimensionSequence {
    values: Vec<LogValue>,
    exact: Option<Vec<u64>>,
    source: Option<Scale>,
}

impl DimensionSequence {
    pub fn from_u64(dims: Vec<u64>) -> Result<DimensionSequence, Error> {
        if let Some(pos) = dims.iter().position(|&p| p == 0) {
            return Err(Error::InvalidArgument(format!("dimension p_{} is 0", pos + 1)));
        }
        Ok(DimensionSequence {
            values: dims.iter().map(|&p| LogValue::from_u64(p)).collect(),
            exact: Some(dims),
            source: None,
        })
    }

    pub fn from_log(values: Vec<LogValue>) -> Result<DimensionSequence, Error> {
        if let Some(pos) = values.iter().position(|v| !LogValue::ONE.approx_le(v)) {
            return Err(Error::InvalidArgument(format!("dimension p_{} is below 1", pos + 1)));
        }
        let exact: Option<Vec<u64>> = values.iter().map(|v| v.to_exact_u64()).collect();
        Ok(DimensionSequence { values, exact, source: None })
    }

    /// Evaluates `p_z = scale(z)` for `z = 1..=k`, remembering the formula.
    pub fn from_scale(scale: &Scale, k: u64) -> Result<DimensionSequence, Error> {
        let values = (1..=k).map(|z| scale.eval(z)).collect::<Result<Vec<_>, _>>()?;
        let mut d = DimensionSequence::from_log(values)?;
        d.source = Some(scale.clone());
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[LogValue] {
        &self.values
    }

    /// `p_z` for `z` in `1..=len`.
    pub fn get(&self, z: u64) -> Option<LogValue> {
        self.values.get((z as usize).wrapping_sub(1)).copied()
    }

    pub fn exact(&self) -> Option<&[u64]> {
        self.exact.as_deref()
    }

    /// Dimensions as machine integers small enough to build matrices.
    pub fn materializable(&self) -> Result<&[u64], Error> {
        let e = self
            .exact()
            .ok_or_else(|| Error::InvalidArgument("dimensions are not machine integers".into()))?;
        if let Some(p) = e.iter().find(|&&p| p > MAX_BLOCK) {
            return Err(Error::InvalidArgument(format!("block size {p} exceeds {MAX_BLOCK}")));
        }
        Ok(e)
    }

    /// The dimensions as a scale: the original formula if there is one,
    /// else a table.
    pub fn as_scale(&self) -> Scale {
        match &self.source {
            Some(s) => s.clone(),
            None => Scale::from_expr(Expr::Table(self.values.clone().into())).with_label("dims"),
        }
    }
}

/// A finitely supported matrix-valued function `z ↦ f(z) ∈ M_{p_z}(ℂ)`.
#[derive(Clone, Debug, Default)]
pub struct BlockElement {
    blocks: BTreeMap<u64, CMatrix>,
    /// Block operator norms, computed on first use.
    op_norms: OnceLock<Result<Vec<(u64, f64)>, Error>>,
}

impl PartialEq for BlockElement {
    fn eq(&self, other: &BlockElement) -> bool {
        self.blocks == other.blocks
    }
}

impl BlockElement {
    pub fn new() -> BlockElement {
        BlockElement::default()
    }

    /// Zero blocks are dropped.
    pub fn insert(&mut self, z: u64, m: CMatrix) {
        self.op_norms = OnceLock::new();
        if m.is_zero() {
            self.blocks.remove(&z);
        } else {
            self.blocks.insert(z, m);
        }
    }

    pub fn with_block(mut self, z: u64, m: CMatrix) -> BlockElement {
        self.insert(z, m);
        self
    }

    /// The matrix unit `e_{z,ij}` in a `p × p` block (1-based `i, j`).
    pub fn matrix_unit(z: u64, p: usize, i: usize, j: usize) -> BlockElement {
        BlockElement::new().with_block(z, CMatrix::unit(p, i - 1, j - 1))
    }

    pub fn block(&self, z: u64) -> Option<&CMatrix> {
        self.blocks.get(&z)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (u64, &CMatrix)> {
        self.blocks.iter().map(|(&z, m)| (z, m))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Checks every block against `dims`.
    pub fn check_dims(&self, dims: &DimensionSequence) -> Result<(), Error> {
        for (z, m) in self.blocks() {
            match dims.get(z).and_then(|p| p.to_exact_u64()) {
                Some(p) if p as usize == m.dim() => {}
                Some(p) => return Err(Error::ShapeMismatch(format!("block {z} is {0}x{0}, p_{z} = {p}", m.dim()))),
                None => return Err(Error::OutOfDomain(format!("block {z} outside the dimension sequence"))),
            }
        }
        Ok(())
    }

    fn zip_blocks(&self, rhs: &BlockElement, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<BlockElement, Error> {
        let mut out = BlockElement::new();
        for (z, a) in self.blocks() {
            if let Some(b) = rhs.block(z) {
                if a.dim() != b.dim() {
                    return Err(Error::ShapeMismatch(format!("block {z}: {} vs {}", a.dim(), b.dim())));
                }
                out.insert(z, f(a, b));
            }
        }
        Ok(out)
    }

    /// `(ab)(z) = a(z) b(z)`.
    pub fn mul(&self, rhs: &BlockElement) -> Result<BlockElement, Error> {
        self.zip_blocks(rhs, CMatrix::mul)
    }

    pub fn add(&self, rhs: &BlockElement) -> Result<BlockElement, Error> {
        let mut out = self.clone();
        for (z, b) in rhs.blocks() {
            let m = match self.block(z) {
                Some(a) if a.dim() != b.dim() => {
                    return Err(Error::ShapeMismatch(format!("block {z}: {} vs {}", a.dim(), b.dim())))
                }
                Some(a) => a.add(b),
                None => b.clone(),
            };
            out.insert(z, m);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &BlockElement) -> Result<BlockElement, Error> {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> BlockElement {
        let mut out = BlockElement::new();
        for (z, m) in self.blocks() {
            out.insert(z, m.scale(c));
        }
        out
    }

    /// Blockwise conjugate transpose.
    pub fn adjoint(&self) -> BlockElement {
        BlockElement { blocks: self.blocks.iter().map(|(&z, m)| (z, m.adjoint())).collect(), op_norms: OnceLock::new() }
    }

    /// Operator norm of every nonzero block.
    pub fn block_norms(&self) -> Result<Vec<(u64, f64)>, Error> {
        self.op_norms
            .get_or_init(|| {
                self.blocks()
                    .map(|(z, m)| {
                        m.op_norm()
                            .map(|v| (z, v))
                            .map_err(|iterations| Error::NoConvergence { block: z, iterations })
                    })
                    .collect()
            })
            .clone()
    }

    /// `‖f‖_B = sup_z ‖f(z)‖_op`.
    pub fn cstar_norm(&self) -> Result<LogValue, Error> {
        let best = self.block_norms()?.into_iter().map(|(_, v)| v).fold(0.0, f64::max);
        Ok(LogValue::from_f64(best).expect("finite norm"))
    }
}

fn weight(ell: &Scale, z: u64) -> Result<LogValue, Error> {
    ell.eval(z)
}

fn lv(x: f64) -> LogValue {
    LogValue::from_f64(x).expect("finite nonnegative")
}

/// `sup_z ℓ_n(z) ‖f(z)‖_op`.
pub fn socle_norm_op(f: &BlockElement, ell: &ScaleFamily, n: usize) -> Result<LogValue, Error> {
    weighted_sup(&f.block_norms()?, ell, n)
}

/// `sup_z ℓ_n(z) v_z` from precomputed block norms.
fn weighted_sup(norms: &[(u64, f64)], ell: &ScaleFamily, n: usize) -> Result<LogValue, Error> {
    let s = ell.member(n)?;
    let mut best = LogValue::ZERO;
    for &(z, v) in norms {
        best = best.max(weight(&s, z)? * lv(v));
    }
    Ok(best)
}

/// Entrywise `(Σ ℓ_n(z)|f_ij(z)|, sup ℓ_n(z)|f_ij(z)|)`.
pub fn socle_norms_l1_sup(f: &BlockElement, ell: &ScaleFamily, n: usize) -> Result<(LogValue, LogValue), Error> {
    let s = ell.member(n)?;
    let mut l1 = LogSum::new();
    let mut sup = LogValue::ZERO;
    for (z, m) in f.blocks() {
        let w = weight(&s, z)?;
        l1.push(w * lv(m.sum_abs()));
        sup = sup.max(w * lv(m.max_abs()));
    }
    Ok((l1.total(), sup))
}

#[derive(Clone, Debug, Serialize)]
pub struct Sandwich {
    pub sup: LogValue,
    pub op: LogValue,
    pub l1: LogValue,
    pub holds: bool,
}

/// `‖f‖^∞_n <= ‖f‖^{∞,op}_n <= ‖f‖^1_n` within relative `1e-9`.
pub fn sandwich_check(f: &BlockElement, ell: &ScaleFamily, n: usize) -> Result<Sandwich, Error> {
    let op = socle_norm_op(f, ell, n)?;
    let (l1, sup) = socle_norms_l1_sup(f, ell, n)?;
    let holds = sup.le_within(&op, 1e-9) && op.le_within(&l1, 1e-9);
    Ok(Sandwich { sup, op, l1, holds })
}

/// Embeds `φ` on `Y = {(z, i)}` as the diagonal element `diag(φ(z, ·))`.
pub fn diagonal_embed(phi: &SparseVec<(u64, u64)>, dims: &DimensionSequence) -> Result<BlockElement, Error> {
    let mut diag: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
    for ((z, i), c) in phi.iter() {
        let p = dims
            .get(z)
            .and_then(|p| p.to_exact_u64())
            .ok_or_else(|| Error::OutOfDomain(format!("block {z} outside the dimension sequence")))?;
        if i == 0 || i > p {
            return Err(Error::OutOfDomain(format!("diagonal position {i} outside 1..={p} in block {z}")));
        }
        diag.entry(z).or_insert_with(|| vec![Complex64::default(); p as usize])[(i - 1) as usize] = c;
    }
    let mut out = BlockElement::new();
    for (z, d) in diag {
        out.insert(z, CMatrix::from_diagonal(&d));
    }
    Ok(out)
}

/// A random element supported on `blocks` distinct blocks drawn from
/// `1..=dims.len()`, with complex Gaussian entries.
pub fn random_element(rng: &mut ChaCha8Rng, dims: &[u64], blocks: usize) -> BlockElement {
    let mut out = BlockElement::new();
    for _ in 0..blocks {
        let z = rng.random_range(1..=dims.len() as u64);
        let p = dims[(z - 1) as usize] as usize;
        let data: Vec<Complex64> =
            (0..p * p).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        out.insert(z, CMatrix::from_fn(p, |i, j| data[i * p + j]));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoSidedRow {
    pub n: usize,
    /// worst `‖fφ‖_n / (‖f‖_B ‖φ‖_n)`
    pub left: f64,
    /// worst `‖φf‖_n / (‖φ‖_n ‖f‖_B)`
    pub right: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoSidedReport {
    pub family: String,
    pub seed: u64,
    pub trials: usize,
    pub rows: Vec<TwoSidedRow>,
    pub passed: bool,
}

/// Random `f` on many blocks and `φ` on few; checks the ideal inequality of
/// the operator-norm socle norms on both sides.
pub fn two_sided_ideal_check(
    ell: &ScaleFamily,
    dims: &DimensionSequence,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<TwoSidedReport, Error> {
    let d = dims.materializable()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<TwoSidedRow> = (0..=n_max).map(|n| TwoSidedRow { n, left: 0.0, right: 0.0 }).collect();
    for _ in 0..trials {
        let f = random_element(&mut rng, d, d.len().min(12));
        let few = rng.random_range(1..=3);
        let phi = random_element(&mut rng, d, few);
        let fb = f.cstar_norm()?;
        let (fphi, phif) = (f.mul(&phi)?, phi.mul(&f)?);
        let [phi_norms, left_norms, right_norms] = [&phi, &fphi, &phif].map(|e| e.block_norms());
        let (phi_norms, left_norms, right_norms) = (phi_norms?, left_norms?, right_norms?);
        for row in rows.iter_mut() {
            let pn = weighted_sup(&phi_norms, ell, row.n)?;
            let q = |num: LogValue| num.checked_div(fb * pn).map_or(0.0, |q| q.to_f64());
            row.left = row.left.max(q(weighted_sup(&left_norms, ell, row.n)?));
            row.right = row.right.max(q(weighted_sup(&right_norms, ell, row.n)?));
        }
    }
    let passed = rows.iter().all(|r| r.left <= 1.0 + 1e-9 && r.right <= 1.0 + 1e-9);
    Ok(TwoSidedReport { family: ell.label().to_string(), seed, trials, rows, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::ScaleContext;
    use approx::assert_relative_eq;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn first_column(p: usize) -> CMatrix {
        CMatrix::from_fn(p, |_, j| if j == 0 { one() } else { Complex64::default() })
    }

    #[test]
    fn unit_products() {
        let a = BlockElement::matrix_unit(2, 3, 1, 2);
        let b = BlockElement::matrix_unit(2, 3, 2, 1);
        assert_eq!(a.mul(&b).unwrap(), BlockElement::matrix_unit(2, 3, 1, 1));
        let c1 = BlockElement::new().with_block(4, first_column(5));
        assert_eq!(c1.mul(&BlockElement::matrix_unit(4, 5, 1, 1)).unwrap(), c1);
        assert!(a.mul(&BlockElement::matrix_unit(3, 3, 1, 1)).unwrap().is_zero());
        assert!(a.mul(&BlockElement::matrix_unit(2, 4, 1, 1)).is_err());
    }

    #[test]
    fn first_column_norms() {
        for p in [1usize, 4, 9, 100, 512] {
            let c1 = BlockElement::new().with_block(1, first_column(p));
            assert_relative_eq!(c1.cstar_norm().unwrap().to_f64(), (p as f64).sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn socle_norms_of_units() {
        let ell = ScaleContext::default().family("pow(1 + k, n)").unwrap();
        let e = BlockElement::matrix_unit(3, 2, 2, 1);
        let op = socle_norm_op(&e, &ell, 2).unwrap();
        let (l1, sup) = socle_norms_l1_sup(&e, &ell, 2).unwrap();
        for v in [op, l1, sup] {
            assert_relative_eq!(v.to_f64(), 16.0, max_relative = 1e-12);
        }
        let ones = BlockElement::new().with_block(1, CMatrix::from_fn(2, |_, _| one()));
        let flat = ScaleContext::default().family("1").unwrap();
        let (l1, sup) = socle_norms_l1_sup(&ones, &flat, 0).unwrap();
        assert_relative_eq!(l1.to_f64(), 4.0, max_relative = 1e-12);
        assert_relative_eq!(sup.to_f64(), 1.0, max_relative = 1e-12);
        let s = sandwich_check(&ones, &flat, 0).unwrap();
        assert!(s.holds);
        assert_relative_eq!(s.op.to_f64(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn diagonal_embedding() {
        let dims = DimensionSequence::from_u64(vec![2, 3]).unwrap();
        let phi: SparseVec<(u64, u64)> =
            SparseVec::from_pairs([((2, 1), Complex64::new(3.0, 0.0)), ((2, 3), Complex64::new(0.0, -4.0))]);
        let e = diagonal_embed(&phi, &dims).unwrap();
        assert_eq!(e.cstar_norm().unwrap().to_f64().round(), 4.0);
        let delta = SparseVec::delta((1, 1));
        assert_eq!(diagonal_embed(&delta, &dims).unwrap(), BlockElement::matrix_unit(1, 2, 1, 1));
        assert!(diagonal_embed(&SparseVec::delta((1, 3)), &dims).is_err());
    }

    #[test]
    fn dims_from_formula() {
        let s = ScaleContext::default().scale("exp(k^k)").unwrap();
        let d = DimensionSequence::from_scale(&s, 8).unwrap();
        assert!(d.exact().is_none());
        assert!(d.materializable().is_err());
        let d = DimensionSequence::from_u64(vec![2, 3]).unwrap();
        assert_eq!(d.materializable().unwrap(), &[2, 3]);
        assert!(DimensionSequence::from_u64(vec![1, 0]).is_err());
    }

    #[test]
    fn random_two_sided() {
        let ell = ScaleContext::default().family("pow(k, n)").unwrap();
        let dims = DimensionSequence::from_u64((1..=20).map(|z| 1 + z % 4).collect()).unwrap();
        let r = two_sided_ideal_check(&ell, &dims, 2, 50, 11).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
