//! Renormalized seminorms `‖·‖*`, `‖·‖†`, `‖·‖^two` and their `+` variants,
//! computed exactly by per-coordinate or per-block factorization of the
//! supremum over the unit ball of the ambient algebra.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Error;
use crate::logvalue::LogValue;
use crate::scale::{Scale, ScaleFamily};
use crate::schwartz::{random_vector, weighted_sup};
use crate::socle::block::{random_element, socle_norm_op, BlockElement, DimensionSequence};
use crate::socle::matrix::CMatrix;
use crate::sparse::FinSuppVector;

const CONTRACT_TOL: f64 = 1e-6;
const SAMPLE_TOL: f64 = 1e-9;
const GRID: usize = 32;
const GRID_TOL: f64 = 1e-6;

/// A dense ideal with its norm family `‖·‖_n`, `‖·‖_0` the ambient norm.
#[derive(Clone, Debug)]
pub enum Instance {
    /// `c_f(ℕ⁺) ⊂ c_0`, `‖f‖_n = sup σ_n |f|` with `σ_0 = 1`.
    PointwiseC0 { family: ScaleFamily, prefix: u64 },
    /// `c_f ⊂ c_0` with `‖f‖_0 = ‖f‖_∞` and, for `n >= 1`,
    /// `‖f‖_n = sup_k σ(k)^n max(|f_+(k)|, σ(k)^n |f_-(k)|)` over pairs
    /// `(2k, 2k+1)`, `k = 1..=pairs`.
    PairedB2 { sigma: Scale, pairs: u64 },
    /// Finite socle of `⊕ M_{p_z}` with `‖f‖_n = sup_z ℓ_n(z) ‖f(z)‖_op`.
    BlockSocle { family: ScaleFamily, dims: DimensionSequence },
    /// Pointwise norms but the product is identically zero.
    TrivialProduct { family: ScaleFamily, prefix: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Seq(FinSuppVector),
    Block(BlockElement),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    PointwiseC0,
    PairedB2,
    BlockSocle,
    TrivialProduct,
}

fn lv(x: f64) -> LogValue {
    LogValue::from_f64(x).expect("finite nonnegative")
}

fn seq(a: &Element) -> Result<&FinSuppVector, Error> {
    match a {
        Element::Seq(v) => Ok(v),
        Element::Block(_) => Err(Error::ShapeMismatch("expected a sequence, got a block element".into())),
    }
}

fn block(a: &Element) -> Result<&BlockElement, Error> {
    match a {
        Element::Block(b) => Ok(b),
        Element::Seq(_) => Err(Error::ShapeMismatch("expected a block element, got a sequence".into())),
    }
}

/// Pairs `k -> (f(2k), f(2k+1))` of a sequence on `2..`.
fn pairs_of(f: &FinSuppVector) -> Result<Vec<(u64, Complex64, Complex64)>, Error> {
    let mut out: Vec<(u64, Complex64, Complex64)> = Vec::new();
    for x in f.support() {
        if x < 2 {
            return Err(Error::OutOfDomain("index 1 belongs to no pair (2k, 2k+1)".into()));
        }
        let k = x / 2;
        if out.last().is_none_or(|l| l.0 != k) {
            out.push((k, f.get(2 * k), f.get(2 * k + 1)));
        }
    }
    Ok(out)
}

/// Optimum of `s max(1, s) (|a0| r0 + |a1| r1)` over magnitudes in
/// `[0,1]^2`, phases already aligned: a 32x32 grid, then repeated local
/// refinement around the best node until the cell is below `1e-6`.
pub fn paired_star_grid(a0: Complex64, a1: Complex64, s: f64) -> f64 {
    let f = |r0: f64, r1: f64| s * s.max(1.0) * (a0.norm() * r0 + a1.norm() * r1);
    let (mut c0, mut c1) = (0.5, 0.5);
    let mut half = 0.5;
    let mut best = f64::NEG_INFINITY;
    while half > GRID_TOL {
        let step = 2.0 * half / GRID as f64;
        let (lo0, lo1) = (c0 - half, c1 - half);
        for i in 0..=GRID {
            for j in 0..=GRID {
                let r0 = (lo0 + i as f64 * step).clamp(0.0, 1.0);
                let r1 = (lo1 + j as f64 * step).clamp(0.0, 1.0);
                let v = f(r0, r1);
                if v > best {
                    best = v;
                    (c0, c1) = (r0, r1);
                }
            }
        }
        half = step;
    }
    best
}

impl Instance {
    pub fn kind(&self) -> InstanceKind {
        match self {
            Instance::PointwiseC0 { .. } => InstanceKind::PointwiseC0,
            Instance::PairedB2 { .. } => InstanceKind::PairedB2,
            Instance::BlockSocle { .. } => InstanceKind::BlockSocle,
            Instance::TrivialProduct { .. } => InstanceKind::TrivialProduct,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Instance::PointwiseC0 { family, prefix } => format!("pointwise-c0 {} K={prefix}", family.label()),
            Instance::PairedB2 { sigma, pairs } => format!("paired-b2 sigma={} pairs={pairs}", sigma.label()),
            Instance::BlockSocle { family, dims } => format!("block-socle {} blocks={}", family.label(), dims.len()),
            Instance::TrivialProduct { family, prefix } => format!("trivial-product {} K={prefix}", family.label()),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, Error> {
        match self {
            Instance::PointwiseC0 { .. } | Instance::PairedB2 { .. } => Ok(Element::Seq(seq(a)?.pointwise_mul(seq(b)?))),
            Instance::BlockSocle { .. } => Ok(Element::Block(block(a)?.mul(block(b)?)?)),
            Instance::TrivialProduct { .. } => {
                seq(a)?;
                seq(b)?;
                Ok(Element::Seq(FinSuppVector::new()))
            }
        }
    }

    /// The original `‖a‖_n`.
    pub fn norm(&self, a: &Element, n: usize) -> Result<LogValue, Error> {
        match self {
            Instance::PointwiseC0 { family, .. } | Instance::TrivialProduct { family, .. } => {
                weighted_sup(seq(a)?, &family.member(n)?)
            }
            Instance::BlockSocle { family, .. } => socle_norm_op(block(a)?, family, n),
            Instance::PairedB2 { sigma, .. } => {
                let f = seq(a)?;
                if n == 0 {
                    return Ok(lv(f.sup_abs()));
                }
                let mut best = LogValue::ZERO;
                for (k, x, y) in pairs_of(f)? {
                    let s = sigma.eval(k)?.powf(n as f64).expect("finite");
                    best = best.max(s * lv((x + y).norm()).max(s * lv((x - y).norm())));
                }
                Ok(best)
            }
        }
    }

    /// `‖b‖_0`, the ambient Banach norm.
    pub fn ambient_norm(&self, b: &Element) -> Result<LogValue, Error> {
        self.norm(b, 0)
    }

    /// `‖a‖*_n = sup { ‖ab‖_n : ‖b‖_0 <= 1 }`, by factorization.
    pub fn star(&self, a: &Element, n: usize) -> Result<LogValue, Error> {
        match self {
            // each coordinate of b independently in the unit disk
            Instance::PointwiseC0 { .. } => self.norm(a, n),
            // each block of b independently in the op-norm unit ball
            Instance::BlockSocle { .. } => self.norm(a, n),
            Instance::TrivialProduct { .. } => {
                seq(a)?;
                Ok(LogValue::ZERO)
            }
            Instance::PairedB2 { sigma, .. } => {
                let f = seq(a)?;
                if n == 0 {
                    return Ok(lv(f.sup_abs()));
                }
                let mut best = LogValue::ZERO;
                for (k, x, y) in pairs_of(f)? {
                    let s = sigma.eval(k)?.powf(2.0 * n as f64).expect("finite");
                    best = best.max(s * lv(x.norm() + y.norm()));
                }
                Ok(best)
            }
        }
    }

    /// `‖a‖†_n = sup { ‖ba‖_n : ‖b‖_0 <= 1 }`. Every supported instance has
    /// the same factorization on both sides.
    pub fn dagger(&self, a: &Element, n: usize) -> Result<LogValue, Error> {
        self.star(a, n)
    }

    /// `‖a‖^two_n = sup { ‖cab‖_n : ‖c‖_0, ‖b‖_0 <= 1 }`. For the pointwise
    /// instances `cb` sweeps the unit ball; for blocks the outer factors can
    /// be taken as rank-one partial isometries on the top singular pair.
    pub fn two(&self, a: &Element, n: usize) -> Result<LogValue, Error> {
        self.star(a, n)
    }

    pub fn star_plus(&self, a: &Element, n: usize) -> Result<LogValue, Error> {
        Ok(self.star(a, n)?.max(self.norm(a, n)?))
    }

    pub fn dagger_plus(&self, a: &Element, n: usize) -> Result<LogValue, Error> {
        Ok(self.dagger(a, n)?.max(self.norm(a, n)?))
    }

    /// `max(‖a‖^two_n, ‖a‖*_n, ‖a‖†_n, ‖a‖_n)`.
    pub fn two_plus(&self, a: &Element, n: usize) -> Result<LogValue, Error> {
        Ok(self.two(a, n)?.max(self.star(a, n)?).max(self.dagger(a, n)?).max(self.norm(a, n)?))
    }

    /// A random element of the carrier.
    pub fn random_carrier(&self, rng: &mut ChaCha8Rng) -> Result<Element, Error> {
        Ok(match self {
            Instance::PointwiseC0 { prefix, .. } | Instance::TrivialProduct { prefix, .. } => {
                Element::Seq(random_vector(rng, *prefix))
            }
            Instance::PairedB2 { pairs, .. } => {
                let v = random_vector(rng, 2 * pairs);
                Element::Seq(v.iter().map(|(x, z)| (x + 1, z)).collect())
            }
            Instance::BlockSocle { dims, .. } => {
                let d = dims.materializable()?;
                let count = rng.random_range(1..=d.len().min(6));
                Element::Block(random_element(rng, d, count))
            }
        })
    }

    /// A random ambient element with `‖b‖_0 <= 1` supported where `a` is.
    pub fn random_ambient(&self, rng: &mut ChaCha8Rng, a: &Element) -> Result<Element, Error> {
        let radius: f64 = rng.random_range(0.05..=1.0);
        Ok(match a {
            Element::Seq(f) => Element::Seq(
                f.support()
                    .map(|x| {
                        let r = radius * rng.random::<f64>().sqrt();
                        (x, Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU)))
                    })
                    .collect(),
            ),
            Element::Block(f) => {
                let mut out = BlockElement::new();
                for (z, m) in f.blocks() {
                    let p = m.dim();
                    let g = CMatrix::from_fn(p, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
                    // Frobenius dominates the op norm, so ‖b‖_0 <= radius
                    out.insert(z, g.scale(Complex64::new(radius / g.frobenius(), 0.0)));
                }
                Element::Block(out)
            }
        })
    }

    /// A lower bound for `‖a‖*_n` from random unit-ball samples of `b`.
    pub fn sampled_star(&self, a: &Element, n: usize, samples: usize, rng: &mut ChaCha8Rng) -> Result<LogValue, Error> {
        let mut best = LogValue::ZERO;
        for _ in 0..samples {
            let b = self.random_ambient(rng, a)?;
            let b0 = self.ambient_norm(&b)?;
            if let Some(q) = self.norm(&self.mul(a, &b)?, n)?.checked_div(b0) {
                best = best.max(q);
            }
        }
        Ok(best)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ContractRow {
    pub n: usize,
    /// `‖ab‖^{*+}_n / (‖a‖^{*+}_n ‖b‖_0)`
    pub right_star_plus: f64,
    /// `‖ab‖_n / (‖a‖*_n ‖b‖_0)`
    pub half_star: f64,
    /// `‖a₁a₂‖^{*+}_n / (‖a₁‖^{*+}_n ‖a₂‖^{*+}_n)`
    pub submultiplicative: f64,
    /// `‖ba‖^{†+}_n / (‖b‖_0 ‖a‖^{†+}_n)`
    pub left_dagger_plus: f64,
    pub right_two_plus: f64,
    pub left_two_plus: f64,
    /// sampled `‖a‖*_n` over factorized `‖a‖*_n`
    pub sampling: f64,
    /// largest `|‖a‖*_n / ‖a‖_n - 1|`
    pub star_vs_original: f64,
    pub max_star: f64,
}

impl ContractRow {
    fn worst(&self) -> f64 {
        [
            self.right_star_plus,
            self.half_star,
            self.submultiplicative,
            self.left_dagger_plus,
            self.right_two_plus,
            self.left_two_plus,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractReport {
    pub instance: String,
    pub kind: InstanceKind,
    pub seed: u64,
    pub trials: usize,
    pub rows: Vec<ContractRow>,
    pub zeroth_preserved: bool,
    pub monotone: bool,
    pub sampling_sound: bool,
    pub passed: bool,
}

/// `num / den` as `f64`; `0/0 = 0`, `x/0 = ∞`.
fn ratio(num: LogValue, den: LogValue) -> f64 {
    match num.checked_div(den) {
        Some(q) => q.to_f64(),
        None if num.is_zero() => 0.0,
        None => f64::INFINITY,
    }
}

/// Checks the renormalized ideal inequalities with `C_n = 1`, `m_n = n`,
/// submultiplicativity, preservation of `‖·‖_0`, monotonicity in `n`, and
/// that random sampling never beats the factorized supremum.
pub fn verify_renorm_contract(inst: &Instance, n_max: usize, trials: usize, seed: u64) -> Result<ContractReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<ContractRow> = (0..=n_max).map(|n| ContractRow { n, ..Default::default() }).collect();
    let (mut zeroth_preserved, mut monotone) = (true, true);
    for _ in 0..trials {
        let a = inst.random_carrier(&mut rng)?;
        let a2 = inst.random_carrier(&mut rng)?;
        let b = inst.random_ambient(&mut rng, &a)?;
        let b0 = inst.ambient_norm(&b)?;
        let (ab, ba, aa) = (inst.mul(&a, &b)?, inst.mul(&b, &a)?, inst.mul(&a, &a2)?);
        let a0 = inst.norm(&a, 0)?;
        zeroth_preserved &= inst.star_plus(&a, 0)? == a0 && inst.two_plus(&a, 0)? == a0 && inst.dagger_plus(&a, 0)? == a0;
        let mut prev = [LogValue::ZERO; 3];
        for row in rows.iter_mut() {
            let n = row.n;
            let sp = inst.star_plus(&a, n)?;
            let st = inst.star(&a, n)?;
            let tp = inst.two_plus(&a, n)?;
            let dp = inst.dagger_plus(&a, n)?;
            let orig = inst.norm(&a, n)?;
            row.right_star_plus = row.right_star_plus.max(ratio(inst.star_plus(&ab, n)?, sp * b0));
            row.half_star = row.half_star.max(ratio(inst.norm(&ab, n)?, st * b0));
            row.submultiplicative = row.submultiplicative.max(ratio(inst.star_plus(&aa, n)?, sp * inst.star_plus(&a2, n)?));
            row.left_dagger_plus = row.left_dagger_plus.max(ratio(inst.dagger_plus(&ba, n)?, b0 * dp));
            row.right_two_plus = row.right_two_plus.max(ratio(inst.two_plus(&ab, n)?, tp * b0));
            row.left_two_plus = row.left_two_plus.max(ratio(inst.two_plus(&ba, n)?, b0 * tp));
            row.max_star = row.max_star.max(st.to_f64());
            if !orig.is_zero() {
                row.star_vs_original = row.star_vs_original.max((ratio(st, orig) - 1.0).abs());
            }
            let sampled = inst.sampled_star(&a, n, 4, &mut rng)?;
            row.sampling = row.sampling.max(ratio(sampled, st));
            let now = [sp, tp, dp];
            monotone &= prev.iter().zip(&now).all(|(p, c)| p.approx_le(c));
            prev = now;
        }
    }
    let sampling_sound = rows.iter().all(|r| r.sampling <= 1.0 + SAMPLE_TOL);
    let inequalities = rows.iter().all(|r| r.worst() <= 1.0 + CONTRACT_TOL);
    Ok(ContractReport {
        instance: inst.describe(),
        kind: inst.kind(),
        seed,
        trials,
        passed: inequalities && zeroth_preserved && monotone && sampling_sound,
        rows,
        zeroth_preserved,
        monotone,
        sampling_sound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::ScaleContext;
    use approx::assert_relative_eq;

    fn ctx() -> ScaleContext {
        ScaleContext::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn paired() -> Instance {
        Instance::PairedB2 { sigma: ctx().scale("k").unwrap(), pairs: 20 }
    }

    #[test]
    fn paired_closed_form_matches_grid() {
        let inst = paired();
        for k in [1u64, 3, 7] {
            let a = Element::Seq(FinSuppVector::delta(2 * k));
            let want = (k * k) as f64;
            assert_relative_eq!(inst.star(&a, 1).unwrap().to_f64(), want, max_relative = 1e-12);
            assert_relative_eq!(paired_star_grid(c(1.0), c(0.0), k as f64), want, max_relative = 1e-6);
        }
        let (x, y) = (Complex64::new(0.3, -0.4), Complex64::new(-1.2, 0.5));
        let a = Element::Seq(FinSuppVector::from_pairs([(10, x), (11, y)]));
        let grid = paired_star_grid(x, y, 25.0);
        assert_relative_eq!(inst.star(&a, 2).unwrap().to_f64(), grid, max_relative = 1e-6);
    }

    #[test]
    fn paired_original_norm() {
        let inst = paired();
        let plus = Element::Seq(FinSuppVector::from_pairs([(10, c(1.0)), (11, c(1.0))]));
        let minus = Element::Seq(FinSuppVector::from_pairs([(10, c(1.0)), (11, c(-1.0))]));
        assert_relative_eq!(inst.norm(&plus, 1).unwrap().to_f64(), 10.0, max_relative = 1e-12);
        assert_relative_eq!(inst.norm(&minus, 1).unwrap().to_f64(), 50.0, max_relative = 1e-12);
        assert_relative_eq!(inst.norm(&minus, 0).unwrap().to_f64(), 1.0, max_relative = 1e-12);
        let odd = Element::Seq(FinSuppVector::delta(1));
        assert!(inst.norm(&odd, 1).is_err());
    }

    #[test]
    fn trivial_product_star_vanishes() {
        let inst = Instance::TrivialProduct { family: ctx().family("pow(k, n)").unwrap(), prefix: 30 };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = inst.random_carrier(&mut rng).unwrap();
        for n in 0..4 {
            assert!(inst.star(&a, n).unwrap().is_zero());
            assert!(inst.two(&a, n).unwrap().is_zero());
            assert_eq!(inst.star_plus(&a, n).unwrap(), inst.norm(&a, n).unwrap());
        }
    }

    #[test]
    fn block_star_is_original() {
        let dims = DimensionSequence::from_u64(vec![1, 2, 3, 4]).unwrap();
        let inst = Instance::BlockSocle { family: ctx().family("pow(k, n)").unwrap(), dims };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = inst.random_carrier(&mut rng).unwrap();
        let star = inst.star(&a, 2).unwrap();
        assert_eq!(star, inst.norm(&a, 2).unwrap());
        let sampled = inst.sampled_star(&a, 2, 200, &mut rng).unwrap();
        assert!(sampled.approx_le(&star));
        assert!(sampled.to_f64() > 0.3 * star.to_f64());
    }

    #[test]
    fn contracts_hold() {
        let fam = ctx().family("pow(k, n)").unwrap();
        let instances = [
            Instance::PointwiseC0 { family: fam.clone(), prefix: 40 },
            paired(),
            Instance::BlockSocle { family: fam.clone(), dims: DimensionSequence::from_u64(vec![1, 2, 3, 2, 1]).unwrap() },
            Instance::TrivialProduct { family: fam, prefix: 40 },
        ];
        for inst in &instances {
            let r = verify_renorm_contract(inst, 3, 40, 11).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn paired_original_fails_unit_constant() {
        // ‖δ₊ δ₋‖_1 / (‖δ₊‖_1 ‖δ₋‖_0) = σ(k) for the original norm
        let inst = paired();
        let k = 6u64;
        let plus = Element::Seq(FinSuppVector::from_pairs([(2 * k, c(1.0)), (2 * k + 1, c(1.0))]));
        let minus = Element::Seq(FinSuppVector::from_pairs([(2 * k, c(1.0)), (2 * k + 1, c(-1.0))]));
        let num = inst.norm(&inst.mul(&plus, &minus).unwrap(), 1).unwrap();
        let den = inst.norm(&plus, 1).unwrap() * inst.ambient_norm(&minus).unwrap();
        assert_relative_eq!(ratio(num, den), 6.0, max_relative = 1e-12);
        let starred = inst.star_plus(&plus, 1).unwrap() * inst.ambient_norm(&minus).unwrap();
        assert!(inst.star_plus(&minus, 1).unwrap().approx_le(&starred));
    }
}
