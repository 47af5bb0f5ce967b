//! Growth of a dimension sequence: `ℓ_min`/`ℓ_max`, the three equivalent
//! growth conditions, the block enumeration of `X`, and reorderings that
//! repair or preserve growth.

use std::sync::Arc;

use serde::Serialize;

use crate::error::Error;
use crate::logvalue::{LogSum, LogValue};
use crate::scale::domination::power_domination_values;
use crate::scale::{DominationVerdict, Enumeration, Expr, Index, Scale};

use super::block::DimensionSequence;

/// `z_1, z_2, ...`: the prefix `1..=K` listed in `ϑ`-order.
fn theta_order(theta: &Enumeration, k: usize) -> Result<Vec<u64>, Error> {
    let mut order = vec![0u64; k];
    for z in 1..=k as u64 {
        let t = theta.forward(z)?;
        if t > k as u64 {
            return Err(Error::NotBijective(format!(
                "{} maps {z} to {t}, outside the prefix 1..={k}",
                theta.name()
            )));
        }
        order[(t - 1) as usize] = z;
    }
    Ok(order)
}

/// Prefix sums in `ϑ`-order: `(ℓ_min(z), ℓ_max(z))` for `z = 1..=K`, with
/// `ℓ_min(z_1) = 1`.
pub fn ell_min_max_values(p: &DimensionSequence, theta: &Enumeration) -> Result<(Vec<LogValue>, Vec<LogValue>), Error> {
    let k = p.len();
    let order = theta_order(theta, k)?;
    let mut lo = vec![LogValue::ZERO; k];
    let mut hi = vec![LogValue::ZERO; k];
    let mut acc = LogSum::new();
    for (pos, &z) in order.iter().enumerate() {
        let before = acc.total();
        acc.push(p.values()[(z - 1) as usize]);
        lo[(z - 1) as usize] = if pos == 0 { LogValue::ONE } else { before };
        hi[(z - 1) as usize] = acc.total();
    }
    Ok((lo, hi))
}

/// `ℓ_min` and `ℓ_max` as table scales on `1..=K`.
pub fn ell_min_max(p: &DimensionSequence, theta: &Enumeration) -> Result<(Scale, Scale), Error> {
    let (lo, hi) = ell_min_max_values(p, theta)?;
    Ok((
        Scale::from_expr(Expr::Table(lo.into())).with_label("ell_min"),
        Scale::from_expr(Expr::Table(hi.into())).with_label("ell_max"),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthCondition {
    /// Least `d` with the left side `≲ ℓ_min^d`.
    pub d: Option<u32>,
    pub constant: Option<LogValue>,
    pub verdict: DominationVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub prefix: usize,
    pub d_max: u32,
    /// `𝔭 ≲ ℓ_min`
    pub dims: GrowthCondition,
    /// `ϑ𝔭 ≲ ℓ_min`
    pub theta_dims: GrowthCondition,
    /// `ℓ_max ≲ ℓ_min`
    pub ell_max: GrowthCondition,
    pub consistent: bool,
    pub holds: bool,
}

/// Runs the three growth conditions, each read as domination by a power of
/// `ℓ_min`, walking the prefix in `ϑ`-order.
pub fn growth_condition_check(p: &DimensionSequence, theta: &Enumeration, d_max: u32) -> Result<GrowthReport, Error> {
    let k = p.len();
    let order = theta_order(theta, k)?;
    let (lo, hi) = ell_min_max_values(p, theta)?;
    let run = |lhs: &dyn Fn(u64) -> LogValue| -> Result<GrowthCondition, Error> {
        let vals: Vec<(Index, LogValue, LogValue)> = order
            .iter()
            .map(|&z| (Index::Exact(z), lhs(z), lo[(z - 1) as usize]))
            .collect();
        let r = power_domination_values(&vals, d_max)?;
        Ok(GrowthCondition {
            d: r.d,
            constant: r.constant,
            verdict: if r.d.is_some() { DominationVerdict::DominatedWithConstant } else { DominationVerdict::RefutedByTrend },
        })
    };
    let pz = |z: u64| p.values()[(z - 1) as usize];
    let dims = run(&pz)?;
    let theta_dims = run(&|z| LogValue::from_u64(theta.forward(z).expect("checked")) * pz(z))?;
    let ell_max = run(&|z| hi[(z - 1) as usize])?;
    let verdicts = [dims.d.is_some(), theta_dims.d.is_some(), ell_max.d.is_some()];
    let consistent = verdicts.iter().all(|&v| v == verdicts[0]);
    Ok(GrowthReport { prefix: k, d_max, holds: consistent && verdicts[0], consistent, dims, theta_dims, ell_max })
}

/// `γ(z_k, i, j) = p_{z_1}^2 + ... + p_{z_{k-1}}^2 + (i-1) + (j-1) p_{z_k} + 1`.
#[derive(Clone, Debug)]
pub struct BlockEnumeration {
    order: Vec<u64>,
    /// position of each `z` in `ϑ`-order
    position: Vec<usize>,
    dims: Vec<u64>,
    offsets: Vec<u64>,
    total: u64,
}

impl BlockEnumeration {
    pub fn new(dims: &[u64], theta: &Enumeration) -> Result<BlockEnumeration, Error> {
        let order = theta_order(theta, dims.len())?;
        let mut position = vec![0usize; dims.len()];
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0u64;
        for (pos, &z) in order.iter().enumerate() {
            position[(z - 1) as usize] = pos;
            offsets.push(total);
            let p = dims[(z - 1) as usize];
            let sq = p.checked_mul(p).ok_or_else(|| Error::Overflow(format!("p_{z}^2")))?;
            total = total.checked_add(sq).ok_or_else(|| Error::Overflow("sum of p_z^2".into()))?;
        }
        Ok(BlockEnumeration { order, position, dims: dims.to_vec(), offsets, total })
    }

    /// `Σ p_z^2`, the size of the enumerated set.
    pub fn total(&self) -> u64 {
        self.total
    }

    fn dim(&self, z: u64) -> Result<u64, Error> {
        self.dims
            .get((z as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::OutOfDomain(format!("block {z}")))
    }

    pub fn forward(&self, z: u64, i: u64, j: u64) -> Result<u64, Error> {
        let p = self.dim(z)?;
        if !(1..=p).contains(&i) || !(1..=p).contains(&j) {
            return Err(Error::OutOfDomain(format!("({z}, {i}, {j}) with p_{z} = {p}")));
        }
        Ok(self.offsets[self.position[(z - 1) as usize]] + (i - 1) + (j - 1) * p + 1)
    }

    pub fn inverse(&self, n: u64) -> Result<(u64, u64, u64), Error> {
        if n == 0 || n > self.total {
            return Err(Error::OutOfDomain(format!("{n} outside 1..={}", self.total)));
        }
        let pos = self.offsets.partition_point(|&o| o < n) - 1;
        let z = self.order[pos];
        let p = self.dims[(z - 1) as usize];
        let r = n - self.offsets[pos] - 1;
        Ok((z, r % p + 1, r / p + 1))
    }

    /// First and last value taken on block `z`.
    pub fn block_range(&self, z: u64) -> Result<(u64, u64), Error> {
        let p = self.dim(z)?;
        let o = self.offsets[self.position[(z - 1) as usize]];
        Ok((o + 1, o + p * p))
    }

    /// Visits every `(z, i, j)` and checks that the image is exactly
    /// `1..=Σ p_z^2`, each value once, and that `inverse` undoes `forward`.
    pub fn verify(&self) -> Result<(), Error> {
        let mut seen = vec![false; self.total as usize];
        for z in 1..=self.dims.len() as u64 {
            let p = self.dims[(z - 1) as usize];
            for j in 1..=p {
                for i in 1..=p {
                    let n = self.forward(z, i, j)?;
                    let slot = seen
                        .get_mut((n - 1) as usize)
                        .ok_or_else(|| Error::NotBijective(format!("value {n} beyond {}", self.total)))?;
                    if *slot {
                        return Err(Error::NotBijective(format!("value {n} hit twice")));
                    }
                    *slot = true;
                    if self.inverse(n)? != (z, i, j) {
                        return Err(Error::NotBijective(format!("inverse({n}) != ({z}, {i}, {j})")));
                    }
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(gap) => Err(Error::NotBijective(format!("value {} never hit", gap + 1))),
            None => Ok(()),
        }
    }
}

pub fn gamma_block_enumeration(dims: &[u64], theta: &Enumeration) -> Result<BlockEnumeration, Error> {
    let g = BlockEnumeration::new(dims, theta)?;
    g.verify()?;
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Run {
    pub value: LogValue,
    pub count: LogValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct PaddedSequence {
    pub runs: Vec<Run>,
    /// Copies of the repeated value moved forward in total.
    pub inserted: LogValue,
    pub unchanged: bool,
    pub verified: bool,
}

fn ceil_count(x: LogValue) -> LogValue {
    if x.ln() < 36.0 {
        LogValue::from_f64(x.to_f64().ceil()).expect("finite")
    } else {
        x + LogValue::ONE
    }
}

/// Moves copies of the infinitely repeated value forward so that every other
/// entry is strictly below the sum of everything before it (padding until
/// that sum is at least twice the entry). The result is run-length encoded
/// since the counts can be astronomically large.
pub fn reorder_with_padding(values: &[LogValue], repeated: Option<LogValue>) -> Result<PaddedSequence, Error> {
    let is_rep = |v: &LogValue| repeated.is_some_and(|r| r.approx_eq(v));
    let mut runs: Vec<Run> = Vec::new();
    let mut sum = LogValue::ZERO;
    let mut inserted = LogValue::ZERO;
    let push = |runs: &mut Vec<Run>, value: LogValue, count: LogValue| match runs.last_mut() {
        Some(last) if last.value == value => last.count = last.count + count,
        _ => runs.push(Run { value, count }),
    };
    for (pos, &v) in values.iter().enumerate() {
        if pos > 0 && !is_rep(&v) && !(v < sum && !sum.approx_le(&v)) {
            let r = repeated.ok_or_else(|| {
                Error::Precondition(format!("entry {} = {v} needs padding but no repeated value is declared", pos + 1))
            })?;
            let need = (v * LogValue::from_u64(2)).checked_sub(sum).unwrap_or(LogValue::ZERO);
            let count = ceil_count(need.checked_div(r).expect("repeated value is at least 1"));
            push(&mut runs, r, count);
            sum = sum + count * r;
            inserted = inserted + count;
        }
        push(&mut runs, v, LogValue::ONE);
        sum = sum + v;
    }
    let verified = verify_padding(&runs, repeated);
    Ok(PaddedSequence { unchanged: inserted.is_zero(), runs, inserted, verified })
}

/// Non-repeated entries after the first need `p_k < Σ_{j<k} p_j`; runs of
/// the repeated value need `r <= Σ` at their start.
fn verify_padding(runs: &[Run], repeated: Option<LogValue>) -> bool {
    let mut sum = LogValue::ZERO;
    for (pos, run) in runs.iter().enumerate() {
        if pos > 0 {
            let ok = if repeated.is_some_and(|r| r.approx_eq(&run.value)) {
                run.value.approx_le(&sum)
            } else {
                run.value < sum && !sum.approx_le(&run.value) && run.count == LogValue::ONE
            };
            if !ok {
                return false;
            }
        }
        sum = sum + run.count * run.value;
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct Reordered {
    pub values: Vec<LogValue>,
    /// `order[k]` is the original (1-based) position of `values[k]`.
    pub order: Vec<usize>,
}

/// First `k >= 2` where `p_k <= C (p_1 + ... + p_{k-1})^d` fails.
fn growth_violation(p: &[LogValue], c: LogValue, d: u32) -> Option<usize> {
    let mut acc = LogSum::new();
    for (i, &v) in p.iter().enumerate() {
        if i > 0 {
            let bound = c * acc.total().powf(d as f64).expect("finite");
            if !v.approx_le(&bound) {
                return Some(i + 1);
            }
        }
        acc.push(v);
    }
    None
}

/// Sorts a prefix satisfying `p_k <= C (p_1 + ... + p_{k-1})^d` into
/// nondecreasing order (stable) and re-verifies the inequality with the same
/// `C, d`.
pub fn nondecreasing_reorder(p: &[LogValue], c: LogValue, d: u32) -> Result<Reordered, Error> {
    if let Some(k) = growth_violation(p, c, d) {
        return Err(Error::Precondition(format!("growth with C = {c}, d = {d} fails at k = {k}")));
    }
    let mut order: Vec<usize> = (1..=p.len()).collect();
    order.sort_by(|&a, &b| p[a - 1].cmp(&p[b - 1]));
    let values: Vec<LogValue> = order.iter().map(|&i| p[i - 1]).collect();
    if let Some(k) = growth_violation(&values, c, d) {
        return Err(Error::Precondition(format!(
            "nondecreasing order breaks growth with C = {c}, d = {d} at k = {k}"
        )));
    }
    Ok(Reordered { values, order })
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub total: u64,
    pub bijective: bool,
    /// `σ_min <= γ <= σ_max^2` on every block.
    pub bounds_hold: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub growth: GrowthReport,
    pub standard_schwartz: bool,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub enumeration: Option<BlockEnumeration>,
}

/// Growth check plus, when it holds and the dimensions are machine integers,
/// the block enumeration `γ` with `σ_min <= γ <= σ_max^2` verified.
pub fn standard_schwartz_classify(p: &DimensionSequence, theta: &Arc<Enumeration>, d_max: u32) -> Result<Classification, Error> {
    let growth = growth_condition_check(p, theta, d_max)?;
    if !growth.holds {
        return Ok(Classification { growth, standard_schwartz: false, witness: None, note: None, enumeration: None });
    }
    let Some(dims) = p.exact() else {
        return Ok(Classification {
            growth,
            standard_schwartz: true,
            witness: None,
            note: Some("dimensions are not machine integers; enumeration not materialized".into()),
            enumeration: None,
        });
    };
    let total: Option<u64> = dims.iter().try_fold(0u64, |acc, &x| acc.checked_add(x.checked_mul(x)?));
    if total.is_none_or(|t| t > 100_000_000) {
        return Ok(Classification {
            growth,
            standard_schwartz: true,
            witness: None,
            note: Some("sum of p_z^2 too large to enumerate exhaustively".into()),
            enumeration: None,
        });
    }
    let g = BlockEnumeration::new(dims, theta)?;
    let bijective = g.verify().is_ok();
    let (lo, hi) = ell_min_max_values(p, theta)?;
    let mut bounds_hold = true;
    for z in 1..=dims.len() as u64 {
        let (first, last) = g.block_range(z)?;
        let (l, h) = (lo[(z - 1) as usize], hi[(z - 1) as usize]);
        bounds_hold &= l.approx_le(&LogValue::from_u64(first)) && LogValue::from_u64(last).approx_le(&(h * h));
    }
    Ok(Classification {
        standard_schwartz: bijective && bounds_hold,
        witness: Some(Witness { total: g.total(), bijective, bounds_hold }),
        growth,
        note: None,
        enumeration: Some(g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::ScaleContext;

    fn lv(xs: &[f64]) -> Vec<LogValue> {
        xs.iter().map(|&x| LogValue::from_f64(x).unwrap()).collect()
    }

    fn approx(a: &[LogValue], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, &y)| x.approx_eq(&LogValue::from_f64(y).unwrap()))
    }

    #[test]
    fn prefix_sums() {
        let id = Enumeration::identity();
        let (lo, hi) = ell_min_max_values(&DimensionSequence::from_u64(vec![1, 1, 1, 1]).unwrap(), &id).unwrap();
        assert!(approx(&lo, &[1.0, 1.0, 2.0, 3.0]));
        assert!(approx(&hi, &[1.0, 2.0, 3.0, 4.0]));
        let (lo, hi) = ell_min_max_values(&DimensionSequence::from_u64(vec![2, 3, 4]).unwrap(), &id).unwrap();
        assert!(approx(&lo, &[1.0, 2.0, 5.0]));
        assert!(approx(&hi, &[2.0, 5.0, 9.0]));
        let swap = Enumeration::from_forward("s", vec![2, 1, 3]).unwrap();
        let (lo, _) = ell_min_max_values(&DimensionSequence::from_u64(vec![2, 3, 4]).unwrap(), &swap).unwrap();
        assert!(approx(&lo, &[3.0, 1.0, 5.0]));
    }

    #[test]
    fn growth_examples() {
        let ctx = ScaleContext::default();
        let id = Enumeration::identity();
        for src in ["k", "exp(k)"] {
            let p = DimensionSequence::from_scale(&ctx.scale(src).unwrap(), 200).unwrap();
            let r = growth_condition_check(&p, &id, 12).unwrap();
            assert!(r.holds && r.consistent, "{src}: {r:?}");
        }
        let p = DimensionSequence::from_scale(&ctx.scale("exp(k^k)").unwrap(), 8).unwrap();
        let r = growth_condition_check(&p, &id, 12).unwrap();
        assert!(!r.holds && r.consistent);
        assert_eq!(r.dims.verdict, DominationVerdict::RefutedByTrend);
    }

    #[test]
    fn block_enumeration_formula() {
        let g = gamma_block_enumeration(&[2, 3], &Enumeration::identity()).unwrap();
        assert_eq!(g.total(), 13);
        assert_eq!(g.forward(1, 1, 1).unwrap(), 1);
        assert_eq!(g.forward(2, 2, 3).unwrap(), 12);
        assert_eq!(g.inverse(12).unwrap(), (2, 2, 3));
        let swapped = gamma_block_enumeration(&[2, 3], &Enumeration::from_forward("s", vec![2, 1]).unwrap()).unwrap();
        assert_eq!(swapped.forward(2, 1, 1).unwrap(), 1);
        assert!(BlockEnumeration::new(&[u64::MAX], &Enumeration::identity()).is_err());
    }

    #[test]
    fn padding_sparse_towers() {
        let e = |x: f64| LogValue::exp(x);
        let seq = vec![e(1.0), LogValue::ONE, e(4.0), LogValue::ONE, e(27.0), LogValue::ONE, e(256.0)];
        let r = reorder_with_padding(&seq, Some(LogValue::ONE)).unwrap();
        assert!(r.verified && !r.unchanged);
        assert!(r.inserted.ln() > 256.0);
        let fine = lv(&[1.0, 1.0, 1.0, 2.0, 3.0]);
        let r = reorder_with_padding(&fine, Some(LogValue::ONE)).unwrap();
        assert!(r.unchanged && r.verified);
        let towers: Vec<LogValue> = (1..=5).map(|k| e((k as f64).powi(k))).collect();
        assert!(matches!(reorder_with_padding(&towers, None), Err(Error::Precondition(_))));
    }

    #[test]
    fn sorted_reorder() {
        let two = LogValue::from_f64(2.0).unwrap();
        let r = nondecreasing_reorder(&lv(&[2.0, 1.0, 3.0]), two, 1).unwrap();
        assert!(approx(&r.values, &[1.0, 2.0, 3.0]));
        assert_eq!(r.order, vec![2, 1, 3]);
        let alt: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 1.0 } else { 5.0 }).collect();
        let r = nondecreasing_reorder(&lv(&alt), LogValue::from_f64(5.0).unwrap(), 1).unwrap();
        assert!(r.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(nondecreasing_reorder(&lv(&[1.0, 9.0]), LogValue::ONE, 1).is_err());
    }

    #[test]
    fn classification() {
        let id = Arc::new(Enumeration::identity());
        let p = DimensionSequence::from_u64((1..=30).collect()).unwrap();
        let c = standard_schwartz_classify(&p, &id, 12).unwrap();
        assert!(c.standard_schwartz);
        assert!(c.witness.as_ref().unwrap().bounds_hold);
        let ones = DimensionSequence::from_u64(vec![1; 30]).unwrap();
        let c = standard_schwartz_classify(&ones, &id, 12).unwrap();
        let g = c.enumeration.unwrap();
        assert!((1..=30).all(|z| g.forward(z, 1, 1).unwrap() == z));
    }
}
