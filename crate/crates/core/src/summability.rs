//! Summability of `σ_n/σ_m` (optionally weighted), with symbolic tail bounds.
//!
//! A partial sum over `1..=K` says nothing about convergence on its own. A
//! pair `(n, m)` is *certified* only when the grammar yields an upper bound
//! for the tail `Σ_{k>K}`:
//!
//! - **condensation**: the ratio is provably non-increasing and decays like
//!   `C·k^α` with `α < -1`. Blocks `[B·2^i, B·2^{i+1})`, `B = K+1`, are
//!   bounded by `B·2^i·r(B·2^i)`; the first 60 such terms are evaluated
//!   exactly and the rest summed geometrically from the envelope.
//! - **p-series**: only the envelope `r <= C·k^α`, `α < -1`, is known; the
//!   tail is at most `C·K^{1+α}/(-1-α)`.
//!
//! Without a certificate the verdict comes from the last two complete dyadic
//! blocks of the prefix: a block-sum ratio of at least 0.9 reads as a
//! divergent trend, anything smaller as merely prefix-bounded.

use std::sync::Arc;

use serde::Serialize;

use crate::error::Error;
use crate::logvalue::{LogSum, LogValue};
use crate::scale::domination::{power_domination, stabilization};
use crate::scale::{
    dominates, DominationReport, DominationVerdict, Enumeration, Expr, Index, Monotonicity, Prefix, Scale,
    ScaleFamily,
};

const CONDENSATION_TERMS: u32 = 60;
const TREND_RATIO: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailMethod {
    Condensation,
    PSeries,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummabilityVerdict {
    Certified,
    PrefixBounded,
    RefutedTrend,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummabilityEntry {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "partial_sum_log")]
    pub partial_sum: LogValue,
    #[serde(rename = "tail_bound_log", skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<LogValue>,
    pub method: TailMethod,
    pub verdict: SummabilityVerdict,
}

impl SummabilityEntry {
    /// Partial sum plus tail bound, when certified.
    pub fn total_bound(&self) -> Option<LogValue> {
        self.tail_bound.map(|t| self.partial_sum + t)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SummabilityReport {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    pub prefix: u64,
    pub max_m: usize,
    pub entries: Vec<SummabilityEntry>,
}

impl SummabilityReport {
    pub fn all_certified(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == SummabilityVerdict::Certified)
    }
}

/// Evaluated data for one family on `1..=K`.
struct Table {
    family: ScaleFamily,
    weight: Option<Scale>,
    k: u64,
    /// `ln σ_m(x)` for each member and point.
    members: Vec<Vec<f64>>,
    /// `ln w(x)`; all zeros when unweighted.
    weight_ln: Vec<f64>,
}

impl Table {
    fn new(family: &ScaleFamily, weight: Option<&Scale>, max_m: usize, k: u64) -> Result<Table, Error> {
        if k == 0 {
            return Err(Error::InvalidArgument("empty prefix".into()));
        }
        let mut members = Vec::with_capacity(max_m + 1);
        for m in 0..=max_m {
            let s = family.member(m)?;
            check_domain(&s, k)?;
            members.push((1..=k).map(|x| s.eval(x).map(|v| v.ln())).collect::<Result<Vec<_>, _>>()?);
        }
        let weight_ln = match weight {
            Some(w) => {
                check_domain(w, k)?;
                (1..=k).map(|x| w.eval(x).map(|v| v.ln())).collect::<Result<Vec<_>, _>>()?
            }
            None => vec![0.0; k as usize],
        };
        Ok(Table { family: family.clone(), weight: weight.cloned(), k, members, weight_ln })
    }

    fn ratio_expr(&self, n: usize, m: usize) -> Result<Expr, Error> {
        let sn = self.family.member(n)?;
        let sm = self.family.member(m)?;
        let num = match &self.weight {
            Some(w) => Expr::mul(w.expr().clone(), sn.expr().clone()),
            None => sn.expr().clone(),
        };
        Ok(Expr::ratio(&num, sm.expr()))
    }

    fn entry(&self, n: usize, m: usize) -> Result<SummabilityEntry, Error> {
        let (a, b) = (&self.members[n], &self.members[m]);
        let mut total = LogSum::new();
        let mut blocks: Vec<LogValue> = Vec::new();
        let mut block = LogSum::new();
        let mut next_block = 2u64;
        for x in 1..=self.k {
            let i = (x - 1) as usize;
            let r = LogValue::exp(self.weight_ln[i] + a[i] - b[i]);
            total.push(r);
            if x == next_block {
                blocks.push(block.total());
                block = LogSum::new();
                next_block *= 2;
            }
            block.push(r);
        }
        if self.k + 1 == next_block {
            blocks.push(block.total());
        }
        let partial_sum = total.total();
        let tail = if self.has_finite_domain() { None } else { tail_bound(&self.ratio_expr(n, m)?, self.k) };
        let verdict = match tail {
            Some(_) => SummabilityVerdict::Certified,
            None => trend_verdict(&blocks),
        };
        let (tail_bound, method) = match tail {
            Some((t, method)) => (Some(t), method),
            None => (None, TailMethod::None),
        };
        Ok(SummabilityEntry { n, m, partial_sum, tail_bound, method, verdict })
    }

    fn has_finite_domain(&self) -> bool {
        self.weight.as_ref().and_then(Scale::domain_len).is_some()
            || self.family.member(0).ok().and_then(|s| s.domain_len()).is_some()
    }
}

fn check_domain(s: &Scale, k: u64) -> Result<(), Error> {
    match s.domain_len() {
        Some(len) if len < k => Err(Error::ShapeMismatch(format!(
            "{} is defined on 1..={len} but the prefix has length {k}",
            s.label()
        ))),
        _ => Ok(()),
    }
}

/// Blocks `[1,2), [2,4), ...`; decides from the last two complete ones.
fn trend_verdict(blocks: &[LogValue]) -> SummabilityVerdict {
    if blocks.len() < 3 {
        return SummabilityVerdict::PrefixBounded;
    }
    let last = blocks[blocks.len() - 1];
    let prev = blocks[blocks.len() - 2];
    match last.checked_div(prev) {
        Some(q) if q.ln() >= TREND_RATIO.ln() => SummabilityVerdict::RefutedTrend,
        None if !last.is_zero() => SummabilityVerdict::RefutedTrend,
        _ => SummabilityVerdict::PrefixBounded,
    }
}

/// Upper bound for `Σ_{k>K} r(k)` derived from the grammar, if one exists.
pub fn tail_bound(ratio: &Expr, k: u64) -> Option<(LogValue, TailMethod)> {
    let env = ratio.envelope().upper.filter(|u| u.exponent < -1.0)?;
    let mono = ratio.monotonicity();
    if matches!(mono, Monotonicity::NonIncreasing | Monotonicity::Constant) {
        if let Some(t) = condensation_tail(ratio, k, env.ln_c, env.exponent) {
            return Some((t, TailMethod::Condensation));
        }
    }
    let kk = LogValue::from_u64(k);
    let t = LogValue::exp(env.ln_c + (1.0 + env.exponent) * kk.ln() - (-1.0 - env.exponent).ln());
    Some((t, TailMethod::PSeries))
}

fn condensation_tail(ratio: &Expr, k: u64, ln_c: f64, alpha: f64) -> Option<LogValue> {
    let base = LogValue::from_u64(k + 1);
    let ln2 = std::f64::consts::LN_2;
    let mut acc = LogSum::new();
    for i in 0..CONDENSATION_TERMS {
        let point = match (k + 1).checked_mul(1u64 << i) {
            Some(x) if x < (1u64 << 53) => Index::Exact(x),
            _ => Index::Huge(LogValue::exp(base.ln() + i as f64 * ln2)),
        };
        let r = ratio.eval(point).ok()?;
        acc.push(point.value() * r);
    }
    // Σ_{i>=I} C (B 2^i)^{1+α} = C (B 2^I)^{1+α} / (1 - 2^{1+α})
    let start = base.ln() + CONDENSATION_TERMS as f64 * ln2;
    let rest = ln_c + (1.0 + alpha) * start - (-((1.0 + alpha) * ln2).exp_m1()).ln();
    acc.push(LogValue::exp(rest));
    Some(acc.total())
}

fn validate(n_max: usize, max_m: usize) -> Result<(), Error> {
    if max_m <= n_max {
        return Err(Error::InvalidArgument(format!("max_m = {max_m} must exceed every n (up to {n_max})")));
    }
    Ok(())
}

fn choose(table: &Table, n: usize, max_m: usize) -> Result<SummabilityEntry, Error> {
    let mut bounded: Option<SummabilityEntry> = None;
    let mut last = None;
    for m in n + 1..=max_m {
        let e = table.entry(n, m)?;
        match e.verdict {
            SummabilityVerdict::Certified => return Ok(e),
            SummabilityVerdict::PrefixBounded if bounded.is_none() => bounded = Some(e),
            _ => last = Some(e),
        }
    }
    Ok(bounded.or(last).expect("max_m > n gives at least one candidate"))
}

/// For each `n <= n_max`, the least `m ∈ (n, max_m]` whose ratio sum is
/// certified, else the least prefix-bounded one, else `m = max_m` with a
/// refuted trend.
pub fn summability_check(sigma: &ScaleFamily, n_max: usize, max_m: usize, k: u64) -> Result<SummabilityReport, Error> {
    weighted_check(sigma, None, n_max, max_m, k)
}

/// As [`summability_check`] with weight `p_z^2`.
pub fn p_summability_check(
    ell: &ScaleFamily,
    dims: &Scale,
    n_max: usize,
    max_m: usize,
    k: u64,
) -> Result<SummabilityReport, Error> {
    let w = Scale::from_expr(Expr::pow(dims.expr().clone(), Expr::Const(2.0))).with_label(format!("({})^2", dims.label()));
    weighted_check(ell, Some(&w), n_max, max_m, k)
}

fn weighted_check(
    sigma: &ScaleFamily,
    weight: Option<&Scale>,
    n_max: usize,
    max_m: usize,
    k: u64,
) -> Result<SummabilityReport, Error> {
    validate(n_max, max_m)?;
    let table = Table::new(sigma, weight, max_m, k)?;
    let entries = (0..=n_max).map(|n| choose(&table, n, max_m)).collect::<Result<Vec<_>, _>>()?;
    Ok(SummabilityReport {
        family: sigma.label().to_string(),
        weight: weight.map(|w| w.label().to_string()),
        prefix: k,
        max_m,
        entries,
    })
}

/// The entry for one fixed pair `(n, m)`.
pub fn summability_at(sigma: &ScaleFamily, n: usize, m: usize, k: u64) -> Result<SummabilityEntry, Error> {
    validate(n, m)?;
    Table::new(sigma, None, m, k)?.entry(n, m)
}

#[derive(Clone, Debug, Serialize)]
pub struct SingleScaleReport {
    /// Least `d` with `γ ≲ σ^d`.
    pub d: Option<u32>,
    pub constant: Option<LogValue>,
    pub verdict: DominationVerdict,
    /// `{σ^n}` is summable with `m = n + offset` whenever `d` exists.
    pub summable_offset: Option<u32>,
}

/// Whether some power of `σ` dominates the enumeration `γ` on the prefix.
pub fn single_scale_summable(
    sigma: &Scale,
    gamma: &Arc<Enumeration>,
    d_max: u32,
    prefix: &Prefix,
) -> Result<SingleScaleReport, Error> {
    let g = Scale::enumeration(gamma.clone());
    let p = power_domination(&g, sigma, d_max, prefix)?;
    Ok(SingleScaleReport {
        d: p.d,
        constant: p.constant,
        verdict: if p.d.is_some() { DominationVerdict::DominatedWithConstant } else { DominationVerdict::RefutedByTrend },
        summable_offset: p.d.map(|d| 2 * d),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CondensationResult {
    #[serde(skip)]
    pub enumeration: Enumeration,
    /// `order[j]` is the point listed at position `j + 1`.
    pub order: Vec<u64>,
    /// Least `C` with `σ_n √γ <= C σ_m` on the prefix.
    pub constant: LogValue,
    pub partial_sum: LogValue,
    pub verdict: SummabilityVerdict,
}

/// Sorts `σ_n/σ_m` into non-increasing order (ties by index); the resulting
/// enumeration `γ` satisfies `σ_n √γ <= C σ_m` with `C <= Σ σ_n/σ_m`.
fn sorting_enumeration(sn: &Scale, sm: &Scale, k: u64, name: &str) -> Result<(CondensationResult, Vec<LogValue>), Error> {
    let ratios = (1..=k)
        .map(|x| Ok(sn.eval(x)?.checked_div(sm.eval(x)?).expect("scales are at least 1")))
        .collect::<Result<Vec<LogValue>, Error>>()?;
    let mut order: Vec<u64> = (1..=k).collect();
    order.sort_by(|&a, &b| ratios[(b - 1) as usize].cmp(&ratios[(a - 1) as usize]));
    let enumeration = Enumeration::from_order(name, &order)?;
    let mut constant = LogValue::ZERO;
    for (pos, &x) in order.iter().enumerate() {
        let c = ratios[(x - 1) as usize] * LogValue::from_u64(pos as u64 + 1).sqrt();
        constant = constant.max(c);
    }
    let mut blocks = Vec::new();
    let mut block = LogSum::new();
    let mut next = 2u64;
    for x in 1..=k {
        if x == next {
            blocks.push(block.total());
            block = LogSum::new();
            next *= 2;
        }
        block.push(ratios[(x - 1) as usize]);
    }
    if k + 1 == next {
        blocks.push(block.total());
    }
    let partial_sum: LogValue = ratios.iter().copied().sum();
    let verdict = trend_verdict(&blocks);
    Ok((CondensationResult { enumeration, order, constant, partial_sum, verdict }, ratios))
}

/// The enumeration listing `σ_n/σ_m` in non-increasing order, with its
/// witness constant. Fails when the ratio sum shows a divergent trend.
pub fn condensation_enumeration(sigma_n: &Scale, sigma_m: &Scale, k: u64) -> Result<CondensationResult, Error> {
    let (res, _) = sorting_enumeration(sigma_n, sigma_m, k, "condensation")?;
    if res.verdict == SummabilityVerdict::RefutedTrend {
        return Err(Error::NotSummable(format!(
            "{} / {}: partial sum {} with a non-decaying block trend",
            sigma_n.label(),
            sigma_m.label(),
            res.partial_sum
        )));
    }
    Ok(res)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainLink {
    pub step: usize,
    pub m: usize,
    pub order: Vec<u64>,
    /// `σ_{m_{step-1}} √γ_step <= c σ_{m_step}`.
    pub step_constant: LogValue,
    /// `√(γ_1 ⋯ γ_step) <= c σ_{m_step}`.
    pub chain_constant: LogValue,
    #[serde(skip)]
    pub enumeration: Arc<Enumeration>,
}

/// Builds `γ_1, γ_2, ...` and `m_1 < m_2 < ...` with
/// `σ_{m_{n-1}} √γ_n ≲ σ_{m_n}` and checks `√(γ_1 ⋯ γ_n) ≲ σ_{m_n}`.
pub fn sqrt_standard_chain(sigma: &ScaleFamily, steps: usize, max_m: usize, k: u64) -> Result<Vec<ChainLink>, Error> {
    let prefix = Prefix::Dense(k);
    let mut links: Vec<ChainLink> = Vec::new();
    let mut prev_m = 0usize;
    for step in 1..=steps {
        let prev = sigma.member(prev_m)?;
        let mut found = None;
        for m in prev_m + 1..=max_m {
            let sm = sigma.member(m)?;
            let (res, ratios) = sorting_enumeration(&prev, &sm, k, &format!("gamma{step}"))?;
            // σ_prev(x) √γ(x) / σ_m(x) along the prefix
            let points = (1..=k).map(|x| {
                let g = res.enumeration.forward(x).expect("prefix point");
                (Index::Exact(x), ratios[(x - 1) as usize] * LogValue::from_u64(g).sqrt())
            });
            let check: DominationReport = stabilization(points);
            if check.dominated() {
                found = Some((m, res, check.constant));
                break;
            }
        }
        let (m, res, step_constant) = found.ok_or(Error::ChainStalled { step, max_m })?;
        let g = Arc::new(res.enumeration);
        let mut product = Expr::Enum(g.clone());
        for l in links.iter().rev() {
            product = Expr::mul(Expr::Enum(l.enumeration.clone()), product);
        }
        let root = Scale::from_expr(Expr::sqrt(product));
        let chain = dominates(&root, &sigma.member(m)?, &prefix)?;
        if !chain.dominated() {
            return Err(Error::ChainStalled { step, max_m });
        }
        links.push(ChainLink { step, m, order: res.order, step_constant, chain_constant: chain.constant, enumeration: g });
        prev_m = m;
    }
    Ok(links)
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerSummabilityReport {
    /// Least `d` with `ϑ 𝔭 ≲ ℓ^d`.
    pub d: Option<u32>,
    pub constant: Option<LogValue>,
    /// `m = n + 2d` for the family `{ℓ^n}`.
    pub predicted_offset: Option<u32>,
    /// Weighted sums at the predicted `m` for `n = 0..=n_check`.
    pub cross_check: Vec<SummabilityEntry>,
    /// Every cross-check entry is at least prefix-bounded and its partial
    /// sum stays below `C^2 π^2/6`.
    pub consistent: bool,
}

/// Whether some power of `ℓ` dominates `ϑ 𝔭`, cross-checked against the
/// weighted summability of `{ℓ^n}` at `m = n + 2d`.
pub fn prop63_check(
    ell: &Scale,
    dims: &Scale,
    theta: &Arc<Enumeration>,
    d_max: u32,
    n_check: usize,
    k: u64,
) -> Result<PowerSummabilityReport, Error> {
    let tp = Scale::from_expr(Expr::mul(Expr::Enum(theta.clone()), dims.expr().clone()));
    let pd = power_domination(&tp, ell, d_max, &Prefix::Dense(k))?;
    let Some(d) = pd.d else {
        return Ok(PowerSummabilityReport { d: None, constant: None, predicted_offset: None, cross_check: vec![], consistent: true });
    };
    let c = pd.constant.expect("set with d");
    let family = ScaleFamily::powers(ell);
    let w = Scale::from_expr(Expr::pow(dims.expr().clone(), Expr::Const(2.0)));
    let offset = 2 * d as usize;
    let table = Table::new(&family, Some(&w), n_check + offset, k)?;
    let bound = c * c * LogValue::from_f64(std::f64::consts::PI.powi(2) / 6.0).expect("positive");
    let mut cross_check = Vec::new();
    let mut consistent = true;
    for n in 0..=n_check {
        let e = table.entry(n, n + offset)?;
        consistent &= e.verdict != SummabilityVerdict::RefutedTrend && e.partial_sum.le_within(&bound, 1e-6);
        cross_check.push(e);
    }
    Ok(PowerSummabilityReport { d: Some(d), constant: Some(c), predicted_offset: Some(2 * d), cross_check, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::{standard_family, ScaleContext, StandardVariant};
    use approx::assert_relative_eq;

    fn ctx() -> ScaleContext {
        ScaleContext::default()
    }

    #[test]
    fn powers_of_k_certify_at_n_plus_2() {
        let f = ctx().family("pow(k, n)").unwrap();
        let r = summability_check(&f, 3, 8, 10_000).unwrap();
        for e in &r.entries {
            assert_eq!(e.m, e.n + 2);
            assert_eq!(e.verdict, SummabilityVerdict::Certified);
            assert_eq!(e.method, TailMethod::Condensation);
            let total = e.total_bound().unwrap().to_f64();
            let s = e.partial_sum.to_f64();
            assert!(s < std::f64::consts::PI.powi(2) / 6.0 && total > std::f64::consts::PI.powi(2) / 6.0);
        }
    }

    #[test]
    fn constant_family_is_refuted() {
        let f = ctx().family("exp(k)").unwrap();
        let r = summability_check(&f, 1, 4, 1000).unwrap();
        for e in &r.entries {
            assert_eq!(e.verdict, SummabilityVerdict::RefutedTrend);
            assert_eq!(e.m, 4);
        }
    }

    #[test]
    fn m_must_exceed_n() {
        let f = ctx().family("pow(k, n)").unwrap();
        assert!(summability_check(&f, 3, 3, 10).is_err());
    }

    #[test]
    fn p_series_used_without_monotonicity() {
        let mut c = ctx();
        c.register(Enumeration::from_forward("swap", vec![2, 1, 4, 3]).unwrap());
        let f = c.family("pow(enum(swap), n)").unwrap();
        let e = summability_at(&f, 0, 3, 100).unwrap();
        assert_eq!(e.verdict, SummabilityVerdict::Certified);
        assert_eq!(e.method, TailMethod::PSeries);
    }

    #[test]
    fn table_data_is_only_prefix_bounded() {
        let f = ctx().family("pow(table[1, 4, 9, 16, 25, 36, 49, 64], n)").unwrap();
        let e = summability_at(&f, 0, 1, 8).unwrap();
        assert_eq!(e.verdict, SummabilityVerdict::PrefixBounded);
        assert!(summability_at(&f, 0, 1, 9).is_err());
    }

    #[test]
    fn condensation_tail_is_an_upper_bound() {
        // Σ_{k>K} 1/k^2 is about 1/K
        let r = Expr::pow(Expr::K, Expr::Const(-2.0));
        let (t, m) = tail_bound(&r, 1000).unwrap();
        assert_eq!(m, TailMethod::Condensation);
        let exact: f64 = (1001..2_000_000u64).map(|k| 1.0 / (k as f64).powi(2)).sum::<f64>() + 1.0 / 2e6;
        assert!(t.to_f64() >= exact);
        assert!(t.to_f64() < 2.5 * exact);
    }

    #[test]
    fn single_scale() {
        let id = Arc::new(Enumeration::identity());
        let r = single_scale_summable(&ctx().scale("sqrt(k)").unwrap(), &id, 12, &Prefix::Dense(1000)).unwrap();
        assert_eq!(r.d, Some(2));
        let r = single_scale_summable(&Scale::enumeration(id.clone()), &id, 12, &Prefix::Dense(1000)).unwrap();
        assert_eq!(r.d, Some(1));
        assert_eq!(r.constant, Some(LogValue::ONE));
    }

    #[test]
    fn condensation_sorts_ratios() {
        let one = Scale::constant(1.0);
        let r = condensation_enumeration(&one, &ctx().scale("k^2").unwrap(), 200).unwrap();
        assert!(r.enumeration.is_identity());
        assert_eq!(r.constant, LogValue::ONE);
        assert!(condensation_enumeration(&one, &one, 200).is_err());
    }

    #[test]
    fn chain_for_powers() {
        let f = ctx().family("pow(k, n)").unwrap();
        let links = sqrt_standard_chain(&f, 4, 8, 500).unwrap();
        let ms: Vec<usize> = links.iter().map(|l| l.m).collect();
        assert_eq!(ms, vec![1, 2, 3, 4]);
        assert!(links.iter().all(|l| l.enumeration.is_identity()));
        let flat = ctx().family("exp(k)").unwrap();
        assert!(matches!(sqrt_standard_chain(&flat, 2, 5, 200), Err(Error::ChainStalled { step: 1, .. })));
    }

    #[test]
    fn weighted_summability() {
        let c = ctx();
        let ell = c.family("pow(k*k, n)").unwrap();
        let dims = c.scale("k").unwrap();
        let r = p_summability_check(&ell, &dims, 2, 6, 10_000).unwrap();
        for e in &r.entries {
            assert_eq!(e.m, e.n + 2);
            assert_eq!(e.verdict, SummabilityVerdict::Certified);
            assert_relative_eq!(e.partial_sum.to_f64(), std::f64::consts::PI.powi(2) / 6.0, max_relative = 1e-3);
        }
        let flat = c.family("1").unwrap();
        let r = p_summability_check(&flat, &dims, 0, 3, 1000).unwrap();
        assert_eq!(r.entries[0].verdict, SummabilityVerdict::RefutedTrend);
    }

    #[test]
    fn power_domination_of_theta_p() {
        let c = ctx();
        let id = Arc::new(Enumeration::identity());
        let r = prop63_check(&c.scale("k").unwrap(), &c.scale("k").unwrap(), &id, 12, 2, 5000).unwrap();
        assert_eq!(r.d, Some(2));
        assert!(r.consistent);
        assert!(r.cross_check.iter().all(|e| e.m == e.n + 4));
        let none = prop63_check(&c.scale("1").unwrap(), &c.scale("k").unwrap(), &id, 12, 2, 1000).unwrap();
        assert_eq!(none.d, None);
    }

    #[test]
    fn standard_variants() {
        let ids: Vec<_> = (0..10).map(|_| Arc::new(Enumeration::identity())).collect();
        for (variant, offset) in [(StandardVariant::Plain, 2), (StandardVariant::Squared, 1), (StandardVariant::Sqrt, 3)] {
            let f = standard_family(&ids, variant).unwrap();
            let r = summability_check(&f, 3, 10, 2000).unwrap();
            assert!(r.entries.iter().all(|e| e.m == e.n + offset), "{variant:?}");
        }
    }
}
