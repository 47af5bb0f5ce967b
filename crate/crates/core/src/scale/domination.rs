//! Domination `τ ≲ σ` and equivalence of scales, certified on a finite prefix.
//!
//! Finite data cannot prove an asymptotic bound. The rule used here: walk the
//! prefix in order keeping the running maximum `M` of `τ/σ`; the verdict is
//! "dominated" when `M` does not increase (beyond tolerance) anywhere in the
//! last quarter of the points, and "refuted by trend" otherwise. The constant
//! is the final `M`, so `τ(x) <= M·σ(x)` holds at every evaluated point.

use serde::Serialize;

use crate::error::Error;
use crate::logvalue::LogValue;

use super::{Index, Prefix, Scale, ScaleFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominationVerdict {
    DominatedWithConstant,
    RefutedByTrend,
}

/// A point where the running maximum rose.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendPoint {
    pub index: Index,
    pub running_max: LogValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub verdict: DominationVerdict,
    pub constant: LogValue,
    pub trend: Vec<TrendPoint>,
    pub points: usize,
    /// Position (0-based) where the final quarter of the prefix starts.
    pub tail_start: usize,
}

impl DominationReport {
    pub fn dominated(&self) -> bool {
        self.verdict == DominationVerdict::DominatedWithConstant
    }
}

/// Applies the stabilization rule to `(index, ratio)` pairs in prefix order.
pub(crate) fn stabilization<I>(ratios: I) -> DominationReport
where
    I: IntoIterator<Item = (Index, LogValue)>,
{
    let mut trend: Vec<TrendPoint> = Vec::new();
    let mut max = LogValue::ZERO;
    let mut last_rise = 0usize;
    let mut count = 0usize;
    for (pos, (index, r)) in ratios.into_iter().enumerate() {
        count += 1;
        if pos == 0 {
            max = r;
            trend.push(TrendPoint { index, running_max: r });
            continue;
        }
        if r > max {
            if !r.approx_le(&max) {
                last_rise = pos;
            }
            max = r;
            trend.push(TrendPoint { index, running_max: r });
        }
    }
    let tail_start = count.saturating_sub(count.div_ceil(4));
    let verdict = if count == 0 || last_rise < tail_start.max(1) {
        DominationVerdict::DominatedWithConstant
    } else {
        DominationVerdict::RefutedByTrend
    };
    DominationReport { verdict, constant: max, trend, points: count, tail_start }
}

fn ratio(t: LogValue, s: LogValue) -> LogValue {
    t.checked_div(s).expect("scale values are at least 1")
}

/// `τ ≲ σ` on the prefix.
pub fn dominates(tau: &Scale, sigma: &Scale, prefix: &Prefix) -> Result<DominationReport, Error> {
    let pairs = prefix
        .iter()
        .map(|x| Ok((x, ratio(tau.eval_at(x)?, sigma.eval_at(x)?))))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(stabilization(pairs))
}

#[derive(Clone, Debug, Serialize)]
pub struct Equivalence {
    pub equivalent: bool,
    /// `a <= c_ab · b` on the prefix.
    pub c_ab: LogValue,
    /// `b <= c_ba · a` on the prefix.
    pub c_ba: LogValue,
    pub forward: DominationReport,
    pub backward: DominationReport,
}

pub fn equivalent(a: &Scale, b: &Scale, prefix: &Prefix) -> Result<Equivalence, Error> {
    let forward = dominates(a, b, prefix)?;
    let backward = dominates(b, a, prefix)?;
    Ok(Equivalence {
        equivalent: forward.dominated() && backward.dominated(),
        c_ab: forward.constant,
        c_ba: backward.constant,
        forward,
        backward,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyDominationEntry {
    pub n: usize,
    /// Least `m` with `τ_n ≲ σ_m`, if any `m <= m_max` works.
    pub m: Option<usize>,
    pub constant: Option<LogValue>,
    pub verdict: DominationVerdict,
}

/// For each `n <= n_max`, the least `m <= m_max` with `τ_n ≲ σ_m`.
pub fn family_dominates(
    sigma: &ScaleFamily,
    tau: &ScaleFamily,
    n_max: usize,
    m_max: usize,
    prefix: &Prefix,
) -> Result<Vec<FamilyDominationEntry>, Error> {
    let sigmas = (0..=m_max).map(|m| sigma.member(m)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let t = tau.member(n)?;
        let mut entry = FamilyDominationEntry { n, m: None, constant: None, verdict: DominationVerdict::RefutedByTrend };
        for (m, s) in sigmas.iter().enumerate() {
            let r = dominates(&t, s, prefix)?;
            if r.dominated() {
                entry = FamilyDominationEntry { n, m: Some(m), constant: Some(r.constant), verdict: r.verdict };
                break;
            }
        }
        out.push(entry);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerDomination {
    /// Least `d` with `τ ≲ σ^d`.
    pub d: Option<u32>,
    pub constant: Option<LogValue>,
    /// One report per tried power `1..=d` (or `1..=d_max` when none works).
    pub reports: Vec<DominationReport>,
}

/// Least `d ∈ 1..=d_max` with `τ ≲ σ^d` on the prefix.
pub fn power_domination(tau: &Scale, sigma: &Scale, d_max: u32, prefix: &Prefix) -> Result<PowerDomination, Error> {
    let vals = prefix
        .iter()
        .map(|x| Ok((x, tau.eval_at(x)?, sigma.eval_at(x)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    power_domination_values(&vals, d_max)
}

pub(crate) fn power_domination_values(
    vals: &[(Index, LogValue, LogValue)],
    d_max: u32,
) -> Result<PowerDomination, Error> {
    let mut reports = Vec::new();
    for d in 1..=d_max {
        let r = stabilization(vals.iter().map(|&(x, t, s)| {
            let sd = s.powf(d as f64).expect("finite power");
            (x, ratio(t, sd))
        }));
        let ok = r.dominated();
        let c = r.constant;
        reports.push(r);
        if ok {
            return Ok(PowerDomination { d: Some(d), constant: Some(c), reports });
        }
    }
    Ok(PowerDomination { d: None, constant: None, reports })
}
