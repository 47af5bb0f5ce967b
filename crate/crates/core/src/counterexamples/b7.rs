//! Standard scales are not minimal: an enumeration `γ₂ <= γ₁ + 1` of `ℕ⁺`
//! with `γ₁ = id` not dominated by any power of `γ₂`.
//!
//! With `s_i = ⌈e^{i^i}⌉` (and `s_0 = 1`), `γ₂(1) = 1`,
//! `γ₂(s_{i+1}) = s_i + 1` and `γ₂(k) = k + 1` elsewhere.

use serde::Serialize;

use crate::error::Error;
use crate::logvalue::LogValue;
use crate::scale::domination::power_domination_values;
use crate::scale::Index;

/// Special indices up to `s_6 = ⌈e^{6^6}⌉`, enough for `i <= 5`.
pub const SPECIAL_MAX: u32 = 6;

/// `s_i`: exact while it fits comfortably in `u64`.
pub fn special_point(i: u32) -> Index {
    if i == 0 {
        return Index::Exact(1);
    }
    let e = (i as f64).powi(i as i32);
    if e < 40.0 {
        Index::Exact(e.exp().ceil() as u64)
    } else {
        Index::Huge(LogValue::exp(e))
    }
}

fn succ(x: Index) -> Index {
    match x {
        Index::Exact(v) => Index::Exact(v + 1),
        // s + 1 has the same logarithm as s at double precision
        Index::Huge(v) => Index::Huge(v + LogValue::ONE),
    }
}

/// `γ₂` on an index, given which special point (if any) it is.
fn gamma2(x: Index, specials: &[Index]) -> Index {
    if let Index::Exact(1) = x {
        return x;
    }
    match specials.iter().position(|s| *s == x) {
        Some(i) if i >= 1 => succ(specials[i - 1]),
        _ => succ(x),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct B7Row {
    pub index: Index,
    pub gamma1: Index,
    pub gamma2: Index,
    pub special: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerTrend {
    pub d: u32,
    pub refuted: bool,
    /// `ln(γ₁ / γ₂^d)` at `s_2, ..., s_6`.
    pub log_ratios: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct B7Report {
    pub rows: Vec<B7Row>,
    pub bounded_by_successor: bool,
    pub injective_on_list: bool,
    pub collisions: Vec<Index>,
    pub trends: Vec<PowerTrend>,
    pub refuted_for_all_d: bool,
}

/// The evaluation list: `1..=dense`, then every special point `s_3..s_6`,
/// with its neighbours while they are machine integers.
pub fn sparse_list(dense: u64) -> Vec<Index> {
    let mut out: Vec<Index> = (1..=dense).map(Index::Exact).collect();
    for i in 0..=SPECIAL_MAX {
        let s = special_point(i);
        let around = match s {
            Index::Exact(v) if v > 1 => vec![Index::Exact(v - 1), s, succ(s)],
            Index::Exact(_) => vec![s],
            // s + 1 is indistinguishable from s in the log domain
            Index::Huge(_) => vec![s],
        };
        out.extend(around);
    }
    out.sort();
    out.dedup();
    out
}

/// Builds `γ₂` on `list`, checks `γ₂ <= γ₁ + 1` and injectivity there, and
/// refutes `γ₁ ≲ γ₂^d` for each `d <= d_max` along the special points.
pub fn b7_enumerations(list: &[Index], d_max: u32) -> Result<B7Report, Error> {
    let specials: Vec<Index> = (0..=SPECIAL_MAX).map(special_point).collect();
    if let Some(missing) = specials[1..].iter().find(|s| !list.contains(s)) {
        return Err(Error::InvalidArgument(format!("evaluation list misses the special point {missing}")));
    }
    let rows: Vec<B7Row> = list
        .iter()
        .map(|&x| B7Row { index: x, gamma1: x, gamma2: gamma2(x, &specials), special: specials.contains(&x) })
        .collect();
    let bounded_by_successor = rows.iter().all(|r| r.gamma2.value().approx_le(&(r.gamma1.value() + LogValue::ONE)));
    let mut images: Vec<Index> = rows.iter().map(|r| r.gamma2).collect();
    images.sort();
    let collisions: Vec<Index> = images.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect();
    let along: Vec<(Index, LogValue, LogValue)> =
        specials[2..].iter().map(|&s| (s, s.value(), gamma2(s, &specials).value())).collect();
    let mut trends = Vec::new();
    for d in 1..=d_max {
        let r = power_domination_values(&along, d)?;
        let dominated_at_d = r.reports.last().is_some_and(|rep| rep.dominated());
        trends.push(PowerTrend {
            d,
            refuted: !dominated_at_d,
            log_ratios: along.iter().map(|(_, t, s)| t.ln() - d as f64 * s.ln()).collect(),
        });
    }
    Ok(B7Report {
        refuted_for_all_d: trends.iter().all(|t| t.refuted),
        rows,
        bounded_by_successor,
        injective_on_list: collisions.is_empty(),
        collisions,
        trends,
    })
}
