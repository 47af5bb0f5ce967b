//! Without the growth condition the standard enumeration scale does not give
//! an ideal: `S_K = Σ c_1(k)/√p_k` has C*-norm 1 while
//! `‖S_K T_K‖_n / ‖T_K‖_m` blows up, `T_K = Σ e_{k,11}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::logvalue::{LogSum, LogValue};
use crate::scale::{Enumeration, Scale};
use crate::socle::block::{DimensionSequence, MAX_BLOCK};
use crate::socle::growth::growth_condition_check;
use crate::socle::matrix::CMatrix;

const EXACT_LOOP_MAX: u64 = 1_000_000;

/// `B_0..B_8` with `B_1 = +1/2`.
const BERNOULLI_PLUS: [f64; 9] = [1.0, 0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0];

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Σ_{i=1}^{P} i^n` for `n <= 8` by Faulhaber's formula, with the positive
/// and negative terms summed separately in the log domain.
pub fn faulhaber(p: LogValue, n: u32) -> Option<LogValue> {
    if n > 8 {
        return None;
    }
    let (mut pos, mut neg) = (LogSum::new(), LogSum::new());
    for j in 0..=n {
        let c = binomial(n + 1, j) * BERNOULLI_PLUS[j as usize];
        if c == 0.0 {
            continue;
        }
        let term = LogValue::from_f64(c.abs())? * p.powf((n + 1 - j) as f64)?;
        if c > 0.0 {
            pos.push(term);
        } else {
            neg.push(term);
        }
    }
    pos.total().checked_sub(neg.total())?.checked_div(LogValue::from_u64(n as u64 + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerSumMethod {
    Exact,
    Faulhaber,
    /// Only `P^n <= Σ i^n` is used, so the ratio is a lower bound.
    LowerBound,
}

fn power_sum(p: LogValue, n: u32) -> (LogValue, PowerSumMethod) {
    if let Some(q) = p.to_exact_u64().filter(|&q| q <= EXACT_LOOP_MAX) {
        let mut acc = LogSum::new();
        for i in 1..=q {
            acc.push(LogValue::from_u64(i).powf(n as f64).expect("finite"));
        }
        return (acc.total(), PowerSumMethod::Exact);
    }
    match faulhaber(p, n) {
        Some(s) => (s, PowerSumMethod::Faulhaber),
        None => (p.powf(n as f64).expect("finite"), PowerSumMethod::LowerBound),
    }
}

/// Rounds a dimension up to an integer while it is below `2^53`; beyond
/// that the rounding is invisible at double precision.
fn integer_dim(p: LogValue) -> LogValue {
    if let Some(q) = p.to_exact_u64() {
        return LogValue::from_u64(q);
    }
    if p.ln() < 53.0 * std::f64::consts::LN_2 {
        LogValue::from_f64(p.to_f64().ceil()).expect("finite")
    } else {
        p
    }
}

/// `‖c_1(p)‖_op / √p`, materialized when the block is small enough.
fn column_block_norm(p: LogValue) -> f64 {
    match p.to_exact_u64().filter(|&q| q <= MAX_BLOCK) {
        Some(q) => {
            let q = q as usize;
            let c1 = CMatrix::from_fn(q, |_, j| if j == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() });
            c1.op_norm().expect("closed form") / (q as f64).sqrt()
        }
        None => 1.0,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupRow {
    pub k: u64,
    pub s_norm: LogValue,
    pub t_norm: LogValue,
    /// `‖S_K‖_B`
    pub s_b: f64,
    pub ratio: LogValue,
    /// `p_K^{n-1/2} / (K^{m+1} p_{K-1}^m)`
    pub bound: LogValue,
    pub exceeds_bound: bool,
    pub method: PowerSumMethod,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupReport {
    pub dims: String,
    pub n: u32,
    pub m: u32,
    pub k_max: u64,
    pub rows: Vec<BlowupRow>,
    pub growth_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub exceeds_everywhere: bool,
    pub strictly_increasing: bool,
    pub blowup: bool,
}

/// Ratios for `K = 1..=k_max` with `p_0 = 1`, using the scale
/// `β(k, i, j) = i k p_{k-1} + (j-1) p_k`.
pub fn b1_blowup(dims: &Scale, n: u32, m: u32, k_max: u64) -> Result<BlowupReport, Error> {
    if !(m > n && n >= 1) {
        return Err(Error::InvalidArgument(format!("need m > n >= 1, got n = {n}, m = {m}")));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let raw = DimensionSequence::from_scale(dims, k_max)?;
    let growth = growth_condition_check(&raw, &Enumeration::identity(), 12)?;
    let p: Vec<LogValue> = std::iter::once(LogValue::ONE).chain(raw.values().iter().map(|&v| integer_dim(v))).collect();
    let pw = |x: LogValue, e: f64| x.powf(e).expect("finite");
    let (mut s_acc, mut t_acc) = (LogSum::new(), LogSum::new());
    let mut s_b: f64 = 0.0;
    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let (pk, prev) = (p[k as usize], p[k as usize - 1]);
        let kk = LogValue::from_u64(k);
        let (sum, method) = power_sum(pk, n);
        let coeff = pw(kk, n as f64) * pw(prev, n as f64);
        s_acc.push((coeff * sum).checked_div(pk.sqrt()).expect("p_k >= 1"));
        t_acc.push(pw(kk, m as f64) * pw(prev, m as f64));
        s_b = s_b.max(column_block_norm(pk));
        let (s_norm, t_norm) = (s_acc.total(), t_acc.total());
        let ratio = s_norm.checked_div(t_norm).expect("T_K is nonzero");
        let bound = pw(pk, n as f64 - 0.5)
            .checked_div(pw(kk, m as f64 + 1.0) * pw(prev, m as f64))
            .expect("nonzero");
        // once a term is only bounded, every later partial sum is too
        let method = if rows.last().is_some_and(|r: &BlowupRow| r.method == PowerSumMethod::LowerBound) {
            PowerSumMethod::LowerBound
        } else {
            method
        };
        rows.push(BlowupRow { k, s_norm, t_norm, s_b, ratio, bound, exceeds_bound: bound.approx_le(&ratio), method });
    }
    let exceeds_everywhere = rows.iter().all(|r| r.exceeds_bound);
    let strictly_increasing = rows.windows(2).all(|w| w[1].ratio.ln() > w[0].ratio.ln());
    let warning = growth.holds.then(|| "growth condition holds on the prefix; no blow-up expected".to_string());
    Ok(BlowupReport {
        dims: dims.label().to_string(),
        n,
        m,
        k_max,
        rows,
        growth_holds: growth.holds,
        warning,
        blowup: exceeds_everywhere && strictly_increasing && !growth.holds,
        exceeds_everywhere,
        strictly_increasing,
    })
}
