//! A dense Banach subalgebra of `c_0` that is not an ideal: the norm
//! `‖f‖_{σ,1} = sup_k σ(k) max(|f_+(k)|, σ(k)|f_-(k)|)` with
//! `f_±(k) = f(2k) ± f(2k+1)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::logvalue::LogValue;
use crate::renorm::{Element, Instance};
use crate::scale::domination::stabilization;
use crate::scale::{Index, Scale};
use crate::sparse::FinSuppVector;

#[derive(Clone, Debug, Serialize)]
pub struct PairRow {
    pub k: u64,
    pub sigma: f64,
    /// `‖δ_{2k}‖_{σ,1}`
    pub delta_even: f64,
    /// `‖δ_{2k+1}‖_{σ,1}`
    pub delta_odd: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    /// `‖δ₊δ₋‖_{σ,1} / (‖δ₊‖_{σ,1} ‖δ₋‖_∞)`
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairAlgebraReport {
    pub sigma: String,
    pub pairs: u64,
    pub rows: Vec<PairRow>,
    /// Largest relative deviation from `σ², σ², 2σ, 2σ², σ`.
    pub max_rel_error: f64,
    pub closed_forms_hold: bool,
    pub ratio_unbounded: bool,
}

fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

/// Evaluates the norm on `δ_{2k}`, `δ_{2k+1}`, `δ_{±,k}` for `k = 1..=pairs`
/// and the failure ratio of the ideal inequality.
pub fn b2_pair_algebra(sigma: &Scale, pairs: u64) -> Result<PairAlgebraReport, Error> {
    let inst = Instance::PairedB2 { sigma: sigma.clone(), pairs };
    let one = Complex64::new(1.0, 0.0);
    let norm = |f: FinSuppVector| -> Result<LogValue, Error> { inst.norm(&Element::Seq(f), 1) };
    let mut rows = Vec::with_capacity(pairs as usize);
    let mut max_rel_error: f64 = 0.0;
    for k in 1..=pairs {
        let s = sigma.eval(k)?.to_f64();
        let plus = FinSuppVector::from_pairs([(2 * k, one), (2 * k + 1, one)]);
        let minus = FinSuppVector::from_pairs([(2 * k, one), (2 * k + 1, -one)]);
        let product = plus.pointwise_mul(&minus);
        let p_norm = norm(plus)?;
        let ratio = norm(product)?.checked_div(p_norm * LogValue::from_f64(minus.sup_abs()).expect("finite"));
        let row = PairRow {
            k,
            sigma: s,
            delta_even: norm(FinSuppVector::delta(2 * k))?.to_f64(),
            delta_odd: norm(FinSuppVector::delta(2 * k + 1))?.to_f64(),
            delta_plus: p_norm.to_f64(),
            delta_minus: norm(minus)?.to_f64(),
            ratio: ratio.expect("nonzero norm").to_f64(),
        };
        for (got, want) in [
            (row.delta_even, s * s),
            (row.delta_odd, s * s),
            (row.delta_plus, 2.0 * s),
            (row.delta_minus, 2.0 * s * s),
            (row.ratio, s),
        ] {
            max_rel_error = max_rel_error.max(rel(got, want));
        }
        rows.push(row);
    }
    let trend = stabilization(rows.iter().map(|r| (Index::Exact(r.k), LogValue::from_f64(r.ratio).expect("finite"))));
    if trend.dominated() {
        return Err(Error::Precondition(format!(
            "{} is not proper on 1..={pairs}; the failure ratio stays bounded",
            sigma.label()
        )));
    }
    Ok(PairAlgebraReport {
        sigma: sigma.label().to_string(),
        pairs,
        rows,
        closed_forms_hold: max_rel_error <= 1e-12,
        max_rel_error,
        ratio_unbounded: true,
    })
}
