//! The dyadic rationals of `[0, 1)` with `σ(l/2^p) = 2^p` and the
//! enumeration `γ(l/2^p) = 2^{p-1} + ⌊l/2⌋ + 1`, `γ(0) = 1`.

use serde::Serialize;

use crate::error::Error;
use crate::scale::ScaleContext;
use crate::summability::{summability_check, SummabilityReport};

pub const P_MAX_LIMIT: u32 = 20;

/// `l / 2^p` in lowest terms: `l` odd below `2^p`, or `0 = 0/2^0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DyadicPoint {
    pub l: u64,
    pub p: u32,
}

impl DyadicPoint {
    pub fn new(l: u64, p: u32) -> Result<DyadicPoint, Error> {
        let ok = if p == 0 { l == 0 } else { l % 2 == 1 && l < 1 << p };
        if !ok || p > 62 {
            return Err(Error::OutOfDomain(format!("{l}/2^{p} is not a reduced dyadic rational in [0, 1)")));
        }
        Ok(DyadicPoint { l, p })
    }

    pub fn sigma(&self) -> u64 {
        1 << self.p
    }

    pub fn gamma(&self) -> u64 {
        if self.p == 0 {
            1
        } else {
            (1 << (self.p - 1)) + self.l / 2 + 1
        }
    }

    /// The point with `γ = n`.
    pub fn from_gamma(n: u64) -> Result<DyadicPoint, Error> {
        if n == 0 {
            return Err(Error::OutOfDomain("gamma starts at 1".into()));
        }
        if n == 1 {
            return Ok(DyadicPoint { l: 0, p: 0 });
        }
        let p = 64 - (n - 1).leading_zeros();
        DyadicPoint::new(2 * (n - 1 - (1 << (p - 1))) + 1, p)
    }

    pub fn value(&self) -> f64 {
        self.l as f64 / self.sigma() as f64
    }
}

/// All points with `p <= p_max`, ordered by `p` then `l`.
pub fn dyadics(p_max: u32) -> Vec<DyadicPoint> {
    let mut out = vec![DyadicPoint { l: 0, p: 0 }];
    for p in 1..=p_max {
        out.extend((1..1u64 << p).step_by(2).map(|l| DyadicPoint { l, p }));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CantorRow {
    pub point: DyadicPoint,
    pub sigma: u64,
    pub gamma: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CantorReport {
    pub p_max: u32,
    pub points: u64,
    pub bijective: bool,
    /// `γ <= σ <= 2γ` at every point.
    pub sandwich: bool,
    /// `Σ 1/σ²` over the points.
    pub inverse_square_sum: f64,
    /// `1 + Σ_{p<=p_max} 2^{p-1}/4^p`.
    pub inverse_square_closed_form: f64,
    /// `{σ^n}` transported along `γ`.
    pub summability: SummabilityReport,
    /// The first few points, for display.
    pub head: Vec<CantorRow>,
}

/// Exhaustive checks for `p <= p_max`, and the summability of `{σ^n}`
/// (through `γ`, `σ` becomes `dyadic(k)`, the least power of two `>= k`).
pub fn cantor_scale(p_max: u32, n_max: usize, max_m: usize) -> Result<CantorReport, Error> {
    if p_max > P_MAX_LIMIT {
        return Err(Error::InvalidArgument(format!("p_max {p_max} exceeds {P_MAX_LIMIT}")));
    }
    let pts = dyadics(p_max);
    let total = 1u64 << p_max;
    let mut seen = vec![false; total as usize];
    let mut bijective = pts.len() as u64 == total;
    let mut sandwich = true;
    let mut inverse_square_sum = 0.0;
    for q in &pts {
        let (g, s) = (q.gamma(), q.sigma());
        match seen.get_mut((g - 1) as usize) {
            Some(slot) if !*slot => *slot = true,
            _ => bijective = false,
        }
        bijective &= DyadicPoint::from_gamma(g).ok() == Some(*q);
        sandwich &= g <= s && s <= 2 * g;
        inverse_square_sum += 1.0 / (s as f64 * s as f64);
    }
    bijective &= seen.iter().all(|&s| s);
    let inverse_square_closed_form = 1.0 + (1..=p_max).map(|p| 0.5f64.powi(p as i32 + 1)).sum::<f64>();
    let family = ScaleContext::default().family("pow(dyadic(k), n)")?.with_label("cantor sigma^n");
    let summability = summability_check(&family, n_max, max_m, total)?;
    let head = pts.iter().take(8).map(|&q| CantorRow { point: q, sigma: q.sigma(), gamma: q.gamma() }).collect();
    Ok(CantorReport {
        p_max,
        points: pts.len() as u64,
        bijective,
        sandwich,
        inverse_square_sum,
        inverse_square_closed_form,
        summability,
        head,
    })
}
