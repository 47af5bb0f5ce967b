//! Weighted `ℓ¹` and sup norms on `c_f(X)` and the ideal inequality of the
//! pointwise algebra.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Error;
use crate::logvalue::{LogSum, LogValue};
use crate::scale::{Scale, ScaleFamily};
use crate::sparse::{FinSuppVector, SparseVec};

fn magnitude(z: Complex64) -> LogValue {
    LogValue::from_f64(z.norm()).expect("finite entries")
}

/// `Σ_x σ_n(x) |φ(x)|`.
pub fn norm_l1(phi: &FinSuppVector, sigma: &ScaleFamily, n: usize) -> Result<LogValue, Error> {
    weighted_l1(phi, &sigma.member(n)?)
}

/// `sup_x σ_n(x) |φ(x)|`.
pub fn norm_sup(phi: &FinSuppVector, sigma: &ScaleFamily, n: usize) -> Result<LogValue, Error> {
    weighted_sup(phi, &sigma.member(n)?)
}

pub fn weighted_l1(phi: &FinSuppVector, s: &Scale) -> Result<LogValue, Error> {
    let mut acc = LogSum::new();
    for (x, z) in phi.iter() {
        acc.push(s.eval(x)? * magnitude(z));
    }
    Ok(acc.total())
}

pub fn weighted_sup(phi: &FinSuppVector, s: &Scale) -> Result<LogValue, Error> {
    let mut best = LogValue::ZERO;
    for (x, z) in phi.iter() {
        best = best.max(s.eval(x)? * magnitude(z));
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    L1,
    Sup,
}

/// `‖φ‖_n` for `n = 0..=n_max`.
pub fn norm_profile(phi: &FinSuppVector, sigma: &ScaleFamily, n_max: usize, kind: NormKind) -> Result<Vec<LogValue>, Error> {
    (0..=n_max)
        .map(|n| match kind {
            NormKind::L1 => norm_l1(phi, sigma, n),
            NormKind::Sup => norm_sup(phi, sigma, n),
        })
        .collect()
}

pub fn pointwise_mul(f: &FinSuppVector, g: &FinSuppVector) -> FinSuppVector {
    f.pointwise_mul(g)
}

/// Random finitely supported vector: support size uniform in `1..=20`,
/// positions uniform in `1..=k`, complex Gaussian values.
pub fn random_vector(rng: &mut ChaCha8Rng, k: u64) -> FinSuppVector {
    let size = rng.random_range(1..=20usize);
    (0..size)
        .map(|_| {
            let x = rng.random_range(1..=k);
            let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            (x, z)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealRow {
    pub n: usize,
    pub worst_l1: f64,
    pub worst_sup: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealReport {
    pub family: String,
    pub seed: u64,
    pub trials: usize,
    pub prefix: u64,
    pub rows: Vec<IdealRow>,
    pub passed: bool,
}

/// Worst `‖fg‖_n / (‖f‖_n ‖g‖_∞)` over random pairs, for both norms.
pub fn ideal_inequality_check(
    sigma: &ScaleFamily,
    n_max: usize,
    trials: usize,
    k: u64,
    seed: u64,
) -> Result<IdealReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = (0..=n_max).map(|n| sigma.member(n)).collect::<Result<Vec<_>, _>>()?;
    let mut rows: Vec<IdealRow> = (0..=n_max).map(|n| IdealRow { n, worst_l1: 0.0, worst_sup: 0.0 }).collect();
    for _ in 0..trials {
        let f = random_vector(&mut rng, k);
        let g = random_vector(&mut rng, k);
        let fg = f.pointwise_mul(&g);
        let g_inf = LogValue::from_f64(g.sup_abs()).expect("finite");
        for (row, s) in rows.iter_mut().zip(&members) {
            let q1 = weighted_l1(&fg, s)?.checked_div(weighted_l1(&f, s)? * g_inf);
            let qs = weighted_sup(&fg, s)?.checked_div(weighted_sup(&f, s)? * g_inf);
            row.worst_l1 = row.worst_l1.max(q1.map_or(0.0, |q| q.to_f64()));
            row.worst_sup = row.worst_sup.max(qs.map_or(0.0, |q| q.to_f64()));
        }
    }
    let passed = rows.iter().all(|r| r.worst_l1 <= 1.0 + 1e-9 && r.worst_sup <= 1.0 + 1e-9);
    Ok(IdealReport { family: sigma.label().to_string(), seed, trials, prefix: k, rows, passed })
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierDemo {
    pub order: u32,
    pub grid: usize,
    /// `sup_k |k^i φ̂(k)|`.
    pub lhs: f64,
    /// Grid maximum of `|∂^i φ|`.
    pub rhs: f64,
    /// Lipschitz bound on how far the grid maximum can undershoot the true one.
    pub grid_error: f64,
    pub holds: bool,
}

/// Compares the Fourier-side seminorm of a trigonometric polynomial with a
/// grid estimate of `sup |∂^i φ|` on the circle.
pub fn fourier_seminorm_demo(phi_hat: &SparseVec<i64>, order: u32, grid: usize) -> Result<FourierDemo, Error> {
    let max_freq = phi_hat.support().map(|k| k.unsigned_abs()).max().unwrap_or(0);
    if (grid as u64) < 4 * max_freq.max(1) {
        return Err(Error::InvalidArgument(format!("grid {grid} below 4 x max frequency {max_freq}")));
    }
    let i = order as i32;
    // coefficients of ∂^i φ: (ik)^i φ̂(k)
    let deriv: Vec<(f64, Complex64)> = phi_hat
        .iter()
        .map(|(k, c)| (k as f64, Complex64::new(0.0, k as f64).powi(i) * c))
        .collect();
    let lhs = deriv.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let h = std::f64::consts::TAU / grid as f64;
    let mut rhs: f64 = 0.0;
    for j in 0..grid {
        let theta = j as f64 * h;
        let v: Complex64 = deriv.iter().map(|&(k, c)| c * Complex64::from_polar(1.0, k * theta)).sum();
        rhs = rhs.max(v.norm());
    }
    let lipschitz: f64 = deriv.iter().map(|(k, c)| k.abs() * c.norm()).sum();
    let grid_error = lipschitz * h / 2.0;
    let holds = lhs <= rhs + grid_error + 1e-12 * lhs.max(1.0);
    Ok(FourierDemo { order, grid, lhs, rhs, grid_error, holds })
}
