//! The power-series map `θ_χ(f)(x) = Σ_{r>=1} f(r) χ(x)^r` from the
//! convolution algebra into `c_0(X)`, and the proof that its image misses
//! the Schwartz space of a summable family.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Error;
use crate::logvalue::LogValue;
use crate::scale::domination::stabilization;
use crate::scale::{Index, Scale, ScaleFamily};
use crate::sparse::{FinSuppVector, SparseVec};

/// `(f * g)(r) = Σ_{s=0}^{r} f(s) g(r-s)`, exactly on the supports.
pub fn convolve(f: &SparseVec<u64>, g: &SparseVec<u64>) -> SparseVec<u64> {
    let mut out = SparseVec::new();
    for (s, a) in f.iter() {
        for (t, b) in g.iter() {
            out.set(s + t, out.get(s + t) + a * b);
        }
    }
    out
}

fn check_chi(chi: &[f64]) -> Result<(), Error> {
    match chi.iter().position(|&c| !(c > 0.0 && c < 1.0)) {
        Some(i) => Err(Error::InvalidArgument(format!("chi({}) = {} outside (0, 1)", i + 1, chi[i]))),
        None => Ok(()),
    }
}

fn theta_at(f: &SparseVec<u64>, c: f64) -> Complex64 {
    f.iter().map(|(r, a)| a * c.powi(r as i32)).sum()
}

/// `θ_χ(f)` on `X = {1, ..., chi.len()}`. Requires `f(0) = 0`.
pub fn theta_chi(f: &SparseVec<u64>, chi: &[f64]) -> Result<FinSuppVector, Error> {
    check_chi(chi)?;
    if f.get(0) != Complex64::default() {
        return Err(Error::InvalidArgument("f(0) must vanish".into()));
    }
    if f.support().any(|r| r > i32::MAX as u64) {
        return Err(Error::InvalidArgument("power index too large".into()));
    }
    Ok(chi.iter().enumerate().map(|(i, &c)| (i as u64 + 1, theta_at(f, c))).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct HomomorphismReport {
    pub points: usize,
    pub trials: usize,
    pub seed: u64,
    /// `max ‖θ(f*g) - θ(f)θ(g)‖_∞`
    pub max_error: f64,
    /// `max ‖θ(f)‖_∞ / ‖f‖_1`
    pub max_contraction: f64,
    pub passed: bool,
}

fn random_series(rng: &mut ChaCha8Rng) -> SparseVec<u64> {
    let size = rng.random_range(1..=5usize);
    (0..size)
        .map(|_| (rng.random_range(1..=10u64), Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))))
        .collect()
}

/// Random pairs `f, g` on `1..=10` against distinct random `χ` values.
pub fn theta_homomorphism_check(points: usize, trials: usize, seed: u64) -> Result<HomomorphismReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chi: Vec<f64> = Vec::with_capacity(points);
    while chi.len() < points {
        let c: f64 = rng.random();
        if c > 0.0 && !chi.contains(&c) {
            chi.push(c);
        }
    }
    let (mut max_error, mut max_contraction): (f64, f64) = (0.0, 0.0);
    for _ in 0..trials {
        let (f, g) = (random_series(&mut rng), random_series(&mut rng));
        let (tf, tg) = (theta_chi(&f, &chi)?, theta_chi(&g, &chi)?);
        let lhs = theta_chi(&convolve(&f, &g), &chi)?;
        max_error = max_error.max(lhs.sub(&tf.pointwise_mul(&tg)).sup_abs());
        for (t, s) in [(&tf, &f), (&tg, &g)] {
            max_contraction = max_contraction.max(t.sup_abs() / s.l1_abs());
        }
    }
    Ok(HomomorphismReport {
        points,
        trials,
        seed,
        passed: max_error <= 1e-12 && max_contraction <= 1.0 + 1e-12,
        max_error,
        max_contraction,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainRow {
    pub x: u64,
    /// `σ_d |θ(f)|`
    pub lhs: LogValue,
    /// `σ_d χ^p |f(p)| / 2`
    pub bound: LogValue,
}

#[derive(Clone, Debug, Serialize)]
pub struct B5Report {
    pub chi_inverse: String,
    pub family: String,
    pub d: usize,
    /// First index with `f(p) != 0`.
    pub p: u64,
    pub prefix: u64,
    /// `{x : χ(x) ‖f‖_1 >= |f(p)|/2}` on the prefix.
    pub exceptional: Vec<u64>,
    pub chain_holds: bool,
    /// `σ_d |θ(f)|` refuted bounded by trend.
    pub unbounded: bool,
    /// The chain at `x = 2^j` outside the exceptional set.
    pub samples: Vec<ChainRow>,
}

/// Checks, off the exceptional set, that
/// `σ_d|θ(f)| >= σ_d χ^p (|f(p)| - |Σ_q f(q+p) χ^q|) >= σ_d χ^p (|f(p)| - ‖f‖_1 χ) >= σ_d χ^p |f(p)|/2`,
/// with `χ = 1 / chi_inverse`.
pub fn b5_not_in_schwartz(
    f: &SparseVec<u64>,
    chi_inverse: &Scale,
    sigma: &ScaleFamily,
    d: usize,
    prefix: u64,
) -> Result<B5Report, Error> {
    let (p, fp) = f.iter().next().ok_or_else(|| Error::InvalidArgument("f must be nonzero".into()))?;
    if p == 0 {
        return Err(Error::InvalidArgument("f(0) must vanish".into()));
    }
    let sd = sigma.member(d)?;
    let mut chi = Vec::with_capacity(prefix as usize);
    for x in 1..=prefix {
        chi.push(1.0 / chi_inverse.eval(x)?.to_f64());
    }
    let theta = theta_chi(f, &chi)?;
    let (norm1, fp_abs) = (f.l1_abs(), fp.norm());
    let tail: SparseVec<u64> = f.iter().filter(|&(r, _)| r > p).map(|(r, a)| (r - p, a)).collect();
    let lv = |x: f64| LogValue::from_f64(x.max(0.0)).expect("finite");
    let tol = 1e-12;
    let mut exceptional = Vec::new();
    let mut chain_holds = true;
    let mut hypothesis = Vec::with_capacity(prefix as usize);
    let mut weighted = Vec::with_capacity(prefix as usize);
    let mut samples = Vec::new();
    for x in 1..=prefix {
        let c = chi[(x - 1) as usize];
        let s = sd.eval(x)?;
        let cp = lv(c).powf(p as f64).expect("finite");
        hypothesis.push((Index::Exact(x), s * cp));
        let lhs = s * lv(theta.get(x).norm());
        weighted.push((Index::Exact(x), lhs));
        if c * norm1 >= fp_abs / 2.0 {
            exceptional.push(x);
            continue;
        }
        let steps = [
            lhs.to_f64(),
            (s * cp).to_f64() * (fp_abs - theta_at(&tail, c).norm()),
            (s * cp).to_f64() * (fp_abs - norm1 * c),
            (s * cp).to_f64() * fp_abs / 2.0,
        ];
        chain_holds &= steps.windows(2).all(|w| w[1] <= w[0] * (1.0 + tol) + tol * w[0].abs().max(f64::MIN_POSITIVE));
        if x.is_power_of_two() {
            samples.push(ChainRow { x, lhs, bound: s * cp * lv(fp_abs / 2.0) });
        }
    }
    if stabilization(hypothesis).dominated() {
        return Err(Error::Precondition(format!(
            "sigma_{d} chi^{p} stays bounded on 1..={prefix}; choose a larger d"
        )));
    }
    Ok(B5Report {
        chi_inverse: chi_inverse.label().to_string(),
        family: sigma.label().to_string(),
        d,
        p,
        prefix,
        exceptional,
        chain_holds,
        unbounded: !stabilization(weighted).dominated(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::ScaleContext;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn single_term_is_chi() {
        let chi = [0.5, 0.25, 0.1];
        let t = theta_chi(&SparseVec::delta(1), &chi).unwrap();
        for (i, &x) in chi.iter().enumerate() {
            assert_eq!(t.get(i as u64 + 1), c(x));
        }
        let sq = theta_chi(&convolve(&SparseVec::delta(1), &SparseVec::delta(1)), &chi).unwrap();
        assert_eq!(sq, t.pointwise_mul(&t));
    }

    #[test]
    fn convolution_of_polynomials() {
        // (1 + 2z)(3 + z) = 3 + 7z + 2z^2, shifted by one on each side
        let f = SparseVec::from_pairs([(1, c(1.0)), (2, c(2.0))]);
        let g = SparseVec::from_pairs([(1, c(3.0)), (2, c(1.0))]);
        let h = convolve(&f, &g);
        assert_eq!(h, SparseVec::from_pairs([(2, c(3.0)), (3, c(7.0)), (4, c(2.0))]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(theta_chi(&SparseVec::delta(1), &[0.5, 1.0]).is_err());
        assert!(theta_chi(&SparseVec::delta(0), &[0.5]).is_err());
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        let r = theta_homomorphism_check(50, 100, 4).unwrap();
        assert!(r.passed, "{r:?}");
    }

    fn b5(f: SparseVec<u64>, d: usize) -> Result<B5Report, Error> {
        let ctx = ScaleContext::default();
        let fam = ctx.family("pow(1 + k, n)").unwrap();
        b5_not_in_schwartz(&f, &ctx.scale("1 + k").unwrap(), &fam, d, 2000)
    }

    #[test]
    fn b5_examples() {
        let r = b5(SparseVec::delta(1), 2).unwrap();
        assert!(r.chain_holds && r.unbounded);
        assert_eq!(r.exceptional, vec![1]);
        let r = b5(SparseVec::delta(2), 3).unwrap();
        assert!(r.chain_holds && r.unbounded && r.p == 2);
        let r = b5(SparseVec::from_pairs([(1, c(1.0)), (2, c(-1.0))]), 2).unwrap();
        assert_eq!(r.exceptional, vec![1, 2, 3]);
        assert!(r.chain_holds && r.unbounded);
        let row = r.samples.iter().find(|s| s.x == 1024).unwrap();
        assert_relative_eq!(row.bound.to_f64(), 1025.0 * 1025.0 * (1.0 / 1025.0) / 2.0, max_relative = 1e-12);
        assert!(matches!(b5(SparseVec::delta(2), 2), Err(Error::Precondition(_))));
    }
}
