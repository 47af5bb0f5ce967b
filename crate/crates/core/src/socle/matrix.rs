//! Small dense square complex matrices.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

const MAX_ITERATIONS: usize = 10_000;
const REL_TOL: f64 = 1e-14;

/// A `p × p` complex matrix, row-major. Indices are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    p: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(p: usize) -> CMatrix {
        CMatrix { p, data: vec![Complex64::default(); p * p] }
    }

    pub fn identity(p: usize) -> CMatrix {
        let mut m = CMatrix::zeros(p);
        for i in 0..p {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// The matrix unit `e_{ij}` (0-based).
    pub fn unit(p: usize, i: usize, j: usize) -> CMatrix {
        let mut m = CMatrix::zeros(p);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn from_fn(p: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> CMatrix {
        let data = (0..p * p).map(|x| f(x / p, x % p)).collect();
        CMatrix { p, data }
    }

    pub fn from_diagonal(d: &[Complex64]) -> CMatrix {
        let mut m = CMatrix::zeros(d.len());
        for (i, &z) in d.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == Complex64::default())
    }

    /// Panics when the sizes differ; callers check shapes first.
    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.p, rhs.p, "matrix sizes differ");
        let p = self.p;
        let mut out = CMatrix::zeros(p);
        for i in 0..p {
            for k in 0..p {
                let a = self.data[i * p + k];
                if a == Complex64::default() {
                    continue;
                }
                let row = &rhs.data[k * p..(k + 1) * p];
                for (o, b) in out.data[i * p..(i + 1) * p].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.p, rhs.p, "matrix sizes differ");
        CMatrix { p: self.p, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.p, rhs.p, "matrix sizes differ");
        CMatrix { p: self.p, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix { p: self.p, data: self.data.iter().map(|a| c * a).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.p, |i, j| self[(j, i)].conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hilbert-Schmidt norm, an upper bound for the operator norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sum_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).sum()
    }

    fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        let p = self.p;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.data[i * p..(i + 1) * p].iter().zip(v).map(|(a, x)| a * x).sum();
        }
    }

    fn apply_adjoint(&self, v: &[Complex64], out: &mut [Complex64]) {
        let p = self.p;
        out.iter_mut().for_each(|o| *o = Complex64::default());
        for (i, x) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(&self.data[i * p..(i + 1) * p]) {
                *o += a.conj() * x;
            }
        }
    }

    /// Closed form for the operator norm when the structure allows one:
    /// at most one nonzero per row and column (matrix units, diagonals), or
    /// a single nonzero row or column.
    pub fn op_norm_closed_form(&self) -> Option<f64> {
        let p = self.p;
        let nz = |i: usize, j: usize| self[(i, j)] != Complex64::default();
        let rows: Vec<usize> = (0..p).map(|i| (0..p).filter(|&j| nz(i, j)).count()).collect();
        let cols: Vec<usize> = (0..p).map(|j| (0..p).filter(|&i| nz(i, j)).count()).collect();
        if rows.iter().all(|&c| c <= 1) && cols.iter().all(|&c| c <= 1) {
            return Some(self.max_abs());
        }
        let l2 = |it: &mut dyn Iterator<Item = Complex64>| it.map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nz_cols: Vec<usize> = (0..p).filter(|&j| cols[j] > 0).collect();
        if nz_cols.len() == 1 {
            let j = nz_cols[0];
            return Some(l2(&mut (0..p).map(|i| self[(i, j)])));
        }
        let nz_rows: Vec<usize> = (0..p).filter(|&i| rows[i] > 0).collect();
        if nz_rows.len() == 1 {
            let i = nz_rows[0];
            return Some(l2(&mut (0..p).map(|j| self[(i, j)])));
        }
        None
    }

    /// Largest singular value. Uses the closed forms when available, else
    /// power iteration on `A*A` from two fixed starting vectors (all ones and
    /// a fixed pseudo-random one), taking the larger Rayleigh quotient. Returns
    /// the iteration count on failure to converge.
    pub fn op_norm(&self) -> Result<f64, usize> {
        if let Some(v) = self.op_norm_closed_form() {
            return Ok(v);
        }
        let p = self.p;
        let ones = vec![Complex64::new(1.0, 0.0); p];
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let scrambled: Vec<Complex64> = (0..p)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                Complex64::new((state >> 11) as f64 / (1u64 << 53) as f64 + 0.5, 0.0)
            })
            .collect();
        let mut best: f64 = 0.0;
        for start in [ones, scrambled] {
            best = best.max(self.power_iteration(start)?);
        }
        Ok(best.sqrt())
    }

    fn power_iteration(&self, mut v: Vec<Complex64>) -> Result<f64, usize> {
        let p = self.p;
        let norm = |x: &[Complex64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let n0 = norm(&v);
        v.iter_mut().for_each(|z| *z /= n0);
        let mut w = vec![Complex64::default(); p];
        let mut u = vec![Complex64::default(); p];
        let mut prev = f64::NAN;
        for it in 1..=MAX_ITERATIONS {
            self.apply(&v, &mut w);
            let lambda = w.iter().map(|z| z.norm_sqr()).sum::<f64>();
            self.apply_adjoint(&w, &mut u);
            let nu = norm(&u);
            if nu == 0.0 || lambda == 0.0 {
                return Ok(lambda);
            }
            if (lambda - prev).abs() <= REL_TOL * lambda {
                return Ok(lambda);
            }
            prev = lambda;
            for (x, y) in v.iter_mut().zip(&u) {
                *x = y / nu;
            }
            if it == MAX_ITERATIONS {
                break;
            }
        }
        Err(MAX_ITERATIONS)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.p + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.p + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn oracle(m: &CMatrix) -> f64 {
        let p = m.dim();
        let d = DMatrix::from_fn(p, p, |i, j| m[(i, j)]);
        d.singular_values().max()
    }

    fn random(rng: &mut ChaCha8Rng, p: usize) -> CMatrix {
        CMatrix::from_fn(p, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn matrix_unit_relations() {
        let p = 3;
        for (i, j, k, l) in itertools_product(p) {
            let prod = CMatrix::unit(p, i, j).mul(&CMatrix::unit(p, k, l));
            let want = if j == k { CMatrix::unit(p, i, l) } else { CMatrix::zeros(p) };
            assert_eq!(prod, want);
        }
    }

    fn itertools_product(p: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..p {
            for j in 0..p {
                for k in 0..p {
                    for l in 0..p {
                        out.push((i, j, k, l));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn closed_forms() {
        assert_eq!(CMatrix::unit(4, 1, 2).op_norm().unwrap(), 1.0);
        let d = CMatrix::from_diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, -3.0)]);
        assert_eq!(d.op_norm().unwrap(), 3.0);
        let col = CMatrix::from_fn(9, |_, j| if j == 0 { Complex64::new(1.0, 0.0) } else { Complex64::default() });
        assert_eq!(col.op_norm().unwrap(), 3.0);
        assert_eq!(CMatrix::zeros(3).op_norm().unwrap(), 0.0);
    }

    #[test]
    fn all_ones_block() {
        let m = CMatrix::from_fn(5, |_, _| Complex64::new(1.0, 0.0));
        assert_relative_eq!(m.op_norm().unwrap(), 5.0, max_relative = 1e-12);
    }

    #[test]
    fn matches_svd_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [2, 3, 5, 8, 16, 40] {
            for _ in 0..5 {
                let m = random(&mut rng, p);
                assert_relative_eq!(m.op_norm().unwrap(), oracle(&m), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn adjoint_and_c_star_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random(&mut rng, 6);
        assert_eq!(m.adjoint().adjoint(), m);
        let n = m.op_norm().unwrap();
        assert_relative_eq!(m.adjoint().mul(&m).op_norm().unwrap(), n * n, max_relative = 1e-10);
    }
}
