//! Jacobi polynomials `P_k^{(α,β)}`, their normalized form `Q_k = P_k / P_k(1)`,
//! and cosine expansions of `Q_k(cos θ)`.
//!
//! All evaluation goes through the forward three-term recurrence. The
//! normalized recurrence is written directly for `Q_k`, which keeps values
//! bounded by one for catalog parameters and avoids the large `P_k(1)`.

use crate::error::{invalid, Error, Result};
use crate::scalar::{binom_real, from_u64, lit, Real};

/// Jacobi weight exponents `(α, β)`, weight `(1 − x)^α (1 + x)^β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiIndex<F> {
    pub alpha: F,
    pub beta: F,
}

/// Coefficients of `Q_n = (a x + b) Q_{n−1} − c Q_{n−2}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Step<F> {
    pub a: F,
    pub b: F,
    pub c: F,
}

impl<F: Real> JacobiIndex<F> {
    pub fn new(alpha: F, beta: F) -> Result<Self> {
        if !(alpha > -F::one()) || !alpha.is_finite() {
            return Err(invalid("alpha", "must be a finite real > -1"));
        }
        if !(beta > -F::one()) || !beta.is_finite() {
            return Err(invalid("beta", "must be a finite real > -1"));
        }
        Ok(Self { alpha, beta })
    }

    pub(crate) fn new_unchecked(alpha: F, beta: F) -> Self {
        Self { alpha, beta }
    }

    /// Normalized recurrence coefficients for degree `n ≥ 1`.
    pub(crate) fn step(&self, n: u64) -> Step<F> {
        let (a, b) = (self.alpha, self.beta);
        let one = F::one();
        let two = lit::<F>(2.0);
        if n == 1 {
            let slope = (a + b + two) / (two * (a + one));
            return Step {
                a: slope,
                b: one - slope,
                c: F::zero(),
            };
        }
        let nf = from_u64::<F>(n);
        let s = two * nf + a + b;
        let nab = nf + a + b;
        let na = nf + a;
        Step {
            a: (s - one) * s / (two * nab * na),
            b: (s - one) * (a * a - b * b) / (two * nab * (s - two) * na),
            c: (nf + b - one) * s * (nf - one) / (nab * (s - two) * na),
        }
    }

    /// `P_k(1) = binom(k + α, k)`.
    pub fn p_at_one(&self, k: u64) -> F {
        binom_real(from_u64::<F>(k) + self.alpha, from_u64(k))
    }

    /// Standard (unnormalized) Jacobi polynomial by the three-term recurrence.
    pub fn p(&self, k: u64, x: F) -> Result<F> {
        if !(x >= -F::one() && x <= F::one()) {
            return Err(invalid("x", "must lie in [-1, 1]"));
        }
        let (a, b) = (self.alpha, self.beta);
        let (one, two) = (F::one(), lit::<F>(2.0));
        let mut p0 = one;
        if k == 0 {
            return Ok(p0);
        }
        let mut p1 = (a + one) + (a + b + two) * (x - one) / two;
        for n in 2..=k {
            let nf = from_u64::<F>(n);
            let s = two * nf + a + b;
            let lead = two * nf * (nf + a + b) * (s - two);
            let p2 = ((s - one) * (s * (s - two) * x + a * a - b * b) * p1
                - two * (nf + a - one) * (nf + b - one) * s * p0)
                / lead;
            p0 = p1;
            p1 = p2;
        }
        Ok(p1)
    }

    /// Normalized Jacobi polynomial `Q_k(x)`, with `Q_k(1) = 1`.
    pub fn q(&self, k: u64, x: F) -> F {
        let mut q0 = F::one();
        if k == 0 {
            return q0;
        }
        let st = self.step(1);
        let mut q1 = st.a * x + st.b;
        for n in 2..=k {
            let st = self.step(n);
            let q2 = (st.a * x + st.b) * q1 - st.c * q0;
            q0 = q1;
            q1 = q2;
        }
        q1
    }

    /// `Q_k(x)` and its derivative `Q_k'(x)`.
    pub fn q_with_derivative(&self, k: u64, x: F) -> (F, F) {
        if k == 0 {
            return (F::one(), F::zero());
        }
        let st = self.step(1);
        let (mut q0, mut d0) = (F::one(), F::zero());
        let (mut q1, mut d1) = (st.a * x + st.b, st.a);
        for n in 2..=k {
            let st = self.step(n);
            let lin = st.a * x + st.b;
            let q2 = lin * q1 - st.c * q0;
            let d2 = st.a * q1 + lin * d1 - st.c * d0;
            q0 = q1;
            d0 = d1;
            q1 = q2;
            d1 = d2;
        }
        (q1, d1)
    }

    /// `Q_0(x), …, Q_K(x)`.
    pub fn q_table(&self, kmax: usize, x: F) -> Vec<F> {
        let mut out = Vec::with_capacity(kmax + 1);
        out.push(F::one());
        if kmax == 0 {
            return out;
        }
        let st = self.step(1);
        out.push(st.a * x + st.b);
        for n in 2..=kmax {
            let st = self.step(n as u64);
            let v = (st.a * x + st.b) * out[n - 1] - st.c * out[n - 2];
            out.push(v);
        }
        out
    }

    /// `1 − Q_k(cos t)` for `k = 0..=K`, free of the cancellation a direct
    /// subtraction suffers for small `t`.
    pub fn defect_table(&self, kmax: usize, t: F) -> Vec<F> {
        let two = lit::<F>(2.0);
        let x = t.cos();
        let half = (t / two).sin();
        let one_minus_x = two * half * half;
        let mut out = Vec::with_capacity(kmax + 1);
        out.push(F::zero());
        if kmax == 0 {
            return out;
        }
        out.push(self.step(1).a * one_minus_x);
        for n in 2..=kmax {
            let st = self.step(n as u64);
            // 1 − Q_n = a(1 − x) + (a x + b)(1 − Q_{n−1}) − c(1 − Q_{n−2}), using a + b − c = 1
            let v = st.a * one_minus_x + (st.a * x + st.b) * out[n - 1] - st.c * out[n - 2];
            out.push(v);
        }
        out
    }

    /// `Σ_k h_k Q_k(x)` by Clenshaw's backward recurrence.
    pub fn clenshaw(&self, coeffs: &[F], x: F) -> F {
        let kmax = match coeffs.len() {
            0 => return F::zero(),
            1 => return coeffs[0],
            n => n - 1,
        };
        // Q_{n+1} = A_n(x) Q_n + B_n Q_{n−1}, A_n = a_{n+1} x + b_{n+1}, B_n = −c_{n+1}
        let (mut y1, mut y2) = (F::zero(), F::zero());
        let mut next_b = F::zero(); // B_{k+1}
        for k in (1..=kmax).rev() {
            let st = self.step(k as u64 + 1);
            let a_k = st.a * x + st.b;
            let y = coeffs[k] + a_k * y1 + next_b * y2;
            next_b = -st.c;
            y2 = y1;
            y1 = y;
        }
        let st1 = self.step(1);
        coeffs[0] + (st1.a * x + st1.b) * y1 + next_b * y2
    }

    /// Cosine coefficients `c_0..c_k` with `Q_k(cos θ) = Σ_v c_v cos(vθ)`,
    /// extracted by discrete cosine analysis at `4k + 8` Chebyshev angles and
    /// checked by reconstruction.
    pub fn cosine_coeffs(&self, k: u64) -> Result<Vec<F>> {
        self.cosine_coeffs_with_samples(k, 4 * k as usize + 8)
    }

    /// As [`Self::cosine_coeffs`] with an explicit sample count (`> k`).
    pub fn cosine_coeffs_with_samples(&self, k: u64, samples: usize) -> Result<Vec<F>> {
        if samples as u64 <= k {
            return Err(invalid("samples", "must exceed the degree"));
        }
        let n = from_u64::<F>(samples as u64);
        let pi = F::PI();
        let half = lit::<F>(0.5);
        let thetas: Vec<F> = (0..samples)
            .map(|j| pi * (from_u64::<F>(j as u64) + half) / n)
            .collect();
        let values: Vec<F> = thetas.iter().map(|&th| self.q(k, th.cos())).collect();
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        for v in 0..=k {
            let vf = from_u64::<F>(v);
            let acc: F = thetas
                .iter()
                .zip(&values)
                .map(|(&th, &f)| f * (vf * th).cos())
                .sum();
            let scale = if v == 0 { F::one() } else { lit(2.0) };
            coeffs.push(scale * acc / n);
        }

        let tol = lit::<F>(1e-10).max(F::epsilon() * lit(1e3) * from_u64(k + 1));
        let grid = 4 * samples;
        let mut residual = F::zero();
        for i in 0..=grid {
            let th = pi * from_u64::<F>(i as u64) / from_u64(grid as u64);
            let recon: F = coeffs
                .iter()
                .enumerate()
                .map(|(v, &c)| c * (from_u64::<F>(v as u64) * th).cos())
                .sum();
            residual = residual.max((recon - self.q(k, th.cos())).abs());
        }
        if residual > tol {
            return Err(Error::ReconstructionResidual {
                degree: k,
                residual: residual.to_f64().unwrap_or(f64::NAN),
                tolerance: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(coeffs)
    }
}

/// Cosine coefficients of `Q_0, …, Q_K` computed together.
///
/// Multiplication by `x = cos θ` shifts frequencies by ±1, so the three-term
/// recurrence runs directly on coefficient vectors at O(K²) total cost.
#[derive(Debug, Clone)]
pub struct CosineTable<F> {
    kmax: usize,
    data: Vec<F>,
}

impl<F: Real> CosineTable<F> {
    pub fn new(idx: &JacobiIndex<F>, kmax: usize) -> Self {
        let mut data = Vec::with_capacity((kmax + 1) * (kmax + 2) / 2);
        data.push(F::one());
        let half = lit::<F>(0.5);
        let mut shifted = vec![F::zero(); kmax + 2];
        for n in 1..=kmax {
            let st = idx.step(n as u64);
            let prev_off = (n - 1) * n / 2;
            // x · Q_{n−1} in the cosine basis
            shifted.iter_mut().for_each(|v| *v = F::zero());
            for v in 0..n {
                let c = data[prev_off + v];
                if v == 0 {
                    shifted[1] = shifted[1] + c;
                } else {
                    shifted[v - 1] = shifted[v - 1] + half * c;
                    shifted[v + 1] = shifted[v + 1] + half * c;
                }
            }
            for v in 0..=n {
                let own = if v < n { data[prev_off + v] } else { F::zero() };
                let older = if n >= 2 && v + 1 < n {
                    data[(n - 2) * (n - 1) / 2 + v]
                } else {
                    F::zero()
                };
                data.push(st.a * shifted[v] + st.b * own - st.c * older);
            }
        }
        Self { kmax, data }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// Coefficients `c_0..c_k` of `Q_k(cos θ)`.
    pub fn row(&self, k: usize) -> &[F] {
        let off = k * (k + 1) / 2;
        &self.data[off..off + k + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{catalog, catalog_sample};
    use approx::assert_relative_eq;

    fn idx(a: f64, b: f64) -> JacobiIndex<f64> {
        JacobiIndex::new(a, b).unwrap()
    }

    #[test]
    fn low_degree_closed_forms() {
        let j = idx(1.0, 0.0);
        for &x in &[-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert_eq!(j.p(0, x).unwrap(), 1.0);
            assert_relative_eq!(j.p(1, x).unwrap(), 1.5 * x + 0.5, epsilon = 1e-15);
        }
        assert_relative_eq!(idx(0.0, 0.0).p(4, 1.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(idx(0.0, 0.0).q(2, 0.0), -0.5, epsilon = 1e-15);
        assert!(j.p(3, 1.5).is_err());
    }

    #[test]
    fn q_is_p_over_p_at_one() {
        let j = idx(2.5, 0.5);
        for k in 0..30 {
            for &x in &[-0.9, -0.1, 0.4, 0.95] {
                let p = j.p(k, x).unwrap() / j.p_at_one(k);
                assert_relative_eq!(j.q(k, x), p, epsilon = 1e-12, max_relative = 1e-10);
            }
            assert_relative_eq!(j.q(k, 1.0), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn table_clenshaw_and_derivative_agree_with_pointwise() {
        let j = idx(1.0, 0.0);
        let x = 0.37;
        let tab = j.q_table(40, x);
        for (k, v) in tab.iter().enumerate() {
            assert_relative_eq!(*v, j.q(k as u64, x), epsilon = 1e-14);
        }
        let coeffs: Vec<f64> = (0..=40).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let direct: f64 = coeffs.iter().zip(&tab).map(|(h, q)| h * q).sum();
        assert_relative_eq!(j.clenshaw(&coeffs, x), direct, epsilon = 1e-13);
        let h = 1e-6;
        let (_, d) = j.q_with_derivative(12, x);
        let fd = (j.q(12, x + h) - j.q(12, x - h)) / (2.0 * h);
        assert_relative_eq!(d, fd, max_relative = 1e-7);
    }

    #[test]
    fn defect_matches_subtraction_and_stays_positive() {
        let j = idx(3.0, 1.0);
        let t = 0.3;
        let d = j.defect_table(50, t);
        let q = j.q_table(50, t.cos());
        for k in 0..=50 {
            assert_relative_eq!(d[k], 1.0 - q[k], epsilon = 1e-13);
        }
        let tiny = j.defect_table(5, 1e-6);
        assert!(tiny[1..].iter().all(|&v| v > 0.0 && v < 1e-9));
    }

    #[test]
    fn q_bounded_by_one_for_catalog() {
        for id in catalog_sample() {
            let p = catalog::<f64>(id).jacobi();
            for i in 0..=2000 {
                let x = -1.0 + 2.0 * i as f64 / 2000.0;
                let tab = p.q_table(256, x);
                assert!(tab.iter().all(|v| v.abs() <= 1.0 + 1e-12), "{id} x={x}");
            }
        }
    }

    #[test]
    fn cosine_coefficients_examples() {
        assert_eq!(idx(0.0, 0.0).cosine_coeffs(0).unwrap(), vec![1.0]);
        let c = idx(0.0, 0.0).cosine_coeffs(1).unwrap();
        assert_relative_eq!(c[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(c[1], 1.0, epsilon = 1e-15);
        // Legendre P_2(cos θ) = (1 + 3 cos 2θ)/4
        let c = idx(0.0, 0.0).cosine_coeffs(2).unwrap();
        assert_relative_eq!(c[0], 0.25, epsilon = 1e-14);
        assert_relative_eq!(c[1], 0.0, epsilon = 1e-14);
        assert_relative_eq!(c[2], 0.75, epsilon = 1e-14);
        assert!(idx(0.0, 0.0).cosine_coeffs_with_samples(5, 3).is_err());
    }

    #[test]
    fn frequency_recurrence_matches_dct() {
        for id in catalog_sample() {
            let j = catalog::<f64>(id).jacobi();
            let table = CosineTable::new(&j, 64);
            for k in [0usize, 1, 2, 7, 31, 64] {
                let dct = j.cosine_coeffs(k as u64).unwrap();
                for (a, b) in table.row(k).iter().zip(&dct) {
                    assert!((a - b).abs() < 1e-12, "{id} k={k}");
                }
                assert_relative_eq!(table.row(k).iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn chebyshev_case_is_pure_cosine() {
        // α = β = −1/2: Q_k(cos θ) = cos kθ
        let j = idx(-0.5, -0.5);
        for k in 0..20u64 {
            let th: f64 = 0.731;
            assert_relative_eq!(j.q(k, th.cos()), (k as f64 * th).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_index() {
        assert!(JacobiIndex::new(-1.0_f64, 0.0).is_err());
        assert!(JacobiIndex::new(0.0_f64, f64::NAN).is_err());
    }
}
