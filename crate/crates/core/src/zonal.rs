//! Zonal functions `f(t) = Σ_k h_k Q_k(cos t)` and their norms.
//!
//! Norms use the probability measure proportional to
//! `sin^{2α+1}(t/2) cos^{2β+1}(t/2) dt`, which becomes the Jacobi weight
//! after `x = cos t`. Under the addition-formula normalization the degree-k
//! energy is `s_k = h_k² / d_k`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_jacobi, jacobi_mass, QuadratureRule};
use crate::scalar::{from_u64, lit, pairwise_sum, Real};
use crate::space::SpaceParams;

#[derive(Debug, Clone, PartialEq)]
pub struct ZonalFunction<F> {
    pub space: SpaceParams<F>,
    pub coeffs: Vec<F>,
}

/// Per-degree energies `s_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEnergy<F> {
    pub values: Vec<F>,
}

impl<F: Real> SpectralEnergy<F> {
    pub fn total(&self) -> F {
        pairwise_sum(&self.values)
    }
}

/// Returns the exponent unchanged after checking `p ≥ 1` (∞ allowed).
fn check_p<F: Real>(p: F) -> Result<F> {
    if p.is_nan() || p < F::one() {
        return Err(invalid("p", "must lie in [1, ∞]"));
    }
    Ok(p)
}

impl<F: Real> ZonalFunction<F> {
    pub fn new(space: SpaceParams<F>, coeffs: Vec<F>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("coeffs", "need at least the degree-0 coefficient"));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(invalid("coeffs", format!("non-finite coefficient at degree {k}")));
        }
        Ok(Self { space, coeffs })
    }

    pub fn zero(space: SpaceParams<F>, kmax: usize) -> Self {
        Self {
            space,
            coeffs: vec![F::zero(); kmax + 1],
        }
    }

    pub fn constant(space: SpaceParams<F>, c: F) -> Self {
        Self {
            space,
            coeffs: vec![c],
        }
    }

    /// `c · Q_k(cos t)`.
    pub fn single_mode(space: SpaceParams<F>, k: usize, c: F) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Self { space, coeffs }
    }

    pub fn kmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == F::zero())
    }

    /// `f(t)` for a geodesic distance `t ∈ [0, π]`.
    pub fn evaluate(&self, t: F) -> Result<F> {
        if !(t >= F::zero() && t <= F::PI()) {
            return Err(invalid("t", "geodesic distance must lie in [0, π]"));
        }
        Ok(self.eval_x(t.cos()))
    }

    pub(crate) fn eval_x(&self, x: F) -> F {
        self.space.jacobi().clenshaw(&self.coeffs, x)
    }

    pub fn energies(&self) -> SpectralEnergy<F> {
        let dims = self.space.dims(self.kmax());
        SpectralEnergy {
            values: self
                .coeffs
                .iter()
                .zip(&dims)
                .map(|(h, d)| *h * *h / *d)
                .collect(),
        }
    }

    /// `‖f‖_2` by Parseval.
    pub fn l2_norm_spectral(&self) -> F {
        self.energies().total().sqrt()
    }

    pub fn lp_norm(&self, p: F) -> Result<F> {
        check_p(p)?;
        LpNormer::new(&self.space, self.kmax())?.norm(self, p)
    }

    /// Coefficients scaled by `λ_k^{r/2}`.
    pub fn fractional_derivative(&self, r: F) -> Result<Self> {
        if !(r > F::zero()) || !r.is_finite() {
            return Err(invalid("r", "order must be a positive real"));
        }
        let half_r = r / lit(2.0);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &h)| {
                if k == 0 {
                    F::zero()
                } else {
                    h * self.space.laplace_eigenvalue(k as u64).powf(half_r)
                }
            })
            .collect();
        Ok(Self {
            space: self.space,
            coeffs,
        })
    }

    /// `‖f‖_p + ‖B^r f‖_p`.
    pub fn sobolev_norm(&self, r: F, p: F) -> Result<F> {
        check_p(p)?;
        let d = self.fractional_derivative(r)?;
        if p == lit(2.0) {
            return Ok(self.l2_norm_spectral() + d.l2_norm_spectral());
        }
        let normer = LpNormer::new(&self.space, self.kmax())?;
        Ok(normer.norm(self, p)? + normer.norm(&d, p)?)
    }

    pub fn scale(&self, c: F) -> Self {
        Self {
            space: self.space,
            coeffs: self.coeffs.iter().map(|&h| c * h).collect(),
        }
    }

    /// `a·self + b·other`; the result has the longer truncation.
    pub fn combine(&self, a: F, other: &Self, b: F) -> Result<Self> {
        if self.space.id != other.space.id {
            return Err(Error::SpaceMismatch);
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[F], k: usize| v.get(k).copied().unwrap_or(F::zero());
        Ok(Self {
            space: self.space,
            coeffs: (0..n)
                .map(|k| a * get(&self.coeffs, k) + b * get(&other.coeffs, k))
                .collect(),
        })
    }
}

/// Reusable `L^p` evaluator for zonal functions up to a fixed degree.
#[derive(Debug, Clone)]
pub struct LpNormer<F> {
    rule: QuadratureRule<F>,
    mass: F,
    kmax: usize,
    sup_points: usize,
}

impl<F: Real> LpNormer<F> {
    /// Quadrature of order `max(64, 2K + 16)`, exact for `|f|²`.
    pub fn new(space: &SpaceParams<F>, kmax: usize) -> Result<Self> {
        Self::with_order(space, kmax, 64.max(2 * kmax + 16))
    }

    pub fn with_order(space: &SpaceParams<F>, kmax: usize, order: usize) -> Result<Self> {
        let idx = space.jacobi();
        Ok(Self {
            rule: gauss_jacobi(&idx, order)?,
            mass: jacobi_mass(&idx),
            kmax,
            sup_points: 2048.max(16 * kmax),
        })
    }

    /// Overrides the number of grid points used for `p = ∞`.
    pub fn with_sup_points(mut self, n: usize) -> Self {
        self.sup_points = n.max(2);
        self
    }

    pub fn order(&self) -> usize {
        self.rule.order
    }

    pub fn norm(&self, f: &ZonalFunction<F>, p: F) -> Result<F> {
        check_p(p)?;
        if f.kmax() > self.kmax {
            return Err(Error::TruncationTooShort {
                required: f.kmax(),
                available: self.kmax,
            });
        }
        if p.is_infinite() {
            return Ok(self.sup_norm(f));
        }
        let idx = f.space.jacobi();
        let integral = self.rule.integrate(|x| idx.clenshaw(&f.coeffs, x).abs().powf(p));
        Ok((integral / self.mass).powf(F::one() / p))
    }

    fn sup_norm(&self, f: &ZonalFunction<F>) -> F {
        let n = self.sup_points;
        let pi = F::PI();
        let step = pi / from_u64::<F>((n - 1) as u64);
        let g = |t: F| f.eval_x(t.cos()).abs();
        let samples: Vec<F> = (0..n).map(|i| g(step * from_u64::<F>(i as u64))).collect();
        let mut best = samples.iter().copied().fold(F::zero(), F::max);
        // refine around the leading grid maxima
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| samples[b].partial_cmp(&samples[a]).unwrap_or(std::cmp::Ordering::Equal));
        for &i in order.iter().take(4) {
            let lo = step * from_u64::<F>(i.saturating_sub(1) as u64);
            let hi = (step * from_u64::<F>((i + 1) as u64)).min(pi);
            best = best.max(golden_max(g, lo, hi, 60));
        }
        best
    }
}

/// Maximum of `g` on `[lo, hi]` by golden-section search (unimodal bracket).
pub(crate) fn golden_max<F: Real>(g: impl Fn(F) -> F, lo: F, hi: F, iters: usize) -> F {
    let ratio = lit::<F>(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut best = g(lo).max(g(hi)).max(gc).max(gd);
    for _ in 0..iters {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
            best = best.max(gc);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
            best = best.max(gd);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{catalog_sample, Family};
    use approx::assert_relative_eq;

    fn s2() -> SpaceParams<f64> {
        SpaceParams::new(Family::Sphere, 2).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let c = ZonalFunction::constant(s2(), 3.5);
        assert_eq!(c.evaluate(1.0).unwrap(), 3.5);
        let q1 = ZonalFunction::single_mode(s2(), 1, 1.0);
        assert_relative_eq!(q1.evaluate(0.7).unwrap(), 0.7_f64.cos(), epsilon = 1e-15);
        let f = ZonalFunction::new(s2(), vec![0.3, -1.2, 0.8, 2.0]).unwrap();
        assert_relative_eq!(f.evaluate(0.0).unwrap(), 1.9, epsilon = 1e-14);
        assert!(f.evaluate(4.0).is_err());
    }

    #[test]
    fn constant_has_unit_mass_norm() {
        for id in catalog_sample() {
            let sp = crate::space::catalog::<f64>(id);
            let one = ZonalFunction::constant(sp, 1.0);
            for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
                assert_relative_eq!(one.lp_norm(p).unwrap(), 1.0, epsilon = 1e-10);
            }
            assert_relative_eq!(ZonalFunction::constant(sp, -2.0).lp_norm(3.0).unwrap(), 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn single_mode_sobolev() {
        let sp = s2();
        let f = ZonalFunction::single_mode(sp, 4, 2.0);
        let lam: f64 = 20.0;
        let expect = (1.0 + lam.powf(0.75)) * (1.0 / 9.0_f64).sqrt() * 2.0;
        assert_relative_eq!(f.sobolev_norm(1.5, 2.0).unwrap(), expect, max_relative = 1e-13);
        let q = f.sobolev_norm(1.5, 2.0 + 1e-12).unwrap();
        assert_relative_eq!(q, expect, max_relative = 1e-8);
        assert!(f.lp_norm(0.5).is_err());
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let f = ZonalFunction::constant(s2(), 4.0).fractional_derivative(0.5).unwrap();
        assert!(f.is_zero());
        assert!(ZonalFunction::constant(s2(), 4.0).fractional_derivative(0.0).is_err());
    }

    #[test]
    fn golden_section_finds_peak() {
        let m = golden_max(|x: f64| -(x - 0.3).powi(2), 0.0, 1.0, 80);
        assert!(m.abs() < 1e-14);
    }
}
